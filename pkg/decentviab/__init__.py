import logging

from .__meta__ import __version__
from .errors import DecentViabError
from .system import LtiSystem
from .riccati import decompose, optimize_delta
from .standard import standard_riccati
from .recursive import recursive_decompose

logging.getLogger(__name__).addHandler(logging.NullHandler())
