# -*- coding: utf-8 -*-

from collections import namedtuple

# Developer definition.
Developer = namedtuple("Developer", ("name", "email"))


__all__ = [
    "__packagename__",
    "__version__",
    "__summary__",
    "__author__",
    "__email__",
    "__license__"
]

DEVELOPERS = {
    "maintainers": Developer("decentviab developers",
                             "decentviab-dev@users.noreply.github.com"),
}

__packagename__ = "decentviab"
__version__ = "0.3.0"
__summary__ = ("decentviab: Riccati-based decomposition and decentralized "
               "grid viability kernels for LTI systems")
__keywords__ = ("viability kernel invariance kernel riccati decomposition "
                "reachability safety verification lti grid")
__author__ = DEVELOPERS["maintainers"].name
__email__ = DEVELOPERS["maintainers"].email
__maintainer__ = DEVELOPERS["maintainers"].name
__maintainer_email__ = DEVELOPERS["maintainers"].email
__license__ = "LGPLv3"
