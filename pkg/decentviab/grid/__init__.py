from .controlbox import ControlBox
from .gridbox import GridBox
from .gridset import GridSet, volume_fraction
