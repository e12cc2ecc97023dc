"""Distribution functions on [0,1] as fixed points of iterated function systems."""

from ._ifsdf import *  # noqa: F401,F403
from ._ifsdf import __doc__  # noqa: F401
