from ._capflow import *  # noqa: F401,F403
from ._capflow import __doc__  # noqa: F401
