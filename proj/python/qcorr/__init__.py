"""Two-qubit correlations, geometric discord and remote state preparation."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
