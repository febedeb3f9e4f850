"""Bayesian network structure learning with bootstrap edge tests."""

from ._ebnet import *  # noqa: F401,F403
from ._ebnet import Error, FormatError, InvalidArgument  # noqa: F401
