"""Sparse domination and multilinear weights on finite metric measure spaces."""

from ._sparsedom import *  # noqa: F401,F403
from ._sparsedom import oracle, Error, InvalidInput, InfeasibleConstants, BudgetExceeded  # noqa: F401

__version__ = "0.1.0"
