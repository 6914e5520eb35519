"""Python bindings for the cantor-forge library.

Exact inputs (int, fractions.Fraction) run on rationals; any float switches a call to doubles.
"""

from ._core import *  # noqa: F401,F403
from ._core import CantorError, InputError, OverlapError, BudgetError, CertificateError, NonConvergence

__all__ = [name for name in dir() if not name.startswith("_")]
