"""Regularised L-functions, period polynomials and rationality checks for
real-analytic and weakly holomorphic modular forms on SL_2(Z)."""

from .numerics import DEFAULT_CONTEXT, PrecisionContext

__version__ = "0.1.0"

__all__ = ["DEFAULT_CONTEXT", "PrecisionContext", "__version__"]
