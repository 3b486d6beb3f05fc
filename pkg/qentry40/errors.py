"""
qentry40.errors
---------------

Exception types raised by the q-series library.  Every class derives
from ``QSeriesError`` and additionally from the builtin exception a
caller would naturally catch, so ``except ValueError`` keeps working
for domain problems and ``except ZeroDivisionError`` for poles.
"""

from __future__ import annotations


class QSeriesError(Exception):
    """Base class for all qentry40 errors."""


class DomainError(QSeriesError, ValueError):
    """Input lies outside the region where an evaluation is defined.

    Raised for ``|q| >= 1``, precisions below the minimum, violated
    balance conditions, non-convergent series arguments and parameter
    sets that break the annulus required for both boundary values.
    """


class AnnulusError(DomainError):
    """The parameter ``a`` lies outside the annulus where both boundary series converge."""


class PoleError(QSeriesError, ZeroDivisionError):
    """A denominator factor, product or convergent vanished."""


class NonConvergenceError(QSeriesError, RuntimeError):
    """A product or series did not meet its tolerance within ``max_terms``."""


class UnsupportedError(QSeriesError, NotImplementedError):
    """The requested evaluation exists mathematically but is not provided."""


__all__ = [
    "QSeriesError",
    "DomainError",
    "AnnulusError",
    "PoleError",
    "NonConvergenceError",
    "UnsupportedError",
]
