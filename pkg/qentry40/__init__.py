"""
qentry40
--------

Arbitrary-precision q-series toolkit for very-well-poised 10phi9 and
8phi7 series, the three-term difference equation they satisfy and the
q-continued fractions that follow from it, together with a seeded
verification harness that checks every identity numerically.

The numerical modules are ``qcore`` (q-shifted factorials),
``hyperq`` (series), ``recurrence`` (coefficients and solutions) and
``contfrac`` (continued fractions and closed forms).  ``verify`` and
``cli`` run and report the checks.
"""

from .contfrac import CFResult, CFSpec, eval_cf, theorem4_rhs, theorem4_spec, watson_theoremA
from .errors import AnnulusError, DomainError, NonConvergenceError, PoleError, QSeriesError, UnsupportedError
from .hyperq import PhiSpec, VwpParams, eval_10phi9, eval_phi_generic, eval_w, eval_wtilde
from .qcore import QContext, qpoch_finite, qpoch_infinite, qpoch_multi
from .recurrence import RecurrenceInstance, coeff_a, coeff_b, x1, x2, x3

__version__ = "0.1.0"

__all__ = [
    "QContext",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_multi",
    "PhiSpec",
    "VwpParams",
    "eval_phi_generic",
    "eval_10phi9",
    "eval_w",
    "eval_wtilde",
    "RecurrenceInstance",
    "coeff_a",
    "coeff_b",
    "x1",
    "x2",
    "x3",
    "CFSpec",
    "CFResult",
    "eval_cf",
    "theorem4_spec",
    "theorem4_rhs",
    "watson_theoremA",
    "QSeriesError",
    "DomainError",
    "AnnulusError",
    "PoleError",
    "NonConvergenceError",
    "UnsupportedError",
]
