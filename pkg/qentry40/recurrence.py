"""
recurrence.py
-------------

The second order difference equation

    X_{n+1} - a_n X_n + b_n X_{n-1} = 0

satisfied by the terminating balanced 10phi9 family, together with its
closed-form coefficients, the two explicit solutions ``x1`` and ``x2``,
the minimal combination ``x3 = W_2 x1 - W_1 x2`` and helpers for the
large-n behaviour of the solutions.

A ``RecurrenceInstance`` fixes the six parameters and the branch of
``sqrt(s)`` used by the half-integer powers in ``a_n`` and by the
prefactor ``q^{-n^2/2 + n} / s^{n/2}``.  When ``s = q^m`` the branch is
``sqrt(s) = q^{m/2}`` so that ``s^{n/2} = q^{mn/2}``; otherwise the
principal root is used unless an explicit root is supplied.

Exceptional values ``s = q`` and ``s = q^2`` make some coefficients
0/0 at small ``n``.  Those points are resolved by a two-point
Richardson limit along one of two paths:

* ``"n"``: continue the formula in ``n`` (``q^n = exp(n log q)``) and let
  the index tend to the integer;
* ``"s"``: keep ``n`` fixed and let ``s = q^m (1 + delta)`` tend to ``q^m``
  by rescaling ``f``.

The two paths agree for ``a_0`` at ``s = q`` but differ for ``b_1`` at
``s = q`` (the ``s`` path is twice the ``n`` path) and for ``a_0`` at
``s = q^2``.  Continued fractions built from these coefficients must
say which path they use.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Any, Callable, List, Optional, Sequence, Tuple

try:
    import numpy as np
except ImportError as e:
    raise RuntimeError("numpy is required for decay-rate fits. Please install numpy") from e

from .errors import AnnulusError, DomainError, PoleError, UnsupportedError
from .hyperq import VwpParams, eval_w, phi10
from .qcore import QContext, qpoch_infinite_detail, richardson_limit

logger = logging.getLogger("qentry40.recurrence")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _formatter = logging.Formatter("%(asctime)s %(levelname)s: %(message)s")
    _handler.setFormatter(_formatter)
    logger.addHandler(_handler)
    logger.setLevel(logging.INFO)

PATH_INDEX = "n"
PATH_PARAMETER = "s"
LIMIT_PATHS = (PATH_INDEX, PATH_PARAMETER)
EXCEPTIONAL_EXPONENTS = (1, 2)
#: gaps below this are treated as this when fitting decay rates
GAP_FLOOR = 1e-300


class SingularPoint(PoleError):
    """A closed-form expression hit a vanishing denominator factor."""


@dataclass(frozen=True)
class RecurrenceInstance:
    """Parameters of the difference equation plus the ``sqrt(s)`` branch.

    :param params: The six free parameters.
    :param s_exponent: ``m`` when ``s = q^m``; needed by ``x2``.
    :param sqrt_s: Explicit square root of ``s`` overriding the default branch.
    """

    params: VwpParams
    s_exponent: Optional[int] = None
    sqrt_s: Optional[Any] = None

    def __post_init__(self) -> None:
        ctx = self.ctx
        if self.sqrt_s is not None:
            root = ctx.num(self.sqrt_s)
            object.__setattr__(self, "sqrt_s", root)
            if not ctx.is_negligible((root * root - self.s) / self.s):
                raise DomainError("sqrt_s does not square to s")
        if self.s_exponent is not None:
            target = ctx.qpow(self.s_exponent)
            if not ctx.is_negligible((self.s - target) / target):
                raise DomainError(f"s = a^3 q^3/(bcdef) is not q^{self.s_exponent}")

    @classmethod
    def from_exponent(cls, ctx: QContext, a: Any, b: Any, c: Any, d: Any, e: Any, m: int) -> "RecurrenceInstance":
        """Instance with ``s = q^m``, solving for ``f``."""
        return cls(VwpParams.with_s(ctx, a, b, c, d, e, ctx.qpow(m)), s_exponent=int(m))

    @property
    def ctx(self) -> QContext:
        return self.params.ctx

    @property
    def s(self) -> Any:
        return self.params.s

    @property
    def root_s(self) -> Any:
        if self.sqrt_s is not None:
            return self.sqrt_s
        if self.s_exponent is not None:
            return self.ctx.qpow(self.ctx.mp.mpf(self.s_exponent) / 2)
        return self.ctx.sqrt(self.s)

    @property
    def exceptional(self) -> bool:
        return self.s_exponent in EXCEPTIONAL_EXPONENTS

    def s_half_power(self, n: Any) -> Any:
        """``s^{n/2}`` on the branch of ``root_s``."""
        if self.s_exponent is not None and self.sqrt_s is None:
            return self.ctx.qpow(self.ctx.mp.mpf(self.s_exponent) * n / 2)
        return self.ctx.power(self.root_s, n)

    def image(self) -> "RecurrenceInstance":
        """Instance after ``x -> q/x`` on all parameters; ``s -> q^4/s``."""
        m = None if self.s_exponent is None else 4 - self.s_exponent
        return RecurrenceInstance(self.params.image(), s_exponent=m, sqrt_s=self.ctx.q ** 2 / self.root_s)

    def perturbed(self, delta: Any) -> "RecurrenceInstance":
        """Instance with ``s`` replaced by ``s (1 + delta)`` through ``f``."""
        ctx = self.ctx
        scale = 1 + ctx.num(delta)
        params = replace(self.params, f=self.params.f / scale)
        return RecurrenceInstance(params, s_exponent=None, sqrt_s=self.root_s * ctx.sqrt(scale))


@dataclass(frozen=True)
class SolutionValue:
    """One value of a recurrence solution; ``kind`` is 1, 2 or 3."""

    n: int
    value: Any
    kind: int


# ------------------------------------------------------------------
# Coefficients
#
def _nonzero(factor: Any, ctx: QContext, what: str) -> Any:
    if ctx.is_negligible(factor):
        raise SingularPoint(f"{what} vanishes")
    return factor


def _coeff_a_raw(inst: RecurrenceInstance, n: Any) -> Any:
    ctx = inst.ctx
    q = ctx.q
    p = inst.params
    a = p.a
    s = inst.s
    root = inst.root_s
    sa = s / a
    qn = ctx.qpow(n)
    qh = ctx.qpow(ctx.mp.mpf(1) / 2)
    xs = p.others

    t1 = (1 - s * qn / q) * (1 - sa * qn / q) * (1 - sa * qn / (q * q))
    for x in xs:
        t1 *= 1 - a / x * qn * q
    t1 *= qh / (qn * root) / _nonzero(1 - s * qn * qn, ctx, "1 - s q^{2n}")

    t2 = (1 - qn) * (1 - a * qn) * (1 - a * qn * q)
    for x in xs:
        t2 *= 1 - x * sa * qn / (q * q)
    t2 *= qh * q / (qn * root) / _nonzero(1 - s * qn * qn / (q * q), ctx, "1 - s q^{2n-2}")

    t3 = root / a * qn / qh * (1 - s * qn * qn / q) * (1 - sa / (q * q))
    for x in xs:
        t3 *= 1 - x

    den = (
        _nonzero(1 - s * qn * qn / q, ctx, "1 - s q^{2n-1}")
        * _nonzero(1 - sa * qn / (q * q), ctx, "1 - (s/a) q^{n-2}")
        * _nonzero(1 - a * qn * q, ctx, "1 - a q^{n+1}")
    )
    return (t1 + t2 + t3) / den


def _coeff_b_raw(inst: RecurrenceInstance, n: Any) -> Any:
    ctx = inst.ctx
    q = ctx.q
    p = inst.params
    a = p.a
    s = inst.s
    sa = s / a
    qn = ctx.qpow(n)
    num = q ** 3 / (qn * qn * s) * (1 - qn) * (1 - s * qn / (q * q))
    for x in p.others:
        num *= (1 - a / x * qn) * (1 - x * sa * qn / (q * q))
    s2n = s * qn * qn
    den = (
        _nonzero(1 - s2n / q, ctx, "1 - s q^{2n-1}")
        * _nonzero(1 - s2n / (q * q), ctx, "1 - s q^{2n-2}") ** 2
        * _nonzero(1 - s2n / q ** 3, ctx, "1 - s q^{2n-3}")
    )
    return num / den


def _resolve(
    raw: Callable[[RecurrenceInstance, Any], Any],
    inst: RecurrenceInstance,
    n: Any,
    path: str,
    label: str,
) -> Any:
    if path not in LIMIT_PATHS:
        raise DomainError(f"unknown limit path {path!r}; expected one of {LIMIT_PATHS}")
    try:
        return raw(inst, n)
    except SingularPoint as exc:
        if not inst.exceptional:
            raise PoleError(f"singular coefficient {label}_{n}: {exc}") from exc
    logger.debug(f"{label}_{n} at s = q^{inst.s_exponent}: resolving by the {path}-limit")
    if path == PATH_INDEX:
        return richardson_limit(lambda h: raw(inst, n + h), inst.ctx)
    return richardson_limit(lambda h: raw(inst.perturbed(h), n), inst.ctx)


def coeff_a(inst: RecurrenceInstance, n: Any, path: str = PATH_INDEX) -> Any:
    """Coefficient ``a_n`` of the difference equation.

    :param inst: The recurrence instance.
    :param n: Index; integers use exact powers, other reals ``exp(n log q)``.
        Negative values are accepted (the symmetry check needs them).
    :param path: Limit path used when ``n`` hits a 0/0 point at ``s = q, q^2``.
    :raises PoleError: singular point on a non-exceptional instance.
    """
    return _resolve(_coeff_a_raw, inst, n, path, "a")


def coeff_b(inst: RecurrenceInstance, n: Any, path: str = PATH_INDEX) -> Any:
    """Coefficient ``b_n``; ``b_0 = 0`` for generic ``s``."""
    return _resolve(_coeff_b_raw, inst, n, path, "b")


# ------------------------------------------------------------------
# Explicit solutions
#
def prefactor(inst: RecurrenceInstance, n: Any) -> Any:
    """``q^{-n^2/2 + n} / s^{n/2}``, shared by both explicit solutions."""
    return inst.ctx.qpow(-n * n / 2 + n) / inst.s_half_power(n)


def _product(args: Sequence[Any], ctx: QContext) -> Tuple[Any, bool]:
    value = ctx.one
    vanishing = False
    for x in args:
        detail = qpoch_infinite_detail(x, ctx)
        value *= detail.value
        vanishing = vanishing or detail.vanishing
    return value, vanishing


def _x1_raw(inst: RecurrenceInstance, n: Any, phi: Optional[Any] = None) -> Any:
    ctx = inst.ctx
    q = ctx.q
    p = inst.params
    a = p.a
    s = inst.s
    qn = ctx.qpow(n)
    top, _ = _product([s * qn * qn / q, a * qn * q], ctx)
    bottom, vanishing = _product([s * qn / q, s / a * qn / q] + [a / x * qn * q for x in p.others], ctx)
    if vanishing:
        raise SingularPoint("denominator product of x1 vanishes")
    if phi is None:
        phi = phi10(ctx, a, p.b, p.c, p.d, p.e, p.f, s * qn / q, 1 / qn)
    return prefactor(inst, n) * top / bottom * phi


def x1(inst: RecurrenceInstance, n: int) -> Any:
    """First explicit solution, a rescaled terminating 10phi9.

    At ``s = q`` and ``n = 0`` the product prefactor is 0/0; the value is
    the ``n -> 0`` limit with the 10phi9 replaced by its limit value 1.
    """
    try:
        return _x1_raw(inst, n)
    except SingularPoint as exc:
        if not (inst.exceptional and n == 0):
            raise PoleError(f"x1({n}) is singular: {exc}") from exc
    logger.debug(f"x1_0 at s = q^{inst.s_exponent}: resolving by the n-limit")
    return richardson_limit(lambda h: _x1_raw(inst, h, phi=inst.ctx.one), inst.ctx)


def x2(inst: RecurrenceInstance, n: int) -> Any:
    """Second explicit solution; needs ``s = q^m`` with ``m >= 1``.

    Vanishes identically when ``m + 2n - 1 <= 0`` through the factor
    ``(s q^{2n-1})_inf``.
    """
    m = inst.s_exponent
    if m is None or m < 1:
        raise UnsupportedError("x2 needs s = q^m with integer m >= 1")
    ctx = inst.ctx
    if m + 2 * n - 1 <= 0:
        return ctx.zero
    q = ctx.q
    p = inst.params
    a = p.a
    s = inst.s
    sa = s / a
    qn = ctx.qpow(n)
    top, _ = _product([sa * qn, s * qn * qn / q], ctx)
    bottom, vanishing = _product([qn * q, a * qn] + [x * sa * qn / q for x in p.others], ctx)
    if vanishing:
        raise PoleError(f"x2({n}) is singular: denominator product vanishes")
    img = p.image()
    phi = phi10(ctx, img.a, img.b, img.c, img.d, img.e, img.f, q * q / (qn * s), qn * q)
    return prefactor(inst, n) * top / bottom * phi


def check_annulus(inst: RecurrenceInstance) -> None:
    """Require ``|s/q| < |a| < |s/q^2|`` so both boundary 8phi7 series converge."""
    ctx = inst.ctx
    size = abs(inst.params.a)
    s = abs(inst.s)
    q = abs(ctx.q)
    if not (s / q < size < s / (q * q)):
        raise AnnulusError(
            f"|a| = {ctx.mp.nstr(size, 6)} outside the annulus ({ctx.mp.nstr(s / q, 6)}, {ctx.mp.nstr(s / (q * q), 6)})"
        )


def boundary_values(inst: RecurrenceInstance) -> Tuple[Any, Any]:
    """``(W_1, W_2) = (W(a; b..f), W(q/a; q/b..q/f))``."""
    check_annulus(inst)
    p = inst.params
    img = p.image()
    ctx = inst.ctx
    return (
        eval_w(p.a, p.b, p.c, p.d, p.e, p.f, ctx),
        eval_w(img.a, img.b, img.c, img.d, img.e, img.f, ctx),
    )


def x3(inst: RecurrenceInstance, n: int, weights: Optional[Tuple[Any, Any]] = None) -> Any:
    """Minimal solution ``W_2 x1 - W_1 x2``."""
    w1, w2 = weights if weights is not None else boundary_values(inst)
    return w2 * x1(inst, n) - w1 * x2(inst, n)


_SOLVERS = {1: x1, 2: x2}


def solution(inst: RecurrenceInstance, kind: int, n: int, weights: Optional[Tuple[Any, Any]] = None) -> SolutionValue:
    if kind == 3:
        return SolutionValue(n, x3(inst, n, weights), 3)
    if kind not in _SOLVERS:
        raise DomainError(f"solution kind must be 1, 2 or 3, got {kind}")
    return SolutionValue(n, _SOLVERS[kind](inst, n), kind)


def recurrence_terms(
    inst: RecurrenceInstance,
    kind: int,
    n: int,
    weights: Optional[Tuple[Any, Any]] = None,
) -> Tuple[Any, Any, Any]:
    """The three terms ``X_{n+1}``, ``-a_n X_n`` and ``b_n X_{n-1}`` of the equation."""
    values = [solution(inst, kind, k, weights).value for k in (n - 1, n, n + 1)]
    return values[2], -coeff_a(inst, n) * values[1], coeff_b(inst, n) * values[0]


# ------------------------------------------------------------------
# Large-n behaviour
#
def asymptotic_gap(inst: RecurrenceInstance, n: int, kind: int, weights: Optional[Tuple[Any, Any]] = None) -> Any:
    """Relative distance between ``x_kind(n) / prefactor(n)`` and its limit ``W_kind``."""
    if kind not in (1, 2):
        raise DomainError("asymptotic limits exist for kinds 1 and 2")
    w = (weights if weights is not None else boundary_values(inst))[kind - 1]
    rescaled = _SOLVERS[kind](inst, n) / prefactor(inst, n)
    return abs(rescaled - w) / abs(w)


def decay_rate(points: Sequence[Tuple[int, Any]]) -> float:
    """Least-squares geometric rate ``r`` with ``gap(n) ~ C exp(-r n)``."""
    ns = np.array([float(n) for n, _ in points])
    logs = np.log(np.maximum([float(gap) for _, gap in points], GAP_FLOOR))
    slope, _ = np.polyfit(ns, logs, 1)
    return float(-slope)


def minimality_ratios(inst: RecurrenceInstance, ns: Sequence[int]) -> List[Any]:
    """``|x3(n) / x1(n)|`` at each ``n``."""
    weights = boundary_values(inst)
    return [abs(x3(inst, n, weights) / x1(inst, n)) for n in ns]


__all__ = [
    "PATH_INDEX",
    "PATH_PARAMETER",
    "LIMIT_PATHS",
    "RecurrenceInstance",
    "SolutionValue",
    "SingularPoint",
    "coeff_a",
    "coeff_b",
    "prefactor",
    "x1",
    "x2",
    "x3",
    "solution",
    "recurrence_terms",
    "check_annulus",
    "boundary_values",
    "asymptotic_gap",
    "decay_rate",
    "minimality_ratios",
]
