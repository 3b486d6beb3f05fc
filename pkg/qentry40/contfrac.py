"""
contfrac.py
-----------

Continued-fraction engine and the continued fractions built on the
recurrence of ``qentry40.recurrence``.

A ``CFSpec`` describes

    leading / (den(0) -+ num(1) / (den(1) -+ num(2) / (den(2) -+ ...)))

with the sign pattern recorded explicitly: ``"minus"`` for the
fractions coming from ``X_{n+1} - a_n X_n + b_n X_{n-1} = 0`` and
``"plus"`` for Watson's fraction.  ``eval_cf`` runs the forward
three-term recurrence for numerators and denominators of the
convergents, rescaling both whenever they drift far from unity, and
reports the difference of the last two convergents.

Closed forms provided here:

* ``theorem4_rhs``: the ratio ``X3_0 / (a_0 X3_0 - X3_1)`` of the
  minimal solution, for ``s = q^m``;
* ``corollary7_*``: the ``s = q^2`` specialisation written in
  ``alpha = a/b, ..., epsilon = a/f`` together with Watson's terminating
  fraction (``watson_theoremA``) and its product form;
* ``corollary8_*``: the ``s = q`` specialisation, its terminating form
  with base ``q^4`` products and the companion fraction with ``2 b_1``;
* ``corollary9_rhs`` / ``corollary9_reduced``: ``s = q^m`` closed forms;
* ``remark2_*``: approximants of the ``s = q`` fraction as solution ratios;
* ``remark3_*``: the fraction of the contiguous relation of ``W`` in ``f``.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .errors import DomainError, PoleError
from .hyperq import PhiSpec, VwpParams, eval_phi_generic, eval_w, eval_wtilde, phi10
from .qcore import QContext, g_inverse, qpoch_infinite, qpoch_multi, termination_order
from .recurrence import (
    PATH_INDEX,
    RecurrenceInstance,
    boundary_values,
    coeff_a,
    coeff_b,
    x1,
    x2,
)

logger = logging.getLogger("qentry40.contfrac")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _formatter = logging.Formatter("%(asctime)s %(levelname)s: %(message)s")
    _handler.setFormatter(_formatter)
    logger.addHandler(_handler)
    logger.setLevel(logging.INFO)

MINUS = "minus"
PLUS = "plus"
#: smallest depth cap; the cap grows to twice the working precision in bits
DEFAULT_MAX_DEPTH = 200
#: convergents stop once two successive ones agree to 2^{-CF_TOL_SHARE * P}, relative
CF_TOL_SHARE = 0.75


def default_cf_tol(ctx: QContext) -> Any:
    """Relative stopping tolerance at the context's precision."""
    return ctx.mp.ldexp(1, -int(CF_TOL_SHARE * ctx.precision_bits))


def default_max_depth(ctx: QContext) -> int:
    return max(DEFAULT_MAX_DEPTH, 2 * ctx.precision_bits)


# ------------------------------------------------------------------
# Engine
#
@dataclass(frozen=True)
class CFSpec:
    """Generators of a continued fraction.

    :param partial_den: ``n -> den(n)`` for ``n >= 0``.
    :param partial_num: ``n -> num(n)`` for ``n >= 1``.
    :param ctx: Evaluation context.
    :param leading: Numerator over ``den(0)``.
    :param pattern: ``"minus"`` or ``"plus"``.
    :param length: Number of denominators of a terminating fraction.
    :param label: Name used in log messages.
    """

    partial_den: Callable[[int], Any]
    partial_num: Callable[[int], Any]
    ctx: QContext
    leading: Any = 1
    pattern: str = MINUS
    length: Optional[int] = None
    label: str = "cf"

    def __post_init__(self) -> None:
        if self.pattern not in (MINUS, PLUS):
            raise DomainError(f"pattern must be {MINUS!r} or {PLUS!r}")

    @property
    def sign(self) -> int:
        return -1 if self.pattern == MINUS else 1


class CFResult(NamedTuple):
    value: Any
    delta: Any
    depth: int
    converged: bool


def _cached(fn: Callable[[int], Any]) -> Callable[[int], Any]:
    return functools.lru_cache(maxsize=None)(fn)


def _convergents(spec: CFSpec, limit: int) -> Iterator[Tuple[int, Optional[Any]]]:
    """Yield ``(depth, convergent)``; the convergent is ``None`` when its denominator is zero."""
    ctx = spec.ctx
    mp = ctx.mp
    leading = ctx.num(spec.leading)
    big = mp.ldexp(1, ctx.precision_bits // 2)
    small = 1 / big
    p_prev, p = ctx.one, ctx.num(spec.partial_den(0))
    q_prev, q = ctx.zero, ctx.one
    yield 1, (leading * q / p if p != 0 else None)
    for k in range(1, limit):
        num = spec.sign * ctx.num(spec.partial_num(k))
        den = ctx.num(spec.partial_den(k))
        p, p_prev = den * p + num * p_prev, p
        q, q_prev = den * q + num * q_prev, q
        scale = max(abs(p), abs(q))
        if scale > big or (scale != 0 and scale < small):
            p, p_prev, q, q_prev = p / scale, p_prev / scale, q / scale, q_prev / scale
        yield k + 1, (leading * q / p if p != 0 else None)


def eval_cf(
    spec: CFSpec,
    depth: Optional[int] = None,
    rel_tol: Optional[Any] = None,
    max_depth: Optional[int] = None,
) -> CFResult:
    """Evaluate a continued fraction.

    With ``depth`` the ``depth``-th convergent (``depth`` denominators) is
    returned.  Without it, convergents are generated until two successive
    values agree to ``rel_tol`` or ``max_depth`` is reached; terminating
    fractions stop at their ``length``.  Both defaults scale with the
    working precision (``default_cf_tol``, ``default_max_depth``).

    :raises PoleError: the final convergent has a zero denominator.
    """
    ctx = spec.ctx
    if depth is not None and depth < 1:
        raise DomainError("depth must be at least 1")
    tol = default_cf_tol(ctx) if rel_tol is None else ctx.mp.mpf(rel_tol)
    if max_depth is None:
        max_depth = default_max_depth(ctx)
    limit = depth if depth is not None else max_depth
    if spec.length is not None:
        limit = min(limit, spec.length) if depth is None else limit
    previous: Optional[Any] = None
    value: Optional[Any] = None
    delta = ctx.mp.inf
    reached = 0
    for reached, value in _convergents(spec, limit):
        if value is not None and previous is not None:
            delta = abs(value - previous)
            if depth is None and spec.length is None and reached >= 3 and delta <= tol * abs(value):
                return CFResult(value, delta, reached, True)
        previous = value
    if value is None:
        raise PoleError(f"{spec.label}: indeterminate at depth {reached}")
    converged = depth is not None or spec.length is not None or delta <= tol * abs(value)
    if not converged:
        logger.warning(f"{spec.label}: |delta| = {ctx.mp.nstr(delta, 5)} after {reached} levels")
    return CFResult(value, delta if previous is not None else ctx.mp.mpf(0), reached, converged)


def convergents(spec: CFSpec, depth: int) -> List[Optional[Any]]:
    """The first ``depth`` convergents."""
    return [value for _, value in _convergents(spec, depth)]


def tail_ratio(spec: CFSpec, n: int) -> Any:
    """``num(n) / (den(n) den(n-1))``, the quantity governed by the parabola theorem."""
    return spec.partial_num(n) / (spec.partial_den(n) * spec.partial_den(n - 1))


def parabola_tail_limit(ctx: QContext) -> Any:
    """Limit ``q / (1 + q)^2`` of ``b_n / (a_n a_{n-1})``."""
    return ctx.q / (1 + ctx.q) ** 2


# ------------------------------------------------------------------
# Theorem 4: the general s = q^m fraction
#
def theorem4_spec(inst: RecurrenceInstance, path: str = PATH_INDEX, perturb_a1: float = 0.0) -> CFSpec:
    """``1/a_0 - b_1/a_1 - b_2/a_2 - ...`` from the recurrence coefficients.

    :param path: Limit path for ``a_0`` and ``b_1`` at ``s = q, q^2``.
    :param perturb_a1: Relative perturbation of ``a_1``; a fault-injection hook.
    """
    a0 = coeff_a(inst, 0, path)
    b1 = coeff_b(inst, 1, path)

    @_cached
    def den(n: int) -> Any:
        if n == 0:
            return a0
        value = coeff_a(inst, n)
        return value * (1 + perturb_a1) if n == 1 and perturb_a1 else value

    @_cached
    def num(n: int) -> Any:
        return b1 if n == 1 else coeff_b(inst, n)

    return CFSpec(den, num, inst.ctx, label=f"theorem4[s=q^{inst.s_exponent}]")


def theorem4_rhs(inst: RecurrenceInstance, weights: Optional[Tuple[Any, Any]] = None) -> Any:
    """``X3_0 / (a_0 X3_0 - X3_1)`` with the minimal solution ``X3 = W_2 X1 - W_1 X2``."""
    if inst.s_exponent is None:
        raise DomainError("theorem4_rhs needs s = q^m")
    w1, w2 = weights if weights is not None else boundary_values(inst)
    x30 = w2 * x1(inst, 0) - w1 * x2(inst, 0)
    x31 = w2 * x1(inst, 1) - w1 * x2(inst, 1)
    den = coeff_a(inst, 0) * x30 - x31
    if inst.ctx.is_negligible(den / (abs(x31) + abs(x30))):
        raise PoleError("theorem4_rhs: a_0 X3_0 - X3_1 vanishes")
    return x30 / den


# ------------------------------------------------------------------
# Root bookkeeping shared by Corollaries 7 and 8
#
def _roots(
    values: Sequence[Any],
    degree: int,
    target: Any,
    ctx: QContext,
    given: Optional[Sequence[Any]] = None,
) -> List[Any]:
    """``degree``-th roots of ``values``, the first one rotated so their product is ``target``.

    Principal roots are used unless ``given`` supplies them.
    """
    if given is None:
        roots = [ctx.mp.root(ctx.num(v), degree) for v in values]
    else:
        roots = [ctx.num(r) for r in given]
        if len(roots) != len(values):
            raise DomainError("one root per parameter is required")
        for r, v in zip(roots, values):
            v = ctx.num(v)
            if not ctx.is_negligible((r ** degree - v) / v):
                raise DomainError(f"supplied root is not a {degree}-th root of its parameter")
    product = ctx.one
    for r in roots:
        product *= r
    roots[0] *= target / product
    return roots


def _wtilde_pair(params: VwpParams) -> Tuple[Any, Any]:
    img = params.image()
    ctx = params.ctx
    return (
        eval_wtilde(params.a, params.b, params.c, params.d, params.e, params.f, ctx),
        eval_wtilde(img.a, img.b, img.c, img.d, img.e, img.f, ctx),
    )


def _params_from_alphas(alphas: Sequence[Any], a: Any, ctx: QContext) -> VwpParams:
    if len(alphas) != 5:
        raise DomainError("five parameters alpha..epsilon are required")
    b, c, d, e, f = (a / ctx.num(x) for x in alphas)
    return VwpParams(a, b, c, d, e, f, ctx)


def _product(values: Sequence[Any], ctx: QContext) -> Any:
    out = ctx.one
    for v in values:
        out *= v
    return out


# ------------------------------------------------------------------
# Corollary 7 (s = q^2) and Watson's fraction
#
def _corollary7_family(roots: Sequence[Any], half: Any, ctx: QContext) -> Tuple[Callable[[int], Any], Callable[[int], Any]]:
    """Coefficients of the ``s = q^2`` fraction for base ``half^2``.

    ``roots`` are square roots of the parameters ``alpha..epsilon`` whose
    product fixes the sign of ``prod (alpha^{1/2} + alpha^{-1/2})``.
    """
    base = half * half
    params = [r * r for r in roots]
    pi = _product([r + 1 / r for r in roots], ctx)
    sigma = sum((x + 1 / x for x in params), ctx.num(2))

    def ch(k: int) -> Any:
        # cosh-like sum for exponent k/2 of the base
        return half ** k + half ** (-k)

    @_cached
    def a_n(n: int) -> Any:
        h = ch(n) * ch(n + 1)
        return half * pi / h + half * (ch(1) * ch(2 * n + 1) - sigma)

    @_cached
    def b_n(n: int) -> Any:
        top = -base * _product([x + 1 / x - ch(2 * n) for x in params], ctx)
        bottom = ch(n) ** 2 * (half ** (-2 * n - 1) - half ** (2 * n + 1)) * (half ** (-2 * n + 1) - half ** (2 * n - 1))
        return top / bottom

    return a_n, b_n


def corollary7_coefficients(alphas: Sequence[Any], ctx: QContext, a: Optional[Any] = None) -> Tuple[Callable[[int], Any], Callable[[int], Any]]:
    """``(a_n, b_n)`` of the ``s = q^2`` fraction in terms of ``alpha = a/b, ..., epsilon = a/f``.

    ``a`` defaults to the principal root of ``q * alpha*beta*gamma*delta*epsilon``.
    """
    a = _alpha_a(alphas, ctx, a, power=2, scale=ctx.q)
    half = ctx.qpow(ctx.mp.mpf(1) / 2)
    roots = _roots(alphas, 2, a / half, ctx)
    return _corollary7_family(roots, half, ctx)


def _alpha_a(alphas: Sequence[Any], ctx: QContext, a: Optional[Any], power: int, scale: Any) -> Any:
    """``a`` with ``a^power = scale * prod(alphas)``; validated when supplied."""
    target = scale * _product([ctx.num(x) for x in alphas], ctx)
    if a is None:
        return ctx.mp.root(target, power)
    a = ctx.num(a)
    if not ctx.is_negligible((a ** power - target) / target):
        raise DomainError("supplied a is inconsistent with the alpha parameters")
    return a


def corollary7_cf(alphas: Sequence[Any], ctx: QContext, a: Optional[Any] = None) -> CFSpec:
    a_n, b_n = corollary7_coefficients(alphas, ctx, a)
    return CFSpec(a_n, b_n, ctx, label="corollary7")


def corollary7_rhs(alphas: Sequence[Any], ctx: QContext, a: Optional[Any] = None) -> Any:
    """Closed form ``2a(1-q) / (q^{3/2} prod(1 - alpha)) * (1 - V) / (1 + V)``.

    ``V = (q/a, q^2/a)_inf / (a, aq)_inf * W~_1 / W~_2`` with
    ``W~_1 = W~(a; b..f)`` and ``W~_2 = W~(q/a; q/b..q/f)``.
    """
    q = ctx.q
    a = _alpha_a(alphas, ctx, a, power=2, scale=q)
    alphas = [ctx.num(x) for x in alphas]
    if any(ctx.is_negligible(1 - x) for x in alphas):
        raise PoleError("corollary7_rhs: some alpha equals 1")
    w1, w2 = _wtilde_pair(_params_from_alphas(alphas, a, ctx))
    v = qpoch_multi([q / a, q * q / a], ctx) / qpoch_multi([a, a * q], ctx) * w1 / w2
    if ctx.is_negligible(1 + v):
        raise PoleError("corollary7_rhs: V = -1")
    lead = 2 * a * (1 - q) / (ctx.qpow(ctx.mp.mpf(3) / 2) * _product([1 - x for x in alphas], ctx))
    return lead * (1 - v) / (1 + v)


class WatsonProducts(NamedTuple):
    """Watson's products ``P`` and ``Q``, each over eight ``G`` arguments."""

    P: Any
    Q: Any
    alphas: Tuple[Any, ...]
    base_square: bool = True

    @property
    def ratio(self) -> Any:
        return (self.P - self.Q) / (self.P + self.Q)

    @property
    def condition(self) -> Any:
        return (abs(self.P) + abs(self.Q)) / abs(self.P + self.Q)


def _watson_arguments(alphas: Sequence[Any]) -> Tuple[List[Any], List[Any]]:
    al, be, ga, de, ep = alphas
    p_args = [
        al * be * ga * de * ep,
        al * be * ga / (de * ep),
        al * be * de / (ga * ep),
        al * ga * de / (be * ep),
        al * be * ep / (ga * de),
        al * ga * ep / (be * de),
        al * de * ep / (be * ga),
        al / (be * ga * de * ep),
    ]
    q_args = [
        al * be * ga * de / ep,
        al * be * ga * ep / de,
        al * be * de * ep / ga,
        al * ga * de * ep / be,
        al * be / (ga * de * ep),
        al * ga / (be * de * ep),
        al * de / (be * ga * ep),
        al * ep / (be * ga * de),
    ]
    return p_args, q_args


def watson_products(alphas: Sequence[Any], ctx: QContext) -> WatsonProducts:
    """``P = prod G(.)`` and ``Q = prod G(.)`` with ``1/G(x) = (xq; q^2)_inf``.

    Evaluated at twice the working precision; ``P + Q`` may cancel.
    """
    wide = ctx.with_precision(2 * ctx.precision_bits)
    values = [wide.num(x) for x in alphas]
    p_args, q_args = _watson_arguments(values)
    p = 1 / _product([g_inverse(x, wide) for x in p_args], wide)
    q = 1 / _product([g_inverse(x, wide) for x in q_args], wide)
    return WatsonProducts(p, q, tuple(values))


def _termination_index(values: Sequence[Any], ctx: QContext, base: Optional[Any] = None) -> Tuple[int, int]:
    """``(position, k)`` for the first value equal to ``base^{+-k}``, ``k >= 1``."""
    for pos, x in enumerate(values):
        x = ctx.num(x)
        for candidate in (x, 1 / x):
            k = termination_order(candidate, ctx, base)
            if k is not None and k >= 1:
                return pos, k
    raise DomainError("none of the parameters is a nonzero integer power of the base")


def watson_cf(alphas: Sequence[Any], ctx: QContext, n_terminate: Optional[int] = None) -> CFSpec:
    """Watson's terminating fraction ``A_0/beta_0 + alpha_1/beta_1 + ...``."""
    q = ctx.q
    alphas = [ctx.num(x) for x in alphas]
    _, n = _termination_index(alphas[1:], ctx)
    if n_terminate is not None and n_terminate != n:
        raise DomainError(f"parameters terminate at order {n}, not {n_terminate}")

    def ch(k: int) -> Any:
        return q ** k + q ** (-k)

    def sh(k: int) -> Any:
        return q ** k - q ** (-k)

    squares = sum((x * x + 1 / (x * x) for x in alphas), ctx.num(2))
    pi_plus = _product([x + 1 / x for x in alphas], ctx)
    a0 = ch(1) * _product([x - 1 / x for x in alphas], ctx)

    @_cached
    def alpha_m(m: int) -> Any:
        return ch(m + 1) * ch(m - 1) * _product([x * x + 1 / (x * x) - ch(2 * m) for x in alphas], ctx)

    @_cached
    def beta_m(m: int) -> Any:
        return sh(2 * m + 1) * (ch(m) * ch(m + 1) * squares - pi_plus - ch(1) * ch(m) * ch(m + 1) * ch(2 * m + 1))

    return CFSpec(beta_m, alpha_m, ctx, leading=a0, pattern=PLUS, length=n, label="watson")


def watson_theoremA(alphas: Sequence[Any], ctx: QContext, n_terminate: Optional[int] = None) -> Tuple[Any, Any]:
    """``((P - Q)/(P + Q), terminating fraction)``; both sides computed independently."""
    spec = watson_cf(alphas, ctx, n_terminate)
    products = watson_products(alphas, ctx)
    if products.P + products.Q == 0:
        raise PoleError("P + Q vanishes")
    return ctx.num(products.ratio), eval_cf(spec).value


def corollary7_terminating(alphas: Sequence[Any], ctx: QContext) -> Tuple[Any, Any]:
    """The ``s = q^2`` fraction in base ``q^2`` with parameters ``alpha^2``, against Watson's products.

    Returns ``(fraction, 2(q^{-1} - q)/(q prod(alpha - alpha^{-1})) * (P - Q)/(P + Q))``.
    """
    q = ctx.q
    alphas = [ctx.num(x) for x in alphas]
    _, n = _termination_index(alphas[1:], ctx)
    a_n, b_n = _corollary7_family(alphas, q, ctx)
    fraction = eval_cf(CFSpec(a_n, b_n, ctx, length=n, label="corollary7-terminating")).value
    ratio = ctx.num(watson_products(alphas, ctx).ratio)
    closed = 2 * (1 / q - q) / (q * _product([x - 1 / x for x in alphas], ctx)) * ratio
    return fraction, closed


# ------------------------------------------------------------------
# Corollary 8 (s = q), its terminating form and Remark 2
#
def _corollary8_family(roots: Sequence[Any], quarter: Any, ctx: QContext) -> Tuple[Callable[[int], Any], Callable[[int], Any]]:
    """Coefficients of the ``s = q`` fraction for base ``quarter^4``.

    ``roots`` are fourth roots of ``alpha..epsilon`` with product ``a * quarter``.
    """
    u = [r * r for r in roots]
    s_sum = sum((x + 1 / x for x in u), ctx.zero)
    p_plus = _product([r + 1 / r for r in roots], ctx) / 2
    p_minus = _product([r - 1 / r for r in roots], ctx) / 2

    def ch(k: int) -> Any:
        return quarter ** k + quarter ** (-k)

    def sh(k: int) -> Any:
        return quarter ** k - quarter ** (-k)

    constant = ch(4) * ch(2) + ch(4) * s_sum - ch(1) * ch(2) * p_plus + sh(1) * ch(2) * p_minus
    linear = -ch(6) + ch(1) * p_plus + sh(1) * p_minus

    @_cached
    def a_n(n: int) -> Any:
        t = ch(12 * n) * ch(2) - ch(8 * n) * (ch(2) + s_sum) + ch(4 * n) * linear + constant
        bottom = (quarter ** (-4 * n - 2) - quarter ** (4 * n + 2)) * (quarter ** (-4 * n + 2) - quarter ** (4 * n - 2))
        return quarter ** 2 * t / bottom

    @_cached
    def b_n(n: int) -> Any:
        top = quarter ** 4 * _product([ch(4 * n - 2) - x - 1 / x for x in u], ctx)
        return top / (ch(2 * n) * ch(2 * n - 2) * sh(4 * n - 2) ** 2)

    return a_n, b_n


def corollary8_coefficients(
    alphas: Sequence[Any],
    ctx: QContext,
    a: Optional[Any] = None,
    roots: Optional[Sequence[Any]] = None,
) -> Tuple[Callable[[int], Any], Callable[[int], Any]]:
    """``(a_n, b_n)`` of the ``s = q`` fraction; ``a^4 = alpha*beta*gamma*delta*epsilon / q``.

    The coefficients depend on the square roots ``u = alpha^{1/2} = a q^{1/2} / x``
    themselves, not only on ``alpha``.  Pass ``roots`` (fourth roots of the
    ``alpha``, i.e. square roots of the ``u``) to pin them; the default
    principal roots match an instance only when every ``u`` lies in the
    right half-plane.
    """
    a = _alpha_a(alphas, ctx, a, power=4, scale=1 / ctx.q)
    quarter = ctx.qpow(ctx.mp.mpf(1) / 4)
    roots = _roots(alphas, 4, a * quarter, ctx, roots)
    return _corollary8_family(roots, quarter, ctx)


def corollary8_cf(
    alphas: Sequence[Any],
    ctx: QContext,
    a: Optional[Any] = None,
    roots: Optional[Sequence[Any]] = None,
    double_b1: bool = False,
) -> CFSpec:
    a_n, b_n = corollary8_coefficients(alphas, ctx, a, roots)
    num = _doubled_first(b_n) if double_b1 else b_n
    return CFSpec(a_n, num, ctx, label="corollary8")


def _doubled_first(b_n: Callable[[int], Any]) -> Callable[[int], Any]:
    return lambda n: 2 * b_n(1) if n == 1 else b_n(n)


def _corollary8_params(alphas: Sequence[Any], a: Any, ctx: QContext, roots: Optional[Sequence[Any]]) -> VwpParams:
    """``b..f = a q^{1/2} / alpha^{1/2}`` with the roots matching ``a``."""
    quarter = ctx.qpow(ctx.mp.mpf(1) / 4)
    roots = _roots(alphas, 4, a * quarter, ctx, roots)
    half = quarter * quarter
    b, c, d, e, f = (a * half / (r * r) for r in roots)
    return VwpParams(a, b, c, d, e, f, ctx)


def corollary8_rhs(
    alphas: Sequence[Any],
    ctx: QContext,
    a: Optional[Any] = None,
    roots: Optional[Sequence[Any]] = None,
) -> Any:
    """``2 (a_0 + (a^2/q) (1/a)_inf^2 / ((aq)_inf (a/q)_inf) * W~_1/W~_2)^{-1}``."""
    q = ctx.q
    a = _alpha_a(alphas, ctx, a, power=4, scale=1 / q)
    a_n, _ = corollary8_coefficients(alphas, ctx, a, roots)
    w1, w2 = _wtilde_pair(_corollary8_params(alphas, a, ctx, roots))
    ratio = qpoch_infinite(1 / a, ctx) ** 2 / qpoch_multi([a * q, a / q], ctx)
    den = a_n(0) + a * a / q * ratio * w1 / w2
    if ctx.is_negligible(den):
        raise PoleError("corollary8_rhs: denominator vanishes")
    return 2 / den


class CompanionProducts(NamedTuple):
    """Products ``P'`` and ``Q'`` of the terminating ``s = q`` form, base ``q^4``."""

    Pp: Any
    Qp: Any
    alphas: Tuple[Any, ...]
    base_fourth: bool = True


def companion_products(alphas: Sequence[Any], ctx: QContext) -> CompanionProducts:
    q = ctx.q
    base = q ** 4
    al, be, ga, de, ep = (ctx.num(x) for x in alphas)
    q3 = q ** 3
    q_args = [
        q * al * be * ga * de / ep,
        q * al * ga * de * ep / be,
        q * al * be * ep * de / ga,
        q * al * ep * be * ga / de,
        q * al * be / (ep * ga * de),
        q * al * ga / (ep * be * de),
        q * al * de / (ep * be * ga),
        q * al * ep / (be * ga * de),
    ]
    p_args = [
        q3 * al * be * ga * de * ep,
        q3 * al / (be * ga * de * ep),
        q3 * al * de * ep / (be * ga),
        q3 * al * ga * ep / (be * de),
        q3 * ga * de * al / (ep * be),
        q3 * al * be * de / (ep * ga),
        q3 * al * be * ga / (ep * de),
        q3 * al * be * ep / (ga * de),
    ]
    pp = 1 / qpoch_multi(p_args, ctx, base=base)
    qp = 1 / qpoch_multi(q_args, ctx, base=base)
    return CompanionProducts(pp, qp, (al, be, ga, de, ep))


def _corollary8_terminating_family(alphas: Sequence[Any], ctx: QContext) -> Tuple[Callable[[int], Any], Callable[[int], Any], int]:
    alphas = [ctx.num(x) for x in alphas]
    _, order = _termination_index(alphas[1:], ctx)
    if order % 2 == 0:
        raise DomainError("the terminating s = q form needs an odd power q^N")
    a_n, b_n = _corollary8_family(alphas, ctx.q, ctx)
    return a_n, b_n, (order + 1) // 2


def corollary8_terminating(alphas: Sequence[Any], ctx: QContext) -> Tuple[Any, Any]:
    """``(fraction, 2 (a_0 - (q^2/alpha^2) P'/Q')^{-1})`` in base ``q^4``."""
    a_n, b_n, length = _corollary8_terminating_family(alphas, ctx)
    fraction = eval_cf(CFSpec(a_n, b_n, ctx, length=length, label="corollary8-terminating")).value
    products = companion_products(alphas, ctx)
    alpha = products.alphas[0]
    closed = 2 / (a_n(0) - ctx.q ** 2 / alpha ** 2 * products.Pp / products.Qp)
    return fraction, closed


def corollary8_companion(alphas: Sequence[Any], ctx: QContext) -> Tuple[Any, Any]:
    """``(1/a_0 - 2b_1/a_1 - ..., -(alpha^2/q^2) Q'/P')`` in base ``q^4``."""
    a_n, b_n, length = _corollary8_terminating_family(alphas, ctx)
    spec = CFSpec(a_n, _doubled_first(b_n), ctx, length=length, label="corollary8-companion")
    fraction = eval_cf(spec).value
    products = companion_products(alphas, ctx)
    alpha = products.alphas[0]
    closed = -(alpha ** 2) / ctx.q ** 2 * products.Qp / products.Pp
    return fraction, closed


def _require_exponent(inst: RecurrenceInstance, allowed: Callable[[int], bool], what: str) -> int:
    m = inst.s_exponent
    if m is None or not allowed(m):
        raise DomainError(f"{what} is not defined for s_exponent = {m}")
    return m


def remark2_spec(inst: RecurrenceInstance) -> CFSpec:
    """``1/a_0 - 2b_1/a_1 - b_2/a_2 - ...`` at ``s = q`` with index-limit ``a_0``, ``b_1``."""
    _require_exponent(inst, lambda m: m == 1, "remark2_spec")
    spec = theorem4_spec(inst, PATH_INDEX)
    return CFSpec(spec.partial_den, _doubled_first(spec.partial_num), inst.ctx, label="remark2")


def remark2_initial_residuals(inst: RecurrenceInstance) -> Tuple[Any, Any]:
    """Relative residuals of ``2 X1_1 = a_0 X1_0`` and ``X2_2 = a_1 X2_1``."""
    _require_exponent(inst, lambda m: m == 1, "remark2")
    x10, x11 = x1(inst, 0), x1(inst, 1)
    x21, x22 = x2(inst, 1), x2(inst, 2)
    r1 = abs(2 * x11 - coeff_a(inst, 0) * x10) / abs(2 * x11)
    r2 = abs(x22 - coeff_a(inst, 1) * x21) / abs(x22)
    return r1, r2


def remark2_approximant(inst: RecurrenceInstance, n: int) -> Any:
    """``X2_{n+1} X1_0 / (2 X1_{n+1} X2_1)``, the n-th approximant of ``remark2_spec``."""
    ctx = inst.ctx
    r1, r2 = remark2_initial_residuals(inst)
    if not (ctx.is_negligible(r1) and ctx.is_negligible(r2)):
        raise DomainError("initial conditions of the s = q solutions do not hold")
    den = 2 * x1(inst, n + 1) * x2(inst, 1)
    if den == 0:
        raise PoleError(f"remark2 approximant {n}: zero denominator")
    return x2(inst, n + 1) * x1(inst, 0) / den


def remark2_rhs(inst: RecurrenceInstance) -> Any:
    """Limit of the approximants: ``q (aq, a/q)_inf / (a^2 (1/a)_inf^2) * W~_2 / W~_1``."""
    _require_exponent(inst, lambda m: m == 1, "remark2_rhs")
    ctx = inst.ctx
    q = ctx.q
    a = inst.params.a
    w1, w2 = _wtilde_pair(inst.params)
    return q * qpoch_multi([a * q, a / q], ctx) / (a * a * qpoch_infinite(1 / a, ctx) ** 2) * w2 / w1


# ------------------------------------------------------------------
# Corollary 9 and the reduced s = q, q^2 forms
#
def corollary9_rhs(inst: RecurrenceInstance) -> Any:
    """Closed form of the ``s = q^m`` fraction, ``m >= 3``."""
    m = _require_exponent(inst, lambda k: k >= 3, "corollary9_rhs")
    ctx = inst.ctx
    q = ctx.q
    p = inst.params
    a = p.a
    img = p.image()
    w1, w2 = _wtilde_pair(p)
    if w1 == 0:
        raise PoleError("corollary9_rhs: W~_1 vanishes")
    qm = q ** m
    qm1 = q ** (m - 1)
    lead = ctx.qpow(ctx.mp.mpf(m - 3) / 2) * (1 - qm1) * (1 - a / q)
    lead /= (1 - qm1 / a) * _product([1 - a / x for x in p.others], ctx)
    phi = phi10(ctx, img.a, img.b, img.c, img.d, img.e, img.f, q ** (2 - m), q)
    correction = w2 / w1
    correction *= qpoch_multi([a, a * q, q], ctx) / qpoch_multi([qm / a, qm1 / a, qm], ctx)
    correction /= 1 - qm1
    correction *= qpoch_multi([x * qm1 / a for x in p.others], ctx) / qpoch_multi([x * q / a for x in p.others], ctx)
    return lead * (phi - correction)


def corollary9_reduced(inst: RecurrenceInstance) -> Any:
    """Closed forms at ``s = q`` and ``s = q^2``.

    They equal the fraction built with the ``s``-limit of ``a_0`` (and of
    ``b_1``, which is twice its index-limit at ``s = q``).
    """
    m = _require_exponent(inst, lambda k: k in (1, 2), "corollary9_reduced")
    ctx = inst.ctx
    q = ctx.q
    a = inst.params.a
    w1, w2 = _wtilde_pair(inst.params)
    if m == 1:
        return q / (a * a) * w2 / w1 * qpoch_multi([a / q, a * q], ctx) / qpoch_infinite(1 / a, ctx) ** 2
    alphas = [a / x for x in inst.params.others]
    lead = -a * (1 - q) / (ctx.qpow(ctx.mp.mpf(3) / 2) * _product([1 - x for x in alphas], ctx))
    return lead * (1 - qpoch_multi([a, a * q], ctx) / qpoch_multi([q * q / a, q / a], ctx) * w2 / w1)


# ------------------------------------------------------------------
# Remark 3: the fraction of the contiguous relation of W in f
#
def remark3_coefficients(a: Any, b: Any, c: Any, d: Any, e: Any, ctx: QContext) -> Tuple[Callable[[int], Any], Callable[[int], Any]]:
    q = ctx.q
    a, b, c, d, e = (ctx.num(x) for x in (a, b, c, d, e))
    xs = (b, c, d, e)
    bcde = b * c * d * e
    fixed = _product([1 - x for x in xs], ctx) / bcde

    @_cached
    def c_n(n: int) -> Any:
        qn = q ** n
        qn1 = qn * q
        s1 = -_product([1 - a / x * qn1 for x in xs], ctx)
        s2 = -q * (1 - qn) * (1 - a * qn) * (1 - a * qn1) * (1 - a * a * qn1 / bcde)
        s3 = a * a * qn1 * qn1 * fixed
        return (s1 + s2 + s3) / (1 - a * qn1)

    @_cached
    def d_n(n: int) -> Any:
        qn = q ** n
        return q * (1 - qn) * _product([1 - a / x * qn for x in xs], ctx) * (1 - a * a * qn * q / bcde)

    return c_n, d_n


def remark3_spec(a: Any, b: Any, c: Any, d: Any, e: Any, ctx: QContext) -> CFSpec:
    c_n, d_n = remark3_coefficients(a, b, c, d, e, ctx)
    return CFSpec(c_n, d_n, ctx, label="remark3")


def _phi32(nums: Sequence[Any], dens: Sequence[Any], z: Any, ctx: QContext) -> Any:
    return eval_phi_generic(PhiSpec(list(nums), list(dens), z, ctx))


def remark3_rhs(a: Any, b: Any, c: Any, d: Any, e: Any, ctx: QContext) -> Any:
    """``-(1 - a/q) / (q prod(1 - a/x)) * [W(q/a; q/b, q/c, q/d, q/e, q) - R]``.

    ``R`` combines three 3phi2 series at argument ``b``.
    """
    q = ctx.q
    a, b, c, d, e = (ctx.num(x) for x in (a, b, c, d, e))
    if abs(b) >= 1:
        raise DomainError("remark3 needs |b| < 1 for its 3phi2 series")
    aa = a * a
    aq = a * q
    bcde = b * c * d * e
    cde = c * d * e
    dea, dca, eca, deca = d * e / a, d * c / a, e * c / a, d * e * c / a
    r1 = qpoch_multi([q, a, q * q / a, dea, dca, eca], ctx) / qpoch_multi(
        [d * q / a, e * q / a, c * q / a, deca / q, aq / b, b], ctx
    )
    p1 = _phi32([q / d, q / e, q / c], [q * b / a, q * q * a / cde], b, ctx)
    r2 = qpoch_multi([q / d, q / e, q / c, bcde / aa, aq / b, b / a, cde / aa, aa * q / cde, deca / q], ctx)
    r2 /= qpoch_multi([eca, q * b / a, q * a / cde, q / a, a, bcde / (q * aa), aa * q * q / bcde, dea, dca], ctx)
    p2 = _phi32([dea, dca, eca], [bcde / aa, deca], b, ctx)
    p3 = _phi32([aq / (b * c), aq / (b * d), aq / (b * e)], [aq / b, aa * q * q / bcde], b, ctx)
    if p3 == 0:
        raise PoleError("remark3: denominator 3phi2 vanishes")
    r = r1 * (p1 + r2 * p2) / p3
    w = eval_w(q / a, q / b, q / c, q / d, q / e, q, ctx)
    lead = -(1 - a / q) / (q * _product([1 - a / x for x in (b, c, d, e)], ctx))
    return lead * (w - r)


def remark3_cf(a: Any, b: Any, c: Any, d: Any, e: Any, ctx: QContext) -> Tuple[Any, Any]:
    """``(1/c_0 - d_1/c_1 - ..., closed form)``."""
    return eval_cf(remark3_spec(a, b, c, d, e, ctx)).value, remark3_rhs(a, b, c, d, e, ctx)


def remark3_limit_gap(a: Any, b: Any, c: Any, d: Any, e: Any, ctx: QContext, m: int = 20) -> Tuple[Any, Any]:
    """Compare the Remark-3 fraction with ``-q^{(1-m)/2}`` times the ``s = q^m`` fraction.

    Returns ``(remark-3 value, rescaled s = q^m value)``; their difference is ``O(q^m)``.
    """
    inst = RecurrenceInstance.from_exponent(ctx, a, b, c, d, e, m)
    scaled = -ctx.qpow(ctx.mp.mpf(1 - m) / 2) * eval_cf(theorem4_spec(inst)).value
    return eval_cf(remark3_spec(a, b, c, d, e, ctx)).value, scaled


__all__ = [
    "MINUS",
    "PLUS",
    "CFSpec",
    "CFResult",
    "eval_cf",
    "default_cf_tol",
    "default_max_depth",
    "convergents",
    "tail_ratio",
    "parabola_tail_limit",
    "theorem4_spec",
    "theorem4_rhs",
    "corollary7_coefficients",
    "corollary7_cf",
    "corollary7_rhs",
    "corollary7_terminating",
    "WatsonProducts",
    "watson_products",
    "watson_cf",
    "watson_theoremA",
    "corollary8_coefficients",
    "corollary8_cf",
    "corollary8_rhs",
    "CompanionProducts",
    "companion_products",
    "corollary8_terminating",
    "corollary8_companion",
    "remark2_spec",
    "remark2_initial_residuals",
    "remark2_approximant",
    "remark2_rhs",
    "corollary9_rhs",
    "corollary9_reduced",
    "remark3_coefficients",
    "remark3_spec",
    "remark3_rhs",
    "remark3_cf",
    "remark3_limit_gap",
]
