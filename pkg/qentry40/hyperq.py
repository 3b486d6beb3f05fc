"""
hyperq.py
---------

Evaluators for basic hypergeometric series.

* ``eval_phi_generic`` sums an arbitrary r+1 phi r series from its term
  ratio.  It is the engine behind the 4phi3 and 3phi2 series used by
  the verification harness and the Remark-3 continued fraction.
* ``eval_vwp_series`` sums a very-well-poised series

      sum_k (a; q)_k (1 - a q^{2k}) / (1 - a) * prod_p (p; q)_k / (aq/p; q)_k * z^k / (q; q)_k

  where the pair ``q sqrt(a), -q sqrt(a)`` is folded into the factor
  ``(1 - a q^{2k}) / (1 - a)`` so no square root of ``a`` is taken.
* ``eval_10phi9`` is the terminating balanced 10phi9 ``phi(a; b, ..., h)``
  (argument ``q``), and ``eval_w`` the 8phi7 ``W(a; b, c, d, e, f)`` with
  argument ``a^2 q^2 / (bcdef)``.
* ``eval_wtilde`` and ``eval_u`` are the normalisations

      W~(a; b..f) = (aq/b, aq/c, aq/d, aq/e, aq/f)_inf W(a; b..f)
      U(a; b..f)  = W~(a; b..f) / (aq, b, c, d, e, f)_inf

  ``W~`` is computed without dividing by ``(aq/x)_k``, so it stays
  finite when some ``aq/x`` equals ``q^{1-N}`` and ``W`` itself has a
  pole.

Series are summed forward; the accumulated terms are added with
``mpmath.fsum`` and summation stops at termination or once the tail
estimate ``|t_k| / (1 - |ratio|)`` falls below ``series_tol`` times the
largest term.  W is not continued analytically outside
``|a^2 q^2 / bcdef| < 1``; such inputs raise ``DomainError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Callable, List, Optional, Sequence, Tuple

from .errors import DomainError, NonConvergenceError, PoleError, UnsupportedError
from .qcore import (
    QContext,
    qpoch_multi,
    qpoch_multi_vanishes,
    termination_order,
)

#: non-terminating series always add at least this many terms
MIN_TERMS = 8


# ------------------------------------------------------------------
# Parameter containers
#
@dataclass(frozen=True)
class PhiSpec:
    """An r+1 phi r series: numerator and denominator parameters and argument."""

    num_params: Sequence[Any]
    den_params: Sequence[Any]
    z: Any
    ctx: QContext


@dataclass(frozen=True)
class VwpParams:
    """The free parameters ``(a, b, c, d, e, f)`` of the very-well-poised family.

    ``s = a^3 q^3 / (bcdef)`` is derived on access and never stored.
    """

    a: Any
    b: Any
    c: Any
    d: Any
    e: Any
    f: Any
    ctx: QContext = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        for name in "abcdef":
            value = self.ctx.num(getattr(self, name))
            object.__setattr__(self, name, value)
        for name in "bcdef":
            if getattr(self, name) == 0:
                raise DomainError(f"parameter {name} must be nonzero")

    @classmethod
    def with_s(cls, ctx: QContext, a: Any, b: Any, c: Any, d: Any, e: Any, s: Any) -> "VwpParams":
        """Solve for ``f`` so that ``a^3 q^3 / (bcdef) = s``."""
        q = ctx.q
        a, b, c, d, e, s = (ctx.num(x) for x in (a, b, c, d, e, s))
        return cls(a, b, c, d, e, a ** 3 * q ** 3 / (b * c * d * e * s), ctx)

    @property
    def s(self) -> Any:
        return self.a ** 3 * self.ctx.q ** 3 / (self.b * self.c * self.d * self.e * self.f)

    @property
    def others(self) -> Tuple[Any, Any, Any, Any, Any]:
        return (self.b, self.c, self.d, self.e, self.f)

    def image(self) -> "VwpParams":
        """Parameters under ``x -> q/x`` for every entry, as used by W_2."""
        q = self.ctx.q
        return VwpParams(q / self.a, q / self.b, q / self.c, q / self.d, q / self.e, q / self.f, self.ctx)

    def replace(self, **changes: Any) -> "VwpParams":
        return replace(self, **changes)

    def labelled(self) -> dict:
        """Parameter values keyed by name, for reports."""
        return {name: getattr(self, name) for name in "abcdef"}


@dataclass(frozen=True)
class Vwp10phi9Instance:
    """A balanced very-well-poised 10phi9 ``phi(a; b, c, d, e, f, g, h)``."""

    base: VwpParams
    g: Any
    h: Any

    def __post_init__(self) -> None:
        ctx = self.base.ctx
        object.__setattr__(self, "g", ctx.num(self.g))
        object.__setattr__(self, "h", ctx.num(self.h))
        p = self.base
        lhs = p.a ** 3 * ctx.q ** 2
        rhs = p.b * p.c * p.d * p.e * p.f * self.g * self.h
        if abs(lhs - rhs) > ctx.mp.ldexp(abs(lhs), 16 - ctx.precision_bits):
            raise DomainError("balance condition a^3 q^2 = bcdefgh violated")

    @property
    def numerators(self) -> Tuple[Any, ...]:
        return self.base.others + (self.g, self.h)

    @property
    def termination(self) -> Optional[int]:
        return _min_termination(self.numerators, self.base.ctx)

    @property
    def terminating(self) -> bool:
        return self.termination is not None


# ------------------------------------------------------------------
# Summation engine
#
def _min_termination(params: Sequence[Any], ctx: QContext) -> Optional[int]:
    orders = [k for k in (termination_order(p, ctx) for p in params) if k is not None]
    return min(orders) if orders else None


def _sum_by_ratio(
    ratio: Callable[[int, Any], Any],
    ctx: QContext,
    order: Optional[int],
    label: str,
) -> Any:
    """Sum ``t_0 = 1, t_{k+1} = t_k * ratio(k, q^k)``.

    With ``order`` set exactly ``order + 1`` terms are summed; otherwise
    summation runs until the geometric tail estimate is negligible.
    """
    terms: List[Any] = [ctx.one]
    term = ctx.one
    scale = ctx.mp.mpf(1)
    qk = ctx.one
    limit = ctx.max_terms if order is None else order
    for k in range(limit):
        r = ratio(k, qk)
        term = term * r
        terms.append(term)
        qk = qk * ctx.q
        size = abs(term)
        if size > scale:
            scale = size
        if order is None and k + 1 >= MIN_TERMS:
            rho = abs(r)
            if rho < 1 and size <= ctx.series_tol * scale * (1 - rho):
                return ctx.mp.fsum(terms)
    if order is None:
        raise NonConvergenceError(f"{label} did not converge in {ctx.max_terms} terms")
    return ctx.mp.fsum(terms)


def _checked(den: Any, ctx: QContext, label: str, k: int) -> Any:
    if ctx.is_negligible(den):
        raise PoleError(f"{label}: denominator factor vanishes at term {k}")
    return den


def eval_phi_generic(spec: PhiSpec) -> Any:
    """Sum an r+1 phi r series from its term ratio.

    :param spec: Parameters, argument and context.
    :returns: The series value.
    :raises DomainError: non-terminating with ``|z| >= 1``.
    :raises PoleError: a denominator parameter hits ``q^{-k}`` before termination.
    """
    ctx = spec.ctx
    nums = [ctx.num(x) for x in spec.num_params]
    dens = [ctx.num(x) for x in spec.den_params]
    if len(nums) != len(dens) + 1:
        raise UnsupportedError("only r+1 phi r series are supported")
    z = ctx.num(spec.z)
    order = _min_termination(nums, ctx)
    if order is None and abs(z) >= 1:
        raise DomainError(f"series diverges: |z| = {ctx.mp.nstr(abs(z), 8)} >= 1")
    q = ctx.q

    def ratio(k: int, qk: Any) -> Any:
        top = z
        for x in nums:
            top *= 1 - x * qk
        bottom = 1 - qk * q
        for y in dens:
            bottom *= 1 - y * qk
        return top / _checked(bottom, ctx, "phi", k)

    return _sum_by_ratio(ratio, ctx, order, f"{len(nums)}phi{len(dens)}")


def _vwp_factor_ratio(a: Any, k: int, qk: Any, ctx: QContext) -> Any:
    """``(1 - a)_{k+1}(1 - a q^{2k+2}) / ((1 - a)_k (1 - a q^{2k}))`` with the k = 0 cancellation."""
    q = ctx.q
    aqk = a * qk
    if k == 0:
        return 1 - a * q * q
    return (1 - aqk) * (1 - aqk * qk * q * q) / _checked(1 - aqk * qk, ctx, "very-well-poised factor", k)


def eval_vwp_series(a: Any, params: Sequence[Any], z: Any, ctx: QContext, label: str = "vwp") -> Any:
    """Very-well-poised series with numerator parameters ``params`` and argument ``z``."""
    a = ctx.num(a)
    params = [ctx.num(p) for p in params]
    z = ctx.num(z)
    order = _min_termination([a] + params, ctx)
    if order is None and abs(z) >= 1:
        raise DomainError(f"{label}: argument |z| = {ctx.mp.nstr(abs(z), 8)} outside the unit disk")
    q = ctx.q
    aq = a * q
    partners = [aq / p for p in params]

    def ratio(k: int, qk: Any) -> Any:
        top = z * _vwp_factor_ratio(a, k, qk, ctx)
        bottom = 1 - qk * q
        for p, w in zip(params, partners):
            top *= 1 - p * qk
            bottom *= 1 - w * qk
        return top / _checked(bottom, ctx, label, k)

    return _sum_by_ratio(ratio, ctx, order, label)


# ------------------------------------------------------------------
# The 10phi9 and the 8phi7 family
#
def eval_10phi9(inst: Vwp10phi9Instance) -> Any:
    """Terminating balanced ``phi(a; b, c, d, e, f, g, h)`` at argument ``q``."""
    if not inst.terminating:
        raise UnsupportedError("non-terminating 10phi9 evaluation is not provided")
    ctx = inst.base.ctx
    return eval_vwp_series(inst.base.a, inst.numerators, ctx.q, ctx, label="10phi9")


def phi10(ctx: QContext, a: Any, b: Any, c: Any, d: Any, e: Any, f: Any, g: Any, h: Any) -> Any:
    """Shorthand for ``eval_10phi9`` on explicit parameters."""
    return eval_10phi9(Vwp10phi9Instance(VwpParams(a, b, c, d, e, f, ctx), g, h))


def w_argument(a: Any, b: Any, c: Any, d: Any, e: Any, f: Any, ctx: QContext) -> Any:
    a = ctx.num(a)
    return a * a * ctx.q * ctx.q / (ctx.num(b) * c * d * e * f)


def eval_w(a: Any, b: Any, c: Any, d: Any, e: Any, f: Any, ctx: QContext) -> Any:
    """The 8phi7 ``W(a; b, c, d, e, f)`` with argument ``a^2 q^2 / (bcdef)``."""
    return eval_vwp_series(a, (b, c, d, e, f), w_argument(a, b, c, d, e, f, ctx), ctx, label="W")


def eval_wtilde(a: Any, b: Any, c: Any, d: Any, e: Any, f: Any, ctx: QContext) -> Any:
    """``W~(a; b..f) = (aq/b, ..., aq/f)_inf W(a; b..f)`` in regularised form.

    Each term carries ``prod_x (a q^{k+1}/x)_inf`` in place of the
    division by ``(aq/x)_k``.  Those tail products are generated by
    downward multiplication from the last index, so zero factors are
    reproduced exactly instead of being divided out.
    """
    a = ctx.num(a)
    params = [ctx.num(x) for x in (b, c, d, e, f)]
    z = w_argument(a, *params, ctx)
    order = _min_termination([a] + params, ctx)
    if order is None and abs(z) >= 1:
        raise DomainError(f"W~: argument |z| = {ctx.mp.nstr(abs(z), 8)} outside the unit disk")
    q = ctx.q

    # coefficients without the (aq/x)_k denominators
    coeffs: List[Any] = [ctx.one]
    coeff = ctx.one
    scale = ctx.mp.mpf(1)
    qk = ctx.one
    limit = ctx.max_terms if order is None else order
    for k in range(limit):
        r = z * _vwp_factor_ratio(a, k, qk, ctx) / (1 - qk * q)
        for p in params:
            r *= 1 - p * qk
        coeff = coeff * r
        coeffs.append(coeff)
        qk = qk * q
        size = abs(coeff)
        if size > scale:
            scale = size
        if order is None and k + 1 >= MIN_TERMS:
            rho = abs(r)
            if rho < 1 and size <= ctx.series_tol * scale * (1 - rho):
                break
    else:
        if order is None:
            raise NonConvergenceError(f"W~ did not converge in {ctx.max_terms} terms")

    last = len(coeffs) - 1
    partners = [a * q / p for p in params]
    tail = qpoch_multi([w * ctx.qpow(last) for w in partners], ctx)
    terms: List[Any] = [ctx.zero] * len(coeffs)
    for k in range(last, -1, -1):
        terms[k] = coeffs[k] * tail
        if k:
            qk1 = ctx.qpow(k - 1)
            for w in partners:
                tail *= 1 - w * qk1
    return ctx.mp.fsum(terms)


def eval_u(a: Any, b: Any, c: Any, d: Any, e: Any, f: Any, ctx: QContext) -> Any:
    """``U(a; b..f) = W~(a; b..f) / (aq, b, c, d, e, f)_inf``."""
    a = ctx.num(a)
    den_args = [a * ctx.q, b, c, d, e, f]
    if qpoch_multi_vanishes(den_args, ctx):
        raise PoleError("U: (aq, b, c, d, e, f)_inf vanishes")
    return eval_wtilde(a, b, c, d, e, f, ctx) / qpoch_multi(den_args, ctx)


# ------------------------------------------------------------------
# Product form of the W~ ratio in terminating cases
#
def wtilde_ratio_products(params: VwpParams) -> Tuple[Any, str]:
    """``W~(a; b..f) / W~(q/a; q/b..q/f)`` from its infinite-product form.

    Applies when ``s = q^M`` and ``b/a = q^N`` for integers ``M`` and ``N``.
    The multiplier depends on which of ``aq^3/(bs) = q^{-n}`` (n >= 0) or
    ``bs/(aq) = q^{-n}`` (n >= -1) holds; the branch label is returned
    with the value.
    """
    ctx = params.ctx
    q = ctx.q
    a, b, c, d, e, f = params.a, params.b, params.c, params.d, params.e, params.f
    s = params.s
    big_n = _integer_exponent(b / a, ctx)
    big_m = _integer_exponent(s, ctx)
    if big_n is None or big_m is None:
        raise DomainError("product form needs s = q^M and b/a = q^N")
    top = qpoch_multi(
        [a * q, c, d, e, f, a * q * q / s, a * q / (e * f), a * q / (d * f), a * q / (d * e)], ctx
    )
    bottom_args = [b * c / a, b * d / a, b * e / a, b * f / a, q * q / a, q / b, c * d / a, c * e / a, c * f / a]
    if qpoch_multi_vanishes(bottom_args, ctx):
        raise PoleError("product form denominator vanishes")
    ratio = top / qpoch_multi(bottom_args, ctx)
    base = (s / (a * q)) ** big_n
    n = big_n + big_m - 3
    if n >= 0:
        sign = 1 if n % 2 else -1
        lam = sign * base * (c / b) ** (n + 1) * q ** (n * (n + 1) // 2)
        return lam * ratio, "aq^3/(bs)=q^-n"
    n = 1 - big_n - big_m
    sign = 1 if n % 2 else -1
    lam = sign * base * (b / c) ** (n + 1) * q ** ((n + 1) * (n + 2) // 2)
    return lam * ratio, "bs/(aq)=q^-n"


def _integer_exponent(x: Any, ctx: QContext) -> Optional[int]:
    """``k`` with ``x = q^k`` (any sign), or ``None``."""
    k = termination_order(1 / ctx.num(x), ctx)
    if k is not None:
        return k
    k = termination_order(x, ctx)
    return -k if k is not None else None


__all__ = [
    "PhiSpec",
    "VwpParams",
    "Vwp10phi9Instance",
    "eval_phi_generic",
    "eval_vwp_series",
    "eval_10phi9",
    "phi10",
    "w_argument",
    "eval_w",
    "eval_wtilde",
    "eval_u",
    "wtilde_ratio_products",
]
