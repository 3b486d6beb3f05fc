"""
qcore.py
--------

Arbitrary-precision building blocks shared by every other module of
**qentry40**: the evaluation context ``QContext`` and the q-Pochhammer
products

    (x; q)_n   = (1 - x)(1 - xq) ... (1 - xq^{n-1})
    (x; q)_inf = (1 - x)(1 - xq)(1 - xq^2) ...

All scalars are ``mpmath`` complex numbers.  Each ``QContext`` owns a
private ``mpmath.ctx_mp.MPContext`` so that evaluations at different
precisions never interfere with each other, which also makes the
functions below safe to call from several threads at once.  Use the
context to convert inputs (``ctx.num``) and to raise ``q`` to integer
or continuous powers (``ctx.qpow``).  Continuous powers are defined as
``exp(x log q)`` with the principal logarithm, which is what the limit
paths of the recurrence module rely on.

Infinite products stop at the first index ``m >= 8`` with
``|x q^m| < product_tol``.  The neglected tail changes the value by a
relative amount of at most ``|x q^m| / (1 - |q|)``; that bound is
returned by ``qpoch_infinite_detail`` so callers can compose error
budgets.  Every product accepts an optional ``base`` which replaces
``q``; the base-q^2 products of Watson's continued fraction and the
base-q^4 products of the Corollary 8 companion form go through the
same code.
"""

from __future__ import annotations

from typing import Any, Callable, Iterable, NamedTuple, Optional

try:
    from mpmath.ctx_mp import MPContext
except ImportError as e:
    raise RuntimeError(
        "mpmath is required for qentry40 but is not installed. Please install mpmath >= 1.3"
    ) from e

from .errors import DomainError, NonConvergenceError

DEFAULT_PRECISION = 256
MIN_PRECISION = 64
DEFAULT_MAX_TERMS = 20000
#: products always multiply at least this many factors before the tail test
MIN_FACTORS = 8


class QContext:
    """Base ``q`` together with the precision and tolerances of an evaluation.

    :param q: The base, any value ``mpmath`` can convert; ``|q| < 1``.
    :param precision_bits: Working precision in bits (at least 64).
    :param product_tol: Truncation threshold for infinite products.  It is
        raised to ``2**(8 - precision_bits)`` if smaller.
    :param series_tol: Relative tail threshold for series, same floor.
    :param max_terms: Cap on factors or terms before giving up.
    """

    def __init__(
        self,
        q: Any,
        precision_bits: int = DEFAULT_PRECISION,
        product_tol: Optional[Any] = None,
        series_tol: Optional[Any] = None,
        max_terms: int = DEFAULT_MAX_TERMS,
    ) -> None:
        precision_bits = int(precision_bits)
        if precision_bits < MIN_PRECISION:
            raise DomainError(f"precision_bits must be at least {MIN_PRECISION}, got {precision_bits}")
        self.precision_bits = precision_bits
        self.mp = MPContext()
        self.mp.prec = precision_bits
        self.q = self.mp.mpc(q)
        if abs(self.q) >= 1:
            raise DomainError(f"|q| < 1 required, got |q| = {self.mp.nstr(abs(self.q), 8)}")
        floor = self.mp.ldexp(1, 8 - precision_bits)
        self.product_tol = floor if product_tol is None else max(self.mp.mpf(product_tol), floor)
        self.series_tol = floor if series_tol is None else max(self.mp.mpf(series_tol), floor)
        self.max_terms = int(max_terms)
        # parameters of the form q^{-k} are recognised to half the working digits
        self.termination_tol = self.mp.ldexp(1, -(precision_bits // 2))
        # perturbation used by two-point Richardson limits; O(h^2) error stays below rounding^(2/3)
        self.limit_step = self.mp.ldexp(1, -(precision_bits // 3))
        self.one = self.mp.mpc(1)
        self.zero = self.mp.mpc(0)

    def __repr__(self) -> str:
        return f"QContext(q={self.mp.nstr(self.q, 12)}, precision_bits={self.precision_bits})"

    # ------------------------------------------------------------------
    # Conversions and powers
    #
    def num(self, x: Any) -> Any:
        """Convert ``x`` to a complex number at this context's precision."""
        return self.mp.mpc(x)

    def with_precision(self, precision_bits: int) -> "QContext":
        """Return a context with the same ``q`` and default tolerances at a new precision."""
        return QContext(self.q, precision_bits=precision_bits, max_terms=self.max_terms)

    def is_integral(self, x: Any) -> bool:
        if isinstance(x, int):
            return True
        if isinstance(x, float):
            return x.is_integer()
        try:
            return bool(self.mp.isint(x))
        except TypeError:
            return False

    def power(self, z: Any, x: Any) -> Any:
        """``z**x``: exact repeated multiplication for integral ``x``, else ``exp(x log z)``."""
        z = self.num(z)
        if self.is_integral(x):
            return z ** int(x)
        if z == 0:
            raise DomainError("continuous power of zero is undefined")
        return self.mp.exp(x * self.mp.log(z))

    def qpow(self, x: Any) -> Any:
        """``q**x`` with the principal branch for non-integral ``x``."""
        return self.power(self.q, x)

    def sqrt(self, z: Any) -> Any:
        return self.mp.sqrt(self.num(z))

    def is_negligible(self, x: Any) -> bool:
        """True when ``|x|`` is below the termination tolerance."""
        return abs(x) < self.termination_tol


class ProductValue(NamedTuple):
    """Value of a truncated infinite product plus its truncation metadata."""

    value: Any
    tail_bound: Any
    factors: int
    vanishing: bool


def _base(ctx: QContext, base: Optional[Any]) -> Any:
    q = ctx.q if base is None else ctx.num(base)
    if abs(q) >= 1:
        raise DomainError("product base must satisfy |base| < 1")
    return q


def qpoch_finite(x: Any, ctx: QContext, n: int, base: Optional[Any] = None) -> Any:
    """Finite product ``(x; q)_n``; equal to 1 for ``n == 0``.

    :param x: The product parameter.
    :param ctx: Evaluation context.
    :param n: Number of factors, ``n >= 0``.
    :param base: Optional base replacing ``ctx.q``.
    :returns: ``prod_{k<n} (1 - x q^k)``.
    """
    if n < 0:
        raise DomainError(f"qpoch_finite needs n >= 0, got {n}")
    q = ctx.q if base is None else ctx.num(base)
    term = ctx.num(x)
    result = ctx.one
    for _ in range(int(n)):
        result *= 1 - term
        term *= q
    return result


def qpoch_infinite_detail(x: Any, ctx: QContext, base: Optional[Any] = None) -> ProductValue:
    """Infinite product ``(x; q)_inf`` with its a-posteriori tail bound.

    The ``vanishing`` flag reports whether some factor ``1 - x q^k`` is
    below the termination tolerance, i.e. ``x`` is numerically a
    non-positive integer power of the base and the product is zero.
    """
    q = _base(ctx, base)
    term = ctx.num(x)
    if term == 0:
        return ProductValue(ctx.one, ctx.mp.mpf(0), 0, False)
    result = ctx.one
    vanishing = False
    contraction = 1 - abs(q)
    for m in range(ctx.max_terms):
        size = abs(term)
        if m >= MIN_FACTORS and size < ctx.product_tol:
            return ProductValue(result, size / contraction, m, vanishing)
        factor = 1 - term
        if not vanishing and ctx.is_negligible(factor):
            vanishing = True
        result *= factor
        term *= q
    raise NonConvergenceError(
        f"(x; q)_inf with |x| = {ctx.mp.nstr(abs(ctx.num(x)), 6)} did not converge in {ctx.max_terms} factors"
    )


def qpoch_infinite(x: Any, ctx: QContext, base: Optional[Any] = None) -> Any:
    """Infinite product ``(x; q)_inf``."""
    return qpoch_infinite_detail(x, ctx, base).value


def qpoch_multi(xs: Iterable[Any], ctx: QContext, base: Optional[Any] = None) -> Any:
    """``(x1, x2, ..., xk; q)_inf``, the product of single infinite products."""
    result = ctx.one
    for x in xs:
        result *= qpoch_infinite(x, ctx, base)
    return result


def qpoch_multi_vanishes(xs: Iterable[Any], ctx: QContext, base: Optional[Any] = None) -> bool:
    """True if any of the infinite products in ``xs`` is (numerically) zero."""
    return any(qpoch_infinite_detail(x, ctx, base).vanishing for x in xs)


def g_inverse(x: Any, ctx: QContext) -> Any:
    """``1/G(x) = prod_{m>=0} (1 - x q^{2m+1}) = (xq; q^2)_inf``."""
    return qpoch_infinite(ctx.num(x) * ctx.q, ctx, base=ctx.q ** 2)


def termination_order(p: Any, ctx: QContext, base: Optional[Any] = None) -> Optional[int]:
    """Smallest ``k >= 0`` with ``p q^k == 1`` to the termination tolerance.

    Returns ``None`` when ``p`` is not a non-positive integer power of the
    base.  The scan stops once ``|p q^k|`` drops below one half, since
    the terms only shrink from there.
    """
    q = ctx.q if base is None else ctx.num(base)
    term = ctx.num(p)
    for k in range(ctx.max_terms):
        if ctx.is_negligible(term - 1):
            return k
        if abs(term) < 0.5 or q == 0:
            return None
        term *= q
    return None


def richardson_limit(fn: Callable[[Any], Any], ctx: QContext, step: Optional[Any] = None) -> Any:
    """Two-point Richardson estimate of ``lim_{h -> 0} fn(h)``.

    Assumes ``fn(h) = L + c h + O(h^2)`` and returns ``2 fn(h/2) - fn(h)``.
    """
    h = ctx.limit_step if step is None else ctx.mp.mpf(step)
    return 2 * fn(h / 2) - fn(h)


__all__ = [
    "DEFAULT_PRECISION",
    "MIN_PRECISION",
    "QContext",
    "ProductValue",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_infinite_detail",
    "qpoch_multi",
    "qpoch_multi_vanishes",
    "g_inverse",
    "termination_order",
    "richardson_limit",
]
