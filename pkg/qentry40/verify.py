"""
verify.py
---------

Residual checks for every identity the library implements, run on
seeded random parameters.

Each check is a function of a ``Sample``: the sample hands out a base
``q`` (``q = r e^{i theta}`` with ``theta`` in ``[0, pi/4]``), parameters
inside the configured box or inside the convergence annulus of the
boundary series, and terminating parameters ``q^{-n}``.  The check
evaluates both sides of its identity through separate code paths and
returns an ``IdentityResult`` with

    residual = |lhs - rhs| / (|lhs| + |rhs| + 2^-P)

(three-term relations normalise by the sum of the absolute values of
their terms instead).  Checks are registered with their suite, their
nominal number of digits at 256 bits and an ``--explain`` text;
``REFERENCES`` ties each one to the published result it verifies.

Sampling is deterministic: the generator of trial ``t`` of check ``i``
is ``numpy.random.default_rng([seed, i, t, attempt])``.  A sample that
lands within ``1e-3`` of a pole, or outside the annulus when that is
not enforced, is rejected and redrawn with the next ``attempt``;
rejections never shift the draws of other trials.  Trials run on a
thread pool sized by ``psutil.cpu_count`` and are merged back in
registry order, so reports are reproducible bit for bit.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

try:
    import numpy as np
except ImportError as e:
    raise RuntimeError(
        "numpy is required for qentry40.verify but is not installed. Please install numpy >= 1.22"
    ) from e

try:
    import psutil  # type: ignore
except ImportError as e:
    raise RuntimeError(
        "psutil is required for qentry40.verify but is not installed. Please install psutil >= 5.0"
    ) from e

from . import contfrac as cf
from .errors import AnnulusError, DomainError, PoleError
from .hyperq import PhiSpec, VwpParams, eval_phi_generic, eval_u, eval_w, eval_wtilde, phi10, wtilde_ratio_products
from .qcore import DEFAULT_PRECISION, QContext, qpoch_infinite, qpoch_multi, richardson_limit
from .recurrence import (
    PATH_PARAMETER,
    RecurrenceInstance,
    asymptotic_gap,
    boundary_values,
    coeff_a,
    coeff_b,
    decay_rate,
    minimality_ratios,
    prefactor,
    recurrence_terms,
    x1,
    x2,
)

logger = logging.getLogger("qentry40.verify")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _formatter = logging.Formatter("%(asctime)s %(levelname)s: %(message)s")
    _handler.setFormatter(_formatter)
    logger.addHandler(_handler)
    logger.setLevel(logging.INFO)

ALL = "all"
SUITES = ("lemmas", "theorem4", "corollary7", "corollary8", "corollary9", "watson", "remark3")
NOMINAL_PRECISION = 256
REJECT_THRESHOLD = 1e-3
MAX_ATTEMPTS = 50
#: exponents j checked by the near-pole guard on factors 1 - v q^j
GUARD_SPAN = range(-3, 7)


class RejectedSample(PoleError):
    """The drawn parameters sit too close to a pole of the identity."""


@dataclass(frozen=True)
class SampleConfig:
    """How parameters are drawn.

    :param seed: Base seed of every generator.
    :param trials: Trials per identity.
    :param precision_bits: Working precision of each sample's context.
    :param q_range: Bounds on ``|q|``; checks may lower the upper bound.
    :param parameter_box: Bounds on the modulus of free parameters.
    :param annulus_enforce: Keep ``a`` strictly inside ``|s/q| < |a| < |s/q^2|``.
    :param termination_n: Largest termination order of the 10phi9 checks.
    :param max_attempts: Redraws allowed per trial before giving up.
    :param workers: Thread count; ``None`` uses ``psutil.cpu_count()``.
    :param fault: Relative perturbation of ``a_1`` in the Theorem 4 fraction.
    """

    seed: int = 1
    trials: int = 20
    precision_bits: int = DEFAULT_PRECISION
    q_range: Tuple[float, float] = (0.1, 0.6)
    parameter_box: Tuple[float, float] = (0.3, 3.0)
    annulus_enforce: bool = True
    termination_n: int = 4
    max_attempts: int = MAX_ATTEMPTS
    workers: Optional[int] = None
    fault: float = 0.0

    def __post_init__(self) -> None:
        lo, hi = self.q_range
        if not 0 < lo <= hi < 1:
            raise DomainError(f"q_range must satisfy 0 < lo <= hi < 1, got {self.q_range}")
        lo, hi = self.parameter_box
        if not 0 < lo <= hi:
            raise DomainError(f"parameter_box must satisfy 0 < lo <= hi, got {self.parameter_box}")
        if self.trials < 0 or self.termination_n < 0 or self.max_attempts < 1:
            raise DomainError("trials and termination_n must be >= 0, max_attempts >= 1")


@dataclass
class IdentityResult:
    """Outcome of one trial of one identity.

    ``passed`` is ``residual <= tol`` together with every entry of
    ``gates`` (extra conditions such as a fitted decay rate).  Trials that
    end in an error carry ``residual = None`` and the message in
    ``diagnostics["error"]``.
    """

    id: str
    suite: str
    trial: int
    params: Dict[str, Any]
    lhs: Any
    rhs: Any
    residual: Any
    tol: float
    passed: bool
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    gates: Dict[str, bool] = field(default_factory=dict)
    rejects: int = 0


@dataclass(frozen=True)
class CheckInfo:
    """A registered identity check."""

    id: str
    suite: str
    fn: Callable[["Sample"], IdentityResult]
    digits: Optional[float] = None
    fixed_tol: Optional[float] = None
    q_max: Optional[float] = None
    explain: str = ""

    def tolerance(self, precision_bits: int) -> float:
        """Fixed tolerance, or ``10^{-digits}`` rescaled from 256 bits to ``precision_bits``."""
        if self.fixed_tol is not None:
            return self.fixed_tol
        return 10.0 ** (-self.digits * precision_bits / NOMINAL_PRECISION)


REGISTRY: Dict[str, CheckInfo] = {}


def register(
    check_id: str,
    suite: str,
    *,
    digits: Optional[float] = None,
    fixed_tol: Optional[float] = None,
    q_max: Optional[float] = None,
    explain: str = "",
) -> Callable[[Callable[["Sample"], IdentityResult]], Callable[["Sample"], IdentityResult]]:
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}")
    if (digits is None) == (fixed_tol is None):
        raise DomainError("give exactly one of digits and fixed_tol")

    def wrap(fn: Callable[["Sample"], IdentityResult]) -> Callable[["Sample"], IdentityResult]:
        REGISTRY[check_id] = CheckInfo(check_id, suite, fn, digits, fixed_tol, q_max, explain)
        return fn

    return wrap


# ------------------------------------------------------------------
# Sampling
#
class Sample:
    """Random draws for one attempt of one trial, plus result assembly."""

    def __init__(self, info: CheckInfo, config: SampleConfig, index: int, trial: int, attempt: int = 0) -> None:
        self.info = info
        self.config = config
        self.trial = trial
        self.rng = np.random.default_rng([config.seed, index, trial, attempt])
        self.params: Dict[str, Any] = {}
        self.ctx: Optional[QContext] = None

    # draws -------------------------------------------------------------
    def uniform(self, lo: float, hi: float) -> float:
        return float(self.rng.uniform(lo, hi))

    def pick(self, options: Sequence[Any]) -> Any:
        return options[int(self.rng.integers(len(options)))]

    def context(self) -> QContext:
        lo, hi = self.config.q_range
        if self.info.q_max is not None:
            hi = min(hi, self.info.q_max)
            lo = min(lo, hi)
        r = self.uniform(lo, hi)
        theta = self.uniform(0.0, math.pi / 4)
        self.ctx = QContext(complex(r * math.cos(theta), r * math.sin(theta)), self.config.precision_bits)
        self.params["q"] = self.ctx.q
        return self.ctx

    def point(self, lo: Optional[float] = None, hi: Optional[float] = None) -> Any:
        """Complex number with modulus in ``[lo, hi]`` (default: the parameter box) and uniform argument."""
        box_lo, box_hi = self.config.parameter_box
        r = self.uniform(box_lo if lo is None else lo, box_hi if hi is None else hi)
        phi = self.uniform(0.0, 2 * math.pi)
        return self.ctx.num(complex(r * math.cos(phi), r * math.sin(phi)))

    def annulus(self, m: int, band: Tuple[float, float] = (0.3, 0.7)) -> Any:
        """``a`` with ``|a| = |q|^{m-1-t}``; ``t`` in ``band`` keeps it inside the annulus for ``s = q^m``."""
        ctx = self.ctx
        t = self.uniform(*band) if self.config.annulus_enforce else self.uniform(-0.25, 1.25)
        phi = self.uniform(0.0, 2 * math.pi)
        return abs(ctx.q) ** ctx.mp.mpf(m - 1 - t) * ctx.mp.expj(phi)

    def termination(self, top: Optional[int] = None) -> int:
        """Termination order cycling through ``0..top`` with the trial index."""
        top = self.config.termination_n if top is None else top
        return self.trial % (top + 1)

    def instance(self, m: int, band: Tuple[float, float] = (0.3, 0.7)) -> RecurrenceInstance:
        """Recurrence instance with ``s = q^m`` and ``a`` in the annulus."""
        ctx = self.ctx
        b, c, d, e = (self.point() for _ in range(4))
        a = self.annulus(m, band)
        inst = RecurrenceInstance.from_exponent(ctx, a, b, c, d, e, m)
        p = inst.params
        others = list(p.others)
        self.guard_powers([a, inst.s / a] + others + [a / x for x in others] + [x * inst.s / a for x in others])
        self.record(m=m, **p.labelled())
        return inst

    # guards ------------------------------------------------------------
    def guard(self, *factors: Any) -> None:
        for factor in factors:
            if abs(factor) < REJECT_THRESHOLD:
                raise RejectedSample(f"factor of modulus {float(abs(factor)):.2e} below {REJECT_THRESHOLD}")

    def guard_powers(self, values: Iterable[Any], span: Iterable[int] = GUARD_SPAN) -> None:
        """Reject when some ``1 - v q^j`` is near zero."""
        q = self.ctx.q
        powers = [q ** j for j in span]
        for v in values:
            self.guard(*(1 - v * qj for qj in powers))

    # results -----------------------------------------------------------
    def record(self, **values: Any) -> None:
        self.params.update(values)

    def result(
        self,
        lhs: Any,
        rhs: Any,
        *,
        residual: Optional[Any] = None,
        scale: Optional[Any] = None,
        diagnostics: Optional[Dict[str, Any]] = None,
        gates: Optional[Dict[str, bool]] = None,
    ) -> IdentityResult:
        ctx = self.ctx
        floor = ctx.mp.ldexp(1, -ctx.precision_bits)
        if residual is None:
            if scale is None:
                scale = abs(lhs) + abs(rhs)
            residual = abs(lhs - rhs) / (scale + floor)
        tol = self.info.tolerance(self.config.precision_bits)
        gates = dict(gates or {})
        passed = bool(residual <= tol) and all(gates.values())
        return IdentityResult(
            id=self.info.id,
            suite=self.info.suite,
            trial=self.trial,
            params=dict(self.params),
            lhs=lhs,
            rhs=rhs,
            residual=residual,
            tol=tol,
            passed=passed,
            diagnostics=dict(diagnostics or {}),
            gates=gates,
        )

    def result_pairs(self, pairs: Sequence[Tuple[Any, Any]], diagnostics: Optional[Dict[str, Any]] = None) -> IdentityResult:
        """Result for the worst of several ``(lhs, rhs)`` pairs."""
        floor = self.ctx.mp.ldexp(1, -self.ctx.precision_bits)
        worst = max(pairs, key=lambda p: abs(p[0] - p[1]) / (abs(p[0]) + abs(p[1]) + floor))
        return self.result(worst[0], worst[1], diagnostics=diagnostics)

    def result_terms(self, rows: Sequence[Sequence[Any]], diagnostics: Optional[Dict[str, Any]] = None) -> IdentityResult:
        """Result for the worst of several relations ``sum(row) == 0``.

        Reported as ``lhs = row[0] + row[2:]`` against ``rhs = -row[1]``.
        """
        floor = self.ctx.mp.ldexp(1, -self.ctx.precision_bits)

        def weight(row: Sequence[Any]) -> Any:
            return sum(abs(t) for t in row) + floor

        worst = max(rows, key=lambda row: abs(sum(row)) / weight(row))
        lhs = worst[0] + sum(worst[2:], self.ctx.zero)
        return self.result(lhs, -worst[1], scale=weight(worst) - floor, diagnostics=diagnostics)


def _prod(values: Iterable[Any], ctx: QContext) -> Any:
    out = ctx.one
    for v in values:
        out *= v
    return out


# ------------------------------------------------------------------
# Contiguous relations of the terminating 10phi9
#
def _balanced_family(sample: Sample, n: int) -> Tuple[Any, ...]:
    """``(a, b, c, d, e, f, g, h)`` with ``h = q^{-n}`` and ``g`` fixed by the balance condition."""
    ctx = sample.ctx
    q = ctx.q
    a, b, c, d, e, f = (sample.point() for _ in range(6))
    h = ctx.qpow(-n)
    g = a ** 3 * q * q / (b * c * d * e * f * h)
    xs = (b, c, d, e, f, g, h)
    sample.guard_powers([a * q / x for x in xs] + [a, a * a, g] + list(xs[:-1]))
    sample.guard(*(1 - x / y for x in xs for y in xs if x is not y))
    sample.record(n=n, a=a, b=b, c=c, d=d, e=e, f=f, g=g, h=h)
    return a, b, c, d, e, f, g, h


@register(
    "lemma1",
    "lemmas",
    digits=30,
    explain=(
        "phi(a; b/q, cq, d, e, f, g, h) - phi(a; b, ..., h) equals an explicit rational coefficient "
        "times phi(aq^2; b, cq, dq, eq, fq, gq, hq).  Terminating 10phi9 with h = q^-n, g fixed by "
        "a^3 q^2 = bcdefgh.  At n = 0 the coefficient carries (1 - h) = 0 and the shifted series is skipped."
    ),
)
def check_lemma1(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    n = sample.termination()
    a, b, c, d, e, f, g, h = _balanced_family(sample, n)
    aq = a * q
    rest = (d, e, f, g, h)
    base = phi10(ctx, a, b, c, d, e, f, g, h)
    lhs = phi10(ctx, a, b / q, c * q, d, e, f, g, h) - base
    num = aq / c * (1 - c * q / b) * (1 - b * c / aq) * (1 - aq) * (1 - aq * q) * _prod((1 - x for x in rest), ctx)
    den = (1 - aq / b) * (1 - aq * q / b) * (1 - a / c) * (1 - aq / c) * _prod((1 - aq / x for x in rest), ctx)
    if n == 0:
        rhs = ctx.zero
    else:
        rhs = num / den * phi10(ctx, aq * q, b, c * q, d * q, e * q, f * q, g * q, h * q)
    return sample.result(lhs, rhs, diagnostics={"n": n})


@register(
    "eq24",
    "lemmas",
    digits=30,
    explain=(
        "Three-term relation among phi(a; b/q, cq, d, ...), phi(a; b/q, c, dq, ...) and phi(a; b, c, d, ...) "
        "with coefficients c(1-c)(1-a/c)(1-dq/b)(1-bd/aq), d(1-d)(1-a/d)(1-cq/b)(1-bc/aq) and "
        "d(1-b/q)(1-c/d)(1-aq/b)(1-cd/a).  Same sampling as lemma1."
    ),
)
def check_eq24(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    n = sample.termination()
    a, b, c, d, e, f, g, h = _balanced_family(sample, n)
    aq = a * q
    t1 = c * (1 - c) * (1 - a / c) * (1 - d * q / b) * (1 - b * d / aq) * phi10(ctx, a, b / q, c * q, d, e, f, g, h)
    t2 = d * (1 - d) * (1 - a / d) * (1 - c * q / b) * (1 - b * c / aq) * phi10(ctx, a, b / q, c, d * q, e, f, g, h)
    t3 = d * (1 - b / q) * (1 - c / d) * (1 - aq / b) * (1 - c * d / a) * phi10(ctx, a, b, c, d, e, f, g, h)
    return sample.result_terms([(t1, -t2, t3)], diagnostics={"n": n})


@register(
    "lemma2",
    "lemmas",
    digits=30,
    explain=(
        "Three-term relation among phi(aq^2; b, cq, ..., gq, hq), phi(aq^2; bq, ..., gq, h) and "
        "phi(a; b, ..., h), obtained by eliminating the c-shift from lemma1 and its b/h mirror."
    ),
)
def check_lemma2(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    n = sample.termination()
    a, b, c, d, e, f, g, h = _balanced_family(sample, n)
    aq = a * q
    mid = (c, d, e, f, g)
    base = phi10(ctx, a, b, c, d, e, f, g, h)
    if n == 0:
        u1 = ctx.zero
    else:
        u1 = b * b * (1 - h) * _prod((1 - aq / (b * x) for x in mid), ctx) / ((1 - aq / b) * (1 - aq * q / b))
        u1 *= phi10(ctx, aq * q, b, c * q, d * q, e * q, f * q, g * q, h * q)
    u2 = h * h * (1 - b) * _prod((1 - aq / (h * x) for x in mid), ctx) / ((1 - aq / h) * (1 - aq * q / h))
    u2 *= phi10(ctx, aq * q, b * q, c * q, d * q, e * q, f * q, g * q, h)
    u3 = b * (1 - h / b) * _prod((1 - aq / x for x in mid), ctx) / ((1 - aq) * (1 - aq * q)) * base
    return sample.result_terms([(u1, -u2, -u3)], diagnostics={"n": n})


@register(
    "theorem3",
    "lemmas",
    digits=30,
    explain=(
        "The contiguous relation in the pair (g, h): combinations of phi(a; ..., g/q, hq) - phi and "
        "phi(a; ..., gq, h/q) - phi balance phi itself.  This relation produces the difference equation."
    ),
)
def check_theorem3(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    n = sample.termination()
    a, b, c, d, e, f, g, h = _balanced_family(sample, n)
    aq = a * q
    five = (b, c, d, e, f)
    base = phi10(ctx, a, b, c, d, e, f, g, h)
    if n == 0:
        v1 = ctx.zero
    else:
        v1 = g * (1 - h) * (1 - a / h) * (1 - aq / h) * _prod((1 - aq / (g * x) for x in five), ctx) / (1 - h * q / g)
        v1 *= phi10(ctx, a, b, c, d, e, f, g / q, h * q) - base
    v2 = h * (1 - g) * (1 - a / g) * (1 - aq / g) * _prod((1 - aq / (h * x) for x in five), ctx) / (1 - g * q / h)
    v2 *= phi10(ctx, a, b, c, d, e, f, g * q, h / q) - base
    v3 = aq / h * (1 - h / g) * (1 - g * h / aq) * _prod((1 - x for x in five), ctx) * base
    return sample.result_terms([(v1, -v2, -v3)], diagnostics={"n": n})


@register(
    "contig8phi7",
    "lemmas",
    digits=30,
    explain=(
        "Contiguous relation of W(a; b, c, d, e, f) in f: q(1-1/f)(1-a^2q/bcdef)(1-a/f)(1-aq/f)[W(fq) - W] "
        "+ prod(1-aq/fx)[W(f/q) - W] + (a^2q^2/bcdef^2) prod(1-x) W = 0 over x = b..e.  Even trials "
        "use f = q^-2 (terminating), odd trials a convergent non-terminating sample."
    ),
)
def check_contig_8phi7(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    a = sample.point(0.3, 1.0)
    b, c, d, e = (sample.point() for _ in range(4))
    terminating = sample.trial % 2 == 0
    f = ctx.qpow(-2) if terminating else sample.point()
    four = (b, c, d, e)
    bcdef = b * c * d * e * f
    if not terminating and abs(a * a * q / bcdef) > 0.7:
        raise RejectedSample("W(fq) argument too close to the unit circle")
    sample.guard_powers([a * q / x for x in four + (f, f * q, f / q)] + [a, a * a] + list(four))
    sample.record(a=a, b=b, c=c, d=d, e=e, f=f, terminating=terminating)
    w = eval_w(a, b, c, d, e, f, ctx)
    w_up = eval_w(a, b, c, d, e, f * q, ctx)
    w_down = eval_w(a, b, c, d, e, f / q, ctx)
    t1 = q * (1 - 1 / f) * (1 - a * a * q / bcdef) * (1 - a / f) * (1 - a * q / f) * (w_up - w)
    t2 = _prod((1 - a * q / (f * x) for x in four), ctx) * (w_down - w)
    t3 = a * a * q * q / (bcdef * f) * _prod((1 - x for x in four), ctx) * w
    return sample.result_terms([(t1, t2, t3)])


@register(
    "symmetry",
    "lemmas",
    digits=30,
    explain=(
        "Under x -> q/x for all six parameters (so s -> q^4/s, sqrt(s) -> q^2/sqrt(s)) and index "
        "n -> -n-1, a_n is invariant and b_n becomes b_{n+1}.  Checked at n = 0, 1/2, 1, 17/10, 2, 3 "
        "with generic s through the raw coefficient formulas."
    ),
)
def check_symmetry(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    mp = ctx.mp
    params = VwpParams(*(sample.point() for _ in range(6)), ctx)
    inst = RecurrenceInstance(params)
    sample.guard_powers([params.a, params.s / params.a] + list(params.others) + [params.a / x for x in params.others])
    sample.record(**params.labelled())
    image = inst.image()
    pairs = []
    for n in (0, mp.mpf(1) / 2, 1, mp.mpf(17) / 10, 2, 3):
        pairs.append((coeff_a(inst, n), coeff_a(image, -n - 1)))
        pairs.append((coeff_b(inst, n + 1), coeff_b(image, -n - 1)))
    return sample.result_pairs(pairs, diagnostics={"points": len(pairs)})


@register(
    "lemma5",
    "lemmas",
    digits=30,
    explain=(
        "For b/a = q^N: U(a; b, c, d, e, f) = (s/aq)^N U(b^2/a; b, bc/a, bd/a, be/a, bf/a), "
        "U being W~ over (aq, b, c, d, e, f)_inf.  N cycles through 0, 1, 2, -1, -2."
    ),
)
def check_lemma5(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    big_n = (0, 1, 2, -1, -2)[sample.trial % 5]
    a = sample.point(0.3, 0.7)
    c, d, e, f = (sample.point(1.0, 3.0) for _ in range(4))
    b = a * ctx.qpow(big_n)
    s = a ** 3 * q ** 3 / (b * c * d * e * f)
    sample.guard_powers([a, b, c, d, e, f] + [a * q / x for x in (c, d, e, f)] + [b * x / a for x in (c, d, e, f)])
    sample.record(N=big_n, a=a, b=b, c=c, d=d, e=e, f=f)
    lhs = eval_u(a, b, c, d, e, f, ctx)
    rhs = (s / (a * q)) ** big_n * eval_u(b * b / a, b, b * c / a, b * d / a, b * e / a, b * f / a, ctx)
    return sample.result(lhs, rhs, diagnostics={"N": big_n})


#: (M, N) pairs with s = q^M and b/a = q^N; both product branches occur
LEMMA6_CASES = ((2, 1), (1, 1), (3, 0), (2, 2), (1, 0), (3, -1), (4, -1), (2, 0))


@register(
    "lemma6",
    "lemmas",
    digits=30,
    explain=(
        "For s = q^M and b/a = q^N the ratio W~(a; b..f)/W~(q/a; q/b..q/f) is lambda times a ratio of "
        "nine-by-nine infinite products; lambda depends on whether aq^3/(bs) = q^-n with n >= 0 or "
        "bs/(aq) = q^-n.  The two conditions are complementary, so each case uses exactly one branch; "
        "the branch label is reported."
    ),
)
def check_lemma6(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    big_m, big_n = LEMMA6_CASES[sample.trial % len(LEMMA6_CASES)]
    a = abs(q) ** ctx.mp.mpf(big_m - 1.5) * ctx.mp.expj(sample.uniform(0.0, 2 * math.pi))
    b = a * ctx.qpow(big_n)
    c, d, e = (sample.point() for _ in range(3))
    params = VwpParams.with_s(ctx, a, b, c, d, e, ctx.qpow(big_m))
    f = params.f
    sample.guard_powers([b * c / a, b * d / a, b * e / a, b * f / a, q * q / a, q / b, c * d / a, c * e / a, c * f / a])
    sample.guard_powers([a * q / x for x in params.others] + [x / a for x in params.others])
    sample.record(M=big_m, N=big_n, **params.labelled())
    img = params.image()
    lhs = eval_wtilde(a, b, c, d, e, f, ctx) / eval_wtilde(img.a, img.b, img.c, img.d, img.e, img.f, ctx)
    rhs, branch = wtilde_ratio_products(params)
    return sample.result(lhs, rhs, diagnostics={"M": big_m, "N": big_n, "branch": branch})


@register(
    "eq310",
    "lemmas",
    digits=30,
    explain=(
        "lim_{e -> q^-n} (e)_inf 4phi3(a, b, c, d; e, f, g; q, q) equals "
        "q^{n+1} (a, b, c, d, fq^{n+1}, gq^{n+1}, q^{n+2})_inf / (aq^{n+1}, bq^{n+1}, cq^{n+1}, dq^{n+1}, f, g)_inf "
        "times the shifted 4phi3.  The limit is a two-point Richardson extrapolation in e = q^-n (1 + delta)."
    ),
)
def check_eq310(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    q = ctx.q
    n = sample.termination(2)
    a, b, c, d, f, g = (sample.point() for _ in range(6))
    shift = ctx.qpow(n + 1)
    sample.guard_powers([f, g])
    sample.guard(*(1 - x * shift for x in (a, b, c, d)))
    sample.record(n=n, a=a, b=b, c=c, d=d, f=f, g=g)
    pole = ctx.qpow(-n)

    def regularised(delta: Any) -> Any:
        e = pole * (1 + delta)
        series = eval_phi_generic(PhiSpec([a, b, c, d], [e, f, g], q, ctx))
        return qpoch_infinite(e, ctx) * series

    lhs = richardson_limit(regularised, ctx)
    top = qpoch_multi([a, b, c, d, f * shift, g * shift, shift * q], ctx)
    bottom = qpoch_multi([a * shift, b * shift, c * shift, d * shift, f, g], ctx)
    shifted = eval_phi_generic(PhiSpec([a * shift, b * shift, c * shift, d * shift], [shift * q, f * shift, g * shift], q, ctx))
    rhs = top / bottom * shift * shifted
    return sample.result(lhs, rhs, diagnostics={"n": n, "limit_step": ctx.limit_step})


# ------------------------------------------------------------------
# The difference equation and Theorem 4
#
def _exponent(sample: Sample, choices: Sequence[int] = (1, 2, 3, 4)) -> int:
    return choices[sample.trial % len(choices)]


def _recurrence_check(sample: Sample, kind: int) -> IdentityResult:
    sample.context()
    inst = sample.instance(_exponent(sample))
    weights = boundary_values(inst) if kind == 3 else None
    rows = [recurrence_terms(inst, kind, n, weights) for n in range(1, 9)]
    return sample.result_terms(rows, diagnostics={"kind": kind, "n_range": "1..8"})


_RECURRENCE_TEXT = (
    "X_{n+1} - a_n X_n + b_n X_{n-1} = 0 for n = 1..8 at s = q^m, m cycling through 1..4; "
    "a_0, b_1 and X_0 use the index limit at m = 1, 2."
)


@register("recurrence_x1", "theorem4", digits=28, explain="First explicit solution (terminating 10phi9 with h = q^-n).  " + _RECURRENCE_TEXT)
def check_recurrence_x1(sample: Sample) -> IdentityResult:
    return _recurrence_check(sample, 1)


@register("recurrence_x2", "theorem4", digits=28, explain="Second explicit solution (image parameters, terminating through q^{-n+2}/s).  " + _RECURRENCE_TEXT)
def check_recurrence_x2(sample: Sample) -> IdentityResult:
    return _recurrence_check(sample, 2)


@register("recurrence_x3", "theorem4", digits=28, explain="Minimal solution W_2 X1 - W_1 X2 with a inside the annulus.  " + _RECURRENCE_TEXT)
def check_recurrence_x3(sample: Sample) -> IdentityResult:
    return _recurrence_check(sample, 3)


ASYMPTOTIC_POINTS = (5, 10, 15, 20, 25)
#: fitted rate must reach this share of the predicted one
RATE_SHARE = 0.9


def _asymptotic_check(sample: Sample, kind: int) -> IdentityResult:
    ctx = sample.context()
    mp = ctx.mp
    # the gap decays like max(|q|, |z|)^n, z the argument of the limiting W
    band = (0.85, 0.95) if kind == 1 else (0.05, 0.15)
    inst = sample.instance(_exponent(sample), band)
    weights = boundary_values(inst)
    a, s, q = inst.params.a, inst.s, ctx.q
    z = s / (a * q) if kind == 1 else a * q * q / s
    points = [(n, asymptotic_gap(inst, n, kind, weights)) for n in ASYMPTOTIC_POINTS]
    rate = decay_rate(points)
    expected = float(min(-mp.log(abs(q)), -mp.log(abs(z))))
    last = ASYMPTOTIC_POINTS[-1]
    solver = x1 if kind == 1 else x2
    lhs = solver(inst, last) / prefactor(inst, last)
    return sample.result(
        lhs,
        weights[kind - 1],
        diagnostics={"rate": rate, "expected_rate": expected, "n": last},
        gates={"rate": rate >= RATE_SHARE * expected},
    )


@register(
    "asymptotic_w1",
    "theorem4",
    fixed_tol=1e-10,
    q_max=0.25,
    explain=(
        "X1_n q^{n^2/2 - n} s^{n/2} -> W(a; b..f); gap at n = 25 below 1e-10 and a fitted geometric "
        "rate of at least 0.9 min(|log q|, |log z|), z = s/(aq).  a sits near the inner annulus edge."
    ),
)
def check_asymptotic_w1(sample: Sample) -> IdentityResult:
    return _asymptotic_check(sample, 1)


@register(
    "asymptotic_w2",
    "theorem4",
    fixed_tol=1e-10,
    q_max=0.25,
    explain=(
        "X2_n q^{n^2/2 - n} s^{n/2} -> W(q/a; q/b..q/f); gap at n = 25 below 1e-10 and a fitted rate "
        "of at least 0.9 min(|log q|, |log z|), z = aq^2/s.  a sits near the outer annulus edge."
    ),
)
def check_asymptotic_w2(sample: Sample) -> IdentityResult:
    return _asymptotic_check(sample, 2)


@register(
    "minimality",
    "theorem4",
    fixed_tol=1e-10,
    q_max=0.3,
    explain="|X3_n / X1_n| / |W_2| at n = 25 is below 1e-10 and decreases along n = 5, 10, ..., 25.",
)
def check_minimality(sample: Sample) -> IdentityResult:
    sample.context()
    inst = sample.instance(_exponent(sample))
    w1, w2 = boundary_values(inst)
    ratios = minimality_ratios(inst, ASYMPTOTIC_POINTS)
    residual = ratios[-1] / abs(w2)
    decreasing = all(later < earlier for earlier, later in zip(ratios, ratios[1:]))
    return sample.result(
        ratios[-1],
        sample.ctx.zero,
        residual=residual,
        diagnostics={"ratios": ratios},
        gates={"decreasing": decreasing},
    )


@register(
    "theorem4",
    "theorem4",
    digits=25,
    q_max=0.5,
    explain=(
        "1/a_0 - b_1/a_1 - b_2/a_2 - ... equals X3_0 / (a_0 X3_0 - X3_1) for s = q^m, m = 1..4; "
        "index limits for a_0, b_1 at m = 1, 2.  The fault hook perturbs a_1 here."
    ),
)
def check_theorem4(sample: Sample) -> IdentityResult:
    sample.context()
    inst = sample.instance(_exponent(sample))
    value = cf.eval_cf(cf.theorem4_spec(inst, perturb_a1=sample.config.fault))
    rhs = cf.theorem4_rhs(inst)
    return sample.result(value.value, rhs, diagnostics=_cf_diagnostics(value))


def _cf_diagnostics(value: cf.CFResult) -> Dict[str, Any]:
    return {"depth": value.depth, "delta": value.delta, "converged": value.converged}


@register(
    "tail_ratio",
    "theorem4",
    fixed_tol=1e-10,
    q_max=0.35,
    explain=(
        "b_n / (a_n a_{n-1}) -> q/(1+q)^2, the parabola-theorem quantity; value at n = 40 and a fitted "
        "geometric rate of at least 0.9 |log q| over n = 6..30."
    ),
)
def check_tail_ratio(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    inst = sample.instance(_exponent(sample))
    spec = cf.theorem4_spec(inst)
    limit = cf.parabola_tail_limit(ctx)
    points = [(n, abs(cf.tail_ratio(spec, n) - limit) / abs(limit)) for n in range(6, 31, 4)]
    rate = decay_rate(points)
    expected = float(-ctx.mp.log(abs(ctx.q)))
    return sample.result(
        cf.tail_ratio(spec, 40),
        limit,
        diagnostics={"rate": rate, "expected_rate": expected},
        gates={"rate": rate >= RATE_SHARE * expected},
    )


# ------------------------------------------------------------------
# Corollaries
#
def _route_gate(sample: Sample, closed: Any, inst: RecurrenceInstance) -> Tuple[Dict[str, Any], Dict[str, bool]]:
    """Compare a corollary's closed form with the minimal-solution ratio."""
    route = cf.theorem4_rhs(inst)
    gap = abs(closed - route) / (abs(closed) + abs(route))
    return {"theorem4_route": gap}, {"theorem4_route": bool(gap <= sample.info.tolerance(sample.config.precision_bits))}


@register(
    "corollary7",
    "corollary7",
    digits=25,
    q_max=0.5,
    explain=(
        "s = q^2 with alpha = a/b, ..., epsilon = a/f and a^2 = q alpha beta gamma delta epsilon: the "
        "fraction with the simplified coefficients equals 2a(1-q)/(q^{3/2} prod(1-alpha)) (1-V)/(1+V), "
        "V = (q/a, q^2/a)_inf/(a, aq)_inf W~(a; b..f)/W~(q/a; q/b..q/f); also compared with the "
        "minimal-solution ratio."
    ),
)
def check_corollary7(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    inst = sample.instance(2)
    a = inst.params.a
    alphas = [a / x for x in inst.params.others]
    sample.guard(*(1 - x for x in alphas))
    value = cf.eval_cf(cf.corollary7_cf(alphas, ctx, a))
    rhs = cf.corollary7_rhs(alphas, ctx, a)
    diagnostics, gates = _route_gate(sample, rhs, inst)
    diagnostics.update(_cf_diagnostics(value))
    return sample.result(value.value, rhs, diagnostics=diagnostics, gates=gates)


def _terminating_alphas(sample: Sample, orders: Sequence[int]) -> Tuple[List[Any], int, int]:
    """Five parameters, one of beta..epsilon equal to ``q^N`` with ``N`` from ``orders``."""
    ctx = sample.ctx
    order = orders[sample.trial % len(orders)]
    slot = 1 + int(sample.rng.integers(4))
    alphas = [sample.point(0.5, 2.0) for _ in range(5)]
    alphas[slot] = ctx.qpow(order)
    sample.guard(*(x - 1 / x for x in alphas))
    sample.record(**{name: x for name, x in zip(("alpha", "beta", "gamma", "delta", "epsilon"), alphas)}, N=order)
    return alphas, order, slot


@register(
    "corollary7_terminating",
    "corollary7",
    digits=25,
    explain=(
        "With one of beta..epsilon equal to q^{+-n}, the s = q^2 fraction in base q^2 terminates and equals "
        "2(q^-1 - q)/(q prod(alpha - 1/alpha)) (P - Q)/(P + Q) with Watson's products P, Q."
    ),
)
def check_corollary7_terminating(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    alphas, order, _ = _terminating_alphas(sample, (1, -1, 2, -2, 3, -3))
    lhs, rhs = cf.corollary7_terminating(alphas, ctx)
    products = cf.watson_products(alphas, ctx)
    return sample.result(lhs, rhs, diagnostics={"N": order, "condition": products.condition})


@register(
    "watson",
    "watson",
    digits=25,
    explain=(
        "(P - Q)/(P + Q) = A_0/beta_0 + alpha_1/beta_1 + ... with 1/G(x) = (xq; q^2)_inf products over "
        "eight arguments each, terminating when one of beta..epsilon is q^{+-n}, n = 1, 2, 3.  P and Q "
        "are computed at twice the working precision; the condition number (|P| + |Q|)/|P + Q| is reported."
    ),
)
def check_watson(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    alphas, order, slot = _terminating_alphas(sample, (1, -1, 2, -2, 3, -3))
    lhs, rhs = cf.watson_theoremA(alphas, ctx)
    products = cf.watson_products(alphas, ctx)
    return sample.result(lhs, rhs, diagnostics={"N": order, "slot": slot, "condition": products.condition})


def _corollary8_inputs(inst: RecurrenceInstance) -> Tuple[List[Any], List[Any]]:
    """``alpha = u^2`` and fourth roots ``sqrt(u)`` with ``u = a q^{1/2}/x``."""
    ctx = inst.ctx
    half = ctx.qpow(ctx.mp.mpf(1) / 2)
    u = [inst.params.a * half / x for x in inst.params.others]
    return [x * x for x in u], [ctx.sqrt(x) for x in u]


@register(
    "corollary8",
    "corollary8",
    digits=25,
    q_max=0.5,
    explain=(
        "s = q with u = a q^{1/2}/x, alpha = u^2: the fraction with base-q coefficients in u equals "
        "2 (a_0 + (a^2/q)(1/a)_inf^2/((aq)_inf (a/q)_inf) W~_1/W~_2)^-1; also compared with the "
        "minimal-solution ratio."
    ),
)
def check_corollary8(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    inst = sample.instance(1)
    a = inst.params.a
    alphas, roots = _corollary8_inputs(inst)
    value = cf.eval_cf(cf.corollary8_cf(alphas, ctx, a, roots))
    rhs = cf.corollary8_rhs(alphas, ctx, a, roots)
    diagnostics, gates = _route_gate(sample, rhs, inst)
    diagnostics.update(_cf_diagnostics(value))
    return sample.result(value.value, rhs, diagnostics=diagnostics, gates=gates)


@register(
    "corollary8_terminating",
    "corollary8",
    digits=25,
    explain=(
        "One of beta..epsilon equal to q^N, N odd: the s = q fraction in base q^4 terminates and equals "
        "2 (a_0 - (q^2/alpha^2) P'/Q')^-1 with eight-argument base-q^4 products P', Q'."
    ),
)
def check_corollary8_terminating(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    alphas, order, _ = _terminating_alphas(sample, (1, 3, -1, -3))
    lhs, rhs = cf.corollary8_terminating(alphas, ctx)
    return sample.result(lhs, rhs, diagnostics={"N": order})


@register(
    "corollary8_companion",
    "corollary8",
    digits=25,
    explain="Same setting as corollary8_terminating: 1/a_0 - 2b_1/a_1 - b_2/a_2 - ... = -(alpha^2/q^2) Q'/P'.",
)
def check_corollary8_companion(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    alphas, order, _ = _terminating_alphas(sample, (1, 3, -1, -3))
    lhs, rhs = cf.corollary8_companion(alphas, ctx)
    return sample.result(lhs, rhs, diagnostics={"N": order})


REMARK2_DEPTH = 10


@register(
    "remark2",
    "corollary8",
    digits=25,
    q_max=0.5,
    explain=(
        "At s = q the n-th approximant of 1/a_0 - 2b_1/a_1 - b_2/a_2 - ... equals "
        "X2_{n+1} X1_0 / (2 X1_{n+1} X2_1) for n = 0..10, after checking 2X1_1 = a_0 X1_0 and "
        "X2_2 = a_1 X2_1."
    ),
)
def check_remark2(sample: Sample) -> IdentityResult:
    sample.context()
    inst = sample.instance(1)
    approximants = cf.convergents(cf.remark2_spec(inst), REMARK2_DEPTH + 1)
    if any(value is None for value in approximants):
        raise PoleError("remark2: a convergent has a zero denominator")
    pairs = [(cf.remark2_approximant(inst, n), approximants[n]) for n in range(REMARK2_DEPTH + 1)]
    return sample.result_pairs(pairs, diagnostics={"n_range": f"0..{REMARK2_DEPTH}"})


@register(
    "corollary9",
    "corollary9",
    digits=25,
    q_max=0.5,
    explain=(
        "s = q^m, m = 3, 4: the fraction equals q^{(m-3)/2}(1-q^{m-1})(1-a/q)/((1-q^{m-1}/a) prod(1-a/x)) "
        "times [phi(q/a; q/b..q/f, q^{2-m}, q) - W~_2/W~_1 times a product ratio]."
    ),
)
def check_corollary9(sample: Sample) -> IdentityResult:
    sample.context()
    inst = sample.instance(_exponent(sample, (3, 4)))
    value = cf.eval_cf(cf.theorem4_spec(inst))
    rhs = cf.corollary9_rhs(inst)
    return sample.result(value.value, rhs, diagnostics=_cf_diagnostics(value))


@register(
    "corollary9_reduced",
    "corollary9",
    digits=25,
    q_max=0.5,
    explain=(
        "The closed form specialised to s = q (a product ratio times W~_2/W~_1) and s = q^2 equals the "
        "fraction whose a_0 (and b_1 at s = q) is the limit s -> q^m rather than n -> 0."
    ),
)
def check_corollary9_reduced(sample: Sample) -> IdentityResult:
    sample.context()
    inst = sample.instance(_exponent(sample, (1, 2)))
    value = cf.eval_cf(cf.theorem4_spec(inst, PATH_PARAMETER))
    rhs = cf.corollary9_reduced(inst)
    return sample.result(value.value, rhs, diagnostics=_cf_diagnostics(value))


# ------------------------------------------------------------------
# The fraction in f
#
def _remark3_parameters(sample: Sample) -> Tuple[Any, ...]:
    ctx = sample.ctx
    q = ctx.q
    a = sample.point(2.0, 3.0)
    b = sample.point(0.2, 0.5)
    c, d, e = (sample.point(0.5, 1.2) for _ in range(3))
    bcde = b * c * d * e
    if abs(bcde / (a * a * q)) > 0.7:
        raise RejectedSample("W(q/a; ...) argument too close to the unit circle")
    cde = c * d * e
    sample.guard_powers(
        [a, b, c, d, e, q * b / a, q * q * a / cde, bcde / (a * a), d * e * c / a, a * q / b, a * a * q * q / bcde]
        + [a / x for x in (b, c, d, e)]
        + [x / a for x in (b, c, d, e)]
        + [x * y / a for x, y in ((d, e), (d, c), (e, c))]
    )
    sample.record(a=a, b=b, c=c, d=d, e=e)
    return a, b, c, d, e


@register(
    "remark3",
    "remark3",
    digits=25,
    q_max=0.4,
    explain=(
        "The fraction 1/c_0 - d_1/c_1 - ... of the contiguous relation of W in f equals "
        "-(1-a/q)/(q prod(1-a/x)) [W(q/a; q/b, q/c, q/d, q/e, q) - R], R built from three 3phi2 "
        "series at argument b (|b| < 1)."
    ),
)
def check_remark3(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    a, b, c, d, e = _remark3_parameters(sample)
    lhs, rhs = cf.remark3_cf(a, b, c, d, e, ctx)
    return sample.result(lhs, rhs)


@register(
    "remark3_limit",
    "remark3",
    fixed_tol=1e-8,
    q_max=0.3,
    explain=(
        "The fraction in f is the s = q^m -> 0 limit of the general fraction: it agrees with "
        "-q^{(1-m)/2} (1/a_0 - b_1/a_1 - ...) at m = 20 to 1e-8."
    ),
)
def check_remark3_limit(sample: Sample) -> IdentityResult:
    ctx = sample.context()
    a, b, c, d, e = _remark3_parameters(sample)
    lhs, rhs = cf.remark3_limit_gap(a, b, c, d, e, ctx, m=20)
    return sample.result(lhs, rhs, diagnostics={"m": 20})


# ------------------------------------------------------------------
# Running
#
def select_checks(which: Union[str, Iterable[str], None] = ALL) -> List[CheckInfo]:
    """Checks for a suite name, ``"all"``, one identity id, or an iterable of ids."""
    if which is None or which == ALL:
        return list(REGISTRY.values())
    if isinstance(which, str):
        if which in SUITES:
            return [info for info in REGISTRY.values() if info.suite == which]
        if which in REGISTRY:
            return [REGISTRY[which]]
        raise DomainError(f"unknown suite or identity {which!r}")
    selected = []
    for check_id in which:
        if check_id not in REGISTRY:
            raise DomainError(f"unknown identity {check_id!r}")
        selected.append(REGISTRY[check_id])
    return selected


def _failure(info: CheckInfo, config: SampleConfig, trial: int, message: str, rejects: int) -> IdentityResult:
    return IdentityResult(
        id=info.id,
        suite=info.suite,
        trial=trial,
        params={},
        lhs=None,
        rhs=None,
        residual=None,
        tol=info.tolerance(config.precision_bits),
        passed=False,
        diagnostics={"error": message},
        rejects=rejects,
    )


def run_trial(info: CheckInfo, config: SampleConfig, trial: int) -> IdentityResult:
    """One trial with rejection sampling; never raises."""
    index = list(REGISTRY).index(info.id)
    rejects = 0
    for attempt in range(config.max_attempts):
        sample = Sample(info, config, index, trial, attempt)
        try:
            result = info.fn(sample)
        except (ZeroDivisionError, AnnulusError) as exc:
            rejects += 1
            logger.debug(f"{info.id}[{trial}] attempt {attempt} rejected: {exc}")
            continue
        except Exception as exc:
            logger.warning(f"{info.id}[{trial}] failed: {type(exc).__name__}: {exc}")
            return _failure(info, config, trial, f"{type(exc).__name__}: {exc}", rejects)
        result.rejects = rejects
        if not result.passed:
            logger.warning(f"{info.id}[{trial}] residual {float(result.residual):.3e} > tol {result.tol:.1e} or gate failed")
        return result
    return _failure(info, config, trial, f"no admissible sample in {config.max_attempts} attempts", rejects)


def _worker_count(config: SampleConfig, jobs: int) -> int:
    if config.workers is not None:
        return max(1, config.workers)
    return max(1, min(jobs, psutil.cpu_count(logical=True) or 1))


def run_suite(config: SampleConfig, which: Union[str, Iterable[str], None] = ALL) -> List[IdentityResult]:
    """Run every selected check for ``config.trials`` trials.

    Results come back in registry order, then trial order, whatever the
    thread scheduling was.
    """
    checks = select_checks(which)
    jobs = [(info, trial) for info in checks for trial in range(config.trials)]
    if not jobs:
        return []
    logger.info(
        f"Running {len(checks)} identities x {config.trials} trials at {config.precision_bits} bits (seed {config.seed})"
    )
    with ThreadPoolExecutor(max_workers=_worker_count(config, len(jobs))) as pool:
        results = list(pool.map(lambda job: run_trial(job[0], config, job[1]), jobs))
    failures = sum(1 for r in results if not r.passed)
    logger.info(f"Finished {len(results)} trials: {failures} failures")
    return results


#: where each identity is stated: result name and display numbers
REFERENCES: Dict[str, str] = {
    "lemma1": "Lemma 1, eq. (2.2)",
    "eq24": "eq. (2.4)",
    "lemma2": "Lemma 2, eq. (2.3)",
    "theorem3": "Theorem 3, eq. (2.5)",
    "contig8phi7": "eq. (5.7)",
    "symmetry": "eqs. (2.10)-(2.11)",
    "lemma5": "Lemma 5, eq. (3.6)",
    "lemma6": "Lemma 6, eqs. (3.7)-(3.9)",
    "eq310": "eq. (3.10)",
    "recurrence_x1": "eqs. (2.6)-(2.9)",
    "recurrence_x2": "eqs. (2.6)-(2.8), (2.12)",
    "recurrence_x3": "eqs. (2.6), (3.3)",
    "asymptotic_w1": "eq. (3.1)",
    "asymptotic_w2": "eq. (3.2)",
    "minimality": "eq. (3.3)",
    "theorem4": "Theorem 4, eq. (3.5)",
    "tail_ratio": "Theorem 4, proof (parabola theorem hypothesis)",
    "corollary7": "Corollary 7, eqs. (4.1)-(4.3)",
    "corollary7_terminating": "Corollary 7, eq. (4.4) with Theorem A",
    "corollary8": "Corollary 8, eqs. (4.5)-(4.7)",
    "corollary8_terminating": "Corollary 8, eq. (4.8)",
    "corollary8_companion": "Corollary 8, eq. (4.9)",
    "remark2": "Remark 2",
    "corollary9": "Corollary 9, eq. (5.1)",
    "corollary9_reduced": "eqs. (5.2)-(5.4)",
    "watson": "Theorem A (Watson)",
    "remark3": "Remark 3, eq. (5.6)",
    "remark3_limit": "Remark 3 against eq. (5.1), large m",
}


def explain(check_id: str) -> str:
    """Text for ``--explain``."""
    if check_id not in REGISTRY:
        raise DomainError(f"unknown identity {check_id!r}")
    info = REGISTRY[check_id]
    if info.fixed_tol is not None:
        tol = f"fixed tolerance {info.fixed_tol:.0e}"
    else:
        tol = f"tolerance 1e-{info.digits:g} at 256 bits, scaled with precision"
    q_cap = f", |q| <= {info.q_max}" if info.q_max is not None else ""
    source = REFERENCES.get(check_id, "not a published identity")
    return f"{info.id} [{info.suite}]{q_cap}; {tol}\nsource: {source}\n{info.explain}"


__all__ = [
    "ALL",
    "SUITES",
    "SampleConfig",
    "IdentityResult",
    "CheckInfo",
    "REGISTRY",
    "Sample",
    "RejectedSample",
    "register",
    "select_checks",
    "run_trial",
    "run_suite",
    "explain",
    "REFERENCES",
    "check_lemma1",
    "check_eq24",
    "check_lemma2",
    "check_theorem3",
    "check_contig_8phi7",
    "check_symmetry",
    "check_lemma5",
    "check_lemma6",
    "check_eq310",
]
