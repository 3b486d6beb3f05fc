"""Tests for qentry40.contfrac: the evaluation engine and the closed forms."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close
from qentry40 import contfrac as cf
from qentry40.errors import DomainError, PoleError
from qentry40.qcore import QContext
from qentry40.recurrence import PATH_PARAMETER, RecurrenceInstance

FREE = (1.3 + 0.4j, -0.9 + 1.1j, 1.7j, 2.1 - 0.5j)


def make_instance(ctx, m: int, t: float = 0.5) -> RecurrenceInstance:
    a = abs(ctx.q) ** ctx.mp.mpf(m - 1 - t) * ctx.mp.expj(0.9)
    return RecurrenceInstance.from_exponent(ctx, a, *FREE, m)


# ------------------------------------------------------------------
# Engine
#
def test_golden_ratio_fraction(ctx) -> None:
    spec = cf.CFSpec(lambda n: 1, lambda n: 1, ctx, pattern=cf.PLUS)
    result = cf.eval_cf(spec)
    assert result.converged
    assert close(result.value, (ctx.mp.sqrt(5) - 1) / 2, 1e-27)
    assert result.depth < cf.DEFAULT_MAX_DEPTH


def test_stopping_rule_follows_precision() -> None:
    assert cf.default_cf_tol(QContext(0.3, precision_bits=256)) == QContext(0.3).mp.ldexp(1, -192)
    assert cf.default_max_depth(QContext(0.3, precision_bits=64)) == cf.DEFAULT_MAX_DEPTH
    assert cf.default_max_depth(QContext(0.3, precision_bits=512)) == 1024
    fine = QContext(0.3, precision_bits=512)
    result = cf.eval_cf(cf.CFSpec(lambda n: 1, lambda n: 1, fine, pattern=cf.PLUS))
    assert result.converged
    assert close(result.value, (fine.mp.sqrt(5) - 1) / 2, 1e-110)


@settings(max_examples=10, deadline=None)
@given(c=st.floats(min_value=2.5, max_value=8.0))
def test_periodic_fraction_reaches_its_fixed_point(c) -> None:
    # x = 1/(c - x): the root of x^2 - c x + 1 = 0 inside the unit disk
    ctx = QContext(0.5, precision_bits=128)
    value = cf.eval_cf(cf.CFSpec(lambda n: c, lambda n: 1, ctx)).value
    assert abs(value * value - c * value + 1) < 1e-26


def test_terminating_and_fixed_depth(ctx) -> None:
    spec = cf.CFSpec(lambda n: n + 1, lambda n: 2, ctx, leading=3, length=3)
    # 3 / (1 - 2 / (2 - 2 / 3)) = 3 / (1 - 3/2) = -6
    assert close(cf.eval_cf(spec).value, -6)
    values = cf.convergents(spec, 3)
    assert len(values) == 3
    assert values[0] == 3
    assert cf.eval_cf(spec, depth=1).value == 3


def test_engine_errors(ctx) -> None:
    with pytest.raises(DomainError):
        cf.CFSpec(lambda n: 1, lambda n: 1, ctx, pattern="times")
    spec = cf.CFSpec(lambda n: 0, lambda n: 1, ctx, length=1)
    with pytest.raises(PoleError):
        cf.eval_cf(spec)
    with pytest.raises(DomainError):
        cf.eval_cf(spec, depth=0)


def test_parabola_tail_limit(cctx) -> None:
    q = cctx.q
    assert close(cf.parabola_tail_limit(cctx), q / (1 + q) ** 2, 1e-35)
    spec = cf.theorem4_spec(make_instance(cctx, 3))
    assert close(cf.tail_ratio(spec, 40), cf.parabola_tail_limit(cctx), 1e-10)


# ------------------------------------------------------------------
# Theorem 4 and its specialisations
#
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_theorem4_fraction_equals_minimal_solution_ratio(cctx, m) -> None:
    inst = make_instance(cctx, m)
    value = cf.eval_cf(cf.theorem4_spec(inst))
    assert value.converged
    assert close(value.value, cf.theorem4_rhs(inst), 1e-20)


def test_theorem4_fraction_keeps_full_accuracy_at_512_bits(cctx) -> None:
    fine = cctx.with_precision(512)
    inst = make_instance(fine, 3)
    value = cf.eval_cf(cf.theorem4_spec(inst))
    assert value.converged
    assert close(value.value, cf.theorem4_rhs(inst), 1e-70)


def test_fault_hook_breaks_agreement(cctx) -> None:
    inst = make_instance(cctx, 3)
    faulty = cf.eval_cf(cf.theorem4_spec(inst, perturb_a1=1e-6)).value
    assert not close(faulty, cf.theorem4_rhs(inst), 1e-12)


def test_theorem4_rhs_needs_integer_exponent(cctx) -> None:
    inst = make_instance(cctx, 3)
    with pytest.raises(DomainError):
        cf.theorem4_rhs(RecurrenceInstance(inst.params))


def test_corollary7_matches_theorem4(cctx) -> None:
    inst = make_instance(cctx, 2)
    a = inst.params.a
    alphas = [a / x for x in inst.params.others]
    value = cf.eval_cf(cf.corollary7_cf(alphas, cctx, a)).value
    closed = cf.corollary7_rhs(alphas, cctx, a)
    assert close(value, closed, 1e-20)
    assert close(closed, cf.theorem4_rhs(inst), 1e-20)


def test_corollary8_matches_theorem4(cctx) -> None:
    inst = make_instance(cctx, 1)
    a = inst.params.a
    half = cctx.qpow(cctx.mp.mpf(1) / 2)
    u = [a * half / x for x in inst.params.others]
    alphas = [x * x for x in u]
    roots = [cctx.sqrt(x) for x in u]
    value = cf.eval_cf(cf.corollary8_cf(alphas, cctx, a, roots)).value
    closed = cf.corollary8_rhs(alphas, cctx, a, roots)
    assert close(value, closed, 1e-20)
    assert close(closed, cf.theorem4_rhs(inst), 1e-20)


def test_remark2_approximants_are_solution_ratios(cctx) -> None:
    inst = make_instance(cctx, 1)
    values = cf.convergents(cf.remark2_spec(inst), 8)
    for n, value in enumerate(values):
        assert close(cf.remark2_approximant(inst, n), value, 1e-20)
    with pytest.raises(DomainError):
        cf.remark2_spec(make_instance(cctx, 2))


def test_remark2_approximants_approach_the_closed_form(cctx) -> None:
    inst = make_instance(cctx, 1)
    closed = cf.remark2_rhs(inst)
    assert close(cf.eval_cf(cf.remark2_spec(inst)).value, closed, 1e-20)
    # the approximant error shrinks roughly like |q|^n
    gaps = [abs(cf.remark2_approximant(inst, n) - closed) / abs(closed) for n in (10, 20, 40)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-12


@pytest.mark.parametrize("m", [3, 4])
def test_corollary9_closed_form(cctx, m) -> None:
    inst = make_instance(cctx, m)
    assert close(cf.eval_cf(cf.theorem4_spec(inst)).value, cf.corollary9_rhs(inst), 1e-20)


@pytest.mark.parametrize("m", [1, 2])
def test_corollary9_reduced_forms(cctx, m) -> None:
    inst = make_instance(cctx, m)
    value = cf.eval_cf(cf.theorem4_spec(inst, PATH_PARAMETER)).value
    assert close(value, cf.corollary9_reduced(inst), 1e-20)
    with pytest.raises(DomainError):
        cf.corollary9_rhs(inst)


# ------------------------------------------------------------------
# Terminating fractions
#
def _alphas(ctx, order: int):
    values = [ctx.num(x) for x in (1.3 + 0.2j, 0.0, 0.7 - 0.9j, -1.6 + 0.3j, 0.8j + 0.5)]
    values[1] = ctx.qpow(order)
    return values


@pytest.mark.parametrize("order", [1, 2, 3, -2])
def test_watson_terminating_fraction(cctx, order) -> None:
    ratio, fraction = cf.watson_theoremA(_alphas(cctx, order), cctx)
    assert close(ratio, fraction, 1e-20)
    products = cf.watson_products(_alphas(cctx, order), cctx)
    assert products.condition >= 1


def test_watson_needs_a_terminating_parameter(cctx) -> None:
    alphas = _alphas(cctx, 2)
    with pytest.raises(DomainError):
        cf.watson_cf(alphas, cctx, n_terminate=3)
    alphas[1] = cctx.num(1.9 - 0.4j)
    with pytest.raises(DomainError):
        cf.watson_cf(alphas, cctx)


@pytest.mark.parametrize("order", [1, -1, 2])
def test_corollary7_terminating(cctx, order) -> None:
    fraction, closed = cf.corollary7_terminating(_alphas(cctx, order), cctx)
    assert close(fraction, closed, 1e-20)


@pytest.mark.parametrize("order", [1, 3, -3])
def test_corollary8_terminating_and_companion(cctx, order) -> None:
    fraction, closed = cf.corollary8_terminating(_alphas(cctx, order), cctx)
    assert close(fraction, closed, 1e-20)
    fraction, closed = cf.corollary8_companion(_alphas(cctx, order), cctx)
    assert close(fraction, closed, 1e-20)


# ------------------------------------------------------------------
# The fraction in f
#
def _remark3_params(ctx):
    return (
        2.5 * ctx.mp.expj(1.0),
        ctx.num(0.3 + 0.1j),
        ctx.num(0.8 - 0.3j),
        ctx.num(-0.6 + 0.5j),
        ctx.num(0.9j),
    )


def test_remark3_closed_form(ctx) -> None:
    value, closed = cf.remark3_cf(*_remark3_params(ctx), ctx)
    assert close(value, closed, 1e-20)
    a, b, c, d, e = _remark3_params(ctx)
    with pytest.raises(DomainError):
        cf.remark3_rhs(a, 1.5, c, d, e, ctx)


def test_remark3_is_the_large_m_limit(ctx) -> None:
    value, scaled = cf.remark3_limit_gap(*_remark3_params(ctx), ctx, m=20)
    assert close(value, scaled, 1e-8)


@pytest.mark.parametrize("offset", [1e-6, -1e-6])
def test_watson_both_sides_vanish_as_alpha_tends_to_one(cctx, offset) -> None:
    alphas = _alphas(cctx, 2)
    alphas[0] = cctx.num(1 + offset)
    ratio, fraction = cf.watson_theoremA(alphas, cctx)
    assert close(ratio, fraction, 1e-15)
    far, _ = cf.watson_theoremA(_alphas(cctx, 2), cctx)
    assert abs(ratio) < 1e-3 * abs(far)
