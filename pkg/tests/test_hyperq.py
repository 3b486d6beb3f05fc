"""Tests for qentry40.hyperq: generic and very-well-poised series."""

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import close
from qentry40.errors import DomainError, PoleError, UnsupportedError
from qentry40.hyperq import (
    PhiSpec,
    VwpParams,
    Vwp10phi9Instance,
    eval_phi_generic,
    eval_u,
    eval_w,
    eval_wtilde,
    phi10,
    w_argument,
    wtilde_ratio_products,
)
from qentry40.qcore import QContext, qpoch_finite, qpoch_infinite, qpoch_multi


def test_generic_series_matches_qhyper(ctx, oracle) -> None:
    a, b, c, z = "0.4", "-0.7", "0.55", "0.6"
    value = eval_phi_generic(PhiSpec([a, b], [c], z, ctx))
    mp = oracle
    expected = mp.qhyper([mp.mpf(a), mp.mpf(b)], [mp.mpf(c)], mp.mpf("0.3"), mp.mpf(z))
    assert close(value, ctx.num(expected), 1e-30)


def test_q_binomial_theorem(cctx) -> None:
    a, z = cctx.num(1.7 + 0.4j), cctx.num(0.3 - 0.5j)
    value = eval_phi_generic(PhiSpec([a], [], z, cctx))
    assert close(value, qpoch_infinite(a * z, cctx) / qpoch_infinite(z, cctx))


def test_q_vandermonde_terminates(cctx) -> None:
    n = 4
    b, c = cctx.num(1.3 - 0.2j), cctx.num(-0.6 + 0.9j)
    value = eval_phi_generic(PhiSpec([cctx.qpow(-n), b], [c], cctx.q, cctx))
    expected = qpoch_finite(c / b, cctx, n) * b ** n / qpoch_finite(c, cctx, n)
    assert close(value, expected)


def test_generic_series_guards(ctx) -> None:
    with pytest.raises(UnsupportedError):
        eval_phi_generic(PhiSpec([0.5, 0.5], [0.5, 0.5], 0.1, ctx))
    with pytest.raises(DomainError):
        eval_phi_generic(PhiSpec([0.5, 0.2], [0.7], 1.5, ctx))


def test_vwp_params_s_and_image(cctx) -> None:
    s = cctx.qpow(3)
    p = VwpParams.with_s(cctx, 0.2, 1.1, 0.8j, -1.4, 2.0 + 0.3j, s)
    assert close(p.s, s)
    back = p.image().image()
    for name in "abcdef":
        assert close(getattr(back, name), getattr(p, name))
    assert p.labelled()["a"] == p.a
    with pytest.raises(DomainError):
        VwpParams(1, 0, 1, 1, 1, 1, cctx)


def test_10phi9_requires_balance_and_termination(ctx) -> None:
    base = VwpParams(0.5, 1.2, 1.5, 0.9, 1.7, 2.1, ctx)
    with pytest.raises(DomainError):
        Vwp10phi9Instance(base, 0.4, ctx.qpow(-2))
    q = ctx.q
    h = ctx.num(0.7)
    g = base.a ** 3 * q * q / (base.b * base.c * base.d * base.e * base.f * h)
    with pytest.raises(UnsupportedError):
        phi10(ctx, 0.5, 1.2, 1.5, 0.9, 1.7, 2.1, g, h)


def test_10phi9_with_unit_parameter_is_one(cctx) -> None:
    a, b, c, d, e, f = (cctx.num(x) for x in (0.6, 1.2, 1.5j, 0.9, -1.7, 2.1))
    q = cctx.q
    g = a ** 3 * q * q / (b * c * d * e * f)
    assert phi10(cctx, a, b, c, d, e, f, g, 1) == 1


def test_jackson_summation(cctx) -> None:
    q = cctx.q
    n = 3
    a, b, c, d = (cctx.num(x) for x in (0.45 + 0.1j, 1.3, -0.8 + 0.6j, 1.9j))
    e = a * a * q ** (n + 1) / (b * c * d)
    f = cctx.qpow(-n)
    assert close(w_argument(a, b, c, d, e, f, cctx), q)
    value = eval_w(a, b, c, d, e, f, cctx)
    aq = a * q
    top = [aq, aq / (b * c), aq / (b * d), aq / (c * d)]
    bottom = [aq / b, aq / c, aq / d, aq / (b * c * d)]
    expected = 1
    for x, y in zip(top, bottom):
        expected *= qpoch_finite(x, cctx, n) / qpoch_finite(y, cctx, n)
    assert close(value, expected)


@settings(max_examples=10, deadline=None)
@given(order=st.permutations(range(5)))
def test_w_is_symmetric_in_its_numerator_parameters(order) -> None:
    ctx = QContext(0.3 + 0.1j, precision_bits=128)
    a = ctx.num(0.5 + 0.2j)
    params = [ctx.num(x) for x in (1.4, -1.6 + 0.5j, 2.2j, 1.8, -2.5)]
    base = eval_w(a, *params, ctx)
    permuted = eval_w(a, *(params[i] for i in order), ctx)
    assert abs(base - permuted) <= 1e-30 * abs(base)


def test_wtilde_matches_product_times_w(cctx) -> None:
    a = cctx.num(0.5 + 0.2j)
    params = [cctx.num(x) for x in (1.4, -1.6 + 0.5j, 2.2j, 1.8, -2.5)]
    q = cctx.q
    expected = qpoch_multi([a * q / x for x in params], cctx) * eval_w(a, *params, cctx)
    assert close(eval_wtilde(a, *params, cctx), expected)


def test_w_outside_disk_is_rejected(ctx) -> None:
    with pytest.raises(DomainError):
        eval_w(3.0, 0.5, 0.5, 0.5, 0.5, 0.5, ctx)


def test_u_rejects_vanishing_denominator(ctx) -> None:
    with pytest.raises(PoleError):
        eval_u(0.5, 1 / ctx.q, 1.5, 1.2, 2.1, 1.7, ctx)


@pytest.mark.parametrize("big_m,big_n", [(2, 1), (3, 0), (1, 1), (3, -1)])
def test_wtilde_ratio_product_form(cctx, big_m, big_n) -> None:
    q = cctx.q
    a = abs(q) ** cctx.mp.mpf(big_m - 1.5) * cctx.mp.expj(0.7)
    b = a * cctx.qpow(big_n)
    p = VwpParams.with_s(cctx, a, b, cctx.num(1.3 + 0.4j), cctx.num(-0.9 + 1.1j), cctx.num(1.7j), cctx.qpow(big_m))
    img = p.image()
    lhs = eval_wtilde(p.a, p.b, p.c, p.d, p.e, p.f, cctx) / eval_wtilde(img.a, img.b, img.c, img.d, img.e, img.f, cctx)
    rhs, branch = wtilde_ratio_products(p)
    assert branch in ("aq^3/(bs)=q^-n", "bs/(aq)=q^-n")
    assert close(lhs, rhs, 1e-20)


def test_product_form_needs_integer_exponents(cctx) -> None:
    p = VwpParams(0.3, 0.7, 1.1, 1.3, 1.5, 1.9, cctx)
    with pytest.raises(DomainError):
        wtilde_ratio_products(p)


# ------------------------------------------------------------------
# The terminating 10phi9
#
def _balanced_10phi9(ctx, n: int):
    """Parameters ``(a, b, c, d, e, f, g, h)`` with ``h = q^{-n}`` and ``a^3 q^2 = bcdefgh``."""
    q = ctx.q
    a, b, c, d, e, f = (ctx.num(x) for x in (0.45 + 0.15j, 1.3 - 0.2j, -0.8 + 0.6j, 1.9j, 1.1 + 0.7j, -1.4))
    h = ctx.qpow(-n)
    g = a ** 3 * q * q / (b * c * d * e * f * h)
    return a, b, c, d, e, f, g, h


def test_10phi9_matches_the_explicit_generic_series(cctx) -> None:
    a, *rest = _balanced_10phi9(cctx, 3)
    q = cctx.q
    root = cctx.sqrt(a)
    spec = PhiSpec(
        [a, q * root, -q * root] + rest,
        [root, -root] + [a * q / x for x in rest],
        q,
        cctx,
    )
    assert close(phi10(cctx, a, *rest), eval_phi_generic(spec))


@settings(max_examples=10, deadline=None)
@given(order=st.permutations(range(7)))
def test_10phi9_is_symmetric_in_its_free_parameters(order) -> None:
    ctx = QContext(0.35 * mpmath.expj(0.4), precision_bits=128)
    a, *rest = _balanced_10phi9(ctx, 2)
    permuted = [rest[i] for i in order]
    assert close(phi10(ctx, a, *rest), phi10(ctx, a, *permuted))


@pytest.mark.parametrize("n", [0, 1, 4])
def test_terminating_10phi9_sums_exactly_n_plus_one_terms(cctx, n) -> None:
    a, *rest = _balanced_10phi9(cctx, n)
    q = cctx.q
    partners = [a * q / x for x in rest]
    expected = cctx.zero
    for k in range(n + 1):
        term = (1 - a * q ** (2 * k)) / (1 - a) * qpoch_finite(a, cctx, k) * q ** k / qpoch_finite(q, cctx, k)
        for x, w in zip(rest, partners):
            term *= qpoch_finite(x, cctx, k) / qpoch_finite(w, cctx, k)
        expected += term
    assert close(phi10(cctx, a, *rest), expected)


def test_u_times_products_is_wtilde(cctx) -> None:
    a = cctx.num(0.5 + 0.2j)
    params = [cctx.num(x) for x in (1.4, -1.6 + 0.5j, 2.2j, 1.8, -2.5)]
    u = eval_u(a, *params, cctx)
    assert close(u * qpoch_multi([a * cctx.q] + params, cctx), eval_wtilde(a, *params, cctx))
