"""Tests for qentry40.recurrence: coefficients, explicit solutions and their limits."""

import pytest

from conftest import close
from qentry40.errors import DomainError, PoleError, UnsupportedError
from qentry40.hyperq import VwpParams
from qentry40.recurrence import (
    PATH_PARAMETER,
    RecurrenceInstance,
    asymptotic_gap,
    boundary_values,
    check_annulus,
    coeff_a,
    coeff_b,
    decay_rate,
    minimality_ratios,
    recurrence_terms,
    solution,
    x1,
    x2,
    x3,
)

FREE = (1.3 + 0.4j, -0.9 + 1.1j, 1.7j, 2.1 - 0.5j)


def make_instance(ctx, m: int, t: float = 0.5) -> RecurrenceInstance:
    """``s = q^m`` with ``|a| = |q|^{m-1-t}``, inside the annulus for ``0 < t < 1``."""
    a = abs(ctx.q) ** ctx.mp.mpf(m - 1 - t) * ctx.mp.expj(0.9)
    return RecurrenceInstance.from_exponent(ctx, a, *FREE, m)


def worst(rows) -> float:
    return max(abs(sum(row)) / sum(abs(t) for t in row) for row in rows)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("kind", [1, 2, 3])
def test_solutions_satisfy_the_recurrence(cctx, m, kind) -> None:
    inst = make_instance(cctx, m)
    weights = boundary_values(inst) if kind == 3 else None
    rows = [recurrence_terms(inst, kind, n, weights) for n in range(1, 5)]
    assert worst(rows) < 1e-20


def test_instance_validation(cctx) -> None:
    inst = make_instance(cctx, 3)
    assert close(inst.s, cctx.qpow(3))
    assert close(inst.root_s ** 2, inst.s)
    assert inst.exceptional is False
    assert make_instance(cctx, 1).exceptional
    with pytest.raises(DomainError):
        RecurrenceInstance(inst.params, s_exponent=2)
    with pytest.raises(DomainError):
        RecurrenceInstance(inst.params, sqrt_s=2 * inst.root_s)


def test_symmetry_of_coefficients(cctx) -> None:
    params = VwpParams(cctx.num(0.6 + 0.2j), *FREE, cctx.num(1.4), cctx)
    inst = RecurrenceInstance(params)
    image = inst.image()
    assert close(image.s, cctx.q ** 4 / inst.s)
    half = cctx.mp.mpf(1) / 2
    for n in (0, half, 2):
        assert close(coeff_a(inst, n), coeff_a(image, -n - 1), 1e-20)
        assert close(coeff_b(inst, n + 1), coeff_b(image, -n - 1), 1e-20)


def test_generic_b0_vanishes(cctx) -> None:
    params = VwpParams(cctx.num(0.6 + 0.2j), *FREE, cctx.num(1.4), cctx)
    assert coeff_b(RecurrenceInstance(params), 0) == 0


@pytest.mark.parametrize("m", [1, 2])
def test_limit_paths_resolve_exceptional_coefficients(cctx, m) -> None:
    inst = make_instance(cctx, m)
    a0 = coeff_a(inst, 0)
    assert a0 == a0  # finite
    b1 = coeff_b(inst, 1, PATH_PARAMETER)
    assert b1 == b1
    with pytest.raises(DomainError):
        coeff_a(inst, 0, "x")


def test_singular_coefficient_without_limit_path(cctx) -> None:
    # s q^{2n-1} = 1 at n = 1 when s = q^{-1}, which is not one of the exceptional exponents
    inst = make_instance(cctx, -1)
    with pytest.raises(PoleError):
        coeff_b(inst, 1)


def test_second_solution_needs_integer_exponent(cctx) -> None:
    params = VwpParams(cctx.num(0.6 + 0.2j), *FREE, cctx.num(1.4), cctx)
    with pytest.raises(UnsupportedError):
        x2(RecurrenceInstance(params), 2)
    inst = make_instance(cctx, 1)
    assert x2(inst, 0) == 0
    assert solution(inst, 2, 0).value == 0
    with pytest.raises(DomainError):
        solution(inst, 4, 1)


def test_annulus_is_enforced(cctx) -> None:
    check_annulus(make_instance(cctx, 2))
    with pytest.raises(DomainError):
        boundary_values(make_instance(cctx, 2, t=1.4))
    with pytest.raises(DomainError):
        check_annulus(make_instance(cctx, 2, t=-0.3))


def test_minimal_solution_is_combination(cctx) -> None:
    inst = make_instance(cctx, 3)
    w1, w2 = boundary_values(inst)
    assert close(x3(inst, 2), w2 * x1(inst, 2) - w1 * x2(inst, 2), 1e-30)


def test_rescaled_first_solution_approaches_w(ctx) -> None:
    inst = make_instance(ctx, 2, t=0.9)
    gaps = [asymptotic_gap(inst, n, 1) for n in (5, 10, 15, 20, 25)]
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-8


def test_minimality_ratio_decreases(ctx) -> None:
    inst = make_instance(ctx, 3)
    ratios = minimality_ratios(inst, [4, 8, 12, 16])
    assert all(later < earlier for earlier, later in zip(ratios, ratios[1:]))


def test_decay_rate_of_geometric_sequence() -> None:
    points = [(n, 0.5 ** n) for n in range(2, 12)]
    assert decay_rate(points) == pytest.approx(0.6931471805599453, rel=1e-9)
    assert decay_rate([(1, 0.0), (2, 0.0)]) == pytest.approx(0.0)
