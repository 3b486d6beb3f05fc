"""Tests for qentry40.verify: registry, sampling and the suite runner."""

import pytest

from qentry40 import verify
from qentry40.errors import AnnulusError, DomainError
from qentry40.verify import SampleConfig, run_suite, run_trial, select_checks

#: small, fast configuration for the unit tests
FAST = SampleConfig(trials=2, precision_bits=128, workers=2)

EXPECTED_IDS = {
    "lemmas": ["lemma1", "eq24", "lemma2", "theorem3", "contig8phi7", "symmetry", "lemma5", "lemma6", "eq310"],
    "theorem4": [
        "recurrence_x1",
        "recurrence_x2",
        "recurrence_x3",
        "asymptotic_w1",
        "asymptotic_w2",
        "minimality",
        "theorem4",
        "tail_ratio",
    ],
    "corollary7": ["corollary7", "corollary7_terminating"],
    "corollary8": ["corollary8", "corollary8_terminating", "corollary8_companion", "remark2"],
    "corollary9": ["corollary9", "corollary9_reduced"],
    "watson": ["watson"],
    "remark3": ["remark3", "remark3_limit"],
}


def test_registry_covers_every_suite() -> None:
    for suite, ids in EXPECTED_IDS.items():
        assert [info.id for info in select_checks(suite)] == ids
    assert len(select_checks()) == sum(len(ids) for ids in EXPECTED_IDS.values())


def test_selector_forms() -> None:
    assert [info.id for info in select_checks("watson")] == ["watson"]
    assert [info.id for info in select_checks("lemma5")] == ["lemma5"]
    assert [info.id for info in select_checks(["eq24", "lemma1"])] == ["eq24", "lemma1"]
    assert select_checks([]) == []
    with pytest.raises(DomainError):
        select_checks("lemma99")
    with pytest.raises(DomainError):
        select_checks(["watson", "nope"])


def test_tolerance_scales_with_precision() -> None:
    info = verify.REGISTRY["lemma1"]
    assert info.tolerance(256) == pytest.approx(1e-30)
    assert info.tolerance(512) == pytest.approx(1e-60)
    assert verify.REGISTRY["asymptotic_w1"].tolerance(512) == 1e-10


def test_sample_config_validation() -> None:
    with pytest.raises(DomainError):
        SampleConfig(q_range=(0.5, 1.2))
    with pytest.raises(DomainError):
        SampleConfig(parameter_box=(2.0, 1.0))
    with pytest.raises(DomainError):
        SampleConfig(max_attempts=0)


def test_empty_selection_gives_no_results() -> None:
    assert run_suite(FAST, []) == []


def test_sampling_is_deterministic() -> None:
    info = verify.REGISTRY["lemma1"]
    first = run_trial(info, FAST, 3)
    second = run_trial(info, FAST, 3)
    assert first.params == second.params
    assert first.residual == second.residual
    assert first.rejects == second.rejects


def test_near_pole_samples_are_rejected() -> None:
    info = verify.REGISTRY["lemma1"]
    sample = verify.Sample(info, FAST, 0, 0)
    sample.context()
    with pytest.raises(verify.RejectedSample):
        sample.guard(sample.ctx.num(1e-4))
    with pytest.raises(ZeroDivisionError):
        sample.guard_powers([1 / sample.ctx.q])


def test_failures_are_recorded_not_raised() -> None:
    def broken(sample):
        raise DomainError("deliberately broken")

    info = verify.CheckInfo("broken", "lemmas", broken, digits=30)
    verify.REGISTRY["broken"] = info
    try:
        result = run_trial(info, FAST, 0)
    finally:
        del verify.REGISTRY["broken"]
    assert not result.passed
    assert result.residual is None
    assert "deliberately broken" in result.diagnostics["error"]


def test_results_follow_registry_order() -> None:
    results = run_suite(SampleConfig(trials=2, precision_bits=128, workers=3), "watson")
    assert [(r.id, r.trial) for r in results] == [("watson", 0), ("watson", 1)]


def test_explain_text() -> None:
    text = verify.explain("watson")
    assert text.startswith("watson [watson]")
    assert "source: Theorem A" in text
    assert "Theorem 4, eq. (3.5)" in verify.explain("theorem4")
    assert set(verify.REFERENCES) == set(verify.REGISTRY)
    with pytest.raises(DomainError):
        verify.explain("unknown")


@pytest.mark.parametrize("check_id", [info.id for info in select_checks()])
def test_every_identity_holds(check_id) -> None:
    results = run_suite(FAST, check_id)
    assert len(results) == FAST.trials
    for result in results:
        assert result.passed, (result.id, result.trial, result.residual, result.gates, result.diagnostics)


def test_injected_fault_is_detected() -> None:
    config = SampleConfig(trials=2, precision_bits=128, fault=1e-6)
    results = run_suite(config, ["theorem4"])
    assert len(results) == 2
    assert not any(r.passed for r in results)


def test_samples_outside_the_annulus_are_redrawn() -> None:
    calls = []

    def edge(sample):
        sample.context()
        calls.append(sample)
        if len(calls) == 1:
            raise AnnulusError("|a| outside the annulus")
        return sample.result(sample.ctx.one, sample.ctx.one)

    config = SampleConfig(trials=1, precision_bits=128, annulus_enforce=False)
    info = verify.CheckInfo("edge", "theorem4", edge, digits=30)
    verify.REGISTRY["edge"] = info
    try:
        result = run_trial(info, config, 0)
    finally:
        del verify.REGISTRY["edge"]
    assert result.passed
    assert result.rejects == 1
    assert len(calls) == 2


def test_unenforced_annulus_draws_can_leave_it() -> None:
    from qentry40.recurrence import check_annulus

    config = SampleConfig(trials=1, precision_bits=128, annulus_enforce=False)
    outside = 0
    for attempt in range(40):
        sample = verify.Sample(verify.REGISTRY["theorem4"], config, 0, 0, attempt)
        sample.context()
        try:
            inst = sample.instance(3)
            check_annulus(inst)
        except AnnulusError:
            outside += 1
        except ZeroDivisionError:
            continue
    assert outside > 0


PRECISION_GOVERNED = ["lemma1", "watson", "theorem4", "corollary7", "corollary8", "remark3"]


def _max_residuals(bits: int, ids, trials: int = 2):
    results = run_suite(SampleConfig(trials=trials, precision_bits=bits, workers=2), ids)
    assert all(r.passed for r in results), [(r.id, r.trial, r.residual) for r in results if not r.passed]
    worst = {}
    for r in results:
        worst[r.id] = max(worst.get(r.id, 0.0), float(r.residual))
    return worst


@pytest.mark.parametrize("bits", [128, 256])
def test_doubling_precision_shrinks_residuals(bits) -> None:
    ids = PRECISION_GOVERNED if bits == 128 else ["theorem4", "corollary8"]
    coarse = _max_residuals(bits, ids)
    fine = _max_residuals(2 * bits, ids)
    for check_id in ids:
        # a residual that already sits at the rounding floor cannot shrink further
        floor = 2.0 ** (16 - 2 * bits)
        assert fine[check_id] * 1e5 <= coarse[check_id] or fine[check_id] <= floor, check_id
