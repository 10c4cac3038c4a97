import math
from fractions import Fraction

import pytest

from metricrep.audit import (
    Definition,
    cor_single_audit,
    core_beta,
    core_beta_bruteforce,
    distortion,
    distortion_report,
    no_augmentation_monitor,
    pf_gamma,
    pf_gamma_bruteforce,
    pr_gamma,
    pr_strong_gamma,
    reevaluate,
    stability_rho,
    stability_rho_bruteforce,
)
from metricrep.bounds import ear_stability, tgc_stability
from metricrep.config import ENUMERATION_CAP_ENV
from metricrep.ear import ear_select
from metricrep.errors import AlphaOutOfRange, CommitteeSizeError, EnumerationCapExceeded, ProfileShapeMismatch
from metricrep.instance import Instance, derive_rankings
from metricrep.instances import gen_random, gen_two_cluster
from metricrep.tgc import tgc_select

from helpers import corpus, line_instance

ALPHAS = (Fraction(1), Fraction(3, 2), Fraction(2))


def small_corpus(count=25, seed=11):
    return list(corpus(count, 8, 5, 3, seed=seed))


def test_pf_line_instance():
    report = pf_gamma(line_instance(), [0, 1])
    assert report.definition is Definition.PF
    assert report.value == 1
    assert report.witness.coalition == (0, 1)
    assert report.witness.targets == (0,)


def test_core_line_instance():
    assert core_beta(line_instance(), [0, 1], 1).value == 1


def test_pr_line_instance_t2():
    inst = line_instance()
    report = pr_gamma(inst, [0, 1], 1, t_range=(2, 2))
    assert report.value == 1
    assert report.witness.coalition == (0, 1, 2, 3)
    assert report.witness.t == 2
    assert pr_strong_gamma(inst, [0, 1], 1, t_range=(2, 2)).value == 1
    assert pr_gamma(inst, [0, 1], 1).value == 1


def test_distortion_line_instance():
    inst = line_instance()
    assert distortion(inst, 0) == 1
    assert distortion(inst, 1) == 1
    assert distortion(inst, 2) == 18
    report = distortion_report(inst, 2)
    assert report.witness.targets == (0,)
    assert reevaluate(inst, report) == 18


def test_zero_distance_representatives():
    inst = Instance.from_coordinates([[0], [10]], [[0], [10], [5]], 2)
    report = pf_gamma(inst, [0, 1])
    assert report.value <= 1
    assert report.notes
    assert core_beta(inst, [0, 1], 1).value <= 1
    assert stability_rho(inst, ear_select(derive_rankings(inst), 2)).value <= 1


def test_stability_fixes_the_outside_candidate_first():
    # each voter has an outside candidate on top of it, but no single one is near both
    inst = Instance.from_coordinates([[0], [10]], [[5], [0], [10]], 1)
    for coverage in (ear_select(derive_rankings(inst), 1), tgc_select(inst)):
        assert coverage.committee == (0,)
        report = stability_rho(inst, coverage, bound=tgc_stability())
        assert report.value == Fraction(1, 2)
        assert report.witness.coalition == (0, 1)
        assert report.witness.targets == (1,)
        assert report.satisfied
        assert reevaluate(inst, report, coverage=coverage) == Fraction(1, 2)
        assert stability_rho_bruteforce(inst, coverage).value == Fraction(1, 2)


def test_stability_two_cluster_twins():
    inst = gen_two_cluster(Fraction(3, 2))
    ear = stability_rho(inst, ear_select(derive_rankings(inst), inst.k))
    tgc = stability_rho(inst, tgc_select(inst), variant="cardinal")
    assert ear.value <= ear_stability()
    assert tgc.definition is Definition.STABILITY_CARDINAL
    assert tgc.value <= tgc_stability()


def test_stability_rejects_unknown_variant():
    inst = line_instance()
    with pytest.raises(ValueError):
        stability_rho(inst, ear_select(derive_rankings(inst), 2), variant="metric")


def test_unbounded_when_deviation_is_free():
    inst = Instance.from_block(1, 2, 1, [[0, 5]])
    assert pf_gamma(inst, [1]).value == math.inf
    assert core_beta(inst, [1], 1).value == math.inf
    report = pr_gamma(inst, [1], 1)
    assert report.value == math.inf
    assert reevaluate(inst, report, [1]) == math.inf


def test_committee_validation():
    inst = line_instance()
    with pytest.raises(CommitteeSizeError):
        pf_gamma(inst, [0])
    with pytest.raises(CommitteeSizeError):
        pf_gamma(inst, [0, 0])
    with pytest.raises(AlphaOutOfRange):
        core_beta(inst, [0, 1], Fraction(1, 2))
    with pytest.raises(ValueError):
        pr_gamma(inst, [0, 1], 1, t_range=(1, 3))


def test_enumeration_cap(monkeypatch):
    inst = line_instance()
    with pytest.raises(EnumerationCapExceeded):
        pr_gamma(inst, [0, 1], 1, cap=3)
    monkeypatch.setenv(ENUMERATION_CAP_ENV, "3")
    with pytest.raises(EnumerationCapExceeded):
        stability_rho(inst, ear_select(derive_rankings(inst), 2))
    # the polynomial audits never enumerate
    assert pf_gamma(inst, [0, 1]).value == 1


def test_sampling_is_lower_bound():
    # p = 4, so alpha = 2 asks for coalitions of 8 of the 12 voters
    inst = gen_random(12, 6, 3, seed=2)
    committee = ear_select(derive_rankings(inst), inst.k).committee
    assert inst.quota.p == 4
    exact = pr_gamma(inst, committee, 2)
    sampled = pr_gamma(inst, committee, 2, mode="sample", samples=200, seed=4, bound=exact.bound)
    assert sampled.lower_bound_only
    assert len(sampled.witness.coalition) >= 8
    assert sampled.value <= exact.value
    assert sampled == pr_gamma(inst, committee, 2, mode="sample", samples=200, seed=4, bound=exact.bound)
    with pytest.raises(ValueError):
        pr_gamma(inst, committee, 2, mode="guess")


def test_cor_single_line_instance():
    inst = line_instance()
    coverage = ear_select(derive_rankings(inst), 2)
    report = cor_single_audit(inst, coverage, 1)
    assert report.value <= 1
    assert reevaluate(inst, report, coverage=coverage) == report.value


def test_cor_single_singleton_committee():
    inst = Instance.from_coordinates([[0], [1], [2]], [[1], [10]], 1)
    coverage = ear_select(derive_rankings(inst), 1)
    assert coverage.committee == (0,)
    assert cor_single_audit(inst, coverage, 1).value == Fraction(2, 27)


def test_coverage_shape_checked():
    inst = line_instance()
    other = ear_select(derive_rankings(Instance.from_coordinates([[0]], [[1], [2], [3]], 2)), 2)
    with pytest.raises(ProfileShapeMismatch):
        stability_rho(inst, other)


def test_no_augmentation_colocated():
    inst = Instance.from_coordinates([[0], [10]], [[0], [10], [50]], 2)
    report = no_augmentation_monitor(inst, [0, 1])
    assert report.value == 1
    assert dict(report.extras)["gamma/(n/k)"].startswith("1 ")
    assert report.bound is None and report.satisfied is None


def test_render_text():
    inst = line_instance()
    text = pf_gamma(inst, [0, 1], bound=ear_stability()).render(inst)
    assert "check: PF" in text
    assert "measured: 1 (1.000000)" in text
    assert "satisfied: yes" in text
    assert "{v1, v2}" in text


def test_oracles_agree_on_corpus():
    for inst in small_corpus():
        committee = ear_select(derive_rankings(inst), inst.k).committee
        assert pf_gamma(inst, committee).value == pf_gamma_bruteforce(inst, committee).value
        for alpha in ALPHAS:
            core = core_beta(inst, committee, alpha).value
            assert core == core_beta_bruteforce(inst, committee, alpha).value
            assert pr_gamma(inst, committee, alpha, t_range=(1, 1)).value == core


def test_stability_size_p_coalitions_suffice():
    for inst in small_corpus(seed=12):
        for coverage in (ear_select(derive_rankings(inst), inst.k), tgc_select(inst)):
            assert stability_rho(inst, coverage).value == stability_rho_bruteforce(inst, coverage).value


def test_strong_dominates_and_alpha_monotone():
    for inst in small_corpus(seed=13):
        committee = tgc_select(inst).committee
        previous_pr = previous_core = None
        for alpha in ALPHAS:
            pr = pr_gamma(inst, committee, alpha).value
            assert pr_strong_gamma(inst, committee, alpha).value >= pr
            core = core_beta(inst, committee, alpha).value
            if previous_pr is not None:
                assert pr <= previous_pr and core <= previous_core
            previous_pr, previous_core = pr, core


def test_witnesses_reevaluate_exactly():
    for inst in small_corpus(seed=14):
        coverage = ear_select(derive_rankings(inst), inst.k)
        committee = coverage.committee
        reports = [
            pf_gamma(inst, committee),
            core_beta(inst, committee, Fraction(3, 2)),
            pr_gamma(inst, committee, Fraction(3, 2)),
            pr_strong_gamma(inst, committee, 1),
            cor_single_audit(inst, coverage, Fraction(3, 2)),
            stability_rho(inst, coverage),
        ]
        for report in reports:
            if report.witness is not None:
                assert reevaluate(inst, report, coverage=coverage) == report.value, report.definition


def test_stability_within_guarantees():
    for inst in small_corpus(seed=15):
        assert stability_rho(inst, ear_select(derive_rankings(inst), inst.k)).value <= ear_stability()
        assert stability_rho(inst, tgc_select(inst)).value <= tgc_stability()
