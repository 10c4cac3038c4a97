"""End-to-end checks of the proven guarantees and the lower-bound constructions.

The enumerative checks are marked slow; deselect them with -m "not slow".
"""
import itertools
import logging
from fractions import Fraction

import pytest

from metricrep.audit import (
    core_beta,
    core_beta_bruteforce,
    distortion,
    pf_gamma,
    pf_gamma_bruteforce,
    pr_gamma,
    pr_strong_gamma,
    stability_rho,
)
from metricrep.bounds import (
    ear_representation,
    ear_stability,
    lower_bound_diverging,
    lower_bound_refined,
    lower_bound_two_cluster,
    separation_limit,
    single_winner_distortion,
    tgc_representation,
    tgc_stability,
)
from metricrep.ear import ear_select, single_winner
from metricrep.instance import derive_rankings, validate_metric
from metricrep.instances import gen_diverging, gen_refined, gen_separation, gen_two_cluster, separation_roles
from metricrep.sweep import doubling_sizes, opcount_bench
from metricrep.tgc import tgc_select

from helpers import corpus
from test_ear import check_coverage
from test_tgc import check_balls

log = logging.getLogger(__name__)

PR_ALPHAS = (Fraction(3, 2), Fraction(2), Fraction(3))


def guarantee_corpus(seed):
    return corpus(1000, 40, 15, 6, seed=seed)


def test_pf_guarantees():
    for inst in guarantee_corpus(101):
        profile = derive_rankings(inst)
        assert pf_gamma(inst, ear_select(profile, inst.k).committee).value <= ear_stability()
        assert pf_gamma(inst, tgc_select(inst).committee).value <= tgc_stability()


@pytest.mark.slow
def test_stability_guarantees():
    checked = 0
    for inst in guarantee_corpus(101):
        if inst.n > 14:
            continue
        tgc = stability_rho(inst, tgc_select(inst), "cardinal")
        assert tgc.value <= tgc_stability()
        assert stability_rho(inst, ear_select(derive_rankings(inst), inst.k)).value <= ear_stability()
        checked += 1
    assert checked > 100


@pytest.mark.slow
def test_pr_guarantees():
    for inst in corpus(200, 12, 8, 4, seed=103):
        ear = ear_select(derive_rankings(inst), inst.k).committee
        tgc = tgc_select(inst).committee
        for alpha in PR_ALPHAS:
            for measure in (pr_gamma, pr_strong_gamma):
                assert measure(inst, ear, alpha).value <= ear_representation(alpha)
                assert measure(inst, tgc, alpha).value <= tgc_representation(alpha)


@pytest.mark.slow
def test_oracle_equivalence():
    for inst in corpus(100, 10, 8, 4, seed=104):
        for committee in (ear_select(derive_rankings(inst), inst.k).committee, tgc_select(inst).committee):
            assert pf_gamma(inst, committee).value == pf_gamma_bruteforce(inst, committee).value
            for alpha in (Fraction(1),) + PR_ALPHAS:
                core = core_beta(inst, committee, alpha).value
                assert core == core_beta_bruteforce(inst, committee, alpha).value
                assert pr_gamma(inst, committee, alpha, t_range=(1, 1)).value == core


@pytest.mark.slow
def test_two_cluster_core_is_empty():
    inst = gen_two_cluster(2)
    assert (inst.n, inst.k) == (14, 7)
    floor = lower_bound_two_cluster(2)
    assert floor == Fraction(4, 3) > 1 + Fraction(1, 4)
    values = [core_beta(inst, committee, 2).value for committee in itertools.combinations(range(inst.m), inst.k)]
    assert len(values) == 3432
    assert min(values) >= floor


def test_diverging_core_is_empty():
    alpha = Fraction(5, 4)
    inst = gen_diverging(alpha)
    assert (inst.n, inst.m, inst.k) == (15, 5, 4)
    for committee in itertools.combinations(range(inst.m), inst.k):
        assert core_beta(inst, committee, alpha).value >= lower_bound_diverging(alpha) == Fraction(3, 2)


@pytest.mark.parametrize("n,k", [(24, 4), (35, 5)])
def test_refined_core_is_empty(n, k):
    inst = gen_refined(n, k)
    floor = lower_bound_refined(n, k)
    assert floor == Fraction(1, 16) * min(k, Fraction(n, k))
    for committee in itertools.combinations(range(inst.m), inst.k):
        assert core_beta(inst, committee, 1).value >= floor


def separation_factor(epsilon, selected, others):
    inst, profile = gen_separation(epsilon, rotation=selected)
    assert validate_metric(inst).ok and profile.is_consistent_with(inst)
    report = pf_gamma(inst, (selected,) + others)
    roles = separation_roles(selected)
    assert report.witness.coalition == tuple(sorted((roles["v2"], roles["v3"])))
    assert report.witness.targets == (roles["c3"],)
    return report.value


def test_separation_beats_ordinal_rules():
    limit = separation_limit()
    for selected in range(3):
        for others in itertools.combinations(range(3, 6), 2):
            coarse = separation_factor(Fraction(1, 100), selected, others)
            fine = separation_factor(Fraction(1, 1000), selected, others)
            assert limit.shifted(Fraction(-1, 10)) <= coarse
            assert coarse < fine
            assert fine < limit


def test_single_winner_distortion():
    worst = Fraction(0)
    for inst in guarantee_corpus(105):
        value = distortion(inst, single_winner(derive_rankings(inst)))
        assert value <= single_winner_distortion()
        worst = max(worst, value)
    log.info("largest single-winner distortion seen: %s", worst)


def test_structural_invariants():
    for inst in guarantee_corpus(106):
        profile = derive_rankings(inst)
        ear = ear_select(profile, inst.k)
        tgc = tgc_select(inst)
        assert ear == ear_select(profile, inst.k) and tgc == tgc_select(inst)
        check_coverage(ear, profile)
        check_balls(inst, tgc)


@pytest.mark.slow
def test_operation_counts_stay_linear():
    sizes = doubling_sizes(625, 10000, 100)
    assert sizes[-1] == (10000, 100)
    rows = opcount_bench(sizes, seed=7)
    assert len(rows) == 2 * len(sizes)
    assert not any(row.flagged for row in rows)
