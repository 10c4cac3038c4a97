from fractions import Fraction

import pytest

from metricrep.errors import (
    Asymmetric,
    CommitteeSizeError,
    ExactModeUnsupported,
    MetricMissing,
    NegativeDistance,
    NonzeroDiagonal,
    PartialMetric,
    ProfileShapeMismatch,
    TriangleViolation,
)
from metricrep.instance import (
    Instance,
    RankedProfile,
    column_sums,
    d_sum,
    derive_rankings,
    hare_quota,
    instance_digest,
    validate_metric,
)

from helpers import line_instance


@pytest.mark.parametrize("n,k,p", [(8, 3, 3), (2, 2, 1), (15, 4, 4), (4, 2, 2), (1, 1, 1)])
def test_hare_quota(n, k, p):
    quota = hare_quota(n, k)
    assert quota.p == p
    assert quota.p * k >= n > (quota.p - 1) * k


def test_hare_quota_rejects_empty():
    with pytest.raises(CommitteeSizeError):
        hare_quota(0, 1)


def test_instance_requires_k_below_m():
    with pytest.raises(CommitteeSizeError):
        Instance.from_block(1, 2, 2, [[1, 2]])


def test_matrix_shape_checked():
    with pytest.raises(ProfileShapeMismatch):
        Instance.from_matrix(1, 2, 1, [[0, 1], [1, 0]])


def test_unit_metric_validates():
    inst = Instance.from_matrix(1, 2, 1, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    result = validate_metric(inst)
    assert result.ok and result.violation is None and not result.partial


def test_triangle_violation_reported():
    inst = Instance.from_matrix(1, 2, 1, [[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    result = validate_metric(inst)
    assert not result.ok
    assert isinstance(result.violation, TriangleViolation)
    assert result.violation.points == (0, 1, 2)
    with pytest.raises(TriangleViolation):
        result.raise_for_violation()


@pytest.mark.parametrize("matrix,error", [
    ([[0, 1, 1], [2, 0, 1], [1, 1, 0]], Asymmetric),
    ([[0, -1, 1], [-1, 0, 1], [1, 1, 0]], NegativeDistance),
    ([[1, 1, 1], [1, 0, 1], [1, 1, 0]], NonzeroDiagonal),
])
def test_matrix_violations(matrix, error):
    result = validate_metric(Instance.from_matrix(1, 2, 1, matrix))
    assert isinstance(result.violation, error)


def test_pseudo_metric_zeros_allowed():
    inst = Instance.from_matrix(1, 2, 1, [[0, 0, 1], [0, 0, 1], [1, 1, 0]])
    assert validate_metric(inst).ok


def test_block_only_is_partial():
    inst = Instance.from_block(2, 2, 1, [[1, 2], [2, 1]])
    result = validate_metric(inst)
    assert result.ok and result.partial
    assert inst.distance(0, inst.candidate_point(1)) == 2
    with pytest.raises(PartialMetric):
        inst.distance(0, 1)


def test_line_instance_is_metric():
    inst = line_instance()
    assert validate_metric(inst).ok
    assert inst.distance(0, inst.candidate_point(0)) == Fraction(1, 2)
    assert inst.distance(inst.candidate_point(0), inst.candidate_point(2)) == Fraction(199, 2)


def test_derive_rankings_forced_by_distances():
    inst = Instance.from_coordinates([[0], [10]], [[1], [9], [50]], 1)
    profile = derive_rankings(inst)
    assert profile.orders == ((0, 1, 2), (1, 0, 2))
    assert profile.position(1, 0) == 2
    assert profile.is_consistent_with(inst)


def test_derive_rankings_ties_by_index():
    inst = Instance.from_block(2, 4, 1, [[5, 5, 5, 5], [5, 5, 5, 5]])
    assert derive_rankings(inst).orders == ((0, 1, 2, 3), (0, 1, 2, 3))


def test_ranked_profile_rejects_non_permutation():
    with pytest.raises(ProfileShapeMismatch):
        RankedProfile.from_positions([[1, 1, 2]])


def test_inconsistent_profile_detected():
    inst = line_instance()
    profile = RankedProfile.from_positions([[2, 1, 3], [1, 2, 3], [2, 1, 3], [2, 1, 3]])
    assert not profile.is_consistent_with(inst)


def test_d_sum_examples():
    inst = line_instance()
    c1 = inst.candidate_point(0)
    assert d_sum([0], [0], inst) == 0
    assert d_sum([0, 1, 2, 3], [c1], inst) == 21
    assert d_sum([c1], [0, 1, 2, 3], inst) == 21
    assert d_sum([0, 1], [c1], inst) == d_sum([0], [c1], inst) + d_sum([1], [c1], inst)
    assert column_sums(inst, range(4)) == [42, 42, 756]


def test_d_sum_linear():
    inst = Instance.from_block(2, 2, 1, [[1, 4], [2, 4]])
    assert d_sum([0, 1], [inst.candidate_point(0)], inst) == 3


def test_euclidean_compares_but_does_not_sum():
    inst = Instance.from_coordinates([[0, 0], [3, 4]], [[0, 1], [3, 3]], 1, norm="euclidean")
    assert inst.order_block == ((1, 18), (18, 1))
    assert derive_rankings(inst).orders == ((0, 1), (1, 0))
    assert validate_metric(inst).ok
    with pytest.raises(ExactModeUnsupported):
        d_sum([0], [inst.candidate_point(0)], inst)
    with pytest.raises(ExactModeUnsupported):
        inst.distance(0, 2)


def test_linf_norm():
    inst = Instance.from_coordinates([[0, 0]], [[3, 1], [1, 1]], 1, norm="linf")
    assert inst.distance(0, inst.candidate_point(0)) == 3


def test_ordinal_only_has_no_metric():
    inst = Instance.ordinal_only(2, 3, 1)
    assert not inst.has_metric
    with pytest.raises(MetricMissing):
        validate_metric(inst)


def test_digest_ignores_scaling():
    a = Instance.from_block(1, 2, 1, [[Fraction(1, 2), 1]])
    b = Instance.from_block(1, 2, 1, [["1/2", "2/2"]])
    assert instance_digest(a) == instance_digest(b)
    assert instance_digest(a) != instance_digest(Instance.from_block(1, 2, 1, [[1, 1]]))
