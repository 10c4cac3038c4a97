import math
from fractions import Fraction

import pytest

from metricrep.bounds import (
    SurdBound,
    ear_representation,
    ear_stability,
    lower_bound_diverging,
    lower_bound_refined,
    lower_bound_two_cluster,
    proven_bound,
    separation_limit,
    single_winner_distortion,
    tgc_representation,
    tgc_stability,
)
from metricrep.errors import AlphaOutOfRange


@pytest.mark.parametrize("bound,below,above", [
    (ear_stability(), Fraction(57015, 10000), Fraction(57016, 10000)),
    (tgc_stability(), Fraction(24142, 10000), Fraction(24143, 10000)),
    (separation_limit(), Fraction(42360, 10000), Fraction(42361, 10000)),
    (ear_representation(2), Fraction(14403, 1000), Fraction(14404, 1000)),
    (tgc_representation(2), Fraction(78284, 10000), Fraction(78285, 10000)),
])
def test_exact_comparisons(bound, below, above):
    assert below <= bound
    assert below < bound
    assert not above <= bound
    assert above > bound
    assert bound > below and bound < above


def test_rational_bound():
    bound = single_winner_distortion()
    assert Fraction(44) <= bound
    assert bound == 44
    assert not Fraction(441, 10) <= bound


def test_infinity_exceeds_every_bound():
    assert not math.inf <= ear_stability()
    assert math.inf > tgc_stability()


def test_surd_equality_and_hash():
    assert SurdBound(1, 1, 2) == tgc_stability()
    assert hash(SurdBound(1, 1, 2)) == hash(tgc_stability())
    assert SurdBound(Fraction(5, 2), Fraction(1, 2), 41) != tgc_stability()


def test_rejects_negative_surd():
    with pytest.raises(ValueError):
        SurdBound(1, -1, 2)


def test_decimal_and_margin():
    assert f"{ear_stability().to_decimal():.6f}" == "5.701562"
    assert ear_stability().margin(Fraction(1)) == "4.701562"
    assert tgc_stability().margin(math.inf) == "-inf"
    assert str(tgc_stability()) == "1+1*sqrt(2)"


def test_representation_needs_augmentation():
    with pytest.raises(AlphaOutOfRange):
        ear_representation(1)
    assert tgc_representation(3) == SurdBound(1 + 2 * Fraction(3, 2), Fraction(3, 2), 2)


def test_lower_bound_closed_forms():
    assert lower_bound_two_cluster(2) == Fraction(4, 3)
    assert lower_bound_two_cluster(Fraction(3, 2)) == Fraction(3, 2)
    assert lower_bound_diverging(Fraction(5, 4)) == Fraction(3, 2)
    assert lower_bound_refined(24, 4) == Fraction(1, 4)
    assert lower_bound_refined(35, 5) == Fraction(5, 16)


def test_proven_bound_lookup():
    assert proven_bound("ear", "pf") == ear_stability()
    assert proven_bound("tgc", "stability") == tgc_stability()
    assert proven_bound("ear", "pr", 2) == ear_representation(2)
    assert proven_bound("tgc", "cor-single", 3) == tgc_representation(3)
    assert proven_bound("ear", "pr", 1) is None
    assert proven_bound("single-winner", "distortion") == single_winner_distortion()
    assert proven_bound("ear", "no-augmentation") is None
