"""Closed-form guarantee and lower-bound constants, compared exactly.

Every constant has the shape ``a + b * sqrt(D)`` with rational ``a``, rational ``b >= 0``
and a non-negative integer ``D``, so comparisons against rationals reduce to integer
arithmetic.
"""
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from .errors import AlphaOutOfRange
from .utils import Measure, format_rational


@dataclass(frozen=True, eq=False)
class SurdBound:
    a: Fraction
    b: Fraction = Fraction(0)
    radicand: int = 0
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.b < 0 or self.radicand < 0:
            raise ValueError("surd bounds need b >= 0 and a non-negative radicand")

    def sign_against(self, x: Measure) -> int:
        """Sign of ``x - self``."""
        if x == math.inf:
            return 1
        y = Fraction(x) - self.a
        if self.b == 0 or self.radicand == 0:
            return (y > 0) - (y < 0)
        if y <= 0:
            return -1
        lhs, rhs = y * y, self.b * self.b * self.radicand
        return (lhs > rhs) - (lhs < rhs)

    def __ge__(self, x):
        return self.sign_against(x) <= 0

    def __gt__(self, x):
        return self.sign_against(x) < 0

    def __le__(self, x):
        return self.sign_against(x) >= 0

    def __lt__(self, x):
        return self.sign_against(x) > 0

    def __eq__(self, x):
        if isinstance(x, SurdBound):
            return (self.a, self.b, self.radicand) == (x.a, x.b, x.radicand)
        return self.sign_against(x) == 0

    def __hash__(self):
        return hash((self.a, self.b, self.radicand))

    def shifted(self, delta: Fraction, label: str = "") -> "SurdBound":
        return SurdBound(self.a + Fraction(delta), self.b, self.radicand, label or self.label)

    def to_decimal(self, digits: int = 40) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits
            a = Decimal(self.a.numerator) / Decimal(self.a.denominator)
            if self.b == 0 or self.radicand == 0:
                return +a
            b = Decimal(self.b.numerator) / Decimal(self.b.denominator)
            return a + b * Decimal(self.radicand).sqrt()

    def margin(self, x: Measure, places: int = 6) -> str:
        """``self - x`` rendered with ``places`` decimals."""
        if x == math.inf:
            return "-inf"
        with localcontext() as ctx:
            ctx.prec = 60
            value = self.to_decimal(60) - Decimal(Fraction(x).numerator) / Decimal(Fraction(x).denominator)
            return f"{value:.{places}f}"

    def __str__(self):
        if self.b == 0 or self.radicand == 0:
            return format_rational(self.a)
        return f"{format_rational(self.a)}+{format_rational(self.b)}*sqrt({self.radicand})"


def _augmentation(alpha) -> Fraction:
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise AlphaOutOfRange(f"guarantees need alpha > 1, got {alpha}")
    return alpha / (alpha - 1)


def ear_stability() -> SurdBound:
    """rho = (5 + sqrt 41) / 2; also the proportional-fairness guarantee of EAR."""
    return SurdBound(Fraction(5, 2), Fraction(1, 2), 41, "(5+sqrt41)/2")


def tgc_stability() -> SurdBound:
    return SurdBound(1, 1, 2, "1+sqrt2")


def ear_representation(alpha) -> SurdBound:
    """gamma(alpha) = 1 + ((7 + sqrt 41) / 2) * alpha / (alpha - 1)."""
    r = _augmentation(alpha)
    return SurdBound(1 + Fraction(7, 2) * r, r / 2, 41, "1+((7+sqrt41)/2)*alpha/(alpha-1)")


def tgc_representation(alpha) -> SurdBound:
    """1 + (2 + sqrt 2) * alpha / (alpha - 1)."""
    r = _augmentation(alpha)
    return SurdBound(1 + 2 * r, r, 2, "1+(2+sqrt2)*alpha/(alpha-1)")


def single_winner_distortion() -> SurdBound:
    return SurdBound(44, label="44")


def separation_limit() -> SurdBound:
    """2 + sqrt 5, the ordinal proportional-fairness lower bound."""
    return SurdBound(2, 1, 5, "2+sqrt5")


def lower_bound_two_cluster(alpha) -> Fraction:
    """1 + 1/(q-1) with q = ceil(2 alpha)."""
    q = math.ceil(2 * Fraction(alpha))
    return 1 + Fraction(1, q - 1)


def lower_bound_diverging(alpha) -> Fraction:
    """(2 - alpha) / (2 (alpha - 1))."""
    alpha = Fraction(alpha)
    return (2 - alpha) / (2 * (alpha - 1))


def lower_bound_refined(n: int, k: int) -> Fraction:
    return min(Fraction(k), Fraction(n, k)) / 16


PR_CHECKS = ("core", "pr", "pr-strong", "cor-single")


def proven_bound(algorithm: str, check: str, alpha=None) -> Optional[SurdBound]:
    """Proven guarantee of ``algorithm`` under ``check``, if any."""
    if algorithm == "single-winner":
        return single_winner_distortion() if check == "distortion" else None
    if algorithm not in ("ear", "tgc"):
        return None
    if check in ("pf", "stability"):
        return ear_stability() if algorithm == "ear" else tgc_stability()
    if check in PR_CHECKS:
        if alpha is None or Fraction(alpha) <= 1:
            return None
        return ear_representation(alpha) if algorithm == "ear" else tgc_representation(alpha)
    return None
