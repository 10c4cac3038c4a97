import hashlib
import json
import math
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

from .config import DECIMAL_PLACES

Measure = Union[Fraction, float]  # float only ever holds math.inf


def sha256d_hex(data: bytes) -> str:
    return hashlib.sha256(hashlib.sha256(data).digest()).hexdigest()


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer or a decimal literal without rounding."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc
    return value


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_measure(value: Optional[Measure]) -> str:
    if value is None:
        return "-"
    if value == math.inf:
        return "inf"
    return format_rational(value)


def format_decimal(value: Optional[Measure], places: int = DECIMAL_PLACES) -> str:
    if value is None:
        return "-"
    if value == math.inf:
        return "inf"
    scaled = round(Fraction(value) * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    if places == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{places}d}"


def ceil_fraction(value: Fraction) -> int:
    return math.ceil(Fraction(value))


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den


def parse_index_range(text: str) -> Tuple[int, int]:
    """``"A..B"`` or ``"A"`` to an inclusive pair."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        pair = (int(lo), int(hi))
    else:
        pair = (int(text), int(text))
    if pair[0] > pair[1]:
        raise ValueError(f"empty range: {text!r}")
    return pair


def ratio(numerator: int, denominator: int, zero_zero: Optional[Fraction]) -> Optional[Measure]:
    """Exact ratio with the audit zero conventions.

    ``0/0`` maps to ``zero_zero`` (``None`` meaning "constraint satisfied"), ``x/0`` to inf.
    """
    if denominator == 0:
        return zero_zero if numerator == 0 else math.inf
    return Fraction(numerator, denominator)
