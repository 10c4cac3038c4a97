"""Instances, ranked profiles and exact distance arithmetic.

Points of ``V ∪ C`` share one index space: voters are ``0..n-1`` and candidate ``c`` is
point ``n + c``. Distances are stored as integer numerators over one common positive
denominator, so every comparison and every scale-free ratio is integer arithmetic;
``Instance.distance`` hands out the exact ``Fraction``.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    Asymmetric,
    CommitteeSizeError,
    ExactModeUnsupported,
    MetricMissing,
    MetricViolation,
    NegativeDistance,
    NonzeroDiagonal,
    PartialMetric,
    ProfileShapeMismatch,
    TriangleViolation,
)
from .utils import common_denominator, format_rational, sha256d_hex, to_json

log = logging.getLogger(__name__)

ExactScalar = Fraction
Rows = Tuple[Tuple[int, ...], ...]

NORMS = ("l1", "linf", "euclidean")


@dataclass(frozen=True)
class HareQuota:
    p: int


def hare_quota(n: int, k: int) -> HareQuota:
    if n < 1 or k < 1:
        raise CommitteeSizeError(f"hare quota needs n >= 1 and k >= 1, got n={n}, k={k}")
    return HareQuota(p=-(-n // k))


@dataclass(frozen=True)
class Instance:
    n: int
    m: int
    k: int
    denominator: int = 1
    rows: Optional[Rows] = None
    full: bool = True
    norm: Optional[str] = None
    coordinates: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    voter_labels: Optional[Tuple[str, ...]] = None
    candidate_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise CommitteeSizeError(f"need at least one voter and one candidate (n={self.n}, m={self.m})")
        if not 1 <= self.k < self.m:
            raise CommitteeSizeError(f"committee size must satisfy 1 <= k < m, got k={self.k}, m={self.m}")
        if self.denominator < 1:
            raise ValueError("denominator must be positive")
        if self.norm is not None and self.norm not in NORMS:
            raise ValueError(f"unknown norm {self.norm!r}")
        if self.rows is not None:
            width = self.n + self.m if self.full else self.m
            height = self.n + self.m if self.full else self.n
            if len(self.rows) != height or any(len(r) != width for r in self.rows):
                raise ProfileShapeMismatch(f"distance matrix must be {height}x{width}")
        if self.voter_labels is not None and len(self.voter_labels) != self.n:
            raise ProfileShapeMismatch("one label per voter required")
        if self.candidate_labels is not None and len(self.candidate_labels) != self.m:
            raise ProfileShapeMismatch("one label per candidate required")

    # construction

    @classmethod
    def from_matrix(cls, n: int, m: int, k: int, matrix: Sequence[Sequence], **labels) -> "Instance":
        """Full ``(n+m) x (n+m)`` matrix over voters then candidates."""
        exact = [[Fraction(x) for x in row] for row in matrix]
        den = common_denominator(x for row in exact for x in row)
        rows = tuple(tuple(int(x * den) for x in row) for row in exact)
        return cls(n=n, m=m, k=k, denominator=den, rows=rows, full=True, **labels)

    @classmethod
    def from_block(cls, n: int, m: int, k: int, block: Sequence[Sequence], **labels) -> "Instance":
        """Voter-by-candidate block only; triangle checks are then unavailable."""
        exact = [[Fraction(x) for x in row] for row in block]
        den = common_denominator(x for row in exact for x in row)
        rows = tuple(tuple(int(x * den) for x in row) for row in exact)
        return cls(n=n, m=m, k=k, denominator=den, rows=rows, full=False, **labels)

    @classmethod
    def from_coordinates(cls, voters: Sequence[Sequence], candidates: Sequence[Sequence], k: int,
                         norm: str = "l1", full: bool = True, **labels) -> "Instance":
        if norm not in NORMS:
            raise ValueError(f"unknown norm {norm!r}")
        points = [tuple(Fraction(x) for x in p) for p in list(voters) + list(candidates)]
        dims = {len(p) for p in points}
        if len(dims) != 1:
            raise ProfileShapeMismatch("all coordinate vectors must share one dimension")
        den = common_denominator(x for p in points for x in p)
        ints = [[int(x * den) for x in p] for p in points]
        n = len(voters)
        limit = 2**20 if norm == "euclidean" else 2**30
        dtype = np.int64 if max((abs(x) for p in ints for x in p), default=0) < limit else object
        arr = np.array(ints, dtype=dtype)
        if full:
            diff = arr[:, None, :] - arr[None, :, :]
        else:
            diff = arr[:n, None, :] - arr[None, n:, :]
        if norm == "l1":
            dist = np.abs(diff).sum(axis=-1)
            scale = den
        elif norm == "linf":
            dist = np.abs(diff).max(axis=-1)
            scale = den
        else:
            # squared euclidean; only comparisons are exact
            dist = (diff * diff).sum(axis=-1)
            scale = den * den
        rows = tuple(tuple(int(x) for x in row) for row in dist.tolist())
        return cls(n=n, m=len(candidates), k=k, denominator=scale, rows=rows, full=full, norm=norm,
                   coordinates=tuple(points), **labels)

    @classmethod
    def ordinal_only(cls, n: int, m: int, k: int, **labels) -> "Instance":
        return cls(n=n, m=m, k=k, rows=None, **labels)

    def with_k(self, k: int) -> "Instance":
        return replace(self, k=k)

    # accessors

    @property
    def has_metric(self) -> bool:
        return self.rows is not None

    @property
    def squared(self) -> bool:
        return self.norm == "euclidean"

    @property
    def quota(self) -> HareQuota:
        return hare_quota(self.n, self.k)

    def voter_point(self, v: int) -> int:
        return v

    def candidate_point(self, c: int) -> int:
        return self.n + c

    def voter_label(self, v: int) -> str:
        return self.voter_labels[v] if self.voter_labels else f"v{v + 1}"

    def candidate_label(self, c: int) -> str:
        return self.candidate_labels[c] if self.candidate_labels else f"c{c + 1}"

    def _require_metric(self):
        if self.rows is None:
            raise MetricMissing("instance carries no distances (ordinal-only election)")

    def numerator(self, x: int, y: int) -> int:
        """Scaled distance between global points ``x`` and ``y``."""
        self._require_metric()
        if self.full:
            return self.rows[x][y]
        if x < self.n <= y:
            return self.rows[x][y - self.n]
        if y < self.n <= x:
            return self.rows[y][x - self.n]
        raise PartialMetric(f"only voter-candidate distances are known, asked for ({x}, {y})")

    def distance(self, x: int, y: int) -> ExactScalar:
        if self.squared:
            raise ExactModeUnsupported("euclidean distances are irrational in general; only comparisons are exact")
        return Fraction(self.numerator(x, y), self.denominator)

    @cached_property
    def order_block(self) -> Rows:
        """Voter-by-candidate numerators; order-preserving even for squared euclidean."""
        self._require_metric()
        if not self.full:
            return self.rows
        n = self.n
        return tuple(tuple(self.rows[v][n:]) for v in range(n))

    @property
    def exact_block(self) -> Rows:
        """Voter-by-candidate numerators proportional to the true distances."""
        if self.squared:
            raise ExactModeUnsupported("distance sums over euclidean instances are not exact")
        return self.order_block


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violation: Optional[MetricViolation] = None
    partial: bool = False

    def raise_for_violation(self):
        if self.violation is not None:
            raise self.violation


def validate_metric(inst: Instance) -> ValidationResult:
    inst._require_metric()
    rows = inst.rows
    for x, row in enumerate(rows):
        for y, d in enumerate(row):
            if d < 0:
                if not inst.full:
                    y += inst.n
                return ValidationResult(ok=False, violation=NegativeDistance(x, y), partial=not inst.full)
    if not inst.full:
        return ValidationResult(ok=True, partial=True)
    size = len(rows)
    for x in range(size):
        if rows[x][x] != 0:
            return ValidationResult(ok=False, violation=NonzeroDiagonal(x))
    for x in range(size):
        for y in range(x + 1, size):
            if rows[x][y] != rows[y][x]:
                return ValidationResult(ok=False, violation=Asymmetric(x, y))
    if inst.squared:
        # induced by a norm; squared values themselves need not be a metric
        return ValidationResult(ok=True)
    for x in range(size):
        row_x = rows[x]
        for y in range(size):
            dxy = row_x[y]
            for z, (dxz, dyz) in enumerate(zip(row_x, rows[y])):
                if dxz > dxy + dyz:
                    return ValidationResult(ok=False, violation=TriangleViolation(x, y, z))
    return ValidationResult(ok=True)


@dataclass(frozen=True)
class RankedProfile:
    """Per-voter total orders; ``orders[v][i]`` is the candidate at position ``i + 1``."""

    orders: Tuple[Tuple[int, ...], ...]
    m: int = field(default=-1)

    def __post_init__(self):
        if not self.orders:
            raise ProfileShapeMismatch("profile needs at least one voter")
        m = len(self.orders[0]) if self.m < 0 else self.m
        object.__setattr__(self, "m", m)
        expected = list(range(m))
        for v, order in enumerate(self.orders):
            if sorted(order) != expected:
                raise ProfileShapeMismatch(f"ranking of voter {v + 1} is not a permutation of 1..{m}")

    @classmethod
    def from_positions(cls, rows: Iterable[Iterable[int]]) -> "RankedProfile":
        """Rows of 1-based candidate indices, most preferred first."""
        return cls(orders=tuple(tuple(c - 1 for c in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.orders)

    @cached_property
    def positions(self) -> Tuple[Tuple[int, ...], ...]:
        table = []
        for order in self.orders:
            pos = [0] * self.m
            for i, c in enumerate(order):
                pos[c] = i + 1
            table.append(tuple(pos))
        return tuple(table)

    def position(self, v: int, c: int) -> int:
        """pi_v(c), 1-based."""
        return self.positions[v][c]

    def candidate_at(self, v: int, tau: int) -> int:
        return self.orders[v][tau - 1]

    def prefers(self, v: int, a: int, b: int) -> bool:
        return self.positions[v][a] < self.positions[v][b]

    def is_consistent_with(self, inst: Instance) -> bool:
        if inst.n != self.n or inst.m != self.m:
            return False
        block = inst.order_block
        for v, order in enumerate(self.orders):
            row = block[v]
            if any(row[a] > row[b] for a, b in zip(order, order[1:])):
                return False
        return True


def derive_rankings(inst: Instance) -> RankedProfile:
    block = inst.order_block
    orders = tuple(tuple(sorted(range(inst.m), key=lambda c, row=row: (row[c], c))) for row in block)
    return RankedProfile(orders=orders, m=inst.m)


def d_sum(X: Iterable[int], Y: Iterable[int], inst: Instance) -> ExactScalar:
    """Sum of distances over all pairs of global points in ``X x Y``."""
    if inst.squared:
        raise ExactModeUnsupported("distance sums over euclidean instances are not exact")
    ys = list(Y)
    total = sum(inst.numerator(x, y) for x in X for y in ys)
    return Fraction(total, inst.denominator)


def column_sums(inst: Instance, voters: Iterable[int]) -> List[int]:
    """Scaled ``d_sum(S, c)`` for every candidate ``c``."""
    block = inst.exact_block
    sums = [0] * inst.m
    for v in voters:
        for c, d in enumerate(block[v]):
            sums[c] += d
    return sums


def instance_digest(inst: Instance) -> str:
    payload = {
        "n": inst.n,
        "m": inst.m,
        "k": inst.k,
        "norm": inst.norm,
        "full": inst.full,
        "metric": None if inst.rows is None else [
            [format_rational(Fraction(d, inst.denominator)) for d in row] for row in inst.rows
        ],
    }
    return sha256d_hex(to_json(payload).encode())
