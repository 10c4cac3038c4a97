"""Generators for the lower-bound families, the ordinal/cardinal separation election and
seeded random lattice instances.

Every family is built as a full (pseudo-)metric over ``V ∪ C``; the families with ``V = C``
pair voter ``i`` with candidate ``i`` at distance 0.
"""
import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import AlphaOutOfRange, KTooLarge, MetricViolation, NonIntegralK
from .instance import Instance, RankedProfile, derive_rankings, hare_quota, validate_metric

log = logging.getLogger(__name__)

FAMILIES = ("two-cluster", "diverging", "refined", "separation", "random")


def _site_metric(n: int, m: int, k: int, voter_sites: Sequence[int], candidate_sites: Sequence[int],
                 site_cluster: Sequence[int], near, far, **labels) -> Instance:
    """Points at named sites: 0 on a shared site, ``near`` within a cluster, ``far`` across."""
    sites = list(voter_sites) + list(candidate_sites)

    def dist(a: int, b: int):
        if sites[a] == sites[b]:
            return 0
        return near if site_cluster[sites[a]] == site_cluster[sites[b]] else far

    size = n + m
    matrix = [[dist(a, b) for b in range(size)] for a in range(size)]
    return Instance.from_matrix(n, m, k, matrix, **labels)


def _checked(inst: Instance) -> Instance:
    validate_metric(inst).raise_for_violation()
    return inst


def gen_two_cluster(alpha, distance=config.DEFAULT_CLUSTER_DISTANCE) -> Instance:
    """Two clusters of ``k = 2q - 1`` paired voter/candidate sites, ``q = ceil(2 alpha)``."""
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise AlphaOutOfRange(f"two-cluster family needs alpha > 1, got {alpha}")
    if Fraction(distance) < 1:
        raise ValueError("cross-cluster distance must be at least 1")
    q = math.ceil(2 * alpha)
    k = 2 * q - 1
    n = 2 * k
    sites = list(range(n))
    clusters = [0] * k + [1] * k
    log.debug("two-cluster: alpha=%s q=%d k=%d n=%d", alpha, q, k, n)
    return _checked(_site_metric(n, n, k, sites, sites, clusters, 1, distance))


def diverging_k(alpha) -> int:
    alpha = Fraction(alpha)
    if not 1 < alpha < Fraction(3, 2):
        raise AlphaOutOfRange(f"diverging family needs 1 < alpha < 3/2, got {alpha}")
    k = 1 / (alpha - 1)
    if k.denominator != 1:
        raise NonIntegralK(f"1/(alpha-1) = {k} is not an integer")
    return int(k)


def gen_diverging(alpha, distance=1) -> Instance:
    """``k + 1`` clusters of one candidate and ``k - 1`` co-located voters, ``k = 1/(alpha-1)``."""
    k = diverging_k(alpha)
    n, m = k * k - 1, k + 1
    voter_sites = [i // (k - 1) for i in range(n)]
    return _checked(_site_metric(n, m, k, voter_sites, list(range(m)), list(range(m)), distance, distance))


def refined_cluster_sizes(n: int, k: int) -> List[int]:
    if k > Fraction(n, 4):
        raise KTooLarge(f"refined family needs k <= n/4, got n={n}, k={k}")
    base, extra = divmod(n, k + 1)
    return [base + 1 if i < extra else base for i in range(k + 1)]


def gen_refined(n: int, k: int) -> Instance:
    sizes = refined_cluster_sizes(n, k)
    voter_sites = [i for i, b in enumerate(sizes) for _ in range(b)]
    m = k + 1
    return _checked(_site_metric(n, m, k, voter_sites, list(range(m)), list(range(m)), 1, 1))


# separation election


def golden_surrogate(tolerance: Fraction = config.GOLDEN_TOLERANCE) -> Fraction:
    """Ratio of consecutive Fibonacci numbers within ``tolerance`` of (sqrt5 - 1) / 2.

    ``F(j)/F(j+1)`` is a convergent of the golden ratio's continued fraction, so its error
    is below ``1 / (F(j+1) F(j+2))``.
    """
    a, b, c = 1, 1, 2
    while Fraction(1, b * c) > tolerance:
        a, b, c = b, c, b + c
    return Fraction(a, b)


SEPARATION_RANKINGS = (
    (1, 2, 3, 4, 5, 6),
    (2, 3, 1, 4, 5, 6),
    (3, 1, 2, 4, 5, 6),
    (4, 5, 6, 1, 2, 3),
    (5, 6, 4, 1, 2, 3),
    (6, 4, 5, 1, 2, 3),
)


def _separation_block(epsilon: Fraction, delta: Fraction, rotation: int, far) -> List[List[Fraction]]:
    # rows: voters by role v1 v2 v3; columns: candidates by role c1 c2 c3
    table = [
        [Fraction(3), 3 + epsilon, 3 + 2 * epsilon],
        [3 + 2 * delta, Fraction(1), 1 + epsilon],
        [2 + delta, 2 + delta + epsilon, delta],
    ]
    block = [[Fraction(far)] * 6 for _ in range(6)]
    for role_v in range(3):
        v = (role_v + rotation) % 3
        for role_c in range(3):
            block[v][(role_c + rotation) % 3] = table[role_v][role_c]
    # second cluster: 1, 1+eps, 1+2eps along each voter's listed order
    for v in range(3, 6):
        for place, c in enumerate(SEPARATION_RANKINGS[v][:3]):
            block[v][c - 1] = 1 + place * epsilon
    return block


def _metric_closure(n: int, block: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Shortest-path metric of the bipartite voter/candidate distance graph."""
    m = len(block[0])
    size = n + m
    inf = None
    dist: List[List[Optional[Fraction]]] = [[inf] * size for _ in range(size)]
    for x in range(size):
        dist[x][x] = Fraction(0)
    for v in range(n):
        for c in range(m):
            dist[v][n + c] = dist[n + c][v] = block[v][c]
    for z in range(size):
        row_z = dist[z]
        for x in range(size):
            dxz = dist[x][z]
            if dxz is None:
                continue
            row_x = dist[x]
            for y in range(size):
                dzy = row_z[y]
                if dzy is not None and (row_x[y] is None or dxz + dzy < row_x[y]):
                    row_x[y] = dxz + dzy
    return dist


def gen_separation(epsilon, rotation: int = 0,
                   distance=config.SEPARATION_CLUSTER_DISTANCE) -> Tuple[Instance, RankedProfile]:
    """The 6-voter/6-candidate election with k = 3 separating ordinal from cardinal fairness.

    ``rotation`` shifts which of c1, c2, c3 plays the first role in the distance table;
    the rankings are the same for every rotation.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < Fraction(1, 10):
        raise ValueError(f"epsilon must lie in (0, 1/10), got {epsilon}")
    if rotation not in (0, 1, 2):
        raise ValueError("rotation must be 0, 1 or 2")
    delta = golden_surrogate()
    block = _separation_block(epsilon, delta, rotation, distance)
    matrix = _metric_closure(6, block)
    for v in range(6):
        for c in range(6):
            if matrix[v][6 + c] != block[v][c]:
                raise MetricViolation(f"separation table is not a metric at (v{v + 1}, c{c + 1})")
    primes = ("1", "2", "3", "1'", "2'", "3'")
    inst = Instance.from_matrix(
        6, 6, 3, matrix,
        voter_labels=tuple("v" + s for s in primes),
        candidate_labels=tuple("c" + s for s in primes),
    )
    _checked(inst)
    profile = RankedProfile.from_positions(SEPARATION_RANKINGS)
    if derive_rankings(inst) != profile:
        raise MetricViolation("separation metric does not induce the listed rankings")
    return inst, profile


def separation_roles(rotation: int = 0) -> Dict[str, int]:
    """Actual 0-based indices of the role voters/candidates under ``rotation``."""
    roles = {}
    for i in range(3):
        roles[f"v{i + 1}"] = (i + rotation) % 3
        roles[f"c{i + 1}"] = (i + rotation) % 3
    return roles


# random lattice instances


def gen_random(n: int, m: int, k: int, dim: int = 2, norm: str = "l1", seed: int = 0,
               grid: int = config.DEFAULT_GRID, block_only: bool = False) -> Instance:
    """Voters and candidates on the integer lattice ``[0, grid]^dim``, deterministic per seed."""
    if dim < 1 or grid < 1:
        raise ValueError("dim and grid must be positive")
    rng = np.random.default_rng(seed)
    points = rng.integers(0, grid + 1, size=(n + m, dim)).tolist()
    return Instance.from_coordinates(points[:n], points[n:], k, norm=norm, full=not block_only)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    alpha: Optional[Fraction] = None
    n: Optional[int] = None
    m: Optional[int] = None
    k: Optional[int] = None
    distance: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    rotation: int = 0
    seed: int = 0
    dim: int = 2
    norm: str = "l1"
    grid: int = config.DEFAULT_GRID

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")

    def _require(self, *names: str):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.family} needs {', '.join(missing)}")

    def generate(self) -> Tuple[Instance, Optional[RankedProfile]]:
        """The instance, plus explicit rankings for the separation election."""
        if self.family == "two-cluster":
            self._require("alpha")
            distance = config.DEFAULT_CLUSTER_DISTANCE if self.distance is None else self.distance
            return gen_two_cluster(self.alpha, distance), None
        if self.family == "diverging":
            self._require("alpha")
            return gen_diverging(self.alpha, 1 if self.distance is None else self.distance), None
        if self.family == "refined":
            self._require("n", "k")
            return gen_refined(self.n, self.k), None
        if self.family == "separation":
            self._require("epsilon")
            distance = config.SEPARATION_CLUSTER_DISTANCE if self.distance is None else self.distance
            return gen_separation(self.epsilon, self.rotation, distance)
        self._require("n", "m", "k")
        return gen_random(self.n, self.m, self.k, self.dim, self.norm, self.seed, self.grid), None

    def closed_forms(self) -> Dict[str, object]:
        """Parameter identities the family is defined by."""
        if self.family == "two-cluster":
            self._require("alpha")
            q = math.ceil(2 * Fraction(self.alpha))
            k = 2 * q - 1
            return {"q": q, "k": k, "n": 2 * k, "m": 2 * k, "p": hare_quota(2 * k, k).p}
        if self.family == "diverging":
            self._require("alpha")
            k = diverging_k(self.alpha)
            return {"k": k, "n": k * k - 1, "m": k + 1, "p": hare_quota(k * k - 1, k).p}
        if self.family == "refined":
            self._require("n", "k")
            sizes = refined_cluster_sizes(self.n, self.k)
            return {"k": self.k, "n": self.n, "m": self.k + 1, "p": hare_quota(self.n, self.k).p, "b": sizes}
        if self.family == "separation":
            return {"k": 3, "n": 6, "m": 6, "p": 2, "delta": golden_surrogate()}
        self._require("n", "m", "k")
        return {"k": self.k, "n": self.n, "m": self.m, "p": hare_quota(self.n, self.k).p}

    def to_dict(self) -> Dict[str, object]:
        return {key: str(value) if isinstance(value, Fraction) else value
                for key, value in asdict(self).items() if value is not None}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "GeneratorSpec":
        data = dict(data)
        for key in ("alpha", "distance", "epsilon"):
            if data.get(key) is not None:
                data[key] = Fraction(str(data[key]))
        return cls(**data)
