from fractions import Fraction

import numpy as np

from metricrep.instance import Instance
from metricrep.instances import gen_random


def line_instance(k: int = 2) -> Instance:
    """Voters at 0, 1, 10, 11 and candidates at 1/2, 21/2, 100 on a line."""
    voters = [[0], [1], [10], [11]]
    candidates = [[Fraction(1, 2)], [Fraction(21, 2)], [100]]
    return Instance.from_coordinates(voters, candidates, k, norm="l1")


def corpus(count: int, max_n: int, max_m: int, max_k: int, seed: int = 0, min_n: int = 1):
    """Seeded random L1 lattice instances with 1 <= k < m."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        m = int(rng.integers(2, max_m + 1))
        k = int(rng.integers(1, min(max_k, m - 1) + 1))
        yield gen_random(n, m, k, seed=seed * 100003 + i)
