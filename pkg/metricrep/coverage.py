from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

Threshold = Union[int, Fraction]


@dataclass(frozen=True)
class CoverageRecord:
    """Committee plus the neighborhood each representative covered when it was included.

    ``neighborhoods[i]`` and ``thresholds[i]`` belong to ``committee[i]``; filler
    candidates carry an empty neighborhood and a ``None`` threshold. Thresholds are the
    tolerance tau for ``ear`` and the ball radius delta for ``tgc`` (squared for euclidean
    instances).
    """

    rule: str
    n: int
    m: int
    k: int
    quota: int
    committee: Tuple[int, ...]
    neighborhoods: Tuple[Tuple[int, ...], ...]
    thresholds: Tuple[Optional[Threshold], ...]
    uncovered: Tuple[int, ...]
    events: int = 0
    membership_tests: int = 0

    @property
    def operations(self) -> int:
        return self.events + self.membership_tests

    @property
    def fillers(self) -> Tuple[int, ...]:
        return tuple(r for r, t in zip(self.committee, self.thresholds) if t is None)

    @property
    def covering(self) -> Tuple[int, ...]:
        return tuple(r for r, t in zip(self.committee, self.thresholds) if t is not None)

    def neighborhood(self, r: int) -> Tuple[int, ...]:
        return self.neighborhoods[self.committee.index(r)]

    @cached_property
    def owners(self) -> Dict[int, int]:
        """voter -> representative whose neighborhood holds it."""
        return {v: r for r, hood in zip(self.committee, self.neighborhoods) for v in hood}


def representatives_of(coverage: CoverageRecord, coalition: Iterable[int]) -> FrozenSet[int]:
    """R[S]: representatives whose covered neighborhood meets ``coalition``."""
    owners = coverage.owners
    return frozenset(owners[v] for v in coalition if v in owners)


def fill_committee(selected: List[int], m: int, k: int) -> List[int]:
    """Lowest-index unselected candidates until the committee has ``k`` members."""
    chosen = set(selected)
    fillers = []
    for c in range(m):
        if len(selected) + len(fillers) >= k:
            break
        if c not in chosen:
            fillers.append(c)
    return fillers
