"""Expanding Approvals Rule and the two-candidate single-winner rule built on it.

In round ``tau`` every uncovered voter approves its rank-``tau`` candidate. A candidate
whose neighborhood reaches the Hare quota joins the committee and its voters leave every
other neighborhood. Rounds visit voters in ascending index; missing seats are filled with
the lowest-index unselected candidates.
"""
import logging
from typing import Dict, List, Optional

from .coverage import CoverageRecord, fill_committee
from .errors import CommitteeSizeError, ProfileShapeMismatch
from .instance import RankedProfile, hare_quota

log = logging.getLogger(__name__)


def ear_select(profile: RankedProfile, k: int, *, n: Optional[int] = None,
               m: Optional[int] = None) -> CoverageRecord:
    if (n is not None and n != profile.n) or (m is not None and m != profile.m):
        raise ProfileShapeMismatch(f"profile is {profile.n}x{profile.m}, expected {n}x{m}")
    n, m = profile.n, profile.m
    if not 1 <= k < m:
        raise CommitteeSizeError(f"committee size must satisfy 1 <= k < m, got k={k}, m={m}")
    p = hare_quota(n, k).p
    orders = profile.orders

    covered = [False] * n
    selected = [False] * m
    # dicts as insertion-ordered sets
    hoods: List[Dict[int, None]] = [{} for _ in range(m)]
    # candidates whose neighborhood currently holds the voter
    ledger: List[List[int]] = [[] for _ in range(n)]
    committee: List[int] = []
    neighborhoods = []
    thresholds: List[Optional[int]] = []
    remaining = n
    events = tests = 0

    for tau in range(1, m + 1):
        if remaining == 0:
            break
        for v in range(n):
            tests += 1
            if covered[v]:
                continue
            c = orders[v][tau - 1]
            tests += 1
            if selected[c]:
                continue
            hoods[c][v] = None
            ledger[v].append(c)
            events += 1
            if len(hoods[c]) < p:
                continue
            members = tuple(sorted(hoods[c]))
            selected[c] = True
            committee.append(c)
            neighborhoods.append(members)
            thresholds.append(tau)
            for u in members:
                covered[u] = True
                for other in ledger[u]:
                    if other != c:
                        del hoods[other][u]
                        events += 1
                ledger[u] = []
            remaining -= len(members)
            log.debug("ear: selected c%d at tau=%d covering %s", c + 1, tau, [u + 1 for u in members])

    fillers = fill_committee(committee, m, k)
    if fillers:
        log.debug("ear: %d uncovered voters, filling with %s", remaining, [c + 1 for c in fillers])
    return CoverageRecord(
        rule="ear",
        n=n,
        m=m,
        k=k,
        quota=p,
        committee=tuple(committee + fillers),
        neighborhoods=tuple(neighborhoods) + ((),) * len(fillers),
        thresholds=tuple(thresholds) + (None,) * len(fillers),
        uncovered=tuple(v for v in range(n) if not covered[v]),
        events=events,
        membership_tests=tests,
    )


def _majority_winner(profile: RankedProfile, first: int, second: int) -> int:
    """``second`` only on a strict majority; ties stay with ``first``."""
    if first == second:
        return first
    pro_first = sum(1 for v in range(profile.n) if profile.prefers(v, first, second))
    pro_second = profile.n - pro_first
    return second if pro_second > pro_first else first


def _smallest_common_prefix(profile: RankedProfile, voters: List[int], need: int):
    """Smallest tau such that some candidate sits in the top-tau of ``need`` of ``voters``.

    Returns the lowest-index such candidate and its supporters in ascending voter order.
    """
    supporters: List[List[int]] = [[] for _ in range(profile.m)]
    for tau in range(1, profile.m + 1):
        for v in voters:
            supporters[profile.candidate_at(v, tau)].append(v)
        eligible = [c for c in range(profile.m) if len(supporters[c]) >= need]
        if eligible:
            c = eligible[0]
            return c, sorted(supporters[c])
    raise AssertionError("every candidate is approved by everyone at tau = m")


def single_winner(profile: RankedProfile) -> int:
    n = profile.n
    half = -(-n // 2)
    first, supporters = _smallest_common_prefix(profile, list(range(n)), half)
    group = set(supporters[:half])
    rest = [v for v in range(n) if v not in group]
    if not rest:
        return first
    second, _ = _smallest_common_prefix(profile, rest, len(rest))
    winner = _majority_winner(profile, first, second)
    log.debug("single winner: c=c%d, c'=c%d, winner c%d", first + 1, second + 1, winner + 1)
    return winner


def single_winner_via_ear(profile: RankedProfile) -> int:
    """Majority winner of the k=2 EAR committee."""
    if profile.m == 1:
        return 0
    if profile.m == 2:
        first, second = 0, 1
    else:
        first, second = ear_select(profile, 2).committee
    return _majority_winner(profile, first, second)
