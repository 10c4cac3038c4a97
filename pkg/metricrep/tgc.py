"""Truncated Greedy Capture.

Balls grow around every unselected candidate at the same rate. The radii at which a ball
reaches a voter are exactly the distances ``d(v, c)``, so growth is simulated by visiting
all voter-candidate pairs in ``(distance, voter, candidate)`` order. A candidate whose
ball holds ``p`` uncovered voters is selected and its ball is frozen.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional

import numpy as np

from .coverage import CoverageRecord, fill_committee
from .errors import MetricMissing
from .instance import Instance

log = logging.getLogger(__name__)

_INT64_LIMIT = 2**62


@dataclass(frozen=True, order=True)
class BallEvent:
    radius: Fraction
    voter: int
    candidate: int


def _event_order(block) -> Iterator[int]:
    """Flat indices ``v * m + c`` sorted by (distance, v, c)."""
    flat = [d for row in block for d in row]
    if flat and max(flat) < _INT64_LIMIT:
        # stable sort keeps row-major (v, c) order among equal radii
        return iter(np.argsort(np.asarray(flat, dtype=np.int64), kind="stable").tolist())
    return iter(sorted(range(len(flat)), key=flat.__getitem__))


def ball_events(inst: Instance) -> List[BallEvent]:
    if not inst.has_metric:
        raise MetricMissing("truncated greedy capture needs distances")
    block = inst.order_block
    m = inst.m
    return [
        BallEvent(Fraction(block[i // m][i % m], inst.denominator), i // m, i % m)
        for i in _event_order(block)
    ]


def tgc_select(inst: Instance) -> CoverageRecord:
    if not inst.has_metric:
        raise MetricMissing("truncated greedy capture needs distances")
    n, m, k = inst.n, inst.m, inst.k
    p = inst.quota.p
    block = inst.order_block

    covered = [False] * n
    selected = [False] * m
    hoods: List[Dict[int, None]] = [{} for _ in range(m)]
    ledger: List[List[int]] = [[] for _ in range(n)]
    committee: List[int] = []
    neighborhoods = []
    thresholds: List[Optional[Fraction]] = []
    remaining = n
    events = tests = 0

    for index in _event_order(block):
        if remaining == 0:
            break
        v, c = divmod(index, m)
        tests += 1
        if covered[v]:
            continue
        tests += 1
        if selected[c]:
            continue
        hoods[c][v] = None
        ledger[v].append(c)
        events += 1
        if len(hoods[c]) < p:
            continue
        radius = Fraction(block[v][c], inst.denominator)
        members = tuple(sorted(hoods[c]))
        selected[c] = True
        committee.append(c)
        neighborhoods.append(members)
        thresholds.append(radius)
        for u in members:
            covered[u] = True
            for other in ledger[u]:
                if other != c:
                    del hoods[other][u]
                    events += 1
            ledger[u] = []
        remaining -= len(members)
        log.debug("tgc: selected c%d at radius %s covering %s", c + 1, radius, [u + 1 for u in members])

    fillers = fill_committee(committee, m, k)
    return CoverageRecord(
        rule="tgc",
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
