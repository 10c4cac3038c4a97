"""Exact audits of a committee against the representation and fairness definitions.

Every audit measures the smallest parameter (gamma, beta or rho) for which the committee
satisfies its definition, together with a witness that attains it. Arithmetic runs on the
instance's integer numerators; all measured quantities are scale-free ratios, returned as
``Fraction`` or ``math.inf``.

Zero conventions: a constraint whose deviation side is 0 is satisfied when the committee
side is 0 as well and infinitely violated otherwise; per-voter ratios (proportional
fairness, stability) read ``0/0`` as 1.
"""
import itertools
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .bounds import SurdBound
from .coverage import CoverageRecord
from .errors import AlphaOutOfRange, CommitteeSizeError, EnumerationCapExceeded, ProfileShapeMismatch
from .instance import Instance, column_sums, d_sum
from .utils import Measure, ceil_fraction, format_decimal, format_measure, format_rational, ratio

log = logging.getLogger(__name__)

ONE = Fraction(1)
ZERO = Fraction(0)


class Definition(str, Enum):
    PF = "PF"
    CORE = "CORE"
    PR = "PR"
    PR_STRONG = "PR-STRONG"
    COR_SINGLE = "COR-SINGLE"
    STABILITY = "STABILITY"
    STABILITY_CARDINAL = "STABILITY-CARDINAL"
    DISTORTION = "DISTORTION"


@dataclass(frozen=True)
class Witness:
    coalition: Tuple[int, ...]
    targets: Tuple[int, ...]
    t: int = 1
    representatives: Tuple[int, ...] = ()


@dataclass(frozen=True)
class AuditReport:
    definition: Definition
    value: Measure
    witness: Optional[Witness] = None
    alpha: Optional[Fraction] = None
    t_range: Optional[Tuple[int, int]] = None
    bound: Optional[SurdBound] = None
    lower_bound_only: bool = False
    notes: Tuple[str, ...] = ()
    extras: Tuple[Tuple[str, str], ...] = ()

    @property
    def satisfied(self) -> Optional[bool]:
        """Whether the measured value respects ``bound``; ``None`` when undecidable."""
        if self.bound is None:
            return None
        within = self.value <= self.bound
        if self.lower_bound_only and within:
            return None
        return within

    def with_bound(self, bound: Optional[SurdBound]) -> "AuditReport":
        return replace(self, bound=bound)

    def render(self, inst: Optional[Instance] = None) -> str:
        voter = inst.voter_label if inst else (lambda v: f"v{v + 1}")
        cand = inst.candidate_label if inst else (lambda c: f"c{c + 1}")
        lines = [f"check: {self.definition.value}"]
        if self.alpha is not None:
            lines.append(f"alpha: {format_rational(self.alpha)}")
        if self.t_range is not None:
            lines.append(f"t-range: {self.t_range[0]}..{self.t_range[1]}")
        lines.append(f"measured: {format_measure(self.value)} ({format_decimal(self.value)})")
        if self.lower_bound_only:
            lines.append("mode: sampled (lower bound only)")
        w = self.witness
        if w is not None:
            lines.append("witness: coalition {%s}; deviation {%s}; t=%d%s" % (
                ", ".join(voter(v) for v in w.coalition),
                ", ".join(cand(c) for c in w.targets),
                w.t,
                "; representatives {%s}" % ", ".join(cand(r) for r in w.representatives)
                if w.representatives else "",
            ))
        if self.bound is not None:
            verdict = {True: "yes", False: "NO", None: "inconclusive"}[self.satisfied]
            lines.append(f"bound: {self.bound} ({format_decimal_surd(self.bound)})")
            lines.append(f"satisfied: {verdict}")
            lines.append(f"margin: {self.bound.margin(self.value)}")
        for key, value in self.extras:
            lines.append(f"{key}: {value}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def format_decimal_surd(bound: SurdBound) -> str:
    return f"{bound.to_decimal():.{config.DECIMAL_PLACES}f}"


# shared plumbing


def _committee(inst: Instance, committee: Sequence[int]) -> Tuple[int, ...]:
    members = tuple(sorted(set(committee)))
    if len(members) != inst.k or len(members) != len(committee):
        raise CommitteeSizeError(f"committee must list {inst.k} distinct candidates, got {list(committee)}")
    if members and not 0 <= members[0] <= members[-1] < inst.m:
        raise CommitteeSizeError("committee member out of range")
    return members


def _check_coverage(inst: Instance, coverage: CoverageRecord) -> Tuple[int, ...]:
    if (coverage.n, coverage.m, coverage.k) != (inst.n, inst.m, inst.k):
        raise ProfileShapeMismatch(
            f"coverage is for n={coverage.n}, m={coverage.m}, k={coverage.k}; "
            f"instance has n={inst.n}, m={inst.m}, k={inst.k}")
    return _committee(inst, coverage.committee)


def _check_alpha(alpha) -> Fraction:
    alpha = Fraction(alpha)
    if alpha < 1:
        raise AlphaOutOfRange(f"alpha must be at least 1, got {alpha}")
    return alpha


def _check_cap(n: int, cap: Optional[int]):
    cap = config.enumeration_cap() if cap is None else cap
    if n > cap:
        log.warning("refusing to enumerate coalitions of %d voters (cap %d)", n, cap)
        raise EnumerationCapExceeded(n, cap)


def _t_range(inst: Instance, t_range: Optional[Tuple[int, int]]) -> Tuple[int, int]:
    lo, hi = t_range if t_range is not None else (1, inst.k)
    if not 1 <= lo <= hi <= inst.k:
        raise ValueError(f"t-range must lie within 1..{inst.k}, got {lo}..{hi}")
    return lo, hi


def _costs(block, committee: Sequence[int]) -> List[int]:
    return [min(row[r] for r in committee) for row in block]


def _coalitions(block, min_size: int) -> Iterator[Tuple[Tuple[int, ...], List[int]]]:
    """All voter sets of size >= ``min_size`` with their per-candidate distance sums.

    The yielded sum list is reused between iterations; callers must not keep it.
    """
    n = len(block)
    m = len(block[0]) if n else 0
    sums = [0] * m
    members: List[int] = []

    def visit(v: int):
        if len(members) + (n - v) < min_size:
            return
        if v == n:
            yield tuple(members), sums
            return
        row = block[v]
        members.append(v)
        for c in range(m):
            sums[c] += row[c]
        yield from visit(v + 1)
        for c in range(m):
            sums[c] -= row[c]
        members.pop()
        yield from visit(v + 1)

    yield from visit(0)


def _improves(value: Optional[Measure], best: Optional[Measure]) -> bool:
    return value is not None and (best is None or value > best)


# proportional fairness


def pf_gamma(inst: Instance, committee: Sequence[int], bound: Optional[SurdBound] = None) -> AuditReport:
    """Smallest gamma for which the committee is gamma-proportionally fair.

    For a fixed deviation target the best coalition of size ``p`` is formed by the ``p``
    voters with the largest improvement ratio, so the binding value is the p-th largest.
    """
    members = _committee(inst, committee)
    block = inst.exact_block
    n, p = inst.n, inst.quota.p
    costs = _costs(block, members)
    best, witness, zero_zero = None, None, False
    for c in range(inst.m):
        ratios = [ratio(costs[v], block[v][c], ONE) for v in range(n)]
        zero_zero = zero_zero or any(costs[v] == 0 and block[v][c] == 0 for v in range(n))
        top = sorted(range(n), key=lambda v: (-ratios[v], v))[:p]
        value = ratios[top[-1]]
        if _improves(value, best):
            best, witness = value, Witness(tuple(sorted(top)), (c,))
    notes = ("d(v,c) = 0 with zero committee cost counted as ratio 1",) if zero_zero else ()
    return AuditReport(Definition.PF, best, witness, bound=bound, notes=notes)


def pf_gamma_bruteforce(inst: Instance, committee: Sequence[int], cap: Optional[int] = None) -> AuditReport:
    members = _committee(inst, committee)
    _check_cap(inst.n, cap)
    block = inst.exact_block
    n, p = inst.n, inst.quota.p
    costs = _costs(block, members)
    best, witness = None, None
    for size in range(p, n + 1):
        for coalition in itertools.combinations(range(n), size):
            for c in range(inst.m):
                value = min(ratio(costs[v], block[v][c], ONE) for v in coalition)
                if _improves(value, best):
                    best, witness = value, Witness(coalition, (c,))
    return AuditReport(Definition.PF, best, witness)


# approximate core


def _max_average_ratio(costs: Sequence[int], dists: Sequence[int], min_size: int):
    """Max of sum(costs)/sum(dists) over voter sets of size >= ``min_size``.

    Iterates over critical ratios: at the current ratio ``a/b`` the set maximizing
    ``sum(b*cost - a*dist)`` is all positive terms padded with the largest others up to
    ``min_size``; a positive maximum yields a strictly larger ratio, zero certifies it.
    """
    n = len(costs)
    zero = [v for v in range(n) if dists[v] == 0]
    if len(zero) >= min_size and any(costs[v] > 0 for v in zero):
        return math.inf, tuple(zero)
    a, b = 0, 1
    chosen = None
    while True:
        terms = [b * costs[v] - a * dists[v] for v in range(n)]
        order = sorted(range(n), key=lambda v: (-terms[v], v))
        candidate = order[:min_size] + [v for v in order[min_size:] if terms[v] > 0]
        if sum(terms[v] for v in candidate) <= 0:
            break
        num = sum(costs[v] for v in candidate)
        den = sum(dists[v] for v in candidate)
        step = Fraction(num, den)
        a, b = step.numerator, step.denominator
        chosen = tuple(sorted(candidate))
    if chosen is None:
        return ZERO, None
    return Fraction(a, b), chosen


def core_beta(inst: Instance, committee: Sequence[int], alpha, bound: Optional[SurdBound] = None) -> AuditReport:
    """Smallest beta for which the committee lies in the (alpha, beta)-core."""
    alpha = _check_alpha(alpha)
    members = _committee(inst, committee)
    block = inst.exact_block
    n, p = inst.n, inst.quota.p
    min_size = ceil_fraction(alpha * p)
    if min_size > n:
        return AuditReport(Definition.CORE, ZERO, alpha=alpha, bound=bound,
                           notes=(f"no coalition reaches size {min_size}",))
    costs = _costs(block, members)
    best, witness = None, None
    for c in range(inst.m):
        value, coalition = _max_average_ratio(costs, [row[c] for row in block], min_size)
        if coalition is not None and _improves(value, best):
            best, witness = value, Witness(coalition, (c,))
    return AuditReport(Definition.CORE, best if best is not None else ZERO, witness, alpha=alpha, bound=bound)


def core_beta_bruteforce(inst: Instance, committee: Sequence[int], alpha, cap: Optional[int] = None) -> AuditReport:
    alpha = _check_alpha(alpha)
    members = _committee(inst, committee)
    _check_cap(inst.n, cap)
    block = inst.exact_block
    min_size = ceil_fraction(alpha * inst.quota.p)
    costs = _costs(block, members)
    best, witness = None, None
    for coalition, sums in _coalitions(block, min_size):
        lhs = sum(costs[v] for v in coalition)
        for c in range(inst.m):
            value = ratio(lhs, sums[c], None)
            if _improves(value, best):
                best, witness = value, Witness(coalition, (c,))
    return AuditReport(Definition.CORE, best if best is not None else ZERO, witness, alpha=alpha)


# proportional representation


def _pr_measure(inst: Instance, committee: Sequence[int], alpha, t_range, strong: bool, mode: str,
                cap: Optional[int], samples: Optional[int], seed: int, bound: Optional[SurdBound]) -> AuditReport:
    alpha = _check_alpha(alpha)
    members = _committee(inst, committee)
    lo, hi = _t_range(inst, t_range)
    block = inst.exact_block
    n, p = inst.n, inst.quota.p
    definition = Definition.PR_STRONG if strong else Definition.PR
    sizes = {t: ceil_fraction(t * alpha * p) for t in range(lo, hi + 1)}
    ts = [t for t in range(lo, hi + 1) if sizes[t] <= n]
    if not ts:
        return AuditReport(definition, ZERO, alpha=alpha, t_range=(lo, hi), bound=bound,
                           notes=("no coalition is large enough for any t in range",))
    # per-voter prefix sums of the t nearest committee members
    nearest = []
    for row in block:
        acc, prefix = 0, [0]
        for d in sorted(row[r] for r in members):
            acc += d
            prefix.append(acc)
        nearest.append(prefix)

    best: Optional[Measure] = None
    witness: Optional[Witness] = None

    def evaluate(coalition: Tuple[int, ...], sums: List[int]):
        nonlocal best, witness
        ranked = sorted(range(inst.m), key=lambda c: (sums[c], c))
        ranked_reps = sorted(members, key=lambda r: (sums[r], r)) if strong else None
        for t in ts:
            if len(coalition) < sizes[t]:
                continue
            targets = ranked[:t]
            rhs = sum(sums[c] for c in targets)
            if strong:
                reps = ranked_reps[:t]
                lhs = sum(sums[r] for r in reps)
            else:
                reps = ()
                lhs = sum(nearest[v][t] for v in coalition)
            value = ratio(lhs, rhs, None)
            if _improves(value, best):
                best = value
                witness = Witness(coalition, tuple(sorted(targets)), t, tuple(sorted(reps)))

    if mode == "exact":
        _check_cap(n, cap)
        log.debug("%s: enumerating coalitions of %d voters", definition.value, n)
        for coalition, sums in _coalitions(block, min(sizes[t] for t in ts)):
            evaluate(coalition, sums)
        sampled = False
    elif mode == "sample":
        rng = np.random.default_rng(seed)
        draws = config.DEFAULT_SAMPLES if samples is None else samples
        smallest = min(sizes[t] for t in ts)
        for _ in range(draws):
            size = int(rng.integers(smallest, n + 1))
            coalition = tuple(sorted(int(v) for v in rng.choice(n, size=size, replace=False)))
            evaluate(coalition, column_sums(inst, coalition))
        sampled = True
    else:
        raise ValueError(f"unknown audit mode {mode!r}")
    notes = ("sampled coalitions; measured value is a lower bound",) if sampled else ()
    return AuditReport(definition, best if best is not None else ZERO, witness, alpha=alpha,
                       t_range=(lo, hi), bound=bound, lower_bound_only=sampled, notes=notes)


def pr_gamma(inst: Instance, committee: Sequence[int], alpha, t_range: Optional[Tuple[int, int]] = None,
             mode: str = "exact", cap: Optional[int] = None, samples: Optional[int] = None, seed: int = 0,
             bound: Optional[SurdBound] = None) -> AuditReport:
    """Smallest gamma for which the committee is (alpha, gamma)-proportionally representative.

    Coalitions of size >= ceil(t * alpha * p) compare the sum of each voter's t nearest
    committee members against the t candidates with the smallest total distance to the
    coalition.
    """
    return _pr_measure(inst, committee, alpha, t_range, False, mode, cap, samples, seed, bound)


def pr_strong_gamma(inst: Instance, committee: Sequence[int], alpha, t_range: Optional[Tuple[int, int]] = None,
                    mode: str = "exact", cap: Optional[int] = None, samples: Optional[int] = None,
                    seed: int = 0, bound: Optional[SurdBound] = None) -> AuditReport:
    """As ``pr_gamma`` but the committee side is one common size-t subcommittee."""
    return _pr_measure(inst, committee, alpha, t_range, True, mode, cap, samples, seed, bound)


def no_augmentation_monitor(inst: Instance, committee: Sequence[int], t_range: Optional[Tuple[int, int]] = None,
                            cap: Optional[int] = None) -> AuditReport:
    report = pr_gamma(inst, committee, 1, t_range=t_range, cap=cap)
    scale = Fraction(inst.n, inst.k)
    normalized = report.value if report.value == math.inf else report.value / scale
    return replace(
        report,
        extras=(("gamma/(n/k)", f"{format_measure(normalized)} ({format_decimal(normalized)})"),),
        notes=report.notes + ("(1, O(n/k)) guarantee has an unspecified constant; monitored only",),
    )


# coverage-based audits


def cor_single_audit(inst: Instance, coverage: CoverageRecord, alpha, cap: Optional[int] = None,
                     bound: Optional[SurdBound] = None) -> AuditReport:
    """Smallest beta with min over R[S] of d_sum(S, r) <= beta * min over C \\ R of d_sum(S, c)."""
    alpha = _check_alpha(alpha)
    members = _check_coverage(inst, coverage)
    _check_cap(inst.n, cap)
    block = inst.exact_block
    min_size = ceil_fraction(alpha * coverage.quota)
    outside = [c for c in range(inst.m) if c not in set(members)]
    owners = coverage.owners
    best, witness = None, None
    for coalition, sums in _coalitions(block, min_size):
        target = min(outside, key=lambda c: (sums[c], c))
        reps = {owners[v] for v in coalition if v in owners}
        if not reps:
            value, chosen = math.inf, ()
        else:
            rep = min(reps, key=lambda r: (sums[r], r))
            value, chosen = ratio(sums[rep], sums[target], None), (rep,)
        if _improves(value, best):
            best, witness = value, Witness(coalition, (target,), 1, chosen)
    return AuditReport(Definition.COR_SINGLE, best if best is not None else ZERO, witness, alpha=alpha, bound=bound)


def _stability_value(block, owners, outside, coalition):
    reps = sorted({owners[v] for v in coalition if v in owners})
    if not reps:
        return math.inf, outside[0], reps
    near = [min(block[v][r] for r in reps) for v in coalition]
    best, target = None, None
    # the deviation candidate is fixed before the voter is chosen
    for c in outside:
        value = min(ratio(near[i], block[v][c], ONE) for i, v in enumerate(coalition))
        if best is None or value > best:
            best, target = value, c
    return best, target, reps


def _stability(inst: Instance, coverage: CoverageRecord, variant: str, cap: Optional[int],
               bound: Optional[SurdBound], exhaustive: bool) -> AuditReport:
    if variant not in ("ordinal", "cardinal"):
        raise ValueError(f"unknown stability variant {variant!r}")
    members = set(_check_coverage(inst, coverage))
    _check_cap(inst.n, cap)
    definition = Definition.STABILITY if variant == "ordinal" else Definition.STABILITY_CARDINAL
    block = inst.exact_block
    n, p = inst.n, coverage.quota
    outside = [c for c in range(inst.m) if c not in members]
    owners = coverage.owners
    if exhaustive:
        coalitions = (s for size in range(p, n + 1) for s in itertools.combinations(range(n), size))
    else:
        # for a fixed outside candidate, adding voters never raises the value
        coalitions = itertools.combinations(range(n), p)
    best, witness = None, None
    for coalition in coalitions:
        value, target, reps = _stability_value(block, owners, outside, coalition)
        if _improves(value, best):
            best, witness = value, Witness(coalition, (target,), 1, tuple(reps))
    return AuditReport(definition, best if best is not None else ZERO, witness, bound=bound)


def stability_rho(inst: Instance, coverage: CoverageRecord, variant: str = "ordinal", cap: Optional[int] = None,
                  bound: Optional[SurdBound] = None) -> AuditReport:
    """Smallest rho such that for every coalition S of size >= p and every candidate c outside
    the committee, some voter v in S has min over R[S] of d(v, r) <= rho * d(v, c)."""
    return _stability(inst, coverage, variant, cap, bound, exhaustive=False)


def stability_rho_bruteforce(inst: Instance, coverage: CoverageRecord, variant: str = "ordinal",
                             cap: Optional[int] = None) -> AuditReport:
    return _stability(inst, coverage, variant, cap, None, exhaustive=True)


# single winner


def distortion(inst: Instance, winner: int) -> Measure:
    sums = column_sums(inst, range(inst.n))
    return ratio(sums[winner], min(sums), ONE)


def distortion_report(inst: Instance, winner: int, bound: Optional[SurdBound] = None) -> AuditReport:
    sums = column_sums(inst, range(inst.n))
    best = min(range(inst.m), key=lambda c: (sums[c], c))
    return AuditReport(Definition.DISTORTION, distortion(inst, winner),
                       Witness(tuple(range(inst.n)), (best,), 1, (winner,)), bound=bound)


# witness re-evaluation


def _exact_ratio(lhs: Fraction, rhs: Fraction, zero_zero: Optional[Fraction]) -> Optional[Measure]:
    if rhs == 0:
        return zero_zero if lhs == 0 else math.inf
    return lhs / rhs


def reevaluate(inst: Instance, report: AuditReport, committee: Optional[Sequence[int]] = None,
               coverage: Optional[CoverageRecord] = None) -> Optional[Measure]:
    """Recompute the witness's value straight from its definition with ``Fraction`` arithmetic."""
    w = report.witness
    if w is None:
        return None
    if committee is None and coverage is not None:
        committee = coverage.committee
    cp = inst.candidate_point
    S = w.coalition
    definition = report.definition

    def cost(v: int) -> Fraction:
        return min(inst.distance(v, cp(r)) for r in committee)

    if definition is Definition.PF:
        c = w.targets[0]
        return min(_exact_ratio(cost(v), inst.distance(v, cp(c)), ONE) for v in S)
    if definition is Definition.CORE:
        return _exact_ratio(sum(cost(v) for v in S), d_sum(S, [cp(w.targets[0])], inst), None)
    if definition is Definition.PR:
        lhs = sum(sum(sorted(inst.distance(v, cp(r)) for r in committee)[:w.t]) for v in S)
        return _exact_ratio(lhs, d_sum(S, [cp(c) for c in w.targets], inst), None)
    if definition is Definition.PR_STRONG:
        lhs = d_sum(S, [cp(r) for r in w.representatives], inst)
        return _exact_ratio(lhs, d_sum(S, [cp(c) for c in w.targets], inst), None)
    if definition is Definition.COR_SINGLE:
        if not w.representatives:
            return math.inf
        lhs = d_sum(S, [cp(w.representatives[0])], inst)
        return _exact_ratio(lhs, d_sum(S, [cp(w.targets[0])], inst), None)
    if definition in (Definition.STABILITY, Definition.STABILITY_CARDINAL):
        if not w.representatives:
            return math.inf
        c = w.targets[0]
        return min(
            _exact_ratio(min(inst.distance(v, cp(r)) for r in w.representatives),
                         inst.distance(v, cp(c)), ONE)
            for v in S
        )
    if definition is Definition.DISTORTION:
        voters = range(inst.n)
        return _exact_ratio(d_sum(voters, [cp(w.representatives[0])], inst),
                            d_sum(voters, [cp(w.targets[0])], inst), ONE)
    raise ValueError(f"no re-evaluation for {definition}")
