"""Experiment sweeps over generated instances and the operation-count benchmark."""
import concurrent.futures
import csv
import io
import itertools
import json
import logging
import math
import os
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import config
from .audit import (
    AuditReport,
    cor_single_audit,
    core_beta,
    distortion_report,
    no_augmentation_monitor,
    pf_gamma,
    pr_gamma,
    pr_strong_gamma,
    stability_rho,
)
from .bounds import proven_bound
from .coverage import CoverageRecord
from .ear import ear_select, single_winner
from .errors import EnumerationCapExceeded, MetricrepError
from .instance import Instance, RankedProfile, derive_rankings, instance_digest
from .instances import GeneratorSpec, gen_random
from .tgc import tgc_select
from .utils import format_decimal, format_measure, format_rational

log = logging.getLogger(__name__)

ALGORITHMS = ("ear", "tgc", "single-winner")
CHECKS = ("pf", "core", "pr", "pr-strong", "cor-single", "stability", "distortion", "no-augmentation")
ALPHA_CHECKS = ("core", "pr", "pr-strong", "cor-single")

ROW_FIELDS = (
    "cell", "instance", "digest", "n", "m", "k", "algorithm", "check", "alpha", "t_range",
    "measured", "measured_decimal", "bound", "bound_decimal", "margin", "satisfied", "witness", "status",
)
PLOT_FIELDS = ("algorithm", "check", "alpha", "alpha_decimal", "max_measured", "max_measured_decimal",
               "bound", "bound_decimal")


@dataclass(frozen=True)
class SweepSpec:
    family: str
    params: Dict[str, object] = field(default_factory=dict)
    grid: Dict[str, List[object]] = field(default_factory=dict)
    seeds: Tuple[int, ...] = (0,)
    algorithms: Tuple[str, ...] = ("ear", "tgc")
    checks: Tuple[str, ...] = ("pf",)
    alphas: Tuple[Fraction, ...] = (Fraction(2),)
    t_range: Optional[Tuple[int, int]] = None
    mode: str = "exact"
    cap: Optional[int] = None
    workers: int = 1
    output_dir: Optional[str] = None

    def __post_init__(self):
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        unknown += [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ValueError(f"unknown algorithm/check: {', '.join(unknown)}")
        if self.mode not in ("exact", "sample"):
            raise ValueError(f"unknown audit mode {self.mode!r}")

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "SweepSpec":
        data = dict(data)
        for key in ("seeds", "algorithms", "checks"):
            if key in data:
                data[key] = tuple(data[key])
        if "alphas" in data:
            data["alphas"] = tuple(Fraction(str(a)) for a in data["alphas"])
        if data.get("t_range") is not None:
            data["t_range"] = tuple(data["t_range"])
        return cls(**data)

    def generators(self) -> List[GeneratorSpec]:
        """One generator per grid point and seed, in a fixed order."""
        names = sorted(self.grid)
        specs = []
        for values in itertools.product(*(self.grid[name] for name in names)):
            for seed in self.seeds:
                params = dict(self.params, **dict(zip(names, values)), family=self.family, seed=seed)
                specs.append(GeneratorSpec.from_dict(params))
        return specs


def load_sweep_spec(path: str) -> SweepSpec:
    with open(path, "r") as f:
        return SweepSpec.from_dict(json.load(f))


@dataclass(frozen=True)
class SweepResult:
    rows: List[Dict[str, str]]
    plot: List[Dict[str, str]]

    @property
    def violated(self) -> bool:
        return any(row["satisfied"] == "no" for row in self.rows)


def _label(gen: GeneratorSpec) -> str:
    parts = [gen.family] + [f"{key}={value}" for key, value in sorted(gen.to_dict().items()) if key != "family"]
    return ";".join(parts)


def _audit(inst: Instance, coverage: Optional[CoverageRecord], winner: Optional[int], algorithm: str,
           check: str, alpha: Optional[Fraction], spec: SweepSpec) -> AuditReport:
    bound = proven_bound(algorithm, check, alpha)
    if check == "distortion":
        return distortion_report(inst, winner, bound=bound)
    committee = coverage.committee
    if check == "pf":
        return pf_gamma(inst, committee, bound=bound)
    if check == "core":
        return core_beta(inst, committee, alpha, bound=bound)
    if check == "pr":
        return pr_gamma(inst, committee, alpha, spec.t_range, mode=spec.mode, cap=spec.cap, bound=bound)
    if check == "pr-strong":
        return pr_strong_gamma(inst, committee, alpha, spec.t_range, mode=spec.mode, cap=spec.cap, bound=bound)
    if check == "cor-single":
        return cor_single_audit(inst, coverage, alpha, cap=spec.cap, bound=bound)
    if check == "stability":
        variant = "cardinal" if coverage.rule == "tgc" else "ordinal"
        return stability_rho(inst, coverage, variant, cap=spec.cap, bound=bound)
    return no_augmentation_monitor(inst, committee, spec.t_range, cap=spec.cap)


def _witness_summary(inst: Instance, report: AuditReport) -> str:
    w = report.witness
    if w is None:
        return ""
    coalition = " ".join(inst.voter_label(v) for v in w.coalition)
    targets = " ".join(inst.candidate_label(c) for c in w.targets)
    return f"S={{{coalition}}} -> {{{targets}}} t={w.t}"


def _cells(spec: SweepSpec) -> List[Tuple[str, str, Optional[Fraction]]]:
    cells = []
    for algorithm in spec.algorithms:
        for check in spec.checks:
            for alpha in (spec.alphas if check in ALPHA_CHECKS else (None,)):
                cells.append((algorithm, check, alpha))
    return cells


def _instance_rows(task: Tuple[int, GeneratorSpec, SweepSpec]) -> List[Dict[str, str]]:
    index, gen, spec = task
    inst, profile = gen.generate()
    log.info("sweep: instance %d (%s)", index, _label(gen))
    profile = profile or derive_rankings(inst)
    base = {"instance": _label(gen), "digest": instance_digest(inst)[:16],
            "n": str(inst.n), "m": str(inst.m), "k": str(inst.k)}
    outputs: Dict[str, object] = {}
    rows = []
    for algorithm, check, alpha in _cells(spec):
        row = dict(base, algorithm=algorithm, check=check,
                   alpha="" if alpha is None else format_rational(alpha),
                   t_range="" if spec.t_range is None else "%d..%d" % spec.t_range)
        row.update({key: "" for key in ROW_FIELDS if key not in row})
        if (algorithm == "single-winner") != (check == "distortion"):
            row["status"] = "n/a"
            rows.append(row)
            continue
        try:
            if algorithm not in outputs:
                outputs[algorithm] = _select(algorithm, inst, profile)
            output = outputs[algorithm]
            coverage = output if isinstance(output, CoverageRecord) else None
            winner = output if isinstance(output, int) else None
            report = _audit(inst, coverage, winner, algorithm, check, alpha, spec)
        except EnumerationCapExceeded as exc:
            row["status"] = "cap-exceeded"
            log.warning("sweep: instance %d %s/%s: %s", index, algorithm, check, exc)
        except MetricrepError as exc:
            row["status"] = f"error: {exc}"
            log.warning("sweep: instance %d %s/%s: %s", index, algorithm, check, exc)
        else:
            row.update(report_fields(inst, report))
        rows.append(row)
    return rows


def _select(algorithm: str, inst: Instance, profile: RankedProfile):
    if algorithm == "ear":
        return ear_select(profile, inst.k)
    if algorithm == "tgc":
        return tgc_select(inst)
    return single_winner(profile)


def report_fields(inst: Instance, report: AuditReport) -> Dict[str, str]:
    satisfied = report.satisfied
    fields = {
        "measured": format_measure(report.value),
        "measured_decimal": format_decimal(report.value),
        "witness": _witness_summary(inst, report),
        "satisfied": {True: "yes", False: "no", None: ""}[satisfied],
        "status": "lower-bound" if report.lower_bound_only else "ok",
    }
    if report.bound is not None:
        fields["bound"] = str(report.bound)
        fields["bound_decimal"] = f"{report.bound.to_decimal():.{config.DECIMAL_PLACES}f}"
        fields["margin"] = report.bound.margin(report.value, config.DECIMAL_PLACES)
    return fields


def _plot_rows(spec: SweepSpec, rows: Sequence[Dict[str, str]]) -> List[Dict[str, str]]:
    """Max measured value per (algorithm, check, alpha) beside the guarantee for that alpha."""
    best: Dict[Tuple[str, str, str], object] = {}
    for row in rows:
        if row["measured"] == "":
            continue
        key = (row["algorithm"], row["check"], row["alpha"])
        value = math.inf if row["measured"] == "inf" else Fraction(row["measured"])
        if key not in best or value > best[key]:
            best[key] = value
    plot = []
    for algorithm, check, alpha in _cells(spec):
        alpha_text = "" if alpha is None else format_rational(alpha)
        key = (algorithm, check, alpha_text)
        if key not in best:
            continue
        bound = proven_bound(algorithm, check, alpha)
        plot.append({
            "algorithm": algorithm,
            "check": check,
            "alpha": alpha_text,
            "alpha_decimal": "" if alpha is None else format_decimal(alpha),
            "max_measured": format_measure(best[key]),
            "max_measured_decimal": format_decimal(best[key]),
            "bound": "" if bound is None else str(bound),
            "bound_decimal": "" if bound is None else f"{bound.to_decimal():.{config.DECIMAL_PLACES}f}",
        })
    return plot


def run_sweep(spec: SweepSpec) -> SweepResult:
    tasks = [(i, gen, spec) for i, gen in enumerate(spec.generators())]
    if spec.workers > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=spec.workers) as ex:
            per_instance = list(ex.map(_instance_rows, tasks))
    else:
        per_instance = [_instance_rows(task) for task in tasks]
    rows = []
    for instance_rows in per_instance:
        for row in instance_rows:
            row["cell"] = str(len(rows))
            rows.append(row)
    result = SweepResult(rows=rows, plot=_plot_rows(spec, rows))
    if spec.output_dir:
        write_outputs(result, spec.output_dir)
    return result


def render_table(rows: Sequence[Dict[str, str]], fields: Sequence[str], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        writer.writerows({key: row.get(key, "") for key in fields} for row in rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    widths = {key: max([len(key)] + [len(str(row.get(key, ""))) for row in rows]) for key in fields}
    lines = ["  ".join(key.ljust(widths[key]) for key in fields).rstrip()]
    for row in rows:
        lines.append("  ".join(str(row.get(key, "")).ljust(widths[key]) for key in fields).rstrip())
    return "\n".join(lines) + "\n"


def write_outputs(result: SweepResult, directory: str, fmt: str = "csv"):
    os.makedirs(directory, exist_ok=True)
    table = os.path.join(directory, "sweep.csv" if fmt == "csv" else "sweep.txt")
    with open(table, "w") as f:
        f.write(render_table(result.rows, ROW_FIELDS, fmt))
    with open(os.path.join(directory, "plot.csv"), "w") as f:
        f.write(render_table(result.plot, PLOT_FIELDS, "csv"))
    log.info("sweep: wrote %s and plot.csv (%d rows)", table, len(result.rows))


# operation-count benchmark

BENCH_FIELDS = ("rule", "n", "m", "k", "events", "tests", "operations", "limit", "seconds", "flagged")


@dataclass(frozen=True)
class BenchRow:
    rule: str
    n: int
    m: int
    k: int
    events: int
    tests: int
    limit: int
    seconds: float

    @property
    def operations(self) -> int:
        return self.events + self.tests

    @property
    def flagged(self) -> bool:
        return self.operations > self.limit

    def to_dict(self) -> Dict[str, str]:
        data = {key: str(value) for key, value in asdict(self).items()}
        data.update(operations=str(self.operations), seconds=f"{self.seconds:.4f}",
                    flagged="yes" if self.flagged else "no")
        return data


def default_bench_k(m: int) -> int:
    return max(1, min(m - 1, 5))


def opcount_bench(sizes: Iterable[Tuple[int, int]], k: Optional[int] = None, seed: int = 0,
                  factor: int = config.OPERATION_FACTOR) -> List[BenchRow]:
    """Neighborhood operation counts and wall time of both rules on random block-only instances."""
    rows = []
    for n, m in sizes:
        size_k = default_bench_k(m) if k is None else k
        inst = gen_random(n, m, size_k, seed=seed, block_only=True)
        profile = derive_rankings(inst)
        for rule, run in (("ear", lambda: ear_select(profile, size_k)), ("tgc", lambda: tgc_select(inst))):
            start = time.perf_counter()
            coverage = run()
            seconds = time.perf_counter() - start
            row = BenchRow(rule, n, m, size_k, coverage.events, coverage.membership_tests, factor * n * m, seconds)
            if row.flagged:
                log.warning("bench: %s at n=%d m=%d used %d operations (limit %d)",
                            rule, n, m, row.operations, row.limit)
            rows.append(row)
    return rows


def doubling_sizes(n_start: int, n_stop: int, m: int) -> List[Tuple[int, int]]:
    sizes, n = [], n_start
    while n <= n_stop:
        sizes.append((n, m))
        n *= 2
    return sizes
