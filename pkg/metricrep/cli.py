"""Command-line front end.

Exit codes: 0 when every checked bound holds, 2 when a guarantee is violated, 1 on errors.
"""
import argparse
import logging
import sys
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional

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
from .errors import MetricrepError
from .fileformat import (
    committee_of,
    load_committee,
    load_instance,
    save_coverage,
    write_committee,
    write_coverage,
    write_instance,
)
from .instance import derive_rankings
from .instances import FAMILIES, GeneratorSpec
from .sweep import (
    BENCH_FIELDS,
    PLOT_FIELDS,
    ROW_FIELDS,
    doubling_sizes,
    load_sweep_spec,
    opcount_bench,
    render_table,
    report_fields,
    run_sweep,
    write_outputs,
)
from .tgc import tgc_select
from .utils import parse_index_range, parse_rational

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2

AUDIT_FIELDS = ("check", "alpha", "t_range", "measured", "measured_decimal", "bound", "bound_decimal",
                "margin", "satisfied", "witness", "status")


def _size(text: str):
    n, _, m = text.partition("x")
    return int(n), int(m)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metricrep", description="Proportional committee selection in metric spaces")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for selection traces")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--alpha", type=parse_rational)
    gen.add_argument("--distance", type=parse_rational, help="cross-cluster distance L")
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--epsilon", type=parse_rational)
    gen.add_argument("--rotation", type=int, default=0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--dim", type=int, default=2)
    gen.add_argument("--norm", choices=("l1", "linf", "euclidean"), default="l1")
    gen.add_argument("--grid", type=int, default=config.DEFAULT_GRID)
    gen.add_argument("-o", "--output", help="instance file (stdout when omitted)")

    select = sub.add_parser("select", help="run a selection rule on an instance file")
    select.add_argument("rule", choices=("ear", "tgc", "single-winner"))
    select.add_argument("--instance", required=True)
    select.add_argument("--k", type=int, help="override the instance's committee size")
    select.add_argument("--emit-coverage", "-o", dest="output",
                        help="coverage file, or committee file for single-winner (stdout when omitted)")

    audit = sub.add_parser("audit", help="audit a committee or coverage file")
    audit.add_argument("--instance", required=True)
    audit.add_argument("--committee", help="committee file; a coverage file is accepted too")
    audit.add_argument("--coverage", help="coverage file from 'select', needed by cor-single and stability")
    audit.add_argument("--check", required=True,
                       choices=("pf", "core", "pr", "pr-strong", "cor-single", "stability", "distortion",
                                "no-augmentation"))
    audit.add_argument("--alpha", type=parse_rational, default=Fraction(1))
    audit.add_argument("--t-range", type=parse_index_range)
    audit.add_argument("--algorithm", choices=("ear", "tgc", "single-winner"),
                       help="rule whose guarantee to compare against (read from coverage files)")
    audit.add_argument("--mode", choices=("exact", "sample"), default="exact")
    audit.add_argument("--samples", type=int, default=config.DEFAULT_SAMPLES)
    audit.add_argument("--seed", type=int, default=0)
    audit.add_argument("--cap", type=int, help=f"enumeration cap (default ${config.ENUMERATION_CAP_ENV} or "
                                               f"{config.ENUMERATION_CAP})")
    audit.add_argument("--format", choices=("text", "csv"), default="text")

    sweep = sub.add_parser("sweep", help="run a JSON sweep specification")
    sweep.add_argument("spec")
    sweep.add_argument("-o", "--output-dir", help="write sweep table and plot.csv here")
    sweep.add_argument("--workers", type=int, help=f"processes (default ${config.WORKERS_ENV} or 1)")
    sweep.add_argument("--format", choices=("text", "csv"), default="csv")

    bench = sub.add_parser("bench", help="operation counts of ear and tgc")
    bench.add_argument("--sizes", type=_size, nargs="*", help="NxM pairs, e.g. 100x20 200x20")
    bench.add_argument("--n-start", type=int, default=100)
    bench.add_argument("--n-stop", type=int, default=1600)
    bench.add_argument("--m", type=int, default=20)
    bench.add_argument("--k", type=int)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--format", choices=("text", "csv"), default="text")
    return parser


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as f:
            f.write(text)
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        family=args.family, alpha=args.alpha, n=args.n, m=args.m, k=args.k, distance=args.distance,
        epsilon=args.epsilon, rotation=args.rotation, seed=args.seed, dim=args.dim, norm=args.norm, grid=args.grid,
    )
    inst, profile = spec.generate()
    log.info("gen: %s %s", args.family, spec.closed_forms())
    _emit(write_instance(inst, profile), args.output)
    return EXIT_OK


def cmd_select(args) -> int:
    inst, profile = load_instance(args.instance)
    if args.k is not None:
        inst = inst.with_k(args.k)
    if args.rule != "tgc" and profile is None:
        profile = derive_rankings(inst)
    if args.rule == "single-winner":
        winner = single_winner(profile)
        print(f"winner {inst.candidate_label(winner)}")
        if args.output:
            _emit(write_committee([winner]), args.output)
        return EXIT_OK
    coverage = ear_select(profile, inst.k) if args.rule == "ear" else tgc_select(inst)
    if args.output:
        save_coverage(args.output, coverage)
    else:
        sys.stdout.write(write_coverage(coverage))
    return EXIT_OK


def _audit_inputs(args):
    if args.committee is None and args.coverage is None:
        raise MetricrepError("audit needs --committee or --coverage")
    record = load_committee(args.committee) if args.committee else None
    coverage = record if isinstance(record, CoverageRecord) else None
    if args.coverage:
        coverage = load_committee(args.coverage)
        if not isinstance(coverage, CoverageRecord):
            raise MetricrepError(f"{args.coverage} is a committee file, not a coverage file")
        if record is not None and sorted(committee_of(record)) != sorted(coverage.committee):
            raise MetricrepError("--committee and --coverage name different committees")
    committee = committee_of(record) if record is not None else coverage.committee
    return committee, coverage


def _run_audit(args, inst, committee, coverage) -> AuditReport:
    algorithm = args.algorithm or (coverage.rule if coverage else None)
    alpha = args.alpha
    check = args.check
    bound = proven_bound(algorithm, check, alpha) if algorithm else None
    if check == "distortion":
        if len(committee) != 1:
            raise MetricrepError("distortion needs a committee file with exactly one winner")
        return distortion_report(inst, committee[0], bound=bound)
    if check in ("cor-single", "stability") and coverage is None:
        raise MetricrepError(f"{check} needs a coverage file (see 'select')")
    if check == "pf":
        return pf_gamma(inst, committee, bound=bound)
    if check == "core":
        return core_beta(inst, committee, alpha, bound=bound)
    if check in ("pr", "pr-strong"):
        measure = pr_gamma if check == "pr" else pr_strong_gamma
        return measure(inst, committee, alpha, args.t_range, mode=args.mode, cap=args.cap,
                       samples=args.samples, seed=args.seed, bound=bound)
    if check == "cor-single":
        return cor_single_audit(inst, coverage, alpha, cap=args.cap, bound=bound)
    if check == "stability":
        variant = "cardinal" if coverage.rule == "tgc" else "ordinal"
        return stability_rho(inst, coverage, variant, cap=args.cap, bound=bound)
    return no_augmentation_monitor(inst, committee, args.t_range, cap=args.cap)


def cmd_audit(args) -> int:
    inst, _ = load_instance(args.instance)
    committee, coverage = _audit_inputs(args)
    report = _run_audit(args, inst, committee, coverage)
    if args.format == "text":
        print(report.render(inst))
    else:
        row = report_fields(inst, report)
        row.update(
            check=args.check,
            alpha="" if report.alpha is None else str(report.alpha),
            t_range="" if report.t_range is None else "%d..%d" % report.t_range,
        )
        sys.stdout.write(render_table([row], AUDIT_FIELDS, "csv"))
    return EXIT_VIOLATED if report.satisfied is False else EXIT_OK


def cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.spec)
    workers = args.workers if args.workers is not None else config.default_workers()
    spec = replace(spec, workers=workers, output_dir=None)
    result = run_sweep(spec)
    output_dir = args.output_dir or spec.output_dir
    if output_dir:
        write_outputs(result, output_dir, args.format)
    sys.stdout.write(render_table(result.rows, ROW_FIELDS, args.format))
    if not output_dir:
        log.info("plot data:\n%s", render_table(result.plot, PLOT_FIELDS, "csv"))
    return EXIT_VIOLATED if result.violated else EXIT_OK


def cmd_bench(args) -> int:
    sizes = args.sizes or doubling_sizes(args.n_start, args.n_stop, args.m)
    rows = opcount_bench(sizes, k=args.k, seed=args.seed)
    log.info("bench: committee size %s", args.k or "min(m-1, 5)")
    sys.stdout.write(render_table([row.to_dict() for row in rows], BENCH_FIELDS, args.format))
    return EXIT_VIOLATED if any(row.flagged for row in rows) else EXIT_OK


COMMANDS = {"gen": cmd_gen, "select": cmd_select, "audit": cmd_audit, "sweep": cmd_sweep, "bench": cmd_bench}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (MetricrepError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
