"""Line-oriented text formats for instances, committees and coverage records.

All indices in files are 1-based, ``#`` starts a comment and blank lines are ignored.
Rationals are read exactly (``p/q``, integers or decimals) and written canonically, so a
written file read back and written again is reproduced byte for byte. Decimal input such
as ``0.5`` comes back as ``1/2``.

Instance grammar::

    metricrep-instance 1
    n <int>
    m <int>
    k <int>
    labels voters <name>...             (optional)
    labels candidates <name>...         (optional)
    metric full|block|none              followed by n+m rows of n+m, or n rows of m, rationals
    coordinates <norm> <dim> [block]    (instead of metric) followed by n+m rows of dim rationals
    rankings                            (optional) followed by n rows of m candidate indices
                                        that must not contradict the distances, if any
    end
"""
import logging
import os
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import config
from .coverage import CoverageRecord
from .errors import FormatError, ProfileShapeMismatch
from .instance import NORMS, Instance, RankedProfile
from .utils import format_rational, parse_rational

log = logging.getLogger(__name__)

INSTANCE_MAGIC = "metricrep-instance"
COMMITTEE_MAGIC = "metricrep-committee"
COVERAGE_MAGIC = "metricrep-coverage"


class _Lines:
    """Cursor over meaningful lines, remembering line numbers for error messages."""

    def __init__(self, text: str):
        self._items: List[Tuple[int, List[str]]] = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self._items.append((number, line.split()))
        self._pos = 0

    def peek(self) -> Optional[List[str]]:
        return self._items[self._pos][1] if self._pos < len(self._items) else None

    def next(self, what: str) -> List[str]:
        if self._pos >= len(self._items):
            raise FormatError(f"unexpected end of file, expected {what}")
        self.number, tokens = self._items[self._pos]
        self._pos += 1
        return tokens

    def error(self, message: str) -> FormatError:
        return FormatError(f"line {getattr(self, 'number', 0)}: {message}")

    def keyword(self, word: str, count: Optional[int] = None) -> List[str]:
        tokens = self.next(word)
        if tokens[0] != word or (count is not None and len(tokens) != count + 1):
            raise self.error(f"expected '{word}'" + (f" with {count} value(s)" if count else ""))
        return tokens[1:]

    def integer(self, word: str) -> int:
        (value,) = self.keyword(word, 1)
        try:
            return int(value)
        except ValueError:
            raise self.error(f"'{word}' needs an integer, got {value!r}") from None

    def header(self, magic: str):
        tokens = self.next(magic)
        if tokens != [magic, str(config.FORMAT_VERSION)]:
            raise self.error(f"expected '{magic} {config.FORMAT_VERSION}'")

    def row(self, width: int, parse, what: str) -> list:
        tokens = self.next(what)
        if len(tokens) != width:
            raise self.error(f"{what} row needs {width} entries, got {len(tokens)}")
        try:
            return [parse(t) for t in tokens]
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def indices(self, tokens: Sequence[str], limit: int) -> List[int]:
        try:
            values = [int(t) - 1 for t in tokens]
        except ValueError:
            raise self.error("indices must be integers") from None
        if any(not 0 <= v < limit for v in values):
            raise self.error(f"index out of range 1..{limit}")
        return values

    def finish(self):
        self.keyword("end", 0)
        if self.peek() is not None:
            raise self.error("content after 'end'")


# instances


def read_instance(text: str) -> Tuple[Instance, Optional[RankedProfile]]:
    lines = _Lines(text)
    lines.header(INSTANCE_MAGIC)
    n, m, k = lines.integer("n"), lines.integer("m"), lines.integer("k")
    labels = {}
    while lines.peek() and lines.peek()[0] == "labels":
        tokens = lines.next("labels")
        kind, names = (tokens[1] if len(tokens) > 1 else ""), tuple(tokens[2:])
        if kind not in ("voters", "candidates"):
            raise lines.error("labels must be 'voters' or 'candidates'")
        labels[f"{kind[:-1]}_labels"] = names

    tokens = lines.next("metric or coordinates")
    try:
        if tokens[0] == "metric" and len(tokens) == 2 and tokens[1] in ("full", "block", "none"):
            if tokens[1] == "none":
                inst = Instance.ordinal_only(n, m, k, **labels)
            elif tokens[1] == "full":
                rows = [lines.row(n + m, parse_rational, "metric") for _ in range(n + m)]
                inst = Instance.from_matrix(n, m, k, rows, **labels)
            else:
                rows = [lines.row(m, parse_rational, "metric") for _ in range(n)]
                inst = Instance.from_block(n, m, k, rows, **labels)
        elif tokens[0] == "coordinates" and len(tokens) in (3, 4) and tokens[1] in NORMS:
            dim = int(tokens[2])
            full = len(tokens) == 3
            if not full and tokens[3] != "block":
                raise lines.error("coordinates accept only the 'block' flag")
            points = [lines.row(dim, parse_rational, "coordinates") for _ in range(n + m)]
            inst = Instance.from_coordinates(points[:n], points[n:], k, norm=tokens[1], full=full, **labels)
        else:
            raise lines.error("expected 'metric full|block|none' or 'coordinates <norm> <dim>'")
    except ProfileShapeMismatch as exc:
        raise lines.error(str(exc)) from None

    profile = None
    if lines.peek() == ["rankings"]:
        lines.next("rankings")
        rows = [lines.row(m, int, "rankings") for _ in range(n)]
        try:
            profile = RankedProfile.from_positions(rows)
        except ProfileShapeMismatch as exc:
            raise lines.error(str(exc)) from None
        if inst.has_metric and not profile.is_consistent_with(inst):
            raise lines.error("rankings contradict the metric")
    lines.finish()
    return inst, profile


def _rational_row(values) -> str:
    return " ".join(format_rational(x) for x in values)


def write_instance(inst: Instance, profile: Optional[RankedProfile] = None) -> str:
    out = [f"{INSTANCE_MAGIC} {config.FORMAT_VERSION}", f"n {inst.n}", f"m {inst.m}", f"k {inst.k}"]
    if inst.voter_labels:
        out.append("labels voters " + " ".join(inst.voter_labels))
    if inst.candidate_labels:
        out.append("labels candidates " + " ".join(inst.candidate_labels))
    if inst.coordinates is not None:
        dim = len(inst.coordinates[0])
        out.append(f"coordinates {inst.norm} {dim}" + ("" if inst.full else " block"))
        out.extend(_rational_row(p) for p in inst.coordinates)
    elif inst.rows is None:
        out.append("metric none")
    else:
        out.append("metric full" if inst.full else "metric block")
        den = inst.denominator
        out.extend(_rational_row(Fraction(d, den) for d in row) for row in inst.rows)
    if profile is not None:
        out.append("rankings")
        out.extend(" ".join(str(c + 1) for c in order) for order in profile.orders)
    out.append("end")
    return "\n".join(out) + "\n"


# committees and coverage


def write_committee(committee: Sequence[int]) -> str:
    members = " ".join(str(c + 1) for c in committee)
    return f"{COMMITTEE_MAGIC} {config.FORMAT_VERSION}\nmembers {members}\nend\n"


def _threshold_text(value) -> str:
    return str(value) if isinstance(value, int) else format_rational(value)


def write_coverage(coverage: CoverageRecord) -> str:
    out = [
        f"{COVERAGE_MAGIC} {config.FORMAT_VERSION}",
        f"rule {coverage.rule}",
        f"n {coverage.n}",
        f"m {coverage.m}",
        f"k {coverage.k}",
        f"quota {coverage.quota}",
    ]
    for r, hood, threshold in zip(coverage.committee, coverage.neighborhoods, coverage.thresholds):
        if threshold is None:
            out.append(f"filler {r + 1}")
        else:
            voters = " ".join(str(v + 1) for v in hood)
            out.append(f"rep {r + 1} threshold {_threshold_text(threshold)} voters {voters}")
    out.append("uncovered" + "".join(f" {v + 1}" for v in coverage.uncovered))
    out.append(f"events {coverage.events}")
    out.append(f"tests {coverage.membership_tests}")
    out.append("end")
    return "\n".join(out) + "\n"


def read_coverage(text: str) -> CoverageRecord:
    lines = _Lines(text)
    lines.header(COVERAGE_MAGIC)
    (rule,) = lines.keyword("rule", 1)
    n, m, k, quota = (lines.integer(word) for word in ("n", "m", "k", "quota"))
    committee, hoods, thresholds = [], [], []
    while lines.peek() and lines.peek()[0] in ("rep", "filler"):
        tokens = lines.next("rep")
        if tokens[0] == "filler":
            if len(tokens) != 2:
                raise lines.error("filler takes one candidate")
            committee.extend(lines.indices(tokens[1:], m))
            hoods.append(())
            thresholds.append(None)
            continue
        if len(tokens) < 5 or tokens[2] != "threshold" or tokens[4] != "voters":
            raise lines.error("expected 'rep <c> threshold <t> voters <v>...'")
        committee.extend(lines.indices(tokens[1:2], m))
        raw = tokens[3]
        thresholds.append(int(raw) if rule == "ear" else parse_rational(raw))
        hoods.append(tuple(lines.indices(tokens[5:], n)))
    uncovered = tuple(lines.indices(lines.keyword("uncovered"), n))
    events, tests = lines.integer("events"), lines.integer("tests")
    lines.finish()
    if len(committee) != k:
        raise FormatError(f"coverage lists {len(committee)} members, k is {k}")
    return CoverageRecord(
        rule=rule, n=n, m=m, k=k, quota=quota,
        committee=tuple(committee), neighborhoods=tuple(hoods), thresholds=tuple(thresholds),
        uncovered=uncovered, events=events, membership_tests=tests,
    )


def read_committee(text: str) -> Union[Tuple[int, ...], CoverageRecord]:
    """A committee, or the full coverage record when given a coverage file."""
    lines = _Lines(text)
    first = lines.peek()
    if first and first[0] == COVERAGE_MAGIC:
        return read_coverage(text)
    lines.header(COMMITTEE_MAGIC)
    tokens = lines.keyword("members")
    try:
        members = tuple(int(t) - 1 for t in tokens)
    except ValueError:
        raise lines.error("members must be integers") from None
    if any(c < 0 for c in members):
        raise lines.error("candidate indices start at 1")
    lines.finish()
    return members


def committee_of(record: Union[Tuple[int, ...], CoverageRecord]) -> Tuple[int, ...]:
    return record.committee if isinstance(record, CoverageRecord) else record


# files


def _read(path: str) -> str:
    with open(path, "r") as f:
        return f.read()


def _write(path: str, text: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w") as f:
        f.write(text)
    log.info("wrote %s", path)


def load_instance(path: str) -> Tuple[Instance, Optional[RankedProfile]]:
    return read_instance(_read(path))


def save_instance(path: str, inst: Instance, profile: Optional[RankedProfile] = None):
    _write(path, write_instance(inst, profile))


def load_committee(path: str) -> Union[Tuple[int, ...], CoverageRecord]:
    return read_committee(_read(path))


def save_committee(path: str, committee: Sequence[int]):
    _write(path, write_committee(committee))


def save_coverage(path: str, coverage: CoverageRecord):
    _write(path, write_coverage(coverage))
