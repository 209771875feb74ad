"""Query-set generation, benchmark execution, and randomized equivalence checking."""

from __future__ import annotations

import csv
import io
import logging
import statistics
import time
from dataclasses import dataclass, field
from math import ceil
from typing import Callable, TextIO

from . import baselines, builder, index as index_mod
from .errors import (
    ConfigRejected,
    EvaluatorMismatch,
    NotFound,
    ParseError,
    StepLimitExceeded,
    UnsatisfiableWorkload,
)
from .graph import Graph, generate_er
from .labelseq import LabelSeq, is_primitive, primitive_sequences
from .rng import Xoshiro256StarStar

log = logging.getLogger("rlcindex.workload")

Evaluator = Callable[[int, int, LabelSeq], bool]


@dataclass
class Workload:
    """Queries with expected answers, as classified at generation time."""

    graph_id: str
    length: int
    seed: int
    queries: list  # list[tuple[int, int, LabelSeq, bool]]

    @property
    def true_count(self) -> int:
        return sum(1 for q in self.queries if q[3])

    @property
    def false_count(self) -> int:
        return len(self.queries) - self.true_count


def generate_workload(
    g: Graph,
    length: int,
    n_true: int,
    n_false: int,
    seed: int,
    step_cap: int = 10**7,
    max_draws: int | None = None,
) -> Workload:
    """Draw (s, t, constraint) triples uniformly and classify them online.

    Constraints are uniform over label sequences of the requested length with
    non-primitive draws rejected; classification runs the bidirectional
    search.  Probes exceeding step_cap are discarded.  Deterministic per
    seed; raises UnsatisfiableWorkload when the draw budget runs out before
    both classes are full.
    """
    if length < 1:
        raise ValueError("constraint length must be positive")
    if g.n < 1 or g.num_labels < 1:
        raise UnsatisfiableWorkload("graph has no vertices or no labels")
    if n_true < 0 or n_false < 0:
        raise ValueError("query counts must be non-negative")
    rng = Xoshiro256StarStar(seed)
    budget = max_draws if max_draws is not None else 1000 * (n_true + n_false) + 1000
    queries: list = []
    trues = falses = 0
    draws = 0
    discarded = 0
    n = g.n
    num_labels = g.num_labels
    while trues < n_true or falses < n_false:
        if draws >= budget:
            raise UnsatisfiableWorkload(
                f"{draws} draws filled only {trues}/{n_true} true and "
                f"{falses}/{n_false} false queries"
            )
        draws += 1
        s = rng.randrange(n)
        t = rng.randrange(n)
        constraint = tuple(rng.randrange(num_labels) for _ in range(length))
        if not is_primitive(constraint):
            continue
        try:
            answer = baselines.bibfs(g, s, t, constraint, step_cap=step_cap)
        except StepLimitExceeded:
            discarded += 1
            continue
        if answer and trues < n_true:
            trues += 1
            queries.append((s, t, constraint, True))
        elif not answer and falses < n_false:
            falses += 1
            queries.append((s, t, constraint, False))
    if discarded:
        log.info("discarded %d probes over the step cap", discarded)
    graph_id = g.header_comments[0] if g.header_comments else f"graph-n{g.n}-m{g.num_edges}"
    return Workload(graph_id=graph_id, length=length, seed=seed, queries=queries)


def save_workload(w: Workload, g: Graph, stream: TextIO) -> None:
    """CSV with header s,t,labels,expected; labels are space-separated names."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["s", "t", "labels", "expected"])
    names = g.vertex_names
    labels = g.label_names
    for s, t, constraint, expected in w.queries:
        writer.writerow(
            [
                names[s],
                names[t],
                " ".join(labels[lab] for lab in constraint),
                "true" if expected else "false",
            ]
        )


def workload_bytes(w: Workload, g: Graph) -> bytes:
    buf = io.StringIO()
    save_workload(w, g, buf)
    return buf.getvalue().encode("utf-8")


def load_workload(stream: TextIO, g: Graph) -> Workload:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header != ["s", "t", "labels", "expected"]:
        raise ParseError(f"unexpected workload header {header!r}")
    queries = []
    length = 0
    for row_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ParseError("expected 4 columns", line_number=row_no)
        s_name, t_name, label_text, expected_text = row
        if expected_text not in ("true", "false"):
            raise ParseError(f"bad boolean {expected_text!r}", line_number=row_no)
        try:
            s = g.vertex_id(s_name)
            t = g.vertex_id(t_name)
            constraint = tuple(g.label_id(name) for name in label_text.split())
        except NotFound as exc:
            raise ParseError(str(exc), line_number=row_no) from None
        queries.append((s, t, constraint, expected_text == "true"))
        length = max(length, len(constraint))
    return Workload(graph_id="loaded", length=length, seed=-1, queries=queries)


@dataclass
class EvaluatorTiming:
    name: str
    repeat_totals: list
    median_total: float
    per_query_median: float


@dataclass
class BenchReport:
    """Wall-clock results plus speed-up and break-even derived metrics."""

    workload_size: int
    repeats: int
    build_time_hint: float | None
    timings: dict = field(default_factory=dict)  # name -> EvaluatorTiming
    speed_up: dict = field(default_factory=dict)  # name -> ratio vs "index"
    break_even: dict = field(default_factory=dict)  # name -> query count or None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["evaluator", "median_total_s", "per_query_median_s", "speed_up", "break_even"]
        )
        for name, timing in self.timings.items():
            su = self.speed_up.get(name)
            bep = self.break_even.get(name)
            writer.writerow(
                [
                    name,
                    f"{timing.median_total:.6f}",
                    f"{timing.per_query_median:.9f}",
                    "" if su is None else f"{su:.2f}",
                    "never" if name in self.break_even and bep is None else (bep or ""),
                ]
            )
        return buf.getvalue()

    def format_table(self) -> str:
        lines = [
            f"{'evaluator':<10} {'total (s)':>12} {'per query (s)':>15} "
            f"{'speed-up':>10} {'break-even':>11}"
        ]
        for name, timing in self.timings.items():
            su = self.speed_up.get(name)
            bep = self.break_even.get(name)
            su_text = f"{su:.1f}x" if su is not None else "-"
            if name in self.break_even:
                bep_text = "never" if bep is None else str(bep)
            else:
                bep_text = "-"
            lines.append(
                f"{name:<10} {timing.median_total:>12.6f} "
                f"{timing.per_query_median:>15.9f} {su_text:>10} {bep_text:>11}"
            )
        return "\n".join(lines)


def run_bench(
    evaluators: dict[str, Evaluator],
    w: Workload,
    repeats: int = 20,
    build_time_hint: float | None = None,
) -> BenchReport:
    """Time each evaluator over the whole workload, repeats times.

    A correctness pass runs first: any wrong answer aborts with
    EvaluatorMismatch, so timings are only ever reported for evaluators that
    agree with the stored expectations.  Speed-up and break-even are computed
    against the evaluator named "index" when present.
    """
    if repeats < 1:
        raise ValueError("repeats must be positive")
    queries = w.queries
    for name, evaluate in evaluators.items():
        for s, t, constraint, expected in queries:
            got = evaluate(s, t, constraint)
            if got != expected:
                raise EvaluatorMismatch(name, (s, t, constraint), expected, got)
    report = BenchReport(
        workload_size=len(queries), repeats=repeats, build_time_hint=build_time_hint
    )
    for name, evaluate in evaluators.items():
        totals = []
        for _ in range(repeats):
            start = time.perf_counter()
            for s, t, constraint, _expected in queries:
                evaluate(s, t, constraint)
            totals.append(time.perf_counter() - start)
        median_total = statistics.median(totals)
        report.timings[name] = EvaluatorTiming(
            name=name,
            repeat_totals=totals,
            median_total=median_total,
            per_query_median=median_total / len(queries) if queries else 0.0,
        )
    if "index" in report.timings and len(report.timings) > 1:
        index_timing = report.timings["index"]
        for name, timing in report.timings.items():
            if name == "index":
                continue
            if index_timing.median_total > 0:
                report.speed_up[name] = timing.median_total / index_timing.median_total
            if build_time_hint is not None:
                gain = timing.per_query_median - index_timing.per_query_median
                report.break_even[name] = (
                    ceil(build_time_hint / gain) if gain > 0 else None
                )
    return report


@dataclass
class VerificationReport:
    graphs: int = 0
    triples: int = 0
    mismatches: int = 0
    condensed_violations: int = 0
    roundtrip_failures: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.mismatches == 0
            and self.condensed_violations == 0
            and self.roundtrip_failures == 0
        )


def verify_equivalence(
    graph_count: int,
    n_range: tuple[int, int],
    degree_range: tuple[float, float],
    label_range: tuple[int, int],
    k_range: tuple[int, int],
    seed: int,
    check_serialization: bool = True,
    max_failures: int = 20,
) -> VerificationReport:
    """Exhaustive four-way agreement sweep over random graphs.

    For each sampled graph the index and the extended transitive closure are
    built and every (s, t, primitive constraint) triple is answered by the
    index, the closure, the product BFS, and the bidirectional search; any
    disagreement is a failure.  Each index is also scanned for condensedness
    and round-tripped through serialization.
    """
    n_lo, n_hi = n_range
    deg_lo, deg_hi = degree_range
    lab_lo, lab_hi = label_range
    k_lo, k_hi = k_range
    if graph_count < 1 or n_lo < 1 or n_lo > n_hi or lab_lo < 1 or k_lo < 1:
        raise ConfigRejected("ranges must be non-empty and positive")
    if n_hi > 64:
        raise ConfigRejected("n beyond 64 makes the exhaustive sweep intractable")
    if lab_hi**k_hi > 10**4:
        raise ConfigRejected("label_range ** k_range exceeds the sweep guard")
    if deg_lo < 0 or deg_lo > deg_hi:
        raise ConfigRejected("bad degree range")

    rng = Xoshiro256StarStar(seed)
    report = VerificationReport()

    def record_failure(message: str) -> None:
        if len(report.failures) < max_failures:
            report.failures.append(message)

    for graph_no in range(graph_count):
        n = n_lo + rng.randrange(n_hi - n_lo + 1)
        num_labels = lab_lo + rng.randrange(lab_hi - lab_lo + 1)
        k = k_lo + rng.randrange(k_hi - k_lo + 1)
        avg_deg = deg_lo + (deg_hi - deg_lo) * rng.random()
        graph_seed = rng.next_u64()
        g = generate_er(n, avg_deg, num_labels, 2.0, graph_seed)
        tag = f"graph {graph_no} (n={n} deg={avg_deg:.2f} labels={num_labels} k={k})"

        idx = builder.build_index(g, k)
        if check_serialization:
            blob = index_mod.serialize(idx)
            restored = index_mod.deserialize(blob)
            if index_mod.serialize(restored) != blob:
                report.roundtrip_failures += 1
                record_failure(f"{tag}: serialization round trip not byte-identical")
            else:
                idx = restored
        etc = baselines.build_etc(g, k)
        violations = index_mod.condensedness_violations(idx)
        if violations:
            report.condensed_violations += len(violations)
            record_failure(f"{tag}: {len(violations)} condensedness violations")

        constraints = list(primitive_sequences(num_labels, k))
        for s in range(n):
            for constraint in constraints:
                reachable = baselines.nfa_reachable_set(g, s, constraint)
                row = etc.cells[s]
                mr_id = etc.dict.get(constraint)
                for t in range(n):
                    report.triples += 1
                    expected = t in reachable
                    got_index = index_mod.query(idx, s, t, constraint)
                    cell = row.get(t)
                    got_etc = (
                        mr_id is not None and cell is not None and mr_id in cell
                    )
                    got_bibfs = baselines.bibfs(g, s, t, constraint)
                    if not (expected == got_index == got_etc == got_bibfs):
                        report.mismatches += 1
                        record_failure(
                            f"{tag}: ({s},{t},{constraint}) nfa={expected} "
                            f"index={got_index} etc={got_etc} bibfs={got_bibfs}"
                        )
        report.graphs += 1
        if (graph_no + 1) % 25 == 0:
            log.info(
                "verified %d/%d graphs, %d triples",
                graph_no + 1,
                graph_count,
                report.triples,
            )
    return report
