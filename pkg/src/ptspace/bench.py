"""Benchmark harness: run the three search strategies over a corpus,
record per-tree metrics, and aggregate reduction statistics.

Per tree and strategy the harness records distinct expanded states (the
memory metric), the median wall time over a configurable number of
repetitions (monotonic clock), and the run length, which must agree across
strategies. Trees exceeding the state cap or timeout are flagged and
excluded from aggregates, never silently dropped.

Aggregation mirrors the three summary views of the experiments: quartiles
of the UD/BD memory and time reduction factors, mean +/- standard error of
the memory reduction bucketed by each operator's sampled probability
(nearest of the levels 0.0, 0.2, 0.4, 0.6, 0.8), and the mean BD/BDP
speedup bucketed by the decimal magnitude of BD's expanded states.

CSV column layout (header is bit-exact)::

    tree_id,n_activities,p_seq,p_choice,p_par,p_loop,ud_states,ud_ms,
    bd_states,bd_ms,bdp_states,bdp_ms,run_len

Config files are ``key=value`` lines; recognized keys: seed, count,
min_activities, max_activities, state_cap, timeout, repetitions.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, TextIO

from .generator import CorpusEntry
from .search import (
    DEFAULT_STATE_CAP,
    SearchLimitExceeded,
    SearchOutcome,
    search_bd,
    search_bdp,
    search_ud,
)
from .tree import ProcessTree, activity_count, format_tree, parse_tree

CSV_HEADER = (
    "tree_id,n_activities,p_seq,p_choice,p_par,p_loop,"
    "ud_states,ud_ms,bd_states,bd_ms,bdp_states,bdp_ms,run_len"
)

#: Operator-probability bucket levels used by the per-operator aggregates.
BUCKET_LEVELS = (0.0, 0.2, 0.4, 0.6, 0.8)

_OPERATOR_KEYS = ("sequence", "choice", "parallel", "loop")


@dataclass(frozen=True)
class BenchOptions:
    state_cap: int = DEFAULT_STATE_CAP
    timeout: Optional[float] = 30.0
    repetitions: int = 3
    jobs: int = 1


@dataclass(frozen=True)
class StrategyResult:
    expanded_states: int
    wall_ms: float
    run_length: int


@dataclass(frozen=True)
class BenchRecord:
    tree_id: str
    n_activities: int
    probabilities: Optional[tuple[float, float, float, float]]
    ud: StrategyResult
    bd: StrategyResult
    bdp: StrategyResult

    @property
    def run_len(self) -> int:
        return self.ud.run_length

    @property
    def lengths_agree(self) -> bool:
        return self.ud.run_length == self.bd.run_length == self.bdp.run_length


@dataclass(frozen=True)
class ReductionStats:
    """Strictly positive per-tree reduction quotients."""

    memory_reduction: float
    time_reduction: float
    bdp_speedup: float


@dataclass(frozen=True)
class SkippedTree:
    tree_id: str
    reason: str


@dataclass
class BenchResult:
    records: list[BenchRecord]
    skipped: list[SkippedTree]


def reduction_stats(record: BenchRecord) -> ReductionStats:
    return ReductionStats(
        memory_reduction=record.ud.expanded_states / record.bd.expanded_states,
        time_reduction=record.ud.wall_ms / record.bd.wall_ms,
        bdp_speedup=record.bd.wall_ms / record.bdp.wall_ms,
    )


def _timed(search_fn, tree, options: BenchOptions) -> StrategyResult:
    outcomes: list[SearchOutcome] = []
    for _ in range(max(1, options.repetitions)):
        outcomes.append(
            search_fn(tree, state_cap=options.state_cap, timeout=options.timeout)
        )
    first = outcomes[0]
    return StrategyResult(
        expanded_states=first.expanded_states,
        wall_ms=statistics.median(o.wall_time for o in outcomes) * 1000.0,
        run_length=first.run_length,
    )


def _phase1_worker(args):
    text, options = args
    tree = parse_tree(text)
    try:
        ud = _timed(search_ud, tree, options)
        bd = _timed(search_bd, tree, options)
    except SearchLimitExceeded as exc:
        return ("skip", str(exc))
    return ("ok", (ud, bd))


def run_benchmark(
    entries: Sequence[CorpusEntry], options: BenchOptions = BenchOptions()
) -> BenchResult:
    """One record per corpus tree; cap/timeout failures go to ``skipped``.

    UD and BD may run in parallel across trees (``options.jobs``); BDP runs
    afterwards, sequentially and in isolation, so its two workers are not
    disturbed by sibling benchmarks.
    """
    if not entries:
        raise ValueError("corpus is empty")
    phase1_args = [(format_tree(e.tree), options) for e in entries]
    if options.jobs > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            phase1 = list(pool.map(_phase1_worker, phase1_args, chunksize=8))
    else:
        phase1 = [_phase1_worker(a) for a in phase1_args]

    records: list[BenchRecord] = []
    skipped: list[SkippedTree] = []
    for entry, (status, payload) in zip(entries, phase1):
        if status == "skip":
            skipped.append(SkippedTree(entry.tree_id, f"ud/bd: {payload}"))
            continue
        ud, bd = payload
        try:
            bdp = _timed(search_bdp, entry.tree, options)
        except SearchLimitExceeded as exc:
            skipped.append(SkippedTree(entry.tree_id, f"bdp: {exc}"))
            continue
        record = BenchRecord(
            tree_id=entry.tree_id,
            n_activities=activity_count(entry.tree),
            probabilities=(
                entry.distribution.as_tuple() if entry.distribution else None
            ),
            ud=ud,
            bd=bd,
            bdp=bdp,
        )
        if not record.lengths_agree:
            raise RuntimeError(
                f"{entry.tree_id}: run lengths disagree across strategies "
                f"(ud={ud.run_length}, bd={bd.run_length}, bdp={bdp.run_length})"
            )
        records.append(record)
    return BenchResult(records, skipped)


# -- CSV -----------------------------------------------------------------------


def write_csv(records: Iterable[BenchRecord], fp: TextIO) -> None:
    fp.write(CSV_HEADER + "\n")
    for r in records:
        probs = r.probabilities if r.probabilities is not None else (math.nan,) * 4
        fields = [
            r.tree_id,
            str(r.n_activities),
            *(repr(p) for p in probs),
            str(r.ud.expanded_states),
            repr(r.ud.wall_ms),
            str(r.bd.expanded_states),
            repr(r.bd.wall_ms),
            str(r.bdp.expanded_states),
            repr(r.bdp.wall_ms),
            str(r.run_len),
        ]
        fp.write(",".join(fields) + "\n")


# -- aggregation ----------------------------------------------------------------


@dataclass(frozen=True)
class BucketStat:
    level: float
    mean: float
    stderr: float
    count: int


@dataclass
class AggregateSummary:
    record_count: int
    memory_reduction_quartiles: tuple[float, float, float]
    time_reduction_quartiles: tuple[float, float, float]
    operator_buckets: dict[str, list[BucketStat]]
    bdp_speedup_by_magnitude: list[tuple[int, float, int]]


def bucket_level(p: float) -> float:
    """Nearest of the levels 0.0-0.8; exact midpoints round down."""
    return min(BUCKET_LEVELS, key=lambda level: (abs(p - level), level))


def _quartiles(values: Sequence[float]) -> tuple[float, float, float]:
    if len(values) == 1:
        v = values[0]
        return (v, v, v)
    q = statistics.quantiles(values, n=4, method="inclusive")
    return (q[0], q[1], q[2])


def aggregate(records: Sequence[BenchRecord]) -> AggregateSummary:
    """Reduction-factor summary over unflagged records (>= 1 required)."""
    if not records:
        raise ValueError("no records to aggregate")
    stats = [reduction_stats(r) for r in records]
    memory = [s.memory_reduction for s in stats]
    times = [s.time_reduction for s in stats]

    operator_buckets: dict[str, list[BucketStat]] = {}
    with_probs = [
        (r, s) for r, s in zip(records, stats) if r.probabilities is not None
    ]
    for idx, key in enumerate(_OPERATOR_KEYS):
        per_level: dict[float, list[float]] = {}
        for r, s in with_probs:
            level = bucket_level(r.probabilities[idx])
            per_level.setdefault(level, []).append(s.memory_reduction)
        buckets = []
        for level in BUCKET_LEVELS:
            values = per_level.get(level)
            if not values:
                continue
            mean = statistics.fmean(values)
            stderr = (
                statistics.stdev(values) / math.sqrt(len(values))
                if len(values) > 1
                else 0.0
            )
            buckets.append(BucketStat(level, mean, stderr, len(values)))
        operator_buckets[key] = buckets

    magnitude: dict[int, list[float]] = {}
    for r, s in zip(records, stats):
        magnitude.setdefault(
            int(math.floor(math.log10(r.bd.expanded_states))), []
        ).append(s.bdp_speedup)
    bdp_rows = [
        (mag, statistics.fmean(values), len(values))
        for mag, values in sorted(magnitude.items())
    ]

    return AggregateSummary(
        record_count=len(records),
        memory_reduction_quartiles=_quartiles(memory),
        time_reduction_quartiles=_quartiles(times),
        operator_buckets=operator_buckets,
        bdp_speedup_by_magnitude=bdp_rows,
    )


def _ranks(values: Sequence[float]) -> list[float]:
    """Ranks with ties averaged (1-based)."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2 + 1
        for pos in order[i : j + 1]:
            ranks[pos] = rank
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (tie-averaged ranks, Pearson on ranks)."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two sequences of equal length >= 2")
    return statistics.correlation(_ranks(xs), _ranks(ys))


def operator_trend(summary: AggregateSummary, operator_key: str) -> float:
    """Spearman correlation of bucket levels vs. bucket means for one
    operator; positive means the reduction grows with the operator level."""
    buckets = summary.operator_buckets[operator_key]
    if len(buckets) < 2:
        raise ValueError(f"not enough non-empty buckets for {operator_key}")
    return spearman([b.level for b in buckets], [b.mean for b in buckets])


def format_summary(summary: AggregateSummary) -> str:
    """Readable text rendering of an aggregate summary."""
    lines = [f"records: {summary.record_count}"]
    q1, med, q3 = summary.memory_reduction_quartiles
    lines.append(f"memory reduction quartiles: q1={q1:.3f} median={med:.3f} q3={q3:.3f}")
    q1, med, q3 = summary.time_reduction_quartiles
    lines.append(f"time reduction quartiles:   q1={q1:.3f} median={med:.3f} q3={q3:.3f}")
    for key, buckets in summary.operator_buckets.items():
        parts = [
            f"{b.level:.1f}: {b.mean:.3f}+/-{b.stderr:.3f} (n={b.count})"
            for b in buckets
        ]
        lines.append(f"memory reduction by {key} level: " + "; ".join(parts))
    parts = [
        f"1e{mag}: {mean:.3f} (n={count})"
        for mag, mean, count in summary.bdp_speedup_by_magnitude
    ]
    lines.append("bd/bdp time ratio by expanded-state magnitude: " + "; ".join(parts))
    return "\n".join(lines)


# -- config files ----------------------------------------------------------------

_CONFIG_KEYS = {
    "seed": int,
    "count": int,
    "min_activities": int,
    "max_activities": int,
    "state_cap": int,
    "timeout": float,
    "repetitions": int,
}


def parse_config(lines: Iterable[str]) -> dict:
    """Parse ``key=value`` lines (``#`` comments and blanks ignored)."""
    out: dict = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        out[key] = _CONFIG_KEYS[key](value.strip())
    return out


def load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_config(fp)
