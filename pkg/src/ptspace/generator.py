"""Seeded random process-tree generation.

Each tree gets its own operator mix drawn from a Dirichlet distribution
(gamma draws normalized; at concentration 1 these are unit-rate
exponential draws), then grows recursively: an operator vertex per draw,
loops with exactly two children, other operators with 2-4, fresh activity
names a1, a2, ... at the leaves, and a tau leaf replacing an activity with
probability 0.1. Reverse sequence is never generated; it only arises
through inversion. Trees whose activity-leaf count falls outside the
configured range (tau replacement can shrink it) are redrawn, as are
corpus duplicates (by canonical text), so a (seed, config) pair fully
determines the corpus.

Corpus files are ``.ptt``: one tree per line, ``#`` comments; the header
records the generating configuration and a ``# dist:`` comment before each
tree carries its sampled operator probabilities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, TextIO

from .tree import Operator, ProcessTree, activity_count, format_tree, parse_tree

#: Operators eligible for generation, in probability-vector order.
GENERATED_OPERATORS = (
    Operator.SEQUENCE,
    Operator.CHOICE,
    Operator.PARALLEL,
    Operator.LOOP,
)


@dataclass(frozen=True)
class GenConfig:
    """Generation parameters; ``seed`` plus this config determine the corpus."""

    seed: int = 0
    min_activities: int = 5
    max_activities: int = 15
    operator_alpha: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    tau_probability: float = 0.1
    min_children: int = 2
    max_children: int = 4

    def __post_init__(self):
        if self.min_activities < 1:
            raise ValueError("min_activities must be at least 1")
        if self.max_activities < self.min_activities:
            raise ValueError("activity range is empty")
        if any(a <= 0 for a in self.operator_alpha):
            raise ValueError("Dirichlet concentrations must be positive")
        if not 0.0 <= self.tau_probability < 1.0:
            raise ValueError("tau probability must lie in [0, 1)")
        if self.min_children < 2 or self.max_children < self.min_children:
            raise ValueError("children range must satisfy 2 <= min <= max")


@dataclass(frozen=True)
class OperatorDistribution:
    """Probabilities over sequence/choice/parallel/loop, summing to 1."""

    p_sequence: float
    p_choice: float
    p_parallel: float
    p_loop: float

    def __post_init__(self):
        values = self.as_tuple()
        if any(p < 0 for p in values):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(values) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_sequence, self.p_choice, self.p_parallel, self.p_loop)

    def pick(self, rng: random.Random) -> Operator:
        return rng.choices(GENERATED_OPERATORS, weights=self.as_tuple())[0]


def sample_distribution(
    rng: random.Random,
    alpha: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0),
) -> OperatorDistribution:
    """One Dirichlet(alpha) draw; deterministic for a given rng state."""
    draws = [rng.gammavariate(a, 1.0) for a in alpha]
    total = sum(draws)
    return OperatorDistribution(*(d / total for d in draws))


def _split(rng: random.Random, total: int, parts: int) -> list[int]:
    """A uniformly random composition of ``total`` into ``parts`` >= 1 each."""
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    bounds = [0] + cuts + [total]
    return [hi - lo for lo, hi in zip(bounds, bounds[1:])]


def generate_tree(
    rng: random.Random, config: GenConfig, distribution: OperatorDistribution
) -> ProcessTree:
    """Grow one valid tree whose activity-leaf count is in the configured range."""

    def grow(budget: int, names: list[int]):
        if budget == 1:
            if rng.random() < config.tau_probability:
                return (None, ())
            names[0] += 1
            return (f"a{names[0]}", ())
        op = distribution.pick(rng)
        if op is Operator.LOOP:
            parts = _split(rng, budget, 2)
        else:
            width = rng.randint(config.min_children, min(config.max_children, budget))
            parts = _split(rng, budget, width)
        return (op, tuple(grow(p, names) for p in parts))

    while True:
        target = rng.randint(config.min_activities, config.max_activities)
        tree = ProcessTree.from_nested(grow(target, [0]))
        if config.min_activities <= activity_count(tree) <= config.max_activities:
            return tree


@dataclass(frozen=True)
class CorpusEntry:
    tree_id: str
    tree: ProcessTree
    distribution: Optional[OperatorDistribution]


def generate_corpus(config: GenConfig, count: int) -> list[CorpusEntry]:
    """``count`` distinct trees (by canonical text), each with its own
    operator distribution; duplicates are rejected and redrawn."""
    rng = random.Random(config.seed)
    seen: set[str] = set()
    out: list[CorpusEntry] = []
    while len(out) < count:
        distribution = sample_distribution(rng, config.operator_alpha)
        tree = generate_tree(rng, config, distribution)
        text = format_tree(tree)
        if text in seen:
            continue
        seen.add(text)
        out.append(CorpusEntry(f"t{len(out)}", tree, distribution))
    return out


def write_corpus(entries: list[CorpusEntry], fp: TextIO, config: GenConfig) -> None:
    fp.write("# process-tree corpus\n")
    fp.write(
        "# seed={} count={} min_activities={} max_activities={} "
        "tau_probability={}\n".format(
            config.seed,
            len(entries),
            config.min_activities,
            config.max_activities,
            config.tau_probability,
        )
    )
    for entry in entries:
        if entry.distribution is not None:
            probs = ",".join(repr(p) for p in entry.distribution.as_tuple())
            fp.write(f"# dist: {probs}\n")
        fp.write(format_tree(entry.tree) + "\n")


def read_corpus(fp: TextIO) -> list[CorpusEntry]:
    """Parse a corpus file; a ``# dist:`` comment attaches to the next tree.

    Plain ``.ptt`` files (no dist comments) load with distribution None.
    """
    entries: list[CorpusEntry] = []
    pending: Optional[OperatorDistribution] = None
    for line in fp:
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.startswith("dist:"):
                parts = [float(x) for x in body[len("dist:") :].split(",")]
                if len(parts) != 4:
                    raise ValueError(f"malformed dist comment: {stripped!r}")
                pending = OperatorDistribution(*parts)
            continue
        tree = parse_tree(stripped)
        entries.append(CorpusEntry(f"t{len(entries)}", tree, pending))
        pending = None
    return entries


def load_corpus(path) -> list[CorpusEntry]:
    with open(path, "r", encoding="utf-8") as fp:
        return read_corpus(fp)


def save_corpus(entries: list[CorpusEntry], path, config: GenConfig) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        write_corpus(entries, fp, config)
