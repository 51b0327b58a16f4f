"""Denotational trace semantics and its state-space counterpart.

``enumerate_language`` evaluates the operator semantics directly (sequence
concatenation, reverse-sequence concatenation, choice union, parallel
shuffle, loop expansion truncated at a redo bound) and serves as the
independent oracle for ``statespace_language``, which enumerates bounded
runs over the reduced successor relation and projects them to traces.

Loops are bounded per activation: every time a loop vertex opens, its redo
child may execute at most ``k`` more times. Both sides of the oracle pair
quantify over the same bound.

Trace text form: comma-separated labels in angle brackets, ``<a,b,c>``;
the empty trace is ``<>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .statespace import (
    FUTURE,
    OPEN,
    Run,
    TreeState,
    Transition,
    _materialize_step,
    _succ_triggers,
    _tables,
    apply,
    initial_state,
)
from .tree import Operator, ProcessTree

#: A trace is a tuple of activity names; tau never appears.
Trace = tuple[str, ...]

#: Default cap on enumerated language size (shuffle growth is factorial).
DEFAULT_MAX_TRACES = 10**6


class LanguageOverflowError(RuntimeError):
    """Enumeration exceeded the configured maximum number of traces."""

    def __init__(self, limit: int):
        super().__init__(f"language enumeration exceeded {limit} traces")
        self.limit = limit


@dataclass(frozen=True)
class LoopBound:
    """Maximum redo executions per loop-vertex activation."""

    k: int = 2

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("loop bound must be non-negative")


def trace_text(trace: Trace) -> str:
    return "<" + ",".join(trace) + ">"


def parse_trace(text: str) -> Trace:
    if not (text.startswith("<") and text.endswith(">")):
        raise ValueError(f"malformed trace text {text!r}")
    body = text[1:-1]
    return tuple(body.split(",")) if body else ()


# -- shuffle -------------------------------------------------------------------


def _shuffle_pair(left: Trace, right: Trace) -> set[Trace]:
    if not left:
        return {right}
    if not right:
        return {left}
    out: set[Trace] = set()
    out.update(left[:1] + rest for rest in _shuffle_pair(left[1:], right))
    out.update(right[:1] + rest for rest in _shuffle_pair(left, right[1:]))
    return out


def shuffle(traces: Sequence[Trace]) -> set[Trace]:
    """All order-preserving interleavings of the given traces (n-ary)."""
    if not traces:
        return {()}
    acc = {tuple(traces[0])}
    for trace in traces[1:]:
        acc = {s for partial in acc for s in _shuffle_pair(partial, tuple(trace))}
    return acc


# -- denotational enumeration --------------------------------------------------


def enumerate_language(
    tree: ProcessTree,
    bound: LoopBound = LoopBound(),
    max_traces: int = DEFAULT_MAX_TRACES,
) -> set[Trace]:
    """The tree's trace set, loops truncated at ``bound.k`` redos per
    activation. Exact on loop-free trees; monotone in ``k``.

    Raises :class:`LanguageOverflowError` once any intermediate set exceeds
    ``max_traces``.
    """

    def check(traces: set[Trace]) -> set[Trace]:
        if len(traces) > max_traces:
            raise LanguageOverflowError(max_traces)
        return traces

    def product_concat(acc: set[Trace], part: set[Trace]) -> set[Trace]:
        out: set[Trace] = set()
        for a in acc:
            for b in part:
                out.add(a + b)
            check(out)
        return out

    def product_shuffle(acc: set[Trace], part: set[Trace]) -> set[Trace]:
        out: set[Trace] = set()
        for a in acc:
            for b in part:
                out |= _shuffle_pair(a, b)
                check(out)
        return out

    def concat(parts: list[set[Trace]]) -> set[Trace]:
        acc: set[Trace] = {()}
        for part in parts:
            acc = product_concat(acc, part)
        return acc

    def lang(v: int) -> set[Trace]:
        label = tree.labels[v]
        if not isinstance(label, Operator):
            return {()} if label is None else {(label,)}
        kids = tree.children[v]
        parts = [lang(c) for c in kids]
        if label is Operator.SEQUENCE:
            return concat(parts)
        if label is Operator.REVERSE_SEQUENCE:
            return concat(parts[::-1])
        if label is Operator.CHOICE:
            out: set[Trace] = set()
            for part in parts:
                out |= part
            return check(out)
        if label is Operator.PARALLEL:
            acc = parts[0]
            for part in parts[1:]:
                acc = product_shuffle(acc, part)
            return acc
        # loop: do (redo do)^i for i = 0..k
        do, redo = parts
        out = set(do)
        tail = do
        for _ in range(bound.k):
            tail = product_concat(product_concat(tail, redo), do)
            out = check(out | tail)
        return out

    return lang(tree.root)


# -- run projection and bounded run enumeration --------------------------------


def project_run(tree: ProcessTree, run: Run) -> Trace:
    """Replay a run from the all-Future state and keep the labels of
    activity-leaf opens, in order. Raises if the run is not replayable."""
    state = initial_state(tree)
    out: list[str] = []
    for transition in run:
        state = apply(tree, state, transition)
        if transition.source == FUTURE and transition.target == OPEN:
            label = tree.activity(transition.vertex)
            if label is not None:
                out.append(label)
    return tuple(out)


def statespace_language(
    tree: ProcessTree,
    bound: LoopBound = LoopBound(),
    max_traces: int = DEFAULT_MAX_TRACES,
) -> set[Trace]:
    """Traces of all bounded runs over the reduced successor relation.

    A run is bounded when every loop vertex's redo child opens at most
    ``bound.k`` times per activation of the loop vertex (counters reset
    when the loop vertex re-opens). Agrees with :func:`enumerate_language`
    at equal bounds.
    """
    t = _tables(tree)
    goal = t.two_all
    loops = [v for v in range(t.n) if tree.operator(v) is Operator.LOOP]
    loop_pos = {v: i for i, v in enumerate(loops)}
    redo_owner = {tree.children[v][1]: loop_pos[v] for v in loops}
    k = bound.k

    Node = tuple[int, tuple[int, ...]]  # (state key, redo counts per loop)

    def node_edges(node: Node) -> list[tuple[Optional[str], Node]]:
        skey, budgets = node
        edges: list[tuple[Optional[str], Node]] = []
        for v, src, tgt in _succ_triggers(t, skey):
            next_budgets = budgets
            label: Optional[str] = None
            if src == 0 and tgt == 1:  # F->O: the only label-relevant move
                owner = redo_owner.get(v)
                if owner is not None:
                    used = budgets[owner]
                    if used >= k:
                        continue
                    next_budgets = budgets[:owner] + (used + 1,) + budgets[owner + 1 :]
                pos = loop_pos.get(v)
                if pos is not None and next_budgets[pos] != 0:
                    # fresh activation of a loop vertex: redo budget resets
                    next_budgets = (
                        next_budgets[:pos] + (0,) + next_budgets[pos + 1 :]
                    )
                label = t.leaf_label[v]
                new_key = skey + (1 << (2 * v))
            else:
                _, new_key = _materialize_step(t, skey, v, src, tgt)
            edges.append((label, (new_key, next_budgets)))
        return edges

    # Iterative post-order over the (state, budgets) DAG: every cycle of the
    # reduced graph opens some redo child, so budget counting makes it acyclic.
    memo: dict[Node, frozenset[Trace]] = {}
    edge_cache: dict[Node, list[tuple[Optional[str], Node]]] = {}
    root: Node = (initial_state(tree).key, (0,) * len(loops))
    stack: list[Node] = [root]
    while stack:
        node = stack[-1]
        if node in memo:
            stack.pop()
            continue
        if node[0] == goal:
            memo[node] = frozenset({()})
            stack.pop()
            continue
        edges = edge_cache.get(node)
        if edges is None:
            edges = node_edges(node)
            edge_cache[node] = edges
            pending = [child for _, child in edges if child not in memo]
            if pending:
                stack.extend(pending)
                continue
        else:
            missing = [child for _, child in edges if child not in memo]
            if missing:
                stack.extend(missing)
                continue
        collected: set[Trace] = set()
        for label, child in edges:
            suffixes = memo[child]
            if label is None:
                collected |= suffixes
            else:
                head = (label,)
                collected.update(head + suffix for suffix in suffixes)
            if len(collected) > max_traces:
                raise LanguageOverflowError(max_traces)
        memo[node] = frozenset(collected)
        edge_cache.pop(node, None)
        stack.pop()

    return set(memo[root])
