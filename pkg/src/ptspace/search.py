"""Shortest-run search over the reduced state space.

Three strategies compute a minimum-cost run from the all-Future to the
all-Closed state, where every transition costs 1 (so a fast-forwarded
fragment is an edge weighted by its transition count):

* ``search_ud`` - unidirectional uniform-cost search (the baseline),
* ``search_bd`` - two alternating searches, one on the tree and one on its
  inverse, matched through the state inverse whenever one direction expands
  a state whose inverse the other direction has reached,
* ``search_bdp`` - the bidirectional variant with one worker thread per
  direction.

All three return runs of identical length on the same tree; the run itself
is always valid on the forward tree. ``expanded_states`` counts distinct
states popped and expanded (summed over directions for BD/BDP), the
memory metric of the benchmark harness.
"""

from __future__ import annotations

import heapq
import threading
import time
from dataclasses import dataclass
from math import inf
from typing import Callable, Optional

from .statespace import (
    Run,
    Transition,
    TreeState,
    VertexState,
    _materialize_step,
    _succ_edges,
    _tables,
    final_state,
    initial_state,
    invert_run,
    invert_state,
    replay_run,
)
from .tree import ProcessTree, invert

DEFAULT_STATE_CAP = 10**6


class SearchLimitExceeded(RuntimeError):
    """Search aborted before completion: state cap or timeout hit."""

    def __init__(self, reason: str, expanded: int):
        super().__init__(reason)
        self.reason = reason
        self.expanded = expanded


class MeetMismatchError(ValueError):
    """Backward partial result does not end at the forward meet's inverse."""


@dataclass
class SearchOutcome:
    """Result of one strategy run.

    ``run`` replays the forward tree from all-Future to all-Closed;
    ``run_length`` is its transition count; ``expanded_states`` counts
    distinct expanded states; ``wall_time`` is seconds on a monotonic clock.
    """

    run: Run
    run_length: int
    expanded_states: int
    wall_time: float


class _Deadline:
    __slots__ = ("at",)

    def __init__(self, timeout: Optional[float]):
        self.at = None if timeout is None else time.monotonic() + timeout

    def expired(self) -> bool:
        return self.at is not None and time.monotonic() > self.at


class _Direction:
    """One search direction: frontier heap, tentative distances, parents.

    The explored map (``dist``/``parent``) is keyed by canonical packed
    state encodings. Heap ties break on insertion order, which makes the
    single-threaded searches fully deterministic.
    """

    __slots__ = ("t", "dist", "parent", "heap", "settled", "pushes")

    def __init__(self, tables, start_key: int):
        self.t = tables
        self.dist: dict[int, int] = {start_key: 0}
        self.parent: dict[int, Optional[tuple[int, int, int, int]]] = {start_key: None}
        self.heap: list[tuple[int, int, int]] = [(0, 0, start_key)]
        self.settled: set[int] = set()
        self.pushes = 1

    def peek(self) -> float:
        heap, settled = self.heap, self.settled
        while heap and heap[0][2] in settled:
            heapq.heappop(heap)
        return heap[0][0] if heap else inf

    def settle_next(self) -> Optional[tuple[int, int, list[int]]]:
        """Pop and expand the next unsettled entry.

        Returns ``(key, dist, relaxed)`` where ``relaxed`` lists the states
        whose tentative distance this expansion created or improved.
        """
        heap, settled = self.heap, self.settled
        while heap:
            d, _, key = heapq.heappop(heap)
            if key in settled:
                continue
            settled.add(key)
            return key, d, self._relax(key, d)
        return None

    def _relax(self, key: int, d: int) -> list[int]:
        dist, parent, heap = self.dist, self.parent, self.heap
        relaxed: list[int] = []
        for new_key, weight, v, src, tgt in _succ_edges(self.t, key):
            nd = d + weight
            old = dist.get(new_key)
            if old is None or nd < old:
                dist[new_key] = nd
                parent[new_key] = (key, v, src, tgt)
                heapq.heappush(heap, (nd, self.pushes, new_key))
                self.pushes += 1
                relaxed.append(new_key)
        return relaxed

    def reconstruct(self, end_key: int) -> Run:
        """Materialize the stored shortest path to ``end_key`` as a run."""
        steps: list[tuple[int, int, int, int]] = []
        key = end_key
        while True:
            entry = self.parent[key]
            if entry is None:
                break
            prev, v, src, tgt = entry
            steps.append((prev, v, src, tgt))
            key = prev
        run: list[Transition] = []
        for prev, v, src, tgt in reversed(steps):
            frag, _ = _materialize_step(self.t, prev, v, src, tgt)
            run.extend(frag)
        return tuple(run)


def _validated(tree: ProcessTree, run: Run) -> Run:
    """Replay-check a result run from all-Future to all-Closed."""
    end = replay_run(tree, run)
    if end != final_state(tree):
        raise RuntimeError("search produced a run that does not reach the final state")
    return run


def search_ud(
    tree: ProcessTree,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    timeout: Optional[float] = None,
) -> SearchOutcome:
    """Unidirectional uniform-cost search from all-Future to all-Closed."""
    start = time.perf_counter()
    t = _tables(tree)
    goal = t.two_all
    deadline = _Deadline(timeout)
    direction = _Direction(t, 0)
    while True:
        item = direction.settle_next()
        if item is None:
            raise RuntimeError("state space exhausted without reaching the final state")
        key = item[0]
        if key == goal:
            break
        expanded = len(direction.settled)
        if expanded >= state_cap:
            raise SearchLimitExceeded(f"state cap {state_cap} exceeded", expanded)
        if expanded % 1024 == 0 and deadline.expired():
            raise SearchLimitExceeded("timeout exceeded", expanded)
    run = _validated(tree, direction.reconstruct(goal))
    return SearchOutcome(
        run=run,
        run_length=len(run),
        expanded_states=len(direction.settled),
        wall_time=time.perf_counter() - start,
    )


class _Meet:
    """Best known combined length and the meet state (forward coordinates)."""

    __slots__ = ("mu", "meet_fwd")

    def __init__(self):
        self.mu = inf
        self.meet_fwd: Optional[int] = None

    def offer(self, cand: float, meet_fwd: int) -> None:
        if cand < self.mu:
            self.mu = cand
            self.meet_fwd = meet_fwd


class _BiSearch:
    """Shared machinery of BD and BDP.

    Direction 0 searches the tree, direction 1 its inverse, both from their
    all-Future states. A state settled in one direction is probed against
    the opposite explored map through the state inverse (key -> TWO_ALL -
    key); so is every newly relaxed state, which tightens the best combined
    length mu early. The search is exact: it stops only once the two
    frontiers' minimum keys sum to at least mu.
    """

    def __init__(self, tree: ProcessTree):
        self.tree = tree
        self.tables = _tables(tree)
        self.two_all = self.tables.two_all
        self.dirs = (
            _Direction(self.tables, 0),
            _Direction(_tables(invert(tree)), 0),
        )
        self.meet = _Meet()

    def expanded(self) -> int:
        return len(self.dirs[0].settled) + len(self.dirs[1].settled)

    def probe_settle(self, side: int, key: int, d: int) -> None:
        other = self.dirs[1 - side]
        od = other.dist.get(self.two_all - key)
        if od is not None:
            self._offer(side, key, d + od)

    def probe_relaxed(self, side: int, key: int) -> None:
        own_d = self.dirs[side].dist[key]
        od = self.dirs[1 - side].dist.get(self.two_all - key)
        if od is not None:
            self._offer(side, key, own_d + od)

    def _offer(self, side: int, key: int, cand: float) -> None:
        self.meet.offer(cand, key if side == 0 else self.two_all - key)

    def expand_layer(self, side: int, lock: Optional[threading.Lock] = None) -> None:
        """Settle every frontier entry at the current minimum distance.

        Edge weights are positive, so no expansion re-feeds the current
        level and the loop terminates once the level is drained. Under a
        lock (the BDP case) each settle step - explored-map insertions plus
        the probes of the opposite map - is one atomic unit, so a missed
        probe on one side guarantees a hit on the other.
        """
        direction = self.dirs[side]
        level = direction.peek()
        if level == inf:
            return
        while direction.peek() == level:
            if lock is None:
                self._settle_and_probe(side)
            else:
                with lock:
                    self._settle_and_probe(side)

    def _settle_and_probe(self, side: int) -> None:
        item = self.dirs[side].settle_next()
        if item is None:
            return
        key, d, relaxed = item
        self.probe_settle(side, key, d)
        for new_key in relaxed:
            self.probe_relaxed(side, new_key)

    def result_run(self) -> Run:
        meet_fwd = self.meet.meet_fwd
        if meet_fwd is None:
            raise RuntimeError("bidirectional search finished without a meet")
        forward = self.dirs[0].reconstruct(meet_fwd)
        backward = self.dirs[1].reconstruct(self.two_all - meet_fwd)
        return combine_direct(self.tree, forward, backward)


def combine_direct(tree: ProcessTree, forward_run: Run, backward_run: Run) -> Run:
    """Join partial results at a direct match.

    ``forward_run`` must replay the tree from all-Future to some state s and
    ``backward_run`` the inverse tree from all-Future to s's inverse; the
    concatenation of the forward run with the inverted-reversed backward run
    then replays the tree from all-Future to all-Closed.
    """
    s = replay_run(tree, forward_run)
    inverse_tree = invert(tree)
    s_back = replay_run(inverse_tree, backward_run)
    if s_back != invert_state(s):
        raise MeetMismatchError(
            f"backward run ends at {s_back.text()}, expected {invert_state(s).text()}"
        )
    combined = forward_run + invert_run(backward_run)
    return _validated(tree, combined)


def search_bd(
    tree: ProcessTree,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    timeout: Optional[float] = None,
) -> SearchOutcome:
    """Alternating bidirectional search with direct matching.

    Layers (distance levels) expand alternately, forward first; the search
    stops when the frontiers' minimum keys sum to at least the best known
    combined length, which preserves shortest-run optimality.
    """
    start = time.perf_counter()
    bi = _BiSearch(tree)
    deadline = _Deadline(timeout)
    first = 0 if len(bi.dirs[0].heap) <= len(bi.dirs[1].heap) else 1
    turn = 0
    while True:
        d0, d1 = bi.dirs[0].peek(), bi.dirs[1].peek()
        if bi.meet.mu <= d0 + d1:
            break
        side = (first + turn) & 1
        if bi.dirs[side].peek() == inf:
            side = 1 - side
        bi.expand_layer(side)
        turn += 1
        expanded = bi.expanded()
        if expanded >= state_cap:
            raise SearchLimitExceeded(f"state cap {state_cap} exceeded", expanded)
        if deadline.expired():
            raise SearchLimitExceeded("timeout exceeded", expanded)
    run = bi.result_run()
    return SearchOutcome(
        run=run,
        run_length=len(run),
        expanded_states=bi.expanded(),
        wall_time=time.perf_counter() - start,
    )


def search_bdp(
    tree: ProcessTree,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    timeout: Optional[float] = None,
) -> SearchOutcome:
    """Bidirectional search with one worker thread per direction.

    Each worker owns its frontier and explored map; probes of the opposite
    map and updates of the shared best combined length happen under a lock,
    so a probe observes every entry inserted before its own state's
    insertion. Run length is identical to ``search_bd``'s regardless of
    thread interleaving; expanded-state counts may vary between runs.
    """
    start = time.perf_counter()
    bi = _BiSearch(tree)
    deadline = _Deadline(timeout)
    lock = threading.Lock()
    minkeys = [0.0, 0.0]
    stop = threading.Event()
    errors: list[BaseException] = []

    def worker(side: int) -> None:
        direction = bi.dirs[side]
        try:
            while not stop.is_set():
                level = direction.peek()
                with lock:
                    minkeys[side] = level
                    if bi.meet.mu <= minkeys[0] + minkeys[1]:
                        stop.set()
                        return
                    expanded = bi.expanded()
                if expanded >= state_cap:
                    raise SearchLimitExceeded(
                        f"state cap {state_cap} exceeded", expanded
                    )
                if deadline.expired():
                    raise SearchLimitExceeded("timeout exceeded", expanded)
                if level == inf:
                    # exhausted; wait for the other direction to finish
                    time.sleep(0.0005)
                    continue
                bi.expand_layer(side, lock)
        except BaseException as exc:  # propagate to the caller
            with lock:
                errors.append(exc)
            stop.set()

    threads = [threading.Thread(target=worker, args=(side,)) for side in (0, 1)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    if errors:
        raise errors[0]
    run = bi.result_run()
    return SearchOutcome(
        run=run,
        run_length=len(run),
        expanded_states=bi.expanded(),
        wall_time=time.perf_counter() - start,
    )


_STRATEGIES: dict[str, Callable[..., SearchOutcome]] = {
    "ud": search_ud,
    "bd": search_bd,
    "bdp": search_bdp,
}


def search(
    tree: ProcessTree,
    strategy: str,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    timeout: Optional[float] = None,
) -> SearchOutcome:
    """Dispatch by strategy name: ``ud``, ``bd``, or ``bdp``."""
    try:
        fn = _STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    return fn(tree, state_cap=state_cap, timeout=timeout)
