"""Future/Open/Closed state semantics for process trees.

Implements the full legal-transition relation, state/transition/run
inversion, the reduced successor relation used by the searches (meaningful
dictation plus fast-forwarding), and reachable-state-graph construction.

States are packed two bits per vertex (Future=0, Open=1, Closed=2) into a
single integer, which doubles as the canonical explored-set key. With that
encoding the pointwise state inverse (F<->C, O fixed) is ``TWO_ALL - key``
and subtree-uniformity checks are mask comparisons.

Vertex-state moves allowed by the model: F->O, O->C, F->C, C->F. C->O and
O->F never occur. For a non-root vertex, F->C and C->F are legal whenever
the parent is Future or Closed (the alternation moves), or when the parent
is Open and the operator-specific condition holds: under an exclusive
choice, F->C needs some Open sibling; under a loop, the redo child may F->C
while the do child is Open, the do child may C->F while the redo child is
Open, and the redo child may C->F while the do child is not Open. F->O
(O->C) additionally requires all descendant subtrees uniformly Future
(Closed) and the parent-operator ordering condition over sibling subtree
vectors. The root opens and closes freely apart from the descendant
condition but never skips or resets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional

from .tree import Operator, ProcessTree


class VertexState(IntEnum):
    FUTURE = 0
    OPEN = 1
    CLOSED = 2

    @property
    def letter(self) -> str:
        return "FOC"[self]

    @property
    def inverse(self) -> "VertexState":
        return VertexState(2 - self)


FUTURE = VertexState.FUTURE
OPEN = VertexState.OPEN
CLOSED = VertexState.CLOSED

_LETTER_STATE = {"F": FUTURE, "O": OPEN, "C": CLOSED}

#: The four feasible vertex-state moves; C->O and O->F do not exist.
ALLOWED_MOVES = frozenset(
    {(FUTURE, OPEN), (OPEN, CLOSED), (FUTURE, CLOSED), (CLOSED, FUTURE)}
)


class UnknownVertexError(ValueError):
    """A transition names a vertex outside the tree."""


class IllegalTransitionError(ValueError):
    """A transition was applied in a state where it is not legal."""


class StateCapExceeded(RuntimeError):
    """Reachable-graph exploration hit the state cap; carries the partial graph."""

    def __init__(self, partial_graph: "StateGraph"):
        super().__init__(
            f"state cap exceeded after {len(partial_graph.states)} states"
        )
        self.partial_graph = partial_graph


class Transition(NamedTuple):
    """A single vertex-state change ``v[source -> target]``."""

    vertex: int
    source: VertexState
    target: VertexState

    def text(self) -> str:
        return f"v{self.vertex} {self.source.letter}->{self.target.letter}"


#: A run is a sequence of transitions, replayable from its start state.
Run = tuple[Transition, ...]


def parse_transition(text: str) -> Transition:
    """Parse the ``v7 F->O`` serialization form."""
    try:
        head, move = text.split()
        src, tgt = move.split("->")
        if not head.startswith("v"):
            raise ValueError
        return Transition(int(head[1:]), _LETTER_STATE[src], _LETTER_STATE[tgt])
    except (ValueError, KeyError):
        raise ValueError(f"malformed transition text {text!r}") from None


def format_run(run: Run) -> str:
    """One transition per line, ``v7 F->O`` form."""
    return "\n".join(t.text() for t in run)


def parse_run(text: str) -> Run:
    return tuple(parse_transition(line) for line in text.splitlines() if line.strip())


def _ones_mask(size: int) -> int:
    # 0b...010101 with one low bit per 2-bit vertex slot
    return (4**size - 1) // 3


class TreeState:
    """Total vertex-state assignment, packed two bits per vertex.

    Value semantics: equal assignments compare and hash equal, so instances
    serve directly as explored-set keys. ``key`` is the canonical encoding.
    """

    __slots__ = ("key", "size")

    def __init__(self, key: int, size: int):
        self.key = key
        self.size = size

    @classmethod
    def from_states(cls, states: Iterable[VertexState | int]) -> "TreeState":
        key = 0
        size = 0
        for st in states:
            key |= int(st) << (2 * size)
            size += 1
        return cls(key, size)

    @classmethod
    def from_text(cls, text: str) -> "TreeState":
        """Parse the debug form, a string over ``{F, O, C}`` in index order."""
        try:
            return cls.from_states(_LETTER_STATE[ch] for ch in text)
        except KeyError:
            raise ValueError(f"malformed state text {text!r}") from None

    def __getitem__(self, v: int) -> VertexState:
        if not 0 <= v < self.size:
            raise UnknownVertexError(f"vertex {v} outside state of size {self.size}")
        return VertexState((self.key >> (2 * v)) & 3)

    def __len__(self) -> int:
        return self.size

    def __iter__(self):
        key = self.key
        for _ in range(self.size):
            yield VertexState(key & 3)
            key >>= 2

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TreeState)
            and self.key == other.key
            and self.size == other.size
        )

    def __hash__(self) -> int:
        return hash((self.key, self.size))

    def text(self) -> str:
        """Debug form: a string over ``{F, O, C}`` in index order."""
        return "".join(st.letter for st in self)

    def to_tuple(self) -> tuple[VertexState, ...]:
        return tuple(self)

    def invert(self) -> "TreeState":
        """Pointwise F->C, O->O, C->F."""
        return TreeState(2 * _ones_mask(self.size) - self.key, self.size)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"TreeState({self.text()!r})"


# -- per-tree lookup tables ---------------------------------------------------

_SEQ, _RSEQ, _XOR, _PAR, _LOOP = range(5)
_LEAF = -1
_NO_PARENT = -1

_OPCODE = {
    Operator.SEQUENCE: _SEQ,
    Operator.REVERSE_SEQUENCE: _RSEQ,
    Operator.CHOICE: _XOR,
    Operator.PARALLEL: _PAR,
    Operator.LOOP: _LOOP,
}


class _Tables:
    """Precomputed masks and index lists driving the legality checks."""

    __slots__ = (
        "n", "ones_all", "two_all", "op", "parent", "parent_op", "kids",
        "desc_ids", "sub_count", "sub3", "sub2", "desc3", "desc2",
        "lsib3", "lsib2", "rsib3", "rsib2", "sib3", "sib2",
        "sib_vones", "lsib_vones", "rsib_vones",
        "is_do", "is_redo", "dictatable", "leaf_label",
    )


@lru_cache(maxsize=None)
def _tables(tree: ProcessTree) -> _Tables:
    n = tree.size
    t = _Tables()
    t.n = n
    t.ones_all = _ones_mask(n)
    t.two_all = 2 * t.ones_all
    t.op = [_OPCODE[l] if isinstance(l, Operator) else _LEAF for l in tree.labels]
    t.parent = [p if p is not None else _NO_PARENT for p in tree.parents]
    t.parent_op = [t.op[p] if p != _NO_PARENT else _NO_PARENT for p in t.parent]
    t.kids = tree.children
    t.leaf_label = [tree.activity(v) for v in range(n)]

    sub_ones = [0] * n
    desc_ids: list[tuple[int, ...]] = [()] * n
    for v in range(n - 1, -1, -1):
        acc = 1 << (2 * v)
        ids: list[int] = []
        for c in tree.children[v]:
            acc |= sub_ones[c]
            ids.append(c)
            ids.extend(desc_ids[c])
        sub_ones[v] = acc
        desc_ids[v] = tuple(sorted(ids))
    t.desc_ids = desc_ids
    t.sub_count = [1 + len(desc_ids[v]) for v in range(n)]
    t.sub3 = [3 * m for m in sub_ones]
    t.sub2 = [2 * m for m in sub_ones]
    desc_ones = [sub_ones[v] ^ (1 << (2 * v)) for v in range(n)]
    t.desc3 = [3 * m for m in desc_ones]
    t.desc2 = [2 * m for m in desc_ones]

    lsib_m = [0] * n
    rsib_m = [0] * n
    sib_v = [0] * n
    lsib_v = [0] * n
    rsib_v = [0] * n
    for p in range(n):
        kids = tree.children[p]
        for i, v in enumerate(kids):
            for u in kids[:i]:
                lsib_m[v] |= sub_ones[u]
                lsib_v[v] |= 1 << (2 * u)
            for u in kids[i + 1 :]:
                rsib_m[v] |= sub_ones[u]
                rsib_v[v] |= 1 << (2 * u)
            sib_v[v] = lsib_v[v] | rsib_v[v]
    t.lsib3 = [3 * m for m in lsib_m]
    t.lsib2 = [2 * m for m in lsib_m]
    t.rsib3 = [3 * m for m in rsib_m]
    t.rsib2 = [2 * m for m in rsib_m]
    t.sib3 = [3 * (lm | rm) for lm, rm in zip(lsib_m, rsib_m)]
    t.sib2 = [2 * (lm | rm) for lm, rm in zip(lsib_m, rsib_m)]
    t.sib_vones = sib_v
    t.lsib_vones = lsib_v
    t.rsib_vones = rsib_v

    t.is_do = [
        t.parent_op[v] == _LOOP and rsib_m[v] != 0 for v in range(n)
    ]
    t.is_redo = [
        t.parent_op[v] == _LOOP and lsib_m[v] != 0 for v in range(n)
    ]
    t.dictatable = tuple(
        v for v in range(n) if t.parent_op[v] in (_XOR, _LOOP)
    )
    return t


# -- legality of single transitions ------------------------------------------


def _b_open(t: _Tables, skey: int, v: int) -> bool:
    pop = t.parent_op[v]
    if pop == _NO_PARENT or pop == _PAR:
        return True
    if pop == _SEQ:
        return (skey & t.lsib3[v]) == t.lsib2[v] and (skey & t.rsib3[v]) == 0
    if pop == _RSEQ:
        return (skey & t.lsib3[v]) == 0 and (skey & t.rsib3[v]) == t.rsib2[v]
    if pop == _XOR:
        return (skey & t.sib3[v]) == 0
    if t.is_do[v]:
        return (skey & t.rsib3[v]) == 0
    return (skey & t.lsib3[v]) == t.lsib2[v]


def _b_close(t: _Tables, skey: int, v: int) -> bool:
    pop = t.parent_op[v]
    if pop == _NO_PARENT or pop == _PAR:
        return True
    if pop == _SEQ:
        return (skey & t.lsib3[v]) == t.lsib2[v] and (skey & t.rsib3[v]) == 0
    if pop == _RSEQ:
        return (skey & t.lsib3[v]) == 0 and (skey & t.rsib3[v]) == t.rsib2[v]
    if pop == _XOR:
        return (skey & t.sib3[v]) == t.sib2[v]
    if t.is_do[v]:
        return (skey & t.rsib3[v]) == t.rsib2[v]
    return (skey & t.lsib3[v]) == 0


def _open_vertices(skey: int, mask_ones: int) -> int:
    # bit set per vertex slot (low bit position) that is Open
    return (skey & mask_ones) & ~(skey >> 1)


def _b_skip(t: _Tables, skey: int, v: int) -> bool:
    # F->C with an Open parent
    pop = t.parent_op[v]
    if pop == _XOR:
        return _open_vertices(skey, t.sib_vones[v]) != 0
    if pop == _LOOP and t.is_redo[v]:
        return _open_vertices(skey, t.lsib_vones[v]) == t.lsib_vones[v]
    return False


def _b_reset(t: _Tables, skey: int, v: int) -> bool:
    # C->F with an Open parent
    if t.is_do[v]:
        return _open_vertices(skey, t.rsib_vones[v]) == t.rsib_vones[v]
    if t.is_redo[v]:
        return _open_vertices(skey, t.lsib_vones[v]) == 0
    return False


def _legal_fo(t: _Tables, skey: int, v: int) -> bool:
    p = t.parent[v]
    if p != _NO_PARENT and (skey >> (2 * p)) & 3 != OPEN:
        return False
    return (skey & t.desc3[v]) == 0 and _b_open(t, skey, v)


def _legal_oc(t: _Tables, skey: int, v: int) -> bool:
    p = t.parent[v]
    if p != _NO_PARENT and (skey >> (2 * p)) & 3 != OPEN:
        return False
    return (skey & t.desc3[v]) == t.desc2[v] and _b_close(t, skey, v)


def _legal_fc(t: _Tables, skey: int, v: int) -> bool:
    p = t.parent[v]
    if p == _NO_PARENT:
        return False
    pst = (skey >> (2 * p)) & 3
    if pst != OPEN:
        return True  # parent Future or Closed: alternation move
    return _b_skip(t, skey, v)


def _legal_cf(t: _Tables, skey: int, v: int) -> bool:
    p = t.parent[v]
    if p == _NO_PARENT:
        return False
    pst = (skey >> (2 * p)) & 3
    if pst != OPEN:
        return True
    return _b_reset(t, skey, v)


_LEGAL_BY_MOVE = {
    (FUTURE, OPEN): _legal_fo,
    (OPEN, CLOSED): _legal_oc,
    (FUTURE, CLOSED): _legal_fc,
    (CLOSED, FUTURE): _legal_cf,
}


def initial_state(tree: ProcessTree) -> TreeState:
    """The all-Future state."""
    return TreeState(0, tree.size)


def final_state(tree: ProcessTree) -> TreeState:
    """The all-Closed state."""
    t = _tables(tree)
    return TreeState(t.two_all, t.n)


def _check_state(t: _Tables, state: TreeState) -> None:
    if state.size != t.n:
        raise ValueError(f"state covers {state.size} vertices, tree has {t.n}")


def is_legal(tree: ProcessTree, state: TreeState, transition: Transition) -> bool:
    """Whether ``transition`` is legal in ``state`` under the full relation."""
    t = _tables(tree)
    _check_state(t, state)
    v, src, tgt = transition
    if not 0 <= v < t.n:
        raise UnknownVertexError(f"vertex {v} outside tree of size {t.n}")
    move = (src, tgt)
    if move not in _LEGAL_BY_MOVE:
        return False
    if (state.key >> (2 * v)) & 3 != src:
        return False
    return _LEGAL_BY_MOVE[move](t, state.key, v)


def _explain_illegal(tree: ProcessTree, state: TreeState, transition: Transition) -> str:
    t = _tables(tree)
    v, src, tgt = transition
    move = (src, tgt)
    if move not in _LEGAL_BY_MOVE:
        return (
            f"move {src.letter}->{tgt.letter} does not exist in the vertex-state "
            "model (allowed: F->O, O->C, F->C, C->F)"
        )
    actual = state[v]
    if actual != src:
        return f"vertex {v} is {actual.letter}, transition expects {src.letter}"
    p = t.parent[v]
    if move in ((FUTURE, OPEN), (OPEN, CLOSED)):
        if p != _NO_PARENT and state[p] != OPEN:
            return f"parent of vertex {v} must be Open, is {state[p].letter}"
        wanted = "Future" if move == (FUTURE, OPEN) else "Closed"
        region_ok = (
            (state.key & t.desc3[v]) == 0
            if move == (FUTURE, OPEN)
            else (state.key & t.desc3[v]) == t.desc2[v]
        )
        if not region_ok:
            return f"all descendant subtrees of vertex {v} must be uniformly {wanted}"
        return (
            f"operator condition of the parent fails for vertex {v}: sibling "
            "subtrees do not have the required uniform states"
        )
    if p == _NO_PARENT:
        return "the root has no parent; F->C and C->F are only defined through one"
    return (
        f"with an Open parent, {src.letter}->{tgt.letter} on vertex {v} needs the "
        "operator trigger (Open sibling under X, or the loop-phase condition)"
    )


def apply(tree: ProcessTree, state: TreeState, transition: Transition) -> TreeState:
    """Execute a legal transition, returning the new state (input untouched)."""
    if not is_legal(tree, state, transition):
        raise IllegalTransitionError(
            f"{transition.text()}: {_explain_illegal(tree, state, transition)}"
        )
    v, src, tgt = transition
    return TreeState(state.key + ((tgt - src) << (2 * v)), state.size)


def _legal_moves(t: _Tables, skey: int):
    """Yield (vertex, src, tgt, new_key) over the full relation, ascending."""
    for v in range(t.n):
        st = (skey >> (2 * v)) & 3
        if st == 0:
            if _legal_fo(t, skey, v):
                yield v, 0, 1, skey + (1 << (2 * v))
            if _legal_fc(t, skey, v):
                yield v, 0, 2, skey + (2 << (2 * v))
        elif st == 1:
            if _legal_oc(t, skey, v):
                yield v, 1, 2, skey + (1 << (2 * v))
        else:
            if _legal_cf(t, skey, v):
                yield v, 2, 0, skey - (2 << (2 * v))


def legal_transitions(tree: ProcessTree, state: TreeState) -> list[Transition]:
    """All legal transitions in ``state``, ascending ``(vertex, move)`` order."""
    t = _tables(tree)
    _check_state(t, state)
    return [
        Transition(v, VertexState(src), VertexState(tgt))
        for v, src, tgt, _ in _legal_moves(t, state.key)
    ]


def successors(tree: ProcessTree, state: TreeState) -> list[tuple[Transition, TreeState]]:
    """Unreduced successor states, one per legal transition."""
    t = _tables(tree)
    _check_state(t, state)
    return [
        (Transition(v, VertexState(src), VertexState(tgt)), TreeState(nk, t.n))
        for v, src, tgt, nk in _legal_moves(t, state.key)
    ]


# -- inversion ----------------------------------------------------------------


def invert_state(state: TreeState) -> TreeState:
    """Pointwise F->C, O->O, C->F; an involution."""
    return state.invert()


def invert_transition(transition: Transition) -> Transition:
    """``(v, x, y)`` becomes ``(v, y^-1, x^-1)``: F->O and O->C swap, F->C
    and C->F are self-inverse."""
    v, src, tgt = transition
    return Transition(v, tgt.inverse, src.inverse)


def invert_run(run: Run) -> Run:
    """The reversed run with every transition inverted (sigma-dagger)."""
    return tuple(invert_transition(t) for t in reversed(run))


def replay_run(
    tree: ProcessTree, run: Run, start: Optional[TreeState] = None
) -> TreeState:
    """Replay a run, validating each step; returns the resulting state.

    Raises :class:`IllegalTransitionError` on the first non-replayable step.
    """
    state = initial_state(tree) if start is None else start
    for transition in run:
        state = apply(tree, state, transition)
    return state


# -- reduction: dictation and fast-forwarding ---------------------------------


def dictated_transitions(tree: ProcessTree, state: TreeState) -> list[Transition]:
    """Forced F->C / C->F moves: closes of a Future child under an Open
    exclusive choice with an Open sibling, closes of the redo child while
    the do child is Open, and resets of the do child while the redo child
    is Open. Every completion of the current state must take these moves;
    the loop redo-child reopen, a genuine choice, is not among them."""
    t = _tables(tree)
    _check_state(t, state)
    skey = state.key
    out: list[Transition] = []
    for v in t.dictatable:
        p = t.parent[v]
        if (skey >> (2 * p)) & 3 != OPEN:
            continue
        st = (skey >> (2 * v)) & 3
        if st == 0:
            if _b_skip(t, skey, v):
                out.append(Transition(v, FUTURE, CLOSED))
        elif st == 2:
            if t.is_do[v] and _open_vertices(skey, t.rsib_vones[v]) == t.rsib_vones[v]:
                out.append(Transition(v, CLOSED, FUTURE))
    return out


def fast_forward(
    tree: ProcessTree, state: TreeState, vertex: int
) -> tuple[Run, TreeState]:
    """Propagate a just-applied close (reset) of ``vertex`` through its
    descendants, in ascending index order, before any other state change.

    ``state`` must already hold the vertex's new state (Closed or Future);
    the returned fragment contains only the descendant transitions. The
    resulting subtree is uniformly Closed (Future respectively).
    """
    t = _tables(tree)
    _check_state(t, state)
    if not 0 <= vertex < t.n:
        raise UnknownVertexError(f"vertex {vertex} outside tree of size {t.n}")
    st = state[vertex]
    if st == OPEN:
        raise ValueError("fast-forward requires the vertex to be Closed or Future")
    src, tgt = (FUTURE, CLOSED) if st == CLOSED else (CLOSED, FUTURE)
    skey = state.key
    trans: list[Transition] = []
    for u in t.desc_ids[vertex]:
        su = (skey >> (2 * u)) & 3
        if su == tgt:
            continue
        if su == OPEN:
            raise ValueError(f"cannot fast-forward past Open descendant {u}")
        trans.append(Transition(u, src, tgt))
    if tgt == CLOSED:
        new_key = (skey & ~t.desc3[vertex]) | t.desc2[vertex]
    else:
        new_key = skey & ~t.desc3[vertex]
    return tuple(trans), TreeState(new_key, t.n)


def _materialize_step(
    t: _Tables, skey: int, v: int, src: int, tgt: int
) -> tuple[Run, int]:
    """Expand a successor trigger into its full fragment and new key."""
    head = Transition(v, VertexState(src), VertexState(tgt))
    if tgt == 1 or src == 1:  # F->O or O->C: single transition
        return (head,), skey + (1 << (2 * v))
    trans = [head]
    for u in t.desc_ids[v]:
        su = (skey >> (2 * u)) & 3
        if su == src:
            trans.append(Transition(u, VertexState(src), VertexState(tgt)))
        elif su == 1:
            raise ValueError(f"cannot fast-forward past Open descendant {u}")
    if tgt == 2:
        new_key = (skey & ~t.sub3[v]) | t.sub2[v]
    else:
        new_key = skey & ~t.sub3[v]
    return tuple(trans), new_key


def _succ_triggers(t: _Tables, skey: int) -> list[tuple[int, int, int]]:
    """Reduced successor triggers ``(vertex, src, tgt)`` from a state key.

    The reduced relation keeps every legal move except the alternation
    moves (F->C / C->F through a Future or Closed parent): legal opens and
    closes as single transitions, and the Open-parent skips and resets -
    the dictated closes, the dictated do-child reset, and the loop
    redo-child reopen - which fast-forward through their subtree. Emitting
    the Open-parent moves alongside the others (rather than letting
    dictated moves preempt) keeps the relation symmetric under state
    inversion, which the graph-isomorphism guarantee needs.
    """
    out: list[tuple[int, int, int]] = []
    for v in range(t.n):
        st = (skey >> (2 * v)) & 3
        if st == 0:
            if _legal_fo(t, skey, v):
                out.append((v, 0, 1))
            p = t.parent[v]
            if (
                p != _NO_PARENT
                and (skey >> (2 * p)) & 3 == 1
                and _b_skip(t, skey, v)
            ):
                out.append((v, 0, 2))
        elif st == 1:
            if _legal_oc(t, skey, v):
                out.append((v, 1, 2))
        else:
            p = t.parent[v]
            if (
                p != _NO_PARENT
                and (skey >> (2 * p)) & 3 == 1
                and _b_reset(t, skey, v)
            ):
                out.append((v, 2, 0))
    return out


def _succ_edges(t: _Tables, skey: int) -> list[tuple[int, int, int, int, int]]:
    """Reduced successor edges ``(new_key, weight, v, src, tgt)``.

    Weight is the fragment's transition count. Only valid on reduction-pure
    states (every non-Open subtree uniform), which is an invariant of
    everything reachable from the all-Future state.
    """
    out = []
    for v, src, tgt in _succ_triggers(t, skey):
        if tgt == 1 or src == 1:
            out.append((skey + (1 << (2 * v)), 1, v, src, tgt))
        elif tgt == 2:
            out.append(((skey & ~t.sub3[v]) | t.sub2[v], t.sub_count[v], v, src, tgt))
        else:
            out.append((skey & ~t.sub3[v], t.sub_count[v], v, src, tgt))
    return out


def reduced_successors(
    tree: ProcessTree, state: TreeState
) -> list[tuple[Run, TreeState]]:
    """Successor fragments under the reduced relation used by all searches.

    Legal F->O / O->C moves become one-transition fragments; F->C / C->F
    moves appear only through an Open parent (dictated closes and resets,
    plus the loop redo-child reopen) and are fast-forwarded through the
    whole subtree atomically, so no reachable reduced state mixes Future
    and Closed inside a subtree.
    """
    t = _tables(tree)
    _check_state(t, state)
    out = []
    for v, src, tgt in _succ_triggers(t, state.key):
        frag, new_key = _materialize_step(t, state.key, v, src, tgt)
        out.append((frag, TreeState(new_key, t.n)))
    return out


# -- reachable state-space graph -----------------------------------------------


@dataclass
class StateGraph:
    """Reachable reduced states in deterministic BFS order, with fragment
    edges. ``states[0]`` is the start state."""

    states: list[TreeState]
    edges: list[tuple[int, int, Run]]

    def state_index(self) -> dict[TreeState, int]:
        return {s: i for i, s in enumerate(self.states)}

    def edge_pairs(self) -> set[tuple[TreeState, TreeState]]:
        return {(self.states[a], self.states[b]) for a, b, _ in self.edges}


def reachable_graph(
    tree: ProcessTree, start_state: TreeState, state_cap: int = 100_000
) -> StateGraph:
    """BFS over reduced successors from ``start_state``.

    Raises :class:`StateCapExceeded` carrying the partial graph when more
    than ``state_cap`` states are discovered.
    """
    if state_cap <= 0:
        raise ValueError("state_cap must be positive")
    t = _tables(tree)
    _check_state(t, start_state)
    start = start_state.key
    index: dict[int, int] = {start: 0}
    keys = [start]
    edges: list[tuple[int, int, Run]] = []
    queue: deque[int] = deque([start])
    while queue:
        skey = queue.popleft()
        src_idx = index[skey]
        for v, src, tgt in _succ_triggers(t, skey):
            frag, new_key = _materialize_step(t, skey, v, src, tgt)
            dst_idx = index.get(new_key)
            if dst_idx is None:
                if len(keys) >= state_cap:
                    raise StateCapExceeded(
                        StateGraph([TreeState(k, t.n) for k in keys], edges)
                    )
                dst_idx = len(keys)
                index[new_key] = dst_idx
                keys.append(new_key)
                queue.append(new_key)
            edges.append((src_idx, dst_idx, frag))
    return StateGraph([TreeState(k, t.n) for k in keys], edges)
