"""Process-tree data model: short-hand grammar, breadth-first indexing,
structural queries, validation, and tree inversion.

A process tree is a rooted ordered tree whose internal vertices carry
control-flow operators and whose leaves carry activity names or the silent
skip ``tau``. Vertices are densely indexed in breadth-first order (the root
is 0, a parent's index is smaller than each child's, siblings are numbered
left to right); that indexing is fixed at construction time and used
everywhere else in the package.

Short-hand grammar (whitespace insignificant)::

    tree := op '(' tree (',' tree)* ')' | leaf
    op   := '->' | '<-' | 'X' | '+' | '*'
    leaf := 'tau' | identifier            # identifier =/= 'tau'

``.ptt`` fixture files hold one tree per line; ``#`` starts a comment line.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Union


class Operator(Enum):
    """Control-flow operators allowed on internal vertices."""

    SEQUENCE = "->"
    REVERSE_SEQUENCE = "<-"
    CHOICE = "X"
    PARALLEL = "+"
    LOOP = "*"


#: Reserved token for the silent leaf.
TAU_TOKEN = "tau"

#: Vertex label: an :class:`Operator` on internal vertices, an activity name
#: on activity leaves, ``None`` on silent (tau) leaves.
Label = Union[Operator, str, None]

#: Nested build form: ``(label, (child, child, ...))``.
Nested = tuple

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_INVERTED_OP = {
    Operator.SEQUENCE: Operator.REVERSE_SEQUENCE,
    Operator.REVERSE_SEQUENCE: Operator.SEQUENCE,
}


class ParseError(ValueError):
    """Malformed short-hand text. Carries the failing character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidTreeError(ValueError):
    """Vertex arrays violate the process-tree invariants."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class ProcessTree:
    """Immutable rooted labeled ordered tree with dense breadth-first ids.

    Instances are value-hashable and safe to share read-only across
    concurrent workers. Use :meth:`from_nested` or :func:`parse_tree` to
    construct validated trees; the raw constructor performs no checks so
    that :func:`validate` can be exercised on broken instances.
    """

    labels: tuple[Label, ...]
    parents: tuple[Optional[int], ...]
    children: tuple[tuple[int, ...], ...]
    root: int = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def from_nested(cls, nested: Nested) -> "ProcessTree":
        """Build a validated tree from ``(label, children)`` nesting."""
        labels: list[Label] = []
        parents: list[Optional[int]] = []
        kids: list[list[int]] = []
        queue: deque[tuple[Nested, Optional[int]]] = deque([(nested, None)])
        while queue:
            (label, subs), par = queue.popleft()
            idx = len(labels)
            labels.append(label)
            parents.append(par)
            kids.append([])
            if par is not None:
                kids[par].append(idx)
            for sub in subs:
                queue.append((sub, idx))
        tree = cls(tuple(labels), tuple(parents), tuple(tuple(k) for k in kids))
        violations = validate(tree)
        if violations:
            raise InvalidTreeError(violations)
        return tree

    # -- basic queries -----------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def is_operator(self, v: int) -> bool:
        return isinstance(self.labels[v], Operator)

    def operator(self, v: int) -> Optional[Operator]:
        label = self.labels[v]
        return label if isinstance(label, Operator) else None

    def activity(self, v: int) -> Optional[str]:
        """Activity name of a leaf, ``None`` for tau leaves and operators."""
        label = self.labels[v]
        return label if isinstance(label, str) else None

    def parent(self, v: int) -> Optional[int]:
        return self.parents[v]

    def sib(self, v: int) -> tuple[int, ...]:
        par = self.parents[v]
        if par is None:
            return ()
        return tuple(u for u in self.children[par] if u != v)

    def lsib(self, v: int) -> tuple[int, ...]:
        return tuple(u for u in self.sib(v) if u < v)

    def rsib(self, v: int) -> tuple[int, ...]:
        return tuple(u for u in self.sib(v) if u > v)

    def desc(self, v: int) -> tuple[int, ...]:
        """All proper descendants of ``v`` in ascending index order."""
        out: list[int] = []
        stack = list(self.children[v])
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return tuple(sorted(out))

    def subtree(self, v: int) -> "ProcessTree":
        """The subtree rooted at ``v``, re-indexed breadth-first."""
        return ProcessTree.from_nested(self._nested(v))

    def _nested(self, v: int) -> Nested:
        return (self.labels[v], tuple(self._nested(c) for c in self.children[v]))

    def activity_leaves(self) -> tuple[int, ...]:
        return tuple(v for v, l in enumerate(self.labels) if isinstance(l, str))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"ProcessTree({format_tree(self)!r})"


def activity_count(tree: ProcessTree) -> int:
    """Number of activity (non-tau) leaves."""
    return sum(1 for l in tree.labels if isinstance(l, str))


def alphabet(tree: ProcessTree) -> tuple[str, ...]:
    """Sorted distinct activity names occurring in the tree."""
    return tuple(sorted({l for l in tree.labels if isinstance(l, str)}))


# -- validation --------------------------------------------------------------


def validate(tree: ProcessTree) -> list[str]:
    """Check every process-tree invariant; return one message per violation.

    An empty list means the tree is valid. Leaves are characterized by "has
    no children" rather than by graph degree, so single-vertex trees and a
    root with one child are classified correctly.
    """
    out: list[str] = []
    n = len(tree.labels)
    if n == 0:
        return ["tree has no vertices"]
    if len(tree.parents) != n or len(tree.children) != n:
        return ["label/parent/children arrays differ in length"]
    if tree.root != 0 or tree.parents[0] is not None:
        out.append("vertex 0 must be the unique root (parent None)")
    for v in range(1, n):
        par = tree.parents[v]
        if par is None:
            out.append(f"vertex {v}: second root (parent None)")
        elif not (0 <= par < v):
            out.append(f"vertex {v}: parent {par} does not precede it in breadth-first order")
        elif v not in tree.children[par]:
            out.append(f"vertex {v}: missing from its parent's child list")
    for v in range(n):
        kids = tree.children[v]
        if any(not (0 <= c < n) for c in kids):
            out.append(f"vertex {v}: child index out of range")
            continue
        if list(kids) != sorted(kids):
            out.append(f"vertex {v}: children not in ascending index order")
        for c in kids:
            if tree.parents[c] != v:
                out.append(f"vertex {v}: child {c} disagrees about its parent")
        label = tree.labels[v]
        if isinstance(label, Operator):
            if not kids:
                out.append(f"vertex {v}: operator vertex has no children")
            if label is Operator.LOOP and len(kids) != 2:
                out.append(f"vertex {v}: loop vertex must have exactly 2 children, has {len(kids)}")
        else:
            if kids:
                out.append(f"vertex {v}: leaf label on a vertex with children")
            if isinstance(label, str):
                if label == TAU_TOKEN:
                    out.append(f"vertex {v}: activity name equals the reserved token {TAU_TOKEN!r}")
                elif not _IDENT_RE.fullmatch(label):
                    out.append(f"vertex {v}: activity name {label!r} is not an identifier")
            elif label is not None:
                out.append(f"vertex {v}: unknown label {label!r}")
    return out


# -- text form ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> Nested:
        node = self._node()
        self._ws()
        if self.pos != len(self.text):
            raise ParseError("expected end of input", self.pos)
        return node

    def _ws(self) -> None:
        text = self.text
        while self.pos < len(text) and text[self.pos].isspace():
            self.pos += 1

    def _peek_after_ws(self, pos: int) -> str:
        text = self.text
        while pos < len(text) and text[pos].isspace():
            pos += 1
        return text[pos] if pos < len(text) else ""

    def _node(self) -> Nested:
        self._ws()
        text, pos = self.text, self.pos
        if pos >= len(text):
            raise ParseError("expected operator or leaf", pos)
        for op in (Operator.SEQUENCE, Operator.REVERSE_SEQUENCE):
            if text.startswith(op.value, pos):
                self.pos = pos + len(op.value)
                return self._operator(op)
        ch = text[pos]
        if ch == Operator.PARALLEL.value:
            self.pos = pos + 1
            return self._operator(Operator.PARALLEL)
        if ch == Operator.LOOP.value:
            self.pos = pos + 1
            return self._operator(Operator.LOOP)
        match = _IDENT_RE.match(text, pos)
        if match is None:
            raise ParseError(f"expected operator or leaf, found {ch!r}", pos)
        word = match.group()
        self.pos = match.end()
        if self._peek_after_ws(self.pos) == "(":
            if word == Operator.CHOICE.value:
                return self._operator(Operator.CHOICE)
            raise ParseError(f"leaf {word!r} cannot take children", self.pos)
        if word == TAU_TOKEN:
            return (None, ())
        return (word, ())

    def _operator(self, op: Operator) -> Nested:
        self._expect("(")
        children = [self._node()]
        while True:
            self._ws()
            if self.pos < len(self.text) and self.text[self.pos] == ",":
                self.pos += 1
                children.append(self._node())
            else:
                break
        self._expect(")")
        return (op, tuple(children))

    def _expect(self, token: str) -> None:
        self._ws()
        if not self.text.startswith(token, self.pos):
            raise ParseError(f"expected {token!r}", self.pos)
        self.pos += len(token)


def parse_tree(text: str) -> ProcessTree:
    """Parse short-hand text into a validated, breadth-first-indexed tree.

    Raises :class:`ParseError` on malformed syntax (with the position) and
    :class:`InvalidTreeError` on structural violations such as a loop with
    an arity other than 2.
    """
    return ProcessTree.from_nested(_Parser(text).parse())


def format_tree(tree: ProcessTree) -> str:
    """Canonical short-hand text; ``parse_tree(format_tree(t)) == t``."""

    def fmt(v: int) -> str:
        label = tree.labels[v]
        if isinstance(label, Operator):
            return label.value + "(" + ",".join(fmt(c) for c in tree.children[v]) + ")"
        return TAU_TOKEN if label is None else label

    return fmt(tree.root)


def invert(tree: ProcessTree) -> ProcessTree:
    """The inverse tree: sequence and reverse-sequence labels swapped.

    Vertex set, edges, and indexing are untouched, so states and transitions
    carry over between a tree and its inverse verbatim.
    """
    labels = tuple(
        _INVERTED_OP.get(label, label) if isinstance(label, Operator) else label
        for label in tree.labels
    )
    return ProcessTree(labels, tree.parents, tree.children, tree.root)


# -- fixture files -------------------------------------------------------------


def iter_ptt(lines: Iterable[str]) -> Iterator[ProcessTree]:
    """Parse trees from ``.ptt`` lines, skipping blanks and ``#`` comments."""
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield parse_tree(stripped)


def load_ptt(path) -> list[ProcessTree]:
    """Read a ``.ptt`` fixture file (one tree per line)."""
    with open(path, "r", encoding="utf-8") as fp:
        return list(iter_ptt(fp))
