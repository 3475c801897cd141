"""Abstract Coxeter diagrams: weighted edge-labeled graphs on dense integer vertices.

An edge carries one of three label kinds:

* a finite integer m >= 3 (dihedral angle pi/m; m = 2 is encoded by edge absence),
* ``bold`` (weight exactly 1),
* ``dotted`` (weight > 1, optionally an exact rational).

Diagrams are immutable after construction; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "EdgeLabel",
    "CoxeterDiagram",
    "CanonicalCode",
    "DiagramError",
    "ParseError",
    "parse_diagram",
    "serialize_diagram",
    "induced_subdiagram",
    "join",
    "components",
    "canonical_code",
]

CANONICAL_SIZE_LIMIT = 14


class DiagramError(ValueError):
    """Raised for structurally invalid diagram data."""


class ParseError(DiagramError):
    """Raised on malformed diagram text; carries line information."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class EdgeLabel:
    """Label of a single edge.

    ``kind`` is "finite", "bold" or "dotted".  For finite labels ``m`` holds the
    integer; for weighted dotted edges ``weight`` holds an exact rational > 1.
    """

    kind: str
    m: int | None = None
    weight: Fraction | None = None

    def __post_init__(self):
        if self.kind == "finite":
            if self.m is None or self.m < 3:
                raise DiagramError(f"finite edge label must be >= 3, got {self.m}")
            if self.weight is not None:
                raise DiagramError("finite edge label cannot carry a weight")
        elif self.kind == "bold":
            if self.m is not None or self.weight is not None:
                raise DiagramError("bold edge label carries no parameters")
        elif self.kind == "dotted":
            if self.m is not None:
                raise DiagramError("dotted edge label has no integer parameter")
            if self.weight is not None and self.weight <= 1:
                raise DiagramError(f"dotted weight must be > 1, got {self.weight}")
        else:
            raise DiagramError(f"unknown edge kind {self.kind!r}")

    @staticmethod
    def finite(m: int) -> "EdgeLabel":
        return EdgeLabel("finite", m=m)

    @staticmethod
    def bold() -> "EdgeLabel":
        return EdgeLabel("bold")

    @staticmethod
    def dotted(weight: Fraction | None = None) -> "EdgeLabel":
        return EdgeLabel("dotted", weight=weight)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def sort_key(self) -> tuple:
        # total order used by canonical codes: finite m < bold < dotted < dotted p/q
        if self.kind == "finite":
            return (0, self.m, 0, 0)
        if self.kind == "bold":
            return (1, 0, 0, 0)
        if self.weight is None:
            return (2, 0, 0, 0)
        return (3, self.weight.numerator, self.weight.denominator, 0)

    def format(self) -> str:
        if self.kind == "finite":
            return str(self.m)
        if self.kind == "bold":
            return "inf"
        if self.weight is None:
            return "d"
        return f"d:{self.weight.numerator}/{self.weight.denominator}"


BOLD = EdgeLabel.bold()


def _simple(m: int) -> EdgeLabel:
    return EdgeLabel.finite(m)


class CoxeterDiagram:
    """Immutable edge-labeled graph on vertices ``0..n-1``.

    ``edges`` maps unordered pairs ``(i, j)`` with ``i < j`` to :class:`EdgeLabel`.
    ``tags`` optionally names vertices (markers such as ``y``); tags never
    influence canonical codes.
    """

    __slots__ = ("n", "_edges", "_tags", "_adj", "_code")

    def __init__(
        self,
        n: int,
        edges: Mapping[tuple[int, int], EdgeLabel] | Iterable[tuple[int, int, EdgeLabel]] = (),
        tags: Mapping[int, str] | None = None,
    ):
        if n < 0:
            raise DiagramError("vertex count must be >= 0")
        norm: dict[tuple[int, int], EdgeLabel] = {}
        items = edges.items() if isinstance(edges, Mapping) else ((p[0:2], p[2]) for p in edges)
        for pair, label in items:
            i, j = pair
            if i == j:
                raise DiagramError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise DiagramError(f"edge endpoint out of range: {pair}")
            if i > j:
                i, j = j, i
            if (i, j) in norm:
                raise DiagramError(f"duplicate edge ({i}, {j})")
            if not isinstance(label, EdgeLabel):
                label = EdgeLabel.finite(int(label))
            norm[(i, j)] = label
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_edges", dict(sorted(norm.items())))
        object.__setattr__(self, "_tags", dict(tags) if tags else {})
        for v in self._tags:
            if not 0 <= v < n:
                raise DiagramError(f"tagged vertex out of range: {v}")
        object.__setattr__(self, "_adj", None)
        object.__setattr__(self, "_code", None)

    def __setattr__(self, name, value):
        raise AttributeError("CoxeterDiagram is immutable")

    # -- basic accessors ---------------------------------------------------

    @property
    def edges(self) -> dict[tuple[int, int], EdgeLabel]:
        return dict(self._edges)

    @property
    def tags(self) -> dict[int, str]:
        return dict(self._tags)

    def label(self, i: int, j: int) -> EdgeLabel | None:
        if i > j:
            i, j = j, i
        return self._edges.get((i, j))

    def adjacency(self) -> list[dict[int, EdgeLabel]]:
        if self._adj is None:
            adj: list[dict[int, EdgeLabel]] = [dict() for _ in range(self.n)]
            for (i, j), lab in self._edges.items():
                adj[i][j] = lab
                adj[j][i] = lab
            object.__setattr__(self, "_adj", adj)
        return self._adj

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adjacency()[v])

    def finite_labels(self) -> list[int]:
        """All finite labels present, with multiplicity."""
        return [lab.m for lab in self._edges.values() if lab.kind == "finite"]

    def has_dotted(self) -> bool:
        return any(lab.kind == "dotted" for lab in self._edges.values())

    def has_bold(self) -> bool:
        return any(lab.kind == "bold" for lab in self._edges.values())

    def max_finite_label(self) -> int:
        labels = self.finite_labels()
        return max(labels) if labels else 2

    def key(self) -> tuple:
        return (self.n, tuple(self._edges.items()), tuple(sorted(self._tags.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, CoxeterDiagram) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        parts = ", ".join(f"{i}-{j}:{lab.format()}" for (i, j), lab in self._edges.items())
        return f"CoxeterDiagram(n={self.n}, [{parts}])"

    # -- structure ---------------------------------------------------------

    def with_tags(self, tags: Mapping[int, str]) -> "CoxeterDiagram":
        return CoxeterDiagram(self.n, self._edges, tags)

    def relabel(self, perm: Iterable[int]) -> "CoxeterDiagram":
        """Apply a permutation: vertex v of self becomes perm[v] of the result."""
        p = list(perm)
        if sorted(p) != list(range(self.n)):
            raise DiagramError("not a permutation")
        edges = {(p[i], p[j]): lab for (i, j), lab in self._edges.items()}
        tags = {p[v]: t for v, t in self._tags.items()}
        return CoxeterDiagram(self.n, edges, tags)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        stack = [0]
        adj = self.adjacency()
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def degree(self, v: int) -> int:
        return len(self.adjacency()[v])


def induced_subdiagram(diagram: CoxeterDiagram, subset: Iterable[int]) -> CoxeterDiagram:
    """Subdiagram on the given vertices, keeping every internal edge and its label.

    Vertices are renumbered 0..k-1 in increasing order of their original index.
    """
    verts = sorted(set(subset))
    for v in verts:
        if not 0 <= v < diagram.n:
            raise DiagramError(f"vertex out of range: {v}")
    index = {v: i for i, v in enumerate(verts)}
    edges = {
        (index[i], index[j]): lab
        for (i, j), lab in diagram._edges.items()
        if i in index and j in index
    }
    tags = {index[v]: t for v, t in diagram._tags.items() if v in index}
    return CoxeterDiagram(len(verts), edges, tags)


def join(
    d1: CoxeterDiagram,
    d2: CoxeterDiagram,
    cross: Mapping[tuple[int, int], EdgeLabel] | None = None,
) -> CoxeterDiagram:
    """Disjoint union of ``d1`` and ``d2`` plus cross edges.

    Cross keys pair a ``d1`` vertex with a ``d2`` vertex; the second member is
    offset by ``d1.n`` in the result.
    """
    edges: dict[tuple[int, int], EdgeLabel] = dict(d1._edges)
    off = d1.n
    for (i, j), lab in d2._edges.items():
        edges[(i + off, j + off)] = lab
    for (v1, v2), lab in (cross or {}).items():
        if not (0 <= v1 < d1.n and 0 <= v2 < d2.n):
            raise DiagramError(f"invalid cross endpoint ({v1}, {v2})")
        if not isinstance(lab, EdgeLabel):
            lab = EdgeLabel.finite(int(lab))
        edges[(v1, v2 + off)] = lab
    tags = dict(d1._tags)
    tags.update({v + off: t for v, t in d2._tags.items()})
    return CoxeterDiagram(d1.n + d2.n, edges, tags)


def components(diagram: CoxeterDiagram) -> list[tuple[list[int], CoxeterDiagram]]:
    """Connected components as (original vertex subset, induced diagram) pairs."""
    seen: set[int] = set()
    out = []
    adj = diagram.adjacency()
    for start in range(diagram.n):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        verts = sorted(comp)
        out.append((verts, induced_subdiagram(diagram, verts)))
    return out


# -- canonical codes -------------------------------------------------------

@dataclass(frozen=True, order=True)
class CanonicalCode:
    """Deterministic serialization of the minimal labeled adjacency sequence."""

    data: bytes

    def hex(self) -> str:
        return self.data.hex()


def _edge_rank(label: EdgeLabel | None) -> tuple:
    return (0,) if label is None else (1,) + label.sort_key()


def _refine_colors(diagram: CoxeterDiagram) -> list[int]:
    """Stable vertex coloring by iterated neighborhood-label refinement.

    Colors are isomorphism-invariant and sorted canonically, so any isomorphism
    respects the resulting class order.
    """
    adj = diagram.adjacency()
    colors = [0] * diagram.n
    signature = [
        tuple(sorted(lab.sort_key() for lab in adj[v].values())) for v in range(diagram.n)
    ]
    order = sorted(set(signature))
    colors = [order.index(s) for s in signature]
    while True:
        signature = [
            (colors[v], tuple(sorted((lab.sort_key(), colors[w]) for w, lab in adj[v].items())))
            for v in range(diagram.n)
        ]
        order = sorted(set(signature))
        new = [order.index(s) for s in signature]
        if new == colors:
            return colors
        colors = new


def canonical_code(diagram: CoxeterDiagram, size_limit: int = CANONICAL_SIZE_LIMIT) -> CanonicalCode:
    """Code equal for two diagrams iff they are isomorphic as labeled graphs.

    Exhaustive ordering search restricted to refinement classes, with prefix
    pruning against the best encoding found so far.  Vertex tags are ignored.
    """
    n = diagram.n
    if n > size_limit:
        raise DiagramError(f"diagram order {n} exceeds canonical-code limit {size_limit}")
    if diagram._code is not None and size_limit == CANONICAL_SIZE_LIMIT:
        return diagram._code
    colors = _refine_colors(diagram)
    adj = diagram.adjacency()

    # candidate orderings must list color classes in increasing color value
    best: list[tuple] | None = None

    def encode_row(order: list[int], v: int) -> tuple:
        return tuple(_edge_rank(adj[v].get(w)) for w in order)

    def extend(order: list[int], used: set[int], rows: list[tuple]):
        nonlocal best
        if len(order) == n:
            if best is None or rows < best:
                best = list(rows)
            return
        want = min(colors[v] for v in range(n) if v not in used)
        for v in range(n):
            if v in used or colors[v] != want:
                continue
            row = encode_row(order, v)
            rows.append(row)
            if best is None or rows <= best[: len(rows)]:
                order.append(v)
                used.add(v)
                extend(order, used, rows)
                used.remove(v)
                order.pop()
            rows.pop()

    extend([], set(), [])
    assert best is not None
    payload = repr((n, best)).encode()
    code = CanonicalCode(payload)
    if size_limit == CANONICAL_SIZE_LIMIT:
        object.__setattr__(diagram, "_code", code)
    return code


# -- text format -----------------------------------------------------------

def _parse_label(token: str, line: int) -> EdgeLabel:
    if token == "inf":
        return EdgeLabel.bold()
    if token == "d":
        return EdgeLabel.dotted()
    if token.startswith("d:"):
        body = token[2:]
        if "/" in body:
            num, _, den = body.partition("/")
        else:
            num, den = body, "1"
        try:
            weight = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad dotted weight {token!r}", line) from exc
        if weight <= 1:
            raise ParseError(f"dotted weight must be > 1, got {weight}", line)
        return EdgeLabel.dotted(weight)
    try:
        m = int(token)
    except ValueError as exc:
        raise ParseError(f"bad edge label {token!r}", line) from exc
    if m < 3:
        raise ParseError(f"finite edge label must be >= 3, got {m}", line)
    return EdgeLabel.finite(m)


def parse_diagram(text: str) -> CoxeterDiagram:
    """Parse the line-based interchange format.

    ``# comment`` lines are ignored.  The first significant line is
    ``n <count>``; afterwards ``e <i> <j> <label>`` lines add edges and optional
    ``t <i> <tag>`` lines attach vertex tags.
    """
    n: int | None = None
    edges: dict[tuple[int, int], EdgeLabel] = {}
    tags: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if n is None:
            if parts[0] != "n" or len(parts) != 2:
                raise ParseError("expected 'n <count>'", lineno)
            try:
                n = int(parts[1])
            except ValueError as exc:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno) from exc
            if n < 0:
                raise ParseError("vertex count must be >= 0", lineno)
            continue
        if parts[0] == "e":
            if len(parts) != 4:
                raise ParseError("expected 'e <i> <j> <label>'", lineno)
            try:
                i, j = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ParseError("bad edge endpoints", lineno) from exc
            if i == j:
                raise ParseError(f"self-loop at vertex {i}", lineno)
            if not (0 <= i < n and 0 <= j < n):
                raise ParseError(f"edge endpoint out of range: ({i}, {j})", lineno)
            key = (min(i, j), max(i, j))
            if key in edges:
                raise ParseError(f"duplicate edge ({key[0]}, {key[1]})", lineno)
            edges[key] = _parse_label(parts[3], lineno)
        elif parts[0] == "t":
            if len(parts) != 3:
                raise ParseError("expected 't <i> <tag>'", lineno)
            try:
                v = int(parts[1])
            except ValueError as exc:
                raise ParseError("bad tag vertex", lineno) from exc
            if not 0 <= v < n:
                raise ParseError(f"tag vertex out of range: {v}", lineno)
            tags[v] = parts[2]
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing 'n <count>' line", 1)
    return CoxeterDiagram(n, edges, tags)


def serialize_diagram(diagram: CoxeterDiagram) -> str:
    """Emit the interchange format; edges sorted by (i, j)."""
    lines = [f"n {diagram.n}"]
    for (i, j), lab in sorted(diagram._edges.items()):
        lines.append(f"e {i} {j} {lab.format()}")
    for v, tag in sorted(diagram._tags.items()):
        lines.append(f"t {v} {tag}")
    return "\n".join(lines) + "\n"


# -- small construction helpers used across the package ---------------------

def path_diagram(labels: Iterable[int]) -> CoxeterDiagram:
    """Linear diagram with the given consecutive edge labels (label 2 = gap)."""
    labs = list(labels)
    edges = {}
    for i, m in enumerate(labs):
        if m >= 3:
            edges[(i, i + 1)] = _simple(m)
    return CoxeterDiagram(len(labs) + 1, edges)


def cycle_diagram(labels: Iterable[int]) -> CoxeterDiagram:
    """Cycle with the given edge labels in cyclic order (label 2 = gap)."""
    labs = list(labels)
    n = len(labs)
    edges = {}
    for i, m in enumerate(labs):
        if m >= 3:
            a, b = i, (i + 1) % n
            edges[(min(a, b), max(a, b))] = _simple(m)
    return CoxeterDiagram(n, edges)


def triangle_diagram(a: int, b: int, c: int) -> CoxeterDiagram:
    """Order-3 diagram with [v1,v2]=c, [v0,v2]=b, [v0,v1]=a-style labels.

    Vertex 0 is the one avoiding the c-edge: [0,1]=a, [0,2]=b, [1,2]=c.
    """
    edges = {}
    if a >= 3:
        edges[(0, 1)] = _simple(a)
    if b >= 3:
        edges[(0, 2)] = _simple(b)
    if c >= 3:
        edges[(1, 2)] = _simple(c)
    return CoxeterDiagram(3, edges)


def from_matrix(m: "list[list[int]]") -> CoxeterDiagram:
    """Diagram from a symmetric integer label matrix (2 = no edge, >= 3 finite)."""
    n = len(m)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if m[i][j] >= 3:
                edges[(i, j)] = _simple(m[i][j])
    return CoxeterDiagram(n, edges)
