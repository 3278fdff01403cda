"""Concrete ground sets that realize separation systems.

Two kinds are provided: vertex separations of a finite graph, ordered by the
separator size, and bipartitions (or arbitrary complement-closed subset
families) of a finite point set, ordered by a similarity cut weight.  Each
generated system carries a realization payload so that forbidden families can
look up the concrete side sets behind every oriented id.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .errors import (DuplicateQuestionWarning, MissingCapability, NotATangle,
                     NotComplementClosed, ValidationError)
from .system import SeparationSystem, forward

# Full graph universes need 3^n side enumerations; keep them on the desk.
MAX_UNIVERSE_VERTICES = 8
MAX_FULL_BIPARTITION_POINTS = 12
_AUTO_UNIVERSE_VERTICES = 6


# -- graphs -------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple loopless undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValidationError(f"edge ({u}, {v}) out of range or unsorted")

    @classmethod
    def from_edges(cls, n, edges):
        norm = frozenset((min(u, v), max(u, v)) for u, v in edges)
        return cls(n, norm)

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse 'u v' lines (0-based); an optional single-integer line pins n."""
        edges = []
        n = 0
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) == 1:
                n = max(n, int(parts[0]))
                continue
            if len(parts) != 2:
                raise ValidationError(f"line {lineno}: expected 'u v', got {raw!r}")
            u, v = int(parts[0]), int(parts[1])
            edges.append((u, v))
            n = max(n, u + 1, v + 1)
        return cls.from_edges(n, edges)

    def has_edge(self, u, v) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def vertices(self):
        return range(self.n)

    def induced_edges(self, part) -> frozenset:
        s = set(part)
        return frozenset(e for e in self.edges if e[0] in s and e[1] in s)


@dataclass(frozen=True)
class GraphRealization:
    """Per-oriented-id (A, B) vertex side pairs of a graph system."""

    graph: Graph
    pairs: tuple[tuple[frozenset, frozenset], ...]

    kind = "graph"

    def side_pair(self, o: int) -> tuple[frozenset, frozenset]:
        return self.pairs[o]

    def big_side(self, o: int) -> frozenset:
        return self.pairs[o][1]

    def subset(self, oriented_ids):
        return GraphRealization(self.graph,
                                tuple(self.pairs[o] for o in oriented_ids))

    def to_json_dict(self):
        return {
            "kind": "graph",
            "n": self.graph.n,
            "edges": sorted([list(e) for e in self.graph.edges]),
            "sides": [[sorted(self.pairs[forward(s)][0]),
                       sorted(self.pairs[forward(s)][1])]
                      for s in range(len(self.pairs) // 2)],
        }


@dataclass(frozen=True)
class SideRealization:
    """Per-oriented-id subset sides of a bipartition-style system."""

    size: int
    sides: tuple[frozenset, ...]

    kind = "sets"

    def side(self, o: int) -> frozenset:
        return self.sides[o]

    def subset(self, oriented_ids):
        return SideRealization(self.size, tuple(self.sides[o] for o in oriented_ids))

    def to_json_dict(self):
        return {
            "kind": "sets",
            "size": self.size,
            "sides": [sorted(self.sides[forward(s)])
                      for s in range(len(self.sides) // 2)],
        }


def realization_from_json(d: dict):
    if d["kind"] == "graph":
        g = Graph.from_edges(int(d["n"]), [tuple(e) for e in d["edges"]])
        pairs = []
        for a, b in d["sides"]:
            pairs.append((frozenset(a), frozenset(b)))
            pairs.append((frozenset(b), frozenset(a)))
        return GraphRealization(g, tuple(pairs))
    if d["kind"] == "sets":
        size = int(d["size"])
        sides = []
        full = frozenset(range(size))
        for a in d["sides"]:
            fa = frozenset(a)
            sides.append(fa)
            sides.append(full - fa)
        return SideRealization(size, tuple(sides))
    raise ValidationError(f"unknown ground kind {d['kind']!r}")


def _graph_separations(g: Graph, k: float):
    """All oriented (A, B) with A|B covering V, no crossing edge, |A&B| < k.

    Enumerates tri-partitions (A-only, separator, B-only); the degenerate
    (V, V) is never generated.
    """
    verts = list(g.vertices())
    seen = {}
    for assignment in product((0, 1, 2), repeat=g.n):
        a_only = frozenset(v for v, c in zip(verts, assignment) if c == 0)
        mid = frozenset(v for v, c in zip(verts, assignment) if c == 1)
        b_only = frozenset(v for v, c in zip(verts, assignment) if c == 2)
        if len(mid) >= k:
            continue
        if not a_only and not b_only:
            continue  # separator is everything: only (V, V) would remain
        if any(g.has_edge(u, v) for u in a_only for v in b_only):
            continue
        A, B = a_only | mid, b_only | mid
        key = (tuple(sorted(A)), tuple(sorted(B)))
        rkey = (key[1], key[0])
        if key in seen or rkey in seen:
            continue
        seen[min(key, rkey)] = (frozenset(min(key, rkey)[0]), frozenset(min(key, rkey)[1]))
    # canonical order: lexicographic on the (A, B) tuple pair
    return [seen[key] for key in sorted(seen)]


def _graph_system_from_pairs(g: Graph, unoriented, with_universe: bool):
    pairs = []
    for A, B in unoriented:
        pairs.append((A, B))
        pairs.append((B, A))
    n2 = len(pairs)
    amask = np.array([sum(1 << v for v in A) for A, _ in pairs], dtype=np.int64)
    bmask = np.array([sum(1 << v for v in B) for _, B in pairs], dtype=np.int64)
    # (A, B) <= (C, D)  iff  A >= C and B <= D
    leq = ((amask[None, :] & ~amask[:, None]) == 0) & \
          ((bmask[:, None] & ~bmask[None, :]) == 0)
    orders = [len(A & B) for A, B in unoriented]
    join = meet = None
    degenerate = any(A == B for A, B in unoriented)
    if with_universe:
        index = {}
        for i, (a, b) in enumerate(zip(amask, bmask)):
            index.setdefault((int(a), int(b)), i)  # even id wins for (V, V)
        join = np.zeros((n2, n2), dtype=np.int64)
        meet = np.zeros((n2, n2), dtype=np.int64)
        for i in range(n2):
            for j in range(n2):
                # supremum shrinks the A side and grows the B side
                join[i, j] = index[(int(amask[i] & amask[j]), int(bmask[i] | bmask[j]))]
                meet[i, j] = index[(int(amask[i] | amask[j]), int(bmask[i] & bmask[j]))]
    return SeparationSystem(
        leq, orders, join=join, meet=meet, distributive=with_universe,
        ground=GraphRealization(g, tuple(pairs)),
        allow_degenerate=degenerate)


def graph_universe(g: Graph) -> SeparationSystem:
    """All separations of the graph with lattice operations attached.

    Includes the one degenerate separation (V, V); lattice closure needs it.
    Order-bounded working systems never see it since its order is |V|.
    """
    if g.n > MAX_UNIVERSE_VERTICES:
        raise ValidationError(
            f"graph universe limited to {MAX_UNIVERSE_VERTICES} vertices, got {g.n}")
    pairs = _graph_separations(g, float("inf"))
    full = frozenset(g.vertices())
    return _graph_system_from_pairs(g, pairs + [(full, full)], True)


def graph_system(g: Graph, k: float, with_universe="auto") -> SeparationSystem:
    """Separations of order below ``k``, with a back-map to (A, B) pairs.

    With ``with_universe`` (the default for small graphs) the result is
    carved out of the full lattice of all separations, so families needing
    joins can follow the parent link.  Larger graphs get a standalone system.
    """
    if with_universe == "auto":
        with_universe = g.n <= _AUTO_UNIVERSE_VERTICES
    if with_universe:
        return graph_universe(g).restrict_below(k)
    return _graph_system_from_pairs(g, _graph_separations(g, k), False)


# -- bipartitions and subset systems -------------------------------------------


@dataclass(frozen=True)
class BipartitionGround:
    """Chosen subset sides of a finite point set with a cut-weight order rule.

    ``sides`` must be complement-closed.  The order of a side A defaults to
    the similarity weight cut by {A, complement}; pass ``order_rule`` to plug
    in anything else.
    """

    size: int
    sides: tuple[frozenset, ...]
    similarity: tuple | None = None
    order_rule: object = None

    def full_set(self) -> frozenset:
        return frozenset(range(self.size))


def _cut_weight(side, size, sim):
    comp = [v for v in range(size) if v not in side]
    return float(sum(sim[u][v] for u in side for v in comp))


def bipartition_system(ground: BipartitionGround) -> SeparationSystem:
    """Subset order, complement involution, cut-weight orders."""
    full = ground.full_set()
    sideset = set(ground.sides)
    for A in ground.sides:
        if not A <= full:
            raise ValidationError(f"side {sorted(A)} not within the point set")
        if (full - A) not in sideset:
            raise NotComplementClosed(
                f"side {sorted(A)} present without its complement")
    sim = ground.similarity
    if sim is not None:
        sim = [list(map(float, row)) for row in sim]
        if len(sim) != ground.size or any(len(r) != ground.size for r in sim):
            raise ValidationError("similarity matrix shape does not match points")
        for u in range(ground.size):
            for v in range(ground.size):
                if sim[u][v] != sim[v][u] or sim[u][v] < 0:
                    raise ValidationError("similarity must be symmetric nonnegative")
    # one unoriented separation per complement pair; forward side is the
    # lexicographically smaller one
    pairs = sorted({tuple(sorted((tuple(sorted(A)), tuple(sorted(full - A)))))
                    for A in ground.sides})
    sides = []
    orders = []
    for fa, fb in pairs:
        A, B = frozenset(fa), frozenset(fb)
        sides.append(A)
        sides.append(B)
        if ground.order_rule is not None:
            orders.append(float(ground.order_rule(A)))
        elif sim is not None:
            orders.append(_cut_weight(A, ground.size, sim))
        else:
            orders.append(float(len(A) * len(B)))
    n2 = len(sides)
    masks = np.array([sum(1 << v for v in s) for s in sides], dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0  # subset order
    join = meet = None
    closed = all(frozenset(a | b) in sideset and frozenset(a & b) in sideset
                 for a in sides for b in sides)
    if closed:
        index = {int(m): i for i, m in enumerate(masks)}
        join = np.zeros((n2, n2), dtype=np.int64)
        meet = np.zeros((n2, n2), dtype=np.int64)
        for i in range(n2):
            for j in range(n2):
                join[i, j] = index[int(masks[i] | masks[j])]
                meet[i, j] = index[int(masks[i] & masks[j])]
    return SeparationSystem(
        leq, orders, join=join, meet=meet, distributive=closed,
        ground=SideRealization(ground.size, tuple(sides)))


def full_bipartition_ground(size: int, similarity=None,
                            order_rule=None) -> BipartitionGround:
    """Every subset of the point set as a side (guardrailed)."""
    if size > MAX_FULL_BIPARTITION_POINTS:
        raise ValidationError(
            f"all-bipartitions ground limited to {MAX_FULL_BIPARTITION_POINTS} "
            f"points, got {size}; supply explicit sides instead")
    sides = tuple(frozenset(c)
                  for r in range(size + 1)
                  for c in combinations(range(size), r))
    return BipartitionGround(size, sides, similarity, order_rule)


def questionnaire_system(answers, order_rule=None) -> SeparationSystem:
    """One separation per question: yes-side versus no-side of the persons.

    ``answers`` is a persons x questions 0/1 matrix.  Questions inducing the
    same bipartition are collapsed with a warning.  Orders default to the
    uniform cut weight |A| * |B|.
    """
    rows = [list(map(int, row)) for row in answers]
    if not rows:
        raise ValidationError("empty answer matrix")
    q = len(rows[0])
    if any(len(r) != q for r in rows):
        raise ValidationError("ragged answer matrix")
    if any(x not in (0, 1) for r in rows for x in r):
        raise ValidationError("answers must be 0 or 1")
    n = len(rows)
    full = frozenset(range(n))
    seen = {}
    for j in range(q):
        yes = frozenset(i for i in range(n) if rows[i][j] == 1)
        key = min(tuple(sorted(yes)), tuple(sorted(full - yes)))
        if key in seen:
            warnings.warn(
                f"question {j} duplicates question {seen[key]}; merged",
                DuplicateQuestionWarning, stacklevel=2)
            continue
        seen[key] = j
    sides = []
    for key in seen:
        sides.append(frozenset(key))
        sides.append(full - frozenset(key))
    ground = BipartitionGround(n, tuple(sides), None, order_rule)
    return bipartition_system(ground)


def block_of_tangle(system: SeparationSystem, tau) -> frozenset[int]:
    """Intersection of the big sides of a block-style graph tangle."""
    ground = system.ground
    if not isinstance(ground, GraphRealization):
        raise MissingCapability("block extraction needs a graph-ground system")
    if not system.orients_all(tau) or not system.is_consistent(tau):
        raise NotATangle("expected a consistent orientation of every separation")
    block = set(ground.graph.vertices())
    for o in sorted(tau):
        block &= ground.big_side(o)
    return frozenset(block)


# -- CSV loaders ---------------------------------------------------------------


def _read_csv_matrix(text: str) -> list[list[str]]:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise ValidationError("empty CSV input")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValidationError(f"ragged CSV row {i}: {len(row)} != {width}")
    return rows


def load_similarity_csv(text: str):
    rows = _read_csv_matrix(text)
    mat = [[float(x) for x in row] for row in rows]
    if len(mat) != len(mat[0]):
        raise ValidationError("similarity matrix must be square")
    return mat


def load_answers_csv(text: str):
    rows = _read_csv_matrix(text)
    return [[int(x) for x in row] for row in rows]
