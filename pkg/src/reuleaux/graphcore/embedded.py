"""Graphs cellularly embedded in the sphere, stored as rotation systems.

Every edge ``e`` owns two darts: ``2e`` runs ``edges[e][0] -> edges[e][1]``
and ``2e + 1`` runs back.  ``rotation[v]`` lists the darts leaving ``v`` in
counter-clockwise order.  Faces are the orbits of
``d -> next_around(head(d), twin(d))``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx

from ..errors import PreconditionError, SchemaError


def twin(d: int) -> int:
    return d ^ 1


class EmbeddedGraph:
    def __init__(self, n: int, edges: Sequence[tuple[int, int]], rotation: Sequence[Sequence[int]]):
        self.n = int(n)
        self.edges = [tuple(map(int, e)) for e in edges]
        self.rotation = [list(map(int, r)) for r in rotation]
        if len(self.rotation) != self.n:
            raise PreconditionError("rotation must list darts for every vertex")
        seen = sorted(d for r in self.rotation for d in r)
        if seen != list(range(2 * len(self.edges))):
            raise PreconditionError("every dart must appear exactly once in the rotation system")
        self._pos = {}
        for v, r in enumerate(self.rotation):
            for k, d in enumerate(r):
                if self.tail(d) != v:
                    raise PreconditionError(f"dart {d} listed at vertex {v} but leaves {self.tail(d)}")
                self._pos[d] = (v, k)

    # construction -----------------------------------------------------------
    @classmethod
    def from_rotation(cls, rotation: Sequence[Sequence[int]]) -> "EmbeddedGraph":
        """Build a simple embedded graph from cyclic neighbour lists."""
        n = len(rotation)
        edge_id: dict[tuple[int, int], int] = {}
        edges: list[tuple[int, int]] = []
        for u, nbrs in enumerate(rotation):
            if len(set(nbrs)) != len(nbrs) or u in nbrs:
                raise PreconditionError(f"vertex {u}: neighbour list must be loop-free and repeat-free")
            for w in nbrs:
                if not 0 <= w < n:
                    raise PreconditionError(f"vertex {u}: neighbour {w} out of range")
                key = (min(u, w), max(u, w))
                if key not in edge_id:
                    edge_id[key] = len(edges)
                    edges.append(key)
        for u, nbrs in enumerate(rotation):
            for w in nbrs:
                if u not in rotation[w]:
                    raise PreconditionError(f"edge {u}-{w} is not symmetric")
        rot = []
        for u, nbrs in enumerate(rotation):
            darts = []
            for w in nbrs:
                e = edge_id[(min(u, w), max(u, w))]
                darts.append(2 * e if edges[e][0] == u else 2 * e + 1)
            rot.append(darts)
        return cls(n, edges, rot)

    # basic queries ------------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    def tail(self, d: int) -> int:
        return self.edges[d >> 1][d & 1]

    def head(self, d: int) -> int:
        return self.edges[d >> 1][1 - (d & 1)]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def next_around(self, d: int, step: int = 1) -> int:
        v, k = self._pos[d]
        r = self.rotation[v]
        return r[(k + step) % len(r)]

    def neighbors(self, v: int) -> list[int]:
        """Heads of the darts at ``v`` in rotation order."""
        return [self.head(d) for d in self.rotation[v]]

    def neighbor_rotation(self) -> list[list[int]]:
        return [self.neighbors(v) for v in range(self.n)]

    def face_step(self, d: int) -> int:
        return self.next_around(twin(d))

    @cached_property
    def faces(self) -> list[list[int]]:
        """Faces as dart cycles, ordered by their smallest dart."""
        seen = [False] * (2 * self.m)
        out = []
        for d0 in range(2 * self.m):
            if seen[d0]:
                continue
            cyc = []
            d = d0
            while not seen[d]:
                seen[d] = True
                cyc.append(d)
                d = self.face_step(d)
            out.append(cyc)
        return out

    @cached_property
    def dart_face(self) -> list[int]:
        df = [0] * (2 * self.m)
        for f, cyc in enumerate(self.faces):
            for d in cyc:
                df[d] = f
        return df

    def face_vertices(self, f: int) -> list[int]:
        return [self.tail(d) for d in self.faces[f]]

    @cached_property
    def face_vertex_sets(self) -> list[frozenset]:
        return [frozenset(self.face_vertices(f)) for f in range(len(self.faces))]

    def euler_characteristic(self) -> int:
        return self.n - self.m + len(self.faces)

    def is_simple(self) -> bool:
        keys = set()
        for u, v in self.edges:
            if u == v:
                return False
            k = (min(u, v), max(u, v))
            if k in keys:
                return False
            keys.add(k)
        return True

    def is_connected(self) -> bool:
        return self.n > 0 and nx.is_connected(self.to_networkx())

    def is_spherical(self) -> bool:
        """Connected with Euler characteristic 2, i.e. a genus-0 embedding."""
        return self.is_connected() and self.euler_characteristic() == 2

    def to_networkx(self) -> nx.MultiGraph | nx.Graph:
        g = nx.Graph() if self.is_simple() else nx.MultiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def simple_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((u, v) for u, v in self.edges if u != v)
        return g

    def edge_set(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges}

    def mirror(self) -> "EmbeddedGraph":
        return EmbeddedGraph(self.n, self.edges, [list(reversed(r)) for r in self.rotation])

    def relabel(self, perm: Sequence[int]) -> "EmbeddedGraph":
        """Vertex ``v`` becomes ``perm[v]``."""
        rot = [None] * self.n
        for v in range(self.n):
            rot[perm[v]] = [perm[w] for w in self.neighbors(v)]
        return EmbeddedGraph.from_rotation(rot)

    def __repr__(self) -> str:
        return f"EmbeddedGraph(n={self.n}, m={self.m}, f={len(self.faces)})"

    # serialization ----------------------------------------------------------------
    def to_dict(self) -> dict:
        if not self.is_simple():
            raise PreconditionError("graph JSON only encodes simple graphs")
        return {"n": self.n, "rotation": self.neighbor_rotation()}

    @classmethod
    def from_dict(cls, data) -> "EmbeddedGraph":
        if not isinstance(data, dict) or "rotation" not in data:
            raise SchemaError("graph JSON needs 'rotation'")
        rot = data["rotation"]
        n = data.get("n", len(rot))
        if not isinstance(rot, list) or n != len(rot):
            raise SchemaError("'n' must equal the number of rotation lists")
        try:
            return cls.from_rotation(rot)
        except (PreconditionError, TypeError) as exc:
            raise SchemaError(str(exc)) from exc


def dual(g: EmbeddedGraph) -> EmbeddedGraph:
    """Geometric dual; dual vertex ``f`` is face ``g.faces[f]``.

    Dual edge ``e`` crosses primal edge ``e``; its dart ``2e`` runs from the
    face of primal dart ``2e`` to the face of ``2e + 1``.
    """
    if not g.is_connected():
        raise PreconditionError("dual needs a connected embedded graph")
    df = g.dart_face
    edges = [(df[2 * e], df[2 * e + 1]) for e in range(g.m)]
    rotation = [list(cyc) for cyc in g.faces]
    return EmbeddedGraph(len(g.faces), edges, rotation)


# canonical forms -------------------------------------------------------------------

def _bfs_code(g: EmbeddedGraph, d0: int, step: int) -> tuple[tuple[int, ...], list[int]]:
    """Code of the BFS from dart ``d0``; ``step=-1`` reads rotations clockwise."""
    start = g.tail(d0)
    number = {start: 0}
    first = {start: d0}
    order = [start]
    code: list[int] = []
    i = 0
    while i < len(order):
        v = order[i]
        d = first[v]
        for _ in range(g.degree(v)):
            w = g.head(d)
            if w not in number:
                number[w] = len(order)
                order.append(w)
                first[w] = twin(d)
            code.append(number[w])
            d = g.next_around(d, step)
        code.append(-1)
        i += 1
    return tuple(code), order


def canonical_form(g: EmbeddedGraph) -> tuple:
    """Lexicographically least BFS code over all roots and both orientations.

    Assumes a connected simple graph; equal codes mean the embeddings are
    isomorphic up to reflection.
    """
    if g.n == 1 and g.m == 0:
        return (1, 0)
    best = None
    maxdeg = max(g.degree(v) for v in range(g.n))
    for d in range(2 * g.m):
        if g.degree(g.tail(d)) != maxdeg:
            continue
        for step in (1, -1):
            c, _ = _bfs_code(g, d, step)
            if best is None or c < best:
                best = c
    return (g.n, g.m) + best


def are_isomorphic(g1: EmbeddedGraph, g2: EmbeddedGraph) -> bool:
    if (g1.n, g1.m) != (g2.n, g2.m):
        return False
    return canonical_form(g1) == canonical_form(g2)


def map_isomorphisms(g1: EmbeddedGraph, g2: EmbeddedGraph) -> Iterable[dict[int, int]]:
    """Yield every embedding isomorphism ``g1 -> g2`` (reflections included).

    For 3-connected planar graphs these are all graph isomorphisms (Whitney).
    """
    if (g1.n, g1.m) != (g2.n, g2.m) or g1.m == 0:
        return
    d0 = 0
    code1, order1 = _bfs_code(g1, d0, 1)
    if len(order1) != g1.n:
        return
    seen = set()
    for step in (1, -1):
        for d in range(2 * g2.m):
            if g2.degree(g2.tail(d)) != g1.degree(g1.tail(d0)):
                continue
            code2, order2 = _bfs_code(g2, d, step)
            if code2 == code1:
                mapping = dict(zip(order1, order2))
                key = tuple(mapping[v] for v in range(g1.n))
                if key not in seen:
                    seen.add(key)
                    yield mapping
