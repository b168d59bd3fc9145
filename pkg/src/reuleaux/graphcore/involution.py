"""Involutions of self-dual polyhedral graphs and their diagonal graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx

from ..errors import PreconditionError
from .connectivity import connectivity
from .embedded import EmbeddedGraph, dual, map_isomorphisms


@dataclass(frozen=True)
class Involution:
    """``tau[v]`` is the dual face of ``v``, as its cyclic vertex sequence."""

    tau: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.tau)

    def face(self, v: int) -> tuple[int, ...]:
        return self.tau[v]

    def sets(self) -> list[frozenset]:
        return [frozenset(f) for f in self.tau]

    def dual_edge(self, a: int, b: int) -> tuple[int, int]:
        """``tau(a) & tau(b)``, the edge dual to ``ab``."""
        common = set(self.tau[a]) & set(self.tau[b])
        if len(common) != 2:
            raise PreconditionError(f"faces of {a} and {b} do not share an edge")
        x, y = sorted(common)
        return x, y

    def to_list(self) -> list[list[int]]:
        return [list(f) for f in self.tau]

    @classmethod
    def from_faces(cls, faces: Sequence[Sequence[int]]) -> "Involution":
        return cls(tuple(tuple(int(x) for x in f) for f in faces))


def require_polyhedral(g: EmbeddedGraph) -> None:
    if not g.is_simple():
        raise PreconditionError("graph must be simple")
    if not g.is_spherical():
        raise PreconditionError("graph must be connected and embedded in the sphere")
    if connectivity(g.simple_graph()).kappa < 3:
        raise PreconditionError("graph must be 3-connected")


def _face_edges(cycle: Sequence[int]) -> set[frozenset]:
    k = len(cycle)
    return {frozenset((cycle[i], cycle[(i + 1) % k])) for i in range(k)}


def verify_involution(g: EmbeddedGraph, tau) -> bool:
    """Both involution axioms, bijectivity onto faces, and adjacency preservation."""
    faces = tau.tau if isinstance(tau, Involution) else tau
    if faces is None or len(faces) != g.n:
        return False
    face_sets = g.face_vertex_sets
    index = {}
    for f, s in enumerate(face_sets):
        index.setdefault(s, f)
    if len(index) != len(face_sets):
        return False
    sets = [frozenset(f) for f in faces]
    try:
        fidx = [index[s] for s in sets]
    except KeyError:
        return False
    if len(set(fidx)) != g.n or len(face_sets) != g.n:
        return False
    for v in range(g.n):
        if v in sets[v]:
            return False
        for u in range(g.n):
            if (u in sets[v]) != (v in sets[u]):
                return False
    # tau must be a duality: u ~ v  <=>  tau(u), tau(v) share an edge
    fedges = [_face_edges(g.face_vertices(f)) for f in range(len(face_sets))]
    adj = g.edge_set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            shares = bool(fedges[fidx[u]] & fedges[fidx[v]])
            if shares != (frozenset((u, v)) in adj):
                return False
    return True


def find_involution(g: EmbeddedGraph) -> Involution | None:
    """First duality isomorphism satisfying both axioms, or ``None``."""
    require_polyhedral(g)
    gd = dual(g)
    if gd.n != g.n:
        return None
    face_sets = g.face_vertex_sets
    for mapping in map_isomorphisms(g, gd):
        ok = all(v not in face_sets[mapping[v]] for v in range(g.n))
        if ok:
            ok = all(
                (u in face_sets[mapping[v]]) == (v in face_sets[mapping[u]])
                for v in range(g.n) for u in range(v + 1, g.n)
            )
        if ok:
            return Involution.from_faces([g.face_vertices(mapping[v]) for v in range(g.n)])
    return None


def diagonal_graph(g: EmbeddedGraph, tau) -> nx.Graph:
    """Graph on ``range(g.n)`` joining ``a`` to every vertex of ``tau(a)``."""
    if not verify_involution(g, tau):
        raise PreconditionError("diagonal graph needs a verified involution")
    faces = tau.tau if isinstance(tau, Involution) else tau
    d = nx.Graph()
    d.add_nodes_from(range(g.n))
    for a, face in enumerate(faces):
        d.add_edges_from((a, x) for x in face)
    return d
