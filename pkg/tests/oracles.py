"""Slow, independent reference implementations used only by the tests.

Nothing here imports the package's graph code: graphs are plain networkx
graphs and faces come from ``networkx.check_planarity``.
"""

from __future__ import annotations

from itertools import combinations, product

import networkx as nx
import numpy as np


# planar faces ---------------------------------------------------------------------------

def planar_faces(g: nx.Graph) -> list[frozenset]:
    ok, emb = nx.check_planarity(g)
    assert ok
    seen = set()
    faces = []
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        face = emb.traverse_face(u, v, mark_half_edges=seen)
        faces.append(frozenset(face))
    return faces


def face_edge_sets(g: nx.Graph) -> list[tuple[frozenset, set]]:
    ok, emb = nx.check_planarity(g)
    assert ok
    seen = set()
    out = []
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        face = emb.traverse_face(u, v, mark_half_edges=seen)
        k = len(face)
        out.append((frozenset(face), {frozenset((face[i], face[(i + 1) % k])) for i in range(k)}))
    return out


# involutions by backtracking ----------------------------------------------------------------

def brute_involution(g: nx.Graph) -> dict | None:
    """Vertex -> face vertex set satisfying both axioms and preserving adjacency."""
    faces = face_edge_sets(g)
    nodes = sorted(g.nodes)
    if len(faces) != len(nodes):
        return None
    assign: dict = {}
    used = set()

    def consistent(v, f) -> bool:
        fs, fe = faces[f]
        if v in fs:
            return False
        for u, h in assign.items():
            hs, he = faces[h]
            if (u in fs) != (v in hs):
                return False
            if bool(fe & he) != g.has_edge(u, v):
                return False
        return True

    def rec(i) -> bool:
        if i == len(nodes):
            return True
        v = nodes[i]
        for f in range(len(faces)):
            if f in used or not consistent(v, f):
                continue
            assign[v] = f
            used.add(f)
            if rec(i + 1):
                return True
            del assign[v]
            used.discard(f)
        return False

    if rec(0):
        return {v: faces[f][0] for v, f in assign.items()}
    return None


# exhaustive triangulations and self-dual polyhedral graphs -----------------------------------

class IsoStore:
    """Isomorphism-class store keyed by a Weisfeiler-Lehman hash."""

    def __init__(self):
        self.buckets: dict[str, list[nx.Graph]] = {}

    def add(self, g: nx.Graph) -> bool:
        h = nx.weisfeiler_lehman_graph_hash(g, iterations=4)
        bucket = self.buckets.setdefault(h, [])
        if any(nx.is_isomorphic(g, o) for o in bucket):
            return False
        bucket.append(g)
        return True

    def graphs(self) -> list[nx.Graph]:
        return [g for b in self.buckets.values() for g in b]


def _flips(t: nx.Graph):
    ok, emb = nx.check_planarity(t)
    for u, v in list(t.edges):
        # the two triangles on uv
        a = emb[u][v]["cw"]
        b = emb[u][v]["ccw"]
        if a == b or t.has_edge(a, b):
            continue
        h = t.copy()
        h.remove_edge(u, v)
        h.add_edge(a, b)
        if min(d for _, d in h.degree) >= 3:
            yield h


def triangulations(n: int) -> list[nx.Graph]:
    """All simple triangulations of the sphere with ``n >= 4`` vertices."""
    level = IsoStore()
    level.add(nx.complete_graph(4))
    for m in range(5, n + 1):
        nxt = IsoStore()
        frontier = []
        for t in level.graphs():
            for f in planar_faces(t):
                h = t.copy()
                h.add_edges_from((m - 1, x) for x in f)
                if nxt.add(h):
                    frontier.append(h)
        while frontier:
            t = frontier.pop()
            for h in _flips(t):
                if nxt.add(h):
                    frontier.append(h)
        level = nxt
    return level.graphs()


def _three_connected(g: nx.Graph) -> bool:
    """Connected after removing any two vertices (plain search, small n)."""
    adj = {v: set(g[v]) for v in g}
    nodes = list(adj)
    if len(nodes) < 4:
        return False
    for a, b in combinations(nodes, 2):
        rest = [v for v in nodes if v != a and v != b]
        seen = {rest[0]}
        stack = [rest[0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w != a and w != b and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(rest):
            return False
    return True


def self_dual_polyhedral(n: int) -> list[nx.Graph]:
    """3-connected planar graphs with ``2n - 2`` edges, up to isomorphism.

    Every polyhedral graph is a spanning subgraph of a triangulation (add
    face diagonals), so delete ``n - 4`` edges from each triangulation.
    """
    store = IsoStore()
    k = n - 4
    for t in triangulations(n):
        edges = sorted(tuple(sorted(e)) for e in t.edges)
        deg = dict(t.degree)

        def rec(start, removed):
            if len(removed) == k:
                h = t.copy()
                h.remove_edges_from(removed)
                if _three_connected(h):
                    store.add(h)
                return
            for i in range(start, len(edges)):
                u, v = edges[i]
                if deg[u] <= 3 or deg[v] <= 3:
                    continue
                deg[u] -= 1
                deg[v] -= 1
                removed.append(edges[i])
                rec(i + 1, removed)
                removed.pop()
                deg[u] += 1
                deg[v] += 1

        rec(0, [])
    return store.graphs()


def involutive_graphs(n: int) -> list[nx.Graph]:
    return [g for g in self_dual_polyhedral(n) if brute_involution(g) is not None]


# colouring -------------------------------------------------------------------------------------

def brute_chromatic(g: nx.Graph) -> int:
    nodes = list(g.nodes)
    if not nodes:
        return 0
    idx = {v: i for i, v in enumerate(nodes)}
    edges = [(idx[u], idx[v]) for u, v in g.edges if u != v]
    for k in range(1, len(nodes) + 1):
        for col in product(range(k), repeat=len(nodes) - 1):
            col = (0,) + col
            if all(col[a] != col[b] for a, b in edges):
                return k
    return len(nodes)


# ball polyhedron boundary by sampling ----------------------------------------------------------------

def fibonacci_sphere(m: int) -> np.ndarray:
    i = np.arange(m) + 0.5
    phi = np.arccos(1 - 2 * i / m)
    theta = np.pi * (1 + 5 ** 0.5) * i
    return np.stack([np.cos(theta) * np.sin(phi), np.sin(theta) * np.sin(phi), np.cos(phi)], 1)


def sampled_facets(P: np.ndarray, m: int = 40000) -> set[int]:
    """Centers whose unit sphere meets the unit-ball intersection in a sampled point."""
    dirs = fibonacci_sphere(m)
    out = set()
    for p in range(len(P)):
        z = P[p] + dirs
        if (np.linalg.norm(z[:, None, :] - P[None, :, :], axis=2).max(1) <= 1.0 + 1e-12).any():
            out.add(p)
    return out


def sampled_arcs(P: np.ndarray, m: int = 20000) -> dict[tuple[int, int], int]:
    """Number of boundary arcs on each circle S(p) & S(q), by sampling the circle."""
    out = {}
    t = np.linspace(0.0, 2 * np.pi, m, endpoint=False)
    for p, q in combinations(range(len(P)), 2):
        axis = P[q] - P[p]
        h = np.linalg.norm(axis)
        if h == 0 or h >= 2:
            continue
        axis = axis / h
        u = np.cross(axis, [1.0, 0.0, 0.0])
        if np.linalg.norm(u) < 0.5:
            u = np.cross(axis, [0.0, 1.0, 0.0])
        u /= np.linalg.norm(u)
        w = np.cross(axis, u)
        rad = np.sqrt(1.0 - h * h / 4)
        z = (P[p] + P[q]) / 2 + rad * (np.cos(t)[:, None] * u + np.sin(t)[:, None] * w)
        ok = np.linalg.norm(z[:, None, :] - P[None, :, :], axis=2).max(1) <= 1.0 + 1e-12
        if ok.all():
            out[(p, q)] = 1
        elif ok.any():
            # runs of consecutive inside samples around the circle
            out[(p, q)] = int(np.sum(ok & ~np.roll(ok, 1)))
    return out


def far_witness(P: np.ndarray, k: int, m: int = 20000) -> bool:
    """True if some sampled point of the ball intersection without ``P[k]``
    lies farther than 1 from ``P[k]``."""
    Q = np.delete(P, k, axis=0)
    dirs = fibonacci_sphere(m)
    for q in Q:
        z = q + dirs
        ok = np.linalg.norm(z[:, None, :] - Q[None, :, :], axis=2).max(1) <= 1.0
        if np.any(np.linalg.norm(z[ok] - P[k], axis=1) > 1.0 + 1e-9):
            return True
    return False


def pairs_within(P: np.ndarray, tol: float) -> set:
    D = np.linalg.norm(P[:, None] - P[None], axis=2)
    return {(i, j) for i, j in combinations(range(len(P)), 2) if D[i, j] >= D.max() * (1 - tol)}
