"""Exact vertex colouring and 4-criticality certificates."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from ..errors import ResourceLimitError

MAX_VERTICES = 64


@dataclass(frozen=True)
class ColoringCertificate:
    assignment: dict
    special_vertex: object | None = None

    def is_proper(self, g: nx.Graph) -> bool:
        if set(self.assignment) != set(g.nodes):
            return False
        return all(self.assignment[u] != self.assignment[v] for u, v in g.edges)

    def special_is_unique(self) -> bool:
        if self.special_vertex is None:
            return True
        c = self.assignment[self.special_vertex]
        return sum(1 for x in self.assignment.values() if x == c) == 1

    def to_dict(self) -> dict:
        return {
            "assignment": {str(k): int(v) for k, v in self.assignment.items()},
            "special_vertex": None if self.special_vertex is None else str(self.special_vertex),
        }


def _masks(g: nx.Graph):
    nodes = list(g.nodes)
    index = {v: i for i, v in enumerate(nodes)}
    adj = [0] * len(nodes)
    for u, v in g.edges:
        if u == v:
            continue
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    return nodes, adj


def _k_color(adj: list[int], k: int) -> list[int] | None:
    """DSATUR backtracking; colours are introduced in order, so the first
    coloured vertex always gets colour 0."""
    n = len(adj)
    color = [-1] * n
    if n == 0:
        return color
    if k <= 0:
        return None
    # neighbour colour masks per vertex
    nbr_colors = [0] * n
    uncolored = (1 << n) - 1

    def pick() -> int:
        best, key = -1, None
        m = uncolored
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            kv = (bin(nbr_colors[v]).count("1"), bin(adj[v] & uncolored).count("1"))
            if key is None or kv > key:
                best, key = v, kv
        return best

    def rec(used: int) -> bool:
        nonlocal uncolored
        if not uncolored:
            return True
        v = pick()
        forbidden = nbr_colors[v]
        limit = min(k, used + 1)
        for c in range(limit):
            if forbidden >> c & 1:
                continue
            color[v] = c
            uncolored &= ~(1 << v)
            touched = []
            m = adj[v] & uncolored
            bit = 1 << c
            while m:
                low = m & -m
                w = low.bit_length() - 1
                m ^= low
                if not nbr_colors[w] & bit:
                    nbr_colors[w] |= bit
                    touched.append(w)
            if rec(max(used, c + 1)):
                return True
            for w in touched:
                nbr_colors[w] &= ~bit
            uncolored |= 1 << v
            color[v] = -1
        return False

    return color if rec(0) else None


def k_coloring(g: nx.Graph, k: int) -> dict | None:
    """A proper colouring with colours ``0..k-1`` or ``None``."""
    if g.number_of_nodes() > MAX_VERTICES:
        raise ResourceLimitError(f"colouring is capped at {MAX_VERTICES} vertices")
    nodes, adj = _masks(g)
    col = _k_color(adj, k)
    if col is None:
        return None
    return {v: c for v, c in zip(nodes, col)}


def _clique_number(g: nx.Graph) -> int:
    if g.number_of_nodes() == 0:
        return 0
    return max(len(c) for c in nx.find_cliques(g))


def optimal_coloring(g: nx.Graph) -> tuple[int, dict]:
    """Chromatic number and a colouring attaining it (branch and bound
    between the clique bound and the DSATUR greedy bound)."""
    if g.number_of_nodes() > MAX_VERTICES:
        raise ResourceLimitError(f"colouring is capped at {MAX_VERTICES} vertices")
    if g.number_of_nodes() == 0:
        return 0, {}
    greedy = nx.greedy_color(g, strategy="DSATUR")
    upper = max(greedy.values()) + 1
    for k in range(_clique_number(g), upper):
        col = k_coloring(g, k)
        if col is not None:
            return k, col
    return upper, dict(greedy)


def chromatic_number(g: nx.Graph) -> int:
    return optimal_coloring(g)[0]


def is_vertex_4_critical(g: nx.Graph) -> tuple[bool, list[ColoringCertificate]]:
    """Chromatic number 4 and every vertex-deleted subgraph 3-colourable.

    Each certificate 3-colours ``g - v`` and gives ``v`` colour 3, so ``v``
    is the only vertex of its colour.
    """
    if chromatic_number(g) != 4:
        return False, []
    certs = []
    for v in g.nodes:
        h = g.subgraph([u for u in g.nodes if u != v])
        col = k_coloring(h, 3)
        if col is None:
            return False, certs
        col[v] = 3
        certs.append(ColoringCertificate(col, v))
    return True, certs


def is_edge_4_critical(g: nx.Graph) -> bool:
    if chromatic_number(g) != 4:
        return False
    for u, v in list(g.edges):
        h = g.copy()
        h.remove_edge(u, v)
        if k_coloring(h, 3) is None:
            return False
    return True
