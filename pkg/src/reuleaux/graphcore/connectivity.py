"""Exact vertex connectivity up to 3, with minimum cut witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx


@dataclass(frozen=True)
class Connectivity:
    """``kappa`` is exact for 0..2; 3 stands for "at least 3"."""

    kappa: int
    cut: frozenset | None
    all_min_cuts: tuple[frozenset, ...] = field(default=())


def _connected_without(g: nx.Graph, removed) -> bool:
    rest = [v for v in g if v not in removed]
    if len(rest) <= 1:
        return True
    return nx.is_connected(g.subgraph(rest))


def connectivity(g: nx.Graph) -> Connectivity:
    n = g.number_of_nodes()
    if n == 0 or not nx.is_connected(g):
        return Connectivity(0, frozenset(), (frozenset(),))
    nodes = sorted(g.nodes, key=str)
    if g.number_of_edges() == n * (n - 1) // 2:
        return Connectivity(min(n - 1, 3), None)
    cuts1 = tuple(frozenset([v]) for v in nodes if not _connected_without(g, {v}))
    if cuts1:
        return Connectivity(1, cuts1[0], cuts1)
    cuts2 = tuple(
        frozenset(pair) for pair in combinations(nodes, 2)
        if not _connected_without(g, set(pair))
    )
    if cuts2:
        return Connectivity(2, cuts2[0], cuts2)
    return Connectivity(3, None)


def is_3_connected(g: nx.Graph) -> bool:
    return g.number_of_nodes() >= 4 and connectivity(g).kappa >= 3
