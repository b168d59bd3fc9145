"""Labelled point sets, diameters and diameter graphs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import networkx as nx
import numpy as np

from ..errors import PreconditionError, SchemaError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PointSet:
    """Ordered, labelled points in R^3 with a relative tolerance.

    ``coords`` keeps the input units.  All predicates work on
    :attr:`normalized`, the copy rescaled to unit diameter; ``tol`` is relative
    to the diameter.
    """

    labels: tuple[str, ...]
    coords: np.ndarray
    tol: float = DEFAULT_TOL
    scale: float = field(init=False)
    normalized: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != 3:
            raise PreconditionError("points must be an (n, 3) array")
        labels = tuple(str(lb) for lb in self.labels)
        if len(labels) != len(coords):
            raise PreconditionError("one label per point is required")
        if len(set(labels)) != len(labels):
            raise PreconditionError("labels must be distinct")
        if not np.all(np.isfinite(coords)):
            raise PreconditionError("coordinates must be finite")
        if self.tol <= 0:
            raise PreconditionError("tol must be positive")
        coords.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "coords", coords)
        scale = _max_distance(coords) if len(coords) >= 2 else 1.0
        if scale == 0.0:
            raise PreconditionError("all points coincide")
        norm = coords / scale
        norm.setflags(write=False)
        object.__setattr__(self, "scale", float(scale))
        object.__setattr__(self, "normalized", norm)

    @classmethod
    def from_array(cls, coords, labels: Sequence[str] | None = None, tol: float = DEFAULT_TOL) -> "PointSet":
        coords = np.asarray(coords, dtype=float)
        if labels is None:
            labels = [str(i) for i in range(len(coords))]
        return cls(tuple(labels), coords, tol)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def subset(self, labels) -> "PointSet":
        idx = [self.index(lb) for lb in labels]
        return PointSet(tuple(self.labels[i] for i in idx), self.coords[idx], self.tol)

    def with_points(self, coords, labels) -> "PointSet":
        """Return a new set with extra points appended (input units)."""
        coords = np.vstack([self.coords, np.asarray(coords, dtype=float).reshape(-1, 3)])
        return PointSet(self.labels + tuple(labels), coords, self.tol)

    def relabel(self, mapping: dict) -> "PointSet":
        return PointSet(tuple(mapping.get(lb, lb) for lb in self.labels), self.coords, self.tol)

    # JSON ------------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "points": [[float(c) for c in p] for p in self.coords],
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, data) -> "PointSet":
        if not isinstance(data, dict):
            raise SchemaError("point-set JSON must be an object")
        try:
            points = data["points"]
        except KeyError:
            raise SchemaError("missing 'points'") from None
        if not isinstance(points, list) or not points:
            raise SchemaError("'points' must be a non-empty list")
        for p in points:
            if not (isinstance(p, list) and len(p) == 3
                    and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)):
                raise SchemaError(f"bad point {p!r}")
        labels = data.get("labels")
        if labels is None:
            labels = [str(i) for i in range(len(points))]
        if not isinstance(labels, list) or len(labels) != len(points):
            raise SchemaError("'labels' must list one label per point")
        tol = data.get("tol", DEFAULT_TOL)
        if not isinstance(tol, (int, float)) or tol <= 0:
            raise SchemaError("'tol' must be a positive number")
        try:
            return cls(tuple(str(lb) for lb in labels), np.array(points, dtype=float), float(tol))
        except PreconditionError as exc:
            raise SchemaError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "PointSet":
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc.msg})") from exc
        return cls.from_dict(data)


def _max_distance(coords: np.ndarray) -> float:
    diff = coords[:, None, :] - coords[None, :, :]
    return float(np.sqrt((diff ** 2).sum(-1)).max())


def distance_matrix(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((diff ** 2).sum(-1))


def diameter(ps: PointSet) -> tuple[float, list[tuple[str, str]]]:
    """Diameter in input units and every label pair realizing it within ``tol``."""
    if len(ps) < 2:
        raise PreconditionError("diameter needs at least two points")
    dist = distance_matrix(ps.normalized)
    pairs = [
        (ps.labels[i], ps.labels[j])
        for i, j in combinations(range(len(ps)), 2)
        if dist[i, j] >= 1.0 - ps.tol
    ]
    return ps.scale, pairs


def diameter_pairs_idx(ps: PointSet) -> list[tuple[int, int]]:
    dist = distance_matrix(ps.normalized)
    n = len(ps)
    return [(i, j) for i, j in combinations(range(n), 2) if dist[i, j] >= 1.0 - ps.tol]


def diameter_graph(ps: PointSet) -> nx.Graph:
    """Graph on the labels whose edges are the diameter pairs.

    ``G.graph["e_count"]`` holds the number of diameters.
    """
    _, pairs = diameter(ps)
    g = nx.Graph()
    g.add_nodes_from(ps.labels)
    g.add_edges_from(pairs)
    g.graph["e_count"] = g.number_of_edges()
    return g
