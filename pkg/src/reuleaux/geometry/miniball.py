"""Minimal enclosing ball (Welzl's move-to-front algorithm)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .pointset import PointSet

JUNG_RATIO = float(np.sqrt(3.0 / 8.0))


@dataclass(frozen=True)
class Circumball:
    center: np.ndarray
    radius: float

    def contains(self, p, tol: float = 0.0) -> bool:
        return float(np.linalg.norm(np.asarray(p) - self.center)) <= self.radius + tol


def _sphere_through(support: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Smallest sphere whose boundary passes through all support points."""
    p0 = support[0]
    if len(support) == 1:
        return p0.copy(), 0.0
    U = np.array([p - p0 for p in support[1:]])
    A = 2.0 * U @ U.T
    b = (U ** 2).sum(1)
    lam, *_ = np.linalg.lstsq(A, b, rcond=None)
    c = p0 + lam @ U
    return c, float(np.linalg.norm(support[0] - c))


def _ball_of_support(support: list[np.ndarray], eps: float) -> tuple[np.ndarray, float]:
    if not support:
        return np.zeros(3), -1.0
    c, r = _sphere_through(support)
    if all(np.linalg.norm(p - c) <= r + eps for p in support) and \
            all(abs(np.linalg.norm(p - c) - r) <= eps for p in support):
        return c, r
    # degenerate support (collinear / coplanar-cocircular); fall back to the
    # smallest sub-support ball that still encloses every support point
    best = None
    for k in range(1, len(support)):
        for sub in combinations(support, k):
            c, r = _sphere_through(list(sub))
            if all(np.linalg.norm(p - c) <= r + eps for p in support):
                if best is None or r < best[1]:
                    best = (c, r)
        if best is not None:
            return best
    return c, r


def minimal_enclosing_ball(points, seed: int = 0) -> Circumball:
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise ValueError("no points")
    span = float(np.ptp(pts, axis=0).max()) if len(pts) > 1 else 1.0
    eps = 1e-12 * max(span, 1.0)
    order = np.random.default_rng(seed).permutation(len(pts))
    P = [pts[i] for i in order]

    def mtf(end: int, support: list[np.ndarray]):
        c, r = _ball_of_support(support, eps)
        if len(support) == 4:
            return c, r
        i = 0
        while i < end:
            if r < 0 or np.linalg.norm(P[i] - c) > r + eps:
                c, r = mtf(i, support + [P[i]])
                P.insert(0, P.pop(i))
            i += 1
        return c, r

    c, r = mtf(len(P), [])
    return Circumball(np.asarray(c), max(float(r), 0.0))


def circumball(ps: PointSet) -> Circumball:
    """Minimal enclosing ball of ``ps`` in input units."""
    return minimal_enclosing_ball(ps.coords)


def circumradius_normalized(ps: PointSet) -> float:
    return minimal_enclosing_ball(ps.normalized).radius
