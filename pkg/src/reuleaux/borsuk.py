"""Borsuk numbers of finite sets, strongly critical subsets, and the
four-part partition of a Reuleaux polyhedron around a vertex."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.optimize import minimize

from .errors import InternalConsistencyError, PreconditionError
from .geometry.ballpoly import BallComplex, Circle, _build_complex, classify, in_ball_polyhedron
from .geometry.miniball import minimal_enclosing_ball
from .geometry.pointset import PointSet, diameter_graph, distance_matrix
from .graphcore.coloring import ColoringCertificate, chromatic_number, k_coloring, optimal_coloring

BOUNDARY_TOL = 1e-9


@dataclass
class BorsukReport:
    a: int
    partition: list[list[str]]
    class_diameters: list[float]
    critical_subset: list[str] | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def borsuk_number(ps: PointSet) -> BorsukReport:
    """``a(V)`` as the chromatic number of the diameter graph, with an optimal
    colouring whose classes are checked to have diameter below 1."""
    if len(ps) < 2:
        raise PreconditionError("Borsuk number needs at least two points")
    dg = diameter_graph(ps)
    a, col = optimal_coloring(dg)
    classes = [sorted(lb for lb, c in col.items() if c == k) for k in range(a)]
    D = distance_matrix(ps.normalized)
    diams = []
    for cl in classes:
        idx = [ps.index(lb) for lb in cl]
        diams.append(float(max((D[i, j] for i, j in combinations(idx, 2)), default=0.0)))
    if any(d >= 1.0 - ps.tol for d in diams):
        raise InternalConsistencyError("a colour class still realizes the diameter")
    subset = strongly_critical_subset(ps) if a == 4 else None
    return BorsukReport(a, classes, diams, subset)


def strongly_critical_subset(ps: PointSet, order=None) -> list[str] | None:
    """Delete points (in ``order``, default label order) while the diameter
    graph stays 4-chromatic; the survivors must span a Reuleaux polyhedron."""
    dg = diameter_graph(ps)
    if chromatic_number(dg) < 4:
        return None
    keep = list(ps.labels)
    for lb in (order if order is not None else ps.labels):
        trial = [x for x in keep if x != lb]
        if chromatic_number(dg.subgraph(trial)) == 4:
            keep = trial
    sub = ps.subset(keep)
    if len(sub) < 4 or not classify(sub).reuleaux:
        raise InternalConsistencyError(
            f"4-critical subset {keep} does not span a Reuleaux polyhedron")
    return sorted(keep)


def critical_coloring(ps: PointSet, v: str) -> ColoringCertificate:
    """Proper 4-colouring of the diameter graph in which ``v`` alone has colour 3."""
    if v not in ps.labels:
        raise PreconditionError(f"unknown label {v!r}")
    if not classify(ps).reuleaux:
        raise PreconditionError("critical colouring needs the vertex set of a Reuleaux polyhedron")
    dg = diameter_graph(ps)
    col = k_coloring(dg.subgraph([x for x in ps.labels if x != v]), 3)
    if col is None:
        raise InternalConsistencyError("diameter graph minus a vertex is not 3-colourable")
    col[v] = 3
    cert = ColoringCertificate(col, v)
    if not (cert.is_proper(dg) and cert.special_is_unique()):
        raise InternalConsistencyError("critical colouring is not proper")
    return cert


# wedges -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Wedge:
    """Region between the planes (center, a, b) through the arc from ``a``
    to ``b``, on the side of the arc, intersected with the body."""

    ends: tuple[int, int]
    centers: tuple[int, int]
    normals: np.ndarray   # (2, 3), pointing into the wedge
    offsets: np.ndarray   # (2,)
    body: np.ndarray      # normalised centers of the unit balls

    @classmethod
    def of_edge(cls, bc: BallComplex, e: int) -> "Wedge":
        ed = bc.edges[e]
        P = bc.centers
        a, b = (bc.vertices[k].point for k in ed.ends)
        za, zb = P[a], P[b]
        normals, offsets = [], []
        for c in ed.centers:
            nrm = np.cross(za - P[c], zb - P[c])
            nrm /= np.linalg.norm(nrm)
            if nrm @ (ed.midpoint - P[c]) < 0:
                nrm = -nrm
            normals.append(nrm)
            offsets.append(float(nrm @ P[c]))
        return cls((a, b), tuple(ed.centers), np.array(normals), np.array(offsets), P)

    def in_halfspaces(self, x, tol: float = 1e-12) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        s = x @ self.normals.T - self.offsets
        return np.all(s >= -tol, axis=-1)

    def contains(self, x, tol: float = 1e-12) -> np.ndarray | bool:
        ok = self.in_halfspaces(x, tol) & in_ball_polyhedron(self.body, x, tol)
        return bool(ok) if np.ndim(ok) == 0 else ok

    def nearest_point(self, x: np.ndarray) -> np.ndarray:
        """Closest wedge point to ``x``; one projection when it is feasible,
        a small convex program otherwise."""
        x = np.asarray(x, dtype=float)
        s = self.normals @ x - self.offsets
        y = x.copy()
        for k in np.argsort(s):
            if s[k] < 0:
                y = x - s[k] * self.normals[k]
                if self.contains(y, 1e-10):
                    return y
        if self.contains(x, 1e-10):
            return x
        cons = [{"type": "ineq", "fun": lambda z, k=k: self.normals[k] @ z - self.offsets[k],
                 "jac": lambda z, k=k: self.normals[k]} for k in range(2)]
        cons.append({"type": "ineq",
                     "fun": lambda z: 1.0 - ((z - self.body) ** 2).sum(1),
                     "jac": lambda z: -2.0 * (z - self.body)})
        start = self.body[list(self.ends)].mean(0)
        res = minimize(lambda z: ((z - x) ** 2).sum(), start, jac=lambda z: 2 * (z - x),
                       constraints=cons, method="SLSQP", options={"ftol": 1e-14, "maxiter": 200})
        return res.x


def wedge_membership(w: Wedge, x) -> bool:
    return bool(w.contains(np.asarray(x, dtype=float)))


# the Reuleaux body --------------------------------------------------------------------------

class ReuleauxBody:
    """A Reuleaux polyhedron with its arcs, wedges and sampling helpers.

    All coordinates are normalised (unit diameter)."""

    def __init__(self, ps: PointSet):
        rep = classify(ps)
        if not rep.reuleaux:
            raise PreconditionError("point set does not span a Reuleaux polyhedron")
        self.ps = ps
        self.bc: BallComplex = _build_complex(ps)
        self.P = ps.normalized
        self.wedges = [Wedge.of_edge(self.bc, e) for e in range(len(self.bc.edges))]
        self.facet_wedges = {p: list(es) for p, es in self.bc.facet_edges.items()}

    def contains(self, x, tol: float = BOUNDARY_TOL):
        return in_ball_polyhedron(self.P, x, tol)

    def boundary_centers(self, x, tol: float = BOUNDARY_TOL) -> list[int]:
        d = np.linalg.norm(self.P - x, axis=1)
        return list(np.flatnonzero(d >= 1.0 - tol))

    @cached_property
    def boundary_sample(self) -> np.ndarray:
        rng = np.random.default_rng(12345)
        pts = [self.P] + [self.bc.sample_edge(e, 1.0) for e in range(len(self.bc.edges))]
        pts.append(self.sample_boundary(4000, rng))
        return np.vstack(pts)

    def circumcenter(self, exclude_center=None, exclude_radius: float = 0.0) -> np.ndarray:
        S = self.boundary_sample
        if exclude_center is not None:
            S = S[np.linalg.norm(S - exclude_center, axis=1) >= exclude_radius]
        return minimal_enclosing_ball(S).center

    def sample_boundary(self, m: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform-ish points on the facets (rejection from each unit sphere)."""
        out = []
        per = max(1, m // len(self.P))
        for p in range(len(self.P)):
            got = 0
            cyc = self.bc.facets.get(p)
            if not cyc:
                continue
            zs = np.array([self.bc.vertices[k].coords for k in cyc])
            axis = zs.mean(0) - self.P[p]
            axis /= np.linalg.norm(axis)
            cosmax = min(float(((zs - self.P[p]) @ axis).min()), 1.0)
            while got < per:
                d = rng.normal(size=(4 * per, 3))
                d /= np.linalg.norm(d, axis=1, keepdims=True)
                d = d[d @ axis >= cosmax - 1e-9]
                z = self.P[p] + d
                z = z[self.contains(z, 1e-12)]
                take = z[: per - got]
                out.append(take)
                got += len(take)
        res = np.vstack(out)
        return res[:m] if len(res) >= m else res

    def sample_interior(self, m: int, rng: np.random.Generator) -> np.ndarray:
        lo = self.P.min(0) - 0.1
        hi = self.P.max(0) + 0.1
        out, got = [], 0
        while got < m:
            z = lo + (hi - lo) * rng.random((4 * m, 3))
            z = z[self.contains(z, 0.0)]
            out.append(z[: m - got])
            got += len(out[-1])
        return np.vstack(out)

    def nearest_boundary_point(self, x: np.ndarray) -> np.ndarray:
        """Closest point of the boundary to an interior point ``x``."""
        cands = []
        for p in range(len(self.P)):
            r = x - self.P[p]
            nr = np.linalg.norm(r)
            if nr > 1e-15:
                cands.append(self.P[p] + r / nr)
        for e, ed in enumerate(self.bc.edges):
            c = self.bc.circle(e)
            t = c.angle(c.center + (x - c.center) - ((x - c.center) @ c.axis) * c.axis)
            t0, t1 = ed.theta
            if (t - t0) % (2 * np.pi) <= (t1 - t0):
                cands.append(c.point(t))
        cands.extend(v.coords for v in self.bc.vertices)
        C = np.array(cands)
        C = C[self.contains(C, 1e-9)]
        return C[np.argmin(np.linalg.norm(C - x, axis=1))]

    def ray_exit(self, c: np.ndarray, u: np.ndarray) -> float:
        """Largest ``t`` with ``c + t u`` in the body (``c`` inside, ``|u| = 1``)."""
        w = c - self.P
        b = w @ u
        disc = b * b - ((w * w).sum(1) - 1.0)
        return float(np.min(-b + np.sqrt(np.clip(disc, 0.0, None))))


# the partition ---------------------------------------------------------------------------------

@dataclass
class PartitionAssignment:
    v: str
    eps: float
    eps1: float
    parts: list[int]
    tags: list[str]
    ties: list[int] = field(default_factory=list)
    coloring: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"v": self.v, "eps": self.eps, "eps1": self.eps1, "parts": list(self.parts),
                "tags": list(self.tags), "ties": list(self.ties),
                "coloring": {k: int(c) for k, c in self.coloring.items()}}


class _Classifier:
    def __init__(self, body: ReuleauxBody, v: str, eps: float):
        ps = body.ps
        self.body = body
        self.vi = ps.index(v)
        cert = critical_coloring(ps, v)
        # colour 3 is v itself; the other colours become parts 2..4
        self.part_of = np.array([1 if cert.assignment[lb] == 3 else cert.assignment[lb] + 2
                                 for lb in ps.labels])
        self.coloring = cert.assignment
        P = body.P
        r = float(min(np.linalg.norm(P[self.vi] - P[j]) for j in range(len(P)) if j != self.vi))
        self.eps1 = min(r / 2.0, eps / 2.0)
        self.center = body.circumcenter(P[self.vi], self.eps1)
        self.labels = ps.labels
        self.ties: list[int] = []

    def wedge_parts(self, w: Wedge, X: np.ndarray, idx=None) -> np.ndarray:
        """Rule for points of the wedge ``w``: the nearer arc end, or the
        end that is not ``v``; ties go to the smaller label."""
        a, b = w.ends
        if a == self.vi:
            return np.full(len(X), self.part_of[b])
        if b == self.vi:
            return np.full(len(X), self.part_of[a])
        P = self.body.P
        da = np.linalg.norm(X - P[a], axis=1)
        db = np.linalg.norm(X - P[b], axis=1)
        tie = np.abs(da - db) <= 1e-12
        if idx is not None:
            self.ties.extend(int(t) for t in np.asarray(idx)[tie])
        first = a if self.labels[a] < self.labels[b] else b
        out = np.where(da < db, self.part_of[a], self.part_of[b])
        out[tie] = self.part_of[first]
        return out

    def _wedge_pass(self, X: np.ndarray, idx=None) -> np.ndarray:
        """Parts from the first containing wedge, 0 where no wedge contains."""
        out = np.zeros(len(X), dtype=int)
        for w in self.body.wedges:
            todo = np.flatnonzero(out == 0)
            if not len(todo):
                break
            inside = todo[w.contains(X[todo], 1e-10)]
            if len(inside):
                out[inside] = self.wedge_parts(w, X[inside],
                                               None if idx is None else np.asarray(idx)[inside])
        return out

    def _facet_part(self, x: np.ndarray) -> int:
        best = None
        for p in self.body.boundary_centers(x):
            for e in self.body.facet_wedges.get(p, []):
                w = self.body.wedges[e]
                y = w.nearest_point(x)
                d = float(np.linalg.norm(y - x))
                if best is None or d < best[0]:
                    best = (d, w, y)
        if best is None:
            raise InternalConsistencyError("boundary point with no surrounding wedge")
        _, w, y = best
        return int(self.wedge_parts(w, y[None, :])[0])

    def boundary_parts(self, X: np.ndarray, idx=None) -> tuple[np.ndarray, np.ndarray]:
        """Parts of boundary points (P1 ignored) and whether a wedge decided."""
        out = self._wedge_pass(X, idx)
        by_wedge = out > 0
        for k in np.flatnonzero(~by_wedge):
            out[k] = self._facet_part(X[k])
        return out, by_wedge

    def closure_parts(self, X: np.ndarray) -> np.ndarray:
        Y = np.array([self.body.nearest_boundary_point(x) for x in X]).reshape(-1, 3)
        return self.boundary_parts(Y)[0]

    def run(self, Q: np.ndarray) -> tuple[np.ndarray, list[str]]:
        body, P = self.body, self.body.P
        n = len(Q)
        inside = body.contains(Q, BOUNDARY_TOL)
        if not np.all(inside):
            raise PreconditionError(f"query {int(np.flatnonzero(~inside)[0])} lies outside the body")
        parts = np.zeros(n, dtype=int)
        tags = np.array([""] * n, dtype=object)
        dv = np.linalg.norm(Q - P[self.vi], axis=1)
        p1 = dv < self.eps1
        parts[p1], tags[p1] = 1, "ball-P1"
        dist = np.linalg.norm(Q[:, None, :] - P[None, :, :], axis=2)
        rest = np.flatnonzero(~p1)
        near = dist[rest].min(1) <= 1e-12
        for k in rest[near]:
            parts[k], tags[k] = self.part_of[int(np.argmin(dist[k]))], "vertex"
        rest = rest[~near]
        wp = self._wedge_pass(Q[rest], rest)
        parts[rest[wp > 0]], tags[rest[wp > 0]] = wp[wp > 0], "wedge"
        rest = rest[wp == 0]
        on_bd = dist[rest].max(1) >= 1.0 - BOUNDARY_TOL
        for k in rest[on_bd]:
            parts[k], tags[k] = self._facet_part(Q[k]), "facet"
        rest = rest[~on_bd]
        # closure of P1 and the apex of the rays go to the nearest boundary point
        u = Q[rest] - self.center
        nu = np.linalg.norm(u, axis=1)
        special = (dv[rest] <= self.eps1 * (1.0 + 1e-9)) | (nu <= 1e-12)
        if special.any():
            ks = rest[special]
            parts[ks], tags[ks] = self.closure_parts(Q[ks]), "closure"
        rest, u, nu = rest[~special], u[~special], nu[~special]
        if len(rest):
            u = u / nu[:, None]
            t = np.array([body.ray_exit(self.center, uu) for uu in u])
            hits = self.center + t[:, None] * u
            # a ray may leave the region through the small sphere around v
            rel = self.center - P[self.vi]
            bq = u @ rel
            disc = bq * bq - (rel @ rel - self.eps1 ** 2)
            t_in = -bq - np.sqrt(np.clip(disc, 0.0, None))
            via_ball = (disc > 0) & (t_in >= nu) & (t_in < t)
            hits[via_ball] = self.center + t_in[via_ball, None] * u[via_ball]
            hp = np.zeros(len(rest), dtype=int)
            in_ball = via_ball | (np.linalg.norm(hits - P[self.vi], axis=1) < self.eps1)
            if in_ball.any():
                hp[in_ball] = self.closure_parts(hits[in_ball])
            if (~in_ball).any():
                hp[~in_ball] = self.boundary_parts(hits[~in_ball])[0]
            parts[rest], tags[rest] = hp, "interior"
        return parts, list(tags)


def critical_partition(body: ReuleauxBody | PointSet, v: str, eps: float, queries) -> PartitionAssignment:
    """Assign each query point of the body to one of four parts around ``v``.

    Queries and ``eps`` are in the units of the body's point set.
    """
    if not isinstance(body, ReuleauxBody):
        body = ReuleauxBody(body)
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    Q = np.asarray(queries, dtype=float).reshape(-1, 3) / body.ps.scale
    cl = _Classifier(body, v, eps / body.ps.scale)
    parts, tags = cl.run(Q)
    return PartitionAssignment(v, eps, cl.eps1 * body.ps.scale, [int(p) for p in parts], tags,
                               sorted(set(cl.ties)), cl.coloring)


def part_diameters(points, parts) -> dict[int, float]:
    """Sample diameter of each part (through the convex hull when large)."""
    from scipy.spatial import ConvexHull, QhullError
    from scipy.spatial.distance import pdist

    X = np.asarray(points, dtype=float)
    parts = np.asarray(parts)
    out = {}
    for k in sorted(set(parts.tolist())):
        S = X[parts == k]
        if len(S) > 50:
            try:
                S = S[ConvexHull(S).vertices]
            except QhullError:  # flat sample; fall back to all pairs
                pass
        out[int(k)] = float(pdist(S).max()) if len(S) > 1 else 0.0
    return out
