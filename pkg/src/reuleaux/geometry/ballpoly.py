"""Facial structure of ball polyhedra B(V) = intersection of unit balls.

Everything here works on the diameter-normalised coordinates of a
:class:`PointSet`, so "unit" means "one diameter".  Vertices are found by
trilaterating triples of unit spheres, edges are arcs of the circles
``S(p) & S(q)`` between consecutive vertices, and facets collect the edges
of one sphere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx
import numpy as np

from ..errors import InternalConsistencyError, PreconditionError
from ..graphcore.connectivity import connectivity
from ..graphcore.embedded import EmbeddedGraph
from ..graphcore.involution import verify_involution
from .miniball import circumradius_normalized
from .pointset import PointSet, diameter_graph

PRINCIPAL = "principal"
DANGLING = "dangling"


# low-level sphere geometry ----------------------------------------------------------

def sphere_triple_points(P: np.ndarray, triples: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Intersection points of the unit spheres around each triple of centers.

    Returns ``(points, owner)`` where ``owner[k]`` indexes ``triples``.
    Collinear triples and triples whose spheres miss each other are skipped;
    a tangential triple yields a single point.
    """
    if len(triples) == 0:
        return np.zeros((0, 3)), np.zeros(0, dtype=int)
    p1, p2, p3 = P[triples[:, 0]], P[triples[:, 1]], P[triples[:, 2]]
    u = p2 - p1
    d = np.linalg.norm(u, axis=1)
    ex = u / d[:, None]
    w = p3 - p1
    i = (ex * w).sum(1)
    perp = w - i[:, None] * ex
    j = np.linalg.norm(perp, axis=1)
    ok = j > 1e-12
    ey = np.zeros_like(perp)
    ey[ok] = perp[ok] / j[ok, None]
    ez = np.cross(ex, ey)
    x = d / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        y = (i ** 2 + j ** 2) / (2.0 * j) - i * x / j
    z2 = 1.0 - x ** 2 - y ** 2
    ok &= z2 > -tol
    z = np.sqrt(np.clip(z2, 0.0, None))
    base = p1 + x[:, None] * ex + y[:, None] * ey
    pts, owner = [], []
    for k in np.flatnonzero(ok):
        pts.append(base[k] + z[k] * ez[k])
        owner.append(k)
        if z[k] > tol:
            pts.append(base[k] - z[k] * ez[k])
            owner.append(k)
    if not pts:
        return np.zeros((0, 3)), np.zeros(0, dtype=int)
    return np.array(pts), np.array(owner)


@dataclass(frozen=True)
class Circle:
    """The circle ``S(p) & S(q)`` of two unit spheres."""

    center: np.ndarray
    axis: np.ndarray
    radius: float
    e1: np.ndarray
    e2: np.ndarray

    @classmethod
    def of(cls, p: np.ndarray, q: np.ndarray) -> "Circle":
        axis = q - p
        h = float(np.linalg.norm(axis))
        axis = axis / h
        radius = float(np.sqrt(max(1.0 - h * h / 4.0, 0.0)))
        helper = np.eye(3)[int(np.argmin(np.abs(axis)))]
        e1 = np.cross(axis, helper)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(axis, e1)
        return cls((p + q) / 2.0, axis, radius, e1, e2)

    def angle(self, z: np.ndarray) -> float:
        r = z - self.center
        return float(np.arctan2(r @ self.e2, r @ self.e1)) % (2 * np.pi)

    def point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return (self.center + self.radius * (np.cos(theta)[..., None] * self.e1
                                             + np.sin(theta)[..., None] * self.e2))

    def tangent(self, theta: float) -> np.ndarray:
        """Unit tangent in the direction of increasing angle."""
        return -np.sin(theta) * self.e1 + np.cos(theta) * self.e2

    def farthest_from(self, v: np.ndarray) -> np.ndarray:
        r = v - self.center
        r = r - (r @ self.axis) * self.axis
        n = np.linalg.norm(r)
        if n < 1e-12:
            return self.center + self.radius * self.e1
        return self.center - self.radius * r / n


def in_ball_polyhedron(P: np.ndarray, z: np.ndarray, tol: float) -> np.ndarray | bool:
    """Membership of ``z`` (one point or an array) in the unit-ball intersection."""
    z = np.asarray(z, dtype=float)
    single = z.ndim == 1
    z = z.reshape(-1, 3)
    dist = np.linalg.norm(z[:, None, :] - P[None, :, :], axis=2)
    ok = dist.max(1) <= 1.0 + tol
    return bool(ok[0]) if single else ok


# essential points ---------------------------------------------------------------------

def _require_small_circumradius(ps: PointSet) -> None:
    if circumradius_normalized(ps) >= 1.0:
        raise PreconditionError("circumradius must be below the diameter")


def _witness_candidates(Q: np.ndarray, v: np.ndarray, tol: float) -> np.ndarray:
    """Candidate farthest points of B(Q) from ``v``: sphere far points,
    circle far points and sphere-triple points."""
    cands = [Q + (Q - v) / np.maximum(np.linalg.norm(Q - v, axis=1), 1e-15)[:, None]]
    for i, j in combinations(range(len(Q)), 2):
        cands.append(Circle.of(Q[i], Q[j]).farthest_from(v)[None, :])
    triples = np.array(list(combinations(range(len(Q)), 3)), dtype=int).reshape(-1, 3)
    pts, _ = sphere_triple_points(Q, triples, tol)
    cands.append(pts)
    return np.vstack(cands)


def essential_indices(ps: PointSet) -> list[int]:
    _require_small_circumradius(ps)
    P = ps.normalized
    out = []
    for k in range(len(P)):
        Q = np.delete(P, k, axis=0)
        if len(Q) == 0:
            continue
        cands = _witness_candidates(Q, P[k], ps.tol)
        inside = in_ball_polyhedron(Q, cands, ps.tol)
        far = np.linalg.norm(cands - P[k], axis=1) > 1.0 + ps.tol
        if np.any(inside & far):
            out.append(k)
    return out


def essential_points(ps: PointSet) -> set[str]:
    """Labels whose removal strictly enlarges B(V)."""
    return {ps.labels[k] for k in essential_indices(ps)}


def is_tight(ps: PointSet) -> bool:
    if circumradius_normalized(ps) >= 1.0:
        return False
    return len(essential_indices(ps)) == len(ps)


# the complex --------------------------------------------------------------------------

@dataclass(frozen=True)
class Vertex:
    coords: np.ndarray
    support: frozenset[int]
    kind: str
    point: int | None = None  # index into V if the vertex is a point of V


@dataclass(frozen=True)
class Edge:
    """Arc of ``S(p) & S(q)`` running (by increasing angle) from ``ends[0]`` to ``ends[1]``."""

    centers: tuple[int, int]
    ends: tuple[int, int]
    theta: tuple[float, float]
    midpoint: np.ndarray


@dataclass
class BallComplex:
    """Facial structure of B(V) for a normalised point set."""

    ps: PointSet
    vertices: list[Vertex]
    edges: list[Edge]
    facets: dict[int, list[int]]         # center -> cyclic vertex order
    facet_edges: dict[int, list[int]]    # center -> incident edge ids
    notes: list[str] = field(default_factory=list)

    @property
    def centers(self) -> np.ndarray:
        return self.ps.normalized

    def circle(self, e: int) -> Circle:
        p, q = self.edges[e].centers
        return Circle.of(self.centers[p], self.centers[q])

    def vertex_of_point(self) -> dict[int, int]:
        return {v.point: k for k, v in enumerate(self.vertices) if v.point is not None}

    def vertex_label(self, k: int) -> str:
        v = self.vertices[k]
        return self.ps.labels[v.point] if v.point is not None else f"_v{k}"

    def vertices_are_points(self) -> bool:
        """``V = vert B(V)``: every vertex is a point of V and vice versa."""
        pts = [v.point for v in self.vertices]
        return None not in pts and sorted(pts) == list(range(len(self.ps)))

    def edge_tangent(self, e: int, at_start: bool) -> np.ndarray:
        """Direction in which the arc leaves its start (or its end)."""
        ed = self.edges[e]
        c = self.circle(e)
        if at_start:
            return c.tangent(ed.theta[0])
        return -c.tangent(ed.theta[1])

    def sample_edge(self, e: int, step_deg: float = 2.0) -> np.ndarray:
        ed = self.edges[e]
        t0, t1 = ed.theta
        span = (t1 - t0) % (2 * np.pi) or 2 * np.pi
        k = max(2, int(np.ceil(np.degrees(span) / step_deg)) + 1)
        return self.circle(e).point(t0 + np.linspace(0.0, span, k))

    # serialisation ------------------------------------------------------------------
    def to_dict(self) -> dict:
        lab = self.ps.labels
        return {
            "scale": self.ps.scale,
            "vertices": [
                {"label": self.vertex_label(k),
                 "coords": [float(c) for c in v.coords * self.ps.scale],
                 "support": sorted(lab[i] for i in v.support),
                 "kind": v.kind}
                for k, v in enumerate(self.vertices)
            ],
            "edges": [
                {"centers": [lab[e.centers[0]], lab[e.centers[1]]],
                 "ends": [self.vertex_label(e.ends[0]), self.vertex_label(e.ends[1])],
                 "midpoint": [float(c) for c in e.midpoint * self.ps.scale]}
                for e in self.edges
            ],
            "facets": {lab[p]: [self.vertex_label(k) for k in cyc] for p, cyc in self.facets.items()},
            "facet_edges": {lab[p]: list(es) for p, es in self.facet_edges.items()},
            "notes": list(self.notes),
        }


def _cluster(points: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage clusters of points closer than ``radius``."""
    g = nx.Graph()
    g.add_nodes_from(range(len(points)))
    if len(points):
        dist = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
        ii, jj = np.nonzero(np.triu(dist < radius, 1))
        g.add_edges_from(zip(ii.tolist(), jj.tolist()))
    return [sorted(c) for c in nx.connected_components(g)]


def _merge_radius(tol: float) -> float:
    return max(2.0 * tol, 1e-7)


def _build_complex(ps: PointSet) -> BallComplex:
    P = ps.normalized
    n = len(P)
    tol = ps.tol
    notes: list[str] = []
    triples = np.array(list(combinations(range(n), 3)), dtype=int).reshape(-1, 3)
    pts, owner = sphere_triple_points(P, triples, tol)
    if len(pts):
        keep = in_ball_polyhedron(P, pts, tol)
        pts, owner = pts[keep], owner[keep]

    dist_pp = np.linalg.norm(P[:, None] - P[None], axis=2)
    partners = [set(np.flatnonzero(np.abs(dist_pp[i] - 1.0) <= tol)) for i in range(n)]

    # candidate vertices: triple points plus points of V on two or more spheres
    cand = [pts]
    cand_point = [-1] * len(pts)
    for i in range(n):
        if len(partners[i]) >= 2:
            cand.append(P[i][None, :])
            cand_point.append(i)
        elif len(partners[i]) == 1:
            notes.append(f"point {ps.labels[i]} meets exactly one diameter; treated as a non-vertex")
    allc = np.vstack(cand) if cand else np.zeros((0, 3))
    radius = _merge_radius(tol)
    dpp = dist_pp + np.eye(n) * 9
    if n > 1 and dpp.min() < 2 * radius:
        raise PreconditionError("points of V closer than the vertex merge radius; lower tol")
    # candidates near a point of V snap to it, the rest are clustered
    to_pt = np.linalg.norm(allc[:, None, :] - P[None, :, :], axis=2)
    nearest = to_pt.argmin(1) if len(allc) else np.zeros(0, dtype=int)
    snapped: dict[int, list[int]] = {}
    loose = []
    for k in range(len(allc)):
        if cand_point[k] >= 0:
            snapped.setdefault(cand_point[k], []).append(k)
        elif to_pt[k, nearest[k]] < radius and len(partners[nearest[k]]) >= 2:
            snapped.setdefault(int(nearest[k]), []).append(k)
        else:
            loose.append(k)
    groups = [(i, cl) for i, cl in snapped.items()]
    groups += [(None, [loose[t] for t in cl]) for cl in _cluster(allc[loose], radius)]
    vertices: list[Vertex] = []
    for point, cl in groups:
        z = P[point] if point is not None else allc[cl].mean(0)
        dz = np.abs(np.linalg.norm(P - z, axis=1) - 1.0)
        support = set(np.flatnonzero(dz <= tol).tolist())
        for k in cl:
            if cand_point[k] < 0:
                support |= set(triples[owner[k]].tolist())
        if len(support) >= 3:
            kind = PRINCIPAL
        elif point is not None and len(support) == 2:
            kind = DANGLING
        else:
            continue
        vertices.append(Vertex(np.asarray(z), frozenset(support), kind, point))
    vertices.sort(key=lambda v: (v.point is None, v.point if v.point is not None else 0,
                                 tuple(np.round(v.coords, 9))))
    if len(vertices) > 1:
        vc = np.array([v.coords for v in vertices])
        d = np.linalg.norm(vc[:, None] - vc[None], axis=2) + np.eye(len(vc)) * 9
        if d.min() < 5 * radius:
            notes.append(f"near-coincident vertices (gap {d.min():.3g})")

    edges: list[Edge] = []
    for p, q in combinations(range(n), 2):
        on = [k for k, v in enumerate(vertices) if p in v.support and q in v.support]
        if not on:
            continue
        c = Circle.of(P[p], P[q])
        ang = sorted((c.angle(vertices[k].coords), k) for k in on)
        m = len(ang)
        for s in range(m):
            t0, a = ang[s]
            t1, b = ang[(s + 1) % m]
            span = (t1 - t0) % (2 * np.pi) or 2 * np.pi
            mid = c.point(t0 + span / 2)
            if in_ball_polyhedron(P, mid, tol):
                edges.append(Edge((p, q), (a, b), (t0, t0 + span), mid))

    facet_edges: dict[int, list[int]] = {}
    for e, ed in enumerate(edges):
        for c in ed.centers:
            facet_edges.setdefault(c, []).append(e)
    facets: dict[int, list[int]] = {}
    for p, es in sorted(facet_edges.items()):
        vs = sorted({k for e in es for k in edges[e].ends})
        zs = np.array([vertices[k].coords for k in vs])
        normal = zs.mean(0) - P[p]
        normal /= np.linalg.norm(normal)
        e1 = np.cross(normal, np.eye(3)[int(np.argmin(np.abs(normal)))])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(normal, e1)
        rel = zs - P[p]
        order = np.argsort(np.arctan2(rel @ e2, rel @ e1))
        facets[p] = [vs[i] for i in order]
    return BallComplex(ps, vertices, edges, facets, facet_edges, notes)


def ball_complex(ps: PointSet) -> BallComplex:
    """Facets, arcs and vertices of B(V) for a tight point set."""
    if len(ps) < 3:
        raise PreconditionError("a ball complex needs at least three points")
    if not is_tight(ps):
        raise PreconditionError("ball_complex needs a tight point set")
    return _build_complex(ps)


def one_skeleton(bc: BallComplex) -> EmbeddedGraph:
    """Vertices and arcs of ``bc`` with the rotation seen from outside B(V)."""
    nv = len(bc.vertices)
    rot: list[list[tuple[float, int]]] = [[] for _ in range(nv)]
    P = bc.centers
    frames = []
    for v in bc.vertices:
        normal = sum(v.coords - P[p] for p in v.support)
        normal = normal / np.linalg.norm(normal)
        e1 = np.cross(normal, np.eye(3)[int(np.argmin(np.abs(normal)))])
        e1 /= np.linalg.norm(e1)
        frames.append((e1, np.cross(normal, e1)))
    edges = []
    for e, ed in enumerate(bc.edges):
        edges.append(ed.ends)
        for dart, vk, start in ((2 * e, ed.ends[0], True), (2 * e + 1, ed.ends[1], False)):
            t = bc.edge_tangent(e, start)
            e1, e2 = frames[vk]
            rot[vk].append((float(np.arctan2(t @ e2, t @ e1)), dart))
    rotation = [[d for _, d in sorted(r)] for r in rot]
    return EmbeddedGraph(nv, edges, rotation)


# canonical involution -----------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalInvolution:
    """``map[v]`` is the label of the facet centered at ``v`` (i.e. ``v`` itself);
    ``faces[v]`` lists the labels of its vertices in cyclic order."""

    map: dict[str, str]
    faces: dict[str, tuple[str, ...]]
    edge_map: dict[int, int]

    def to_dict(self) -> dict:
        return {"map": dict(self.map), "faces": {k: list(v) for k, v in self.faces.items()},
                "edge_map": {str(k): v for k, v in self.edge_map.items()}}


def canonical_involution(bc: BallComplex) -> CanonicalInvolution:
    ps = bc.ps
    n = len(ps)
    if diameter_graph(ps).graph["e_count"] != 2 * n - 2:
        raise PreconditionError("canonical involution needs an extremal configuration")
    if not bc.vertices_are_points():
        raise PreconditionError("canonical involution needs V = vert B(V)")
    vk = bc.vertex_of_point()
    tau = []
    for p in range(n):
        cyc = bc.facets.get(p)
        if cyc is None:
            raise InternalConsistencyError(f"point {ps.labels[p]} has no facet")
        tau.append(tuple(bc.vertices[k].point for k in cyc))
    g = one_skeleton(bc)
    # skeleton vertex k carries point bc.vertices[k].point; reindex to point order
    perm = [bc.vertices[k].point for k in range(len(bc.vertices))]
    gp = EmbeddedGraph(g.n, [(perm[a], perm[b]) for a, b in g.edges],
                       [g.rotation[vk[p]] for p in range(n)])
    if not verify_involution(gp, tau):
        raise InternalConsistencyError("facet map violates the involution axioms")
    by_key = {}
    for e, ed in enumerate(bc.edges):
        ends = tuple(sorted(bc.vertices[k].point for k in ed.ends))
        by_key[(tuple(sorted(ed.centers)), ends)] = e
    edge_map = {}
    for (centers, ends), e in by_key.items():
        f = by_key.get((ends, centers))
        if f is None:
            raise InternalConsistencyError("an arc has no dual arc")
        edge_map[e] = f
    lab = ps.labels
    return CanonicalInvolution(
        {lab[p]: lab[p] for p in range(n)},
        {lab[p]: tuple(lab[x] for x in tau[p]) for p in range(n)},
        edge_map,
    )


# classification ------------------------------------------------------------------------

@dataclass
class ClassificationReport:
    n: int
    diameters: int
    extremal: bool
    critical: bool
    tight: bool
    vertices_are_points: bool
    standard: bool
    reuleaux: bool
    strongly_critical: bool
    skeleton_connectivity: int | None = None
    skeleton_cut: list[str] | None = None
    skeleton_min_cuts: list[list[str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def skeleton_is_standard(g: EmbeddedGraph) -> tuple[bool, int]:
    kappa = connectivity(g.simple_graph()).kappa if g.n else 0
    return g.is_simple() and g.is_spherical() and kappa >= 3, kappa


def classify(ps: PointSet) -> ClassificationReport:
    n = len(ps)
    if n < 4:
        raise PreconditionError("classification needs at least four points")
    dg = diameter_graph(ps)
    e = dg.graph["e_count"]
    extremal = e == 2 * n - 2
    critical = extremal and min(d for _, d in dg.degree) >= 3
    tight = is_tight(ps)
    bc = _build_complex(ps)
    notes = list(bc.notes)
    g = one_skeleton(bc)
    standard, kappa = (False, 0)
    cut, min_cuts = None, []
    if g.n:
        standard, kappa = skeleton_is_standard(g)
        conn = connectivity(g.simple_graph())
        if conn.cut:
            cut = sorted(bc.vertex_label(k) for k in conn.cut)
        min_cuts = [sorted(bc.vertex_label(k) for k in c) for c in conn.all_min_cuts]
        if not g.is_spherical():
            notes.append("1-skeleton rotation is not a sphere embedding")
        if not g.is_simple():
            notes.append("1-skeleton has loops or parallel arcs")
    vap = bc.vertices_are_points()
    reuleaux = standard and vap
    return ClassificationReport(
        n=n, diameters=e, extremal=extremal, critical=critical, tight=tight,
        vertices_are_points=vap, standard=standard, reuleaux=reuleaux,
        strongly_critical=reuleaux, skeleton_connectivity=kappa,
        skeleton_cut=cut, skeleton_min_cuts=min_cuts, notes=notes,
    )


# exports ---------------------------------------------------------------------------------

def to_off(bc: BallComplex, step_deg: float = 2.0) -> str:
    """Triangle mesh of the boundary: each facet is fanned from its far point."""
    verts: list[np.ndarray] = []
    tris: list[tuple[int, int, int]] = []
    P = bc.centers
    for p, es in sorted(bc.facet_edges.items()):
        cyc = bc.facets[p]
        if len(cyc) < 2:
            continue
        loop = []
        for s in range(len(cyc)):
            a, b = cyc[s], cyc[(s + 1) % len(cyc)]
            arc = next((e for e in es if set(bc.edges[e].ends) == {a, b}), None)
            if arc is None:
                continue
            pts = bc.sample_edge(arc, step_deg)
            if bc.edges[arc].ends[0] != a:
                pts = pts[::-1]
            loop.extend(pts[:-1])
        if len(loop) < 3:
            continue
        cen = np.mean(loop, axis=0) - P[p]
        apex = P[p] + cen / np.linalg.norm(cen)
        base = len(verts)
        verts.append(apex)
        verts.extend(loop)
        k = len(loop)
        for i in range(k):
            tris.append((base, base + 1 + i, base + 1 + (i + 1) % k))
    scale = bc.ps.scale
    lines = ["OFF", f"{len(verts)} {len(tris)} 0"]
    lines += [" ".join(repr(float(c)) for c in v * scale) for v in verts]
    lines += [f"3 {a} {b} {c}" for a, b, c in tris]
    return "\n".join(lines) + "\n"
