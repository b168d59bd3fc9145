"""Numerical realization of involutive graphs as Reuleaux vertex sets.

Diagonal pairs are pushed to unit distance and every other pair is kept at
least ``delta`` below it.  A failed search is only a failed search; it says
nothing about whether a realization exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import least_squares

from .errors import PreconditionError, ReuleauxError
from .generator import InvolutiveGraph
from .geometry.ballpoly import _build_complex, canonical_involution, classify, one_skeleton
from .geometry.pointset import PointSet
from .graphcore.embedded import EmbeddedGraph, are_isomorphic

DEFAULT_DELTA = 1e-3
DEFAULT_RESTARTS = 32
MAX_REALIZE_N = 14


@dataclass(frozen=True)
class RealizationProblem:
    n: int
    diagonal: tuple[tuple[int, int], ...]
    other: tuple[tuple[int, int], ...]
    delta: float = DEFAULT_DELTA
    weight: float = 1.0

    def __post_init__(self):
        allp = {tuple(sorted(p)) for p in combinations(range(self.n), 2)}
        d = {tuple(sorted(p)) for p in self.diagonal}
        o = {tuple(sorted(p)) for p in self.other}
        if d & o or d | o != allp:
            raise PreconditionError("diagonal and non-diagonal pairs must partition all pairs")

    @classmethod
    def from_pairs(cls, n: int, diagonal, delta: float = DEFAULT_DELTA) -> "RealizationProblem":
        d = sorted({tuple(sorted(map(int, p))) for p in diagonal})
        o = [p for p in combinations(range(n), 2) if p not in set(d)]
        return cls(n, tuple(d), tuple(o), delta)

    @classmethod
    def of(cls, ig: InvolutiveGraph, delta: float = DEFAULT_DELTA) -> "RealizationProblem":
        return cls.from_pairs(ig.n, ig.diagonal().edges, delta)


# objective ------------------------------------------------------------------------------

def _pairs(pairs) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array(pairs, dtype=int).reshape(-1, 2)
    return arr[:, 0], arr[:, 1]


def residuals(X: np.ndarray, prob: RealizationProblem) -> np.ndarray:
    X = X.reshape(prob.n, 3)
    i, j = _pairs(prob.diagonal)
    rd = np.linalg.norm(X[i] - X[j], axis=1) - 1.0
    k, m = _pairs(prob.other)
    dn = np.linalg.norm(X[k] - X[m], axis=1)
    rn = np.sqrt(prob.weight) * np.maximum(0.0, dn - (1.0 - prob.delta))
    return np.concatenate([rd, rn])


def jacobian(X: np.ndarray, prob: RealizationProblem) -> np.ndarray:
    """Jacobian of :func:`residuals` with respect to the flattened coordinates."""
    X = X.reshape(prob.n, 3)
    rows = []
    for pairs, kind in ((prob.diagonal, "d"), (prob.other, "n")):
        for a, b in pairs:
            r = np.zeros(3 * prob.n)
            diff = X[a] - X[b]
            dist = np.linalg.norm(diff)
            if kind == "n" and dist <= 1.0 - prob.delta:
                rows.append(r)
                continue
            g = diff / max(dist, 1e-15)
            if kind == "n":
                g = g * np.sqrt(prob.weight)
            r[3 * a:3 * a + 3] = g
            r[3 * b:3 * b + 3] = -g
            rows.append(r)
    return np.array(rows).reshape(-1, 3 * prob.n)


def objective(X: np.ndarray, prob: RealizationProblem) -> float:
    r = residuals(X, prob)
    return float(r @ r)


def gradient(X: np.ndarray, prob: RealizationProblem) -> np.ndarray:
    return 2.0 * jacobian(X, prob).T @ residuals(X, prob)


# gauge ----------------------------------------------------------------------------------

def _to_full(z: np.ndarray, n: int) -> np.ndarray:
    X = np.zeros((n, 3))
    if n > 1:
        X[1, 0] = z[0]
    if n > 2:
        X[2, :2] = z[1:3]
    if n > 3:
        X[3:] = z[3:].reshape(-1, 3)
    return X


def _gauge_jac(n: int) -> np.ndarray:
    """d(full coords) / d(free parameters)."""
    free = [(1, 0), (2, 0), (2, 1)] + [(v, c) for v in range(3, n) for c in range(3)]
    free = [(v, c) for v, c in free if v < n]
    J = np.zeros((3 * n, len(free)))
    for k, (v, c) in enumerate(free):
        J[3 * v + c, k] = 1.0
    return J


def gauge_fix(X: np.ndarray) -> np.ndarray:
    """Rigidly move ``X`` so that x0 = 0, x1 is on +x and x2 in the xy-plane."""
    X = np.asarray(X, dtype=float) - X[0]
    n = len(X)
    if n < 2:
        return X
    e1 = X[1] / np.linalg.norm(X[1])
    if n > 2:
        w = X[2] - (X[2] @ e1) * e1
        if np.linalg.norm(w) < 1e-12:
            w = np.cross(e1, np.eye(3)[int(np.argmin(np.abs(e1)))])
    else:
        w = np.cross(e1, np.eye(3)[int(np.argmin(np.abs(e1)))])
    e2 = w / np.linalg.norm(w)
    e3 = np.cross(e1, e2)
    return X @ np.array([e1, e2, e3]).T


def _free(X: np.ndarray) -> np.ndarray:
    n = len(X)
    z = [X[1, 0]] if n > 1 else []
    if n > 2:
        z += [X[2, 0], X[2, 1]]
    if n > 3:
        z += list(X[3:].ravel())
    return np.array(z, dtype=float)


# initial guesses -------------------------------------------------------------------------

def spectral_seed(prob: RealizationProblem) -> np.ndarray:
    """Top eigenvectors of the diagonal-graph Laplacian push diagonal pairs apart."""
    L = np.zeros((prob.n, prob.n))
    for a, b in prob.diagonal:
        L[a, b] = L[b, a] = -1.0
    L -= np.diag(L.sum(1))
    _, vecs = np.linalg.eigh(L)
    X = vecs[:, -3:].copy()
    i, j = _pairs(prob.diagonal)
    mean = np.linalg.norm(X[i] - X[j], axis=1).mean() if len(i) else 1.0
    return X / max(mean, 1e-12)


def random_seed(n: int, rng: np.random.Generator, radius: float = 0.7) -> np.ndarray:
    d = rng.normal(size=(n, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * radius * rng.random((n, 1)) ** (1.0 / 3.0)


# results ---------------------------------------------------------------------------------

@dataclass
class VerificationReport:
    diagonal_unit: bool
    others_short: bool
    reuleaux: bool
    skeleton_isomorphic: bool
    involution_matches: bool = False
    details: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.diagonal_unit and self.others_short and self.reuleaux and self.skeleton_isomorphic

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


@dataclass
class RealizationResult:
    points: np.ndarray
    diagonal_residual: float
    other_violation: float
    converged: bool
    restart: int | None
    attempts: int
    verification: VerificationReport | None = None
    solutions: list[np.ndarray] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "points": [[float(c) for c in p] for p in self.points],
            "diagonal_residual": float(self.diagonal_residual),
            "other_violation": float(self.other_violation),
            "converged": self.converged,
            "restart": self.restart,
            "attempts": self.attempts,
            "verification": None if self.verification is None else self.verification.to_dict(),
            "distinct_solutions": len(self.solutions),
        }

    def point_set(self, tol: float = 1e-6) -> PointSet:
        return PointSet.from_array(self.points, [str(i) for i in range(len(self.points))], tol)


def measure(X: np.ndarray, prob: RealizationProblem) -> tuple[float, float]:
    """Max diagonal residual and max amount by which a non-diagonal pair
    exceeds ``1 - delta``."""
    X = X.reshape(prob.n, 3)
    i, j = _pairs(prob.diagonal)
    rd = np.abs(np.linalg.norm(X[i] - X[j], axis=1) - 1.0)
    k, m = _pairs(prob.other)
    dn = np.linalg.norm(X[k] - X[m], axis=1)
    viol = np.maximum(0.0, dn - (1.0 - prob.delta))
    return (float(rd.max()) if len(rd) else 0.0, float(viol.max()) if len(viol) else 0.0)


def _polish(X0: np.ndarray, prob: RealizationProblem) -> np.ndarray:
    n = prob.n
    G = _gauge_jac(n)
    z0 = _free(gauge_fix(X0))
    sol = least_squares(
        lambda z: residuals(_to_full(z, n), prob),
        z0,
        jac=lambda z: jacobian(_to_full(z, n), prob) @ G,
        method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000,
    )
    return _to_full(sol.x, n)


def _distance_signature(X: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(len(X), 1)
    return np.sort(np.linalg.norm(X[i] - X[j], axis=1))


def solve(prob: RealizationProblem, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
          solver_tol: float = 1e-9, accept=None, collect_all: bool = False) -> RealizationResult:
    """Restarted least-squares search; restart 0 is the spectral seed.

    ``accept(X)`` may veto a numerically converged configuration.
    """
    rng = np.random.default_rng(seed)
    best = None
    found = None
    solutions: list[np.ndarray] = []
    for r in range(restarts):
        X0 = spectral_seed(prob) if r == 0 else random_seed(prob.n, rng)
        X = _polish(X0, prob)
        rd, viol = measure(X, prob)
        ok = rd <= solver_tol and viol == 0.0
        if ok and accept is not None:
            ok = accept(X)
        if best is None or (rd + viol) < (best[1] + best[2]):
            best = (X, rd, viol)
        if ok:
            if found is None:
                found = (X, rd, viol, r)
            if collect_all:
                sig = _distance_signature(X)
                if not any(np.allclose(sig, _distance_signature(s), atol=1e-6) for s in solutions):
                    solutions.append(X)
            else:
                break
    if found is not None:
        X, rd, viol, r = found
        return RealizationResult(X, rd, viol, True, r, r + 1 if not collect_all else restarts,
                                 solutions=solutions or [X])
    X, rd, viol = best
    return RealizationResult(X, rd, viol, False, None, restarts)


def realize(ig: InvolutiveGraph, restarts: int = DEFAULT_RESTARTS, seed: int = 0,
            delta: float = DEFAULT_DELTA, tol: float = 1e-6, collect_all: bool = False) -> RealizationResult:
    if ig.n > MAX_REALIZE_N:
        raise PreconditionError(f"realization is capped at n = {MAX_REALIZE_N}")
    if not ig.verify():
        raise PreconditionError("realize needs a verified involutive graph")
    prob = RealizationProblem.of(ig, delta)

    def accept(X):
        return verify_realization(X, ig, tol).passed

    res = solve(prob, restarts, seed, accept=accept, collect_all=collect_all)
    res.verification = verify_realization(res.points, ig, tol)
    return res


def _skeleton_on_points(bc) -> EmbeddedGraph | None:
    """The 1-skeleton with vertex ``k`` renamed to the index of its point."""
    if not bc.vertices_are_points():
        return None
    g = one_skeleton(bc)
    perm = [v.point for v in bc.vertices]
    rot = [None] * g.n
    for k in range(g.n):
        rot[perm[k]] = g.rotation[k]
    return EmbeddedGraph(g.n, [(perm[a], perm[b]) for a, b in g.edges], rot)


def verify_realization(points, ig: InvolutiveGraph, tol: float = 1e-6) -> VerificationReport:
    X = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(X) != ig.n:
        raise PreconditionError("one point per graph vertex is required")
    details = []
    diam = float(max(np.linalg.norm(X[a] - X[b]) for a, b in combinations(range(len(X)), 2)))
    Y = X / diam
    diag = {tuple(sorted(e)) for e in ig.diagonal().edges}
    dists = {p: float(np.linalg.norm(Y[p[0]] - Y[p[1]])) for p in combinations(range(len(Y)), 2)}
    a_ok = all(abs(dists[p] - 1.0) <= tol for p in diag)
    b_ok = all(d < 1.0 - tol for p, d in dists.items() if p not in diag)
    if not a_ok:
        details.append("a diagonal pair is not at unit distance")
    if not b_ok:
        details.append("a non-diagonal pair reaches the diameter")
    reul = iso = inv_ok = False
    try:
        ps = PointSet.from_array(X, [str(i) for i in range(len(X))], tol)
        rep = classify(ps)
        reul = rep.reuleaux
        if reul:
            bc = _build_complex(ps)
            skel = _skeleton_on_points(bc)
            iso = skel is not None and are_isomorphic(skel, ig.g)
            if iso:
                ci = canonical_involution(bc)
                inv_ok = (skel.edge_set() == ig.g.edge_set() and all(
                    {int(x) for x in ci.faces[str(v)]} == set(ig.tau.face(v)) for v in range(ig.n)))
        else:
            details.append("ball polyhedron is not a Reuleaux polyhedron")
    except ReuleauxError as exc:
        details.append(f"geometry check failed: {exc}")
    return VerificationReport(a_ok, b_ok, reul, iso, inv_ok, details)
