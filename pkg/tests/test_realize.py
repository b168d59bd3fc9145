from itertools import combinations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_rotation
from reuleaux.errors import PreconditionError
from reuleaux.generator import InvolutiveGraph, enumerate_involutive, odd_wheel
from reuleaux.geometry import PointSet, canonical_involution, ball_complex, diameter_graph
from reuleaux.geometry.miniball import JUNG_RATIO, circumradius_normalized
from reuleaux.realize import (
    RealizationProblem,
    gauge_fix,
    gradient,
    jacobian,
    measure,
    objective,
    realize,
    residuals,
    solve,
    spectral_seed,
    verify_realization,
)


def fd_gradient(X, prob, h=1e-6):
    g = np.zeros(X.size)
    flat = X.ravel()
    for k in range(X.size):
        e = np.zeros(X.size)
        e[k] = h
        g[k] = (objective(flat + e, prob) - objective(flat - e, prob)) / (2 * h)
    return g


@pytest.fixture(scope="module")
def w5_problem():
    return RealizationProblem.of(odd_wheel(5))


def test_problem_partitions_pairs(w5_problem):
    p = w5_problem
    pairs = set(p.diagonal) | set(p.other)
    assert pairs == set(combinations(range(6), 2))
    assert not set(p.diagonal) & set(p.other)
    with pytest.raises(PreconditionError):
        RealizationProblem(3, ((0, 1),), ((0, 1), (1, 2)))


def test_k4_realizes_regular_tetrahedron():
    res = realize(odd_wheel(3))
    assert res.converged and res.diagonal_residual < 1e-9
    d = [np.linalg.norm(res.points[a] - res.points[b]) for a, b in combinations(range(4), 2)]
    assert np.allclose(d, 1.0, atol=1e-9)
    assert res.verification.passed


def test_w5_realization_verified():
    ig = odd_wheel(5)
    res = realize(ig)
    assert res.converged and res.diagonal_residual < 1e-6
    rep = res.verification
    assert rep.passed and rep.involution_matches
    dg = diameter_graph(res.point_set())
    assert nx.is_isomorphic(dg, ig.diagonal())
    # the canonical involution of the body agrees with the combinatorial one
    ci = canonical_involution(ball_complex(res.point_set()))
    assert {int(k): {int(x) for x in f} for k, f in ci.faces.items()} == \
        {v: set(ig.tau.face(v)) for v in range(ig.n)}


def test_overconstrained_problem_fails():
    prob = RealizationProblem.from_pairs(5, combinations(range(5), 2))
    res = solve(prob, restarts=6)
    assert not res.converged
    assert res.diagonal_residual > 1e-3


def test_realize_preconditions():
    ig = odd_wheel(5)
    bad = InvolutiveGraph(ig.g, odd_wheel(3).tau)
    with pytest.raises(PreconditionError):
        realize(bad)
    with pytest.raises(PreconditionError):
        realize(odd_wheel(15))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    prob = RealizationProblem.of(odd_wheel(5))
    X = rng.normal(size=(6, 3)) * 0.5
    g = gradient(X, prob)
    fd = fd_gradient(X, prob)
    assert np.linalg.norm(g - fd) <= 1e-6 * max(np.linalg.norm(g), 1e-8)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_jacobian_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    prob = RealizationProblem.of(odd_wheel(7))
    X = rng.normal(size=(8, 3)).ravel() * 0.5
    J = jacobian(X, prob)
    h = 1e-7
    for k in range(X.size):
        e = np.zeros(X.size)
        e[k] = h
        col = (residuals(X + e, prob) - residuals(X - e, prob)) / (2 * h)
        assert np.allclose(J[:, k], col, atol=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_objective_rigid_motion_invariant(seed):
    rng = np.random.default_rng(seed)
    prob = RealizationProblem.of(odd_wheel(5))
    X = rng.normal(size=(6, 3)) * 0.5
    Y = X @ random_rotation(rng).T + rng.normal(size=3)
    assert abs(objective(X, prob) - objective(Y, prob)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_gauge_fix(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(7, 3))
    Y = gauge_fix(X)
    assert np.allclose(Y[0], 0) and np.allclose(Y[1, 1:], 0) and abs(Y[2, 2]) < 1e-12
    assert Y[1, 0] > 0
    D = lambda Z: np.linalg.norm(Z[:, None] - Z[None], axis=2)  # noqa: E731
    assert np.allclose(D(X), D(Y))


def test_spectral_seed_shape(w5_problem):
    X = spectral_seed(w5_problem)
    assert X.shape == (6, 3) and np.all(np.isfinite(X))


def test_realizations_n_le_10(realized10):
    for ig, res in realized10:
        assert res.converged, f"n={ig.n} did not realize"
        assert res.verification.passed
        rd, viol = measure(res.points, RealizationProblem.of(ig))
        assert rd <= 1e-9 and viol == 0.0
        ps = res.point_set()
        assert circumradius_normalized(ps) <= JUNG_RATIO + 1e-6


def test_realize_is_deterministic():
    ig = enumerate_involutive(8)[-1]
    a, b = realize(ig, seed=3), realize(ig, seed=3)
    assert np.array_equal(a.points, b.points)
    assert a.to_dict() == b.to_dict()


def test_collect_all_reports_distinct_solutions():
    res = realize(odd_wheel(5), restarts=6, collect_all=True)
    assert res.converged and len(res.solutions) >= 1
    sigs = [np.sort([np.linalg.norm(s[a] - s[b]) for a, b in combinations(range(6), 2)])
            for s in res.solutions]
    for s, t in combinations(sigs, 2):
        assert not np.allclose(s, t, atol=1e-6)


def test_verify_realization_rejects_v8(v8):
    graphs = [ig for ig in enumerate_involutive(8) if ig.n == 8]
    for ig in graphs:
        rep = verify_realization(v8.coords, ig)
        assert not rep.reuleaux
        assert not rep.passed


def test_verify_realization_wrong_size():
    with pytest.raises(PreconditionError):
        verify_realization(np.zeros((3, 3)), odd_wheel(3))


def test_verify_realization_detects_perturbation():
    ig = odd_wheel(5)
    res = realize(ig)
    X = res.points.copy()
    X[0] += [0.0, 0.0, 1e-3]
    rep = verify_realization(X, ig)
    assert not rep.diagonal_unit and not rep.passed
    assert verify_realization(PointSet.from_array(res.points).coords, ig).passed
