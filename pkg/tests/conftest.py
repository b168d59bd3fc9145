import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reuleaux.geometry import PointSet  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "src" / "reuleaux" / "data"

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        verdict = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _criteria[k] = (title, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        title, verdict = _criteria[k]
        terminalreporter.write_line(f"criterion {k} [{verdict}] {title}")


@pytest.fixture(scope="session")
def tetra() -> PointSet:
    return PointSet.load(DATA / "tetrahedron.json")


@pytest.fixture(scope="session")
def v8() -> PointSet:
    return PointSet.load(DATA / "vazsonyi8.json")


@pytest.fixture(scope="session")
def enumerated10():
    from reuleaux.generator import enumerate_involutive

    return enumerate_involutive(10, verify_criticality=False)


@pytest.fixture(scope="session")
def realized10(enumerated10):
    """(graph, realization) for every involutive graph with n <= 10."""
    from reuleaux.realize import realize

    return [(ig, realize(ig)) for ig in enumerated10]


def regular_tetrahedron(side: float = 1.0) -> np.ndarray:
    P = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return P * side / np.sqrt(8.0)


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
