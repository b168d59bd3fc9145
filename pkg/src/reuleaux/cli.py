"""Command-line front end: ``reuleaux <command> ...``.

Exit codes: 0 success, 1 a checked property failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ReuleauxError, ResourceLimitError, SchemaError
from .generator import InvolutiveGraph, enumerate_involutive
from .geometry.ballpoly import _build_complex, classify, to_off
from .geometry.pointset import PointSet

EXIT_OK, EXIT_PROPERTY, EXIT_INPUT = 0, 1, 2
THREADS_ENV = "REULEAUX_THREADS"


@dataclass
class RunManifest:
    command: str
    inputs: dict[str, str] = field(default_factory=dict)
    tol: float | None = None
    seed: int = 0
    version: str = __version__
    wall_time: float = 0.0


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    # json writes floats with repr, the shortest string that round-trips
    return json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n"


def _emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg})") from exc


def _load_points(path, tol: float | None) -> PointSet:
    ps = PointSet.from_dict(_load_json(path))
    if tol is not None:
        ps = PointSet(ps.labels, ps.coords, tol)
    return ps


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# commands ----------------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    from .borsuk import borsuk_number

    ps = _load_points(args.points, args.tol)
    report = {"classification": classify(ps).to_dict(), "borsuk": borsuk_number(ps).to_dict()}
    _emit(report, args.out)
    return EXIT_OK


def cmd_borsuk(args) -> int:
    from .borsuk import borsuk_number

    ps = _load_points(args.points, args.tol)
    _emit(borsuk_number(ps).to_dict(), args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    graphs = enumerate_involutive(args.max_n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    counts: dict[int, int] = {}
    index = []
    for ig in graphs:
        k = counts.get(ig.n, 0)
        counts[ig.n] = k + 1
        name = f"n{ig.n:02d}_{k:04d}.json"
        (out / name).write_text(dumps(ig.to_dict()))
        index.append({"file": name, "n": ig.n, "seed_wheel": ig.seed,
                      "provenance": [s.to_list() for s in ig.provenance]})
    (out / "index.json").write_text(dumps({"max_n": args.max_n, "counts": counts, "graphs": index}))
    sys.stdout.write(dumps({"counts": counts, "total": len(graphs)}))
    return EXIT_OK


def _load_graph(path) -> InvolutiveGraph:
    return InvolutiveGraph.from_dict(_load_json(path))


def cmd_realize(args) -> int:
    from .realize import realize

    ig = _load_graph(args.graph)
    res = realize(ig, restarts=args.restarts, seed=args.seed, tol=args.tol or 1e-6)
    data = res.to_dict()
    data["labels"] = [str(i) for i in range(ig.n)]
    data["tol"] = args.tol or 1e-6
    _emit(data, args.out)
    if args.off and res.converged:
        Path(args.off).write_text(to_off(_build_complex(res.point_set(args.tol or 1e-6))))
    return EXIT_OK if res.converged and res.verification.passed else EXIT_PROPERTY


def cmd_partition(args) -> int:
    from .borsuk import critical_partition

    ps = _load_points(args.points, args.tol)
    q = _load_json(args.queries)
    pts = q.get("points") if isinstance(q, dict) else q
    try:
        Q = np.array(pts, dtype=float).reshape(-1, 3)
    except (TypeError, ValueError) as exc:
        raise SchemaError("queries must be a list of 3D points") from exc
    _emit(critical_partition(ps, args.vertex, args.eps, Q).to_dict(), args.out)
    return EXIT_OK


def cmd_export_off(args) -> int:
    ps = _load_points(args.points, args.tol)
    Path(args.out).write_text(to_off(_build_complex(ps), args.step))
    return EXIT_OK


def pipeline_case(ig: InvolutiveGraph, seed: int, restarts: int) -> dict:
    """Realize one graph and check the equivalences on its point set."""
    from .borsuk import borsuk_number
    from .realize import realize

    row = {"n": ig.n, "involution_ok": ig.verify()}
    if not row["involution_ok"]:
        row["pass"] = False
        return row
    res = realize(ig, restarts=restarts, seed=seed)
    row["realized"] = bool(res.converged and res.verification.passed)
    if not row["realized"]:
        row["pass"] = None  # a failed search is not a counterexample
        return row
    ps = res.point_set()
    rep = classify(ps)
    b = borsuk_number(ps)
    n = len(ps)
    row.update(extremal=rep.extremal, tight=rep.tight, vert=rep.vertices_are_points,
               reuleaux=rep.reuleaux, a=b.a, subset=b.critical_subset)
    ghs = rep.extremal == (rep.tight and rep.vertices_are_points)
    main = (b.a == 4) == (b.critical_subset is not None) and b.critical_subset == sorted(ps.labels)
    row["pass"] = bool(ghs and main and rep.reuleaux and rep.diameters == 2 * n - 2)
    return row


def cmd_pipeline(args) -> int:
    if args.graphs:
        files = sorted(p for p in Path(args.graphs).glob("*.json") if p.name != "index.json")
        graphs = [_load_graph(p) for p in files]
        names = [p.name for p in files]
    else:
        graphs = enumerate_involutive(args.max_n)
        names = [f"#{i}" for i in range(len(graphs))]
    with ThreadPoolExecutor(_threads()) as pool:
        rows = list(pool.map(lambda ig: pipeline_case(ig, args.seed, args.restarts), graphs))
    for name, row in zip(names, rows):
        row["case"] = name
    failed = [r for r in rows if r["pass"] is False]
    summary = {"cases": len(rows), "passed": sum(r["pass"] is True for r in rows),
               "unrealized": sum(r["pass"] is None for r in rows), "failed": len(failed),
               "rows": rows}
    _emit(summary, args.out)
    for r in failed:
        sys.stderr.write(f"FAILED {r['case']}: {json.dumps(_plain(r))}\n")
    return EXIT_PROPERTY if failed else EXIT_OK


# argument parsing ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reuleaux", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    p.add_argument("--manifest", help="write a run manifest JSON here")
    sub = p.add_subparsers(dest="command", required=True)

    def points_cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("points", nargs="?", help="point-set JSON")
        s.add_argument("--points", dest="points_opt")
        s.add_argument("--tol", type=float, help="override the file's relative tolerance")
        s.add_argument("--out")
        s.set_defaults(fn=fn)
        return s

    points_cmd("analyze", cmd_analyze, "classify a point set and compute its Borsuk number")
    points_cmd("borsuk", cmd_borsuk, "Borsuk number and strongly critical subset")
    s = points_cmd("partition", cmd_partition, "assign query points to the four parts around a vertex")
    s.add_argument("--vertex", required=True, help="label of the special vertex")
    s.add_argument("--eps", type=float, default=0.05, help="size of part 1, in the units of the input points")
    s.add_argument("--queries", required=True, help="JSON file with the points to assign")
    s = points_cmd("export-off", cmd_export_off, "write the ball polyhedron as an OFF mesh")
    s.add_argument("--step", type=float, default=2.0, help="arc sampling step in degrees")

    s = sub.add_parser("generate", help="enumerate involutive graphs")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_generate)

    s = sub.add_parser("realize", help="realize an involutive graph as a Reuleaux polyhedron")
    s.add_argument("--graph", required=True)
    s.add_argument("--out")
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--tol", type=float)
    s.add_argument("--off", help="also write an OFF mesh of the realized body")
    s.set_defaults(fn=cmd_realize)

    s = sub.add_parser("pipeline", help="generate, realize and check the equivalences")
    s.add_argument("--max-n", type=int, default=8)
    s.add_argument("--graphs", help="directory of graph JSON files instead of enumerating")
    s.add_argument("--restarts", type=int, default=32)
    s.add_argument("--out")
    s.set_defaults(fn=cmd_pipeline)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "points_opt"):
        args.points = args.points or args.points_opt
        if not args.points:
            parser.error(f"{args.command}: a point-set file is required")
    manifest = RunManifest(args.command, seed=args.seed, tol=getattr(args, "tol", None))
    for attr in ("points", "graph", "queries"):
        path = getattr(args, attr, None)
        if path and Path(path).is_file():
            manifest.inputs[str(path)] = sha256(path)
    start = time.perf_counter()
    try:
        code = args.fn(args)
    except ResourceLimitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = EXIT_INPUT
    except (SchemaError, ReuleauxError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = EXIT_INPUT if not isinstance(exc, RuntimeError) else EXIT_PROPERTY
    manifest.wall_time = time.perf_counter() - start
    if args.manifest:
        Path(args.manifest).write_text(dumps(asdict(manifest)))
    return code


if __name__ == "__main__":
    sys.exit(main())
