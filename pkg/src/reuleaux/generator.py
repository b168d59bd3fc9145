"""Involutive polyhedral graphs: odd wheels, add-expansion, delete-contraction
and isomorph-free enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalConsistencyError, PreconditionError, RejectionError, ResourceLimitError, SchemaError
from .graphcore.coloring import is_edge_4_critical, is_vertex_4_critical
from .graphcore.connectivity import connectivity
from .graphcore.embedded import EmbeddedGraph, canonical_form
from .graphcore.involution import Involution, diagonal_graph, verify_involution

MAX_ENUMERATION_N = 14


@dataclass(frozen=True)
class ExpansionStep:
    """Split ``tau(v)`` by the chord ``x``-``y``.

    ``P1`` runs from ``x`` to ``y`` along the face boundary in traversal
    order and ``P2`` runs back; ``v`` keeps its id for ``v1`` (the ``P1``
    side) and ``v2`` becomes the new last vertex.
    """

    v: int
    x: int
    y: int

    def to_list(self) -> list[int]:
        return [self.v, self.x, self.y]


@dataclass(frozen=True)
class InvolutiveGraph:
    g: EmbeddedGraph
    tau: Involution
    seed: int | None = None
    provenance: tuple[ExpansionStep, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.g.n

    def diagonal(self):
        return diagonal_graph(self.g, self.tau)

    def is_wheel(self) -> bool:
        return any(self.g.degree(h) == self.n - 1 for h in range(self.n))

    def verify(self) -> bool:
        g = self.g
        return (g.is_simple() and g.is_spherical() and len(g.faces) == g.n
                and connectivity(g.simple_graph()).kappa >= 3
                and verify_involution(g, self.tau))

    def to_dict(self) -> dict:
        d = self.g.to_dict()
        d["tau"] = self.tau.to_list()
        d["seed_wheel"] = self.seed
        d["provenance"] = [s.to_list() for s in self.provenance]
        return d

    @classmethod
    def from_dict(cls, data) -> "InvolutiveGraph":
        g = EmbeddedGraph.from_dict(data)
        tau = data.get("tau")
        if tau is None:
            from .graphcore.involution import find_involution
            inv = find_involution(g)
            if inv is None:
                raise SchemaError("graph admits no involution")
        else:
            if not isinstance(tau, list) or len(tau) != g.n:
                raise SchemaError("'tau' must list one face per vertex")
            inv = Involution.from_faces(tau)
        steps = tuple(ExpansionStep(*s) for s in data.get("provenance", []))
        return cls(g, inv, data.get("seed_wheel"), steps)


def _face_index(g: EmbeddedGraph) -> dict[frozenset, int]:
    return {s: f for f, s in enumerate(g.face_vertex_sets)}


def _patch_tau(g: EmbeddedGraph, targets: list[set]) -> Involution:
    """Look up each target vertex set among the faces of ``g``."""
    index = _face_index(g)
    faces = []
    for t in targets:
        f = index.get(frozenset(t))
        if f is None:
            raise RejectionError("patched involution does not land on a face")
        faces.append(tuple(g.face_vertices(f)))
    return Involution.from_faces(faces)


def _oriented_face(g: EmbeddedGraph, verts) -> list[int]:
    f = _face_index(g).get(frozenset(verts))
    if f is None:
        raise PreconditionError("tau(v) is not a face of the embedding")
    return g.face_vertices(f)


def odd_wheel(r: int) -> InvolutiveGraph:
    """Hub 0 and rim ``1..r``; hub -> rim face, rim ``i`` -> triangle opposite."""
    if not isinstance(r, int) or r < 3 or r % 2 == 0:
        raise PreconditionError("odd wheels need an odd rim length r >= 3")
    rim = [i + 1 for i in range(r)]
    rot = [rim[:]]
    for i in range(r):
        rot.append([0, rim[(i - 1) % r], rim[(i + 1) % r]])
    g = EmbeddedGraph.from_rotation(rot)
    k = (r - 1) // 2
    targets = [set(rim)] + [{0, rim[(i + k) % r], rim[(i + k + 1) % r]} for i in range(r)]
    tau = _patch_tau(g, targets)
    ig = InvolutiveGraph(g, tau, seed=r)
    if not ig.verify():
        raise InternalConsistencyError("odd wheel failed its own verification")
    return ig


def expansion_steps(ig: InvolutiveGraph) -> list[ExpansionStep]:
    """All splits of all faces ``tau(v)`` with ``deg v >= 4``, in a fixed order."""
    steps = []
    for v in range(ig.n):
        if ig.g.degree(v) < 4:
            continue
        cyc = _oriented_face(ig.g, ig.tau.face(v))
        k = len(cyc)
        for i in range(k):
            for j in range(i + 2, k):
                if (i - j) % k >= 2:
                    steps.append(ExpansionStep(v, cyc[i], cyc[j]))
    return steps


def add_expansion(ig: InvolutiveGraph, step: ExpansionStep, check: bool = True) -> InvolutiveGraph:
    g, tau = ig.g, ig.tau
    v, x, y = step.v, step.x, step.y
    if not 0 <= v < g.n or g.degree(v) < 4:
        raise PreconditionError("expansion needs a vertex of degree >= 4")
    cyc = _oriented_face(g, tau.face(v))
    k = len(cyc)
    if x not in cyc or y not in cyc:
        raise PreconditionError("x and y must lie on tau(v)")
    i, j = cyc.index(x), cyc.index(y)
    if (j - i) % k < 2 or (i - j) % k < 2:
        raise PreconditionError("both paths of the split need at least three vertices")
    p1 = [cyc[(i + t) % k] for t in range((j - i) % k + 1)]
    p2 = [cyc[(j + t) % k] for t in range((i - j) % k + 1)]
    p1_edges = {frozenset(e) for e in zip(p1, p1[1:])}

    rot = [list(r) for r in g.neighbor_rotation()]
    nbrs = rot[v]
    side = [frozenset(tau.dual_edge(v, w)) in p1_edges for w in nbrs]
    # rotate so that the P1 block comes first
    start = next((s for s in range(len(nbrs)) if side[s] and not side[s - 1]), None)
    if start is None:
        raise RejectionError("split leaves one side without neighbours")
    nbrs = nbrs[start:] + nbrs[:start]
    side = side[start:] + side[:start]
    a_block = [w for w, s in zip(nbrs, side) if s]
    b_block = [w for w, s in zip(nbrs, side) if not s]
    if side != [True] * len(a_block) + [False] * len(b_block):
        raise RejectionError("neighbours of v do not split into two arcs")
    v2 = g.n
    rot[v] = a_block + [v2]
    rot.append(b_block + [v])
    for w in b_block:
        rot[w] = [v2 if u == v else u for u in rot[w]]
    if y in rot[x]:
        raise RejectionError("chord x-y already present")
    for s, t in ((x, y), (y, x)):
        # the face tau(v) sits between the face-neighbours of s; put t there
        fc = cyc.index(s)
        prev = cyc[(fc - 1) % k]
        pos = rot[s].index(prev)
        rot[s].insert(pos + 1, t)
    g2 = EmbeddedGraph.from_rotation(rot)

    targets = []
    for u in range(g.n):
        t = set(tau.face(u))
        if u == v:
            t = set(p1)
        elif u in (x, y):
            t = (t - {v}) | {v, v2}
        elif v in t:
            t = t - {v}
            t |= {v} if frozenset(t | {v}) in _face_index(g2) else {v2}
        targets.append(t)
    targets.append(set(p2))
    new_tau = _patch_tau(g2, targets)
    out = InvolutiveGraph(g2, new_tau, ig.seed, ig.provenance + (step,))
    if check and not out.verify():
        raise RejectionError("expansion is not an involutive polyhedral graph")
    return out


def delete_contraction(ig: InvolutiveGraph, e: tuple[int, int]) -> InvolutiveGraph:
    """Contract ``ab`` (the merged vertex keeps the smaller id) and delete
    its dual edge ``tau(a) & tau(b)``."""
    g, tau = ig.g, ig.tau
    a, b = sorted(e)
    if frozenset((a, b)) not in g.edge_set():
        raise PreconditionError(f"{a}-{b} is not an edge")
    x, y = tau.dual_edge(a, b)
    rot = [list(r) for r in g.neighbor_rotation()]
    ra, rb = rot[a], rot[b]
    ia, ib = ra.index(b), rb.index(a)
    merged = ra[ia + 1:] + ra[:ia] + rb[ib + 1:] + rb[:ib]
    if len(set(merged)) != len(merged):
        raise RejectionError("contraction creates a parallel edge")
    rot[a] = merged
    for w in rb:
        if w != a:
            rot[w] = [a if u == b else u for u in rot[w]]
    rot[x].remove(y)
    rot[y].remove(x)
    relabel = lambda u: u - 1 if u > b else u  # noqa: E731
    rot = [[relabel(u) for u in r] for i, r in enumerate(rot) if i != b]
    if any(len(r) < 3 for r in rot):
        raise RejectionError("a vertex drops below degree 3")
    try:
        g2 = EmbeddedGraph.from_rotation(rot)
    except PreconditionError as exc:
        raise RejectionError(str(exc)) from exc

    targets = []
    for u in range(g.n):
        if u == b:
            continue
        t = set(tau.face(u))
        if u == a:
            t = set(tau.face(a)) | set(tau.face(b))
        elif t & {a, b}:
            t = (t - {a, b}) | {a}
        targets.append({relabel(w) for w in t})
    new_tau = _patch_tau(g2, targets)
    out = InvolutiveGraph(g2, new_tau, ig.seed, ())
    if not out.verify():
        raise RejectionError("delete-contraction is not an involutive polyhedral graph")
    return out


def find_reducible_edge(ig: InvolutiveGraph) -> tuple[int, int] | None:
    """First edge (in sorted order) whose delete-contraction succeeds."""
    for e in sorted(tuple(sorted(e)) for e in ig.g.edges):
        try:
            delete_contraction(ig, e)
        except (RejectionError, PreconditionError):
            continue
        return e
    return None


def reduce_to_wheel(ig: InvolutiveGraph) -> list[InvolutiveGraph]:
    """Chain of delete-contractions ending at a graph with no reducible edge."""
    chain = [ig]
    while True:
        e = find_reducible_edge(chain[-1])
        if e is None:
            return chain
        chain.append(delete_contraction(chain[-1], e))


def check_criticality(ig: InvolutiveGraph) -> bool:
    d = ig.diagonal()
    ok, _ = is_vertex_4_critical(d)
    return ok and is_edge_4_critical(d)


def enumerate_involutive(n_max: int, verify_criticality: bool = True) -> list[InvolutiveGraph]:
    """Isomorph-free list of involutive polyhedral graphs with at most ``n_max``
    vertices, grown from odd wheels by add-expansion, sorted by size."""
    if n_max > MAX_ENUMERATION_N:
        raise ResourceLimitError(f"enumeration is capped at n_max = {MAX_ENUMERATION_N}")
    if n_max < 4:
        return []
    seen: set[tuple] = set()
    out: list[InvolutiveGraph] = []
    by_size: dict[int, list[InvolutiveGraph]] = {}
    for n in range(4, n_max + 1):
        level = by_size.get(n, [])
        if n % 2 == 0:
            wheel = odd_wheel(n - 1)
            key = canonical_form(wheel.g)
            if key not in seen:
                seen.add(key)
                level.insert(0, wheel)
        children = by_size.setdefault(n + 1, [])
        for ig in level:
            if verify_criticality and not check_criticality(ig):
                raise InternalConsistencyError("diagonal graph of an involutive graph is not 4-critical")
            out.append(ig)
            if n == n_max:
                continue
            for step in expansion_steps(ig):
                try:
                    child = add_expansion(ig, step, check=False)
                except RejectionError:
                    continue
                key = canonical_form(child.g)
                if key in seen:
                    continue
                if not child.verify():
                    raise InternalConsistencyError(f"add-expansion {step} broke the involution")
                seen.add(key)
                children.append(child)
    return out
