import json
from itertools import combinations

import networkx as nx
import pytest

from oracles import involutive_graphs
from reuleaux.errors import PreconditionError, RejectionError, ResourceLimitError
from reuleaux.generator import (
    ExpansionStep,
    InvolutiveGraph,
    add_expansion,
    check_criticality,
    delete_contraction,
    enumerate_involutive,
    expansion_steps,
    find_reducible_edge,
    odd_wheel,
    reduce_to_wheel,
)
from reuleaux.graphcore import are_isomorphic, canonical_form, verify_involution

# involutive graph counts per order from the brute-force oracle in oracles.py
ORACLE_COUNTS = {4: 1, 5: 0, 6: 1, 7: 1, 8: 2}


def test_odd_wheel_k4():
    ig = odd_wheel(3)
    assert ig.n == 4 and ig.verify()
    for v in range(4):
        assert set(ig.tau.face(v)) == set(range(4)) - {v}


def test_odd_wheel_w5_offset_two():
    ig = odd_wheel(5)
    assert set(ig.tau.face(0)) == {1, 2, 3, 4, 5}
    for i in range(5):
        v = i + 1
        assert set(ig.tau.face(v)) == {0, (i + 2) % 5 + 1, (i + 3) % 5 + 1}


@pytest.mark.parametrize("r", [4, 1, 2, 0, -3])
def test_odd_wheel_rejects(r):
    with pytest.raises(PreconditionError):
        odd_wheel(r)


def test_expand_w5_hub():
    w5 = odd_wheel(5)
    steps = expansion_steps(w5)
    assert steps and all(s.v == 0 for s in steps)
    kids = [add_expansion(w5, s) for s in steps]
    assert all(k.n == 7 and k.verify() for k in kids)
    assert len({canonical_form(k.g) for k in kids}) == 1
    assert all(check_criticality(k) for k in kids)


def test_expand_k4_rejected():
    with pytest.raises(PreconditionError):
        add_expansion(odd_wheel(3), ExpansionStep(0, 1, 2))


def test_expand_bad_split():
    w5 = odd_wheel(5)
    with pytest.raises(PreconditionError):
        add_expansion(w5, ExpansionStep(0, 1, 2))  # adjacent: one path has 2 vertices
    with pytest.raises(PreconditionError):
        add_expansion(w5, ExpansionStep(0, 1, 0))


def test_expansion_contraction_round_trip(enumerated10):
    for ig in enumerated10:
        if ig.n >= 10:
            continue
        for step in expansion_steps(ig):
            try:
                kid = add_expansion(ig, step)
            except RejectionError:
                continue
            back = delete_contraction(kid, (step.v, kid.n - 1))
            assert are_isomorphic(back.g, ig.g)
            assert back.verify()


def test_delete_contraction_k4_and_w5():
    for r in (3, 5, 7):
        w = odd_wheel(r)
        for e in w.g.edges:
            with pytest.raises((RejectionError, PreconditionError)):
                delete_contraction(w, e)
        assert find_reducible_edge(w) is None


def test_delete_contraction_non_edge():
    with pytest.raises(PreconditionError):
        delete_contraction(odd_wheel(5), (1, 3))


def test_reduction_reaches_wheel(enumerated10):
    for ig in enumerated10:
        chain = reduce_to_wheel(ig)
        assert chain[-1].is_wheel()
        assert len(chain) - 1 <= ig.n - 4
        assert all(c.verify() for c in chain)
        if not ig.is_wheel():
            assert find_reducible_edge(ig) is not None


def test_enumerate_small():
    out = enumerate_involutive(4)
    assert len(out) == 1 and out[0].n == 4
    six = enumerate_involutive(6)
    assert any(are_isomorphic(ig.g, odd_wheel(5).g) for ig in six)
    assert enumerate_involutive(3) == []
    with pytest.raises(ResourceLimitError):
        enumerate_involutive(15)


def test_enumeration_closure_and_dedup(enumerated10):
    keys = [canonical_form(ig.g) for ig in enumerated10]
    assert len(keys) == len(set(keys))
    for ig in enumerated10:
        assert ig.verify()
        assert len(ig.g.faces) == ig.n
        assert ig.diagonal().number_of_edges() == 2 * ig.n - 2
        assert sum(d for _, d in ig.diagonal().degree) == 2 * (2 * ig.n - 2)
        assert check_criticality(ig)
    by_n = {}
    for ig in enumerated10:
        by_n.setdefault(ig.n, []).append(ig.g.simple_graph())
    for gs in by_n.values():
        for a, b in combinations(gs, 2):
            assert not nx.is_isomorphic(a, b)


def test_enumeration_counts_match_oracle(enumerated10):
    counts = {n: 0 for n in ORACLE_COUNTS}
    for ig in enumerated10:
        if ig.n in counts:
            counts[ig.n] += 1
    assert counts == ORACLE_COUNTS


@pytest.mark.parametrize("n", [6, 7, 8])
def test_enumeration_classes_match_oracle(n, enumerated10):
    ours = [ig.g.simple_graph() for ig in enumerated10 if ig.n == n]
    ref = involutive_graphs(n)
    assert len(ours) == len(ref)
    for g in ours:
        assert sum(nx.is_isomorphic(g, h) for h in ref) == 1


def test_json_round_trip(enumerated10):
    for ig in enumerated10:
        data = json.loads(json.dumps(ig.to_dict()))
        back = InvolutiveGraph.from_dict(data)
        assert back.to_dict() == ig.to_dict()
        assert verify_involution(back.g, back.tau)
        data.pop("tau")
        found = InvolutiveGraph.from_dict(data)
        assert found.verify()


def test_provenance_replays(enumerated10):
    for ig in enumerated10:
        if ig.seed is None:
            continue
        cur = odd_wheel(ig.seed)
        for s in ig.provenance:
            cur = add_expansion(cur, s)
        assert canonical_form(cur.g) == canonical_form(ig.g)
