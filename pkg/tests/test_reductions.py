import pytest
from hypothesis import given

from countcsp.classify import Unsupported
from countcsp.formula import FINITE, Instance, TemplateGraph, complete_graph, named_template, parse_instance, serialize_instance
from countcsp.oracle import decide, homomorphism_exists
from countcsp.reductions import (
    ValidationError,
    add_unary_guard,
    cycle_prefix,
    exists_to_atleast2,
    gadget_table,
    lift_to_cycle,
    lift_to_cycle_with_layout,
    lift_to_k2n,
    validate_cycle,
    validate_k2n,
)
from strategies import instances

K6 = complete_graph(6)


def _pairs(edges):
    return {frozenset(e) for e in edges}


def test_k2n_single_edge_structure():
    src = Instance([("p", 1), ("r", 1)], [("p", "r")])
    out = lift_to_k2n(src, 3)
    g = lambda r: f"g0_{r}"
    assert list(out.names) == ["u1", "u2", "u3", "p", "r"] + [g(r) for r in "wqzabc"]
    assert set(out.counts) == {3}
    want = [("u1", "u2"), ("u1", "u3"), ("u2", "u3"), ("p", "u1"), ("r", "u1")]
    want += [(g("w"), g("a")), (g("w"), g("b")), (g("q"), g("b")), (g("q"), g("c")), (g("z"), g("a")), (g("z"), g("b"))]
    want += [("p", g("a")), ("r", g("b")), (g("a"), "u1"), (g("c"), "u1"), (g("c"), "u2"), (g("c"), "u3")]
    assert _pairs(out.atoms) == _pairs(want)
    validate_k2n(src, 3, out)


def test_k2n_without_edges():
    src = Instance([("p", 1)])
    out = lift_to_k2n(src, 3)
    assert len(out) == 4 and len(out.atoms) == 4


def test_k2n_universal_and_large_n():
    src = Instance([("p", 4), ("r", 1)], [("p", "r")])
    out = lift_to_k2n(src, 4)
    validate_k2n(src, 4, out)
    assert ("p", "u4") in out.atoms or ("u4", "p") in out.atoms
    assert any({a, b} == {"g0_a", "u4"} for a, b in out.atoms)


def test_k2n_rejects_bad_input():
    with pytest.raises(ValueError):
        lift_to_k2n(Instance([("p", 1)]), 2)
    with pytest.raises(ValueError):
        lift_to_k2n(Instance([("p", 2)]), 3)
    src = Instance([("p", 1)])
    with pytest.raises(ValidationError):
        validate_k2n(src, 3, Instance([("u1", 3)]))


def test_gadget_table_matches_the_claim():
    table = gadget_table(3)
    assert len(table) == 36
    assert all(solved == claimed for solved, claimed in table.values())


@pytest.mark.parametrize(
    "src",
    [
        Instance([("p", 1), ("r", 1)], [("p", "r")]),
        Instance([("p", 3), ("r", 1)], [("p", "r")]),
    ],
    ids=["exists-exists", "forall-exists"],
)
def test_k2n_faithful(src):
    K3 = complete_graph(3)
    assert decide(lift_to_k2n(src, 3), K6) == decide(src, K3)


@given(instances(max_vars=4, counts=(1, 3)))
def test_lift_sizes_and_round_trip(src):
    out = lift_to_k2n(src, 3)
    assert len(out) == 3 + len(src) + 6 * len(src.atoms)
    assert parse_instance(serialize_instance(out)) == out


def test_cycle_without_edges():
    src = Instance([("p", 1)])
    out = lift_to_cycle(src, 3)
    assert len(out) == 7 and len(out.atoms) == 6
    assert list(out.counts[:6]) == [2, 2, 2, 2, 1, 1] == cycle_prefix(3)


def test_cycle_single_edge_structure():
    src = Instance([("p", 1), ("r", 1)], [("p", "r")])
    out, layout = lift_to_cycle_with_layout(src, 3)
    report = validate_cycle(src, 3, out, layout)
    assert report["variables"] == 6 + 2 + 9 * 6 + 2
    assert report["rungs"] == 9 * 6
    assert parse_instance(serialize_instance(out)) == out


def test_cycle_universal_path():
    src = Instance([("p", 3), ("r", 1)], [("p", "r")])
    out, layout = lift_to_cycle_with_layout(src, 3)
    validate_cycle(src, 3, out, layout)
    path = layout.universal_paths["p"]
    assert [out.count(v) for v in path] + [out.count("p")] == [1, 2, 2, 1]


def test_cycle_validator_catches_a_missing_rung():
    src = Instance([("p", 1), ("r", 1)], [("p", "r")])
    out, layout = lift_to_cycle_with_layout(src, 3)
    a, b = layout.copies[0][0][0], layout.copies[0][1][0]
    broken = Instance(out.variables, [e for e in out.atoms if set(e) != {a, b}])
    with pytest.raises(ValidationError):
        validate_cycle(src, 3, broken, layout)


def test_cycle_rejects_small_j():
    with pytest.raises(ValueError):
        lift_to_cycle(Instance([("p", 1)]), 2)


def test_exists_to_atleast2():
    assert exists_to_atleast2(Instance([("x", 1)])).counts == (2,)
    tri = Instance([("a", 1), ("b", 1), ("c", 1)], [("a", "b"), ("b", "c"), ("a", "c")])
    assert exists_to_atleast2(tri).counts == (2, 2, 2)
    with pytest.raises(ValueError):
        exists_to_atleast2(Instance([("x", 2)]))


def _apex_k4():
    vs = (0, 1, 2, 3, "w")
    edges = {frozenset((a, b)) for a in range(4) for b in range(a + 1, 4)} | {frozenset((v, "w")) for v in range(4)}
    return TemplateGraph(FINITE, vs, frozenset(edges), frozenset({"w"}))


@given(instances(max_vars=4, counts=(1,)))
def test_raising_counts_reduces_from_colouring(src):
    H = _apex_k4()
    assert decide(exists_to_atleast2(src), H) == homomorphism_exists(src, H.without("w"))


def test_unary_guard_examples():
    H = _apex_k4()
    g = add_unary_guard(Instance([("x", 2)]), H)
    assert g.instance.counts == (1,) and g.guarded == {"x"} and "w" not in g.allowed
    plain = Instance([("x", 1), ("y", 1)], [("x", "y")])
    assert add_unary_guard(plain, H).instance == plain
    with pytest.raises(Unsupported):
        add_unary_guard(plain, complete_graph(4))


@given(instances(max_vars=4, loops=True))
def test_unary_guard_preserves_truth(src):
    H = named_template("graph:w-w,w-0,w-1,w-2,w-3,0-1,1-2,2-3,3-0")
    g = add_unary_guard(src, H)
    assert decide(g.instance, H, domains=g.domains()) == decide(src, H)
