import itertools
import random

import networkx as nx
import pytest
from hypothesis import given

from countcsp.formula import (
    BLACK,
    WHITE,
    Instance,
    ParseError,
    bipartition,
    component_indices,
    components,
    cycle_graph,
    two_bad_walks_instance,
    named_template,
    p100,
    p101,
    parse_instance,
    parse_template,
    resolve_template,
    serialize_instance,
    serialize_template,
)
from countcsp import corpus
from strategies import instances, templates

FIG3_TEXT = """
# nine variables, eight edges
var v1 1
var v2 2
var v3 2
var v4 2
var v5 1
var v6 2
var v7 1
var v8 1
var v9 2
edge v3 v4
edge v4 v5
edge v5 v6
edge v6 v7
edge v7 v8
edge v8 v9
edge v1 v9
edge v2 v7
"""


def test_two_bad_walks_fixture_parses():
    inst = parse_instance(FIG3_TEXT)
    assert len(inst) == 9 and len(inst.atoms) == 8
    assert inst.counts == (1, 2, 2, 2, 1, 2, 1, 1, 2)
    assert inst == two_bad_walks_instance()


def test_minimal_instance():
    inst = parse_instance("var x 1")
    assert inst.names == ("x",) and not inst.atoms


def test_loop_atom_and_duplicate_atoms_collapse():
    inst = parse_instance("var x 2\nvar y 1\nedge x x\nedge x y\nedge y x\n")
    assert inst.has_loop and len(inst.atoms) == 2


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("var x", 1, 1),
        ("var x 1\nvar x 2", 2, 5),
        ("var x 1\nedge x y", 2, 8),
        ("var x 0", 1, 7),
        ("vor x 1", 1, 1),
        ("var x-y 1", 1, 5),
    ],
)
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_instance(text)
    assert (err.value.line, err.value.column) == (line, column)


@given(instances(max_vars=8, counts=(1, 2, 3), loops=True))
def test_serialize_parse_round_trip(inst):
    assert parse_instance(serialize_instance(inst)) == inst


def test_round_trip_on_1000_random_instances():
    rng = random.Random(11)
    for _ in range(1000):
        inst = corpus.random_instance(rng, rng.randint(1, 9), (1, 2, 3), loops=True)
        again = parse_instance(serialize_instance(inst))
        assert again.variables == inst.variables and again.atoms == inst.atoms


@given(templates(max_vertices=5))
def test_template_round_trip(tmpl):
    again = parse_template(serialize_template(tmpl))
    relabel = {v: str(v) for v in tmpl.vertices}
    assert again == tmpl.relabel(relabel)


def test_named_templates():
    assert len(named_template("k4").edges) == 6 and not named_template("k4").loops
    assert len(named_template("path5").edges) == 4
    assert len(cycle_graph(6).edges) == 6
    assert p100().loops == {0} and {frozenset((0, 1)), frozenset((1, 2))} == p100().edges
    assert p101().loops == {0, 2}
    assert not named_template("infpath").is_finite
    g = named_template("graph:a-b,b-b,c")
    assert g.vertices == ("a", "b", "c") and g.loops == {"b"} and g.edges == {frozenset("ab")}


def test_resolve_template_falls_back_to_file(tmp_path):
    f = tmp_path / "t.txt"
    f.write_text("vertex a loop\nvertex b\nedge a b\n")
    t = resolve_template(str(f))
    assert t.loops == {"a"} and t.edges == {frozenset("ab")}


def test_bipartition_examples():
    edge = Instance([("x", 1), ("y", 1)], [("x", "y")])
    assert bipartition(edge) == {"x": BLACK, "y": WHITE}
    example = two_bad_walks_instance()
    col = bipartition(example)
    assert col is not None and all(col[a] != col[b] for a, b in example.atoms)
    tri = Instance([("a", 1), ("b", 1), ("c", 1)], [("a", "b"), ("b", "c"), ("a", "c")])
    assert bipartition(tri) is None


def _has_odd_closed_walk(inst):
    g = nx.Graph()
    g.add_nodes_from(inst.names)
    g.add_edges_from(inst.atoms)
    if inst.has_loop:
        return True
    return any(len(c) % 2 == 1 for c in nx.cycle_basis(g)) or any(
        len(c) % 2 == 1 for c in nx.simple_cycles(g) if len(c) > 2
    )


@given(instances(max_vars=9, loops=True))
def test_bipartition_iff_no_odd_cycle(inst):
    col = bipartition(inst)
    assert (col is not None) == (not _has_odd_closed_walk(inst))
    if col is not None:
        assert all(col[a] != col[b] for a, b in inst.atoms)
        for comp in component_indices(inst):
            assert col[inst.names[comp[0]]] == BLACK


def _union_find_count(inst):
    parent = list(range(len(inst)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in inst.index_atoms:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(len(inst))})


@given(instances(max_vars=12, loops=True))
def test_components_partition(inst):
    parts = components(inst)
    assert len(parts) == _union_find_count(inst)
    seen = list(itertools.chain.from_iterable(p.names for p in parts))
    assert sorted(seen) == sorted(inst.names)
    assert sum(len(p.atoms) for p in parts) == len(inst.atoms)
    for p in parts:
        assert list(p.names) == sorted(p.names, key=inst.index.__getitem__)


def test_components_examples():
    two = Instance([(n, 1) for n in "abcd"], [("a", "b"), ("c", "d")])
    assert [p.names for p in components(two)] == [("a", "b"), ("c", "d")]
    example = two_bad_walks_instance()
    assert components(example) == [example]
