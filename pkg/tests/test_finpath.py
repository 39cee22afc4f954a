from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from countcsp.finpath import (
    GammaTable,
    _odd_rule,
    adversary_away,
    centre,
    decide_forest,
    decide_path,
    gamma_tables,
    longest_path_orders,
    path_adversary,
    path_prover,
    prover_toward,
    stays_on_path,
)
from countcsp.formula import BLACK, WHITE, FINITE, Instance, TemplateGraph, component_indices, infinite_path, path_graph
from countcsp.infpath import decide_infinite_path, delta_table, infpath_prover_offers
from countcsp.oracle import GameState, decide, find_losing_play, play
from strategies import instances

P_INF = infinite_path()


def test_p3_examples():
    two_colours = Instance([("x", 2), ("y", 2)], [("x", "y")])
    assert not decide_path(two_colours, 3) and not decide(two_colours, path_graph(3))
    same_colour = Instance([("x", 1), ("y", 2), ("z", 2)], [("x", "y"), ("x", "z")])
    assert decide_path(same_colour, 3) and decide(same_colour, path_graph(3))


def test_gamma_examples():
    lone = gamma_tables(Instance([("x", 2)]))
    assert (lone.gamma["x"], lone.gamma_prime["x"]) == (0, 1)
    edge = gamma_tables(Instance([("u", 2), ("v", 2)], [("u", "v")]))
    assert edge.gamma["v"] == 1 and edge.gamma_prime["v"] == 2
    assert edge.colouring == {"u": BLACK, "v": WHITE}


def test_five_vertex_path_counterexample_to_the_short_rule():
    # The short-path characterization accepts this instance on P5, but the
    # Adversary wins; the displacement rule agrees with the game.
    inst = Instance([("x1", 2), ("x2", 2), ("x3", 2), ("x4", 1)], [("x1", "x4"), ("x2", "x3"), ("x3", "x4")])
    assert decide(inst, path_graph(5)) is False
    assert decide_path(inst, 5) is False
    assert decide_path(inst, 5, method="short") is True


def test_method_contracts():
    inst = Instance([("x", 2)])
    with pytest.raises(ValueError):
        decide_path(inst, 3, method="gamma")
    with pytest.raises(ValueError):
        decide_path(Instance([("x", 3)]), 4)
    with pytest.raises(ValueError):
        decide_path(inst, 0)


@given(instances(max_vars=5, bipartite=True, connected=True), st.integers(1, 9))
def test_matches_oracle(inst, n):
    assert decide_path(inst, n) == decide(inst, path_graph(n))


@given(instances(max_vars=7, bipartite=True))
def test_short_and_displacement_rules_agree_on_p4(inst):
    assert decide_path(inst, 4, method="short") == decide_path(inst, 4, method="gamma")


@given(instances(max_vars=7, bipartite=True))
def test_gamma_prime_dominates_gamma(inst):
    gt = gamma_tables(inst)
    assert all(gt.gamma_prime[x] >= gt.gamma[x] >= 0 for x in inst.names)
    for comp in component_indices(inst):
        first = inst.names[comp[0]]
        assert gt.gamma[first] == 0 and gt.gamma_prime[first] == inst.count(first) - 1
    if decide_infinite_path(inst):
        assert max(gt.gamma_prime.values()) <= len(inst)


@given(instances(max_vars=7, bipartite=True), st.sampled_from([5, 7, 9, 11]))
def test_odd_rule_ignores_colour_names(inst, n):
    gt = gamma_tables(inst)
    swapped = {x: (WHITE if c == BLACK else BLACK) for x, c in gt.colouring.items()}
    other = GammaTable(gt.gamma, gt.gamma_prime, swapped)
    for comp in component_indices(inst):
        names = [inst.names[v] for v in comp]
        assert _odd_rule(gt, names, n) == _odd_rule(other, names, n)


@given(instances(max_vars=7, bipartite=True), st.integers(1, 12))
def test_monotone_in_path_order(inst, n):
    if decide_path(inst, n):
        assert decide_path(inst, n + 1)
        assert decide_infinite_path(inst)


@given(instances(max_vars=7))
def test_long_even_paths_equal_the_infinite_path(inst):
    n = 2 * len(inst) + 2
    assert decide_path(inst, n) == decide_infinite_path(inst)
    assert decide_path(inst, n + 2) == decide_infinite_path(inst)


def test_adversary_prefers_the_far_value():
    assert adversary_away(None, (4, 6), Fraction(9, 2)) == 6
    assert adversary_away(None, (3, 6), Fraction(9, 2)) == 6


@given(instances(max_vars=6, bipartite=True, connected=True), st.sampled_from([Fraction(1, 2), 0, 3, Fraction(7, 2)]))
def test_away_adversary_forces_displacement(inst, M):
    assume(decide_infinite_path(inst))
    gt, table = gamma_tables(inst), delta_table(inst)
    for prover in (lambda s: infpath_prover_offers(s, table), lambda s: prover_toward(s, M, None, table)):
        f = play(inst, P_INF, prover, lambda s, o: adversary_away(s, o, M)).assignment
        assert all(abs(f[i] - M) >= gt.gamma[x] for i, x in enumerate(inst.names))


def _all_plays(inst, prover):
    stack = [GameState(inst, P_INF)]
    while stack:
        s = stack.pop()
        if s.index == len(inst):
            yield s.assignment
            continue
        for v in prover(s):
            stack.append(s.extend(v))


@given(instances(max_vars=6, bipartite=True, connected=True))
def test_toward_prover_stays_near_the_centre_on_p6(inst):
    assume(decide_path(inst, 6))
    gt = gamma_tables(inst)
    M = centre(6)
    prover = path_prover(inst, 6)
    assert find_losing_play(inst, P_INF, prover) is None
    for f in _all_plays(inst, prover):
        assert stays_on_path(f, 6)
        assert all(abs(f[i] - M) <= gt.gamma[x] + 1 for i, x in enumerate(inst.names))


@given(instances(max_vars=6, bipartite=True, connected=True), st.integers(4, 9))
def test_strategies_decide_the_path_game(inst, n):
    assume(decide_infinite_path(inst))
    prover = path_prover(inst, n)
    if decide_path(inst, n):
        assert all(stays_on_path(f, n) for f in _all_plays(inst, prover))
    else:
        f = play(inst, P_INF, prover, path_adversary(n)).assignment
        assert not stays_on_path(f, n)


def _forest(edges, m):
    return TemplateGraph(FINITE, tuple(range(m)), frozenset(frozenset(e) for e in edges), frozenset())


def test_forest_examples():
    assert decide_forest(Instance([("x", 2)]), path_graph(2))
    two_p3 = _forest([(0, 1), (1, 2), (3, 4), (4, 5)], 6)
    assert longest_path_orders(two_p3) == [3, 3]
    inst = Instance([("x", 2), ("y", 2)], [("x", "y")])
    assert decide_forest(inst, two_p3) == decide(inst, two_p3) == decide_path(inst.with_counts({"x": 1}), 3)
    with pytest.raises(ValueError):
        decide_forest(inst, _forest([(0, 1), (1, 2), (2, 0)], 3))


@st.composite
def forests(draw, max_vertices=7):
    m = draw(st.integers(1, max_vertices))
    edges = []
    for v in range(1, m):
        if draw(st.booleans()):
            edges.append((draw(st.integers(0, v - 1)), v))
    return _forest(edges, m)


@given(instances(max_vars=5), forests())
def test_forest_matches_oracle(inst, H):
    assert decide_forest(inst, H) == decide(inst, H)
