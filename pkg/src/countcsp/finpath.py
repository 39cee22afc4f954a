"""Deciding {1,2}-quantified instances on finite paths and forests.

Finite paths reuse the infinite-path analysis.  A yes-instance on ``P_n`` is
one on the infinite path whose values the Adversary cannot push too far from
the middle of the path.  How far they can be pushed is measured by two
displacement tables computed along the quantifier order:

    g(v) = beta(v) - 1 + max(0, max_{u before v, delta(u,v) finite} g(u) - delta(u,v) + beta(v) - 1)

``gamma`` starts each component at 0 and ``gamma_prime`` at ``beta - 1``.
Even paths reject when some ``gamma(v) >= n/2``.  Odd paths reject when both
colour classes contain a vertex with ``gamma_prime >= (n-1)/2``.  Paths with
at most three vertices have direct combinatorial characterizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from .formula import BLACK, Instance, TemplateGraph, bipartition, component_indices
from .infpath import DeltaTable, decide_infinite_path, delta_table, offer_window
from .oracle import GameState

Number = Union[int, Fraction]


@dataclass(frozen=True)
class GammaTable:
    gamma: Dict[str, int]
    gamma_prime: Dict[str, int]
    colouring: Dict[str, str]


def _first_of_component(inst: Instance) -> List[bool]:
    first = [False] * len(inst)
    for comp in component_indices(inst):
        first[comp[0]] = True
    return first


def gamma_tables(inst: Instance, table: Optional[DeltaTable] = None) -> GammaTable:
    """Both displacement tables; each component's first variable is its base case."""
    if table is None:
        table = delta_table(inst, early_exit=False)
    colouring = bipartition(inst)
    if colouring is None:
        raise ValueError("displacement tables need a bipartite, loop-free instance")
    first = _first_of_component(inst)
    beta = inst.counts
    g: List[int] = []
    gp: List[int] = []
    for v in range(len(inst)):
        if first[v]:
            g.append(0)
            gp.append(beta[v] - 1)
            continue
        best = best_p = 0
        for u in range(v):
            if table.finite(u, v):
                dist = int(table.matrix[u, v])
                best = max(best, g[u] - dist + beta[v] - 1)
                best_p = max(best_p, gp[u] - dist + beta[v] - 1)
        g.append(beta[v] - 1 + best)
        gp.append(beta[v] - 1 + best_p)
    names = inst.names
    return GammaTable(dict(zip(names, g)), dict(zip(names, gp)), colouring)


# ---------------------------------------------------------------------------
# Characterizations for short paths (per connected component)
# ---------------------------------------------------------------------------

def _component_ok_small(inst: Instance, comp: List[int], n: int, colouring: Mapping[str, str]) -> bool:
    names, beta = inst.names, inst.counts
    first = comp[0]
    multi = [v for v in comp if beta[v] == 2]
    if n == 1:
        return len(comp) == 1 and beta[first] == 1
    if n == 2:
        return all(v == first for v in multi)
    if n == 3:
        return len({colouring[names[v]] for v in multi}) <= 1
    if n == 4:
        return not any(
            beta[i] == 2 and beta[j] == 2 and i != first and j != first
            for i, j in inst.index_atoms
            if i in comp
        )
    if n == 5:
        # some colour class C such that every atom between two count-2
        # variables has its earlier endpoint in C
        tails = {colouring[names[i]] for i, j in inst.index_atoms if i in comp and beta[i] == 2 and beta[j] == 2}
        return len(tails) <= 1
    raise ValueError("short-path characterizations cover n <= 5")


def decide_short_path(inst: Instance, n: int) -> bool:
    """Direct characterization for ``n <= 5``, assuming the infinite path is already satisfied."""
    colouring = bipartition(inst)
    return all(_component_ok_small(inst, comp, n, colouring) for comp in component_indices(inst))


def _even_rule(gt: GammaTable, names: Sequence[str], n: int) -> bool:
    return all(2 * gt.gamma[x] < n for x in names)


def _odd_rule(gt: GammaTable, names: Sequence[str], n: int) -> bool:
    high = {gt.colouring[x] for x in names if 2 * gt.gamma_prime[x] >= n - 1}
    return len(high) < 2


def decide_path(inst: Instance, n: int, *, method: str = "auto") -> bool:
    """True iff ``P_n`` satisfies the instance (counts must lie in {1, 2}).

    ``method`` is ``"auto"`` (short-path rules for ``n <= 3``, displacement
    rules from 4 on), ``"short"`` (short-path rules, ``n <= 5``) or
    ``"gamma"`` (displacement rules, ``n >= 4``).
    """
    if n < 1:
        raise ValueError("path order must be positive")
    if any(c not in (1, 2) for c in inst.counts):
        raise ValueError("the path decider handles counts 1 and 2 only")
    if inst.has_loop or bipartition(inst) is None:
        return False
    if not decide_infinite_path(inst):
        return False
    if method == "auto":
        method = "short" if n <= 3 else "gamma"
    if method == "short":
        return decide_short_path(inst, n)
    if method != "gamma":
        raise ValueError(f"unknown method {method!r}")
    if n < 4:
        raise ValueError("displacement rules need n >= 4")
    gt = gamma_tables(inst)
    for comp in component_indices(inst):
        names = [inst.names[v] for v in comp]
        ok = _even_rule(gt, names, n) if n % 2 == 0 else _odd_rule(gt, names, n)
        if not ok:
            return False
    return True


# ---------------------------------------------------------------------------
# Strategies that push values away from / towards the middle of the path
# ---------------------------------------------------------------------------

def adversary_away(state: GameState, offered: Tuple[int, ...], M: Number) -> int:
    """Pick the offered value farthest from ``M``; ties go to the larger value."""
    return max(offered, key=lambda x: (abs(x - M), x))


def prover_toward(
    state: GameState,
    M: Number,
    t: Union[None, int, Mapping[str, int]],
    table: DeltaTable,
) -> Tuple[int, ...]:
    """Offer the ``beta`` admissible values closest to ``M`` (ties: larger value first).

    Admissible values lie in the offer window of the infinite-path strategy
    and have the parity it forces.  For the first variable of a component the
    window is unbounded; ``t`` (a parity bit, or a map from component-first
    variable names to parity bits) pins that variable's parity, and ``None``
    leaves it free.
    """
    beta = state.count
    window = offer_window(state, table)
    if window is None:
        parity = t.get(state.variable) if isinstance(t, Mapping) else t
        centre = int(Fraction(M).__floor__())
        cands = [c for c in range(centre - 4, centre + 6) if parity is None or c % 2 == parity]
    else:
        lo, hi = window
        cands = list(range(lo, hi + 1, 2))
    cands.sort(key=lambda c: (abs(c - M), -c))
    if len(cands) < beta:
        raise AssertionError(f"no room to offer {beta} values at {state.variable}")
    return tuple(cands[:beta])


# ---------------------------------------------------------------------------
# Forests
# ---------------------------------------------------------------------------

def _template_nx(H: TemplateGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(H.vertices)
    g.add_edges_from(tuple(e) for e in H.edges)
    return g


def longest_path_orders(H: TemplateGraph) -> List[int]:
    """Vertex count of a longest path in each tree of the forest ``H``."""
    if not H.is_finite or H.loops:
        raise ValueError("expected a finite loopless forest")
    g = _template_nx(H)
    if not nx.is_forest(g):
        raise ValueError("template is not a forest")
    orders = []
    for comp in nx.connected_components(g):
        start = next(iter(comp))
        far = max(nx.single_source_shortest_path_length(g, start).items(), key=lambda kv: kv[1])[0]
        ecc = max(nx.single_source_shortest_path_length(g, far).values())
        orders.append(ecc + 1)
    return orders


def decide_forest(inst: Instance, H: TemplateGraph) -> bool:
    """Decide on a forest by its longest path.

    When two trees both attain the longest path, Prover can split the first
    variable's two offers between them, so that variable only needs one value.
    """
    if any(c not in (1, 2) for c in inst.counts):
        raise ValueError("the forest decider handles counts 1 and 2 only")
    orders = longest_path_orders(H)
    p = max(orders)
    tied = orders.count(p) >= 2
    if inst.has_loop:
        return False
    for comp in component_indices(inst):
        sub = inst.restrict(inst.names[v] for v in comp)
        if tied:
            sub = sub.with_counts({sub.names[0]: 1})
        if not decide_path(sub, p):
            return False
    return True


# ---------------------------------------------------------------------------
# Simulating the path strategies
# ---------------------------------------------------------------------------

def centre(n: int) -> Fraction:
    """Midpoint of the path 1..n."""
    return Fraction(n + 1, 2)


def parity_choice(inst: Instance, n: int, gt: Optional[GammaTable] = None) -> Dict[str, int]:
    """Parity pinned on each component's first variable for odd paths.

    Odd values share the parity of the path's ends and so can sit one step
    farther from the centre than even ones.  The colour class holding the
    variables with large ``gamma_prime`` is therefore made odd.
    """
    if gt is None:
        gt = gamma_tables(inst)
    out = {}
    for comp in component_indices(inst):
        first = inst.names[comp[0]]
        high = {gt.colouring[inst.names[v]] for v in comp if 2 * gt.gamma_prime[inst.names[v]] >= n - 1}
        same = BLACK if not high else next(iter(high))
        out[first] = 1 if same == BLACK else 0
    return out


def path_prover(inst: Instance, n: int):
    """The toward-the-centre Prover for ``P_n``, playing on integers."""
    table = delta_table(inst, early_exit=False)
    t = parity_choice(inst, n) if n % 2 else None
    M = centre(n)
    return lambda state: prover_toward(state, M, t, table)


def path_adversary(n: int):
    M = centre(n)
    return lambda state, offered: adversary_away(state, offered, M)


def stays_on_path(assignment: Sequence[int], n: int) -> bool:
    return all(1 <= x <= n for x in assignment)
