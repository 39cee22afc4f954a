"""Complexity labels for (template, quantifier set) pairs, plus the deciders for
templates with a looped dominating vertex and for templates on at most three
vertices.

Several template families are recognised up to isomorphism:

* ``P100``: path 0-1-2 with a loop at the end 0;
* ``P101``: the same path with loops at both ends;
* ``P10``: one edge with a loop at one end;
* ``K1*``: a single looped vertex; ``+`` below is disjoint union.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional

import networkx as nx

from .corpus import template_to_nx
from .finpath import decide_forest
from .formula import (
    FINITE,
    INFINITE_PATH,
    Instance,
    TemplateGraph,
    bipartition,
    component_indices,
    p10,
    p100,
    p101,
)
from .oracle import homomorphism_exists
from .q2sat import FALSE, Q2CNF, negate


class Unsupported(ValueError):
    """The requested decider does not cover this template or instance."""


class Label(str, enum.Enum):
    IN_L = "in-L"
    IN_P = "in-P"
    NP_COMPLETE = "NP-complete"
    NP_HARD = "NP-hard"
    PSPACE_COMPLETE = "Pspace-complete"
    TRIVIAL_YES = "trivial-yes"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ComplexityLabel:
    label: Label
    provenance: str

    def __str__(self) -> str:
        return f"{self.label.value} ({self.provenance})"


# ---------------------------------------------------------------------------
# Template shape predicates
# ---------------------------------------------------------------------------

def _nx(H: TemplateGraph) -> nx.Graph:
    return template_to_nx(H)


def _isomorphic(H: TemplateGraph, G: TemplateGraph) -> bool:
    if len(H.vertices) != len(G.vertices) or len(H.loops) != len(G.loops) or len(H.edges) != len(G.edges):
        return False
    return nx.is_isomorphic(_nx(H), _nx(G))


def _union(*parts: TemplateGraph) -> TemplateGraph:
    vs, edges, loops = [], set(), set()
    for k, part in enumerate(parts):
        rename = {v: f"{k}.{v}" for v in part.vertices}
        vs += list(rename.values())
        edges |= {frozenset(rename[x] for x in e) for e in part.edges}
        loops |= {rename[v] for v in part.loops}
    return TemplateGraph(FINITE, tuple(vs), frozenset(edges), frozenset(loops))


def _k1(loop: bool) -> TemplateGraph:
    return TemplateGraph(FINITE, (0,), frozenset(), frozenset({0}) if loop else frozenset())


def _k2() -> TemplateGraph:
    return TemplateGraph(FINITE, (0, 1), frozenset({frozenset((0, 1))}), frozenset())


def is_clique(H: TemplateGraph) -> bool:
    n = len(H.vertices)
    return H.is_finite and not H.loops and len(H.edges) == n * (n - 1) // 2


def has_adjacent_loops(H: TemplateGraph) -> bool:
    return any(all(v in H.loops for v in e) for e in H.edges)


def dominating_loop(H: TemplateGraph) -> Optional[object]:
    """A looped vertex adjacent to every other vertex, if there is one."""
    for w in H.vertices:
        if w in H.loops and H.adjacency[w] >= set(H.vertices):
            return w
    return None


def is_edge_free(H: TemplateGraph) -> bool:
    """Only loops and isolated vertices: no edge joins two distinct vertices."""
    return not H.edges


def is_forest(H: TemplateGraph) -> bool:
    return H.is_finite and not H.loops and nx.is_forest(_nx(H))


def _template_bipartite(H: TemplateGraph) -> bool:
    return not H.loops and nx.is_bipartite(_nx(H))


def _contains_c4(H: TemplateGraph) -> bool:
    g = _nx(H)
    for u in g:
        for v in g:
            if u == v:
                continue
            common = set(g[u]) & set(g[v]) - {u, v}
            if len(common) >= 2:
                return True
    return False


def shape_of_small(H: TemplateGraph) -> str:
    """A name for the shape of a template on at most three vertices."""
    if len(H.vertices) > 3:
        raise ValueError("expected at most three vertices")
    named = {
        "K3": TemplateGraph(FINITE, (0, 1, 2), frozenset(frozenset(e) for e in ((0, 1), (1, 2), (0, 2))), frozenset()),
        "P101": p101(),
        "P100": p100(),
        "P10+K1": _union(p10(), _k1(False)),
        "P10+K1*": _union(p10(), _k1(True)),
        "K1*+K2": _union(_k1(True), _k2()),
    }
    for name, G in named.items():
        if _isomorphic(H, G):
            return name
    if has_adjacent_loops(H):
        return "adjacent loops"
    if H.is_irreflexive:
        return "irreflexive"
    if dominating_loop(H) is not None:
        return "dominating loop"
    if is_edge_free(H):
        return "edge-free"
    raise AssertionError(f"unrecognised small template {H!r}")


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def _clique_label(n: int, X: FrozenSet[int]) -> ComplexityLabel:
    low = {j for j in X if j <= n // 2}
    if n <= 2 or not low:
        return ComplexityLabel(Label.IN_L, "cliques: n <= 2 or every quantifier above n/2 (prior work)")
    if X == {1}:
        return ComplexityLabel(Label.NP_COMPLETE, "cliques: n > 2 with plain existentials is graph colouring (prior work)")
    if any(1 < j and 2 * j < n for j in X) or (1 in X and any(2 * j >= n for j in X if j > 1)):
        return ComplexityLabel(Label.PSPACE_COMPLETE, "cliques: a quantifier strictly between 1 and n/2, or 1 with one at least n/2 (prior work)")
    if len(X) == 1 and 2 * next(iter(X)) == n:
        j = n // 2
        if j == 2:
            return ComplexityLabel(Label.IN_P, "{2}-CSP(K4) is polynomial via the F/R+/R- closure")
        return ComplexityLabel(Label.PSPACE_COMPLETE, f"{{{j}}}-CSP(K{n}) is Pspace-complete via the edge-gadget reduction")
    return ComplexityLabel(Label.UNKNOWN, "clique case not covered by the known classification")


def _small_label(H: TemplateGraph) -> ComplexityLabel:
    shape = shape_of_small(H)
    if shape == "K3":
        return ComplexityLabel(Label.PSPACE_COMPLETE, "K3 with {1,2} (prior work)")
    if shape == "P101":
        return ComplexityLabel(Label.PSPACE_COMPLETE, "P101: replace each universal x by an at-least-2 pair x, x' with an edge")
    if shape == "adjacent loops":
        return ComplexityLabel(Label.TRIVIAL_YES, "two adjacent loops: offer both looped vertices everywhere")
    if shape == "P100":
        return ComplexityLabel(Label.IN_P, "P100: quantified 2-SAT encoding")
    return ComplexityLabel(Label.IN_P, f"graphs on at most three vertices: {shape}")


def classify(H: TemplateGraph, X: Iterable[int]) -> ComplexityLabel:
    """Complexity of X-CSP(H), or ``unknown`` when no known result applies."""
    X = frozenset(X)
    if not X or any(j < 1 for j in X):
        raise ValueError("quantifier set must be a non-empty set of positive integers")
    if H.kind == INFINITE_PATH:
        if X <= {1, 2}:
            return ComplexityLabel(Label.IN_P, "infinite path: no bad looping walk")
        return ComplexityLabel(Label.UNKNOWN, "infinite path beyond {1,2} is open")
    n = len(H.vertices)
    if max(X) > n and not X <= {1, 2}:
        return ComplexityLabel(Label.UNKNOWN, "quantifier larger than the template")
    if is_clique(H):
        return _clique_label(n, X)
    if X == {1}:
        if H.loops:
            return ComplexityLabel(Label.TRIVIAL_YES, "a loop absorbs every existential instance")
        if not _template_bipartite(H):
            return ComplexityLabel(Label.NP_HARD, "non-bipartite H-colouring (prior work)")
        return ComplexityLabel(Label.UNKNOWN, "only the {1,2} and clique cases are classified")
    if X != {1, 2}:
        return ComplexityLabel(Label.UNKNOWN, "only the {1,2} and clique cases are classified")
    if n <= 3:
        return _small_label(H)
    w = dominating_loop(H)
    if w is not None:
        rest = H.without(w)
        if rest.loops:
            return ComplexityLabel(Label.TRIVIAL_YES, "dominating loop next to another loop")
        if _template_bipartite(rest):
            return ComplexityLabel(Label.IN_P, "dominating loop over a bipartite rest: at-least-2 part must be bipartite")
        return ComplexityLabel(Label.NP_COMPLETE, "dominating loop over a non-bipartite rest: reduces to and from H-colouring of the rest")
    if has_adjacent_loops(H):
        return ComplexityLabel(Label.TRIVIAL_YES, "two adjacent loops: offer both looped vertices everywhere")
    if H.is_irreflexive and _template_bipartite(H):
        if is_forest(H):
            return ComplexityLabel(Label.IN_P, "forests: decide on the longest path")
        if _contains_c4(H):
            return ComplexityLabel(Label.IN_L, "bipartite with a 4-cycle (prior work)")
        return ComplexityLabel(Label.PSPACE_COMPLETE, "bipartite, no 4-cycle, not a forest: reduction from cycles")
    if H.is_irreflexive:
        return ComplexityLabel(Label.NP_HARD, "non-bipartite: already NP-hard with plain existentials (prior work)")
    return ComplexityLabel(Label.UNKNOWN, "partially reflexive template outside the classified families")


# ---------------------------------------------------------------------------
# Deciders
# ---------------------------------------------------------------------------

def _check_12(inst: Instance) -> None:
    if any(c not in (1, 2) for c in inst.counts):
        raise Unsupported("this decider handles counts 1 and 2 only")


def _multi_part(inst: Instance) -> Instance:
    names = [x for x, c in inst.variables if c == 2]
    return inst.restrict(names).with_counts({x: 1 for x in names})


def decide_dominating(inst: Instance, H: TemplateGraph, w=None) -> bool:
    """Templates with a looped vertex ``w`` adjacent to everything.

    Count-1 variables can all sit on ``w``.  For a count-2 variable Prover
    offers ``w`` and one other value, so the count-2 variables must map into
    ``H - w`` as an ordinary homomorphism.
    """
    _check_12(inst)
    if w is None:
        w = dominating_loop(H)
    if w is None or w not in H.loops or H.adjacency[w] < set(H.vertices):
        raise Unsupported("template has no looped dominating vertex")
    rest = H.without(w)
    S = _multi_part(inst)
    if not len(S):
        return True
    if not rest.vertices:
        return False
    if rest.loops:
        return True
    if not S.atoms:
        return True
    if not rest.edges:
        return False
    if _template_bipartite(rest):
        return bipartition(S) is not None
    return homomorphism_exists(S, rest)


def decide_p100(inst: Instance) -> bool:
    """P100 (path 0-1-2, loop at 0) via a quantified 2-SAT encoding.

    Each variable gets two booleans: ``s`` for "value 1" and ``t`` for
    "value 2" (neither means 0).  Atoms forbid 1-1, 2-2 and 0-2, which gives
    the clauses ``not s_u or not s_v``, ``not t_u or s_v`` and ``not t_v or s_u``.

    Count-2 variables follow Prover's best reply shapes.  One with a later
    count-2 neighbour ("hub") is offered {0, 1}, so its earlier neighbours
    must be 0 and Adversary picks ``s``.  Otherwise it is offered {0, 1}
    or {0, 2}.  With no earlier neighbours Prover picks that freely.  With
    earlier neighbours, which must avoid 2, the offer is {0, 2} when they
    sit on 1 and {0, 1} when they sit on 0, and they must agree.
    """
    _check_12(inst)
    C = inst.counts
    n = len(inst)
    if any(C[i] == 2 for i in inst.looped):
        return False
    q = Q2CNF()
    s: List[object] = [None] * n
    t: List[object] = [None] * n
    for y in range(n):
        earlier = inst.earlier_neighbours(y)
        if C[y] == 1:
            s[y], t[y] = q.new_existential(), FALSE
            continue
        for u in earlier:
            q.add_unit(negate(t[u]))
        hub = any(v > y and C[v] == 2 for v in inst.neighbours[y])
        if hub:
            for u in earlier:
                q.add_unit(negate(s[u]))
            s[y], t[y] = q.new_universal(), FALSE
        elif not earlier:
            t[y] = q.new_existential()
            s[y] = -t[y]
        else:
            c = s[earlier[0]]
            for u in earlier[1:]:
                q.add_equal(s[u], c)
            s[y], t[y] = negate(c), c
    for i, j in inst.index_atoms:
        if i == j:
            q.add_unit(negate(s[i]))
            q.add_unit(negate(t[i]))
            continue
        q.add_clause(negate(s[i]), negate(s[j]))
        q.add_clause(negate(t[i]), s[j])
        q.add_clause(negate(t[j]), s[i])
    return q.is_true()


def _components_with_atoms(inst: Instance) -> List[List[int]]:
    looped = inst.looped
    out = []
    for comp in component_indices(inst):
        if len(comp) > 1 or comp[0] in looped:
            out.append(comp)
    return out


def _edge_free(inst: Instance, H: TemplateGraph) -> bool:
    loops, m = len(H.loops), len(H.vertices)
    C = inst.counts
    for comp in component_indices(inst):
        if len(comp) == 1 and comp[0] not in inst.looped:
            if C[comp[0]] > m:
                return False
            continue
        # every variable of the component lands on one looped vertex
        if not loops:
            return False
        first = comp[0]
        if any(C[v] == 2 for v in comp if v != first):
            return False
        if C[first] == 2 and loops < 2:
            return False
    return True


def _k1star_k2(inst: Instance) -> bool:
    C = inst.counts
    for comp in _components_with_atoms(inst):
        first = comp[0]
        if any(C[v] == 2 for v in comp if v != first):
            return False
        if C[first] == 2:
            sub = inst.restrict(inst.names[v] for v in comp)
            if sub.has_loop or bipartition(sub) is None:
                return False
    return True


def _p10_k1(inst: Instance) -> bool:
    # same answers as P10, where the looped end dominates
    return not _multi_part(inst).atoms


def _p10_k1star(inst: Instance) -> bool:
    C = inst.counts
    for comp in _components_with_atoms(inst):
        first = comp[0]
        multi = [v for v in comp if C[v] == 2]
        bad = [
            v for v in multi
            if v in inst.looped or any(C[u] == 2 for u in inst.neighbours[v])
        ]
        if not bad:
            continue
        if bad == [first] and multi == [first]:
            continue
        return False
    return True


def decide_small(inst: Instance, H: TemplateGraph) -> bool:
    """Templates on at most three vertices other than K3 and P101."""
    _check_12(inst)
    if not H.is_finite or len(H.vertices) > 3:
        raise Unsupported("decide_small needs a finite template on at most three vertices")
    shape = shape_of_small(H)
    if shape in ("K3", "P101"):
        raise Unsupported(f"{shape} is Pspace-complete; use the oracle")
    if max(inst.counts) > len(H.vertices):
        return False
    if shape == "adjacent loops":
        return True
    if shape == "irreflexive":
        return decide_forest(inst, H)
    if shape == "dominating loop":
        return decide_dominating(inst, H)
    if shape == "edge-free":
        return _edge_free(inst, H)
    if shape == "P100":
        return decide_p100(inst)
    if shape == "K1*+K2":
        return _k1star_k2(inst)
    if shape == "P10+K1":
        return _p10_k1(inst)
    if shape == "P10+K1*":
        return _p10_k1star(inst)
    raise AssertionError(shape)
