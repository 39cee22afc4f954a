"""Instance generators for the hardness reductions and the NP-membership rewrite.

``lift_to_k2n`` turns a QCSP(K_n) instance (counts 1 and n) into an
{n}-instance over K_2n; ``lift_to_cycle`` turns a QCSP(K_j) instance into a
{1,2}-instance over the cycle C_2j.  Both come with structural validators so
generated files can be checked without solving them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from .formula import Instance, TemplateGraph, complete_graph
from .oracle import GameSolver

GADGET_ROLES = ("w", "q", "z", "a", "b", "c")
GADGET_EDGES = (("w", "a"), ("w", "b"), ("q", "b"), ("q", "c"), ("z", "a"), ("z", "b"))


class ValidationError(ValueError):
    """A generated instance does not have the structure the construction promises."""


def _check_source(src: Instance, n: int) -> None:
    if any(c not in (1, n) for c in src.counts):
        raise ValueError(f"source counts must be 1 (exists) or {n} (for all)")
    if src.has_loop:
        raise ValueError("source instances must be loop-free")


# ---------------------------------------------------------------------------
# {n}-CSP(K_2n)
# ---------------------------------------------------------------------------

def _gadget_name(k: int, role: str) -> str:
    return f"g{k}_{role}"


def lift_to_k2n(src: Instance, n: int) -> Instance:
    """Encode QCSP(K_n) into {n}-CSP(K_2n) with one six-variable gadget per edge."""
    if n < 3:
        raise ValueError("the edge-gadget reduction needs n >= 3")
    _check_source(src, n)
    us = [f"u{i}" for i in range(1, n + 1)]
    clash = set(us) & set(src.names)
    if clash:
        raise ValueError(f"source variable names collide with clique names: {sorted(clash)}")
    variables = [(u, n) for u in us] + [(v, n) for v in src.names]
    atoms = [(us[i], us[k]) for i in range(n) for k in range(i + 1, n)]
    for v, b in src.variables:
        atoms.append((v, us[0]))
        if b == n:
            atoms += [(v, u) for u in us[1:]]
    for k, (x, y) in enumerate(sorted(src.atoms, key=lambda e: (src.index[e[0]], src.index[e[1]]))):
        g = {r: _gadget_name(k, r) for r in GADGET_ROLES}
        variables += [(g[r], n) for r in GADGET_ROLES]
        atoms += [(g[p], g[q]) for p, q in GADGET_EDGES]
        atoms += [(x, g["a"]), (y, g["b"]), (g["a"], us[0])]
        atoms += [(g["c"], u) for u in us[:3]]
        atoms += [(g[r], u) for r in "abc" for u in us[3:]]
    return Instance(variables, atoms)


def gadget_residual(n: int) -> Instance:
    """The clique, two endpoint variables (each joined to ``u1`` only) and one gadget."""
    us = [f"u{i}" for i in range(1, n + 1)]
    src = Instance([("x", 1), ("y", 1)], [("x", "y")])
    full = lift_to_k2n(src, n)
    keep = us + ["x", "y"] + [_gadget_name(0, r) for r in GADGET_ROLES]
    return full.restrict(keep)


def gadget_winnable(n: int, colour_x: int, colour_y: int, solver: Optional[GameSolver] = None) -> bool:
    """Does Prover win the gadget once ``u_i = n + i`` and the endpoint colours are fixed?"""
    if solver is None:
        solver = GameSolver(gadget_residual(n), complete_graph(2 * n))
    prefix = tuple(n + i for i in range(1, n + 1)) + (colour_x, colour_y)
    return solver.wins_from(prefix)


def gadget_claim(n: int, colour_x: int, colour_y: int) -> bool:
    """Prover wins unless the endpoints share a real colour or one of them takes ``n + 1``."""
    same_real = colour_x == colour_y and colour_x <= n
    return not same_real and n + 1 not in (colour_x, colour_y)


def gadget_table(n: int = 3) -> Dict[Tuple[int, int], Tuple[bool, bool]]:
    """(solved, claimed) for every pair of endpoint colours."""
    solver = GameSolver(gadget_residual(n), complete_graph(2 * n))
    colours = range(1, 2 * n + 1)
    return {(i, j): (gadget_winnable(n, i, j, solver), gadget_claim(n, i, j)) for i, j in product(colours, colours)}


def validate_k2n(src: Instance, n: int, out: Instance) -> None:
    expected = n + len(src) + 6 * len(src.atoms)
    if len(out) != expected:
        raise ValidationError(f"expected {expected} variables, found {len(out)}")
    if any(c != n for c in out.counts):
        raise ValidationError("every lifted variable must have count n")
    if list(out.names[: n + len(src)]) != [f"u{i}" for i in range(1, n + 1)] + list(src.names):
        raise ValidationError("lifted order must list the clique, then the source variables")
    expected_atoms = n * (n - 1) // 2 + sum(1 if b == 1 else n for b in src.counts)
    expected_atoms += len(src.atoms) * (6 + 3 + 3 + 3 * (n - 3))
    if len(out.atoms) != expected_atoms:
        raise ValidationError(f"expected {expected_atoms} atoms, found {len(out.atoms)}")


# ---------------------------------------------------------------------------
# {1,2}-CSP(C_2j)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycleLayout:
    """Names used by :func:`lift_to_cycle`, kept for validation and demos."""

    j: int
    fixed: Tuple[str, ...]
    copies: Dict[int, Tuple[Tuple[str, ...], ...]]  # edge index -> copies (0 = next to fixed cycle)
    pendants: Dict[int, Tuple[str, ...]]  # edge index -> interior pendant vertices from x outwards
    edges: Tuple[Tuple[str, str], ...]  # source edges in gadget order
    universal_paths: Dict[str, Tuple[str, ...]]


def _cycle_atoms(names: Sequence[str]) -> List[Tuple[str, str]]:
    m = len(names)
    return [(names[k], names[(k + 1) % m]) for k in range(m)]


def cycle_prefix(j: int) -> List[int]:
    """Counts on the fixed cycle: at-least-2 on the first ``j + 1``, plain exists after."""
    return [2] * (j + 1) + [1] * (j - 1)


def lift_to_cycle_with_layout(src: Instance, j: int) -> Tuple[Instance, CycleLayout]:
    if j < 3:
        raise ValueError("the cycle reduction needs j >= 3")
    _check_source(src, j)
    size = 2 * j
    fixed = tuple(f"w{k}" for k in range(1, size + 1))
    variables: List[Tuple[str, int]] = list(zip(fixed, cycle_prefix(j)))
    atoms: List[Tuple[str, str]] = _cycle_atoms(fixed)
    paths: Dict[str, Tuple[str, ...]] = {}
    for v, b in src.variables:
        if b == j:
            path = tuple(f"{v}_p{k}" for k in range(1, j + 1))
            paths[v] = path
            variables.append((path[0], 1))
            variables += [(p, 2) for p in path[1:]]
            chain = list(path) + [v]
            atoms += list(zip(chain, chain[1:]))
        variables.append((v, 1))
    copies: Dict[int, Tuple[Tuple[str, ...], ...]] = {}
    pendants: Dict[int, Tuple[str, ...]] = {}
    order = sorted(src.atoms, key=lambda e: (src.index[e[0]], src.index[e[1]]))
    for e, (x, y) in enumerate(order):
        layers = tuple(tuple(f"e{e}_c{i}_{k}" for k in range(size)) for i in range(3 * j))
        copies[e] = layers
        for layer in layers:
            variables += [(name, 1) for name in layer]
            atoms += _cycle_atoms(layer)
        atoms += [(fixed[k], layers[0][k]) for k in range(size)]
        for lo, hi in zip(layers, layers[1:]):
            atoms += list(zip(lo, hi))
        left = layers[-1]
        atoms.append((y, left[0]))
        pend = tuple(f"e{e}_p{k}" for k in range(1, j))
        pendants[e] = pend
        variables += [(p, 1) for p in pend]
        chain = [x] + list(pend) + [left[j]]
        atoms += list(zip(chain, chain[1:]))
    out = Instance(variables, atoms)
    return out, CycleLayout(j, fixed, copies, pendants, tuple(order), paths)


def lift_to_cycle(src: Instance, j: int) -> Instance:
    """Encode QCSP(K_j) into {1,2}-CSP(C_2j) through prism gadgets."""
    return lift_to_cycle_with_layout(src, j)[0]


def validate_cycle(src: Instance, j: int, out: Instance, layout: CycleLayout) -> Dict[str, int]:
    """Re-derive the construction's structure from ``out`` alone; raise on any mismatch."""
    size = 2 * j
    universal = sum(1 for c in src.counts if c == j)
    expected = size + len(src) + universal * j + len(src.atoms) * (3 * j * size + (j - 1))
    if len(out) != expected:
        raise ValidationError(f"expected {expected} variables, found {len(out)}")
    if list(out.counts[:size]) != cycle_prefix(j):
        raise ValidationError(f"fixed-cycle counts {out.counts[:size]} differ from {cycle_prefix(j)}")
    g = nx.Graph()
    g.add_nodes_from(out.names)
    g.add_edges_from(out.atoms)

    def has(a: str, b: str) -> bool:
        return g.has_edge(a, b)

    ring = layout.fixed
    if not all(has(ring[k], ring[(k + 1) % size]) for k in range(size)):
        raise ValidationError("fixed cycle is incomplete")
    rungs = 0
    for e, (x, y) in enumerate(layout.edges):
        layers = layout.copies[e]
        if len(layers) != 3 * j:
            raise ValidationError(f"edge {x}{y}: expected {3 * j} copies, found {len(layers)}")
        for layer in layers:
            if len(layer) != size or not all(has(layer[k], layer[(k + 1) % size]) for k in range(size)):
                raise ValidationError(f"edge {x}{y}: a copy is not a {size}-cycle")
        for lo, hi in zip((ring,) + layers, layers):
            for k in range(size):
                if not has(lo[k], hi[k]):
                    raise ValidationError(f"edge {x}{y}: rung {lo[k]}-{hi[k]} missing")
                rungs += 1
        pend = layout.pendants[e]
        if len(pend) != j - 1:
            raise ValidationError(f"edge {x}{y}: pendant has {len(pend)} interior vertices")
        left = layers[-1]
        chain = [x] + list(pend) + [left[j]]
        if not all(has(a, b) for a, b in zip(chain, chain[1:])):
            raise ValidationError(f"edge {x}{y}: pendant path broken")
        if not has(y, left[0]):
            raise ValidationError(f"edge {x}{y}: {y} not joined to the leftmost copy")
        ring_g = g.subgraph(left)
        if nx.shortest_path_length(ring_g, left[0], left[j]) != j:
            raise ValidationError(f"edge {x}{y}: attachments are not diametrically opposite")
    for v, path in layout.universal_paths.items():
        if len(path) != j:
            raise ValidationError(f"universal {v}: path has {len(path)} vertices")
        counts = [out.count(p) for p in path] + [out.count(v)]
        if counts != [1] + [2] * (j - 1) + [1]:
            raise ValidationError(f"universal {v}: path counts {counts}")
    return {"variables": len(out), "atoms": len(out.atoms), "rungs": rungs}


def endpoint_distance(out: Instance, x: str, y: str) -> int:
    """Length of a shortest path between two variables in the instance graph."""
    g = nx.Graph()
    g.add_nodes_from(out.names)
    g.add_edges_from(out.atoms)
    return nx.shortest_path_length(g, x, y)


# ---------------------------------------------------------------------------
# Dominating looped vertex
# ---------------------------------------------------------------------------

def exists_to_atleast2(src: Instance) -> Instance:
    """Raise every count from 1 to 2 (the NP-hardness direction)."""
    if any(c != 1 for c in src.counts):
        raise ValueError("expected an instance with every count equal to 1")
    return src.with_counts({x: 2 for x in src.names})


@dataclass(frozen=True)
class GuardedInstance:
    """An all-existential instance plus variables restricted to a vertex subset."""

    instance: Instance
    guarded: FrozenSet[str]
    allowed: FrozenSet[object]

    def domains(self) -> Dict[str, FrozenSet[object]]:
        return {x: self.allowed for x in self.guarded}


def add_unary_guard(src: Instance, H: TemplateGraph, w=None) -> GuardedInstance:
    """Turn each at-least-2 variable into a plain one restricted to ``H - w`` (NP membership)."""
    from .classify import Unsupported, dominating_loop

    if any(c not in (1, 2) for c in src.counts):
        raise ValueError("expected counts 1 and 2")
    if w is None:
        w = dominating_loop(H)
    if w is None or w not in H.loops or H.adjacency[w] < set(H.vertices):
        raise Unsupported("template has no looped dominating vertex")
    multi = frozenset(x for x, c in src.variables if c == 2)
    out = src.with_counts({x: 1 for x in multi}) if multi else src
    return GuardedInstance(out, multi, frozenset(v for v in H.vertices if v != w))
