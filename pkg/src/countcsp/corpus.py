"""Exhaustive and random generators of instances and templates."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .formula import FINITE, Instance, TemplateGraph, is_bipartite


def _names(n: int) -> List[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def _possible_atoms(n: int, loops: bool) -> List[Tuple[int, int]]:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if loops:
        pairs += [(i, i) for i in range(n)]
    return pairs


def _is_connected(n: int, atoms: Sequence[Tuple[int, int]]) -> bool:
    if n <= 1:
        return True
    adj = {i: set() for i in range(n)}
    for i, j in atoms:
        adj[i].add(j)
        adj[j].add(i)
    seen, stack = {0}, [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def ordered_graphs(
    n: int, *, loops: bool = False, connected: bool = False, bipartite: bool = False
) -> Iterator[List[Tuple[int, int]]]:
    """Every atom set on variables ``0..n-1`` (the order is fixed by the indices)."""
    pool = _possible_atoms(n, loops)
    for mask in range(1 << len(pool)):
        atoms = [pool[k] for k in range(len(pool)) if mask >> k & 1]
        if connected and not _is_connected(n, atoms):
            continue
        if bipartite and not is_bipartite(Instance([(f"x{i}", 1) for i in range(n)], [(f"x{a}", f"x{b}") for a, b in atoms])):
            continue
        yield atoms


def build(counts: Sequence[int], atoms: Sequence[Tuple[int, int]]) -> Instance:
    names = _names(len(counts))
    return Instance(zip(names, counts), [(names[i], names[j]) for i, j in atoms])


def exhaustive_instances(
    max_vars: int,
    counts: Sequence[int] = (1, 2),
    *,
    min_vars: int = 1,
    loops: bool = False,
    connected: bool = False,
    bipartite: bool = False,
) -> Iterator[Instance]:
    """All instances with ``min_vars..max_vars`` variables, counts drawn from ``counts``."""
    for n in range(min_vars, max_vars + 1):
        for atoms in ordered_graphs(n, loops=loops, connected=connected, bipartite=bipartite):
            for cs in itertools.product(counts, repeat=n):
                yield build(cs, atoms)


def random_instance(
    rng: random.Random,
    n: int,
    counts: Sequence[int] = (1, 2),
    *,
    density: Optional[float] = None,
    loops: bool = False,
    connected: bool = False,
    bipartite: bool = False,
    max_tries: int = 10000,
) -> Instance:
    for _ in range(max_tries):
        p = rng.uniform(0.2, 0.7) if density is None else density
        if bipartite:
            side = [rng.randrange(2) for _ in range(n)]
            pool = [(i, j) for i, j in _possible_atoms(n, False) if side[i] != side[j]]
        else:
            pool = _possible_atoms(n, loops)
        atoms = [e for e in pool if rng.random() < p]
        if connected and not _is_connected(n, atoms):
            continue
        return build([rng.choice(counts) for _ in range(n)], atoms)
    raise RuntimeError("could not sample an instance with the requested shape")


# ---------------------------------------------------------------------------
# Templates
# ---------------------------------------------------------------------------

def template_from_nx(g: nx.Graph) -> TemplateGraph:
    vs = tuple(sorted(g.nodes))
    loops = frozenset(v for v in vs if g.has_edge(v, v))
    edges = frozenset(frozenset(e) for e in g.edges if e[0] != e[1])
    return TemplateGraph(FINITE, vs, edges, loops)


def template_to_nx(tmpl: TemplateGraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(tmpl.vertices)
    g.add_edges_from(tuple(e) for e in tmpl.edges)
    g.add_edges_from((v, v) for v in tmpl.loops)
    return g


def small_templates(max_vertices: int = 3) -> List[TemplateGraph]:
    """All graphs with loops on 1..max_vertices vertices, one per isomorphism class."""
    found: List[nx.Graph] = []
    for n in range(1, max_vertices + 1):
        vs = list(range(n))
        pool = [(i, j) for i in vs for j in vs if i <= j]
        for mask in range(1 << len(pool)):
            g = nx.Graph()
            g.add_nodes_from(vs)
            g.add_edges_from(pool[k] for k in range(len(pool)) if mask >> k & 1)
            if not any(_same_graph(g, h) for h in found):
                found.append(g)
    return [template_from_nx(g) for g in found]


def _same_graph(g: nx.Graph, h: nx.Graph) -> bool:
    if g.number_of_nodes() != h.number_of_nodes() or g.number_of_edges() != h.number_of_edges():
        return False
    for perm in itertools.permutations(list(h.nodes)):
        m = dict(zip(g.nodes, perm))
        if all(h.has_edge(m[a], m[b]) for a, b in g.edges):
            return True
    return False


def forests(max_vertices: int) -> List[TemplateGraph]:
    """Every forest on 1..max_vertices vertices up to isomorphism (loopless)."""
    out = []
    # unlabeled forests = multisets of unlabeled trees with total order n
    trees = {k: ([nx.empty_graph(1)] if k == 1 else list(nx.nonisomorphic_trees(k))) for k in range(1, max_vertices + 1)}
    catalogue = [(k, idx) for k in range(1, max_vertices + 1) for idx in range(len(trees[k]))]

    def multisets(total: int, start: int) -> Iterator[List[Tuple[int, int]]]:
        if total == 0:
            yield []
            return
        for pos in range(start, len(catalogue)):
            k, idx = catalogue[pos]
            if k <= total:
                for rest in multisets(total - k, pos):
                    yield [(k, idx)] + rest

    for n in range(1, max_vertices + 1):
        for parts in multisets(n, 0):
            g = nx.disjoint_union_all([trees[k][idx] for k, idx in parts])
            out.append(template_from_nx(nx.convert_node_labels_to_integers(g, first_label=1)))
    return out
