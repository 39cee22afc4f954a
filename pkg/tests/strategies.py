"""Hypothesis strategies for instances and templates."""

from hypothesis import strategies as st

from countcsp.formula import FINITE, Instance, TemplateGraph


@st.composite
def instances(draw, min_vars=1, max_vars=6, counts=(1, 2), loops=False, bipartite=False, connected=False):
    n = draw(st.integers(min_vars, max_vars))
    names = [f"x{i}" for i in range(n)]
    cs = draw(st.lists(st.sampled_from(counts), min_size=n, max_size=n))
    if bipartite:
        side = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        pool = [(i, j) for i in range(n) for j in range(i + 1, n) if side[i] != side[j]]
    else:
        pool = [(i, j) for i in range(n) for j in range(i if loops else i + 1, n)]
    picked = draw(st.lists(st.sampled_from(pool), unique=True, max_size=len(pool))) if pool else []
    if connected:
        # chain the variables so the instance graph is connected
        extra = []
        for k in range(1, n):
            if bipartite:
                partners = [i for i in range(k) if side[i] != side[k]]
                if partners:
                    extra.append((draw(st.sampled_from(partners)), k))
            else:
                extra.append((draw(st.integers(0, k - 1)), k))
        picked = list(set(picked) | set(extra))
    return Instance(zip(names, cs), [(names[i], names[j]) for i, j in picked])


@st.composite
def templates(draw, max_vertices=4, loops=True):
    m = draw(st.integers(1, max_vertices))
    pool = [(i, j) for i in range(m) for j in range(i if loops else i + 1, m)]
    picked = draw(st.lists(st.sampled_from(pool), unique=True, max_size=len(pool))) if pool else []
    edges = frozenset(frozenset(e) for e in picked if e[0] != e[1])
    return TemplateGraph(FINITE, tuple(range(m)), edges, frozenset(e[0] for e in picked if e[0] == e[1]))
