"""Quantified 2-CNF evaluation (Aspvall, Plass and Tarjan, 1979).

Literals are non-zero integers: ``+k`` is boolean ``k`` and ``-k`` its
negation.  Booleans are numbered from 1 in quantifier order.  The formula is
false exactly when, in the implication graph,

* an existential literal shares a strong component with its negation,
* a universal literal shares a strong component with an existential literal
  quantified before it, or
* a universal literal reaches a different universal literal.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

import networkx as nx

TRUE = "TRUE"
FALSE = "FALSE"


class Q2CNF:
    def __init__(self) -> None:
        self.universal: List[bool] = [False]  # index 0 unused
        self.clauses: List[Tuple[object, object]] = []
        self.contradiction = False

    def new_existential(self) -> int:
        self.universal.append(False)
        return len(self.universal) - 1

    def new_universal(self) -> int:
        self.universal.append(True)
        return len(self.universal) - 1

    def add_clause(self, a, b) -> None:
        """Add ``a or b``; either side may be the constant ``TRUE`` or ``FALSE``."""
        if a == TRUE or b == TRUE:
            return
        if a == FALSE and b == FALSE:
            self.contradiction = True
            return
        if a == FALSE:
            a = b
        elif b == FALSE:
            b = a
        self.clauses.append((a, b))

    def add_unit(self, a) -> None:
        self.add_clause(a, a)

    def add_equal(self, a, b) -> None:
        self.add_clause(a, negate(b))
        self.add_clause(negate(a), b)

    def is_true(self) -> bool:
        if self.contradiction:
            return False
        g = nx.DiGraph()
        nb = len(self.universal) - 1
        g.add_nodes_from(k for v in range(1, nb + 1) for k in (v, -v))
        for a, b in self.clauses:
            g.add_edge(-a, b)
            g.add_edge(-b, a)
        comp = {}
        for idx, scc in enumerate(nx.strongly_connected_components(g)):
            for lit in scc:
                comp[lit] = idx
        members = {}
        for lit, c in comp.items():
            members.setdefault(c, []).append(lit)
        for v in range(1, nb + 1):
            if not self.universal[v] and comp[v] == comp[-v]:
                return False
        for lit, c in comp.items():
            u = abs(lit)
            if not self.universal[u]:
                continue
            for other in members[c]:
                w = abs(other)
                if not self.universal[w] and w < u:
                    return False
        for v in range(1, nb + 1):
            if not self.universal[v]:
                continue
            for lit in (v, -v):
                for reached in nx.descendants(g, lit):
                    if self.universal[abs(reached)] and reached != lit:
                        return False
        return True


def negate(lit):
    if lit == TRUE:
        return FALSE
    if lit == FALSE:
        return TRUE
    return -lit


def brute_force(prefix: Sequence[bool], clauses: Iterable[Tuple[int, int]]) -> bool:
    """Reference evaluation by full expansion; ``prefix[k]`` is True for universal boolean k+1."""
    clauses = list(clauses)
    n = len(prefix)

    def value(k: int, vals: List[bool]) -> bool:
        if k == n:
            return all(_lit(vals, a) or _lit(vals, b) for a, b in clauses)
        outcomes = (value(k + 1, vals + [x]) for x in (False, True))
        return all(outcomes) if prefix[k] else any(outcomes)

    return value(0, [])


def _lit(vals: List[bool], lit: int) -> bool:
    v = vals[abs(lit) - 1]
    return v if lit > 0 else not v
