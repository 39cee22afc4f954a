"""Deciding {1,2}-quantified instances on the two-way infinite path.

A *looping walk* from ``u`` to ``v`` (``u != v``) is a single edge, or a walk
whose interior entries all come after both endpoints in the quantifier order
and which splits at some interior entry ``w`` into two looping walks.  Its
value ``lambda`` is the walk length minus twice the sum of ``beta - 1`` over
interior entries.  ``delta(u, v)`` is the smallest value over all looping
walks between ``u`` and ``v``.  The instance is a yes-instance exactly when it
is bipartite and no pair ``u`` before ``v`` has ``delta(u, v) <= beta(v) - 2``
(a *bad walk*).

Because the split entry of a looping walk comes after both endpoints, the
recursion ``delta(u, v) = min(1 if uv is an atom, min_w delta(u, w) +
delta(v, w) - 2 beta(w) + 2)`` over ``w`` later than ``u`` and ``v`` only looks
at pairs whose later member is strictly later.  Filling the table from the
last variable backwards therefore computes it exactly in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .formula import Instance, bipartition
from .oracle import GameState

INF = float("inf")


def walk_lambda(inst: Instance, walk: Sequence[str]) -> int:
    """Walk length minus twice the summed ``beta - 1`` of the interior entries."""
    if len(walk) < 2:
        raise ValueError("a walk needs at least two entries")
    for a, b in zip(walk, walk[1:]):
        if a not in inst.index or b not in inst.index:
            raise ValueError(f"unknown variable in walk {list(walk)}")
        if a == b or (min(a, b, key=inst.index.get), max(a, b, key=inst.index.get)) not in inst.atoms:
            raise ValueError(f"{a}-{b} is not an atom, so {list(walk)} is not a walk")
    return len(walk) - 1 - 2 * sum(inst.count(x) - 1 for x in walk[1:-1])


def is_looping_walk(inst: Instance, walk: Sequence[str]) -> bool:
    """Direct check of the recursive definition (exponential; meant for small inputs)."""
    try:
        walk_lambda(inst, walk)
    except ValueError:
        return False
    pos = inst.index

    def looping(lo: int, hi: int) -> bool:
        a, b = walk[lo], walk[hi]
        if a == b:
            return False
        if hi - lo == 1:
            return True
        ends = max(pos[a], pos[b])
        if any(pos[x] <= ends for x in walk[lo + 1:hi]):
            return False
        return any(looping(lo, m) and looping(m, hi) for m in range(lo + 1, hi))

    return looping(0, len(walk) - 1)


@dataclass(frozen=True)
class DeltaTable:
    """Looping-walk distances over the variables of one instance.

    ``matrix[i, j]`` holds ``delta`` for the index pair (``inf`` when no
    looping walk exists; the diagonal is unused).  ``split[i, j]`` records the
    entry at which an optimal walk splits (``-1`` for a single edge).  When the
    table was built with early exit, ``complete`` is False and only pairs whose
    later member is at or after the offending pair are filled in.
    """

    instance: Instance
    matrix: np.ndarray
    split: np.ndarray
    bad_pair: Optional[Tuple[str, str]]
    complete: bool

    def delta(self, u: str, v: str) -> float:
        i, j = self.instance.index[u], self.instance.index[v]
        if i == j:
            raise ValueError("delta is only defined for distinct variables")
        return self.matrix[i, j]

    def finite(self, i: int, j: int) -> bool:
        return bool(np.isfinite(self.matrix[i, j]))

    def walk(self, u: str, v: str) -> List[str]:
        """An optimal looping walk from ``u`` to ``v`` rebuilt from the split table."""
        idx = self.instance.index
        return [self.instance.names[k] for k in self._walk(idx[u], idx[v])]

    def _walk(self, i: int, j: int) -> List[int]:
        if not np.isfinite(self.matrix[i, j]):
            raise ValueError("no looping walk between these variables")
        w = int(self.split[i, j])
        if w < 0:
            return [i, j]
        return self._walk(i, w) + self._walk(w, j)[1:]

    def bad_walk(self) -> Optional[List[str]]:
        if self.bad_pair is None:
            return None
        return self.walk(*self.bad_pair)


def delta_table(inst: Instance, *, early_exit: bool = True) -> DeltaTable:
    """Compute looping-walk distances; with ``early_exit`` stop at the first bad pair.

    The caller is expected to have checked that the instance is bipartite and
    loop-free; the table is still well defined otherwise.
    """
    n = len(inst)
    beta = np.array(inst.counts, dtype=float)
    weight = 2 * beta - 2
    d = np.full((n, n), INF)
    split = np.full((n, n), -2, dtype=int)
    for i, j in inst.index_atoms:
        if i != j:
            d[i, j] = d[j, i] = 1
            split[i, j] = split[j, i] = -1
    bad = None
    for v in range(n - 1, 0, -1):
        if v + 1 < n:
            later = slice(v + 1, n)
            # candidate[u, k] = d(u, w) + d(v, w) - 2 beta(w) + 2 for w = v + 1 + k
            cand = d[:v, later] + (d[v, later] - weight[later])[None, :]
            best = np.argmin(cand, axis=1)
            vals = cand[np.arange(v), best]
            better = vals < d[:v, v]
            rows = np.nonzero(better)[0]
            d[rows, v] = d[v, rows] = vals[rows]
            split[rows, v] = split[v, rows] = best[rows] + v + 1
        hits = np.nonzero(d[:v, v] <= beta[v] - 2)[0]
        if hits.size and bad is None:
            bad = (inst.names[int(hits[0])], inst.names[v])
            if early_exit:
                return DeltaTable(inst, d, split, bad, False)
    return DeltaTable(inst, d, split, bad, True)


def decide_infinite_path(inst: Instance) -> bool:
    """True iff the infinite path satisfies the instance (counts must lie in {1, 2})."""
    return infinite_path_certificate(inst) is None


def infinite_path_certificate(inst: Instance) -> Optional[Dict[str, object]]:
    """``None`` for yes-instances, otherwise a description of the obstruction."""
    if any(c not in (1, 2) for c in inst.counts):
        raise ValueError("the infinite-path decider handles counts 1 and 2 only")
    if inst.has_loop:
        name = inst.names[min(inst.looped)]
        return {"reason": "loop atom", "variable": name}
    if bipartition(inst) is None:
        return {"reason": "odd cycle"}
    table = delta_table(inst)
    if table.bad_pair is None:
        return None
    walk = table.bad_walk()
    return {"reason": "bad walk", "walk": walk, "lambda": walk_lambda(inst, walk)}


# ---------------------------------------------------------------------------
# Prover strategy
# ---------------------------------------------------------------------------

def offer_window(state: GameState, table: DeltaTable) -> Optional[Tuple[int, int]]:
    """Intersection of ``[f(u) - delta, f(u) + delta]`` over assigned ``u``; ``None`` if unconstrained."""
    v = state.index
    lo, hi = -INF, INF
    for u, fu in enumerate(state.assignment):
        if table.finite(u, v):
            dist = int(table.matrix[u, v])
            lo = max(lo, fu - dist)
            hi = min(hi, fu + dist)
    if hi == INF:
        return None
    return int(lo), int(hi)


def infpath_prover_offers(state: GameState, table: DeltaTable) -> Tuple[int, ...]:
    """Offer the top of the feasible window, plus the value two below it when the count is 2."""
    beta = state.count
    window = offer_window(state, table)
    if window is None:
        return (0,) if beta == 1 else (0, 2)
    lo, hi = window
    if hi - lo + 1 < 2 * beta - 1:
        raise AssertionError(f"window [{lo}, {hi}] too narrow for count {beta} at {state.variable}")
    return (hi,) if beta == 1 else (hi, hi - 2)
