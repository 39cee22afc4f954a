"""Polynomial decider for instances over K4 in which every variable has count 2.

The decider closes three sets under seven rules (X1-X7):

* ``F``: unordered pairs that must receive different colours;
* ``R+``: triples ``x<y<z`` where ``z`` must repeat a colour of ``x`` or ``y``
  whenever those two differ;
* ``R-``: triples where ``z`` must avoid both colours.

The instance is true exactly when the closed sets contain none of the
forbidden configurations checked in :func:`forbidden_configuration`.

Every rule reads facts whose latest variable is the same ``z`` and writes facts
whose latest variable is earlier than ``z``.  The one exception is X1, which
writes triples ending at ``z`` from pairs ending at ``z``.  Grouping facts by
their latest variable and visiting variables from last to first therefore
reaches the fixpoint in a single pass: when ``z`` is visited, no later step can
add a fact ending at ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .formula import Instance
from .oracle import GameState

Pair = FrozenSet[int]
Triple = FrozenSet[int]
COLOURS = (1, 2, 3, 4)


@dataclass
class ClosureSets:
    """``F``, ``R+`` and ``R-`` over variable indices (quantifier positions)."""

    instance: Instance
    F: Set[Pair] = field(default_factory=set)
    Rplus: Set[Triple] = field(default_factory=set)
    Rminus: Set[Triple] = field(default_factory=set)

    def named(self) -> Dict[str, Set[Tuple[str, ...]]]:
        """The three sets with variable names, each member listed in quantifier order."""
        names = self.instance.names

        def show(items):
            return {tuple(names[i] for i in sorted(s)) for s in items}

        return {"F": show(self.F), "R+": show(self.Rplus), "R-": show(self.Rminus)}

    def size(self) -> int:
        return len(self.F) + len(self.Rplus) + len(self.Rminus)


class _Builder:
    """Facts bucketed by their latest variable so each rule sees only its own ``z``."""

    def __init__(self, inst: Instance):
        n = len(inst)
        self.sets = ClosureSets(inst)
        self.F_at: List[Set[int]] = [set() for _ in range(n)]
        self.P_at: List[Set[Pair]] = [set() for _ in range(n)]
        self.M_at: List[Set[Pair]] = [set() for _ in range(n)]

    def pair(self, a: int, b: int) -> None:
        key = frozenset((a, b))
        if key not in self.sets.F:
            self.sets.F.add(key)
            self.F_at[max(a, b)].add(min(a, b))

    def plus(self, *xs: int) -> None:
        key = frozenset(xs)
        if key not in self.sets.Rplus:
            self.sets.Rplus.add(key)
            z = max(xs)
            self.P_at[z].add(key - {z})

    def minus(self, *xs: int) -> None:
        key = frozenset(xs)
        if key not in self.sets.Rminus:
            self.sets.Rminus.add(key)
            z = max(xs)
            self.M_at[z].add(key - {z})

    def apply_at(self, z: int) -> None:
        Fz = sorted(self.F_at[z])
        # X1
        for x, y in combinations(Fz, 2):
            self.minus(x, y, z)
        P, M = sorted(self.P_at[z], key=sorted), sorted(self.M_at[z], key=sorted)
        # X2 and X3
        for w in Fz:
            for xy in M:
                if w not in xy:
                    self.plus(*xy, w)
            for xy in P:
                if w not in xy:
                    x, y = sorted(xy)
                    if y < w:
                        self.minus(x, y, w)
                    else:
                        self.pair(x, w)
                        self.pair(y, w)
        # X4: {x, w} < y < z with xyz in R+ and wyz in R-
        for xy in P:
            for wy in M:
                shared = xy & wy
                if len(shared) != 1 or xy == wy:
                    continue
                (y,) = shared
                (x,) = xy - shared
                (w,) = wy - shared
                if x < y and w < y:
                    self.pair(x, w)
                    self.plus(x, y, w)
        # X5: two triples of the same sign sharing z and one more variable
        for group in (P, M):
            for a, b in combinations(group, 2):
                if len(a & b) == 1:
                    self.plus(*(a | b))
        # X6 and X7: disjoint pairs xy and wq with {x, y, w} < q
        for a in P + M:
            a_plus = a in self.P_at[z]
            for b in P + M:
                if a & b or max(a) >= max(b):
                    continue
                q, w = max(b), min(b)
                x, y = sorted(a)
                b_plus = b in self.P_at[z]
                b_minus = b in self.M_at[z]
                a_minus = a in self.M_at[z]
                same = (a_plus and b_plus) or (a_minus and b_minus)
                mixed = (a_plus and b_minus) or (a_minus and b_plus)
                if same:
                    self.plus(x, y, w)
                    self.plus(x, y, q)
                if mixed:
                    self.minus(x, y, q)
                    if y < w:
                        self.minus(x, y, w)
                    else:
                        self.pair(x, w)
                        self.pair(y, w)


def _check_counts(inst: Instance) -> None:
    if any(c != 2 for c in inst.counts):
        raise ValueError("the K4 decider needs every count to be 2")


def closure(inst: Instance) -> ClosureSets:
    """Least sets containing the atoms as ``F`` and closed under X1-X7."""
    _check_counts(inst)
    b = _Builder(inst)
    for i, j in inst.index_atoms:
        if i != j:
            b.pair(i, j)
    for z in range(len(inst) - 1, -1, -1):
        b.apply_at(z)
    return b.sets


def forbidden_configuration(cs: ClosureSets) -> Optional[Dict[str, object]]:
    """The first forbidden configuration in the closed sets, or ``None``."""
    names = cs.instance.names
    for t in sorted(cs.Rplus, key=lambda s: sorted(s, reverse=True)):
        x, y, z = sorted(t)
        label = [names[x], names[y], names[z]]
        for a in (x, y):
            if frozenset((a, z)) in cs.F:
                return {"reason": "R+ triple with a pair in F", "triple": label, "pair": [names[a], names[z]]}
        for w in range(z):
            if w != x and frozenset((x, w, z)) in cs.Rminus:
                return {"reason": "R+ triple against R- triple", "triple": label, "other": [names[x], names[w], names[z]]}
        for w in range(y + 1, z):
            if frozenset((y, w, z)) in cs.Rminus:
                return {"reason": "R+ triple against R- triple", "triple": label, "other": [names[y], names[w], names[z]]}
    return None


def k4_certificate(inst: Instance) -> Optional[Dict[str, object]]:
    """``None`` when K4 satisfies the instance, otherwise why it does not."""
    _check_counts(inst)
    if inst.has_loop:
        return {"reason": "loop atom", "variable": inst.names[min(inst.looped)]}
    return forbidden_configuration(closure(inst))


def decide_k4(inst: Instance) -> bool:
    return k4_certificate(inst) is None


def k4_prover_offers(state: GameState, cs: ClosureSets) -> Tuple[int, int]:
    """Offers for the next variable, following the four-step Prover strategy.

    Earlier triples are scanned in quantifier order of their middle and then
    first variable; free choices take the smallest colours.
    """
    z = state.index
    f = state.assignment
    for rel, keep in ((cs.Rplus, True), (cs.Rminus, False)):
        for y in range(z):
            for x in range(y):
                if f[x] != f[y] and frozenset((x, y, z)) in rel:
                    used = {f[x], f[y]}
                    if keep:
                        return tuple(sorted(used))
                    return tuple(c for c in COLOURS if c not in used)
    for x in range(z):
        if frozenset((x, z)) in cs.F:
            return tuple(c for c in COLOURS if c != f[x])[:2]
    return (1, 2)
