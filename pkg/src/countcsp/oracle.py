"""Exact game-semantics decision procedure and a strategy-vs-strategy game engine.

Prover wins the position reached after assigning ``x_1..x_{i-1}`` iff at
least ``beta(x_i)`` template vertices are compatible with the already
assigned neighbours of ``x_i`` and lead to winning positions.  (A winning
``beta``-subset exists exactly when that many winning values exist, so the
search branches on single values rather than on subsets.)  Positions are
memoized on the values of the assigned variables that still have an
unassigned neighbour, which is all the future depends on.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .formula import Instance, TemplateGraph, path_graph

Vertex = Hashable

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "COUNTCSP_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


class BudgetExceeded(RuntimeError):
    """The search visited more positions than the configured node budget."""


class StrategyError(RuntimeError):
    """A strategy broke the game's rules (wrong set size, pick outside the offer, ...)."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class GameSolver:
    """Memoized solver for one (instance, finite template) pair.

    ``domains`` optionally restricts variables to vertex subsets (unary
    constraints).  The memo table is shared by every query on the solver, so
    answering many positions of one game is cheap.
    """

    def __init__(
        self,
        inst: Instance,
        tmpl: TemplateGraph,
        *,
        budget: Optional[int] = None,
        domains: Optional[Mapping[str, Iterable[Vertex]]] = None,
    ):
        if not tmpl.is_finite:
            raise ValueError("GameSolver needs a finite template; use infinite_path_decide for the infinite path")
        self.inst = inst
        self.tmpl = tmpl
        self.budget = default_budget() if budget is None else budget
        self.nodes = 0
        self.vertex_index = {v: k for k, v in enumerate(tmpl.vertices)}
        m = len(tmpl.vertices)
        full = (1 << m) - 1
        self._adj = [0] * m
        for v, nb in tmpl.adjacency.items():
            k = self.vertex_index[v]
            for u in nb:
                self._adj[k] |= 1 << self.vertex_index[u]
        self._loopmask = sum(1 << self.vertex_index[v] for v in tmpl.loops)
        n = len(inst)
        self._earlier = [inst.earlier_neighbours(i) for i in range(n)]
        self._looped = [i in inst.looped for i in range(n)]
        self._dom = [full] * n
        for name, allowed in (domains or {}).items():
            mask = 0
            for v in allowed:
                mask |= 1 << self.vertex_index[v]
            self._dom[inst.index[name]] = mask
        # frontier[i]: variables before i with a neighbour at position >= i
        last_nb = [max(inst.neighbours[j], default=-1) for j in range(n)]
        self._frontier = [tuple(j for j in range(i) if last_nb[j] >= i) for i in range(n + 1)]
        self._counts = inst.counts
        self._memo: Dict[tuple, bool] = {}

    # -------------------------------------------------------------- core
    def _candidates(self, i: int, f: Sequence[int]) -> int:
        cand = self._dom[i]
        for j in self._earlier[i]:
            cand &= self._adj[f[j]]
        if self._looped[i]:
            cand &= self._loopmask
        return cand

    def _win(self, i: int, f: List[int]) -> bool:
        n = len(self._counts)
        if i == n:
            return True
        key = (i, tuple(f[j] for j in self._frontier[i]))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"node budget of {self.budget} exhausted")
        cand = self._candidates(i, f)
        need = self._counts[i]
        remaining = bin(cand).count("1")
        result = False
        if remaining >= need:
            wins = 0
            for c in _bits(cand):
                f[i] = c
                if self._win(i + 1, f):
                    wins += 1
                    if wins >= need:
                        result = True
                        break
                remaining -= 1
                if wins + remaining < need:
                    break
            f[i] = -1
        self._memo[key] = result
        return result

    def _encode(self, prefix: Sequence[Vertex]) -> Optional[List[int]]:
        """Index-encode a prefix; ``None`` when it already breaks a constraint."""
        f = [-1] * len(self._counts)
        for i, v in enumerate(prefix):
            k = self.vertex_index.get(v)
            if k is None:
                return None
            if not (self._candidates(i, f) >> k) & 1:
                return None
            f[i] = k
        return f

    # ----------------------------------------------------------- queries
    def wins_from(self, prefix: Sequence[Vertex] = ()) -> bool:
        """Does Prover win once the first ``len(prefix)`` variables are fixed to ``prefix``?"""
        if any(c > len(self.tmpl.vertices) for c in self._counts[len(prefix):]):
            return False
        f = self._encode(prefix)
        if f is None:
            return False
        return self._win(len(prefix), f)

    def compatible_values(self, prefix: Sequence[Vertex]) -> List[Vertex]:
        f = self._encode(prefix)
        if f is None:
            return []
        return [self.tmpl.vertices[k] for k in _bits(self._candidates(len(prefix), f))]

    def winning_values(self, prefix: Sequence[Vertex]) -> List[Vertex]:
        """Values for the next variable from which Prover still wins."""
        out = []
        for v in self.compatible_values(prefix):
            if self.wins_from(tuple(prefix) + (v,)):
                out.append(v)
        return out


def decide(
    inst: Instance,
    tmpl: TemplateGraph,
    *,
    budget: Optional[int] = None,
    assignment: Sequence[Vertex] = (),
    domains: Optional[Mapping[str, Iterable[Vertex]]] = None,
) -> bool:
    """True iff the template satisfies the instance (Prover wins the game).

    ``assignment`` fixes values for a prefix of the variables; ``domains``
    adds unary constraints.  Raises :class:`BudgetExceeded` past ``budget``
    search nodes.
    """
    if tmpl.is_finite:
        return GameSolver(inst, tmpl, budget=budget, domains=domains).wins_from(assignment)
    if assignment or domains:
        raise ValueError("prefix assignments and unary constraints need a finite template")
    return infinite_path_decide(inst, budget=budget)


def truncation_order(inst: Instance) -> int:
    return 2 * len(inst) + 2


def infinite_path_decide(inst: Instance, *, budget: Optional[int] = None) -> bool:
    """Decide the infinite path by the finite path with ``2N+2`` vertices.

    Under the no-bad-walk condition every displacement bound is at most
    ``N - 1``, so long enough even paths behave exactly like the infinite
    one; a homomorphism into a finite path is one into the infinite path.
    """
    return decide(inst, path_graph(truncation_order(inst)), budget=budget)


def homomorphism_exists(inst: Instance, tmpl: TemplateGraph) -> bool:
    """Plain backtracking search for a homomorphism, ignoring the counts."""
    verts = list(tmpl.vertices)
    n = len(inst)
    f: List[Vertex] = [None] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for c in verts:
            if i in inst.looped and not tmpl.adjacent(c, c):
                continue
            if all(tmpl.adjacent(f[j], c) for j in inst.earlier_neighbours(i)):
                f[i] = c
                if extend(i + 1):
                    return True
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# Game engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GameState:
    """A position of the game: the values chosen so far, in quantifier order."""

    instance: Instance
    template: TemplateGraph
    assignment: Tuple[Vertex, ...] = ()

    @property
    def index(self) -> int:
        """Position of the variable about to be played."""
        return len(self.assignment)

    @property
    def variable(self) -> str:
        return self.instance.names[self.index]

    @property
    def count(self) -> int:
        return self.instance.counts[self.index]

    def value(self, name: str) -> Vertex:
        return self.assignment[self.instance.index[name]]

    def extend(self, v: Vertex) -> "GameState":
        return GameState(self.instance, self.template, self.assignment + (v,))

    def violated(self) -> Optional[Tuple[str, str]]:
        """An atom whose endpoints are both assigned but not mapped to an edge, if any."""
        inst, f = self.instance, self.assignment
        for i, j in inst.index_atoms:
            if j < len(f) and not self.template.adjacent(f[i], f[j]):
                return inst.names[i], inst.names[j]
        return None


ProverStrategy = Callable[[GameState], Iterable[Vertex]]
AdversaryStrategy = Callable[[GameState, Tuple[Vertex, ...]], Vertex]


@dataclass
class PlayResult:
    transcript: List[Tuple[Tuple[Vertex, ...], Vertex]]
    assignment: Tuple[Vertex, ...]
    verdict: bool
    violated: Optional[Tuple[str, str]] = None


def _checked_offer(state: GameState, prover: ProverStrategy) -> Tuple[Vertex, ...]:
    offered = tuple(prover(state))
    step = f"step {state.index + 1} (variable {state.variable})"
    if len(set(offered)) != len(offered):
        raise StrategyError(f"{step}: offered set {offered} repeats a value")
    if len(offered) != state.count:
        raise StrategyError(f"{step}: offered {len(offered)} values, count is {state.count}")
    tmpl = state.template
    for v in offered:
        if tmpl.is_finite:
            if v not in tmpl.adjacency:
                raise StrategyError(f"{step}: {v!r} is not a template vertex")
        elif not isinstance(v, int):
            raise StrategyError(f"{step}: {v!r} is not an integer")
    return offered


def play(inst: Instance, tmpl: TemplateGraph, prover: ProverStrategy, adversary: AdversaryStrategy) -> PlayResult:
    """Run one complete game and report the transcript and whether Prover won."""
    state = GameState(inst, tmpl)
    transcript = []
    for _ in range(len(inst)):
        offered = _checked_offer(state, prover)
        pick = adversary(state, offered)
        if pick not in offered:
            raise StrategyError(f"step {state.index + 1} (variable {state.variable}): pick {pick!r} not in {offered}")
        transcript.append((offered, pick))
        state = state.extend(pick)
    bad = state.violated()
    return PlayResult(transcript, state.assignment, bad is None, bad)


def find_losing_play(inst: Instance, tmpl: TemplateGraph, prover: ProverStrategy) -> Optional[PlayResult]:
    """Search every Adversary reply; return a play Prover loses, or ``None`` if it wins them all.

    A branch stops as soon as an atom is violated (no later move can repair it),
    so a returned losing play may be shorter than the instance.
    """
    transcript: List[Tuple[Tuple[Vertex, ...], Vertex]] = []

    def explore(state: GameState) -> Optional[PlayResult]:
        bad = state.violated()
        if bad is not None:
            return PlayResult(list(transcript), state.assignment, False, bad)
        if state.index == len(inst):
            return None
        offered = _checked_offer(state, prover)
        for pick in offered:
            transcript.append((offered, pick))
            lost = explore(state.extend(pick))
            transcript.pop()
            if lost is not None:
                return lost
        return None

    return explore(GameState(inst, tmpl))


def count_plays(inst: Instance, tmpl: TemplateGraph, prover: ProverStrategy) -> Tuple[int, int]:
    """(won, lost) over all complete plays against every Adversary; small instances only."""
    won = lost = 0
    stack = [GameState(inst, tmpl)]
    while stack:
        state = stack.pop()
        if state.violated() is not None:
            lost += 1
            continue
        if state.index == len(inst):
            won += 1
            continue
        for pick in _checked_offer(state, prover):
            stack.append(state.extend(pick))
    return won, lost


def perfect_prover(solver: GameSolver) -> ProverStrategy:
    """Offer winning values when enough exist; otherwise any compatible (or arbitrary) values."""

    def strategy(state: GameState) -> List[Vertex]:
        need = state.count
        win = solver.winning_values(state.assignment)
        if len(win) >= need:
            return win[:need]
        pool = win + [v for v in solver.compatible_values(state.assignment) if v not in win]
        pool += [v for v in state.template.vertices if v not in pool]
        return pool[:need]

    return strategy


def perfect_adversary(solver: GameSolver) -> AdversaryStrategy:
    """Pick a value from which Prover cannot win, if the offer contains one."""

    def strategy(state: GameState, offered: Tuple[Vertex, ...]) -> Vertex:
        for v in offered:
            if not solver.wins_from(state.assignment + (v,)):
                return v
        return offered[0]

    return strategy


def first_choice(state: GameState, offered: Tuple[Vertex, ...]) -> Vertex:
    return offered[0]


def random_adversary(rng) -> AdversaryStrategy:
    def strategy(state: GameState, offered: Tuple[Vertex, ...]) -> Vertex:
        return offered[rng.randrange(len(offered))]

    return strategy


def subset_minimax(inst: Instance, tmpl: TemplateGraph) -> bool:
    """Literal game tree: Prover picks a beta-subset, Adversary a member.  Tiny inputs only."""
    from itertools import combinations

    verts = list(tmpl.vertices)

    def value(state: GameState) -> bool:
        if state.violated() is not None:
            return False
        if state.index == len(inst):
            return True
        return any(all(value(state.extend(v)) for v in subset) for subset in combinations(verts, state.count))

    return value(GameState(inst, tmpl))


sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
