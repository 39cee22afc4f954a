"""The nine acceptance checks, shared by ``countcsp selftest`` and the test suite.

Each runner compares a polynomial decider (or a construction) with the game
oracle on a fixed corpus and returns a :class:`CriterionResult`.  Random parts
use fixed seeds so results are reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from importlib import resources
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from . import corpus
from .classify import classify, decide_dominating, decide_p100, decide_small, shape_of_small
from .finpath import (
    decide_forest,
    decide_path,
    path_adversary,
    path_prover,
    stays_on_path,
)
from .formula import (
    Instance,
    TemplateGraph,
    complete_graph,
    two_bad_walks_instance,
    infinite_path,
    named_template,
    p100,
    path_graph,
)
from .infpath import decide_infinite_path, delta_table, infpath_prover_offers, walk_lambda
from .k4 import closure, decide_k4, k4_prover_offers
from .oracle import GameState, decide, infinite_path_decide, play
from .reductions import (
    ValidationError,
    endpoint_distance,
    gadget_table,
    lift_to_cycle_with_layout,
    lift_to_k2n,
    validate_cycle,
    validate_k2n,
)

SHORT_BAD_WALK = ["v1", "v9", "v8", "v7", "v2"]
LONG_BAD_WALK = ["v1", "v9", "v8", "v7", "v6", "v5", "v4", "v3", "v4", "v5", "v6", "v7", "v2"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; {len(self.failures)} failure(s)" if self.failures else ""
        return f"[{status}] criterion {self.number}: {self.title} ({self.checked} checks{extra}, {self.seconds:.1f}s)"


class _Recorder:
    def __init__(self, number: int, title: str, keep: int = 20):
        self.result = CriterionResult(number, title, True)
        self.keep = keep
        self.start = time.perf_counter()

    def check(self, ok: bool, message: Callable[[], str]) -> None:
        self.result.checked += 1
        if not ok:
            self.result.passed = False
            if len(self.result.failures) < self.keep:
                self.result.failures.append(message())
            elif len(self.result.failures) == self.keep:
                self.result.failures.append("... further failures omitted")

    def note(self, text: str) -> None:
        self.result.notes.append(text)

    def done(self) -> CriterionResult:
        self.result.seconds = time.perf_counter() - self.start
        return self.result


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------

def k4_corpus(random_count: int = 500, seed: int = 4) -> List[Instance]:
    out = list(corpus.exhaustive_instances(5, counts=(2,), connected=True))
    rng = random.Random(seed)
    for _ in range(random_count):
        n = rng.randint(6, 8)
        out.append(corpus.random_instance(rng, n, counts=(2,), density=rng.uniform(0.2, 0.45), connected=True))
    return out


def path_corpus(random_count: int = 60, seed: int = 5) -> List[Instance]:
    out = list(corpus.exhaustive_instances(5, connected=True, bipartite=True))
    rng = random.Random(seed)
    for _ in range(random_count):
        n = rng.randint(6, 8)
        out.append(corpus.random_instance(rng, n, density=rng.uniform(0.25, 0.45), connected=True, bipartite=True))
    return out


# ---------------------------------------------------------------------------
# Criteria
# ---------------------------------------------------------------------------

def criterion_1(random_count: int = 500) -> CriterionResult:
    rec = _Recorder(1, "K4 closure decider matches the oracle")
    K4 = complete_graph(4)
    for inst in k4_corpus(random_count):
        want = decide(inst, K4)
        got = decide_k4(inst)
        rec.check(want == got, lambda: f"{inst}: oracle {want}, closure {got}")
    return rec.done()


def criterion_2(random_count: int = 500) -> CriterionResult:
    rec = _Recorder(2, "infinite path decider matches the truncated oracle; two-bad-walk example values")
    for inst in corpus.exhaustive_instances(5, bipartite=True):
        want = infinite_path_decide(inst)
        got = decide_infinite_path(inst)
        rec.check(want == got, lambda: f"{inst}: oracle {want}, delta {got}")
    rng = random.Random(2)
    for _ in range(random_count):
        n = rng.randint(1, 8)
        inst = corpus.random_instance(rng, n, density=rng.uniform(0.15, 0.4), bipartite=rng.random() < 0.7)
        want = infinite_path_decide(inst)
        got = decide_infinite_path(inst)
        rec.check(want == got, lambda: f"{inst}: oracle {want}, delta {got}")
    fig = two_bad_walks_instance()
    rec.check(not decide_infinite_path(fig), lambda: "the two-bad-walk example should be a no-instance")
    lam_star = walk_lambda(fig, SHORT_BAD_WALK)
    lam_q = walk_lambda(fig, LONG_BAD_WALK)
    rec.note(f"lambda(Q*) = {lam_star}, lambda(Q) = {lam_q}")
    rec.check(lam_star == 0, lambda: f"lambda(Q*) = {lam_star}, expected 0")
    rec.check(lam_q == 0, lambda: f"lambda(Q) = {lam_q}, expected 0")
    return rec.done()


def criterion_3(random_count: int = 60) -> CriterionResult:
    rec = _Recorder(3, "finite path decider matches the oracle; short-path rules agree with displacement rules")
    for inst in path_corpus(random_count):
        for n in range(1, 10):
            want = decide(inst, path_graph(n))
            got = decide_path(inst, n)
            rec.check(want == got, lambda: f"P{n} {inst}: oracle {want}, decider {got}")
            if n in (4, 5):
                short = decide_path(inst, n, method="short")
                gamma = decide_path(inst, n, method="gamma")
                rec.check(short == gamma, lambda: f"P{n} {inst}: short rule {short}, displacement rule {gamma} (oracle {want})")
    return rec.done()


def criterion_4(pairs: int = 2400, seed: int = 7) -> CriterionResult:
    rec = _Recorder(4, "forest decider matches the oracle")
    rng = random.Random(seed)
    forests = corpus.forests(7)
    for k in range(pairs):
        H = forests[k % len(forests)] if k < len(forests) else rng.choice(forests)
        inst = corpus.random_instance(rng, rng.randint(1, 5), density=rng.uniform(0.1, 0.5), loops=rng.random() < 0.1)
        want = decide(inst, H)
        got = decide_forest(inst, H)
        rec.check(want == got, lambda: f"{H} {inst}: oracle {want}, decider {got}")
    return rec.done()


def _prover_loss(inst: Instance, tmpl: TemplateGraph, prover, on_path: Optional[int] = None) -> Optional[str]:
    """Exhaustive Adversary against ``prover``; describe a lost play, if any."""

    def explore(state: GameState) -> Optional[str]:
        bad = state.violated()
        if bad is not None:
            return f"atom {bad} broken by {state.assignment}"
        if on_path is not None and not stays_on_path(state.assignment, on_path):
            return f"left P{on_path}: {state.assignment}"
        if state.index == len(inst):
            return None
        try:
            offered = tuple(prover(state))
        except AssertionError as exc:
            return f"no legal offer: {exc}"
        for v in offered:
            lost = explore(state.extend(v))
            if lost:
                return lost
        return None

    return explore(GameState(inst, tmpl))


def criterion_5(k4_random: int = 200, path_random: int = 30) -> CriterionResult:
    rec = _Recorder(5, "constructive strategies win every branch on yes-instances; the away Adversary wins on no-instances")
    K4 = complete_graph(4)
    P = infinite_path()
    for inst in k4_corpus(k4_random):
        if decide_k4(inst):
            cs = closure(inst)
            lost = _prover_loss(inst, K4, lambda s: k4_prover_offers(s, cs))
            rec.check(lost is None, lambda: f"K4 strategy lost on {inst}: {lost}")
    for inst in path_corpus(path_random):
        if not decide_infinite_path(inst):
            continue
        table = delta_table(inst, early_exit=False)
        lost = _prover_loss(inst, P, lambda s: infpath_prover_offers(s, table))
        rec.check(lost is None, lambda: f"window strategy lost on {inst}: {lost}")
        for n in range(1, 10):
            prover = path_prover(inst, n)
            if decide_path(inst, n):
                lost = _prover_loss(inst, P, prover, on_path=n)
                rec.check(lost is None, lambda: f"toward-centre Prover lost on P{n} {inst}: {lost}")
            else:
                try:
                    result = play(inst, P, prover, path_adversary(n))
                    survived = result.verdict and stays_on_path(result.assignment, n)
                except AssertionError:
                    survived = False
                rec.check(not survived, lambda: f"away Adversary failed on P{n} {inst}")
    return rec.done()


def criterion_6() -> CriterionResult:
    rec = _Recorder(6, "edge-gadget table at n = 3")
    for (i, j), (solved, claimed) in sorted(gadget_table(3).items()):
        rec.check(solved == claimed, lambda: f"colours ({i},{j}): solved {solved}, claimed {claimed}")
    return rec.done()


def _k3_sources() -> Iterable[Instance]:
    for nv in (1, 2):
        for counts in product((1, 3), repeat=nv):
            names = [f"x{k}" for k in range(1, nv + 1)]
            for atoms in ([[]] if nv == 1 else [[], [("x1", "x2")]]):
                yield Instance(zip(names, counts), atoms)


def criterion_7() -> CriterionResult:
    rec = _Recorder(7, "reductions: lifting preserves answers; cycle construction structure")
    K3, K6 = complete_graph(3), complete_graph(6)
    for src in _k3_sources():
        lifted = lift_to_k2n(src, 3)
        try:
            validate_k2n(src, 3, lifted)
            valid = True
        except ValidationError as exc:
            valid, why = False, str(exc)
        rec.check(valid, lambda: f"lifted {src} failed validation: {why}")
        want, got = decide(src, K3), decide(lifted, K6)
        rec.check(want == got, lambda: f"{src}: source {want}, lifted {got}")
    for j in (3, 4):
        for src in (
            Instance([("x", 1)]),
            Instance([("x", 1), ("y", 1)], [("x", "y")]),
            Instance([("x", j), ("y", 1)], [("x", "y")]),
        ):
            out, layout = lift_to_cycle_with_layout(src, j)
            try:
                validate_cycle(src, j, out, layout)
                valid = True
            except ValidationError as exc:
                valid, why = False, str(exc)
            rec.check(valid, lambda: f"cycle lift of {src} (j={j}) failed validation: {why}")
            for e, (x, y) in enumerate(layout.edges):
                dist = endpoint_distance(out, x, y)
                claimed = j - 1 if j % 2 else j
                rec.note(f"j={j}: distance {x}-{y} is {dist}")
                rec.check(dist == claimed, lambda: f"j={j}: distance from {x} to {y} is {dist}, claimed {claimed}")
    return rec.done()


def _dominating_templates() -> List[TemplateGraph]:
    rests = [
        "graph:0-1,1-2,2-0",
        "graph:0-1,1-2,2-3,3-0",
        "graph:0-1,1-2",
        "graph:0,1",
        "graph:0-1,1-1",
        "graph:0-1,1-2,2-3,3-4,4-0",
    ]
    out = []
    for rest in rests:
        base = named_template(rest)
        items = ["w-w"] + [f"w-{v}" for v in base.vertices]
        items += [f"{a}-{b}" for a, b in (sorted(e) for e in base.edges)]
        items += [f"{v}-{v}" for v in base.loops]
        out.append(named_template("graph:" + ",".join(items)))
    return out


def criterion_8() -> CriterionResult:
    rec = _Recorder(8, "P100, small-template and dominating-vertex deciders match the oracle")
    H = p100()
    small_insts = list(corpus.exhaustive_instances(4, loops=True))
    for inst in small_insts:
        want, got = decide(inst, H), decide_p100(inst)
        rec.check(want == got, lambda: f"P100 {inst}: oracle {want}, decider {got}")
    for inst in corpus.exhaustive_instances(5, min_vars=5):
        want, got = decide(inst, H), decide_p100(inst)
        rec.check(want == got, lambda: f"P100 {inst}: oracle {want}, decider {got}")
    for T in corpus.small_templates(3):
        if shape_of_small(T) in ("K3", "P101"):
            continue
        for inst in small_insts:
            want, got = decide(inst, T), decide_small(inst, T)
            rec.check(want == got, lambda: f"{T} {inst}: oracle {want}, decider {got}")
    for T in _dominating_templates():
        for inst in small_insts:
            want, got = decide(inst, T), decide_dominating(inst, T)
            rec.check(want == got, lambda: f"{T} {inst}: oracle {want}, decider {got}")
    return rec.done()


def golden_classification() -> List[Tuple[str, str, str, str]]:
    text = resources.files("countcsp").joinpath("data/classification.tsv").read_text(encoding="utf-8")
    rows = []
    for line in text.splitlines():
        if line.strip() and not line.startswith("#"):
            rows.append(tuple(line.split("\t")))
    return rows


def criterion_9() -> CriterionResult:
    rec = _Recorder(9, "classifier reproduces the golden table")
    for spec, quantifiers, expected, _source in golden_classification():
        X = [int(q) for q in quantifiers.split(",")]
        got = classify(named_template(spec), X).label.value
        rec.check(got == expected, lambda: f"{spec} {quantifiers}: expected {expected}, got {got}")
    return rec.done()


RUNNERS: Dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_all(numbers: Optional[Iterable[int]] = None, echo: Callable[[str], None] = print) -> List[CriterionResult]:
    results = []
    for k in numbers or sorted(RUNNERS):
        res = RUNNERS[k]()
        echo(res.line())
        for note in res.notes:
            echo(f"    note: {note}")
        for failure in res.failures[:5]:
            echo(f"    {failure}")
        results.append(res)
    return results
