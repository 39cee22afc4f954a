"""Command-line front end.

Exit statuses: 0 decided, 1 self-test or benchmark disagreement, 2 parse error,
3 unsupported method/template pairing, 4 node budget exhausted, 5 generated
instance failed validation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from . import corpus
from .classify import (
    Unsupported,
    classify,
    decide_dominating,
    decide_p100,
    decide_small,
    dominating_loop,
    is_clique,
    is_forest,
    shape_of_small,
)
from .finpath import decide_forest, decide_path, gamma_tables
from .formula import (
    Instance,
    ParseError,
    TemplateGraph,
    bipartition,
    component_indices,
    complete_graph,
    parse_instance,
    path_graph,
    resolve_template,
    serialize_instance,
)
from .infpath import infinite_path_certificate, is_looping_walk, walk_lambda
from .k4 import closure as k4_closure
from .k4 import decide_k4, k4_certificate
from .oracle import (
    BUDGET_ENV,
    BudgetExceeded,
    GameSolver,
    GameState,
    decide,
    perfect_adversary,
    perfect_prover,
    play,
    truncation_order,
)
from .reductions import (
    ValidationError,
    lift_to_cycle_with_layout,
    lift_to_k2n,
    validate_cycle,
    validate_k2n,
)

EXIT_OK, EXIT_DISAGREE, EXIT_PARSE, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_INVALID = 0, 1, 2, 3, 4, 5
METHODS = ("auto", "oracle", "k4", "infpath", "finpath", "forest", "small", "p100", "dominating")


@dataclass
class RunReport:
    verdict: bool
    method: str
    elapsed: float
    certificate: Optional[Dict[str, object]] = None

    @property
    def verdict_token(self) -> str:
        return "YES" if self.verdict else "NO"


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------

def _counts_12(inst: Instance) -> bool:
    return all(c in (1, 2) for c in inst.counts)


def _path_order(H: TemplateGraph) -> Optional[int]:
    """``n`` when ``H`` is (isomorphic to) the path on ``n`` vertices."""
    if not H.is_finite or H.loops or not is_forest(H):
        return None
    n = len(H.vertices)
    degrees = [len(H.adjacency[v]) for v in H.vertices]
    if len(H.edges) == n - 1 and max(degrees, default=0) <= 2:
        return n
    return None


def choose_method(inst: Instance, H: TemplateGraph) -> str:
    if not H.is_finite:
        return "infpath" if _counts_12(inst) else "unsupported"
    if is_clique(H) and len(H.vertices) == 4 and all(c == 2 for c in inst.counts):
        return "k4"
    if _counts_12(inst):
        if _path_order(H) is not None:
            return "finpath"
        if is_forest(H):
            return "forest"
        if len(H.vertices) <= 3 and shape_of_small(H) not in ("K3", "P101"):
            return "p100" if shape_of_small(H) == "P100" else "small"
        if dominating_loop(H) is not None:
            return "dominating"
    return "oracle"


def _path_certificate(inst: Instance, n: int) -> Optional[Dict[str, object]]:
    if inst.has_loop or bipartition(inst) is None:
        return infinite_path_certificate(inst)
    cert = infinite_path_certificate(inst)
    if cert is not None:
        return cert
    if n < 4:
        return {"reason": f"short-path rule for P{n} fails"}
    gt = gamma_tables(inst)
    if n % 2 == 0:
        for x in inst.names:
            if 2 * gt.gamma[x] >= n:
                return {"reason": "displacement reaches the end of the path", "variable": x, "gamma": gt.gamma[x]}
    for comp in component_indices(inst):
        names = [inst.names[v] for v in comp]
        high = {}
        for x in names:
            if 2 * gt.gamma_prime[x] >= n - 1:
                high.setdefault(gt.colouring[x], x)
        if len(high) == 2:
            return {"reason": "both colour classes reach the end of the path", "variables": sorted(high.values())}
    return None


def _oracle_transcript(inst: Instance, H: TemplateGraph, budget: Optional[int]) -> Tuple[bool, Dict[str, object]]:
    solver = GameSolver(inst, H, budget=budget)
    verdict = solver.wins_from(())
    result = play(inst, H, perfect_prover(solver), perfect_adversary(solver))
    transcript = [{"variable": x, "offered": list(o), "chosen": c} for x, (o, c) in zip(inst.names, result.transcript)]
    return verdict, {"reason": "game transcript (best play on both sides)", "transcript": transcript}


def solve(inst: Instance, H: TemplateGraph, method: str = "auto", budget: Optional[int] = None) -> RunReport:
    """Decide with the requested method; raise :class:`Unsupported` on a mismatch."""
    start = time.perf_counter()
    if method == "auto":
        method = choose_method(inst, H)
        if method == "unsupported":
            raise Unsupported("the infinite path is only supported for counts 1 and 2")
    cert: Optional[Dict[str, object]] = None
    if method == "oracle":
        if not H.is_finite:
            raise Unsupported("the oracle needs a finite template")
        verdict, cert = _oracle_transcript(inst, H, budget)
    elif method == "k4":
        if not (is_clique(H) and len(H.vertices) == 4):
            raise Unsupported("the k4 method needs the template K4")
        if any(c != 2 for c in inst.counts):
            raise Unsupported("the k4 method needs every count to be 2")
        cert = k4_certificate(inst)
        verdict = cert is None
    elif method == "infpath":
        if H.is_finite:
            raise Unsupported("the infpath method needs the infinite path template")
        if not _counts_12(inst):
            raise Unsupported("the infpath method needs counts 1 and 2")
        cert = infinite_path_certificate(inst)
        verdict = cert is None
    elif method == "finpath":
        n = _path_order(H)
        if n is None or not _counts_12(inst):
            raise Unsupported("the finpath method needs a path template and counts 1 and 2")
        verdict = decide_path(inst, n)
        if not verdict:
            cert = _path_certificate(inst, n)
    elif method == "forest":
        if not is_forest(H) or not _counts_12(inst):
            raise Unsupported("the forest method needs a forest template and counts 1 and 2")
        verdict = decide_forest(inst, H)
    elif method in ("small", "p100", "dominating"):
        if not H.is_finite or not _counts_12(inst):
            raise Unsupported(f"the {method} method needs a finite template and counts 1 and 2")
        if method == "p100":
            if len(H.vertices) > 3 or shape_of_small(H) != "P100":
                raise Unsupported("the p100 method needs the template P100")
            verdict = decide_p100(inst)
        elif method == "small":
            verdict = decide_small(inst, H)
        else:
            verdict = decide_dominating(inst, H)
    else:
        raise Unsupported(f"unknown method {method!r}")
    return RunReport(verdict, method, time.perf_counter() - start, cert)


def verify_certificate(inst: Instance, H: TemplateGraph, report: RunReport) -> bool:
    """Re-check a certificate from its own contents rather than the decider's word."""
    cert = report.certificate
    if cert is None:
        return True
    reason = cert.get("reason")
    if "walk" in cert:
        walk = cert["walk"]
        lam = walk_lambda(inst, walk)
        ordered = inst.index[walk[0]] < inst.index[walk[-1]]
        return is_looping_walk(inst, walk) and lam == cert["lambda"] and lam <= inst.count(walk[-1]) - 2 and ordered
    if "transcript" in cert:
        steps = cert["transcript"]
        offered = [tuple(step["offered"]) for step in steps]
        chosen = [step["chosen"] for step in steps]
        replay = play(inst, H, lambda s: offered[s.index], lambda s, o: chosen[s.index])
        return replay.verdict == report.verdict
    if reason == "loop atom":
        return inst.index[cert["variable"]] in inst.looped
    if reason == "odd cycle":
        return bipartition(inst) is None
    if "triple" in cert:
        sets = k4_closure(inst).named()
        other = cert.get("other")
        return tuple(cert["triple"]) in sets["R+"] and (
            tuple(cert["pair"]) in sets["F"] if "pair" in cert else tuple(sorted(other, key=inst.index.get)) in sets["R-"]
        )
    if "gamma" in cert or "variables" in cert:
        return not report.verdict and _path_certificate(inst, _path_order(H)) == cert
    return not report.verdict


# ---------------------------------------------------------------------------
# Interactive play
# ---------------------------------------------------------------------------

def _parse_value(token: str, H: TemplateGraph):
    for v in H.vertices:
        if str(v) == token:
            return v
    raise ValueError(f"{token!r} is not a template vertex")


def _human_prover(H: TemplateGraph, read: Callable[[str], str], write: Callable[[str], None]):
    def strategy(state: GameState):
        while True:
            line = read(f"offer {state.count} value(s) for {state.variable}: ")
            try:
                values = [_parse_value(t, H) for t in line.replace(",", " ").split()]
                if len(values) != state.count or len(set(values)) != len(values):
                    raise ValueError(f"need {state.count} distinct values")
                return values
            except ValueError as exc:
                write(f"invalid offer: {exc}; try again")

    return strategy


def _human_adversary(H: TemplateGraph, read: Callable[[str], str], write: Callable[[str], None]):
    def strategy(state: GameState, offered):
        while True:
            line = read(f"choose a value for {state.variable} from {' '.join(map(str, offered))}: ").strip()
            try:
                v = _parse_value(line, H)
                if v not in offered:
                    raise ValueError(f"{line!r} was not offered")
                return v
            except ValueError as exc:
                write(f"invalid choice: {exc}; try again")

    return strategy


def run_play(
    inst: Instance,
    H: TemplateGraph,
    side: str,
    read: Callable[[str], str],
    write: Callable[[str], None],
    budget: Optional[int] = None,
) -> bool:
    """Play one game; the engine plays perfectly on whichever sides the human leaves."""
    if not H.is_finite:
        n = truncation_order(inst)
        write(f"infinite path: playing on the path 1..{n}, which has the same answer")
        H = path_graph(n)
    solver = GameSolver(inst, H, budget=budget)
    prover = _human_prover(H, read, write) if side == "prover" else perfect_prover(solver)
    adversary = _human_adversary(H, read, write) if side == "adversary" else perfect_adversary(solver)
    result = play(inst, H, prover, adversary)
    for x, (offered, chosen) in zip(inst.names, result.transcript):
        write(f"{x}: offered {{{', '.join(map(str, offered))}}}, chosen {chosen}")
    if result.verdict:
        write("verdict: Prover wins")
    else:
        write(f"verdict: Adversary wins (atom {result.violated[0]}-{result.violated[1]} broken)")
    return result.verdict


# ---------------------------------------------------------------------------
# Benchmark
# ---------------------------------------------------------------------------

def _bench_families() -> List[Tuple[str, TemplateGraph, Sequence[int], Callable[[Instance], bool], Dict]]:
    return [
        ("k4", complete_graph(4), (2,), decide_k4, {"connected": True}),
        ("path6", path_graph(6), (1, 2), lambda i: decide_path(i, 6), {"bipartite": True, "connected": True}),
        ("p100", resolve_template("p100"), (1, 2), decide_p100, {}),
    ]


def run_bench(sizes: Sequence[int], samples: int, seed: int, write: Callable[[str], None]) -> bool:
    rng = random.Random(seed)
    write(f"{'family':<8} {'size':>4} {'decider ms':>11} {'oracle ms':>10} agree")
    all_agree = True
    for name, H, counts, decider, shape in _bench_families():
        for n in sizes:
            insts = [corpus.random_instance(rng, n, counts, density=0.35, **shape) for _ in range(samples)]
            t0 = time.perf_counter()
            fast = [decider(i) for i in insts]
            t1 = time.perf_counter()
            slow = [decide(i, H) for i in insts]
            t2 = time.perf_counter()
            agree = fast == slow
            all_agree &= agree
            write(f"{name:<8} {n:>4} {1000 * (t1 - t0) / samples:>11.3f} {1000 * (t2 - t1) / samples:>10.3f} {agree}")
    return all_agree


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _read_instance(path: str) -> Instance:
    if path == "-":
        return parse_instance(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="countcsp", description="Counting-quantifier CSP solvers over graph templates.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="decide an instance on a template")
    s.add_argument("instance", help="instance file, or - for standard input")
    s.add_argument("--template", "-t", required=True, help="k<N>, path<N>, cycle<N>, infpath, p100, p10, p101, graph:..., or a file")
    s.add_argument("--method", "-m", choices=METHODS, default="auto")
    s.add_argument("--budget", type=int, default=None, help=f"oracle node budget (default ${BUDGET_ENV} or 10^8)")

    c = sub.add_parser("classify", help="complexity label for a template and quantifier set")
    c.add_argument("--template", "-t", required=True)
    c.add_argument("--quantifiers", "-q", required=True, help="comma-separated counts, e.g. 1,2")

    g = sub.add_parser("gadget", help="emit a reduction instance")
    g.add_argument("kind", choices=("k2n", "cycle"))
    g.add_argument("source", help="source QCSP instance file (counts 1 and n, or 1 and j)")
    g.add_argument("parameter", type=int, help="n for k2n, j for cycle")

    pl = sub.add_parser("play", help="play the game in the terminal")
    pl.add_argument("instance")
    pl.add_argument("--template", "-t", required=True)
    pl.add_argument("--side", choices=("prover", "adversary", "none"), default="prover", help="side the human plays; none lets the engine play both")
    pl.add_argument("--budget", type=int, default=None)

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--criteria", default=None, help="comma-separated criterion numbers (default: all)")

    b = sub.add_parser("bench", help="time polynomial deciders against the oracle")
    b.add_argument("--sizes", default="4,5,6,7,8")
    b.add_argument("--samples", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    return p


def main(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None) -> int:
    args = _parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    stdin = stdin or sys.stdin
    try:
        if args.command == "solve":
            inst = _read_instance(args.instance)
            H = resolve_template(args.template)
            report = solve(inst, H, args.method, args.budget)
            print(report.verdict_token, file=out)
            if report.certificate is not None:
                print("certificate: " + json.dumps(report.certificate, default=str), file=out)
            print(f"method: {report.method}; elapsed: {report.elapsed:.4f}s", file=err)
            return EXIT_OK
        if args.command == "classify":
            H = resolve_template(args.template)
            X = [int(q) for q in args.quantifiers.split(",")]
            print(classify(H, X), file=out)
            return EXIT_OK
        if args.command == "gadget":
            src = _read_instance(args.source)
            if args.kind == "k2n":
                lifted = lift_to_k2n(src, args.parameter)
                validate_k2n(src, args.parameter, lifted)
            else:
                lifted, layout = lift_to_cycle_with_layout(src, args.parameter)
                validate_cycle(src, args.parameter, lifted, layout)
            out.write(serialize_instance(lifted))
            return EXIT_OK
        if args.command == "play":
            inst = _read_instance(args.instance)
            H = resolve_template(args.template)

            def read(prompt: str) -> str:
                out.write(prompt)
                out.flush()
                line = stdin.readline()
                if not line:
                    raise EOFError("input ended during the game")
                return line.strip()

            run_play(inst, H, args.side, read, lambda s: print(s, file=out), args.budget)
            return EXIT_OK
        if args.command == "selftest":
            from .acceptance import run_all

            numbers = [int(k) for k in args.criteria.split(",")] if args.criteria else None
            results = run_all(numbers, echo=lambda s: print(s, file=out))
            return EXIT_OK if all(r.passed for r in results) else EXIT_DISAGREE
        if args.command == "bench":
            sizes = [int(s) for s in args.sizes.split(",")]
            ok = run_bench(sizes, args.samples, args.seed, lambda s: print(s, file=out))
            return EXIT_OK if ok else EXIT_DISAGREE
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_PARSE
    except (OSError, ValueError) as exc:
        if isinstance(exc, Unsupported):
            print(f"unsupported: {exc}", file=err)
            return EXIT_UNSUPPORTED
        if isinstance(exc, ValidationError):
            print(f"validation failed: {exc}", file=err)
            return EXIT_INVALID
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=err)
        return EXIT_BUDGET
    except EOFError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
