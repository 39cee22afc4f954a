"""CLI contracts: verdict lines, exit statuses and golden transcripts.

Set COUNTCSP_REGOLD=1 to rewrite the golden files after an intended change.
"""

import io
import json
import os
from pathlib import Path

import pytest

from countcsp import cli
from countcsp.formula import two_bad_walks_instance, infinite_path, parse_instance, resolve_template

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def run(args, capsys, stdin=""):
    code = cli.main(args, stdin=io.StringIO(stdin))
    out, err = capsys.readouterr()
    return code, out, err


def check_golden(name, text):
    path = GOLDEN / name
    if os.environ.get("COUNTCSP_REGOLD"):
        path.write_text(text)
    assert text == path.read_text()


def test_solve_two_bad_walks_reports_a_bad_walk(capsys):
    code, out, err = run(["solve", str(DATA / "two_bad_walks.txt"), "--template", "infpath"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "NO"
    cert = json.loads(lines[1].split(": ", 1)[1])
    assert cert["reason"] == "bad walk" and cert["walk"][0] == "v1" and cert["walk"][-1] == "v2"
    assert "method: infpath" in err
    check_golden("solve_two_bad_walks.out", out)


def test_solve_triangle_on_k4(capsys):
    code, out, err = run(["solve", str(DATA / "triangle2.txt"), "-t", "k4"], capsys)
    assert (code, out) == (0, "YES\n") and "method: k4" in err


def test_solve_from_standard_input(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO((DATA / "triangle2.txt").read_text()))
    code, out, _ = run(["solve", "-", "-t", "k4", "-m", "oracle"], capsys)
    assert code == 0 and out.splitlines()[0] == "YES"


def test_budget_exhaustion_exit(capsys):
    code, out, err = run(["solve", str(DATA / "two_bad_walks.txt"), "-t", "path20", "-m", "oracle", "--budget", "10"], capsys)
    assert code == 4 and out == "" and "budget" in err


def test_parse_error_exit(capsys):
    code, out, err = run(["solve", str(DATA / "undeclared.txt"), "-t", "k4"], capsys)
    assert code == 2 and out == "" and "line 3" in err


def test_missing_file_exit(capsys):
    code, _, _ = run(["solve", str(DATA / "nope.txt"), "-t", "k4"], capsys)
    assert code == 2


@pytest.mark.parametrize(
    "args",
    [
        ["-t", "k4", "-m", "infpath"],
        ["-t", "k5", "-m", "k4"],
        ["-t", "infpath", "-m", "oracle"],
        ["-t", "cycle6", "-m", "finpath"],
        ["-t", "k3", "-m", "small"],
    ],
)
def test_unsupported_pairings_exit(args, capsys):
    code, out, err = run(["solve", str(DATA / "triangle2.txt")] + args, capsys)
    assert code == 3 and out == "" and "unsupported" in err


@pytest.mark.parametrize(
    "template, method",
    [
        ("k4", "k4"),
        ("infpath", "infpath"),
        ("path4", "finpath"),
        ("graph:0-1,1-2,1-3", "forest"),
        ("p100", "p100"),
        ("graph:a-a,b-c", "small"),
        ("graph:w-w,w-0,w-1,w-2,w-3,0-1,1-2,2-3,3-0", "dominating"),
        ("cycle6", "oracle"),
    ],
)
def test_auto_dispatch(template, method, capsys):
    code, _, err = run(["solve", str(DATA / "path3.txt"), "-t", template], capsys)
    if template == "k4":
        code, _, err = run(["solve", str(DATA / "triangle2.txt"), "-t", template], capsys)
    assert code == 0 and f"method: {method};" in err


def test_template_file(capsys):
    code, _, err = run(["solve", str(DATA / "path3.txt"), "-t", str(DATA / "p100_template.txt")], capsys)
    assert code == 0 and "method: p100" in err


@pytest.mark.parametrize(
    "template, method",
    [("path4", "finpath"), ("path6", "finpath"), ("infpath", "infpath"), ("k4", "k4"), ("cycle6", "oracle"), ("p100", "oracle")],
)
def test_certificates_re_verify(template, method):
    H = resolve_template(template)
    counts = (2,) if template == "k4" else (1, 2)
    import random

    from countcsp import corpus

    rng = random.Random(5)
    for _ in range(60):
        inst = corpus.random_instance(rng, rng.randint(2, 6), counts, density=0.45)
        report = cli.solve(inst, H, method)
        assert cli.verify_certificate(inst, H, report), (inst, report)


def test_certificate_verification_rejects_tampering():
    inst = two_bad_walks_instance()
    report = cli.solve(inst, infinite_path())
    report.certificate["lambda"] = -4
    assert not cli.verify_certificate(inst, infinite_path(), report)


@pytest.mark.parametrize(
    "template, quantifiers, prefix",
    [
        ("k4", "2", "in-P ("),
        ("cycle6", "1,2", "Pspace-complete"),
        ("k2", "1", "in-L"),
        ("infpath", "1,2", "in-P"),
    ],
)
def test_classify(template, quantifiers, prefix, capsys):
    code, out, _ = run(["classify", "-t", template, "-q", quantifiers], capsys)
    assert code == 0 and out.startswith(prefix) and out.count("\n") == 1


def test_classify_golden(capsys):
    outputs = []
    for template, q in [("k4", "2"), ("k6", "3"), ("cycle6", "1,2"), ("k2", "1"), ("p101", "1,2")]:
        _, out, _ = run(["classify", "-t", template, "-q", q], capsys)
        outputs.append(f"{template} {q}: {out}")
    check_golden("classify.out", "".join(outputs))


def test_gadget_k2n(capsys):
    code, out, _ = run(["gadget", "k2n", str(DATA / "edge_src.txt"), "3"], capsys)
    assert code == 0
    inst = parse_instance(out)
    assert len(inst) == 11 and set(inst.counts) == {3}
    check_golden("gadget_k2n.out", out)


def test_gadget_cycle(capsys):
    code, out, _ = run(["gadget", "cycle", str(DATA / "forall_src.txt"), "3"], capsys)
    assert code == 0
    inst = parse_instance(out)
    assert list(inst.counts[:6]) == [2, 2, 2, 2, 1, 1]


def test_gadget_bad_source(capsys):
    code, _, err = run(["gadget", "k2n", str(DATA / "triangle2.txt"), "3"], capsys)
    assert code == 2 and "source counts" in err


def test_gadget_validator_failure_exit(monkeypatch, capsys):
    from countcsp.reductions import ValidationError

    def broken(src, n, out):
        raise ValidationError("forced")

    monkeypatch.setattr(cli, "validate_k2n", broken)
    code, out, err = run(["gadget", "k2n", str(DATA / "edge_src.txt"), "3"], capsys)
    assert code == 5 and out == "" and "forced" in err


def test_play_engine_vs_engine_two_bad_walks(capsys):
    code, out, _ = run(["play", str(DATA / "two_bad_walks.txt"), "-t", "infpath", "--side", "none"], capsys)
    assert code == 0 and out.rstrip().splitlines()[-1].startswith("verdict: Adversary wins")
    check_golden("play_two_bad_walks.out", out)


def test_play_engine_vs_engine_triangle(capsys):
    code, out, _ = run(["play", str(DATA / "triangle2.txt"), "-t", "k4", "--side", "none"], capsys)
    assert code == 0 and out.rstrip().endswith("verdict: Prover wins")
    check_golden("play_triangle.out", out)


def test_play_human_reprompts(capsys):
    script = "zz\n1 2\n5\n1\n2 3\n3\n3 4\n"
    code, out, _ = run(["play", str(DATA / "triangle2.txt"), "-t", "k4", "--side", "prover"], capsys, stdin=script)
    assert code == 0
    assert out.count("invalid offer") == 4
    check_golden("play_human_prover.out", out)


def test_play_human_adversary(capsys):
    script = "9\n1\n2\n3\n"
    code, out, _ = run(["play", str(DATA / "triangle2.txt"), "-t", "k4", "--side", "adversary"], capsys, stdin=script)
    assert code == 0 and "invalid choice" in out and out.rstrip().endswith("Prover wins")


def test_play_input_ends_early(capsys):
    code, _, err = run(["play", str(DATA / "triangle2.txt"), "-t", "k4", "--side", "prover"], capsys, stdin="1 2\n")
    assert code == 2 and "input ended" in err


def test_bench_table(capsys):
    code, out, _ = run(["bench", "--sizes", "4,5", "--samples", "5"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0].split()[:2] == ["family", "size"]
    assert all(line.endswith("True") for line in lines[1:]) and len(lines) == 7


def test_selftest_single_criterion(capsys):
    code, out, _ = run(["selftest", "--criteria", "6"], capsys)
    assert code == 0 and out.startswith("[PASS] criterion 6")


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "countcsp", "solve", str(DATA / "triangle2.txt"), "-t", "k4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "YES"
