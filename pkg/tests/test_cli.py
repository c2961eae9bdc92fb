import json
import subprocess
import sys
from pathlib import Path

import pytest

from superaffine.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv,golden",
    [
        (["cohomology", "--variant", "l", "--g", "sl2", "--window", "4"], "cohomology_l_sl2_w4.json"),
        (["dbar"], "dbar.json"),
        (["module", "--lambda", "1/2", "--v", "trivial", "--g", "sl2", "--window", "2"], "module_trivial_w2.json"),
        (["lemma22", "--literal", "--g", "sl2"], "lemma22_literal.json"),
    ],
)
def test_golden_json(argv, golden, capsys):
    code, out, _ = run(argv + ["--format", "json"], capsys)
    assert out == (GOLDEN / golden).read_text()
    assert code == (1 if "--literal" in argv else 0)


def test_output_is_deterministic(capsys):
    argv = ["module", "--lambda", "0", "--v", "gl11", "--window", "2", "--sample", "40", "--seed", "3", "--format", "json"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    assert json.loads(a)["seed"] == 3


def test_cohomology_dimensions(capsys):
    for argv, dim in (
        (["cohomology", "--variant", "l", "--g", "sl2", "--window", "4"], 1),
        (["cohomology", "--variant", "frak-l", "--g", "osp12", "--window", "4"], 2),
        (["cohomology", "--variant", "frak-w", "--window", "4"], 1),
    ):
        code, out, _ = run(argv + ["--format", "json"], capsys)
        assert code == 0
        assert json.loads(out)["suites"][0]["details"]["h2_dimension"] == dim


def test_verify_exit_zero(capsys):
    code, out, _ = run(["verify", "--variant", "l-hat", "--g", "sl2", "--window", "3"], capsys)
    assert code == 0 and "[PASS] super-jacobi" in out


def test_module_with_omega(capsys):
    code, out, _ = run(["module", "--lambda", "1/2", "--v", "trivial", "--g", "sl2", "--window", "3",
                        "--check-omega", "--format", "json"], capsys)
    doc = json.loads(out)
    assert code == 0
    suites = {s["name"]: s for s in doc["suites"]}
    assert suites["differentiator-search"]["details"]["minimal_m"] == 2
    assert set(suites["weight-report"]["details"]["slice_dimensions"]) == {2}


def test_module_adjoint_slices(capsys):
    code, out, _ = run(["module", "--lambda", "0", "--v", "adjoint-sl2", "--window", "2", "--format", "json"], capsys)
    assert code == 0
    suites = {s["name"]: s for s in json.loads(out)["suites"]}
    assert set(suites["weight-report"]["details"]["slice_dimensions"]) == {6}


@pytest.mark.parametrize(
    "argv,error",
    [
        (["verify", "--window", "0"], "UsageError"),
        (["verify", "--g", f"@{FIXTURES / 'bad.json'}", "--window", "4"], "ParseError"),
        (["verify", "--g", "@missing.json"], "ParseError"),
        (["cohomology", "--variant", "l-hat"], "IllegalVariant"),
        (["cohomology", "--window", "2"], "UsageError"),
        (["module", "--v", "adjoint-sl2", "--g", "osp12"], "InvalidVSpec"),
        (["module", "--lambda", "0.5"], "ValueError"),
        (["verify", "--variant", "l", "--g", "none"], "UsageError"),
        (["dbar", "--radius", "2"], "UsageError"),
    ],
)
def test_usage_errors_exit_two(argv, error, capsys):
    code, out, _ = run(argv + ["--format", "json"], capsys)
    assert code == 2
    assert json.loads(out)["error"]["error"] == error


def test_nonrep_vspec_pair(capsys):
    code, out, _ = run(["module", "--v", f"@{FIXTURES / 'nonrep.json'}", "--format", "json"], capsys)
    assert code == 2
    detail = json.loads(out)["error"]
    assert detail["error"] == "InvalidVSpec" and len(detail["pair"]) == 2


def test_text_errors_go_to_stderr(capsys):
    code, out, err = run(["verify", "--window", "0"], capsys)
    assert code == 2 and not out and err.startswith("error: UsageError")


def test_argparse_errors(capsys):
    assert main(["nope"]) == 2
    assert main(["cohomology", "--variant", "e8"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "superaffine", "dbar", "--radius", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "[PASS] dbar-closure" in proc.stdout
