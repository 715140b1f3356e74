import json

import pytest

from ainfcat.cli import main
from ainfcat.formats import dump_functor, dump_presentation
from ainfcat.categories import builtin
from ainfcat.functors import catalog

SMALL = ["--max-length", "3", "--max-arity", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert "Psi: K -> I" in out and "F_prime: A -> K_ainf" in out


def test_homology_of_a_disk(capsys):
    code, out, _ = run(capsys, "homology", "builtin:P1", "6", "7")
    assert code == 0
    assert "H^k = 0 for all k" in out


def test_homology_json(capsys):
    code, out, _ = run(capsys, "homology", "builtin:K", "1", "2", "--format", "json", *SMALL)
    data = json.loads(out)
    assert code == 0 and data["homology"] == {"0": "R"} and data["exact"] is False


def test_verify_builtin(capsys):
    code, out, _ = run(capsys, "verify", "builtin:K")
    assert code == 0 and out.startswith("[pass] structure:K")


def test_verify_file_with_broken_functor(capsys, tmp_path):
    bad = builtin("K").with_diff("r1", "g*f", label="Kbad")
    path = tmp_path / "k.txt"
    path.write_text(dump_presentation(bad))
    code, out, _ = run(capsys, "verify", str(path), *SMALL)
    assert code == 1 and "[fail] structure:Kbad" in out


def test_verify_functor_file(capsys, tmp_path):
    path = tmp_path / "psi.txt"
    path.write_text(dump_functor(catalog()["Psi"]))
    code, out, _ = run(capsys, "verify", f"{path}#Psi")
    assert code == 0 and "[pass] functor:Psi" in out


def test_lift_with_oracle(capsys):
    code, out, _ = run(capsys, "lift", "Psi", "R(0)", "--oracle", "--format", "json")
    (report,) = json.loads(out)
    assert code == 0 and report["status"] == "pass"
    assert "oracle holds" in report["witnesses"][1]


def test_lift_negative_answer_is_not_a_failure(capsys):
    code, out, _ = run(capsys, "lift", "B->I", "F_dg", *SMALL)
    assert code == 0 and "= False" in out


def test_pushout(capsys):
    code, out, _ = run(capsys, "pushout", "builtin:I", "R(0)", "4=1,5=2", *SMALL)
    assert code == 0
    assert "  e = b" in out and "[pass] inc:I+R(0)" in out


def test_pushout_f_prime_fails(capsys):
    code, out, _ = run(capsys, "pushout", "builtin:A", "F_prime", "3=3", "--max-layers", "2",
                       *SMALL)
    assert code == 1 and "exact obstruction found" in out


@pytest.mark.parametrize("argv", [
    ["homology", "builtin:Z", "1", "1"],
    ["homology", "builtin:K", "1", "9"],
    ["pushout", "builtin:I", "R(0)", "4=1"],
    ["pushout", "builtin:I", "R(0)", "4:1"],
    ["lift", "Nope", "Q"],
    ["lift", "Psi", "S(x)"],
    ["verify", "builtin:K", "--max-length", "0"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("ainfcat: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "builtin:K", "--ring", "fp:4"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_flags_before_the_subcommand(capsys):
    code, out, _ = run(capsys, "--ring", "fp:2", "--format", "json", "homology",
                       "builtin:P1", "6", "7")
    assert json.loads(out)["ring"] == "fp:2"


def test_recognize_is_deterministic_and_honest(capsys):
    args = ["recognize", "--format", "json", "--seed", "5", *SMALL]
    code, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    reports = json.loads(first)
    assert [r["id"] for r in reports] == sorted(r["id"] for r in reports)
    failing = [r["id"] for r in reports if r["status"] == "fail"]
    # the A-infinity interval cell is the single failure, so the exit code is 1
    assert failing == ["RT-4-Jcell-weq:A+F_prime"] and code == 1
    assert {r["id"] for r in reports if r["status"] == "out-of-scope"} == {"RT-2-small-I",
                                                                        "RT-3-small-J"}
    assert all(set(r) == {"id", "status", "witnesses", "config"} for r in reports)
