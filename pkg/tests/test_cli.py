import io
import json
import os
from pathlib import Path

import pytest

from dfheight.cli import main
from dfheight.corpus import CORPUS

GOLDEN = Path(__file__).resolve().parent.parent / "docs" / "golden"

CASES = {
    "coeffs_exp.csv": ["coeffs", "corpus:exp", "--n", "3"],
    "coeffs_log1p.json": ["coeffs", "corpus:log1p", "--n", "4", "--format", "json"],
    "coeffs_gauss_i.csv": ["coeffs", "corpus:gauss_i", "--n", "5"],
    "profile_log1p.csv": ["profile", "corpus:log1p", "--n", "10"],
    "profile_geometric2.csv": ["profile", "corpus:geometric2", "--n", "10"],
    "density_log1p.json": ["density", "corpus:log1p", "--n", "400", "--kappa", "1/2", "--beta", "2"],
    "hankel_hilbertish.csv": ["hankel", "corpus:hilbertish", "--n", "8"],
    "hankel_guess_geometric2.json": ["hankel", "corpus:geometric2", "--n", "12", "--guess", "5"],
    "hankel_guess_log1p.json": ["hankel", "corpus:log1p", "--n", "40", "--guess", "5"],
    "siegel_3_5.txt": ["siegel", "3", "5"],
    "siegel_2_4_10.txt": ["siegel", "2,4", "10"],
    "twist_log1p.csv": ["twist", "corpus:log1p", "0,1", "--n", "8"],
    "polya_halfgeom.csv": ["polya", "corpus:halfgeom", "1.5", "1,2", "12"],
    "counterexample_1024.csv": ["counterexample", "1024", "log"],
    "classify_invgeom.json": ["classify", "corpus:invgeom", "--n", "200"],
    "classify_exp.json": ["classify", "corpus:exp", "--n", "200"],
    "trichotomy_geometric2.json": ["trichotomy", "corpus:geometric2", "--n", "100"],
    "corpus.csv": ["corpus"],
}


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, text = run(CASES[name])
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("DFHEIGHT_REGEN"):
        path.write_text(text)
    assert text == path.read_text(), f"output of {' '.join(CASES[name])} changed"


def test_deterministic_bytes():
    for argv in (CASES["classify_exp.json"], CASES["hankel_hilbertish.csv"]):
        assert run(argv) == run(argv)


def test_coeff_examples():
    assert run(["coeffs", "corpus:exp", "--n", "3"])[1].splitlines()[1:] == ["0,1", "1,1", "2,1/2", "3,1/6"]
    assert run(["coeffs", "corpus:log1p", "--n", "2"])[1].splitlines()[1:] == ["0,0", "1,1", "2,-1/2"]


def test_profile_exclusion(tmp_path):
    f = tmp_path / "ex.txt"
    f.write_text("# drop everything past 1\n" + "\n".join(str(k) for k in range(2, 11)) + "\n")
    code, text = run(["profile", "corpus:log1p", "--n", "10", "--exclude", str(f)])
    assert code == 0
    rows = [r.split(",") for r in text.splitlines()[1:]]
    assert all(r[4] == "0.0" for r in rows)
    assert [r[5] for r in rows] == ["0", "0"] + ["1"] * 9


def test_classify_examples():
    rep = json.loads(run(["classify", "corpus:catalanish", "--n", "300"])[1])
    assert rep["class"] == "Linear"
    rep = json.loads(run(["classify", "corpus:invgeom", "--n", "100"])[1])
    assert rep["class"] == "Constant" and rep["poles"] == "AllRootsOfUnity(1,1)"
    rep = json.loads(run(["classify", "corpus:exp", "--n", "300", "--branches"])[1])
    assert rep["class"] == "NLogN" and rep["gevrey"] == "1" and rep["branches"] == ["i"]


def test_polya_all_sound():
    text = run(["polya", "corpus:halfgeom", "1.5", "1,2", "12", "--format", "json"])[1]
    rep = json.loads(text)
    assert rep["all_sound"] and len(rep["rows"]) == 13


def test_counterexample_checkpoints():
    rows = run(["counterexample", "1024"])[1].splitlines()[1:]
    assert [int(r.split(",")[0]) for r in rows] == [2 ** k for k in range(1, 11)]


def test_exit_code_schema(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "name": "x",\n  "initial": [1,\n}\n')
    code, _ = run(["coeffs", str(bad)])
    assert code == 2
    assert f"{bad}:4:1" in capsys.readouterr().err


def test_exit_code_schema_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "name": "x",\n "recurrence": {"B": [["1"], ["2/0"]]},\n "initial": ["1"]\n}\n')
    assert run(["coeffs", str(bad)])[0] == 2
    assert ":3:31: recurrence/B/1/0" in capsys.readouterr().err


@pytest.mark.parametrize("doc", [
    {"name": "x", "initial": ["1"]},
    {"name": "x", "recurrence": {"B": [["1"], ["-1"]]}, "initial": ["1"], "extra": 1},
    {"name": "x", "field": {"type": "quadratic", "d": 4}, "recurrence": {"B": [["1"], ["-1"]]},
     "initial": ["1"]},
    {"name": "x", "recurrence": {"B": [["1"], ["-1"]]}, "initial": ["(0)+(1)*sqrt(-1)"]},
    {"name": "x", "recurrence": {"B": [["1"], ["-1"]], "offset": -1}, "initial": ["1"]},
    {"name": "", "recurrence": {"B": [["1"], ["-1"]]}, "initial": ["1"]},
    {"name": "x", "operator": {"A": [["1"], ["-1"]]}, "recurrence": {"B": [["1"], ["-2"]]},
     "initial": ["1"]},
])
def test_schema_violations(tmp_path, doc):
    f = tmp_path / "s.json"
    f.write_text(json.dumps(doc, indent=1))
    assert run(["coeffs", str(f)])[0] == 2


def test_operator_and_recurrence_consistent(tmp_path):
    doc = {"name": "exp", "operator": {"A": [["1"], ["-1"]]},
           "recurrence": {"B": [["-1"], ["1", "1"]]}, "initial": ["1"]}
    f = tmp_path / "s.json"
    f.write_text(json.dumps(doc))
    assert run(["coeffs", str(f), "--n", "2"]) == (0, "n,a_n\n0,1\n1,1\n2,1/2\n")


def test_exit_code_underspecified(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"name": "z3", "operator": {"A": [["0", "1"], ["-3"]]},
                             "initial": ["0", "0", "0"]}))
    assert run(["coeffs", str(f)])[0] == 3


def test_exit_code_precondition():
    assert run(["siegel", "1,2", "8"])[0] == 4
    assert run(["polya", "corpus:halfgeom", "2", "1,2", "5"])[0] == 4
    assert run(["classify", "corpus:exp", "--n", "10"])[0] == 4


def test_exit_code_bad_arguments():
    assert run(["counterexample", "100", "cubic"])[0] == 2
    assert run(["coeffs", "corpus:nope"])[0] == 2
    assert run(["siegel", "a,b", "8"])[0] == 2
    assert run([])[0] == 2


def test_seed_only_on_check():
    assert run(["coeffs", "corpus:exp", "--seed", "3"])[0] == 2
    code, text = run(["check", "--seed", "5", "--count", "5"])
    assert code == 0
    rep = json.loads(text)
    assert rep["seed"] == 5 and all(r["ok"] for r in rep["results"])
    assert run(["check", "--seed", "5", "--count", "5"])[1] == text


def test_corpus_definitions_validate():
    for name in CORPUS:
        code, text = run(["corpus", name])
        assert code == 0 and json.loads(text)["name"] == name
