import json
import subprocess
import sys

import pytest

from pfisterlab import formula as fm
from pfisterlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["seed"] == 0
    return code, doc


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing")
    return doc


def test_isotropy(capsys):
    code, doc = report(capsys, "isotropy", "--field", "GF(3)", "--form", "1,1")
    assert code == 0 and doc["verdict"] == "Anisotropic"
    code, doc = report(capsys, "isotropy", "--field", "GF(3)", "--form", "1,1,1")
    assert code == 0 and doc["verdict"] == "Witness" and doc["witness"] == ["1", "1", "1"]
    for bad in ("1,,1", "1,0", "1,x"):
        code, doc = report(capsys, "isotropy", "--field", "GF(3)", "--form", bad)
        assert code == 1 and doc["verdict"] == "InputError"
    code, doc = report(capsys, "isotropy", "--field", "GF(5)(t)", "--form", "1,t")
    assert code == 1
    code, doc = report(capsys, "isotropy", "--field", "GF(3)(t)", "--form", "1,t", "--bound", "2")
    assert code == 2 and doc["verdict"] == "NoneFound"
    code, doc = report(capsys, "isotropy", "--field", "GF(5)(t)", "--form", "1,1", "--bound", "0")
    assert code == 0 and doc["witness"] == ["1", "2"]


def test_usage_errors(capsys):
    assert main([]) == 1
    assert main(["isotropy", "--field", "GF(3)"]) == 1
    assert main(["nonsense"]) == 1
    capsys.readouterr()


def test_independent(capsys):
    code, doc = report(capsys, "independent", "--field", "GF(5)(t1,t2)", "--elements", "t1+t2,t1*t2")
    assert code == 0 and doc["verdict"] == "Independent" and doc["method"] == "PfisterCertificate"
    assert doc["witness"]["certificate"]["verdict"] == "Valid"
    code, doc = report(capsys, "independent", "--field", "GF(3)(t)", "--elements", "t,t+1")
    assert code == 0 and doc["verdict"] == "Dependent"
    code, doc = report(capsys, "independent", "--field", "GF(4)(t)", "--elements", "t")
    assert doc["method"] == "GenFormCertificate"
    code, doc = report(capsys, "independent", "--field", "GF(5)(t)", "--elements", "t^5")
    assert code == 2 and doc["verdict"] == "Inconclusive"
    code, doc = report(capsys, "independent", "--field", "GF(5)", "--elements", "1")
    assert code == 1


def test_census(capsys, tmp_path):
    store = str(tmp_path / "c.jsonl")
    code, first = report(capsys, "census", "--qmax", "32", "--store", store)
    assert code == 0 and first["new_records"] > 0
    code, second = report(capsys, "census", "--qmax", "32", "--store", store, "--jobs", "2")
    assert second["new_records"] == 0 and second["verdict"] == first["verdict"]
    code, doc = report(capsys, "census", "--qmax", "5", "--store", str(tmp_path / "s.jsonl"))
    assert code == 2 and doc["verdict"] == "ScanCeilingExceeded"
    code, doc = report(capsys, "census", "compact", "--store", store)
    assert doc["records"] == first["records"]
    code, out = run(capsys, "census", "export", "--store", store)
    assert code == 0 and out.splitlines()[0].startswith("family,q,a")
    assert len(out.splitlines()) == first["records"] + 1


def test_census_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PFISTERLAB_STORE", str(tmp_path / "env.jsonl"))
    code, doc = report(capsys, "census", "--qmax", "32")
    assert code == 0 and doc["store"] == str(tmp_path / "env.jsonl")


def test_formula_pipeline(capsys):
    code, text = run(capsys, "formula", "gen", "trdeg", "--e", "1", "--n", "0")
    assert code == 0
    code, doc = report(capsys, "formula", "eval", "--field", "GF(3)", "--formula", text)
    assert code == 0 and doc["verdict"] == "true"
    assert doc["work"] <= doc["estimate"]
    code, text = run(capsys, "formula", "gen", "trdeg", "--e", "1", "--n", "1")
    code, doc = report(capsys, "formula", "eval", "--field", "GF(16)", "--formula", text)
    assert code == 2 and doc["verdict"] == "BudgetExceeded"


def test_formula_print_parse(capsys):
    code, text = run(capsys, "formula", "gen", "sa", "--char", "7")
    phi = fm.parse(text)
    code, again = run(capsys, "formula", "print", "--formula", text)
    assert fm.parse(again) == phi
    code, canon = run(capsys, "formula", "print", "--canonical", "--formula", text)
    assert "_0" in canon
    code, js = run(capsys, "formula", "parse", "--formula", text)
    assert fm.from_json(json.loads(js)) == phi
    code, doc = report(capsys, "formula", "eval", "--field", "GF(7)", "--formula", text, "--assign", "a=1,s=1")
    assert doc["verdict"] == "true" and doc["inputs"]["assignment"] == {"a": "1", "s": "1"}
    code, doc = report(capsys, "formula", "eval", "--field", "GF(7)", "--formula", text)
    assert code == 1
    code, doc = report(capsys, "formula", "eval", "--field", "GF(7)", "--formula", "(x+")
    assert code == 1 and "position 3" in doc["reason"]
    code, text = run(capsys, "formula", "gen", "constants", "--template", "quintic", "--m", "2")
    assert fm.quantifier_count(fm.parse(text)) == 45
    code, doc = report(capsys, "formula", "eval", "--field", "GF(9)", "--subfield", "2",
                       "--formula", "Ax.InSub(x)")
    assert doc["verdict"] == "true"


def test_formula_gen_errors(capsys):
    code, doc = report(capsys, "formula", "gen", "trdeg", "--e", "2", "--n", "2")
    assert code == 1 and "FoldCeiling" in doc["reason"]
    code, doc = report(capsys, "formula", "gen", "sa")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["isotropy", "--field", "GF(9)", "--form", "1,u"],
    ["independent", "--field", "GF(3)(t1,t2)", "--elements", "t1^2+t2,t2"],
    ["formula", "eval", "--field", "GF(5)", "--formula", "Ax.Ey.x*y=1 | x=0"],
])
def test_reports_deterministic(capsys, argv):
    _, a = report(capsys, *argv)
    _, b = report(capsys, *argv)
    assert strip_timing(a) == strip_timing(b)


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "pfisterlab.cli", "isotropy", "--field", "GF(5)", "--form", "1,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["witness"] == ["1", "2"]
