import json
import subprocess
import sys

from whcryst.cli import main, selftest


def run(*args):
    p = subprocess.run([sys.executable, "-m", "whcryst", *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def test_validate(capsys):
    assert main(["validate", "catalog:P1"]) == 0
    assert "point group: Trivial; OK" in capsys.readouterr().out


def test_validate_rejects(data_dir, capsys):
    assert main(["validate", str(data_dir / "z5_axis.json")]) == 1
    assert "order 5" in capsys.readouterr().err
    assert main(["validate", str(data_dir / "gram_mismatch_3d.json")]) == 1
    assert main(["validate", "/no/such.json"]) == 1
    assert main(["wh", "catalog:p2"]) == 1


def test_catalog(capsys):
    assert main(["catalog", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["groups"]) == 13


def test_classes_and_wh(capsys):
    assert main(["classes", "catalog:PmmxZ"]) == 0
    out = capsys.readouterr().out
    assert "Semidirect(F=D2, phi=Trivial)" in out and "conjugacy audit: passed" in out
    assert main(["wh", "catalog:PmmxZ"]) == 0
    out = capsys.readouterr().out
    assert "8·Nil1(Z[D2])" in out and "infinitely generated: yes" in out


def test_product_formula_cli(capsys):
    assert main(["corollary2", "catalog:p2", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["total"]["status"] == "Zero"


def test_deterministic_json():
    a = run("wh", "catalog:P622", "--json")
    b = run("wh", "catalog:P622", "--json", "--jobs", "3")
    assert a[0] == b[0] == 0
    assert a[1] == b[1]


def test_entry_point_exit_codes():
    assert run("validate", "catalog:Pm-3m")[0] == 0
    assert run("validate", "catalog:missing")[0] == 1


def test_selftest_rows():
    rows = selftest(seed=0, samples=10)
    failed = [r for r in rows if not r[1]]
    assert failed == []
    names = [r[0] for r in rows]
    assert "Out(D2) ≅ D3" in names
    assert "A4xC2: r = q = 6" in names


def test_selftest_cli():
    code, out, _ = run("selftest", "--seed", "3")
    assert code == 0
    line = next(x for x in out.splitlines() if x.startswith("Out(D2) ≅ D3"))
    assert line.split(":")[-1].strip() == "PASS"
