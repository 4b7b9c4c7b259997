import csv
import io
import json
import subprocess
import sys

import pytest

from emq.cli import main
from emq.mackey import catalog, data_path, dumps_mky

from expected import constant_z


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def stripped_z(tmp_path):
    doc = json.loads(dumps_mky(catalog("constant-z")))
    for k in ("product_fixed", "product_underlying", "unit_fixed", "unit_underlying"):
        doc.pop(k)
    p = tmp_path / "z-plain.mky"
    p.write_text(json.dumps(doc), encoding="utf-8")
    return p


@pytest.fixture
def tr_zeroed(tmp_path):
    doc = json.loads(dumps_mky(catalog("burnside")))
    doc["tr"] = [[0], [0]]
    p = tmp_path / "bad.mky"
    p.write_text(json.dumps(doc), encoding="utf-8")
    return p


def test_compute_csv_constant_z(capsys):
    code, out, _ = run(capsys, "compute", "--mackey", "constant-z", "--window", "-10:10,-10:10", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 441
    assert list(rows[0]) == ["x", "y", "invariant_factors", "case_tag"]
    for r in rows:
        want = ";".join(map(str, constant_z(int(r["x"]), int(r["y"]))))
        assert r["invariant_factors"] == want
    keys = [(int(r["x"]), int(r["y"])) for r in rows]
    assert keys == sorted(keys)


def test_compute_zero(capsys):
    code, out, _ = run(capsys, "compute", "--mackey", "zero", "--window", "-3:3,-3:3")
    assert code == 0
    grid_cells = [tok for line in out.splitlines()[:7] for tok in line.split("|")[1].split()]
    assert grid_cells == ["0"] * 49
    code, out, _ = run(capsys, "compute", "--mackey", "zero", "--window", "-3:3,-3:3", "--format", "csv")
    assert all(r["invariant_factors"] == "" for r in csv.DictReader(io.StringIO(out)))


def test_compute_json_burnside(capsys):
    code, out, _ = run(capsys, "compute", "--mackey", "burnside", "--window", "-2:2,-2:2", "--format", "json")
    doc = json.loads(out)
    cell = next(c for c in doc["cells"] if (c["x"], c["y"]) == (0, 0))
    assert cell["invariant_factors"] == [0, 0]


def test_compute_actions(capsys):
    code, out, _ = run(capsys, "compute", "--mackey", "constant-z", "--window", "-3:3,-3:3", "--format", "json",
                       "--actions", "a,u")
    doc = json.loads(out)
    edge = next(e for e in doc["actions"] if e["actor"] == "u" and e["source"] == [-2, 2])
    assert edge["matrix"] == [[2]] and edge["classification"] == "mono"
    code, out, _ = run(capsys, "compute", "--mackey", "constant-z", "--window", "-1:1,-1:1", "--format", "csv",
                       "--actions", "a")
    assert out.splitlines()[0] == "x,y,invariant_factors,case_tag,a_map"


def test_compute_svg(capsys, tmp_path):
    target = tmp_path / "b.svg"
    code, _, _ = run(capsys, "compute", "--mackey", "burnside", "--format", "svg", "--output", str(target))
    svg = target.read_text(encoding="utf-8")
    assert code == 0 and svg.startswith("<svg")
    assert 'stroke="red"' in svg and 'stroke-dasharray' in svg
    assert "<polygon" in svg and 'fill="black"' in svg


def test_compute_deterministic(capsys):
    outs = [run(capsys, "compute", "--mackey", "norm-f2", "--format", f)[1] for f in ("csv", "json", "svg") for _ in range(2)]
    assert outs[0] == outs[1] and outs[2] == outs[3] and outs[4] == outs[5]


def test_bad_window(capsys):
    assert run(capsys, "compute", "--mackey", "burnside", "--window", "3:1,0:0")[0] == 3
    assert run(capsys, "compute", "--mackey", "burnside", "--window", "nonsense")[0] == 3


def test_unknown_source(capsys):
    code, _, err = run(capsys, "compute", "--mackey", "no-such-thing")
    assert code == 2 and "unknown functor" in err


def test_verify(capsys):
    assert run(capsys, "verify", "--mackey", "burnside", "--window", "-6:6,-6:6")[0] == 0
    code, out, _ = run(capsys, "verify", "--mackey", "random:5:42", "--window", "-5:5,-5:5")
    assert code == 0 and "clean: 5" in out


def test_verify_corrupted_file(capsys, tr_zeroed):
    code, _, err = run(capsys, "verify", "--mackey", str(tr_zeroed))
    assert code == 2 and "res∘tr ≠ N" in err


def test_ring(capsys):
    code, out, _ = run(capsys, "ring", "--mackey", "constant-f2", "--window", "-6:6,-6:6")
    assert code == 0 and "λ^2 = u" in out
    code, out, _ = run(capsys, "ring", "--mackey", "burnside", "--window", "-6:6,-6:6", "--format", "json")
    assert "a·τ = ω − 2" in [r["relation"] for r in json.loads(out)["relations"]]


def test_ring_needs_green(capsys, stripped_z):
    assert run(capsys, "ring", "--mackey", str(stripped_z))[0] == 4
    assert run(capsys, "ring", "--mackey", "twisted-z")[0] == 4


def test_validate(capsys, tr_zeroed, tmp_path):
    assert run(capsys, "validate", str(data_path("burnside")))[0] == 0
    code, out, _ = run(capsys, "validate", str(tr_zeroed))
    assert code == 1 and "res∘tr ≠ N" in out
    junk = tmp_path / "junk.mky"
    junk.write_text("{{{", encoding="utf-8")
    assert run(capsys, "validate", str(junk))[0] == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "emq.cli", "compute", "--mackey", "constant-f2", "--window", "-1:1,-1:1"],
        capture_output=True, text=True, check=True,
    )
    assert "Z/2" in proc.stdout
