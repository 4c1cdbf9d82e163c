import json
import subprocess
import sys

import pytest

from trimanifold import DatasetRecord, minimal_triangulation, parse, serialize
from trimanifold.cli import main


@pytest.fixture
def seeds(tmp_path):
    path = tmp_path / "seeds.jsonl"
    recs = [DatasetRecord.from_complex(n, minimal_triangulation(n), lab) for n, lab in (("S2", "S2"), ("T2", "T2#1"), ("RP2", "RP2#1"))]
    path.write_bytes(serialize(recs))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys, seeds):
    code, out, _ = run(capsys, "validate", "-i", seeds)
    assert code == 0
    assert json.loads(out) == {"records": 3, "invalid": 0}


def test_validate_wrong_label(capsys, tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_bytes(serialize([DatasetRecord.from_complex("t", minimal_triangulation("T2"), "S2")]))
    code, _, err = run(capsys, "validate", "-i", path)
    assert code == 1
    assert "T2#1" in err


def test_parse_failure_exit_1(capsys, tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text("{not json}\n")
    code, _, err = run(capsys, "invariants", "-i", path)
    assert code == 1
    assert "line 1" in err


def test_usage_errors(capsys, seeds):
    assert run(capsys, "subdivide", "-i", seeds, "--scheme", "bogus")[0] == 2
    assert run(capsys, "dedup", "-i", seeds, "--max-group", "0")[0] == 2
    assert run(capsys, "invariants", "-i", "/nonexistent/file.jsonl")[0] == 2
    assert run(capsys, "variants", "-i", seeds)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_invariants(capsys, seeds):
    code, out, _ = run(capsys, "invariants", "-i", seeds)
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert rows[1]["id"] == "T2" and rows[1]["f_vector"] == [7, 21, 14]
    assert rows[2]["orientable"] is False


def test_classify(capsys, seeds, tmp_path):
    code, out, _ = run(capsys, "classify", "-i", seeds)
    assert [json.loads(l)["class"] for l in out.splitlines()] == ["S2", "T2#1", "RP2#1"]
    target = tmp_path / "labelled.jsonl"
    assert run(capsys, "classify", "-i", seeds, "--write-labels", "-o", target)[0] == 0
    assert [r.label for r in parse(target.read_bytes())] == ["S2", "T2#1", "RP2#1"]


def test_pachner_walk(capsys, seeds, tmp_path):
    target = tmp_path / "walk.jsonl"
    assert run(capsys, "pachner-walk", "-i", seeds, "--steps", "20", "--max-vertices", "12", "-o", target)[0] == 0
    recs = parse(target.read_bytes())
    assert [r.label for r in recs] == ["S2", "T2#1", "RP2#1"]
    assert all(r.vertex_count <= 12 for r in recs)


def test_consum(capsys, seeds, tmp_path):
    target = tmp_path / "sum.jsonl"
    assert run(capsys, "consum", "-i", seeds, "--piece", "RP2", "-o", target)[0] == 0
    assert [r.label for r in parse(target.read_bytes())] == ["RP2#1", "RP2#3", "RP2#2"]
    code, out, _ = run(capsys, "consum", "--surface", "T2#3")
    assert code == 0 and parse(out)[0].label == "T2#3"


def test_subdivide(capsys, seeds, tmp_path):
    target = tmp_path / "sub.jsonl"
    assert run(capsys, "subdivide", "-i", seeds, "--scheme", "graded-16", "-o", target)[0] == 0
    assert all(r.vertex_count == 16 for r in parse(target.read_bytes()))


def test_dedup(capsys, tmp_path):
    T = minimal_triangulation("T2")
    path = tmp_path / "dup.jsonl"
    path.write_bytes(serialize([DatasetRecord.from_complex(f"t{i}", T, "T2#1") for i in range(3)]))
    code, out, err = run(capsys, "dedup", "-i", path)
    assert code == 0
    assert len(parse(out)) == 1
    assert json.loads(err)["removed"] == 2


def test_balance_split_baseline_stats_export(capsys, seeds, tmp_path):
    data = tmp_path / "bal.jsonl"
    code, _, _ = run(capsys, "balance", "-i", seeds, "--target", "8", "--max-vertices", "12",
                     "--classes", "RP2#2", "-o", data)
    assert code == 0
    recs = parse(data.read_bytes())
    assert {r.label for r in recs} == {"S2", "T2#1", "RP2#1", "RP2#2"}

    split = tmp_path / "split.jsonl"
    assert run(capsys, "split", "-i", data, "--ratios", "0.5,0.25,0.25", "-o", split)[0] == 0
    assert {r.split for r in parse(split.read_bytes())} == {"train", "val", "test"}

    code, out, _ = run(capsys, "ec-baseline", "-i", split)
    assert code == 0 and json.loads(out)["balanced_accuracy"] == 1.0

    code, out, _ = run(capsys, "stats", "-i", split)
    assert code == 0 and json.loads(out)["manifolds"] == len(recs)

    code, out, _ = run(capsys, "export-graph", "-i", seeds, "--repr", "hasse", "--encode", "rwpe", "--directed")
    graphs = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and len(graphs) == 3 and graphs[0]["directed"]

    outdir = tmp_path / "variants"
    code, out, _ = run(capsys, "variants", "-i", data, "--scheme", "top-1", "--scheme", "barycentric",
                       "--per-class", "2", "-o", outdir)
    assert code == 0
    assert json.loads(out) == {"top-1": 8, "barycentric": 8}
    assert sorted(p.name for p in outdir.iterdir()) == ["barycentric.jsonl", "top-1.jsonl"]


def test_module_entry_point(seeds):
    proc = subprocess.run([sys.executable, "-m", "trimanifold", "validate", "-i", str(seeds)],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_stdin(seeds):
    proc = subprocess.run([sys.executable, "-m", "trimanifold", "invariants"],
                          input=seeds.read_text(), capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 3
