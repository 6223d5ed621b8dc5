"""End-to-end CLI behaviour: flags, files, exit codes, determinism."""

import json

import pytest

from defindex.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- antitree ----------------------------------------------------------------


def test_antitree_writes_graph_and_spheres(tmp_path, capsys):
    prefix = str(tmp_path / "at")
    code, _, _ = run(capsys, "antitree", "--alpha", "2", "--depth", "4", "--out", prefix)
    assert code == 0
    csv = (tmp_path / "at.spheres.csv").read_text().splitlines()
    assert csv == ["n,size", "0,1", "1,1", "2,4", "3,9", "4,16"]
    doc = json.loads((tmp_path / "at.graph.json").read_text())
    assert doc["vertex_count"] == 31
    assert doc["boundary"] == sorted(range(15, 31))


def test_antitree_alpha_1_5_sizes(tmp_path, capsys):
    prefix = str(tmp_path / "at")
    code, _, _ = run(capsys, "antitree", "--alpha", "1.5", "--depth", "3", "--out", prefix)
    assert code == 0
    csv = (tmp_path / "at.spheres.csv").read_text().splitlines()
    assert csv == ["n,size", "0,1", "1,1", "2,2", "3,5"]


def test_antitree_rejects_alpha_zero(capsys):
    code, _, err = run(capsys, "antitree", "--alpha", "0", "--depth", "3")
    assert code == 2
    assert "alpha" in err


def test_antitree_explicit_sizes(tmp_path, capsys):
    prefix = str(tmp_path / "ex")
    code, _, _ = run(capsys, "antitree", "--sizes", "1,2,3", "--out", prefix)
    assert code == 0
    doc = json.loads((tmp_path / "ex.graph.json").read_text())
    assert doc["vertex_count"] == 6
    assert len(doc["edges"]) == 8


# -- analyze -----------------------------------------------------------------


def test_analyze_alpha_2(capsys):
    code, out, _ = run(capsys, "analyze", "--antitree", "--alpha", "2")
    assert code == 0
    assert json.loads(out)["eta"] == 1


def test_analyze_alpha_2_copies_4(capsys):
    code, out, _ = run(capsys, "analyze", "--antitree", "--alpha", "2", "--copies", "4")
    assert code == 0
    assert json.loads(out)["eta"] == 4


def test_analyze_alpha_1(capsys):
    code, out, _ = run(capsys, "analyze", "--antitree", "--alpha", "1")
    assert code == 0
    assert json.loads(out)["eta"] == 0


def test_analyze_tree_truncation_exits_3(tmp_path, capsys):
    graph = {
        "vertex_count": 4,
        "edges": [[0, 1], [1, 2], [2, 3]],
        "boundary": [3],
    }
    p = tmp_path / "tree.json"
    p.write_text(json.dumps(graph))
    code, out, _ = run(capsys, "analyze", "--graph", str(p), "--tree")
    assert code == 3
    assert json.loads(out)["eta"] == "undetermined"


def test_analyze_finite_graph_file(tmp_path, capsys):
    graph = {"vertex_count": 3, "edges": [[0, 1], [1, 2]], "boundary": []}
    p = tmp_path / "g.json"
    p.write_text(json.dumps(graph))
    code, out, _ = run(capsys, "analyze", "--graph", str(p))
    assert code == 0
    assert json.loads(out)["eta"] == 0


def test_analyze_descriptor_file(tmp_path, capsys):
    desc = {"kind": "glued", "copies": 3, "base": {"kind": "antitree", "alpha": 2.0}}
    p = tmp_path / "d.json"
    p.write_text(json.dumps(desc))
    code, out, _ = run(capsys, "analyze", "--descriptor", str(p))
    assert code == 0
    assert json.loads(out)["eta"] == 3


def test_analyze_parse_failure_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "analyze", "--descriptor", str(p))
    assert code == 2
    assert err


def test_analyze_missing_args_exits_2(capsys):
    code, _, _ = run(capsys, "analyze")
    assert code == 2


# -- solve -------------------------------------------------------------------


def test_solve_writes_trace_csv(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code, _, _ = run(
        capsys, "solve", "--alpha", "2", "--z", "i", "--n-max", "10000",
        "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,log10_abs_u,log10_partial_sum"
    assert len(lines) == 10002
    # limit circle: the square-sum has converged, so the last rows agree
    # to 6 decimals
    tail = [float(l.split(",")[2]) for l in lines[-50:]]
    assert max(tail) - min(tail) < 1e-6


def test_solve_alpha_1_partial_sums_strictly_increase(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code, _, _ = run(
        capsys, "solve", "--alpha", "1", "--z", "i", "--n-max", "3000",
        "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().splitlines()[1:]
    sums = [float(l.split(",")[2]) for l in lines[-500:]]
    assert all(b > a for a, b in zip(sums, sums[1:]))


def test_solve_rejects_bad_n_max(capsys):
    code, _, _ = run(capsys, "solve", "--alpha", "2", "--n-max", "0")
    assert code == 2


def test_solve_explicit_range_guard(capsys):
    code, _, err = run(capsys, "solve", "--sizes", "1,2,3", "--n-max", "50")
    assert code == 2
    assert "exceeds" in err


# -- check-reduction ---------------------------------------------------------


def test_check_reduction_passes(tmp_path, capsys):
    out = tmp_path / "check.json"
    code, _, _ = run(
        capsys, "check-reduction", "--alpha", "2", "--depth", "8",
        "--trials", "100", "--seed", "0", "--out", str(out),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["max_deviation"] < 1e-12
    assert doc["trials"] == 100
    assert doc["seed"] == 0
    assert "failing_identity" not in doc


# -- glue --------------------------------------------------------------------


def test_glue_roundtrip(tmp_path, capsys):
    prefix = str(tmp_path / "base")
    run(capsys, "antitree", "--sizes", "1,2", "--out", prefix)
    out = tmp_path / "glued.json"
    code, _, _ = run(
        capsys, "glue", "--graph", prefix + ".graph.json", "--copies", "3",
        "--out", str(out),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["vertex_count"] == 9
    assert len(doc["edges"]) == 3 * 2 + 2


def test_glue_rejects_zero_copies(tmp_path, capsys):
    prefix = str(tmp_path / "base")
    run(capsys, "antitree", "--sizes", "1,2", "--out", prefix)
    code, _, _ = run(
        capsys, "glue", "--graph", prefix + ".graph.json", "--copies", "0"
    )
    assert code == 2


# -- determinism -------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", "--antitree", "--alpha", "2"),
        ("analyze", "--antitree", "--alpha", "0.5"),
        ("solve", "--alpha", "2", "--n-max", "2000"),
        ("check-reduction", "--alpha", "2", "--depth", "6", "--trials", "10",
         "--seed", "0"),
    ],
)
def test_repeated_runs_byte_identical(capsys, argv):
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2
