from __future__ import annotations

import hashlib
import subprocess
import sys

import pytest

from qgraph.cli import EXIT_BOUND, EXIT_MATH, EXIT_OK, EXIT_USAGE, TABLE1, main
from qgraph.constructions import desarguesian_spread, empty_graph, neighborhood_design, spread_graph
from qgraph.fieldcore import make_field
from qgraph.fileio import format_design, format_graph, format_group
from qgraph.semilinear import gens_sp
from qgraph.structures import QaryGraph, SubspaceDesign
from qgraph.subspaces import enumerate_k_subspaces

F2 = make_field(2)


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report_line(out: str) -> str:
    return next(line for line in out.splitlines() if line.startswith("regular "))


def sha(path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_construct_spread_then_analyze(tmp_path, capsys):
    f = tmp_path / "s.graph"
    code, out, _ = run(capsys, "construct", "spread", "--v", "6", "--q", "2", "--t", "3", "-o", str(f))
    assert code == EXIT_OK and "params=(6,2,5,0;2)" in out and f.exists()
    code, out2, _ = run(capsys, "analyze", str(f))
    assert code == EXIT_OK
    assert report_line(out2) == report_line(out)
    assert "classical srg(63,6,5,0)" in out2


@pytest.mark.parametrize(
    "argv,params",
    [
        (["construct", "symplectic", "--v", "4", "--q", "3"], "(4,2,2,4;3)"),
        (["construct", "qsru", "--v", "4", "--q", "2", "--t", "2", "--template", "complete"], "(4,1,1,0;2)"),
        (["construct", "theorem3", "--group", "singer", "--v", "3", "--q", "2", "--delta", "full"], "(3,2,5;2)"),
        (["construct", "theorem3", "--group", "sp", "--v", "4", "--q", "2", "--delta", "index:1"], "(4,2,1,3;2)"),
        (["construct", "theorem3", "--group", "spread-stab(3)", "--v", "6", "--q", "2", "--delta", "index:1"], "(6,2,5,0;2)"),
    ],
)
def test_construct_examples(capsys, argv, params):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert report_line(out).endswith(f"params={params}")


def test_construct_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.graph", tmp_path / "b.graph"
    for f in (a, b):
        assert run(capsys, "construct", "qsru", "--v", "6", "--q", "2", "--t", "3", "--template", "complete", "-o", str(f))[0] == 0
    assert sha(a) == sha(b)
    c, d = tmp_path / "c.design", tmp_path / "d.design"
    for f in (c, d):
        assert run(capsys, "construct", "theorem2", "--group", "sp", "--v", "4", "--q", "2", "--delta", "index:1", "-o", str(f))[0] == 0
    assert sha(c) == sha(d)


def test_subspace_design_from_group_file(tmp_path, capsys):
    g = tmp_path / "sp.group"
    g.write_text(format_group(gens_sp(4, F2)))
    out_file = tmp_path / "perp.design"
    code, out, _ = run(capsys, "construct", "theorem2", "--group", str(g), "--delta", "index:1", "--explain", "-o", str(out_file))
    assert code == EXIT_OK
    assert "order 720" in out and "params: 1-(4,3,7;2)" in out and "|G_Delta| = 48" in out
    code, out, _ = run(capsys, "verify-design", str(out_file), "--t", "1")
    assert code == EXIT_OK and "lambda = 7" in out


def test_symmetry_violation_exit_code(capsys):
    codes = {}
    for i in range(1, 15):
        code, out, err = run(capsys, "construct", "theorem3", "--group", "singer", "--v", "4", "--q", "2", "--delta", f"closure:{i}")
        codes.setdefault(code, (out, err))
    assert set(codes) == {EXIT_OK, EXIT_MATH}
    out, err = codes[EXIT_MATH]
    assert "witness: (" in out and "failed:" in err


def test_analyze_tampered_and_empty(tmp_path, capsys):
    S = desarguesian_spread(4, F2, 2)
    g = spread_graph(S)
    T = g.table
    other = next(L for L in enumerate_k_subspaces(4, 2, F2) if 0 in T.points_of(L) and L != g.nbr[0])
    tampered = QaryGraph(T, (other,) + g.nbr[1:])
    f = tmp_path / "t.graph"
    f.write_text(format_graph(tampered))
    code, out, err = run(capsys, "analyze", str(f))
    assert code == EXIT_MATH and "witness: (" in out

    e = tmp_path / "e.graph"
    e.write_text(format_graph(empty_graph(3, F2)))
    code, out, _ = run(capsys, "analyze", str(e))
    assert code == EXIT_OK and "k=0, trivial" in out


def test_analyze_malformed(tmp_path, capsys):
    f = tmp_path / "bad.graph"
    text = format_graph(spread_graph(desarguesian_spread(4, F2, 2))).split("\n")
    text[5] = "1 0 9 0"
    f.write_text("\n".join(text))
    code, _, err = run(capsys, "analyze", str(f))
    assert code == EXIT_USAGE and "line 6" in err
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.graph"))
    assert code == EXIT_USAGE


def test_verify_design_spread(tmp_path, capsys):
    f = tmp_path / "n.design"
    f.write_text(format_design(neighborhood_design(spread_graph(desarguesian_spread(4, F2, 2)))))
    code, out, _ = run(capsys, "verify-design", str(f), "--t", "1")
    assert code == EXIT_OK and "lambda = 3" in out and "repeated blocks" in out
    code, out, _ = run(capsys, "verify-design", str(f), "--t", "2")
    assert code == EXIT_MATH and "not constant" in out


def test_verify_gdd(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-gdd", "--v", "4", "--q", "2", "--t", "2")
    assert code == EXIT_MATH and "no block" in out
    S = desarguesian_spread(4, F2, 2)
    off = tuple(L for L in enumerate_k_subspaces(4, 2, F2) if L not in S.elements)
    f = tmp_path / "b.design"
    f.write_text(format_design(SubspaceDesign(4, F2, off, 1, 2, 0)))
    code, out, _ = run(capsys, "verify-gdd", "--v", "4", "--q", "2", "--t", "2", str(f))
    assert code == EXIT_OK and "lambda = 1" in out


def test_spread_table_command(capsys):
    code, out, _ = run(capsys, "table1", "--explain")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == len(TABLE1) == 5
    assert all(" ok " in line + " " for line in lines)


def test_classify_all(capsys):
    code, out, _ = run(capsys, "classify-all", "--v", "3", "--q", "2")
    assert code == EXIT_OK and out.strip().endswith("nontrivial survivors: 0")
    code, _, err = run(capsys, "classify-all", "--v", "4", "--q", "2")
    assert code == EXIT_BOUND and "long-running" in err


def test_groups(capsys):
    code, out, _ = run(capsys, "groups", "--v", "4", "--q", "2", "--t", "2", "--explain")
    assert code == EXIT_OK
    assert "sp: Sp(4,2), order 720, transitive=True" in out
    assert "|PGammaL(4,2)| = 20160" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "spread", "--v", "6", "--q", "2"],
        ["construct", "spread", "--v", "6", "--q", "6", "--t", "3"],
        ["construct", "spread", "--v", "5", "--q", "2", "--t", "2"],
        ["construct", "theorem3", "--group", "nope", "--v", "3", "--q", "2"],
        ["construct", "theorem3", "--group", "sp", "--v", "4", "--q", "2", "--delta", "index:9"],
        ["construct", "theorem3", "--group", "sp", "--v", "4", "--q", "2", "--delta", "weird"],
        ["construct", "spread", "--v", "-1", "--q", "2", "--t", "2"],
        ["frobnicate"],
        ["construct", "spread", "--vv", "4"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as e:
        code = main(argv)
        raise SystemExit(code)
    assert e.value.code == EXIT_USAGE


def test_point_bound_env(monkeypatch, capsys):
    monkeypatch.setenv("QGRAPH_MAX_POINTS", "10")
    code, _, err = run(capsys, "construct", "symplectic", "--v", "4", "--q", "2")
    assert code == EXIT_BOUND and "bound exceeded" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qgraph", "table1"], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and res.stdout.count(" ok") == 5
