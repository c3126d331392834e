import json
import subprocess
import sys

import pytest

from lienil.algebra import dump_algebra, gl_algebra, load_algebra
from lienil.cli import EXIT_INPUT, EXIT_OK, EXIT_VERDICT, main
from lienil.linalg import QQ

LOOP_BEHIND_EDGE = "vertex u\nvertex v\nedge e : u -> v\nedge f : v -> v\n"


@pytest.fixture
def graph_file(tmp_path):
    def write(text, name="g.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_human_and_json(capsys, graph_file):
    g = graph_file(LOOP_BEHIND_EDGE)
    code, out, _ = run(capsys, ["classify", g, "--char", "2"])
    assert code == EXIT_OK
    assert out.splitlines() == ["characteristic: 2", "solvable: true", "nilpotent: false"]
    code, out, _ = run(capsys, ["classify", g, "--char", "not2", "--json"])
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["characteristic"] == "not2" and d["solvable"] is False
    assert d["witness"]["rule"] == "not_isolated_vertices_and_loops"


def test_char_is_required_and_checked(graph_file, capsys):
    g = graph_file(LOOP_BEHIND_EDGE)
    for argv in (["classify", g], ["classify", g, "--char", "3"], ["decompose", g]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2
    capsys.readouterr()


def test_decompose(capsys, graph_file):
    g = graph_file(LOOP_BEHIND_EDGE)
    code, out, _ = run(capsys, ["decompose", g, "--char", "2"])
    assert code == EXIT_OK
    assert out.splitlines() == ["blocks:", "  M_2(K[x,x^-1])  at f", "exact: true"]
    code, out, err = run(capsys, ["decompose", g, "--char", "not2"])
    assert code == EXIT_VERDICT and out == ""
    assert err.startswith("error: not Lie solvable; witness") and '"vertex": "u"' in err
    code, out, _ = run(capsys, ["decompose", g, "--char", "not2", "--json"])
    assert code == EXIT_VERDICT and json.loads(out)["error"] == "not solvable"


def test_decompose_clock(capsys, graph_file):
    g = graph_file("vertex v [pendant_sinks=omega]\n")
    code, out, _ = run(capsys, ["decompose", g, "--char", "2"])
    assert code == EXIT_OK
    assert out.splitlines() == ["blocks:", "  omega x M_2(K)  at v:pendant_sinks", "quotient: K^(v)", "exact: false"]


def test_bad_graph_input(capsys, graph_file, tmp_path):
    g = graph_file("vertex a\nedge e : a -> b\n")
    code, _, err = run(capsys, ["classify", g, "--char", "2"])
    assert code == EXIT_INPUT and "line 2, column 15" in err
    code, _, err = run(capsys, ["classify", str(tmp_path / "missing.txt"), "--char", "2"])
    assert code == EXIT_INPUT and err.startswith("error:")


def test_out_file(capsys, graph_file, tmp_path):
    g = graph_file(LOOP_BEHIND_EDGE)
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, ["classify", g, "--char", "2", "--json", "--out", str(target)])
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["solvable"] is True


# -- novikov -----------------------------------------------------------------------------


def test_gen_novikov_round_trip(capsys, tmp_path):
    path = tmp_path / "n6.json"
    assert main(["gen-novikov", "6", "--out", str(path)]) == EXIT_OK
    alg = load_algebra(path.read_text())
    assert alg.dim == 4 and alg.field == QQ
    code, out, _ = run(capsys, ["gen-novikov", "5", "--low", "1", "--p", "3"])
    assert code == EXIT_OK and load_algebra(out).dim == 4


def test_gen_novikov_rejects_non_novikov(capsys):
    code, _, err = run(capsys, ["gen-novikov", "6", "--low", "0"])
    assert code == EXIT_INPUT and "left symmetry" in err
    code, _, err = run(capsys, ["gen-novikov", "6", "--p", "4"])
    assert code == EXIT_INPUT


def test_novikov_checks(capsys, tmp_path):
    path = tmp_path / "n6.json"
    main(["gen-novikov", "6", "--out", str(path)])
    code, out, _ = run(capsys, ["novikov", str(path), "--trials", "10"])
    assert code == EXIT_OK and out.splitlines()[-1] == "all checks hold"
    code, out, _ = run(capsys, ["novikov", str(path), "--checks", "cyclic-identities,chain-inclusion", "--json"])
    d = json.loads(out)
    assert code == EXIT_OK and [c["claim"] for c in d["checks"]] == ["cyclic-identities", "chain-inclusion"]
    code, _, err = run(capsys, ["novikov", str(path), "--checks", "bogus"])
    assert code == EXIT_INPUT and "unknown checks" in err


def test_novikov_rejects_non_novikov_input(capsys, tmp_path):
    path = tmp_path / "gl2.json"
    path.write_text(dump_algebra(gl_algebra(2, QQ)))
    code, out, err = run(capsys, ["novikov", str(path)])
    assert code == EXIT_INPUT and out == ""
    assert "not a Novikov algebra" in err and "basis triple [" in err
    path.write_text("{not json")
    code, _, _ = run(capsys, ["novikov", str(path)])
    assert code == EXIT_INPUT


# -- sweep and embeddings ------------------------------------------------------------------


def test_oracle_sweep_small(capsys):
    code, out, _ = run(capsys, ["oracle-sweep", "--max-vertices", "2", "--max-edges", "2", "--p", "2", "--p", "3"])
    assert code == EXIT_OK
    assert "mismatches: 0" in out and "invariant failures: 0" in out


def test_oracle_sweep_refuses_huge_bounds(capsys):
    code, _, err = run(capsys, ["oracle-sweep", "--max-vertices", "6", "--max-edges", "8"])
    assert code == EXIT_INPUT and "limit" in err
    code, _, _ = run(capsys, ["oracle-sweep", "--max-vertices", "1", "--max-edges", "1", "--p", "1"])
    assert code == EXIT_INPUT


def test_embeddings(capsys):
    code, out, _ = run(capsys, ["embeddings"])
    assert code == EXIT_OK and len(out.splitlines()) == 9
    assert all(line.split(": ")[1].startswith("pass (81 products)") for line in out.splitlines())
    code, out, _ = run(capsys, ["embeddings", "path", "--p", "0", "--p", "7", "--json"])
    d = json.loads(out)
    assert code == EXIT_OK and d["all_hold"] and len(d["results"]) == 2


def test_module_entry_point(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text(LOOP_BEHIND_EDGE)
    done = subprocess.run(
        [sys.executable, "-m", "lienil", "classify", str(g), "--char", "2", "--json"],
        capture_output=True,
        text=True,
    )
    assert done.returncode == 0 and json.loads(done.stdout)["solvable"] is True
