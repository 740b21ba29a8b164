import io
import json
import os

import pytest

from windowmsf import checks
from windowmsf.main import main


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("SEED", "CHECK", "DUMP_DIR", "LOG_LEVEL"):
        monkeypatch.delenv(f"WINDOWMSF_{name}", raising=False)
    return tmp_path


def run_cli(monkeypatch, capsys, args, stream=""):
    monkeypatch.setattr("sys.stdin", io.StringIO(stream))
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_msf_queries(monkeypatch, capsys):
    stream = "insert 0 1 5 1 2 3 0 2 4\nquery weight\nquery edges\nquery pathmax 0 1\nquery components\ncheck\n"
    code, out, _err = run_cli(monkeypatch, capsys, ["run", "--structure", "msf", "--n", "3"], stream)
    assert code == 0
    assert out == "7\n1 2\n4 2\n1\nok\n"


def test_connectivity_stream(monkeypatch, capsys):
    stream = "insert 0 1 1 1 2 1\nquery connected 0 2\nexpire 1\nquery connected 0 2\ncheck\n"
    code, out, _err = run_cli(monkeypatch, capsys, ["run", "--structure", "conn", "--n", "3", "--check", "op"], stream)
    assert code == 0
    assert out == "true\nfalse\nok\n"


def test_amsf_weight(monkeypatch, capsys):
    args = ["run", "--structure", "amsf", "--n", "3", "--epsilon", "1", "--max-weight", "8"]
    code, out, _err = run_cli(monkeypatch, capsys, args, "insert 0 1 1 1 2 3 0 2 100\nquery weight\ncheck\n")
    assert code == 0
    assert out == "5.000000\nok\n"


def test_certificate_queries(monkeypatch, capsys):
    stream = "insert 0 1 1 0 1 1 0 1 1 1 2 1\nquery cert\nquery certsize\n"
    code, out, _err = run_cli(monkeypatch, capsys, ["run", "--structure", "kcert", "--n", "3", "--k", "2"], stream)
    assert code == 0
    assert out == "1 2 3\n3\n"


def test_other_structures(monkeypatch, capsys):
    for structure, stream, expected in [
        ("bipartite", "insert 0 1 1 1 2 1 2 0 1\nquery bipartite\n", "false\n"),
        ("cyclefree", "insert 0 1 1 1 2 1\nquery hascycle\n", "false\n"),
        ("conn-eager", "insert 0 1 1 2 3 1\nquery components\n", "2\n"),
        ("sparsifier", "insert 1 0 1\nquery sparsify\n", "0 1 1 1\n"),
    ]:
        code, out, _err = run_cli(monkeypatch, capsys, ["run", "--structure", structure, "--n", "4"], stream)
        assert (code, out) == (0, expected), structure


def test_input_and_output_files(monkeypatch, capsys, workdir):
    (workdir / "in.txt").write_text("insert 0 1 2\nquery weight\n")
    args = ["run", "--structure", "msf", "--n", "2", "--input", "in.txt", "--output", "out.txt"]
    code, out, _err = run_cli(monkeypatch, capsys, args)
    assert code == 0
    assert out == ""
    assert (workdir / "out.txt").read_text() == "2\n"


def test_check_never_skips(monkeypatch, capsys):
    code, out, _err = run_cli(monkeypatch, capsys, ["run", "--structure", "conn", "--n", "2", "--check", "never"],
                              "insert 0 1 1\ncheck\n")
    assert (code, out) == (0, "skipped\n")


@pytest.mark.parametrize("stream", [
    "insert 0 1\n",
    "remove 0 1 1\n",
    "insert 0 9 1\n",
    "query connected 0\n",
    "query weight\n",
])
def test_parse_errors_exit_one(monkeypatch, capsys, stream):
    code, _out, err = run_cli(monkeypatch, capsys, ["run", "--structure", "conn", "--n", "3"], stream)
    assert code == 1
    assert err.startswith("error: line 1:")


def test_expire_on_msf_is_a_parse_error(monkeypatch, capsys):
    code, _out, err = run_cli(monkeypatch, capsys, ["run", "--structure", "msf", "--n", "3"], "insert 0 1 1\nexpire 1\n")
    assert code == 1
    assert "insert-only" in err


def test_dotenv_settings_apply_without_touching_the_environment(monkeypatch, capsys, workdir):
    (workdir / ".env").write_text("WINDOWMSF_CHECK=never\n")
    code, out, _err = run_cli(monkeypatch, capsys, ["run", "--structure", "conn", "--n", "2"], "insert 0 1 1\ncheck\n")
    assert (code, out) == (0, "skipped\n")
    assert "WINDOWMSF_CHECK" not in os.environ


@pytest.mark.parametrize("args", [
    ["run", "--structure", "conn", "--n", "0"],
    ["run", "--structure", "tree", "--n", "3"],
    ["run", "--structure", "amsf", "--n", "3", "--epsilon", "-1"],
    ["run", "--structure", "sparsifier", "--n", "3", "--sparsifier-constants", "1,2"],
    ["run", "--structure", "conn", "--n", "3", "--input", "missing.txt"],
    ["fuzz", "--structure", "conn", "--n", "3", "--ops", "-1"],
    ["replay", "nothing-here"],
    ["frobnicate"],
])
def test_config_errors_exit_three(monkeypatch, capsys, args):
    code, _out, err = run_cli(monkeypatch, capsys, args)
    assert code == 3
    assert err.startswith("error:")


@pytest.mark.parametrize("structure", ["msf", "conn", "conn-eager", "bipartite", "amsf", "kcert", "cyclefree"])
def test_fuzz_passes(monkeypatch, capsys, structure):
    args = ["fuzz", "--structure", structure, "--n", "8", "--ops", "40", "--seed", "5", "--max-weight", "16"]
    code, out, _err = run_cli(monkeypatch, capsys, args)
    assert code == 0
    assert out == "ok 40 operations, 40 checks\n"


@pytest.mark.slow
@pytest.mark.parametrize("structure, n", [("conn", 40), ("conn-eager", 40), ("bipartite", 40), ("cyclefree", 12)])
def test_fuzz_two_thousand_operations(monkeypatch, capsys, structure, n):
    args = ["fuzz", "--structure", structure, "--n", str(n), "--ops", "2000", "--seed", "7"]
    code, out, _err = run_cli(monkeypatch, capsys, args)
    assert (code, out) == (0, "ok 2000 operations, 2000 checks\n")


def test_fuzz_sparsifier(monkeypatch, capsys):
    args = ["fuzz", "--structure", "sparsifier", "--n", "12", "--ops", "25", "--seed", "2",
            "--sparsifier-constants", "2,3,", "--sparsifier-k", "3"]
    code, out, _err = run_cli(monkeypatch, capsys, args)
    assert (code, out) == (0, "ok 25 operations, 25 checks\n")


def test_failure_is_dumped_and_replayed(monkeypatch, capsys, workdir):
    original = checks.CHECKERS["conn"]
    monkeypatch.setitem(checks.CHECKERS, "conn", lambda structure, snapshot, params: "forced")
    args = ["run", "--structure", "conn", "--n", "4", "--dump-dir", "dumps"]
    code, out, err = run_cli(monkeypatch, capsys, args, "insert 0 1 1\ncheck\n")
    assert code == 2
    assert out == "mismatch forced\n"
    assert "insert 0 1 1" in err

    dumped = json.loads((workdir / "dumps" / "conn-n4-seed0-line2.json").read_text())
    assert dumped["failure"] == "forced"
    assert dumped["commands"] == [{"kind": "insert", "edges": [[0, 1, 1]]}]

    code, out, _err = run_cli(monkeypatch, capsys, ["replay", "conn-n4-seed0-line2", "--dump-dir", "dumps"])
    assert (code, out) == (2, "mismatch forced\n")

    monkeypatch.setitem(checks.CHECKERS, "conn", original)
    code, out, _err = run_cli(monkeypatch, capsys, ["replay", "conn-n4-seed0-line2", "--dump-dir", "dumps"])
    assert (code, out) == (0, "ok\n")


def test_fuzz_failure_is_minimized(monkeypatch, capsys, workdir):
    monkeypatch.setitem(checks.CHECKERS, "kcert", lambda structure, snapshot, params: "forced")
    args = ["fuzz", "--structure", "kcert", "--n", "5", "--ops", "30", "--seed", "1", "--dump-dir", "dumps"]
    code, out, _err = run_cli(monkeypatch, capsys, args)
    assert code == 2
    assert out == "mismatch after 1 commands: forced\n"
    assert (workdir / "dumps" / "fuzz-kcert-n5-seed1.json").exists()


def test_fuzz_is_deterministic(monkeypatch, capsys, workdir):
    monkeypatch.setitem(checks.CHECKERS, "conn", lambda structure, snapshot, params:
                        "forced" if snapshot.next_toa > 10 else None)
    args = ["fuzz", "--structure", "conn", "--n", "6", "--ops", "30", "--seed", "9", "--dump-dir", "dumps"]
    first = run_cli(monkeypatch, capsys, args)
    dump = (workdir / "dumps" / "fuzz-conn-n6-seed9.json").read_text()
    second = run_cli(monkeypatch, capsys, args)
    assert first[:2] == second[:2]
    assert first[0] == 2
    assert (workdir / "dumps" / "fuzz-conn-n6-seed9.json").read_text() == dump
