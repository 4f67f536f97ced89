import json
import os
import subprocess
import sys

import pytest

from bn_atlas.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rho(capsys):
    assert run(capsys, "rho", "--g", "42", "--r", "6", "--d", "41") == (0, "-7\n", "")
    code, out, _ = run(capsys, "rho", "--g", "7", "--r", "2", "--d", "6", "--ram", "2,4,6", "--json")
    assert code == 0 and json.loads(out) == {"rho": -11}


def test_rho_domain_error(capsys):
    code, out, err = run(capsys, "rho", "--g", "1", "--r", "1", "--d", "1")
    assert code == 2 and out == ""
    assert err.startswith("error [")


def test_maximal(capsys):
    code, out, _ = run(capsys, "maximal", "--g", "12")
    assert code == 0
    assert "exception-case" not in out and out.count("holds") == 3
    code, out, _ = run(capsys, "maximal", "--g", "12", "--json")
    data = json.loads(out)
    assert [(L["r"], L["d"], L["rho"]) for L in data["loci"]] == [(1, 6, -2), (2, 9, -3), (3, 11, -4)]


def test_chain_default_mode(capsys):
    code, out, _ = run(capsys, "chain", "--g", "12", "--r", "2", "--d", "9")
    assert code == 0
    assert "FAIL" not in out and "rho sum -3 vs rho -3: equal" in out
    code, out, _ = run(capsys, "chain", "--g", "12", "--r", "2", "--d", "9", "--json")
    data = json.loads(out)
    assert [c["g"] for c in data["components"]] == [7, 5]
    assert all(data["report"].values())


def test_chain_search_negative_allowed(capsys):
    code, out, _ = run(capsys, "chain", "--g", "12", "--r", "2", "--d", "9", "--mode", "search", "--allowed", "-1,-2")
    assert code == 0 and "mode=search" in out


def test_chain_outside_domain_is_exit_two(capsys):
    code, _, err = run(capsys, "chain", "--g", "12", "--r", "1", "--d", "8")
    assert code == 2 and "error" in err


def test_dimcert(capsys):
    code, out, _ = run(capsys, "dimcert", "--g", "20", "--r", "4", "--d", "19")
    assert code == 0
    assert out.splitlines()[0].startswith("(20,4,19) rho=-5")
    assert "verified: pass" in out
    code, out, _ = run(capsys, "dimcert", "--g", "20", "--r", "4", "--d", "19", "--json")
    assert json.loads(out)["root"] == {"g": 20, "r": 4, "d": 19}


def test_prym(capsys):
    code, out, _ = run(capsys, "prym", "--r", "3", "--eps", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["params"]["g_tilde"] == 15
    assert any(c["kind"] == "prym-schwarz" and c["witness"]["e"] == 11 for c in data["certificates"])


def test_prym_boundary_pair_finding(capsys):
    code, out, err = run(capsys, "prym", "--r", "6", "--cor55")
    assert code == 3
    assert json.loads(out)["kind"] == "hypothesis-gap"
    assert json.loads(err)["finding"] == "hypothesis-gap"


def test_poset_writes_dot_and_json(capsys, tmp_path):
    dot, js = tmp_path / "g12.dot", tmp_path / "g12.json"
    code, out, _ = run(capsys, "poset", "--g", "12", "--dot", str(dot), "--json", str(js))
    assert code == 0 and "consistency: pass" in out
    text = dot.read_text()
    assert text.startswith('digraph "bn_g12" {')
    assert text.count("style=solid") == 3 and text.count("style=dashed") == 3
    graph = json.loads(js.read_text())
    assert graph["g"] == 12 and len(graph["edges"]) == 6


def test_scan_idempotent_and_summary(capsys, tmp_path):
    out_dir = tmp_path / "scan"
    code, out, _ = run(capsys, "scan", "--from", "10", "--to", "14", "--out", str(out_dir))
    assert code == 0 and out.count("computed") == 5
    before = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    code, out, _ = run(capsys, "scan", "--from", "10", "--to", "14", "--out", str(out_dir))
    assert code == 0 and out.count("verified") == 5 and "computed" not in out
    assert before == {p.name: p.read_bytes() for p in out_dir.iterdir()}
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["genera"]["12"] == {"nodes": 3, "edges": {"contained": 0, "not-contained": 3, "unknown": 3}}


def test_scan_jobs_match_serial(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "scan", "--from", "3", "--to", "12", "--out", str(a))[0] == 0
    assert run(capsys, "scan", "--from", "3", "--to", "12", "--out", str(b), "--jobs", "2")[0] == 0
    for p in a.iterdir():
        assert p.read_bytes() == (b / p.name).read_bytes()


def test_scan_detects_tampered_file(capsys, tmp_path):
    out_dir = tmp_path / "scan"
    run(capsys, "scan", "--from", "12", "--to", "13", "--out", str(out_dir))
    path = out_dir / "g-12.json"
    data = json.loads(path.read_text())
    for e in data["graph"]["edges"]:
        if e["certificates"]:
            e["certificates"][0]["witness"]["rho_container"] -= 1
            break
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "scan", "--from", "12", "--to", "13", "--out", str(out_dir))
    assert code == 4 and "g-12.json" in err


def test_scan_detects_garbage_file(capsys, tmp_path):
    out_dir = tmp_path / "scan"
    out_dir.mkdir()
    (out_dir / "g-5.json").write_text("{not json")
    code, _, err = run(capsys, "scan", "--from", "5", "--to", "5", "--out", str(out_dir))
    assert code == 4 and "unreadable" in err


@pytest.mark.skipif(hasattr(os, "geteuid") and os.geteuid() == 0, reason="root ignores directory permissions")
def test_scan_unwritable_directory(capsys, tmp_path):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    try:
        code, _, err = run(capsys, "scan", "--from", "5", "--to", "6", "--out", str(locked))
    finally:
        locked.chmod(0o700)
    assert code == 2 and "cannot write" in err


def test_scan_output_path_is_a_file(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "scan", "--from", "5", "--to", "6", "--out", str(blocker / "sub"))
    assert code == 2 and "cannot write" in err


def test_scan_bad_range(capsys, tmp_path):
    code, _, err = run(capsys, "scan", "--from", "9", "--to", "4", "--out", str(tmp_path))
    assert code == 2 and "--from" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bn_atlas", "rho", "--g", "4", "--r", "1", "--d", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "-2"
