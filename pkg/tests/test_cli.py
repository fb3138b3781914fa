import json
import os
import subprocess
import sys

import pytest

from hendo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cells_for_2F4(capsys):
    code, out, _ = run(capsys, "cells", "--type", "2F4")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == "hendo-report/1"
    assert sum(len(c) for c in rep["left_cells"]) == 16
    code, out, _ = run(capsys, "group", "--type", "2F4")
    assert json.loads(out)["weights"] == [2, 4]


def test_cap_exceeded_on_an_infinite_group(capsys):
    code, out, err = run(capsys, "group", "--matrix", "1,3,3;3,1,3;3,3,1", "--cap", "10")
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "cap_exceeded"


def test_unknown_type_is_a_json_error(capsys):
    code, _, err = run(capsys, "klbasis", "--type", "Q9")
    assert code == 2
    assert set(json.loads(err)) == {"command", "error", "message"}


@pytest.mark.parametrize("argv", [["jring", "--type", "B2", "--samples", "500"],
                                  ["decomp", "--type", "A1"],
                                  ["endo", "--type", "A1"]])
def test_output_is_byte_identical_across_runs(capsys, argv):
    first = run(capsys, *argv, "--seed", "5")
    second = run(capsys, *argv, "--seed", "5")
    assert first == second and first[0] == 0


def test_decomp_A1(capsys):
    code, out, _ = run(capsys, "decomp", "--type", "A1")
    assert code == 0 and json.loads(out)["matrix"]["entries"] == [[1, 1]]
    code, out, _ = run(capsys, "decomp", "--type", "A1", "--format", "csv")
    assert code == 0 and "1,1" in out


def test_verify_reports_stable_ids(capsys):
    code, out, _ = run(capsys, "verify", "--type", "A1")
    rep = json.loads(out)
    ids = [r["id"] for r in rep["invariants"]]
    assert code == 0 and rep["all_pass"]
    assert len(ids) == len(set(ids))
    for prefix in ("ring.", "coxeter.", "hecke.", "cells.", "jring.", "hmodules.", "endo.", "decomp."):
        assert any(i.startswith(prefix) for i in ids)


def test_cache_directory_and_tampering(capsys, tmp_path):
    code, _, _ = run(capsys, "klbasis", "--type", "A2", "--cache", str(tmp_path))
    files = list(tmp_path.glob("kl-*.json"))
    assert code == 0 and len(files) == 1
    assert run(capsys, "klbasis", "--type", "A2", "--cache", str(tmp_path))[0] == 0
    data = json.loads(files[0].read_text())
    data["version"] = 0
    files[0].write_text(json.dumps(data))
    code, _, err = run(capsys, "klbasis", "--type", "A2", "--cache", str(tmp_path))
    assert code == 2 and json.loads(err)["error"] == "CacheError"
    assert run(capsys, "klbasis", "--type", "A2", "--cache", str(tmp_path), "--force")[0] == 0


def test_console_script_runs():
    env = dict(os.environ)
    env.pop("HENDO_CACHE", None)
    res = subprocess.run([sys.executable, "-m", "hendo.cli", "perm-filtration", "--type", "A2",
                          "--J", "0"], capture_output=True, text=True, env=env, timeout=120)
    assert res.returncode == 0, res.stderr
    assert json.loads(res.stdout)["command"] == "perm-filtration"
