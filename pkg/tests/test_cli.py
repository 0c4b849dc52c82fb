import csv
import json
import os
import subprocess
import sys

import pytest

from dualpairs.cli import RunConfig, UsageError, main, run_tasks, workers_from_env


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_relations_l1(capsys):
    code, out = run(["relations", "--l", "1", "--emax", "6"], capsys)
    assert code == 0
    assert "FAIL" not in out.out
    assert "PASS locality_J_2_2" in out.out


def test_usage_errors(capsys):
    assert run(["relations", "--l", "0"], capsys)[0] == 2
    assert run(["relations", "--emax", "-1"], capsys)[0] == 2
    assert run(["duality", "--group", "sp"], capsys)[0] == 2
    assert run(["duality", "--group", "o1", "--l", "2"], capsys)[0] == 2
    assert run(["characters", "--id", "nope"], capsys)[0] == 2
    assert run(["labels", "--group", "gl"], capsys)[0] == 2
    assert run(["labels", "--group", "o2l", "--lambda", "1"], capsys)[0] == 2
    assert run([], capsys)[0] == 2


def test_relations_json(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, _ = run(["relations", "--l", "2", "--emax", "4", "--json", str(path)], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["schema"] == 1 and doc["passed"] is True
    assert doc["params"] == {"l": 2, "neutral": False, "emax2": 8}
    assert doc["mode_conventions"]
    for suite in doc["suites"]:
        assert set(suite) >= {"suite", "params", "instances", "failures", "task"}


def test_reports_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["duality", "--group", "o2l", "--l", "1", "--emax", "4", "--json", str(p)],
                   capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_duality_commands(tmp_path, capsys):
    code, out = run(["duality", "--group", "gl", "--l", "1", "--emax", "3"], capsys)
    assert code == 0 and "5 sectors, all matched" in out.out
    path = tmp_path / "o2.json"
    code, _ = run(["duality", "--group", "o2l", "--l", "1", "--emax", "4", "--json", str(path)],
                  capsys)
    doc = json.loads(path.read_text())
    names = sorted((tuple(s["lambda"]), s["bar"], s["det"]) for s in doc["sectors"])
    assert code == 0 and names == [((0,), False, False), ((0,), False, True),
                                   ((1,), True, False), ((2,), True, False)]
    assert doc["virasoro_content"]["failures"] == []
    path = tmp_path / "o1.json"
    code, _ = run(["duality", "--group", "o1", "--emax", "4", "--json", str(path)], capsys)
    doc = json.loads(path.read_text())
    assert code == 0
    det = [s for s in doc["sectors"] if s["det"]][0]
    assert det["exponent_set"] == {"1": "1"} and det["labels"][0] == [1, "1/2"]


def test_characters(tmp_path, capsys):
    assert run(["characters", "--id", "gauss", "--order", "20"], capsys)[0] == 0
    path = tmp_path / "v.csv"
    code, _ = run(["characters", "--id", "v1plus", "--order", "16", "--csv", str(path)], capsys)
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert [int(r["lhs"]) for r in rows[:5]] == [1, 0, 1, 1, 3]
    assert all(r["lhs"] == r["rhs"] for r in rows)
    path = tmp_path / "bf.json"
    code, _ = run(["characters", "--id", "boson-fermion", "--order", "8", "--json", str(path)],
                  capsys)
    doc = json.loads(path.read_text())
    assert code == 0 and doc["charge0_fock_dims"] == doc["partitions"] == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert run(["characters", "--id", "virasoro-sum", "--order", "8"], capsys)[0] == 0


def test_failure_exit_code_emits_witness(monkeypatch, capsys):
    import dualpairs.cli as cli
    from dualpairs.qseries import QSeries

    def broken(cid, order):
        return QSeries.one(2 * order), QSeries({0: 1, 2: 1}, 2 * order)

    monkeypatch.setattr(cli, "character_sides", broken)
    code, out = run(["characters", "--id", "gauss", "--order", "3"], capsys)
    assert code == 1
    doc = json.loads(out.out[out.out.index("{"):])
    assert doc["witness"] == [{"exponent_numerator": 2, "exponent_denominator": 2,
                               "lhs": 0, "rhs": 1}]


def test_labels(capsys, tmp_path):
    path = tmp_path / "lab.json"
    code, out = run(["labels", "--group", "gl", "--lambda", "2,1", "--json", str(path)], capsys)
    doc = json.loads(path.read_text())
    assert code == 0 and doc["match"] is True and doc["decoded"] == doc["predicted"]
    code, out = run(["labels", "--group", "o2l", "--lambda", "0", "--det"], capsys)
    assert code == 0 and "match" in out.out
    code, out = run(["labels", "--group", "o2l", "--lambda", "3", "--bar", "--emax", "1"], capsys)
    assert code == 0 and "no highest weight vector" in out.out


def test_workers_env():
    assert workers_from_env({"DUALPAIRS_WORKERS": "3"}) == 3
    assert workers_from_env({}) >= 1
    with pytest.raises(UsageError):
        workers_from_env({"DUALPAIRS_WORKERS": "many"})
    with pytest.raises(UsageError):
        RunConfig("relations", workers=0)


def test_process_pool_preserves_order():
    from dualpairs.qseries import partition_count

    tasks = [(str(n), partition_count, {"n": n}) for n in (30, 1, 12)]
    assert run_tasks(tasks, 2) == [5604, 1, 77]


def test_console_script_subprocess(tmp_path):
    env = dict(os.environ, DUALPAIRS_WORKERS="2")
    p = subprocess.run([sys.executable, "-m", "dualpairs.cli", "relations", "--l", "1", "--emax",
                        "3", "--json", str(tmp_path / "r.json")], capture_output=True, text=True,
                       env=env)
    assert p.returncode == 0, p.stderr
    assert json.loads((tmp_path / "r.json").read_text())["passed"] is True
    p = subprocess.run([sys.executable, "-m", "dualpairs.cli", "relations", "--l", "0"],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 2
