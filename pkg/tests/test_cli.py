import json
import subprocess
import sys

import pytest

from collabrep.cli import main
from collabrep.service import EventLog

from .scenario import CASE_STUDIES, records

WORKED = {
    "article": "a1",
    "community": "c1",
    "publisher": "p",
    "versions": [
        {"index": 0, "editor": "e0", "upvotes": 4, "downvotes": 1, "views": 10},
        {"index": 1, "editor": "e1", "upvotes": 9, "downvotes": 2, "views": 20},
        {"index": 2, "editor": "e2", "upvotes": 10, "downvotes": 6, "views": 40},
        {"index": 3, "editor": "e3", "upvotes": 15, "downvotes": 3, "views": 100},
    ],
}


@pytest.fixture
def history_file(tmp_path):
    path = tmp_path / "history.json"
    path.write_text(json.dumps(WORKED))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_select(capsys, history_file):
    code, out = run(capsys, "select", "--history", history_file)
    assert code == 0
    assert out["selected"] == [0, 1, 3]


def test_allocate(capsys, history_file):
    code, out = run(capsys, "allocate", "--history", history_file, "--epsilon", "0.5")
    assert code == 0
    assert out["bank"]["total"] == 15_000
    assert out["shares"] == {"e0": 5_250, "e1": 5_250, "e3": 1_500}
    assert out["publisher"] == "p" and out["publisher_share"] == 3_000


def test_allocate_epsilon_changes_classes(capsys, history_file):
    code, out = run(capsys, "allocate", "--history", history_file, "--epsilon", "1/10", "--publisher", "q")
    assert out["classes"] == {"0": "Remaining", "1": "Remaining", "3": "Remaining"}
    assert out["shares"] == {"e0": 4_000, "e1": 4_000, "e3": 4_000}
    assert out["publisher"] == "q"


def test_allocate_reads_epsilon_from_config(capsys, history_file, tmp_path):
    cfg = tmp_path / "rules.ini"
    cfg.write_text("[allocation]\nepsilon = 0\n")
    code, out = run(capsys, "allocate", "--history", history_file, "--config", str(cfg))
    assert set(out["classes"].values()) == {"Remaining"}


def test_review(capsys, history_file):
    assert run(capsys, "review", "--history", history_file, "--index", "3")[1]["verdict"] == "Accept"
    assert run(capsys, "review", "--history", history_file, "--index", "2")[1]["verdict"] == "Reject"


def test_review_out_of_range(capsys, history_file):
    code, out = run(capsys, "review", "--history", history_file, "--index", "7")
    assert code == 1 and "out of range" in out["error"]


def test_inline_history(capsys):
    code, out = run(capsys, "select", "--history", json.dumps(WORKED))
    assert out["selected"] == [0, 1, 3]


def test_invalid_history_exit_code(capsys, tmp_path):
    bad = dict(WORKED, versions=[{"index": 0, "editor": "e", "upvotes": 7, "downvotes": 4, "views": 10}])
    code, out = run(capsys, "select", "--history", json.dumps(bad))
    assert code == 1
    assert out["violations"] == ["version 0: votes 11 > views 10"]


def test_unreadable_history(capsys, tmp_path):
    code, out = run(capsys, "select", "--history", str(tmp_path / "missing.json"))
    assert code == 1


def test_replay(capsys, tmp_path):
    log = EventLog(tmp_path / "e.jsonl", fsync=False)
    for record in records(*CASE_STUDIES):
        log.append(record)
    code, out = run(capsys, "replay", "--log", str(tmp_path / "e.jsonl"))
    assert code == 0
    assert out["seq"] == len(CASE_STUDIES)
    assert out["reputation"]["rey"] == {"system": 70_000, "communities": {"@system": 25_000, "c1": 45_000}}
    code, full = run(capsys, "replay", "--log", str(tmp_path / "e.jsonl"), "--full")
    assert full["seq"] == len(CASE_STUDIES) and "ledger" in full


def test_replay_corrupt_log(capsys, tmp_path):
    path = tmp_path / "e.jsonl"
    log = EventLog(path, fsync=False)
    for record in records(*CASE_STUDIES[:3]):
        log.append(record)
    with open(path, "a") as fh:
        fh.write("garbage\n")
    code, out = run(capsys, "replay", "--log", str(path))
    assert code == 1 and out["line"] == 4


def test_module_entry_point(history_file):
    proc = subprocess.run([sys.executable, "-m", "collabrep", "allocate", "--history", history_file],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["per_version"] == {"0": 5250, "1": 5250, "3": 1500}
