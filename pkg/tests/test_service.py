import json
import random

import pytest

from collabrep.config import Config
from collabrep.engine import ValidationRejected, replay
from collabrep.events import MalformedEvent
from collabrep.service import CorruptLog, EventLog, ReputationService, SnapshotStore, replay_log
from collabrep.service.log import encode_record

from .oracles import random_event_log
from .scenario import CASE_STUDIES, CASE_STUDY_LEDGER, records


def write_log(path, recs):
    log = EventLog(path, fsync=False)
    for record in recs:
        log.append(record)
    return log


def test_log_round_trip(tmp_path):
    recs = records(*CASE_STUDIES)
    log = write_log(tmp_path / "events.jsonl", recs)
    assert list(log.records()) == recs
    first = json.loads((tmp_path / "events.jsonl").read_text().splitlines()[0])
    assert set(first) == {"seq", "ts", "kind", "payload"}


def test_empty_log_replays_to_empty_state(tmp_path):
    assert replay_log(EventLog(tmp_path / "e.jsonl")).seq == 0


@pytest.mark.parametrize("mutate, line, fragment", [
    (lambda lines: lines[:3] + ["{not json"] + lines[4:], 4, "invalid JSON"),
    (lambda lines: lines[:2] + lines[3:], 3, "expected seq 3"),
    (lambda lines: lines[:5] + [""] + lines[5:], 6, "blank line"),
    (lambda lines: lines[:1] + [lines[1].replace('"UserRegistered"', '"Bogus"')] + lines[2:], 2, "unknown event kind"),
])
def test_corrupt_log_reports_line(tmp_path, mutate, line, fragment):
    path = tmp_path / "e.jsonl"
    write_log(path, records(*CASE_STUDIES))
    path.write_text("\n".join(mutate(path.read_text().splitlines())) + "\n")
    with pytest.raises(CorruptLog) as info:
        replay_log(EventLog(path))
    assert info.value.line == line and fragment in info.value.reason


def test_torn_final_record_detected(tmp_path):
    path = tmp_path / "e.jsonl"
    write_log(path, records(*CASE_STUDIES))
    text = path.read_text()
    path.write_text(text[:-10])
    with pytest.raises(CorruptLog, match="truncated"):
        replay_log(EventLog(path))


def test_service_appends_and_recovers(tmp_path):
    service = ReputationService(tmp_path / "e.jsonl", Config(snapshot_interval=5), fsync=False)
    for record in records(*CASE_STUDIES):
        stored = service.append(record.kind, record.to_dict()["payload"], record.ts)
        assert stored.seq == record.seq
    assert service.snapshots.available() == [5, 10, 15, 20]
    state = service.state
    reopened = ReputationService(tmp_path / "e.jsonl", Config(snapshot_interval=5), fsync=False)
    assert reopened.state == state
    assert {u: state.ledger.communities(u) for u in state.ledger.users()} == CASE_STUDY_LEDGER


def test_service_rejects_without_writing(tmp_path):
    path = tmp_path / "e.jsonl"
    service = ReputationService(path, fsync=False)
    service.append("UserRegistered", {"user": "admin", "super_admin": True})
    with pytest.raises(ValidationRejected):
        service.append("VoteCast", {"voter": "admin", "article": "x", "index": 0, "direction": "up"})
    with pytest.raises(MalformedEvent):
        service.append("VoteCast", {"voter": "admin"})
    assert len(path.read_text().splitlines()) == 1
    assert service.state.seq == 1


def test_service_assigns_timestamps(tmp_path):
    service = ReputationService(tmp_path / "e.jsonl", fsync=False)
    record = service.append("UserRegistered", {"user": "u"})
    assert record.ts.endswith("+00:00")


def test_snapshot_with_other_rules_ignored(tmp_path):
    path = tmp_path / "e.jsonl"
    write_log(path, records(*CASE_STUDIES))
    store = SnapshotStore(tmp_path / "snaps")
    store.save(replay(records(*CASE_STUDIES)), "some-other-rules")
    assert store.latest(Config().fingerprint()) is None
    assert replay_log(EventLog(path), Config(), store) == replay(records(*CASE_STUDIES))


def test_unreadable_snapshot_skipped(tmp_path):
    store = SnapshotStore(tmp_path / "snaps")
    state = replay(records(*CASE_STUDIES[:6]))
    store.save(state, Config().fingerprint())
    (tmp_path / "snaps" / "snapshot-000000000009.json").write_text("{")
    assert store.latest(Config().fingerprint()) == state


def test_snapshot_ahead_of_log_falls_back(tmp_path):
    path = tmp_path / "e.jsonl"
    recs = records(*CASE_STUDIES)
    write_log(path, recs[:10])
    store = SnapshotStore(tmp_path / "snaps")
    store.save(replay(recs), Config().fingerprint())
    assert replay_log(EventLog(path), Config(), store) == replay(recs[:10])


def test_crash_at_random_points_recovers_exactly(tmp_path):
    rng = random.Random(23)
    for trial in range(15):
        recs = random_event_log(rng, rng.randint(20, 150))
        crash = rng.randint(0, len(recs))
        directory = tmp_path / f"t{trial}"
        config = Config(snapshot_interval=rng.randint(1, 30))
        service = ReputationService(directory / "e.jsonl", config, fsync=False)
        for record in recs[:crash]:
            service.append(record.kind, record.to_dict()["payload"], record.ts)
        del service
        # restart, then keep appending the rest of the log
        service = ReputationService(directory / "e.jsonl", config, fsync=False)
        assert service.state == replay(recs[:crash])
        for record in recs[crash:]:
            service.append(record.kind, record.to_dict()["payload"], record.ts)
        assert service.state == replay(recs)
        assert replay_log(EventLog(directory / "e.jsonl")) == replay(recs)


def test_encoded_records_are_single_lines():
    for record in records(*CASE_STUDIES):
        assert "\n" not in encode_record(record)
