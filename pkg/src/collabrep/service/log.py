"""Append-only JSON-lines event log and on-disk snapshots."""

from __future__ import annotations

import json
import logging
import os
import re
from pathlib import Path
from typing import Iterator, Optional

from ..engine import State
from ..events import EventRecord, MalformedEvent

logger = logging.getLogger(__name__)


class CorruptLog(ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


def encode_record(record: EventRecord) -> str:
    return json.dumps(record.to_dict(), sort_keys=True, separators=(",", ":"))


def decode_record(text: str, line: int) -> EventRecord:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptLog(line, f"invalid JSON: {exc.msg}") from None
    try:
        return EventRecord.from_dict(data)
    except MalformedEvent as exc:
        raise CorruptLog(line, str(exc)) from None


class EventLog:
    """One JSON object per line; sequence numbers are dense from 1."""

    def __init__(self, path: str | os.PathLike, fsync: bool = True):
        self.path = Path(path)
        self.fsync = fsync
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.touch(exist_ok=True)

    def records(self) -> Iterator[EventRecord]:
        expected = 1
        with open(self.path, "r", encoding="utf-8", newline="\n") as fh:
            for line_no, text in enumerate(fh, start=1):
                if not text.endswith("\n"):
                    raise CorruptLog(line_no, "truncated record (no trailing newline)")
                if not text.strip():
                    raise CorruptLog(line_no, "blank line")
                record = decode_record(text, line_no)
                if record.seq != expected:
                    raise CorruptLog(line_no, f"expected seq {expected}, found {record.seq}")
                expected += 1
                yield record

    def append(self, record: EventRecord) -> None:
        with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(encode_record(record) + "\n")
            fh.flush()
            if self.fsync:
                os.fsync(fh.fileno())


_SNAPSHOT_NAME = re.compile(r"snapshot-(\d+)\.json$")


class SnapshotStore:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def save(self, state: State, fingerprint: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.directory / f"snapshot-{state.seq:012d}.json"
        tmp = target.with_suffix(".tmp")
        payload = {"seq": state.seq, "rules": fingerprint, "state": state.to_dict()}
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, target)
        return target

    def available(self) -> list[int]:
        if not self.directory.is_dir():
            return []
        seqs = []
        for path in self.directory.iterdir():
            match = _SNAPSHOT_NAME.match(path.name)
            if match:
                seqs.append(int(match.group(1)))
        return sorted(seqs)

    def load(self, seq: int, fingerprint: str) -> Optional[State]:
        path = self.directory / f"snapshot-{seq:012d}.json"
        try:
            with open(path, encoding="utf-8") as fh:
                payload = json.load(fh)
            if payload.get("rules") != fingerprint:
                logger.info("ignoring snapshot %s taken under different rules", path.name)
                return None
            state = State.from_dict(payload["state"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            logger.warning("ignoring unreadable snapshot %s: %s", path.name, exc)
            return None
        if state.seq != seq:
            logger.warning("ignoring snapshot %s: seq mismatch", path.name)
            return None
        return state

    def latest(self, fingerprint: str, max_seq: Optional[int] = None) -> Optional[State]:
        for seq in reversed(self.available()):
            if max_seq is not None and seq > max_seq:
                continue
            state = self.load(seq, fingerprint)
            if state is not None:
                return state
        return None
