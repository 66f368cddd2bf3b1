"""The running service: one serialized writer, lock-free readers.

Readers grab ``service.state``, an immutable :class:`~collabrep.engine.State`.
The writer validates, appends to the log, then swaps the reference, so an
acknowledged event is visible to every read that starts afterwards.
"""

from __future__ import annotations

import logging
import os
import threading
from pathlib import Path
from typing import Mapping, Optional

from ..config import Config
from ..engine import EMPTY, State, transition
from ..events import EventRecord, event_from_dict, parse_ts, utc_now
from .log import EventLog, SnapshotStore

logger = logging.getLogger(__name__)


def replay_log(log: EventLog, config: Config = Config(),
               snapshots: Optional[SnapshotStore] = None) -> State:
    """Rebuild state from the log, starting at the newest usable snapshot if given."""
    start = EMPTY
    if snapshots is not None:
        start = snapshots.latest(config.fingerprint()) or EMPTY
    state = start
    log_end = 0
    for record in log.records():
        log_end = record.seq
        if record.seq <= start.seq:
            continue
        state = transition(state, record, config.rules)
    if log_end < start.seq:
        # Snapshot is ahead of the log (log lost its tail); trust the log.
        logger.warning("snapshot seq %d beyond log end %d; replaying from scratch", start.seq, log_end)
        return replay_log(log, config, None)
    return state


class ReputationService:
    def __init__(self, log_path: str | os.PathLike, config: Config = Config(),
                 snapshot_dir: str | os.PathLike | None = None, fsync: bool = True):
        self.config = config
        self.log = EventLog(log_path, fsync=fsync)
        if snapshot_dir is None:
            snapshot_dir = Path(str(log_path) + ".snapshots")
        self.snapshots = SnapshotStore(snapshot_dir)
        self._write_lock = threading.Lock()
        self._state = replay_log(self.log, config, self.snapshots)
        logger.info("recovered state at seq %d", self._state.seq)

    @property
    def state(self) -> State:
        return self._state

    def append(self, kind: str, payload: Mapping, ts: Optional[str] = None) -> EventRecord:
        """Validate and durably append one event; returns the stored record.

        Raises ``MalformedEvent`` for schema errors and ``ValidationRejected``
        when the event does not fit the current state. Nothing is written then.
        """
        event = event_from_dict(kind, payload)
        if ts is not None:
            parse_ts(ts)
        with self._write_lock:
            current = self._state
            record = EventRecord(current.seq + 1, ts or utc_now(), event)
            updated = transition(current, record, self.config.rules)
            self.log.append(record)
            self._state = updated
            if updated.seq % self.config.snapshot_interval == 0:
                self.snapshots.save(updated, self.config.fingerprint())
        return record

    def snapshot(self) -> Path:
        with self._write_lock:
            return self.snapshots.save(self._state, self.config.fingerprint())
