from .log import CorruptLog, EventLog, SnapshotStore
from .runtime import ReputationService, replay_log

__all__ = [
    "CorruptLog",
    "EventLog",
    "SnapshotStore",
    "ReputationService",
    "replay_log",
]
