"""Platform events and their JSON envelope ``{seq, ts, kind, payload}``."""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Mapping, Optional

from .model import ArticleId, CommunityId, Role, UserId


class MalformedEvent(ValueError):
    """The event does not match its schema. ``field`` names the offending key."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


@dataclass(frozen=True)
class UserRegistered:
    user: UserId
    super_admin: bool = False


@dataclass(frozen=True)
class CommunityCreated:
    community: CommunityId
    creator: UserId
    approved_by: UserId


@dataclass(frozen=True)
class CommunityJoined:
    user: UserId
    community: CommunityId


@dataclass(frozen=True)
class RoleGranted:
    granted_by: UserId
    user: UserId
    role: str
    community: Optional[CommunityId] = None


@dataclass(frozen=True)
class VersionSaved:
    editor: UserId
    article: ArticleId
    index: int
    community: Optional[CommunityId] = None


@dataclass(frozen=True)
class VoteCast:
    voter: UserId
    article: ArticleId
    index: int
    direction: str


@dataclass(frozen=True)
class ViewRecorded:
    article: ArticleId
    index: int
    count: int = 1


@dataclass(frozen=True)
class ReportFiled:
    reporter: UserId
    article: ArticleId
    index: int
    reason: str


@dataclass(frozen=True)
class ReportResolved:
    admin: UserId
    article: ArticleId
    approved: bool


@dataclass(frozen=True)
class PublishRequested:
    user: UserId
    article: ArticleId
    index: int


@dataclass(frozen=True)
class PublishDecided:
    publisher: UserId
    article: ArticleId
    index: int
    accepted: bool


EVENT_TYPES = {
    cls.__name__: cls
    for cls in (
        UserRegistered,
        CommunityCreated,
        CommunityJoined,
        RoleGranted,
        VersionSaved,
        VoteCast,
        ViewRecorded,
        ReportFiled,
        ReportResolved,
        PublishRequested,
        PublishDecided,
    )
}

Event = typing.Union[tuple(EVENT_TYPES.values())]

_ID_FIELDS = {
    "user", "creator", "approved_by", "granted_by", "editor", "voter",
    "reporter", "admin", "publisher", "article", "community",
}


def _check(name: str, value, annotation: str):
    optional = annotation.startswith("Optional[")
    base = annotation[len("Optional["):-1] if optional else annotation
    key = f"payload.{name}"
    if value is None:
        if optional:
            return None
        raise MalformedEvent(key, "required")
    if base == "bool":
        if not isinstance(value, bool):
            raise MalformedEvent(key, "expected boolean")
    elif base == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise MalformedEvent(key, "expected integer")
        if value < 0:
            raise MalformedEvent(key, "must be non-negative")
    else:
        if not isinstance(value, str):
            raise MalformedEvent(key, "expected string")
        if name in _ID_FIELDS and not value:
            raise MalformedEvent(key, "identifier must be non-empty")
    return value


def event_from_dict(kind: str, payload: Mapping) -> Event:
    cls = EVENT_TYPES.get(kind)
    if cls is None:
        raise MalformedEvent("kind", f"unknown event kind {kind!r}")
    if not isinstance(payload, Mapping):
        raise MalformedEvent("payload", "expected object")
    known = {f.name for f in dataclasses.fields(cls)}
    extra = sorted(set(payload) - known)
    if extra:
        raise MalformedEvent(f"payload.{extra[0]}", "unexpected field")
    values = {}
    for f in dataclasses.fields(cls):
        has_default = f.default is not dataclasses.MISSING
        if f.name not in payload and not has_default:
            raise MalformedEvent(f"payload.{f.name}", "required")
        raw = payload.get(f.name, f.default if has_default else None)
        values[f.name] = _check(f.name, raw, f.type)
    event = cls(**values)
    if isinstance(event, VoteCast) and event.direction not in ("up", "down"):
        raise MalformedEvent("payload.direction", "must be 'up' or 'down'")
    if isinstance(event, RoleGranted) and event.role not in {r.value for r in Role}:
        raise MalformedEvent("payload.role", f"unknown role {event.role!r}")
    if isinstance(event, ViewRecorded) and event.count < 1:
        raise MalformedEvent("payload.count", "must be at least 1")
    return event


def event_kind(event: Event) -> str:
    return type(event).__name__


def event_payload(event: Event) -> dict:
    return dataclasses.asdict(event)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def parse_ts(ts: str) -> datetime:
    try:
        moment = datetime.fromisoformat(ts)
    except (TypeError, ValueError):
        raise MalformedEvent("ts", f"not an ISO-8601 timestamp: {ts!r}") from None
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment


@dataclass(frozen=True)
class EventRecord:
    seq: int
    ts: str
    event: Event

    @property
    def kind(self) -> str:
        return event_kind(self.event)

    def to_dict(self) -> dict:
        return {"seq": self.seq, "ts": self.ts, "kind": self.kind, "payload": event_payload(self.event)}

    @classmethod
    def from_dict(cls, data: Mapping) -> EventRecord:
        if not isinstance(data, Mapping):
            raise MalformedEvent("record", "expected object")
        seq = data.get("seq")
        if isinstance(seq, bool) or not isinstance(seq, int) or seq < 1:
            raise MalformedEvent("seq", "expected positive integer")
        ts = data.get("ts")
        if not isinstance(ts, str):
            raise MalformedEvent("ts", "expected string")
        parse_ts(ts)
        kind = data.get("kind")
        if not isinstance(kind, str):
            raise MalformedEvent("kind", "expected string")
        return cls(seq, ts, event_from_dict(kind, data.get("payload", {})))
