"""Deterministic engine state and the validated event transition.

``transition`` is pure: it either raises :class:`ValidationRejected` or returns
a new :class:`State`, leaving the old one untouched. Replaying a log is a fold
of ``transition`` from the empty state.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional

from .events import (
    CommunityCreated,
    CommunityJoined,
    EventRecord,
    PublishDecided,
    PublishRequested,
    ReportFiled,
    ReportResolved,
    RoleGranted,
    UserRegistered,
    VersionSaved,
    ViewRecorded,
    VoteCast,
    parse_ts,
)
from .grading import GradingRules, deltas_for_event
from .model import (
    DRAFT,
    ArticleState,
    CommunityId,
    ReputationLedger,
    Role,
    StateKind,
    UserId,
    VersionHistory,
    VersionStats,
)
from .review import recommend_publish


class ValidationRejected(ValueError):
    """The event is inconsistent with the current state and was not applied."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class PendingReport:
    reporter: UserId
    index: int
    reason: str
    prior: ArticleState

    def to_dict(self) -> dict:
        return {"reporter": self.reporter, "index": self.index,
                "reason": self.reason, "prior": self.prior.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping) -> PendingReport:
        return cls(data["reporter"], data["index"], data["reason"], ArticleState.from_dict(data["prior"]))


@dataclass(frozen=True)
class ReviewAudit:
    """Recommendation on record next to the publisher's actual decision."""

    seq: int
    index: int
    publisher: UserId
    recommended: str
    accepted: bool

    def to_dict(self) -> dict:
        return {"seq": self.seq, "index": self.index, "publisher": self.publisher,
                "recommended": self.recommended, "accepted": self.accepted}


@dataclass(frozen=True)
class ArticleRecord:
    history: VersionHistory
    # Set while a publication is live: who approved it and at which version.
    publisher: Optional[UserId] = None
    published_index: Optional[int] = None
    report: Optional[PendingReport] = None
    reviews: tuple[ReviewAudit, ...] = ()

    def to_dict(self) -> dict:
        return {
            "history": self.history.to_dict(),
            "publisher": self.publisher,
            "published_index": self.published_index,
            "report": self.report.to_dict() if self.report else None,
            "reviews": [r.to_dict() for r in self.reviews],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> ArticleRecord:
        return cls(
            history=VersionHistory.from_dict(data["history"]),
            publisher=data.get("publisher"),
            published_index=data.get("published_index"),
            report=PendingReport.from_dict(data["report"]) if data.get("report") else None,
            reviews=tuple(ReviewAudit(**r) for r in data.get("reviews", ())),
        )


@dataclass(frozen=True)
class State:
    seq: int = 0
    ts: Optional[str] = None
    users: frozenset = frozenset()
    super_admins: frozenset = frozenset()
    # community -> user -> roles held there
    members: Mapping[CommunityId, Mapping[UserId, frozenset]] = field(default_factory=dict)
    articles: Mapping[str, ArticleRecord] = field(default_factory=dict)
    ledger: ReputationLedger = field(default_factory=ReputationLedger)

    def roles(self, user: UserId, community: CommunityId) -> frozenset:
        return self.members.get(community, {}).get(user, frozenset())

    def is_member(self, user: UserId, community: CommunityId) -> bool:
        return user in self.members.get(community, {})

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "ts": self.ts,
            "users": sorted(self.users),
            "super_admins": sorted(self.super_admins),
            "members": {
                c: {u: sorted(r.value for r in roles) for u, roles in sorted(users.items())}
                for c, users in sorted(self.members.items())
            },
            "articles": {a: rec.to_dict() for a, rec in sorted(self.articles.items())},
            "ledger": self.ledger.to_list(),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> State:
        return cls(
            seq=data["seq"],
            ts=data["ts"],
            users=frozenset(data["users"]),
            super_admins=frozenset(data["super_admins"]),
            members={
                c: {u: frozenset(Role(r) for r in roles) for u, roles in users.items()}
                for c, users in data["members"].items()
            },
            articles={a: ArticleRecord.from_dict(rec) for a, rec in data["articles"].items()},
            ledger=ReputationLedger.from_list(data["ledger"]),
        )


EMPTY = State()


def _require(condition: bool, reason: str) -> None:
    if not condition:
        raise ValidationRejected(reason)


def _user(state: State, user: UserId) -> None:
    _require(user in state.users, f"unknown user {user!r}")


def _article(state: State, article: str) -> ArticleRecord:
    record = state.articles.get(article)
    _require(record is not None, "unknown article")
    return record


def _version(record: ArticleRecord, index: int) -> VersionStats:
    _require(0 <= index < len(record.history), f"unknown version {index}")
    return record.history[index]


def _can_see(state: State, user: UserId, record: ArticleRecord) -> bool:
    # Drafts are visible inside their community; published articles to everyone.
    return record.publisher is not None or state.is_member(user, record.history.community)


def _with_member(state: State, community: CommunityId, user: UserId, roles: frozenset) -> dict:
    members = dict(state.members)
    members[community] = {**members.get(community, {}), user: roles}
    return members


def _with_article(state: State, article: str, record: ArticleRecord) -> dict:
    return {**state.articles, article: record}


def _with_history(record: ArticleRecord, **changes) -> ArticleRecord:
    return replace(record, history=replace(record.history, **changes))


def _apply_structure(state: State, record: EventRecord) -> State:
    """Validate ``record.event`` against ``state`` and return the non-ledger changes."""
    event = record.event

    if isinstance(event, UserRegistered):
        _require(event.user not in state.users, f"user {event.user!r} already registered")
        if event.super_admin:
            _require(not state.super_admins,
                     "role: super-admin already exists; grant the role instead")
        return replace(
            state,
            users=state.users | {event.user},
            super_admins=state.super_admins | {event.user} if event.super_admin else state.super_admins,
        )

    if isinstance(event, CommunityCreated):
        _require(not event.community.startswith("@"), "community ids may not start with '@'")
        _require(event.community not in state.members, f"community {event.community!r} already exists")
        _user(state, event.creator)
        _user(state, event.approved_by)
        _require(event.approved_by in state.super_admins, "role: super-admin required")
        roles = frozenset({Role.COMMUNITY_ADMIN, Role.AUTHOR})
        return replace(state, members=_with_member(state, event.community, event.creator, roles))

    if isinstance(event, CommunityJoined):
        _user(state, event.user)
        _require(event.community in state.members, f"unknown community {event.community!r}")
        _require(not state.is_member(event.user, event.community), "already a member")
        return replace(
            state, members=_with_member(state, event.community, event.user, frozenset({Role.AUTHOR}))
        )

    if isinstance(event, RoleGranted):
        _user(state, event.granted_by)
        _user(state, event.user)
        role = Role(event.role)
        if role is Role.SUPER_ADMIN:
            _require(event.community is None, "super-admin is a platform role, not a community role")
            _require(event.granted_by in state.super_admins, "role: super-admin required")
            _require(event.user not in state.super_admins, "role already held")
            return replace(state, super_admins=state.super_admins | {event.user})
        _require(role is not Role.GROUP_ADMIN, "groups are not managed by this engine")
        _require(event.community is not None, "community required")
        _require(event.community in state.members, f"unknown community {event.community!r}")
        _require(state.is_member(event.user, event.community), "grantee is not a member")
        _require(
            Role.COMMUNITY_ADMIN in state.roles(event.granted_by, event.community)
            or event.granted_by in state.super_admins,
            "role: community-admin required",
        )
        held = state.roles(event.user, event.community)
        _require(role not in held, "role already held")
        return replace(
            state, members=_with_member(state, event.community, event.user, held | {role})
        )

    if isinstance(event, VersionSaved):
        _user(state, event.editor)
        current = state.articles.get(event.article)
        if current is None:
            _require(event.index == 0, "unknown article")
            _require(event.community is not None, "community required for a new article")
            _require(event.community in state.members, f"unknown community {event.community!r}")
            _require(state.is_member(event.editor, event.community), "editor is not a community member")
            history = VersionHistory(event.article, event.community, (VersionStats(0, event.editor),))
            return replace(state, articles=_with_article(state, event.article, ArticleRecord(history)))
        history = current.history
        _require(event.community in (None, history.community), "article belongs to another community")
        _require(state.is_member(event.editor, history.community), "editor is not a community member")
        _require(event.index == len(history), f"expected version index {len(history)}, got {event.index}")
        versions = history.versions + (VersionStats(event.index, event.editor),)
        return replace(
            state, articles=_with_article(state, event.article, _with_history(current, versions=versions))
        )

    if isinstance(event, ViewRecorded):
        current = _article(state, event.article)
        version = _version(current, event.index)
        updated = replace(version, views=version.views + event.count)
        return replace(state, articles=_with_article(
            state, event.article, replace(current, history=current.history.replace_version(updated))
        ))

    if isinstance(event, VoteCast):
        _user(state, event.voter)
        current = _article(state, event.article)
        version = _version(current, event.index)
        _require(_can_see(state, event.voter, current), "voter cannot see this article")
        _require(version.votes + 1 <= version.views,
                 f"votes {version.votes + 1} would exceed views {version.views}")
        if event.direction == "up":
            updated = replace(version, upvotes=version.upvotes + 1)
        else:
            updated = replace(version, downvotes=version.downvotes + 1)
        return replace(state, articles=_with_article(
            state, event.article, replace(current, history=current.history.replace_version(updated))
        ))

    if isinstance(event, ReportFiled):
        _user(state, event.reporter)
        current = _article(state, event.article)
        _version(current, event.index)
        _require(_can_see(state, event.reporter, current), "reporter cannot see this article")
        _require(bool(event.reason.strip()), "a reason is required")
        _require(current.report is None, "article already has a pending report")
        report = PendingReport(event.reporter, event.index, event.reason, current.history.state)
        updated = replace(_with_history(current, state=ArticleState(StateKind.REPORTED, event.index)),
                          report=report)
        return replace(state, articles=_with_article(state, event.article, updated))

    if isinstance(event, ReportResolved):
        _user(state, event.admin)
        current = _article(state, event.article)
        _require(Role.COMMUNITY_ADMIN in state.roles(event.admin, current.history.community),
                 "role: community-admin required")
        _require(current.report is not None, "no pending report")
        if event.approved:
            # An upheld report withdraws the article from publication.
            updated = replace(_with_history(current, state=DRAFT), report=None,
                              publisher=None, published_index=None)
        else:
            updated = replace(_with_history(current, state=current.report.prior), report=None)
        return replace(state, articles=_with_article(state, event.article, updated))

    if isinstance(event, PublishRequested):
        _user(state, event.user)
        current = _article(state, event.article)
        _version(current, event.index)
        _require(state.is_member(event.user, current.history.community), "requester is not a community member")
        _require(current.history.state.kind in (StateKind.DRAFT, StateKind.PUBLISHED),
                 f"article is {current.history.state.kind.value}")
        updated = _with_history(current, state=ArticleState(StateKind.PUBLISH_REQUESTED, event.index))
        return replace(state, articles=_with_article(state, event.article, updated))

    if isinstance(event, PublishDecided):
        _user(state, event.publisher)
        current = _article(state, event.article)
        _require(Role.PUBLISHER in state.roles(event.publisher, current.history.community),
                 "role: publisher required")
        _require(current.history.state == ArticleState(StateKind.PUBLISH_REQUESTED, event.index),
                 f"no publish request for version {event.index}")
        advice = recommend_publish(current.history, event.index)
        audit = current.reviews + (
            ReviewAudit(record.seq, event.index, event.publisher, advice.verdict.value, event.accepted),
        )
        if event.accepted:
            updated = replace(_with_history(current, state=ArticleState(StateKind.PUBLISHED, event.index)),
                              publisher=event.publisher, published_index=event.index, reviews=audit)
        else:
            # A declined request leaves any earlier publication standing.
            prior = DRAFT
            if current.publisher is not None:
                prior = ArticleState(StateKind.PUBLISHED, current.published_index)
            updated = replace(_with_history(current, state=prior), reviews=audit)
        return replace(state, articles=_with_article(state, event.article, updated))

    raise ValidationRejected(f"unsupported event {type(event).__name__}")


def transition(state: State, record: EventRecord, rules: GradingRules = GradingRules()) -> State:
    _require(record.seq == state.seq + 1, f"expected seq {state.seq + 1}, got {record.seq}")
    if state.ts is not None:
        _require(parse_ts(record.ts) >= parse_ts(state.ts), "timestamp earlier than previous event")
    else:
        parse_ts(record.ts)
    structural = _apply_structure(state, record)
    ledger = state.ledger.apply(deltas_for_event(record.event, state, rules))
    return replace(structural, seq=record.seq, ts=record.ts, ledger=ledger)


def replay(records: Iterable[EventRecord], rules: GradingRules = GradingRules(),
           start: State = EMPTY) -> State:
    state = start
    for record in records:
        state = transition(state, record, rules)
    return state
