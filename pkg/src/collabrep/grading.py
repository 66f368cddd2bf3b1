"""Reputation deltas produced by each platform event."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .allocation import AllocationRules, allocate_bank
from .events import (
    CommunityCreated,
    CommunityJoined,
    Event,
    PublishDecided,
    ReportResolved,
    UserRegistered,
    VersionSaved,
    VoteCast,
)
from .model import SYSTEM_SCOPE, Delta, ReputationLedger, points
from .selection import select_versions

if TYPE_CHECKING:
    from .engine import State


@dataclass(frozen=True)
class GradingRules:
    """Point values in milli-points."""

    registration: int = points(25)
    community_created: int = points(25)
    community_joined: int = points(25)
    version_saved: int = points(2)
    vote: int = points(2)
    report_upheld_reporter: int = points(5)
    report_upheld_editor: int = points(-5)
    report_upheld_publisher: int = points(-5)
    report_rejected_reporter: int = points(-5)
    allocation: AllocationRules = field(default_factory=AllocationRules)


def deltas_for_event(event: Event, state: State, rules: GradingRules = GradingRules()) -> list[Delta]:
    """Deltas mandated by ``event`` given the engine state just before it."""
    if isinstance(event, UserRegistered):
        return [Delta(event.user, SYSTEM_SCOPE, rules.registration, "starting_reputation")]

    if isinstance(event, CommunityCreated):
        return [Delta(event.creator, event.community, rules.community_created, "community_created")]

    if isinstance(event, CommunityJoined):
        return [Delta(event.user, event.community, rules.community_joined, "community_joined")]

    if isinstance(event, VersionSaved):
        record = state.articles.get(event.article)
        community = record.history.community if record else event.community
        return [Delta(event.editor, community, rules.version_saved, "version_saved")]

    if isinstance(event, VoteCast):
        history = state.articles[event.article].history
        editor = history[event.index].editor
        if event.direction == "up":
            return [Delta(editor, history.community, rules.vote, "upvote_received")]
        return [Delta(editor, history.community, -rules.vote, "downvote_received")]

    if isinstance(event, ReportResolved):
        record = state.articles[event.article]
        report = record.report
        community = record.history.community
        if not event.approved:
            return [Delta(report.reporter, community, rules.report_rejected_reporter, "report_rejected")]
        deltas = [
            Delta(report.reporter, community, rules.report_upheld_reporter, "report_upheld"),
            Delta(record.history[report.index].editor, community,
                  rules.report_upheld_editor, "version_reported"),
        ]
        # Only a publisher who actually approved the article is penalised.
        if record.publisher is not None:
            deltas.append(Delta(record.publisher, community,
                                rules.report_upheld_publisher, "published_version_reported"))
        return deltas

    if isinstance(event, PublishDecided):
        if not event.accepted:
            return []
        history = state.articles[event.article].history.prefix(event.index + 1)
        result = allocate_bank(
            history, select_versions(history), event.publisher, rules=rules.allocation
        )
        deltas = [
            Delta(user, history.community, amount, "publication_bank")
            for user, amount in sorted(result.shares.items())
        ]
        deltas.append(Delta(event.publisher, history.community,
                            result.publisher_share, "publication_bank_publisher"))
        return deltas

    return []


def apply_event(
    ledger: ReputationLedger, event: Event, state: State, rules: GradingRules = GradingRules()
) -> ReputationLedger:
    return ledger.apply(deltas_for_event(event, state, rules))
