"""Read-only JSON views over an engine state snapshot."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..allocation import AllocationRules, allocate_bank
from ..engine import ArticleRecord, State
from ..model import StateKind, system_reputation
from ..review import NotPublishRequested, recommend_publish
from ..selection import select_versions, selection_trace


class NotFound(LookupError):
    pass


class Conflict(ValueError):
    pass


def _article(state: State, article: str) -> ArticleRecord:
    record = state.articles.get(article)
    if record is None:
        raise NotFound(f"unknown article {article!r}")
    return record


def user_reputation(state: State, user: str) -> dict:
    if user not in state.users:
        raise NotFound(f"unknown user {user!r}")
    return {
        "user": user,
        "system": system_reputation(state.ledger, user),
        "communities": dict(sorted(state.ledger.communities(user).items())),
    }


def community_reputation(state: State, community: str, user: str) -> dict:
    if community not in state.members:
        raise NotFound(f"unknown community {community!r}")
    if user not in state.users:
        raise NotFound(f"unknown user {user!r}")
    return {"user": user, "community": community, "reputation": state.ledger.get(user, community)}


def article(state: State, article_id: str) -> dict:
    return {"article": article_id, **_article(state, article_id).to_dict()}


def article_selection(state: State, article_id: str) -> dict:
    history = _article(state, article_id).history
    return {
        "article": article_id,
        "selected": list(select_versions(history)),
        "trace": [step.to_dict() for step in selection_trace(history)],
    }


def allocation_preview(state: State, article_id: str, rules: AllocationRules,
                       publisher: Optional[str] = None,
                       epsilon: Optional[Fraction] = None) -> dict:
    """The allocation a publication would produce right now.

    A pending request is previewed at its requested version; otherwise the
    latest version is assumed.
    """
    history = _article(state, article_id).history
    hstate = history.state
    upto = hstate.index if hstate.kind is StateKind.PUBLISH_REQUESTED else len(history) - 1
    prefix = history.prefix(upto + 1)
    result = allocate_bank(prefix, select_versions(prefix), publisher, epsilon, rules)
    return {"article": article_id, "version": upto, **result.to_dict()}


def article_review(state: State, article_id: str) -> dict:
    history = _article(state, article_id).history
    if history.state.kind is not StateKind.PUBLISH_REQUESTED:
        raise Conflict(f"article {article_id!r} has no pending publish request")
    try:
        advice = recommend_publish(history, history.state.index)
    except NotPublishRequested as exc:
        raise Conflict(str(exc)) from None
    return {"article": article_id, **advice.to_dict()}
