"""Publish-request screening for publishers.

A request is worth accepting only when the requested version is one of the
versions the selection scan kept. The verdict is advice; the publisher decides.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .model import SelectionSet, StateKind, VersionHistory
from .selection import select_versions


class Verdict(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


class NotPublishRequested(ValueError):
    pass


@dataclass(frozen=True)
class ReviewRecommendation:
    verdict: Verdict
    selected_versions: SelectionSet
    requested_index: int

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "requested_index": self.requested_index,
            "selected_versions": list(self.selected_versions),
        }


def recommend_publish(history: VersionHistory, requested_index: int) -> ReviewRecommendation:
    if not 0 <= requested_index < len(history):
        raise IndexError(f"version {requested_index} out of range for {len(history)} versions")
    state = history.state
    if state.kind is not StateKind.PUBLISH_REQUESTED or state.index != requested_index:
        raise NotPublishRequested(
            f"article {history.article} is {state.kind.value}"
            + (f"({state.index})" if state.index is not None else "")
            + f", not PublishRequested({requested_index})"
        )
    selection = select_versions(history)
    verdict = Verdict.ACCEPT if requested_index in selection else Verdict.REJECT
    return ReviewRecommendation(verdict, selection, requested_index)
