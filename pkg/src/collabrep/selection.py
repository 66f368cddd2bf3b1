"""Greedy selection of the versions that actually improved an article.

Starting from the draft, each later version is compared with the most recently
selected one. It is kept when it gained upvotes and the upvote gain outweighs
the absolute change in downvotes (improvement factor strictly above 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .model import InvalidHistory, SelectionSet, VersionHistory, VersionStats, validate_history

# The factor is an extended non-negative rational: a Fraction, or INFINITE when
# upvotes rose and downvotes did not move at all.
INFINITE = math.inf
ImprovementFactor = Union[Fraction, float]


def improvement_factor(
    candidate: VersionStats, baseline: VersionStats
) -> Optional[ImprovementFactor]:
    """Return (U_c - U_b) / |D_b - D_c|, ``INFINITE`` or ``None``.

    ``None`` means the factor is undefined because the candidate has no more
    upvotes than the baseline; selection never consults it in that case.
    """
    gain = candidate.upvotes - baseline.upvotes
    if gain <= 0:
        return None
    swing = abs(baseline.downvotes - candidate.downvotes)
    if swing == 0:
        return INFINITE
    return Fraction(gain, swing)


def improves(candidate: VersionStats, baseline: VersionStats) -> bool:
    factor = improvement_factor(candidate, baseline)
    return factor is not None and factor > 1


def format_factor(factor: Optional[ImprovementFactor]) -> str | None:
    if factor is None:
        return None
    if factor == INFINITE:
        return "inf"
    return str(factor)


def _checked(history: VersionHistory) -> VersionHistory:
    report = validate_history(history)
    if not report.ok:
        raise InvalidHistory(report)
    return history


def select_versions(history: VersionHistory) -> SelectionSet:
    versions = _checked(history).versions
    selected = [0]
    last = versions[0]
    for version in versions[1:]:
        if improves(version, last):
            selected.append(version.index)
            last = version
    return SelectionSet(tuple(selected))


def is_selected(history: VersionHistory, index: int) -> bool:
    if not 0 <= index < len(history):
        raise IndexError(f"version {index} out of range for {len(history)} versions")
    return index in select_versions(history)


@dataclass(frozen=True)
class SelectionStep:
    """One candidate's evaluation against the version selected before it."""

    index: int
    baseline: int
    factor: Optional[ImprovementFactor]
    selected: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "baseline": self.baseline,
            "factor": format_factor(self.factor),
            "selected": self.selected,
        }


def selection_trace(history: VersionHistory) -> list[SelectionStep]:
    """Replay the scan and record every comparison, for audit and review screens."""
    versions = _checked(history).versions
    steps = [SelectionStep(0, 0, None, True)]
    last = versions[0]
    for version in versions[1:]:
        factor = improvement_factor(version, last)
        chosen = factor is not None and factor > 1
        steps.append(SelectionStep(version.index, last.index, factor, chosen))
        if chosen:
            last = version
    return steps
