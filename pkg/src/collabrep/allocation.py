"""Publication point bank and its split between contributors and the publisher.

Every selected version mints a fixed number of points into the bank. The bank
is cut into three pools: versions whose engagement ratio is close to one, the
publisher, and the remaining selected versions. Each version pool is shared
equally among its class; an empty class hands its pool to the other one so the
bank is always paid out in full.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .model import SelectionSet, UserId, VersionHistory, VersionStats, points
from .selection import select_versions

DEFAULT_EPSILON = Fraction(1, 2)


class EngagementClass(str, enum.Enum):
    CLOSE_TO_ONE = "CloseToOne"
    REMAINING = "Remaining"


@dataclass(frozen=True)
class AllocationRules:
    per_version: int = points(5)
    close_percent: int = 70
    publisher_percent: int = 20
    epsilon: Fraction = DEFAULT_EPSILON

    def __post_init__(self):
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.per_version < 0:
            raise ValueError("per_version must be non-negative")
        if not (0 <= self.close_percent and 0 <= self.publisher_percent
                and self.close_percent + self.publisher_percent <= 100):
            raise ValueError("pool percentages must be non-negative and sum to at most 100")

    @property
    def remaining_percent(self) -> int:
        return 100 - self.close_percent - self.publisher_percent


class SelectionMismatch(ValueError):
    pass


def engagement_ratio(version: VersionStats) -> Fraction:
    """(upvotes + downvotes) / views, or 0 for a version nobody has seen."""
    if version.votes > version.views:
        raise ValueError(f"version {version.index}: votes {version.votes} > views {version.views}")
    if version.views == 0:
        return Fraction(0)
    return Fraction(version.votes, version.views)


def classify_version(version: VersionStats, epsilon: Fraction = DEFAULT_EPSILON) -> EngagementClass:
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= 1:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    # The ratio never exceeds 1, so only the lower edge of the window matters.
    if engagement_ratio(version) >= 1 - epsilon:
        return EngagementClass.CLOSE_TO_ONE
    return EngagementClass.REMAINING


@dataclass(frozen=True)
class PointBank:
    total: int
    close_pool: int
    publisher_pool: int
    remaining_pool: int

    @classmethod
    def for_selection(cls, n_selected: int, rules: AllocationRules) -> PointBank:
        total = n_selected * rules.per_version
        close_pool = total * rules.close_percent // 100
        publisher_pool = total * rules.publisher_percent // 100
        return cls(total, close_pool, publisher_pool, total - close_pool - publisher_pool)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "close_to_one": self.close_pool,
            "publisher": self.publisher_pool,
            "remaining": self.remaining_pool,
        }


@dataclass(frozen=True)
class AllocationResult:
    bank: PointBank
    selection: SelectionSet
    publisher: UserId | None
    publisher_share: int
    shares: Mapping[UserId, int] = field(default_factory=dict)
    per_version: Mapping[int, int] = field(default_factory=dict)
    classes: Mapping[int, EngagementClass] = field(default_factory=dict)
    ratios: Mapping[int, Fraction] = field(default_factory=dict)

    @property
    def distributed(self) -> int:
        return sum(self.shares.values()) + self.publisher_share

    def to_dict(self) -> dict:
        return {
            "selection": list(self.selection),
            "bank": self.bank.to_dict(),
            "publisher": self.publisher,
            "publisher_share": self.publisher_share,
            "shares": dict(sorted(self.shares.items())),
            "per_version": {str(i): v for i, v in sorted(self.per_version.items())},
            "classes": {str(i): c.value for i, c in sorted(self.classes.items())},
            "ratios": {str(i): str(r) for i, r in sorted(self.ratios.items())},
        }


def split_equally(pool: int, indices: list[int]) -> dict[int, int]:
    """Equal integer split; leftover milli-points go one each to the lowest indices."""
    if not indices:
        return {}
    base, leftover = divmod(pool, len(indices))
    ordered = sorted(indices)
    return {index: base + (1 if rank < leftover else 0) for rank, index in enumerate(ordered)}


def allocate_bank(
    history: VersionHistory,
    selection: SelectionSet,
    publisher: UserId | None,
    epsilon: Fraction | None = None,
    rules: AllocationRules = AllocationRules(),
) -> AllocationResult:
    if epsilon is not None:
        rules = AllocationRules(
            rules.per_version, rules.close_percent, rules.publisher_percent, Fraction(epsilon)
        )
    expected = select_versions(history)
    if expected != selection:
        raise SelectionMismatch(
            f"selection {list(selection)} does not match recomputed {list(expected)}"
        )

    bank = PointBank.for_selection(len(selection), rules)
    classes = {i: classify_version(history[i], rules.epsilon) for i in selection}
    close = [i for i, c in classes.items() if c is EngagementClass.CLOSE_TO_ONE]
    rest = [i for i, c in classes.items() if c is EngagementClass.REMAINING]

    close_pool, rest_pool = bank.close_pool, bank.remaining_pool
    if not close:
        rest_pool += close_pool
        close_pool = 0
    elif not rest:
        close_pool += rest_pool
        rest_pool = 0

    per_version = split_equally(close_pool, close)
    per_version.update(split_equally(rest_pool, rest))

    shares: dict[UserId, int] = {}
    for index in sorted(per_version):
        editor = history[index].editor
        shares[editor] = shares.get(editor, 0) + per_version[index]

    return AllocationResult(
        bank=bank,
        selection=selection,
        publisher=publisher,
        publisher_share=bank.publisher_pool,
        shares=shares,
        per_version=per_version,
        classes=classes,
        ratios={i: engagement_ratio(history[i]) for i in selection},
    )
