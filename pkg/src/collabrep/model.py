"""Core value types: versions, article histories, roles and the reputation ledger.

Points are carried as integer milli-points (1 point == 1000) everywhere so that
sums and splits stay exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

UserId = str
CommunityId = str
GroupId = str
ArticleId = str

MILLI = 1000

# Ledger scope holding platform-wide credit (starting reputation). Community ids
# may not start with "@", so this can never collide with a real community.
SYSTEM_SCOPE: CommunityId = "@system"


def points(value: int | float | str) -> int:
    """Convert whole points to milli-points, refusing sub-milli precision."""
    milli = Fraction(str(value)) * MILLI
    if milli.denominator != 1:
        raise ValueError(f"{value!r} points is not a whole number of milli-points")
    return int(milli)


class Role(str, enum.Enum):
    SUPER_ADMIN = "SuperAdmin"
    COMMUNITY_ADMIN = "CommunityAdmin"
    GROUP_ADMIN = "GroupAdmin"
    PUBLISHER = "Publisher"
    AUTHOR = "Author"


@dataclass(frozen=True)
class VersionStats:
    index: int
    editor: UserId
    upvotes: int = 0
    downvotes: int = 0
    views: int = 0

    @property
    def votes(self) -> int:
        return self.upvotes + self.downvotes

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "editor": self.editor,
            "upvotes": self.upvotes,
            "downvotes": self.downvotes,
            "views": self.views,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> VersionStats:
        return cls(
            index=int(data["index"]),
            editor=str(data["editor"]),
            upvotes=int(data.get("upvotes", 0)),
            downvotes=int(data.get("downvotes", 0)),
            views=int(data.get("views", 0)),
        )


class StateKind(str, enum.Enum):
    DRAFT = "Draft"
    PUBLISH_REQUESTED = "PublishRequested"
    PUBLISHED = "Published"
    REPORTED = "Reported"


@dataclass(frozen=True)
class ArticleState:
    kind: StateKind = StateKind.DRAFT
    index: int | None = None

    def __post_init__(self):
        if (self.kind is StateKind.DRAFT) != (self.index is None):
            raise ValueError(f"state {self.kind.value} with index {self.index!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "index": self.index}

    @classmethod
    def from_dict(cls, data: Mapping | str | None) -> ArticleState:
        if data is None:
            return cls()
        if isinstance(data, str):
            return cls(StateKind(data))
        index = data.get("index")
        return cls(StateKind(data["kind"]), None if index is None else int(index))


DRAFT = ArticleState()


@dataclass(frozen=True)
class VersionHistory:
    """Ordered versions x_0..x_n of one article plus its publication state."""

    article: ArticleId
    community: CommunityId
    versions: tuple[VersionStats, ...]
    state: ArticleState = DRAFT

    def __len__(self) -> int:
        return len(self.versions)

    def __getitem__(self, index: int) -> VersionStats:
        return self.versions[index]

    def prefix(self, length: int) -> VersionHistory:
        return VersionHistory(self.article, self.community, self.versions[:length], DRAFT)

    def replace_version(self, stats: VersionStats) -> VersionHistory:
        versions = list(self.versions)
        versions[stats.index] = stats
        return VersionHistory(self.article, self.community, tuple(versions), self.state)

    def to_dict(self) -> dict:
        return {
            "article": self.article,
            "community": self.community,
            "state": self.state.to_dict(),
            "versions": [v.to_dict() for v in self.versions],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> VersionHistory:
        return cls(
            article=str(data.get("article", "article")),
            community=str(data.get("community", "community")),
            versions=tuple(VersionStats.from_dict(v) for v in data.get("versions", [])),
            state=ArticleState.from_dict(data.get("state")),
        )


@dataclass(frozen=True)
class SelectionSet:
    selected: tuple[int, ...] = (0,)

    def __contains__(self, index: object) -> bool:
        return index in self.selected

    def __iter__(self):
        return iter(self.selected)

    def __len__(self) -> int:
        return len(self.selected)

    @property
    def last(self) -> int:
        return self.selected[-1]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


class InvalidHistory(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(report.violations))


def validate_history(history: VersionHistory) -> ValidationReport:
    """Check the structural invariants of a history. Violations are returned, not raised."""
    violations = []
    if not history.versions:
        violations.append("empty history: x_0 must exist")
    for position, version in enumerate(history.versions):
        if version.index != position:
            violations.append(
                f"non-contiguous: version at position {position} has index {version.index}"
            )
        for name in ("upvotes", "downvotes", "views"):
            if getattr(version, name) < 0:
                violations.append(f"version {version.index}: negative {name}")
        if version.votes > version.views:
            violations.append(
                f"version {version.index}: votes {version.votes} > views {version.views}"
            )
    state = history.state
    if state.index is not None and not 0 <= state.index < len(history.versions):
        violations.append(f"state index {state.index} out of range")
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class Delta:
    user: UserId
    community: CommunityId
    amount: int
    reason: str


@dataclass(frozen=True, eq=True)
class ReputationLedger:
    """Per-(user, community) milli-point balances.

    Stored as user -> {community -> value}. Instances are never mutated;
    :meth:`apply` returns a new ledger sharing untouched rows.
    """

    rows: Mapping[UserId, Mapping[CommunityId, int]] = field(default_factory=dict)

    def get(self, user: UserId, community: CommunityId) -> int:
        return self.rows.get(user, {}).get(community, 0)

    def communities(self, user: UserId) -> dict[CommunityId, int]:
        return dict(self.rows.get(user, {}))

    def users(self) -> list[UserId]:
        return sorted(self.rows)

    def entries(self) -> Iterable[tuple[UserId, CommunityId, int]]:
        for user in sorted(self.rows):
            for community in sorted(self.rows[user]):
                yield user, community, self.rows[user][community]

    def apply(self, deltas: Iterable[Delta]) -> ReputationLedger:
        deltas = list(deltas)
        if not deltas:
            return self
        rows = dict(self.rows)
        touched: set[UserId] = set()
        for delta in deltas:
            if delta.user not in touched:
                rows[delta.user] = dict(rows.get(delta.user, {}))
                touched.add(delta.user)
            row = rows[delta.user]
            row[delta.community] = row.get(delta.community, 0) + delta.amount
        return ReputationLedger(rows)

    def to_list(self) -> list[list]:
        return [[u, c, v] for u, c, v in self.entries()]

    @classmethod
    def from_list(cls, items: Iterable) -> ReputationLedger:
        rows: dict[UserId, dict[CommunityId, int]] = {}
        for user, community, value in items:
            rows.setdefault(user, {})[community] = int(value)
        return cls(rows)


def system_reputation(ledger: ReputationLedger, user: UserId) -> int:
    """Sum of the user's entries over every community (0 for unknown users)."""
    return sum(ledger.rows.get(user, {}).values())
