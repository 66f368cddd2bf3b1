"""Reputation engine for collaborative article-publishing communities."""

from .allocation import (
    AllocationResult,
    AllocationRules,
    EngagementClass,
    PointBank,
    allocate_bank,
    classify_version,
    engagement_ratio,
)
from .grading import GradingRules, apply_event, deltas_for_event
from .model import (
    SYSTEM_SCOPE,
    ArticleState,
    Delta,
    InvalidHistory,
    ReputationLedger,
    Role,
    SelectionSet,
    StateKind,
    ValidationReport,
    VersionHistory,
    VersionStats,
    system_reputation,
    validate_history,
)
from .review import ReviewRecommendation, Verdict, recommend_publish
from .selection import INFINITE, improvement_factor, is_selected, select_versions

__version__ = "0.1.0"

__all__ = [
    "AllocationResult",
    "AllocationRules",
    "EngagementClass",
    "PointBank",
    "allocate_bank",
    "classify_version",
    "engagement_ratio",
    "SYSTEM_SCOPE",
    "ArticleState",
    "Delta",
    "InvalidHistory",
    "ReputationLedger",
    "Role",
    "SelectionSet",
    "StateKind",
    "ValidationReport",
    "VersionHistory",
    "VersionStats",
    "system_reputation",
    "validate_history",
    "GradingRules",
    "apply_event",
    "deltas_for_event",
    "ReviewRecommendation",
    "Verdict",
    "recommend_publish",
    "INFINITE",
    "improvement_factor",
    "is_selected",
    "select_versions",
]
