from datetime import timedelta

from collabrep.events import (
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
)

from .oracles import T0


def records(*events, start=1):
    return [
        EventRecord(seq, (T0 + timedelta(minutes=seq)).isoformat(), event)
        for seq, event in enumerate(events, start=start)
    ]


# Community c1 created by alice, pat is its publisher, rey reports.
SETUP = [
    UserRegistered("admin", super_admin=True),
    UserRegistered("alice"),
    UserRegistered("pat"),
    UserRegistered("rey"),
    CommunityCreated("c1", "alice", "admin"),
    CommunityJoined("pat", "c1"),
    CommunityJoined("rey", "c1"),
    RoleGranted("alice", "pat", "Publisher", "c1"),
]

# The four case studies end to end: join, edit, publish, report upheld.
CASE_STUDIES = SETUP + [
    VersionSaved("alice", "a1", 0, "c1"),
    ViewRecorded("a1", 0, 10),
    VoteCast("rey", "a1", 0, "up"),
    VersionSaved("rey", "a1", 1),
    ViewRecorded("a1", 1, 4),
    VoteCast("pat", "a1", 1, "up"),
    VoteCast("pat", "a1", 1, "up"),
    VoteCast("alice", "a1", 1, "up"),
    PublishRequested("alice", "a1", 1),
    PublishDecided("pat", "a1", 1, True),
    ReportFiled("rey", "a1", 0, "factual error"),
    ReportResolved("alice", "a1", True),
]

# Hand sums per user, milli-points (the "@system" column is starting reputation).
# alice c1: +25 create +2 save +2 upvote +1 bank(remaining pool) -5 upheld report on v0
# pat   c1: +25 join +2 bank(publisher 20% of 10) -5 upheld report
# rey   c1: +25 join +2 save +3x2 upvotes +7 bank(close pool) +5 upheld report
CASE_STUDY_LEDGER = {
    "admin": {"@system": 25_000},
    "alice": {"@system": 25_000, "c1": 25_000},
    "pat": {"@system": 25_000, "c1": 22_000},
    "rey": {"@system": 25_000, "c1": 45_000},
}


def worked_example_events(request_index=3):
    """Article a1 whose versions end up at (4,1,10), (9,2,20), (10,6,40), (15,3,100)."""
    events = list(SETUP)
    for i in range(4):
        events += [UserRegistered(f"e{i}"), CommunityJoined(f"e{i}", "c1")]
    target = [(4, 1, 10), (9, 2, 20), (10, 6, 40), (15, 3, 100)]
    for i, (up, down, views) in enumerate(target):
        events.append(VersionSaved(f"e{i}", "a1", i, "c1" if i == 0 else None))
        events.append(ViewRecorded("a1", i, views))
        events += [VoteCast("rey", "a1", i, "up")] * up
        events += [VoteCast("rey", "a1", i, "down")] * down
    if request_index is not None:
        events.append(PublishRequested("alice", "a1", request_index))
    return events
