"""Command-line entry point. Every subcommand prints JSON on stdout."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .allocation import allocate_bank
from .config import ConfigError, load_config
from .engine import ValidationRejected
from .model import ArticleState, InvalidHistory, StateKind, VersionHistory, system_reputation
from .review import NotPublishRequested, recommend_publish
from .selection import select_versions, selection_trace

EXIT_INVALID = 1


class CliError(Exception):
    def __init__(self, message: str, **extra):
        self.message = message
        self.extra = extra
        super().__init__(message)


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def read_document(source: str) -> dict:
    """Read JSON from a file path, ``-`` for stdin, or an inline object."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read history: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"history is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise CliError("history must be a JSON object")
    return data


def parse_history(data: dict) -> VersionHistory:
    try:
        return VersionHistory.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"malformed history: {exc}") from None


def load_history(source: str) -> VersionHistory:
    return parse_history(read_document(source))


def _epsilon(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("epsilon must lie in [0, 1]")
    return value


def cmd_select(args) -> None:
    history = load_history(args.history)
    _emit({
        "article": history.article,
        "selected": list(select_versions(history)),
        "trace": [step.to_dict() for step in selection_trace(history)],
    })


def cmd_allocate(args) -> None:
    config = load_config(args.config)
    document = read_document(args.history)
    history = parse_history(document)
    publisher = args.publisher or str(document.get("publisher", "publisher"))
    result = allocate_bank(history, select_versions(history), publisher,
                           args.epsilon, config.rules.allocation)
    _emit({"article": history.article, **result.to_dict()})


def cmd_review(args) -> None:
    history = load_history(args.history)
    if history.state.kind is StateKind.DRAFT:
        # A bare history is treated as carrying a request for the given version.
        history = VersionHistory(history.article, history.community, history.versions,
                                 ArticleState(StateKind.PUBLISH_REQUESTED, args.index))
    try:
        advice = recommend_publish(history, args.index)
    except (NotPublishRequested, IndexError) as exc:
        raise CliError(str(exc)) from None
    _emit({"article": history.article, **advice.to_dict()})


def cmd_replay(args) -> None:
    from .service.log import CorruptLog, EventLog
    from .service.runtime import replay_log

    config = load_config(args.config)
    if not Path(args.log).is_file():
        raise CliError(f"no such log: {args.log}")
    try:
        state = replay_log(EventLog(args.log, fsync=False), config)
    except CorruptLog as exc:
        raise CliError("corrupt log", line=exc.line, reason=exc.reason) from None
    if args.full:
        _emit(state.to_dict())
        return
    _emit({
        "seq": state.seq,
        "ts": state.ts,
        "reputation": {
            user: {
                "system": system_reputation(state.ledger, user),
                "communities": dict(sorted(state.ledger.communities(user).items())),
            }
            for user in state.ledger.users()
        },
        "articles": {
            aid: {"state": rec.history.state.to_dict(),
                  "versions": len(rec.history),
                  "selected": list(select_versions(rec.history))}
            for aid, rec in sorted(state.articles.items())
        },
    })


def cmd_serve(args) -> None:
    import uvicorn

    from .service.api import create_app
    from .service.runtime import ReputationService

    config = load_config(args.config)
    service = ReputationService(args.log, config, args.snapshots)
    port = args.port if args.port is not None else config.port
    host = args.host if args.host is not None else config.host
    uvicorn.run(create_app(service), host=host, port=port, log_level="info")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collabrep", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--log", required=True, help="event log (JSON lines)")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--port", type=int)
    p.add_argument("--host")
    p.add_argument("--snapshots", help="snapshot directory (default: <log>.snapshots)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="replay an event log and print the resulting state")
    p.add_argument("--log", required=True)
    p.add_argument("--config")
    p.add_argument("--full", action="store_true", help="dump the complete engine state")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("select", help="select the improving versions of a history")
    p.add_argument("--history", required=True, help="JSON file, '-' for stdin, or inline JSON")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("allocate", help="split the publication bank for a history")
    p.add_argument("--history", required=True)
    p.add_argument("--epsilon", type=_epsilon)
    p.add_argument("--publisher", help="publisher id (default: history 'publisher' key)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("review", help="recommend accepting or rejecting a publish request")
    p.add_argument("--history", required=True)
    p.add_argument("--index", type=int, required=True)
    p.set_defaults(func=cmd_review)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except InvalidHistory as exc:
        _emit({"error": "invalid history", "violations": list(exc.report.violations)})
        return EXIT_INVALID
    except (CliError, ConfigError, ValidationRejected) as exc:
        extra = getattr(exc, "extra", {})
        _emit({"error": str(exc), **extra})
        return EXIT_INVALID
    return 0


if __name__ == "__main__":
    sys.exit(main())
