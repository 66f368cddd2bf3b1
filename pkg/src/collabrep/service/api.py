"""HTTP/JSON interface of the reputation service."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..engine import ValidationRejected
from ..events import MalformedEvent
from . import views
from .runtime import ReputationService


def _error(status: int, detail) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def create_app(service: ReputationService) -> FastAPI:
    app = FastAPI(title="collabrep", version="0.1.0")

    @app.exception_handler(views.NotFound)
    async def not_found(request: Request, exc: views.NotFound):
        return _error(404, str(exc))

    @app.exception_handler(views.Conflict)
    async def conflict(request: Request, exc: views.Conflict):
        return _error(409, str(exc))

    @app.get("/status")
    def status():
        state = service.state
        return {"seq": state.seq, "ts": state.ts}

    @app.get("/users/{user}/reputation")
    def user_reputation(user: str):
        return views.user_reputation(service.state, user)

    @app.get("/communities/{community}/users/{user}/reputation")
    def community_reputation(community: str, user: str):
        return views.community_reputation(service.state, community, user)

    @app.get("/articles/{article}")
    def article(article: str):
        return views.article(service.state, article)

    @app.get("/articles/{article}/selection")
    def selection(article: str):
        return views.article_selection(service.state, article)

    @app.get("/articles/{article}/allocation/preview")
    def allocation_preview(article: str, publisher: Optional[str] = None,
                           epsilon: Optional[str] = None):
        eps = None
        if epsilon is not None:
            try:
                eps = Fraction(epsilon)
            except ValueError:
                return _error(422, [{"field": "epsilon", "reason": "not a number"}])
            if not 0 <= eps <= 1:
                return _error(422, [{"field": "epsilon", "reason": "must lie in [0, 1]"}])
        return views.allocation_preview(
            service.state, article, service.config.rules.allocation, publisher, eps
        )

    @app.get("/articles/{article}/review")
    def review(article: str):
        return views.article_review(service.state, article)

    @app.post("/events", status_code=201)
    async def post_event(request: Request):
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return _error(422, [{"field": "body", "reason": "invalid JSON"}])
        if not isinstance(body, dict):
            return _error(422, [{"field": "body", "reason": "expected object"}])
        kind = body.get("kind")
        if not isinstance(kind, str):
            return _error(422, [{"field": "kind", "reason": "expected string"}])
        ts = body.get("ts")
        if ts is not None and not isinstance(ts, str):
            return _error(422, [{"field": "ts", "reason": "expected string"}])
        try:
            record = service.append(kind, body.get("payload", {}), ts)
        except MalformedEvent as exc:
            return _error(422, [{"field": exc.field, "reason": exc.reason}])
        except ValidationRejected as exc:
            return _error(422, exc.reason)
        return JSONResponse(status_code=201, content=record.to_dict())

    return app
