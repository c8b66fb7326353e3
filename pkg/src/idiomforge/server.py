"""Moderator-facing HTTP API.

A thin command/query layer over one engine: every mutation is an engine
command on the serialized event log, so anything observable through the
API can be reproduced by replaying the log. Auth is a static bearer token
from configuration; game-state conflicts map to 409, validation problems
(bad idiom pattern, malformed body) to 422, unknown ids to 404.
"""
from __future__ import annotations

from datetime import datetime
from typing import Callable

from fastapi import Depends, FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import analytics
from .engine import GameEngine
from .errors import (
    AlreadyBanned,
    DayAlreadyOpen,
    DayClosed,
    GameError,
    HappyHourActive,
    NoIdiomScheduled,
    NotBanned,
    OutsideWindow,
    PatternSyntax,
    TooFewConstituents,
    BadWildcardPosition,
    UnknownDay,
    UnknownPlayer,
    UnknownSubmission,
    ValidationFailed,
)
from .store import corpus_to_string, export_corpus

CONFLICT = (DayAlreadyOpen, HappyHourActive, AlreadyBanned, NotBanned, OutsideWindow, DayClosed)
UNPROCESSABLE = (
    PatternSyntax,
    TooFewConstituents,
    BadWildcardPosition,
    NoIdiomScheduled,
    ValidationFailed,
)
NOT_FOUND = (UnknownPlayer, UnknownDay, UnknownSubmission)


class IdiomBody(BaseModel):
    line: str


class OpenDayBody(BaseModel):
    idiom_id: str


class BanBody(BaseModel):
    reason: str = ""


def _status_for(exc: GameError) -> int:
    if isinstance(exc, NOT_FOUND):
        return 404
    if isinstance(exc, UNPROCESSABLE):
        return 422
    if isinstance(exc, CONFLICT):
        return 409
    return 400


def create_app(
    engine: GameEngine,
    *,
    token: str,
    clock: Callable[[], datetime] | None = None,
    demo_hooks: dict | None = None,
) -> FastAPI:
    app = FastAPI(title="idiomforge admin API", version="1.0.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    now = clock or datetime.now

    def require_token(request: Request) -> None:
        header = request.headers.get("authorization", "")
        if header != f"Bearer {token}":
            raise _Unauthorized()

    class _Unauthorized(Exception):
        pass

    @app.exception_handler(_Unauthorized)
    async def unauthorized_handler(request: Request, exc: _Unauthorized):
        return JSONResponse(status_code=401, content={"detail": "missing or invalid token"})

    @app.exception_handler(GameError)
    async def game_error_handler(request: Request, exc: GameError):
        return JSONResponse(
            status_code=_status_for(exc), content={"detail": str(exc), "code": exc.code}
        )

    auth = Depends(require_token)

    @app.get("/api/days/{date}/stats", dependencies=[auth])
    def day_stats(date: str):
        return analytics.day_stats(engine, date).as_dict()

    @app.get("/api/reports", dependencies=[auth])
    def reports():
        return [
            {
                "id": s.id,
                "date": s.date,
                "author": s.author,
                "text": s.text,
                "sample_type": s.sample_type,
                "idiomatic": s.idiomatic,
                "likes": s.likes,
                "dislikes": s.dislikes,
                "reports": s.reports,
                "status": s.status,
                "near_duplicate_of": s.near_duplicate_of,
                "moderator_flagged": s.moderator_flagged,
            }
            for s in engine.reported_submissions()
        ]

    @app.post("/api/idioms", dependencies=[auth])
    def schedule_idiom(body: IdiomBody):
        pattern = engine.schedule_idiom(body.line, now())
        return {
            "id": pattern.id,
            "pattern": pattern.text,
            "gloss": pattern.gloss,
            "literal_gloss": pattern.literal_gloss,
        }

    @app.get("/api/idioms", dependencies=[auth])
    def list_idioms():
        return [
            {"id": p.id, "pattern": p.text, "gloss": p.gloss, "literal_gloss": p.literal_gloss}
            for p in engine.idioms.values()
        ]

    @app.post("/api/days/{date}/open", dependencies=[auth])
    def open_day(date: str, body: OpenDayBody):
        day = engine.open_day(date, body.idiom_id, now())
        return {"date": day.date, "idiom_id": day.idiom_id, "opened_at": day.opened_at}

    @app.post("/api/happy-hour", dependencies=[auth])
    def happy_hour():
        start, end = engine.start_happy_hour("moderator", now())
        return {"start": start, "end": end}

    @app.post("/api/submissions/{submission_id}/flag", dependencies=[auth])
    def flag_submission(submission_id: int, body: BanBody):
        engine.flag_submission("moderator", submission_id, body.reason, now())
        return {"submission_id": submission_id, "flagged": True}

    @app.post("/api/players/{player_id}/ban", dependencies=[auth])
    def ban(player_id: str, body: BanBody):
        engine.ban("moderator", player_id, body.reason, now())
        return {"player_id": player_id, "banned": True}

    @app.post("/api/players/{player_id}/unban", dependencies=[auth])
    def unban(player_id: str):
        engine.unban("moderator", player_id, now())
        return {"player_id": player_id, "banned": False}

    @app.get("/api/leaderboard/{date}", dependencies=[auth])
    def leaderboard(date: str):
        view = engine.scoreboard(date)
        return {
            "date": view.date,
            "entries": [
                {"rank": e.rank, "player_id": e.player_id, "name": e.name, "points": e.points}
                for e in view.entries
            ],
            "submission_count": view.submission_count,
            "soft_target_remaining": view.soft_target_remaining,
        }

    @app.get("/api/export", dependencies=[auth])
    def export(
        request: Request,
        include_excluded: bool = False,
        fmt: str = "jsonl",
    ):
        # 'from'/'to' are reserved words, so read them off the raw query
        date_from = request.query_params.get("from")
        date_to = request.query_params.get("to")
        records = export_corpus(
            engine, date_from=date_from, date_to=date_to, include_excluded=include_excluded
        )
        media = "application/x-ndjson" if fmt == "jsonl" else "text/tab-separated-values"
        return PlainTextResponse(corpus_to_string(records, fmt), media_type=media)

    @app.get("/api/status", dependencies=[auth])
    def status():
        date = engine.current_date
        day = engine.days.get(date) if date else None
        hh = day.current_happy_hour(now()) if day else None
        return {
            "language": engine.language,
            "current_date": date,
            "idiom_id": day.idiom_id if day else None,
            "balance": day.balance if day else None,
            "submission_count": day.submission_count if day else 0,
            "happy_hour": {"start": hh[0], "end": hh[1]} if hh else None,
            "now": now().isoformat(),
        }

    if demo_hooks:
        _register_demo_hooks(app, engine, now, auth, demo_hooks)

    return app


def _register_demo_hooks(app: FastAPI, engine: GameEngine, now, auth, hooks: dict) -> None:
    """Demo/e2e-only endpoints: let a test drive one simulated player action."""

    @app.post("/api/demo/review", dependencies=[auth])
    def demo_review():
        outcome = hooks["review"](now())
        if outcome is None:
            return JSONResponse(status_code=409, content={"detail": "no eligible submission"})
        return {
            "reviewer": outcome.review.reviewer,
            "submission_id": outcome.review.submission_id,
            "points": outcome.reviewer_points,
        }

    @app.post("/api/demo/submit", dependencies=[auth])
    def demo_submit():
        stored = hooks["submit"](now())
        return {
            "id": stored.submission.id,
            "sample_type": stored.submission.sample_type,
            "author": stored.submission.author,
        }
