"""Chat transports: the inbound-event state machine plus two transports.

The frontend is transport-agnostic: it turns inbound chat events (start,
menu choice, free text, review verdict) into engine commands, renders the
outcome through the message catalogs, and drains engine notifications to
their recipients. The loopback transport drives it entirely in memory and
is what the test suite and the crowd simulator use; the terminal transport
wraps the same frontend in an interactive prompt loop.

Adapters for real messaging platforms implement MessagingAdapter; none
ships here, so nothing in the engine depends on an external service.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Protocol

from .engine import GameEngine
from .errors import (
    AlreadyReviewed,
    Banned,
    DayClosed,
    DuplicateSentence,
    EmptyText,
    GameError,
    NoPendingSubmission,
    OutsideWindow,
    SelfReview,
)
from .l10n import CatalogSet

MENU_OPTIONS = ("today", "submit", "review", "scoreboard", "achievements", "help")

ERROR_KEYS = {
    OutsideWindow: "err_outside_window",
    DayClosed: "err_no_day_open",
    DuplicateSentence: "err_duplicate",
    Banned: "err_banned",
    AlreadyReviewed: "err_already_reviewed",
    SelfReview: "err_self_review",
    EmptyText: "err_empty_text",
}

ACHIEVEMENT_NAME_KEYS = {
    "early_bird": "achievement_name_early_bird",
    "author": "achievement_name_author",
    "reviewer": "achievement_name_reviewer",
    "streak": "achievement_name_streak",
}


@dataclass(frozen=True)
class InboundEvent:
    player_id: str
    kind: str  # start | menu | text | verdict
    payload: str = ""


@dataclass(frozen=True)
class OutboundMessage:
    recipient: str
    key: str
    text: str
    params: dict = field(default_factory=dict)


class MessagingAdapter(Protocol):
    """What a concrete platform binding must provide."""

    def send(self, recipient: str, text: str) -> None: ...

    def send_menu(self, recipient: str, text: str, options: list[str]) -> None: ...

    def push(self, recipient: str, text: str) -> None: ...


def mark_constituents(text: str, spans: list[tuple[int, int]]) -> str:
    """Bracket the located constituent tokens inside the original sentence."""
    out = text
    for start, end in sorted(spans, reverse=True):
        out = out[:start] + "[" + out[start:end] + "]" + out[end:]
    return out


@dataclass
class Session:
    state: str = "idle"  # idle | awaiting_submission | awaiting_label | reviewing
    reviewing_id: int | None = None


class ChatFrontend:
    """Per-player session state machine over one engine and one language."""

    def __init__(
        self,
        engine: GameEngine,
        catalogs: CatalogSet,
        language: str,
        clock: Callable[[], datetime],
    ):
        self.engine = engine
        self.catalogs = catalogs
        self.language = language
        self.clock = clock
        self.sessions: dict[str, Session] = {}
        self._delivered = 0

    # -- helpers --------------------------------------------------------

    def _msg(self, player_id: str, key: str, **params) -> OutboundMessage:
        return OutboundMessage(
            recipient=player_id,
            key=key,
            text=self.catalogs.render(key, self.language, params),
            params=params,
        )

    def _session(self, player_id: str) -> Session:
        return self.sessions.setdefault(player_id, Session())

    def _error_message(self, player_id: str, exc: GameError) -> OutboundMessage:
        key = ERROR_KEYS.get(type(exc), "unknown_command")
        return self._msg(player_id, key)

    def _idiom_text(self) -> tuple[str, str]:
        date = self.engine.current_date
        if date is None or date not in self.engine.days:
            raise DayClosed("no open day")
        idiom = self.engine.idioms[self.engine.days[date].idiom_id]
        return idiom.text, idiom.gloss

    def _achievement_messages(self, player_id: str, achievement_ids: list[str]) -> list[OutboundMessage]:
        out = []
        for aid in achievement_ids:
            name = self.catalogs.render(ACHIEVEMENT_NAME_KEYS[aid], self.language, {})
            out.append(self._msg(player_id, "achievement_unlocked", name=name))
        return out

    # -- event handling --------------------------------------------------

    def handle(self, event: InboundEvent) -> list[OutboundMessage]:
        try:
            if event.kind == "start":
                return self.handle_start(event.player_id, event.payload or event.player_id)
            if event.kind == "menu":
                return self.handle_menu(event.player_id, event.payload)
            if event.kind == "text":
                return self.handle_text(event.player_id, event.payload)
            if event.kind == "verdict":
                return self.handle_verdict(event.player_id, event.payload)
        except GameError as exc:
            return [self._error_message(event.player_id, exc)]
        return [self._msg(event.player_id, "unknown_command"), self._msg(event.player_id, "help")]

    def handle_start(self, player_id: str, name: str) -> list[OutboundMessage]:
        self.engine.register_player(player_id, name, self.clock())
        self._session(player_id).state = "idle"
        steps = [self._msg(player_id, f"tutorial_step_{i}") for i in range(1, 6)]
        return steps + [self._msg(player_id, "main_menu")]

    def handle_menu(self, player_id: str, choice: str) -> list[OutboundMessage]:
        session = self._session(player_id)
        if choice in ("label_idiomatic", "label_nonidiomatic") and session.state == "awaiting_label":
            return self._finish_label(player_id, idiomatic=choice == "label_idiomatic")
        if choice == "today":
            idiom, gloss = self._idiom_text()
            return [self._msg(player_id, "todays_idiom", idiom=idiom, gloss=gloss)]
        if choice == "submit":
            self._idiom_text()  # raises if no open day
            session.state = "awaiting_submission"
            return [self._msg(player_id, "submit_prompt")]
        if choice == "review":
            return self._serve_review(player_id)
        if choice == "scoreboard":
            return self._scoreboard(player_id)
        if choice == "achievements":
            return self._achievements_view(player_id)
        if choice == "help":
            return [self._msg(player_id, "help")]
        return [self._msg(player_id, "unknown_command"), self._msg(player_id, "help")]

    def handle_text(self, player_id: str, text: str) -> list[OutboundMessage]:
        session = self._session(player_id)
        if session.state != "awaiting_submission":
            return [self._msg(player_id, "unknown_command"), self._msg(player_id, "help")]
        outcome = self.engine.submit(player_id, text, self.clock())
        if outcome.kind == "needs_idiom":
            idiom, _ = self._idiom_text()
            return [self._msg(player_id, "submit_needs_idiom", idiom=idiom)]
        session.state = "awaiting_label"
        return [self._msg(player_id, "submit_label_question", words=", ".join(outcome.words))]

    def _finish_label(self, player_id: str, *, idiomatic: bool) -> list[OutboundMessage]:
        session = self._session(player_id)
        try:
            stored = self.engine.label_submission(player_id, idiomatic, self.clock())
        except NoPendingSubmission:
            session.state = "idle"
            return [self._msg(player_id, "unknown_command"), self._msg(player_id, "help")]
        session.state = "idle"
        out = [self._msg(player_id, "submit_thanks"), self._msg(player_id, stored.tip_key)]
        out.extend(self._achievement_messages(player_id, stored.achievements))
        return out

    def _serve_review(self, player_id: str) -> list[OutboundMessage]:
        session = self._session(player_id)
        submission = self.engine.next_for(player_id, self.clock())
        if submission is None:
            session.state = "idle"
            return [self._msg(player_id, "review_none_available")]
        session.state = "reviewing"
        session.reviewing_id = submission.id
        tokens_spans = self._constituent_spans(submission.text, submission.positions)
        label_key = "review_label_idiomatic" if submission.idiomatic else "review_label_nonidiomatic"
        label = self.catalogs.render(label_key, self.language, {})
        return [
            self._msg(
                player_id,
                "review_prompt",
                sentence=mark_constituents(submission.text, tokens_spans),
                label=label,
            )
        ]

    def _constituent_spans(self, text: str, positions: list[int]) -> list[tuple[int, int]]:
        from .lexical import tokenize

        tokens = tokenize(text)
        return [(tokens[i].start, tokens[i].end) for i in positions]

    def handle_verdict(self, player_id: str, verdict: str) -> list[OutboundMessage]:
        session = self._session(player_id)
        if session.state != "reviewing" or session.reviewing_id is None:
            return [self._msg(player_id, "unknown_command"), self._msg(player_id, "help")]
        if verdict not in ("like", "dislike", "report"):
            return [self._msg(player_id, "unknown_command"), self._msg(player_id, "help")]
        outcome = self.engine.record_review(player_id, session.reviewing_id, verdict, self.clock())
        session.state = "idle"
        session.reviewing_id = None
        if verdict == "report":
            out = [self._msg(player_id, "report_ack")]
        else:
            out = [self._msg(player_id, "review_thanks", points=outcome.reviewer_points)]
        out.extend(self._achievement_messages(player_id, outcome.achievements))
        return out

    def _scoreboard(self, player_id: str) -> list[OutboundMessage]:
        date = self.engine.current_date
        if date is None:
            raise DayClosed("no open day")
        view = self.engine.scoreboard(date, viewer=player_id)
        out = [self._msg(player_id, "scoreboard_header", date=view.date)]
        for entry in view.entries:
            out.append(
                self._msg(
                    player_id,
                    "scoreboard_row",
                    rank=entry.rank,
                    name=entry.name,
                    points=entry.points,
                )
            )
        if view.viewer_rank is not None:
            out.append(
                self._msg(player_id, "scoreboard_you", rank=view.viewer_rank, points=view.viewer_points)
            )
        else:
            out.append(self._msg(player_id, "scoreboard_unranked"))
        if view.soft_target_remaining is not None:
            out.append(
                self._msg(player_id, "scoreboard_soft_target", remaining=view.soft_target_remaining)
            )
        return out

    def _achievements_view(self, player_id: str) -> list[OutboundMessage]:
        player = self.engine.players.get(player_id)
        if player is None:
            return [self._msg(player_id, "unknown_command"), self._msg(player_id, "help")]
        unlocked = ", ".join(
            self.catalogs.render(ACHIEVEMENT_NAME_KEYS[a["id"]], self.language, {})
            for a in player.achievements
        ) or "-"
        return [
            self._msg(
                player_id,
                "achievements_view",
                points=player.total_points,
                level=player.level(self.engine.config.level_divisor),
                unlocked=unlocked,
            )
        ]

    # -- notification delivery -------------------------------------------

    def flush_notifications(self) -> list[OutboundMessage]:
        """Render engine notifications queued since the last flush."""
        out: list[OutboundMessage] = []
        pending = self.engine.notifications[self._delivered :]
        self._delivered = len(self.engine.notifications)
        for notification in pending:
            text = self.catalogs.render(notification.message_key, self.language, notification.params)
            for recipient in notification.recipients:
                out.append(
                    OutboundMessage(
                        recipient=recipient,
                        key=notification.message_key,
                        text=text,
                        params=dict(notification.params),
                    )
                )
        return out


class LoopbackTransport:
    """In-memory transport: feeds events in, collects mailboxes per player."""

    def __init__(self, frontend: ChatFrontend):
        self.frontend = frontend
        self.mailboxes: dict[str, list[OutboundMessage]] = {}

    def _deliver(self, messages: list[OutboundMessage]) -> list[OutboundMessage]:
        for message in messages:
            self.mailboxes.setdefault(message.recipient, []).append(message)
        return messages

    def feed(self, event: InboundEvent) -> list[OutboundMessage]:
        responses = self._deliver(self.frontend.handle(event))
        self._deliver(self.frontend.flush_notifications())
        return responses

    # convenience wrappers used by tests and the simulator
    def start(self, player_id: str, name: str | None = None) -> list[OutboundMessage]:
        return self.feed(InboundEvent(player_id, "start", name or player_id))

    def choose(self, player_id: str, option: str) -> list[OutboundMessage]:
        return self.feed(InboundEvent(player_id, "menu", option))

    def say(self, player_id: str, text: str) -> list[OutboundMessage]:
        return self.feed(InboundEvent(player_id, "text", text))

    def verdict(self, player_id: str, verdict: str) -> list[OutboundMessage]:
        return self.feed(InboundEvent(player_id, "verdict", verdict))

    def mailbox(self, player_id: str) -> list[OutboundMessage]:
        return self.mailboxes.get(player_id, [])


class TerminalTransport:
    """Line-oriented interactive session for one player at a terminal."""

    PROMPT = "> "

    def __init__(self, frontend: ChatFrontend, player_id: str = "terminal-player", out=None):
        self.frontend = frontend
        self.player_id = player_id
        self.out = out or sys.stdout

    def _print(self, messages: list[OutboundMessage]) -> None:
        for message in messages:
            if message.recipient == self.player_id:
                print(message.text, file=self.out)

    def run(self, lines=None) -> None:
        source = lines if lines is not None else sys.stdin
        self._print(self.frontend.handle(InboundEvent(self.player_id, "start", self.player_id)))
        self._print(self.frontend.flush_notifications())
        for raw in source:
            line = raw.strip()
            if not line:
                continue
            if line in ("quit", "exit"):
                break
            self._print(self.frontend.handle(self._event_for(line)))
            self._print(self.frontend.flush_notifications())
            print(self.PROMPT, end="", file=self.out, flush=True)

    def _event_for(self, line: str) -> InboundEvent:
        lowered = line.lower()
        if lowered in MENU_OPTIONS:
            return InboundEvent(self.player_id, "menu", lowered)
        if lowered in ("like", "dislike", "report"):
            return InboundEvent(self.player_id, "verdict", lowered)
        if lowered in ("idiomatic", "literal"):
            choice = "label_idiomatic" if lowered == "idiomatic" else "label_nonidiomatic"
            return InboundEvent(self.player_id, "menu", choice)
        return InboundEvent(self.player_id, "text", line)
