"""Event-sourced game engine: one idiom per day, submissions, peer review.

Every state change flows through a single serialized command log. Public
command methods validate, then commit an event; the event handler is the
only code that mutates state, so replaying the log from scratch reproduces
the exact same engine state, leaderboard, balance timeline, and
notification sequence (tips use a seeded RNG that advances once per stored
submission).

A day runs inside a fixed local play window (default 11:00-23:00,
end-exclusive). Submissions go through tokenize -> lemma lookup -> pattern
locate; a sentence that does not contain the day's idiom is bounced back
without being stored. Matching sentences wait for the author's
idiomatic/nonidiomatic label, then are stored with their sample type and
the effective type score frozen at submission time.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from datetime import date as date_cls
from datetime import datetime, timedelta
from pathlib import Path

from . import scoring
from .config import GameConfig
from .errors import (
    AlreadyBanned,
    AlreadyReviewed,
    Banned,
    DayAlreadyOpen,
    DayClosed,
    DuplicateSentence,
    HappyHourActive,
    GameError,
    NoIdiomScheduled,
    NoPendingSubmission,
    NotBanned,
    OutsideWindow,
    SelfReview,
    UnknownDay,
    UnknownPlayer,
    UnknownSubmission,
    ValidationFailed,
)
from .lexical import LemmaDictionary, lemma_sequence, tokenize
from .matching import IdiomMatch, IdiomPattern, classify, locate, parse_idiom_line
from .scoring import AchievementId, BalanceMode, Verdict
from .store import EventLog, EventRecord

STATUS_ACTIVE = "active"
STATUS_FLAGGED = "flagged"
STATUS_EXCLUDED = "excluded_by_ban"

TIP_KEYS = ("tip_review", "tip_type_b", "tip_type_c")

NOTIF_MORNING = "Morning"
NOTIF_SCORE_CHANGE = "ScoreChange"
NOTIF_HAPPY_HOUR = "HappyHour"
NOTIF_LIKE_RECEIVED = "LikeReceived"
NOTIF_RANK_GAINED = "RankGained"
NOTIF_RANK_LOST = "RankLost"

BROADCAST_KINDS = (NOTIF_MORNING, NOTIF_SCORE_CHANGE, NOTIF_HAPPY_HOUR)


def normalize_sentence(text: str) -> str:
    """Duplicate-detection key: lowercase, punctuation stripped, whitespace collapsed."""
    cleaned = "".join(ch if ch.isalnum() else " " for ch in text.lower())
    return " ".join(cleaned.split())


def jaccard(a: set[str], b: set[str]) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


@dataclass
class Player:
    id: str
    name: str
    registered_at: str
    banned: bool = False
    total_points: int = 0
    achievements: list[dict] = field(default_factory=list)
    active_dates: list[str] = field(default_factory=list)

    def level(self, divisor: int) -> int:
        return scoring.level_for(self.total_points, divisor=divisor)

    def unlocked_on(self, date: str) -> frozenset[str]:
        return frozenset(a["id"] for a in self.achievements if a["date"] == date)

    def has_streak(self) -> bool:
        return any(a["id"] == AchievementId.STREAK.value for a in self.achievements)


@dataclass
class Review:
    reviewer: str
    submission_id: int
    verdict: str
    timestamp: str
    points_awarded: int


@dataclass
class Submission:
    id: int
    date: str
    author: str
    text: str
    normalized: str
    idiomatic: bool
    sample_type: str
    score_snapshot: int
    positions: list[int]
    tip_key: str
    created_at: str
    likes: int = 0
    dislikes: int = 0
    reports: int = 0
    status: str = STATUS_ACTIVE
    moderator_flagged: bool = False
    near_duplicate_of: int | None = None
    reviews: dict[str, Review] = field(default_factory=dict)

    @property
    def review_count(self) -> int:
        return len(self.reviews)

    @property
    def excluded(self) -> bool:
        return self.status == STATUS_EXCLUDED


@dataclass
class Notification:
    kind: str
    recipients: list[str]
    message_key: str
    params: dict
    sent_at: str

    def signature(self) -> list:
        return [self.kind, sorted(self.recipients), self.message_key, self.params, self.sent_at]


@dataclass
class DayState:
    date: str
    language: str
    idiom_id: str
    opened_at: str
    type_counts: dict[str, int] = field(default_factory=lambda: {"A": 0, "B": 0, "C": 0, "D": 0})
    balance: str = BalanceMode.NEUTRAL.value
    balance_timeline: list[list] = field(default_factory=list)
    happy_hours: list[list[str]] = field(default_factory=list)
    submission_ids: list[int] = field(default_factory=list)
    normalized_index: dict[str, int] = field(default_factory=dict)
    day_points: dict[str, int] = field(default_factory=dict)
    last_point_order: dict[str, int] = field(default_factory=dict)
    active_players: list[str] = field(default_factory=list)
    target_reached: bool = False
    last_like_notice: dict[str, str] = field(default_factory=dict)

    @property
    def submission_count(self) -> int:
        return len(self.submission_ids)

    def happy_hour_active(self, now: datetime) -> bool:
        for start, end in self.happy_hours:
            if datetime.fromisoformat(start) <= now < datetime.fromisoformat(end):
                return True
        return False

    def current_happy_hour(self, now: datetime) -> tuple[str, str] | None:
        for start, end in self.happy_hours:
            if datetime.fromisoformat(start) <= now < datetime.fromisoformat(end):
                return (start, end)
        return None


@dataclass
class PendingSubmission:
    text: str
    positions: list[int]
    words: list[str]
    received_at: str


@dataclass
class SubmitOutcome:
    kind: str  # "needs_idiom" | "await_label"
    words: list[str] = field(default_factory=list)
    positions: list[int] = field(default_factory=list)


@dataclass
class StoredOutcome:
    submission: Submission
    tip_key: str
    achievements: list[str]
    balance_changed: bool
    balance: str
    near_duplicate: bool


@dataclass
class ReviewOutcome:
    review: Review
    reviewer_points: int
    author_points: int
    flagged: bool
    achievements: list[str]


@dataclass
class ScoreboardEntry:
    rank: int
    player_id: str
    name: str
    points: int


@dataclass
class ScoreboardView:
    date: str
    entries: list[ScoreboardEntry]
    viewer_rank: int | None
    viewer_points: int
    submission_count: int
    soft_target_remaining: int | None  # None once the target has been reached


class GameEngine:
    """Single-language game engine over a serialized event log."""

    def __init__(
        self,
        config: GameConfig,
        language: str = "en",
        dictionary: LemmaDictionary | None = None,
        idioms: list[IdiomPattern] | None = None,
        log_path: str | Path | None = None,
    ):
        from .config import config_to_mapping

        self.config = config
        self.language = language
        self.dictionary = dictionary or LemmaDictionary.empty(language)
        self.log = EventLog(
            log_path,
            header_extra={"language": language, "config": config_to_mapping(config)},
        )
        self.players: dict[str, Player] = {}
        self.idioms: dict[str, IdiomPattern] = {p.id: p for p in (idioms or [])}
        self.days: dict[str, DayState] = {}
        self.current_date: str | None = None
        self.submissions: dict[int, Submission] = {}
        self.point_events: list[dict] = []
        self.notifications: list[Notification] = []
        self.pending: dict[str, PendingSubmission] = {}
        self._point_order = 0
        self._tip_rng = random.Random(f"{config.tip_seed}:{language}")

    # ------------------------------------------------------------------ #
    # construction from a persisted log

    @classmethod
    def from_events(
        cls,
        records: list[EventRecord],
        config: GameConfig,
        language: str = "en",
        dictionary: LemmaDictionary | None = None,
        idioms: list[IdiomPattern] | None = None,
        log_path: str | Path | None = None,
    ) -> "GameEngine":
        engine = cls(config, language=language, dictionary=dictionary, idioms=idioms, log_path=log_path)
        for record in records:
            engine.apply_record(record)
        return engine

    @classmethod
    def load(cls, log_file: str | Path, config: GameConfig | None = None, **kwargs) -> "GameEngine":
        """Rebuild an engine from a log file.

        When ``config`` (or the ``language`` kwarg) is omitted, the values
        stamped in the log header are used, so a log replays with the exact
        configuration that produced it.
        """
        from .config import config_from_mapping

        header, records = EventLog.read_with_header(log_file)
        if config is None:
            if "config" not in header:
                raise ValidationFailed(f"{log_file}: log header carries no config; pass one explicitly")
            config = config_from_mapping(header["config"])
        if "language" not in kwargs and "language" in header:
            kwargs["language"] = header["language"]
        return cls.from_events(records, config, **kwargs)

    def dump_log(self, path: str | Path) -> Path:
        """Write the full event log (with config header) to a fresh file."""
        from .config import config_to_mapping

        return EventLog.write_records(
            self.log.records,
            path,
            header_extra={"language": self.language, "config": config_to_mapping(self.config)},
        )

    def apply_record(self, record: EventRecord) -> None:
        """Validate and apply one already-sequenced record (replay path)."""
        try:
            self._apply(record.kind, dict(record.payload), record.seq, record.timestamp, replay=True)
        except ValidationFailed:
            raise
        except GameError as exc:
            raise ValidationFailed(f"event {record.seq} ({record.kind}): {exc}") from exc
        self.log.record_replayed(record)

    # ------------------------------------------------------------------ #
    # commands

    def register_player(self, player_id: str, name: str, now: datetime) -> Player:
        if player_id in self.players:
            return self.players[player_id]
        self._commit("player_registered", {"player_id": player_id, "name": name}, now)
        return self.players[player_id]

    def schedule_idiom(self, line: str, now: datetime) -> IdiomPattern:
        pattern = parse_idiom_line(line, self.language)  # surfaces parse errors to the caller
        self._commit("idiom_scheduled", {"line": line}, now)
        return self.idioms[pattern.id]

    def open_day(self, date: str, idiom_id: str, now: datetime) -> DayState:
        if date in self.days:
            raise DayAlreadyOpen(f"day {date} already open for {self.language}")
        if idiom_id not in self.idioms:
            raise NoIdiomScheduled(f"no idiom scheduled with id {idiom_id!r}")
        self._commit("day_opened", {"date": date, "idiom_id": idiom_id}, now)
        return self.days[date]

    def submit(self, player_id: str, text: str, now: datetime) -> SubmitOutcome:
        self._require_player(player_id)
        day = self._require_open_window(now)
        tokens = tokenize(text)
        match = locate(tokens, lemma_sequence(tokens, self.dictionary), self.idioms[day.idiom_id])
        if match is None:
            self.pending.pop(player_id, None)
            return SubmitOutcome(kind="needs_idiom")
        self._require_not_duplicate(day, text)
        words = [tokens[i].surface for i in match.constituent_positions]
        self.pending[player_id] = PendingSubmission(
            text=text,
            positions=list(match.constituent_positions),
            words=words,
            received_at=now.isoformat(),
        )
        return SubmitOutcome(kind="await_label", words=words, positions=list(match.constituent_positions))

    def label_submission(self, player_id: str, idiomatic: bool, now: datetime) -> StoredOutcome:
        self._require_player(player_id)
        self._require_open_window(now)
        pending = self.pending.get(player_id)
        if pending is None:
            raise NoPendingSubmission(f"player {player_id} has no submission awaiting a label")
        outcome = self._commit(
            "submission_stored",
            {"author": player_id, "text": pending.text, "idiomatic": idiomatic},
            now,
        )
        self.pending.pop(player_id, None)
        return outcome

    def next_for(self, reviewer: str, now: datetime) -> Submission | None:
        """Fewest-reviews-first queue; ties go to the oldest submission."""
        player = self._require_player(reviewer)
        if player.banned:
            raise Banned(f"player {reviewer} is banned")
        day = self.days.get(self.current_date) if self.current_date else None
        if day is None:
            raise DayClosed("no day open")
        eligible = [
            self.submissions[sid]
            for sid in day.submission_ids
            if self._eligible_for_review(self.submissions[sid], reviewer)
        ]
        if not eligible:
            return None
        return min(eligible, key=lambda s: (s.review_count, s.id))

    def record_review(self, reviewer: str, submission_id: int, verdict: Verdict | str, now: datetime) -> ReviewOutcome:
        verdict = Verdict(verdict)
        self._require_player(reviewer)
        self._require_open_window(now)
        submission = self.submissions.get(submission_id)
        if submission is None:
            raise UnknownSubmission(f"no submission {submission_id}")
        return self._commit(
            "review_recorded",
            {"reviewer": reviewer, "submission_id": submission_id, "verdict": verdict.value},
            now,
        )

    def start_happy_hour(self, moderator: str, now: datetime) -> tuple[str, str]:
        day = self.days.get(self.current_date) if self.current_date else None
        if day is None or day.date != now.date().isoformat():
            raise DayClosed("no day open to start a happy hour in")
        if day.happy_hour_active(now):
            raise HappyHourActive("a happy hour is already running")
        outcome = self._commit("happy_hour_started", {"moderator": moderator}, now)
        return outcome

    def ban(self, moderator: str, player_id: str, reason: str, now: datetime) -> None:
        player = self._require_player(player_id)
        if player.banned:
            raise AlreadyBanned(f"player {player_id} is already banned")
        self._commit("player_banned", {"moderator": moderator, "player_id": player_id, "reason": reason}, now)

    def unban(self, moderator: str, player_id: str, now: datetime) -> None:
        player = self._require_player(player_id)
        if not player.banned:
            raise NotBanned(f"player {player_id} is not banned")
        self._commit("player_unbanned", {"moderator": moderator, "player_id": player_id}, now)

    def flag_submission(self, moderator: str, submission_id: int, reason: str, now: datetime) -> None:
        if submission_id not in self.submissions:
            raise UnknownSubmission(f"no submission {submission_id}")
        self._commit(
            "submission_flagged",
            {"moderator": moderator, "submission_id": submission_id, "reason": reason},
            now,
        )

    # ------------------------------------------------------------------ #
    # queries

    def scoreboard(self, date: str, viewer: str | None = None) -> ScoreboardView:
        day = self.days.get(date)
        if day is None:
            raise UnknownDay(f"no day recorded for {date}")
        order = self._leaderboard_order(day)
        entries = [
            ScoreboardEntry(rank=i + 1, player_id=p, name=self.players[p].name, points=day.day_points[p])
            for i, p in enumerate(order[:5])
        ]
        viewer_rank = None
        viewer_points = 0
        if viewer is not None and viewer in day.day_points:
            viewer_points = day.day_points[viewer]
            viewer_rank = order.index(viewer) + 1
        remaining = None
        if not day.target_reached:
            remaining = self.config.soft_target - day.submission_count
        return ScoreboardView(
            date=date,
            entries=entries,
            viewer_rank=viewer_rank,
            viewer_points=viewer_points,
            submission_count=day.submission_count,
            soft_target_remaining=remaining,
        )

    def reported_submissions(self) -> list[Submission]:
        """Moderation queue: reported or near-duplicate submissions."""
        return [
            s
            for s in sorted(self.submissions.values(), key=lambda s: s.id)
            if s.reports > 0 or s.near_duplicate_of is not None
        ]

    def day_submissions(self, date: str, *, include_excluded: bool = False) -> list[Submission]:
        day = self.days.get(date)
        if day is None:
            raise UnknownDay(f"no day recorded for {date}")
        subs = [self.submissions[sid] for sid in day.submission_ids]
        if not include_excluded:
            subs = [s for s in subs if not s.excluded]
        return subs

    def effective_scores(self, date: str | None = None) -> scoring.TypeScores:
        day = self.days.get(date or self.current_date or "")
        mode = BalanceMode(day.balance) if day else BalanceMode.NEUTRAL
        return scoring.effective_scores(
            mode, base=self.config.base_scores, boost=self.config.boost_delta
        )

    def state_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.snapshot(), sort_keys=True, ensure_ascii=False).encode("utf-8")
        ).hexdigest()

    def snapshot(self) -> dict:
        """Full replayable-state view (pending label prompts are UI state and excluded)."""
        return {
            "language": self.language,
            "seq": len(self.log.records),
            "players": {
                pid: {
                    "name": p.name,
                    "registered_at": p.registered_at,
                    "banned": p.banned,
                    "total_points": p.total_points,
                    "achievements": p.achievements,
                    "active_dates": p.active_dates,
                }
                for pid, p in self.players.items()
            },
            "days": {
                d: {
                    "idiom_id": day.idiom_id,
                    "type_counts": day.type_counts,
                    "balance": day.balance,
                    "balance_timeline": day.balance_timeline,
                    "happy_hours": day.happy_hours,
                    "submission_ids": day.submission_ids,
                    "day_points": day.day_points,
                    "leaderboard": self._leaderboard_order(day),
                    "target_reached": day.target_reached,
                }
                for d, day in self.days.items()
            },
            "submissions": {
                str(sid): {
                    "date": s.date,
                    "author": s.author,
                    "text": s.text,
                    "idiomatic": s.idiomatic,
                    "sample_type": s.sample_type,
                    "score_snapshot": s.score_snapshot,
                    "positions": s.positions,
                    "tip_key": s.tip_key,
                    "likes": s.likes,
                    "dislikes": s.dislikes,
                    "reports": s.reports,
                    "status": s.status,
                    "moderator_flagged": s.moderator_flagged,
                    "near_duplicate_of": s.near_duplicate_of,
                    "reviews": {
                        r: {"verdict": rv.verdict, "ts": rv.timestamp, "points": rv.points_awarded}
                        for r, rv in s.reviews.items()
                    },
                }
                for sid, s in self.submissions.items()
            },
            "point_events": self.point_events,
            "notifications": [n.signature() for n in self.notifications],
        }

    # ------------------------------------------------------------------ #
    # internals

    def _commit(self, kind: str, payload: dict, now: datetime):
        ts = now.isoformat()
        outcome = self._apply(kind, payload, self.log.next_seq, ts, replay=False)
        self.log.append(kind, payload, ts)
        if (
            self.log.path is not None
            and self.config.snapshot_every > 0
            and len(self.log.records) % self.config.snapshot_every == 0
        ):
            self.write_snapshot_file()
        return outcome

    def write_snapshot_file(self) -> Path | None:
        """Materialized state next to the log, refreshed every N events.

        Replay from the log is the source of truth; the snapshot file is an
        inspection and recovery aid."""
        if self.log.path is None:
            return None
        path = self.log.path.with_suffix(".snapshot.json")
        path.write_text(
            json.dumps(self.snapshot(), ensure_ascii=False, sort_keys=True, indent=1),
            encoding="utf-8",
        )
        return path

    def _apply(self, kind: str, payload: dict, seq: int, ts: str, *, replay: bool):
        handler = getattr(self, f"_ev_{kind}", None)
        if handler is None:
            raise ValidationFailed(f"unknown event kind {kind!r}")
        return handler(payload, seq, ts, replay)

    def _require_player(self, player_id: str) -> Player:
        player = self.players.get(player_id)
        if player is None:
            raise UnknownPlayer(f"no player {player_id!r}")
        return player

    def _require_open_window(self, now: datetime) -> DayState:
        day = self.days.get(self.current_date) if self.current_date else None
        if day is None or day.date != now.date().isoformat():
            raise DayClosed(f"no day open for {now.date().isoformat()}")
        if not (self.config.window_open <= now.time() < self.config.window_close):
            raise OutsideWindow(
                f"{now.time().isoformat('minutes')} is outside the "
                f"{self.config.window_open.isoformat('minutes')}-"
                f"{self.config.window_close.isoformat('minutes')} window"
            )
        return day

    def _require_not_duplicate(self, day: DayState, text: str) -> str:
        normalized = normalize_sentence(text)
        if normalized in day.normalized_index:
            raise DuplicateSentence("an identical sentence was already submitted today")
        return normalized

    def _eligible_for_review(self, submission: Submission, reviewer: str) -> bool:
        return (
            not submission.excluded
            and not submission.moderator_flagged
            and submission.author != reviewer
            and reviewer not in submission.reviews
        )

    def _leaderboard_order(self, day: DayState) -> list[str]:
        return sorted(
            (p for p, pts in day.day_points.items() if pts > 0),
            key=lambda p: (-day.day_points[p], day.last_point_order.get(p, 0)),
        )

    def _broadcast_recipients(self) -> list[str]:
        return [pid for pid, p in self.players.items() if not p.banned]

    def _notify(self, kind: str, recipients: list[str], key: str, params: dict, ts: str) -> None:
        if not recipients:
            return
        self.notifications.append(
            Notification(kind=kind, recipients=recipients, message_key=key, params=params, sent_at=ts)
        )

    def _award(self, day: DayState, player_id: str, points: int, reason: str, seq: int, ts: str) -> None:
        self._point_order += 1
        player = self.players[player_id]
        player.total_points += points
        day.day_points[player_id] = day.day_points.get(player_id, 0) + points
        day.last_point_order[player_id] = self._point_order
        self.point_events.append(
            {
                "order": self._point_order,
                "seq": seq,
                "player": player_id,
                "points": points,
                "reason": reason,
                "date": day.date,
                "ts": ts,
            }
        )

    def _mark_active(self, day: DayState, player_id: str) -> None:
        if player_id not in day.active_players:
            day.active_players.append(player_id)
        player = self.players[player_id]
        if day.date not in player.active_dates:
            player.active_dates.append(day.date)
            player.active_dates.sort()

    def _consecutive_active_days(self, player: Player, date: str) -> int:
        dates = set(player.active_dates)
        day = date_cls.fromisoformat(date)
        streak = 0
        while day.isoformat() in dates:
            streak += 1
            day -= timedelta(days=1)
        return streak

    def _check_achievements(
        self, day: DayState, player_id: str, ts: str, *, submission_minutes: int | None
    ) -> list[str]:
        player = self.players[player_id]
        submissions_today = sum(
            1 for sid in day.submission_ids if self.submissions[sid].author == player_id
        )
        reviews_today = sum(
            1
            for sid in day.submission_ids
            for r in self.submissions[sid].reviews.values()
            if r.reviewer == player_id
        )
        summary = scoring.PlayerDaySummary(
            submissions_today=submissions_today,
            reviews_today=reviews_today,
            minutes_into_window=submission_minutes,
            consecutive_active_days=self._consecutive_active_days(player, day.date),
            unlocked_today=player.unlocked_on(day.date),
            streak_unlocked_ever=player.has_streak(),
        )
        unlocked = scoring.check_achievements(
            summary,
            author_threshold=self.config.author_threshold,
            reviewer_threshold=self.config.reviewer_threshold,
            streak_days=self.config.streak_days,
            early_bird_minutes=self.config.early_bird_minutes,
        )
        new_ids = sorted(a.value for a in unlocked)
        for aid in new_ids:
            player.achievements.append({"id": aid, "date": day.date, "unlocked_at": ts})
        return new_ids

    def _minutes_into_window(self, now: datetime) -> int:
        open_minutes = self.config.window_open.hour * 60 + self.config.window_open.minute
        return now.hour * 60 + now.minute - open_minutes

    def _rank_notifications(self, before: dict[str, int], after: dict[str, int], ts: str) -> None:
        for player_id in sorted(set(before) | set(after)):
            b = before.get(player_id)
            a = after.get(player_id)
            if a is not None and ((a <= 5 and (b is None or b > 5)) or (a == 1 and b != 1)):
                self._notify(NOTIF_RANK_GAINED, [player_id], "notif_rank_gained", {"rank": a}, ts)
            elif b is not None and (
                (b == 1 and (a is None or a > 1))
                or (b <= 3 and (a is None or a > 3))
                or (b <= 5 and (a is None or a > 5))
            ):
                self._notify(NOTIF_RANK_LOST, [player_id], "notif_rank_lost", {"rank": a or 0}, ts)

    # ------------------------------------------------------------------ #
    # event handlers (the only state mutators)

    def _ev_player_registered(self, payload: dict, seq: int, ts: str, replay: bool):
        pid = payload["player_id"]
        if pid in self.players:
            raise ValidationFailed(f"player {pid} already registered")
        self.players[pid] = Player(id=pid, name=payload["name"], registered_at=ts)
        return self.players[pid]

    def _ev_idiom_scheduled(self, payload: dict, seq: int, ts: str, replay: bool):
        pattern = parse_idiom_line(payload["line"], self.language)
        self.idioms[pattern.id] = pattern
        return pattern

    def _ev_day_opened(self, payload: dict, seq: int, ts: str, replay: bool):
        date, idiom_id = payload["date"], payload["idiom_id"]
        if date in self.days:
            raise DayAlreadyOpen(f"day {date} already open")
        if idiom_id not in self.idioms:
            raise NoIdiomScheduled(f"no idiom scheduled with id {idiom_id!r}")
        day = DayState(date=date, language=self.language, idiom_id=idiom_id, opened_at=ts)
        day.balance_timeline.append([seq, day.balance])
        self.days[date] = day
        self.current_date = date
        idiom = self.idioms[idiom_id]
        self._notify(
            NOTIF_MORNING,
            self._broadcast_recipients(),
            "notif_morning",
            {"idiom": idiom.text, "gloss": idiom.gloss},
            ts,
        )
        return day

    def _ev_submission_stored(self, payload: dict, seq: int, ts: str, replay: bool):
        now = datetime.fromisoformat(ts)
        day = self._require_open_window(now)
        author = payload["author"]
        player = self._require_player(author)
        if player.banned:
            raise Banned(f"player {author} is banned")
        text, idiomatic = payload["text"], payload["idiomatic"]
        normalized = self._require_not_duplicate(day, text)

        tokens = tokenize(text)
        match = locate(tokens, lemma_sequence(tokens, self.dictionary), self.idioms[day.idiom_id])
        if match is None:
            raise ValidationFailed("stored submission does not contain the day's idiom")
        sample_type = classify(match, idiomatic).value
        snapshot_score = self.effective_scores(day.date).for_type(classify(match, idiomatic))
        tip_key = self._tip_rng.choice(TIP_KEYS)
        sid = len(self.submissions) + 1

        derived = {
            "submission_id": sid,
            "sample_type": sample_type,
            "score_snapshot": snapshot_score,
            "positions": list(match.constituent_positions),
            "tip_key": tip_key,
        }
        if replay:
            for key, value in derived.items():
                if payload.get(key) != value:
                    raise ValidationFailed(
                        f"event {seq}: stale {key} (expected {value!r}, event has {payload.get(key)!r})"
                    )
        else:
            payload.update(derived)

        near_of = None
        new_tokens = set(normalized.split())
        for other_id in day.submission_ids:
            other = self.submissions[other_id]
            if jaccard(new_tokens, set(other.normalized.split())) >= self.config.near_duplicate_jaccard:
                near_of = other_id
                break

        submission = Submission(
            id=sid,
            date=day.date,
            author=author,
            text=text,
            normalized=normalized,
            idiomatic=idiomatic,
            sample_type=sample_type,
            score_snapshot=snapshot_score,
            positions=list(match.constituent_positions),
            tip_key=tip_key,
            created_at=ts,
            near_duplicate_of=near_of,
        )
        self.submissions[sid] = submission
        day.submission_ids.append(sid)
        day.normalized_index[normalized] = sid
        day.type_counts[sample_type] += 1
        if not day.target_reached and day.submission_count >= self.config.soft_target:
            day.target_reached = True
        self._mark_active(day, author)

        old_balance = BalanceMode(day.balance)
        new_balance = scoring.update_balance(
            day.type_counts,
            old_balance,
            activation=self.config.activation_threshold,
            release=self.config.release_threshold,
            compare=self.config.balance_compare,
        )
        balance_changed = new_balance is not old_balance
        if balance_changed:
            day.balance = new_balance.value
            day.balance_timeline.append([seq, day.balance])
            key = {
                BalanceMode.BOOST_NONIDIOMATIC: "notif_score_change_need_nonidiomatic",
                BalanceMode.BOOST_IDIOMATIC: "notif_score_change_need_idiomatic",
                BalanceMode.NEUTRAL: "notif_score_change_back_to_normal",
            }[new_balance]
            self._notify(NOTIF_SCORE_CHANGE, self._broadcast_recipients(), key, {}, ts)

        achievements = self._check_achievements(
            day, author, ts, submission_minutes=self._minutes_into_window(now)
        )
        return StoredOutcome(
            submission=submission,
            tip_key=tip_key,
            achievements=achievements,
            balance_changed=balance_changed,
            balance=day.balance,
            near_duplicate=near_of is not None,
        )

    def _ev_review_recorded(self, payload: dict, seq: int, ts: str, replay: bool):
        now = datetime.fromisoformat(ts)
        day = self._require_open_window(now)
        reviewer = payload["reviewer"]
        player = self._require_player(reviewer)
        if player.banned:
            raise Banned(f"player {reviewer} is banned")
        submission = self.submissions.get(payload["submission_id"])
        if submission is None or submission.date != day.date:
            raise UnknownSubmission(f"no reviewable submission {payload['submission_id']}")
        if submission.author == reviewer:
            raise SelfReview("players cannot review their own submissions")
        if reviewer in submission.reviews:
            raise AlreadyReviewed(f"{reviewer} already reviewed submission {submission.id}")
        verdict = Verdict(payload["verdict"])

        if verdict is Verdict.REPORT:
            reviewer_points = 0
        else:
            reviewer_points = scoring.review_points(
                day.happy_hour_active(now),
                base=self.config.review_point,
                happy=self.config.happy_hour_review_point,
            )
        author_points = submission.score_snapshot if verdict is Verdict.LIKE else 0
        if replay:
            for key, value in (("reviewer_points", reviewer_points), ("author_points", author_points)):
                if payload.get(key) != value:
                    raise ValidationFailed(f"event {seq}: stale {key}")
        else:
            payload["reviewer_points"] = reviewer_points
            payload["author_points"] = author_points

        review = Review(
            reviewer=reviewer,
            submission_id=submission.id,
            verdict=verdict.value,
            timestamp=ts,
            points_awarded=reviewer_points,
        )
        submission.reviews[reviewer] = review
        self._mark_active(day, reviewer)

        flagged = False
        before = {p: i + 1 for i, p in enumerate(self._leaderboard_order(day))}
        if verdict is Verdict.LIKE:
            submission.likes += 1
            self._award(day, reviewer, reviewer_points, "review", seq, ts)
            self._award(day, submission.author, author_points, "like", seq, ts)
        elif verdict is Verdict.DISLIKE:
            submission.dislikes += 1
            self._award(day, reviewer, reviewer_points, "review", seq, ts)
        else:
            submission.reports += 1
            if submission.status == STATUS_ACTIVE:
                submission.status = STATUS_FLAGGED
                flagged = True
        after = {p: i + 1 for i, p in enumerate(self._leaderboard_order(day))}
        self._rank_notifications(before, after, ts)

        if verdict is Verdict.LIKE:
            last = day.last_like_notice.get(submission.author)
            cooldown = timedelta(minutes=self.config.like_cooldown_minutes)
            if last is None or now - datetime.fromisoformat(last) >= cooldown:
                self._notify(NOTIF_LIKE_RECEIVED, [submission.author], "notif_like_received", {}, ts)
                day.last_like_notice[submission.author] = ts

        achievements = self._check_achievements(day, reviewer, ts, submission_minutes=None)
        return ReviewOutcome(
            review=review,
            reviewer_points=reviewer_points,
            author_points=author_points,
            flagged=flagged,
            achievements=achievements,
        )

    def _ev_happy_hour_started(self, payload: dict, seq: int, ts: str, replay: bool):
        now = datetime.fromisoformat(ts)
        day = self.days.get(self.current_date) if self.current_date else None
        if day is None or day.date != now.date().isoformat():
            raise DayClosed("no day open")
        if day.happy_hour_active(now):
            raise HappyHourActive("a happy hour is already running")
        end = now + timedelta(minutes=self.config.happy_hour_minutes)
        window = [now.isoformat(), end.isoformat()]
        day.happy_hours.append(window)
        self._notify(
            NOTIF_HAPPY_HOUR,
            self._broadcast_recipients(),
            "notif_happy_hour",
            {"minutes": self.config.happy_hour_minutes},
            ts,
        )
        return (window[0], window[1])

    def _ev_player_banned(self, payload: dict, seq: int, ts: str, replay: bool):
        player = self._require_player(payload["player_id"])
        if player.banned:
            raise AlreadyBanned(f"player {player.id} is already banned")
        player.banned = True
        for submission in self.submissions.values():
            if submission.author == player.id:
                submission.status = STATUS_EXCLUDED
        return player

    def _ev_player_unbanned(self, payload: dict, seq: int, ts: str, replay: bool):
        player = self._require_player(payload["player_id"])
        if not player.banned:
            raise NotBanned(f"player {player.id} is not banned")
        player.banned = False
        for submission in self.submissions.values():
            if submission.author == player.id and submission.status == STATUS_EXCLUDED:
                submission.status = STATUS_FLAGGED if submission.reports > 0 else STATUS_ACTIVE
        return player

    def _ev_submission_flagged(self, payload: dict, seq: int, ts: str, replay: bool):
        submission = self.submissions.get(payload["submission_id"])
        if submission is None:
            raise UnknownSubmission(f"no submission {payload['submission_id']}")
        submission.moderator_flagged = True
        if submission.status == STATUS_ACTIVE:
            submission.status = STATUS_FLAGGED
        return submission
