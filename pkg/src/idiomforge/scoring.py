"""Submission scoring, the class-balance controller, and achievements.

Base per-type submission scores are 10/12/10/10 for A/B/C/D: B pays a small
premium because separated idiomatic uses are the hardest to elicit. When
the day's A-count runs ahead of the C-count by the activation threshold
(15), nonidiomatic types get a +5 boost until the difference falls back
under the release threshold (5); the symmetric rule boosts idiomatic types.
The two thresholds make the controller a hysteresis loop: inside the band
the state keeps whatever it was, so scores do not flap.

Likes pay the author the submission's score *snapshot* taken at submission
time; a later balance change never rewrites already-awarded points.
Reviews pay the reviewer 1 point, or 2 during a happy hour. Reports pay
nothing and emit no point event.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .matching import SampleType

BASE_SCORES = (10, 12, 10, 10)
BOOST_DELTA = 5
ACTIVATION_THRESHOLD = 15
RELEASE_THRESHOLD = 5
LEVEL_DIVISOR = 100

AUTHOR_THRESHOLD = 10  # submissions in one day
REVIEWER_THRESHOLD = 25  # reviews in one day
STREAK_DAYS = 3  # consecutive active days
EARLY_BIRD_MINUTES = 60  # of the play window


class BalanceMode(str, Enum):
    NEUTRAL = "neutral"
    BOOST_NONIDIOMATIC = "boost_nonidiomatic"
    BOOST_IDIOMATIC = "boost_idiomatic"


class Verdict(str, Enum):
    LIKE = "like"
    DISLIKE = "dislike"
    REPORT = "report"


class AchievementId(str, Enum):
    EARLY_BIRD = "early_bird"
    AUTHOR = "author"
    REVIEWER = "reviewer"
    STREAK = "streak"


@dataclass(frozen=True)
class TypeScores:
    a: int
    b: int
    c: int
    d: int

    def for_type(self, sample_type: SampleType) -> int:
        return getattr(self, sample_type.value.lower())

    def as_dict(self) -> dict[str, int]:
        return {"A": self.a, "B": self.b, "C": self.c, "D": self.d}


def update_balance(
    counts: dict[str, int],
    state: BalanceMode,
    *,
    activation: int = ACTIVATION_THRESHOLD,
    release: int = RELEASE_THRESHOLD,
    compare: str = "a_vs_c",
) -> BalanceMode:
    """One step of the balance controller given the day's type counts.

    ``compare`` selects what the controller measures: ``a_vs_c`` (the shipped
    rule, #A against #C) or ``idio_vs_nonidio`` (#A+#B against #C+#D).
    """
    if compare == "idio_vs_nonidio":
        idio = counts.get("A", 0) + counts.get("B", 0)
        nonidio = counts.get("C", 0) + counts.get("D", 0)
    else:
        idio = counts.get("A", 0)
        nonidio = counts.get("C", 0)
    if state is BalanceMode.NEUTRAL:
        if idio >= nonidio + activation:
            return BalanceMode.BOOST_NONIDIOMATIC
        if nonidio >= idio + activation:
            return BalanceMode.BOOST_IDIOMATIC
        return state
    if abs(idio - nonidio) < release:
        return BalanceMode.NEUTRAL
    return state


def effective_scores(
    state: BalanceMode,
    *,
    base: TypeScores = TypeScores(*BASE_SCORES),
    boost: int = BOOST_DELTA,
) -> TypeScores:
    """Per-type submission scores under the given balance state."""
    if state is BalanceMode.BOOST_NONIDIOMATIC:
        return TypeScores(base.a, base.b, base.c + boost, base.d + boost)
    if state is BalanceMode.BOOST_IDIOMATIC:
        return TypeScores(base.a + boost, base.b + boost, base.c, base.d)
    return base


def review_points(happy_hour_active: bool, *, base: int = 1, happy: int = 2) -> int:
    """Points for one like/dislike review. Reports never reach this."""
    return happy if happy_hour_active else base


def level_for(total_points: int, *, divisor: int = LEVEL_DIVISOR) -> int:
    return 1 + total_points // divisor


@dataclass(frozen=True)
class PlayerDaySummary:
    """What one player did today, as seen by the achievement check."""

    submissions_today: int
    reviews_today: int
    minutes_into_window: int | None  # of the latest submission, None if none yet
    consecutive_active_days: int
    unlocked_today: frozenset[str] = frozenset()
    streak_unlocked_ever: bool = False


def check_achievements(
    summary: PlayerDaySummary,
    *,
    author_threshold: int = AUTHOR_THRESHOLD,
    reviewer_threshold: int = REVIEWER_THRESHOLD,
    streak_days: int = STREAK_DAYS,
    early_bird_minutes: int = EARLY_BIRD_MINUTES,
) -> set[AchievementId]:
    """Newly unlocked achievements for this activity summary.

    Early Bird, Author and Reviewer unlock at most once per day; Streak at
    most once per player lifetime.
    """
    unlocked: set[AchievementId] = set()
    if (
        summary.minutes_into_window is not None
        and 0 <= summary.minutes_into_window < early_bird_minutes
        and summary.submissions_today >= 1
        and AchievementId.EARLY_BIRD.value not in summary.unlocked_today
    ):
        unlocked.add(AchievementId.EARLY_BIRD)
    if (
        summary.submissions_today >= author_threshold
        and AchievementId.AUTHOR.value not in summary.unlocked_today
    ):
        unlocked.add(AchievementId.AUTHOR)
    if (
        summary.reviews_today >= reviewer_threshold
        and AchievementId.REVIEWER.value not in summary.unlocked_today
    ):
        unlocked.add(AchievementId.REVIEWER)
    if summary.consecutive_active_days >= streak_days and not summary.streak_unlocked_ever:
        unlocked.add(AchievementId.STREAK)
    return unlocked
