"""Statistics over stored play data and corpus-audit retrieval.

All figures are computed over non-excluded data: submissions whose author
is banned are skipped, and so are reviews cast by banned players. Reports
do not count as reviews in averages or histograms, and the dislike
percentage uses likes+dislikes as its denominator.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .engine import GameEngine, Submission
from .errors import UnknownDay
from .lexical import LemmaDictionary, lemma_sequence, tokenize
from .matching import IdiomPattern, locate
from .store import CorpusRecord


@dataclass(frozen=True)
class DayStats:
    date: str
    idiom_id: str
    idiomatic_count: int
    nonidiomatic_count: int
    total: int
    avg_reviews_per_submission: float
    dislike_pct: float
    type_counts: dict[str, int]
    review_histogram: dict[int, int]
    hourly_interactions: list[int]  # 24 bins, submissions + reviews

    def as_dict(self) -> dict:
        return {
            "date": self.date,
            "idiom_id": self.idiom_id,
            "idiomatic_count": self.idiomatic_count,
            "nonidiomatic_count": self.nonidiomatic_count,
            "total": self.total,
            "avg_reviews_per_submission": self.avg_reviews_per_submission,
            "dislike_pct": self.dislike_pct,
            "type_counts": self.type_counts,
            "review_histogram": {str(k): v for k, v in sorted(self.review_histogram.items())},
            "hourly_interactions": self.hourly_interactions,
        }


def _counted_reviews(engine: GameEngine, submission: Submission) -> tuple[int, int]:
    """(likes, dislikes) from non-banned reviewers."""
    likes = dislikes = 0
    for review in submission.reviews.values():
        if engine.players[review.reviewer].banned:
            continue
        if review.verdict == "like":
            likes += 1
        elif review.verdict == "dislike":
            dislikes += 1
    return likes, dislikes


def day_stats(engine: GameEngine, date: str) -> DayStats:
    day = engine.days.get(date)
    if day is None:
        raise UnknownDay(f"no day recorded for {date}")
    submissions = [
        engine.submissions[sid] for sid in day.submission_ids if not engine.submissions[sid].excluded
    ]
    type_counts = {"A": 0, "B": 0, "C": 0, "D": 0}
    histogram: dict[int, int] = {}
    hourly = [0] * 24
    total_reviews = total_likes = total_dislikes = 0
    for submission in submissions:
        type_counts[submission.sample_type] += 1
        likes, dislikes = _counted_reviews(engine, submission)
        count = likes + dislikes
        histogram[count] = histogram.get(count, 0) + 1
        total_reviews += count
        total_likes += likes
        total_dislikes += dislikes
        hourly[datetime.fromisoformat(submission.created_at).hour] += 1
        for review in submission.reviews.values():
            if engine.players[review.reviewer].banned or review.verdict == "report":
                continue
            hourly[datetime.fromisoformat(review.timestamp).hour] += 1
    total = len(submissions)
    idiomatic = type_counts["A"] + type_counts["B"]
    rated = total_likes + total_dislikes
    return DayStats(
        date=date,
        idiom_id=day.idiom_id,
        idiomatic_count=idiomatic,
        nonidiomatic_count=total - idiomatic,
        total=total,
        avg_reviews_per_submission=total_reviews / total if total else 0.0,
        dislike_pct=100.0 * total_dislikes / rated if rated else 0.0,
        type_counts=type_counts,
        review_histogram=histogram,
        hourly_interactions=hourly,
    )


def all_day_stats(engine: GameEngine) -> list[DayStats]:
    return [day_stats(engine, date) for date in sorted(engine.days)]


def corpus_day_stats(records: list[CorpusRecord], date: str) -> DayStats:
    """DayStats recomputed from exported corpus records.

    Corpus records carry no time-of-day, so the hourly bins are zero here;
    every other field matches the live computation for the same data.
    """
    day_records = [r for r in records if r.date == date and not r.excluded]
    if not day_records:
        all_dates = {r.date for r in records}
        if date not in all_dates:
            raise UnknownDay(f"no corpus records for {date}")
    type_counts = {"A": 0, "B": 0, "C": 0, "D": 0}
    histogram: dict[int, int] = {}
    total_likes = total_dislikes = 0
    for record in day_records:
        type_counts[record.sample_type] += 1
        count = record.likes + record.dislikes
        histogram[count] = histogram.get(count, 0) + 1
        total_likes += record.likes
        total_dislikes += record.dislikes
    total = len(day_records)
    idiomatic = type_counts["A"] + type_counts["B"]
    rated = total_likes + total_dislikes
    return DayStats(
        date=date,
        idiom_id=day_records[0].idiom_id if day_records else "",
        idiomatic_count=idiomatic,
        nonidiomatic_count=total - idiomatic,
        total=total,
        avg_reviews_per_submission=(total_likes + total_dislikes) / total if total else 0.0,
        dislike_pct=100.0 * total_dislikes / rated if rated else 0.0,
        type_counts=type_counts,
        review_histogram=histogram,
        hourly_interactions=[0] * 24,
    )


def find_candidate_sentences(
    sentences: list[str],
    pattern: IdiomPattern,
    dictionary: LemmaDictionary,
) -> list[tuple[str, bool]]:
    """Audit shortlist: sentences containing every constituent lemma.

    Containment is order-free (a lemma anywhere in the sentence counts), so
    the list is a superset of what ``locate`` accepts; each entry carries
    whether a full positional match was found. Reviewing the unmatched
    entries is how missed positives are caught.
    """
    results: list[tuple[str, bool]] = []
    for sentence in sentences:
        if not sentence or not sentence.strip():
            continue
        tokens = tokenize(sentence)
        lemmas = lemma_sequence(tokens, dictionary)
        all_lemmas = set().union(*lemmas) if lemmas else set()
        if not all(c in all_lemmas for c in pattern.constituents):
            continue
        match = locate(tokens, lemmas, pattern)
        results.append((sentence, match is not None))
    return results
