"""Deterministic simulated crowd for studying scoring policies.

Agents drive the full engine through the loopback chat transport, exactly
the way a human player would: menu choice, free text, label answer, review
verdict. Sentences come from per-idiom template banks with controlled gap
insertion, so an agent can produce any sample type on demand and the
classifier's verdict can be checked against the intended type.

Three scoring regimes can be advertised to the agents:

* ``hysteresis`` - the live engine's balance-controlled scores;
* ``fixed_30_40_20_10`` - the historical fixed per-type scores, which let
  score-greedy agents collapse the distribution onto B-type;
* ``decay`` - the historical variant where a type's advertised score decays
  as submissions of that type arrive.

The regimes only change what agents *see* when choosing a type; stored
submissions are always scored by the live engine. Identical config and
seed produce byte-identical reports.
"""
from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import asdict, dataclass, field
from datetime import date as date_cls
from datetime import datetime, timedelta
from pathlib import Path

from .config import GameConfig
from .engine import GameEngine
from .errors import ConfigInvalid
from .l10n import CatalogSet, load_default_catalogs
from .lexical import LemmaDictionary
from .matching import Constituent, IdiomPattern, Wildcard, parse_idiom_line
from .transport import ChatFrontend, LoopbackTransport

POLICIES = ("greedy_type", "natural_mix", "review_heavy", "near_duplicator")
REGIMES = ("hysteresis", "fixed_30_40_20_10", "decay")

FIXED_SCORES = {"A": 30, "B": 40, "C": 20, "D": 10}
DECAY_FACTOR = 0.9

# exploration mix used by greedy agents and the base mix of natural agents;
# idiomatic juxtaposed samples are what people produce most readily
NATURAL_WEIGHTS = {"A": 0.5, "B": 0.2, "C": 0.2, "D": 0.1}
NATURAL_MIX_WEIGHTS = {"A": 0.45, "B": 0.15, "C": 0.3, "D": 0.1}

SIM_IDIOM_LINES = [
    "hold-tongue\thold * tongue\tto hold a tongue\tto stop talking",
    "pull-leg\tpull * leg\tto pull a leg\tto tease someone",
    "break-ice\tbreak * ice\tto break ice\tto ease a first meeting",
    "spill-beans\tspill * beans\tto spill beans\tto reveal a secret",
    "bite-bullet\tbite * bullet\tto bite a bullet\tto face the unpleasant",
    "keep-word\tkeep * word\tto keep a word\tto honor a promise",
    "clear-air\tclear * air\tto clear air\tto resolve a tension",
    "raise-bar\traise * bar\tto raise a bar\tto lift the standard",
    "bend-rule\tbend * rule\tto bend a rule\tto stretch what is allowed",
    "drop-ball\tdrop * ball\tto drop a ball\tto miss a duty",
]

OPENERS = [
    "Today", "Yesterday", "Sometimes", "Honestly", "Clearly", "Somehow",
    "Eventually", "Apparently", "Naturally", "Recently", "Quietly", "Suddenly",
]
SUBJECTS = [
    "the teacher", "my neighbor", "our captain", "the old clerk", "her cousin",
    "the young poet", "his mentor", "that farmer", "the pilot", "my sister",
    "the janitor", "our guest",
]
AUXES = ["will", "must", "can", "should", "might", "would"]
GAPFILL = ["your", "my", "the", "his", "her", "that", "this", "our"]
EXTRAFILL = ["rather", "quite", "really", "truly", "gently", "slowly", "barely", "firmly"]
TAILS = [
    "without any fuss", "before dinner", "during the meeting", "for a while",
    "with great care", "near the harbor", "despite the noise", "after the storm",
    "under the bridge", "beside the window", "against all advice", "past midnight",
]

VERDICT_WEIGHTS = {"like": 0.80, "dislike": 0.17, "report": 0.03}
GRUMPY_VERDICT_WEIGHTS = {"like": 0.30, "dislike": 0.60, "report": 0.10}


@dataclass(frozen=True)
class SimConfig:
    players: int = 20
    days: int = 1
    policy: str = "natural_mix"
    scoring: str = "hysteresis"
    seed: int = 1
    language: str = "en"
    submissions_per_player: int = 5
    reviews_per_player: int = 8
    lurkers: int = 0
    happy_hour_at: str | None = None  # "HH:MM"
    start_date: str = "2021-03-01"

    def validate(self) -> "SimConfig":
        if self.policy not in POLICIES:
            raise ConfigInvalid(f"unknown policy {self.policy!r}, expected one of {POLICIES}")
        if self.scoring not in REGIMES:
            raise ConfigInvalid(f"unknown scoring regime {self.scoring!r}, expected one of {REGIMES}")
        if self.players < 0 or self.days < 0:
            raise ConfigInvalid("players and days must be non-negative")
        return self


@dataclass
class SimReport:
    config: dict
    days: list[dict]
    totals: dict

    def to_jsonl(self) -> str:
        lines = [json.dumps({"kind": "config", **self.config}, sort_keys=True)]
        for day in self.days:
            lines.append(json.dumps({"kind": "day", **day}, sort_keys=True))
        lines.append(json.dumps({"kind": "totals", **self.totals}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def summary_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "date", "idiom_id", "submissions", "reviews", "rejected_duplicates",
                "near_duplicates", "A", "B", "C", "D", "b_share_pct",
                "max_abs_a_minus_c", "balance_changes", "review_count_min",
                "review_count_max",
            ]
        )
        for day in self.days:
            tc = day["type_counts"]
            writer.writerow(
                [
                    day["date"], day["idiom_id"], day["submissions"], day["reviews"],
                    day["rejected_duplicates"], day["near_duplicates"],
                    tc["A"], tc["B"], tc["C"], tc["D"], day["b_share_pct"],
                    day["max_abs_a_minus_c"], len(day["balance_timeline"]) - 1,
                    day["review_count_min"], day["review_count_max"],
                ]
            )
        return buf.getvalue()

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        report_path = out_dir / "report.jsonl"
        report_path.write_text(self.to_jsonl(), encoding="utf-8")
        csv_path = out_dir / "summary.csv"
        csv_path.write_text(self.summary_csv(), encoding="utf-8")
        return {"report": report_path, "summary": csv_path}


class SentenceFactory:
    """Template-bank sentence generator for one idiom pattern.

    Composition is controlled: the number of filler words inserted between
    constituents decides juxtaposed vs separated, so the requested sample
    type is exactly what the classifier will assign. A unique marker token
    keeps honest agents clear of the duplicate detector.
    """

    def __init__(self, pattern: IdiomPattern, rng: random.Random):
        self.pattern = pattern
        self.rng = rng
        self.counter = 0
        constituents = set(pattern.constituents)
        self.gapfill = [w for w in GAPFILL if w not in constituents]
        self.extrafill = [w for w in EXTRAFILL if w not in constituents]

    def compose(self, sample_type: str) -> tuple[str, bool]:
        self.counter += 1
        rng = self.rng
        juxtaposed = sample_type in ("A", "C")
        idiomatic = sample_type in ("A", "B")
        words: list[str] = [rng.choice(OPENERS).lower(), *rng.choice(SUBJECTS).split(), rng.choice(AUXES)]
        capacities = self.pattern.gap_capacities()
        constituents = list(self.pattern.constituents)
        for i, constituent in enumerate(constituents):
            words.append(constituent)
            if i < len(constituents) - 1:
                cap = capacities[i]
                if juxtaposed:
                    k = rng.randint(0, cap)
                elif i == 0:
                    k = cap + 1 + rng.randint(0, 2)
                else:
                    k = rng.randint(0, cap)
                words.extend(self._fillers(k))
        words.extend(rng.choice(TAILS).split())
        words.append(f"q{self.counter}")
        text = " ".join(words)
        text = text[0].upper() + text[1:] + "."
        return text, idiomatic

    def _fillers(self, k: int) -> list[str]:
        out = []
        for j in range(k):
            pool = self.gapfill if j == 0 else self.extrafill
            out.append(self.rng.choice(pool))
        return out


def advertised_scores(regime: str, engine: GameEngine, date: str) -> dict[str, int]:
    if regime == "fixed_30_40_20_10":
        return dict(FIXED_SCORES)
    if regime == "decay":
        counts = engine.days[date].type_counts
        return {
            t: max(1, round(FIXED_SCORES[t] * DECAY_FACTOR ** counts[t]))
            for t in ("A", "B", "C", "D")
        }
    return engine.effective_scores(date).as_dict()


def _weighted_choice(rng: random.Random, weights: dict[str, float]) -> str:
    items = sorted(weights)
    return rng.choices(items, weights=[weights[k] for k in items], k=1)[0]


def choose_type(policy: str, rng: random.Random, scores: dict[str, int]) -> str:
    if policy in ("greedy_type", "review_heavy", "near_duplicator"):
        if rng.random() < 0.2:  # exploration keeps all four types reachable
            return _weighted_choice(rng, NATURAL_WEIGHTS)
        best = max(scores.values())
        tied = [t for t, s in scores.items() if s == best]
        if len(tied) == 1:
            return tied[0]
        prefs = {t: NATURAL_WEIGHTS[t] for t in tied}
        return max(sorted(tied), key=lambda t: prefs[t])
    return _weighted_choice(rng, NATURAL_MIX_WEIGHTS)


def run_sim(config: SimConfig) -> tuple[SimReport, GameEngine]:
    config = config.validate()
    rng = random.Random(config.seed)
    game_config = GameConfig(tip_seed=config.seed)
    engine = GameEngine(
        game_config,
        language=config.language,
        dictionary=LemmaDictionary.empty(config.language),
    )
    frontend = _SimClockFrontend(engine, load_default_catalogs(), config.language)
    loop = LoopbackTransport(frontend)

    agents = [f"sim-p{i:02d}" for i in range(1, config.players + 1)]
    lurkers = [f"sim-lurker{i:02d}" for i in range(1, config.lurkers + 1)]
    start = date_cls.fromisoformat(config.start_date)

    frontend.now = datetime.combine(start, datetime.min.time()).replace(hour=9)
    # idioms go through the command log so a sim log replays self-contained
    idioms = [engine.schedule_idiom(line, frontend.now) for line in SIM_IDIOM_LINES]
    for player in agents + lurkers:
        loop.start(player, player)

    day_reports = []
    for day_index in range(config.days):
        date = (start + timedelta(days=day_index)).isoformat()
        idiom = idioms[day_index % len(idioms)]
        day_reports.append(
            _run_day(config, engine, frontend, loop, agents, rng, date, idiom)
        )

    totals = {
        "submissions": sum(d["submissions"] for d in day_reports),
        "reviews": sum(d["reviews"] for d in day_reports),
        "rejected_duplicates": sum(d["rejected_duplicates"] for d in day_reports),
        "near_duplicates": sum(d["near_duplicates"] for d in day_reports),
        "type_counts": {
            t: sum(d["type_counts"][t] for d in day_reports) for t in ("A", "B", "C", "D")
        },
        "players": config.players,
        "lurkers": config.lurkers,
    }
    report = SimReport(config=asdict(config), days=day_reports, totals=totals)
    return report, engine


class _SimClockFrontend(ChatFrontend):
    """ChatFrontend with an assignable simulated clock."""

    def __init__(self, engine, catalogs, language):
        self.now = datetime(2021, 1, 1, 9, 0)
        super().__init__(engine, catalogs, language, clock=lambda: self.now)


def _run_day(config, engine, frontend, loop, agents, rng, date, idiom):
    window_open = datetime.fromisoformat(f"{date}T11:00:00")
    window_len_s = 12 * 3600 - 60  # act strictly inside [11:00, 22:59]

    frontend.now = datetime.fromisoformat(f"{date}T09:00:00")
    engine.open_day(date, idiom.id, frontend.now)
    factory = SentenceFactory(idiom, rng)

    actions: list[tuple[float, str, str]] = []  # (sort key, agent, kind)
    review_phased = config.policy == "review_heavy"
    for agent in agents:
        for _ in range(config.submissions_per_player):
            # review-heavy days finish submitting before reviewing starts,
            # so the fewest-first queue can spread reviews evenly
            key = rng.random() * 0.25 if review_phased else rng.random()
            actions.append((key, agent, "submit"))
        for _ in range(config.reviews_per_player):
            # reviews skew later in the day, like real play
            key = 0.3 + rng.random() * 0.7 if review_phased else rng.random() + 0.35
            actions.append((key, agent, "review"))
    actions.sort(key=lambda a: (a[0], a[1]))

    schedule: list[tuple[datetime, str, str]] = []
    n = max(1, len(actions))
    for i, (_, agent, kind) in enumerate(actions):
        offset = int(i * window_len_s / n)
        schedule.append((window_open + timedelta(seconds=offset), agent, kind))
    if config.happy_hour_at:
        hh_time = datetime.fromisoformat(f"{date}T{config.happy_hour_at}:00")
        schedule.append((hh_time, "sim-mod", "happy_hour"))
        schedule.sort(key=lambda item: item[0])

    rejected_duplicates = 0
    reviews_done = 0
    type_mismatches = 0
    soft_target_trace = []
    max_abs_gap = 0
    last_sentence: dict[str, str] = {}

    for when, agent, kind in schedule:
        frontend.now = when
        if kind == "happy_hour":
            engine.start_happy_hour("sim-mod", when)
            continue
        if kind == "submit":
            scores = advertised_scores(config.scoring, engine, date)
            target_type = choose_type(config.policy, rng, scores)
            if config.policy == "near_duplicator" and agent in last_sentence and rng.random() < 0.6:
                if rng.random() < 0.5:
                    text = last_sentence[agent]  # exact resend
                else:
                    words = last_sentence[agent].rstrip(".").split()
                    words[-1] = f"q{factory.counter + 1}x"  # minimal edit
                    text = " ".join(words) + "."
                idiomatic = True
            else:
                text, idiomatic = factory.compose(target_type)
            responses = loop.choose(agent, "submit")
            if responses and responses[0].key != "submit_prompt":
                continue  # outside window or similar; skip this action
            responses = loop.say(agent, text)
            if not responses or responses[0].key != "submit_label_question":
                if responses and responses[0].key == "err_duplicate":
                    rejected_duplicates += 1
                continue
            label = "label_idiomatic" if idiomatic else "label_nonidiomatic"
            loop.choose(agent, label)
            last_sentence[agent] = text
            stored = engine.submissions[max(engine.submissions)]
            if config.policy != "near_duplicator" and stored.sample_type != target_type:
                type_mismatches += 1
            day = engine.days[date]
            gap = abs(day.type_counts["A"] - day.type_counts["C"])
            max_abs_gap = max(max_abs_gap, gap)
            view = engine.scoreboard(date)
            soft_target_trace.append(
                [day.submission_count, view.soft_target_remaining is not None]
            )
        else:
            responses = loop.choose(agent, "review")
            if not responses or responses[0].key != "review_prompt":
                continue
            weights = (
                GRUMPY_VERDICT_WEIGHTS if config.policy == "near_duplicator" else VERDICT_WEIGHTS
            )
            verdict = _weighted_choice(rng, weights)
            loop.verdict(agent, verdict)
            reviews_done += 1

    day = engine.days[date]
    eligible = [engine.submissions[sid] for sid in day.submission_ids]
    review_counts = [s.review_count for s in eligible] or [0]
    total = max(1, day.submission_count)
    notif_by_kind: dict[str, int] = {}
    for notification in engine.notifications:
        notif_by_kind[notification.kind] = notif_by_kind.get(notification.kind, 0) + 1
    return {
        "date": date,
        "idiom_id": idiom.id,
        "submissions": day.submission_count,
        "reviews": reviews_done,
        "rejected_duplicates": rejected_duplicates,
        "near_duplicates": sum(1 for s in eligible if s.near_duplicate_of is not None),
        "type_counts": dict(day.type_counts),
        "b_share_pct": round(100.0 * day.type_counts["B"] / total, 2),
        "max_abs_a_minus_c": max_abs_gap,
        "balance_timeline": list(day.balance_timeline),
        "review_count_min": min(review_counts),
        "review_count_max": max(review_counts),
        "type_mismatches": type_mismatches,
        "soft_target_trace": soft_target_trace,
        "leaderboard": [
            [entry.player_id, entry.points] for entry in engine.scoreboard(date).entries
        ],
    }
