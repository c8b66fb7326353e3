"""Acceptance suite: one test per release criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS line per
criterion. Everything here drives the engine through public surfaces (the
loopback transport for simulated crowds, engine commands, the CLI for the
catalog lint) with pinned seeds and tolerances.
"""
from __future__ import annotations

import itertools
import random
import time as time_mod
from datetime import datetime

import pytest
from click.testing import CliRunner

from idiomforge.analytics import corpus_day_stats, day_stats, find_candidate_sentences
from idiomforge.cli import main as cli_main
from idiomforge.config import GameConfig
from idiomforge.engine import GameEngine
from idiomforge.l10n import load_default_catalogs
from idiomforge.lexical import LemmaDictionary, lemma_sequence, tokenize
from idiomforge.matching import classify, locate, parse_idiom_line, parse_pattern
from idiomforge.scoring import BalanceMode, TypeScores, effective_scores, update_balance
from idiomforge.simulator import SimConfig, run_sim
from idiomforge.store import export_corpus

from conftest import DAY, EN_DICT, HOLD_TONGUE, at, submit_labeled
from test_matching import oracle_locate, random_instance


def _passed(label: str) -> None:
    print(f"[PASS] {label}")


# --------------------------------------------------------------------- #


class TestC01ClassificationGoldenSet:
    GOLDEN = [
        ("Please hold your tongue and wait.", True, "A"),
        (
            "Please hold your breath and tongue and wait for the exciting announcements.",
            True,
            "B",
        ),
        ("Use sterile tongue depressor to hold patient's tongue down.", False, "C"),
        ("Hold on to your mother tongue.", False, "D"),
    ]

    def test_golden_sentences_and_oracle(self):
        started = time_mod.perf_counter()
        pattern = parse_pattern("hold * tongue", "en")
        for text, idiomatic, expected in self.GOLDEN:
            tokens = tokenize(text)
            match = locate(tokens, lemma_sequence(tokens, EN_DICT), pattern)
            assert match is not None, text
            assert classify(match, idiomatic).value == expected, text

        rng = random.Random(20210)
        matched = 0
        for _ in range(200):
            tokens, lemmas, pat = random_instance(rng)
            expected = oracle_locate(tokens, lemmas, pat)
            got = locate(tokens, lemmas, pat)
            if expected is None:
                assert got is None
            else:
                assert (tuple(got.constituent_positions), got.gap_tokens) == expected
                matched += 1
        assert matched > 50
        elapsed = time_mod.perf_counter() - started
        assert elapsed < 5.0, f"classification suite took {elapsed:.2f}s"
        _passed(
            f"classification golden set: 4 canonical sentences -> A,B,C,D; "
            f"200 random instances match brute-force oracle in {elapsed:.2f}s"
        )


class TestC02ScoringTable:
    def test_effective_scores_and_hysteresis(self):
        assert effective_scores(BalanceMode.NEUTRAL) == TypeScores(10, 12, 10, 10)
        assert effective_scores(BalanceMode.BOOST_NONIDIOMATIC) == TypeScores(10, 12, 15, 15)
        assert effective_scores(BalanceMode.BOOST_IDIOMATIC) == TypeScores(15, 17, 10, 10)

        for gap in range(0, 31):
            for a, c in ((gap, 0), (0, gap)):
                counts = {"A": a, "B": 0, "C": c, "D": 0}
                from_neutral = update_balance(counts, BalanceMode.NEUTRAL)
                expected_boost = (
                    BalanceMode.BOOST_NONIDIOMATIC if a >= c else BalanceMode.BOOST_IDIOMATIC
                )
                if gap >= 15:
                    assert from_neutral is expected_boost, (a, c)
                else:
                    assert from_neutral is BalanceMode.NEUTRAL, (a, c)
                for boost in (BalanceMode.BOOST_NONIDIOMATIC, BalanceMode.BOOST_IDIOMATIC):
                    from_boost = update_balance(counts, boost)
                    if gap < 5:
                        assert from_boost is BalanceMode.NEUTRAL, (a, c, boost)
                    else:
                        assert from_boost is boost, (a, c, boost)

        # crafted stream: up through the band, activate, back through the band, release
        state = BalanceMode.NEUTRAL
        for a in range(0, 15):
            state = update_balance({"A": a, "B": 0, "C": 0, "D": 0}, state)
            assert state is BalanceMode.NEUTRAL
        state = update_balance({"A": 15, "B": 0, "C": 0, "D": 0}, state)
        assert state is BalanceMode.BOOST_NONIDIOMATIC
        for gap in range(14, 4, -1):
            state = update_balance({"A": gap, "B": 0, "C": 0, "D": 0}, state)
            assert state is BalanceMode.BOOST_NONIDIOMATIC
        state = update_balance({"A": 4, "B": 0, "C": 0, "D": 0}, state)
        assert state is BalanceMode.NEUTRAL
        _passed(
            "scoring table: (10,12,10,10)/(10,12,15,15)/(15,17,10,10) exact; "
            "hysteresis activates at gap>=15, releases at gap<5, exhaustive over gaps 0-30"
        )


class TestC03HappyHour:
    def test_doubling_and_end_exclusive_boundary(self):
        engine = GameEngine(
            GameConfig(), language="en", dictionary=EN_DICT,
            idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
        )
        for pid in ("ann", "bob", "cat", "dan"):
            engine.register_player(pid, pid.title(), at(9))
        engine.open_day(DAY, "hold-tongue", at(9))
        submit_labeled(engine, "ann", "Please hold your tongue and wait.", at(12))
        before = engine.record_review("bob", 1, "dislike", at(16, 59, 59))
        assert before.reviewer_points == 1
        engine.start_happy_hour("mod", at(17))
        inside_start = engine.record_review("cat", 1, "like", at(17, 0, 0))
        assert inside_start.reviewer_points == 2
        submit_labeled(engine, "bob", "Also kindly hold your tongue today.", at(17, 30))
        inside_end = engine.record_review("dan", 2, "like", at(17, 59, 59))
        assert inside_end.reviewer_points == 2
        at_end = engine.record_review("ann", 2, "dislike", at(18, 0, 0))
        assert at_end.reviewer_points == 1
        _passed("happy hour: reviews award 2 inside the 60-minute window, 1 outside; end boundary exclusive")


class TestC04ReviewQueueFairness:
    def test_twenty_agents_hundred_submissions(self):
        report, engine = run_sim(
            SimConfig(
                players=20, days=1, policy="review_heavy", scoring="hysteresis",
                seed=11, submissions_per_player=5, reviews_per_player=60,
            )
        )
        day = report.days[0]
        assert day["submissions"] == 100
        spread = day["review_count_max"] - day["review_count_min"]
        assert spread <= 1, f"review count spread {spread}"
        for submission in engine.submissions.values():
            assert submission.author not in submission.reviews
            assert len(submission.reviews) == len(set(submission.reviews))
        _passed(
            f"review-queue fairness: 20 agents, 100 submissions, {day['reviews']} reviews, "
            f"max-min review count = {spread} <= 1; no self or duplicate review"
        )


class TestC05ReplayDeterminism:
    def test_ten_seeded_days_replay_identical(self, tmp_path):
        report, engine = run_sim(
            SimConfig(
                players=8, days=10, policy="natural_mix", scoring="hysteresis",
                seed=2021, submissions_per_player=4, reviews_per_player=6,
                happy_hour_at="17:00",
            )
        )
        assert len(engine.days) == 10
        log_file = engine.dump_log(tmp_path / "events.jsonl")
        replayed = GameEngine.load(log_file, dictionary=LemmaDictionary.empty("en"))
        assert replayed.state_hash() == engine.state_hash()
        for date in engine.days:
            assert replayed.days[date].balance_timeline == engine.days[date].balance_timeline
            assert replayed.days[date].type_counts == engine.days[date].type_counts
            assert replayed._leaderboard_order(replayed.days[date]) == engine._leaderboard_order(
                engine.days[date]
            )
        assert [n.signature() for n in replayed.notifications] == [
            n.signature() for n in engine.notifications
        ]
        _passed(
            "replay determinism: 10 seeded simulator days replay to identical "
            "leaderboard, type counts, balance timeline, and notification sequence (state hash equal)"
        )


class TestC06SoftTarget:
    def test_message_iff_below_100_and_never_returns(self):
        report, engine = run_sim(
            SimConfig(
                players=20, days=1, policy="natural_mix", scoring="hysteresis",
                seed=5, submissions_per_player=6, reviews_per_player=2,
            )
        )
        trace = report.days[0]["soft_target_trace"]
        assert trace[-1][0] >= 100, "run never reached the target"
        for count, present in trace:
            assert present == (count < 100), (count, present)
        seen_absent = False
        for _, present in trace:
            if not present:
                seen_absent = True
            if seen_absent:
                assert not present
        _passed(
            "soft target: remaining-count message shown iff submissions < 100 "
            "and disappears permanently at 100 (simulator-driven)"
        )


class TestC07NotificationPolicy:
    def test_inactive_players_and_like_cooldown(self):
        report, engine = run_sim(
            SimConfig(
                players=10, days=1, policy="natural_mix", scoring="hysteresis",
                seed=13, submissions_per_player=6, reviews_per_player=10,
                lurkers=4, happy_hour_at="17:00",
            )
        )
        lurkers = {pid for pid in engine.players if pid.startswith("sim-lurker")}
        broadcast = {"Morning", "ScoreChange", "HappyHour"}
        kinds_seen = set()
        for notification in engine.notifications:
            kinds_seen.add(notification.kind)
            if notification.kind not in broadcast:
                assert not (set(notification.recipients) & lurkers), notification.kind
        assert "LikeReceived" in kinds_seen  # the policy was actually exercised
        like_times: dict[str, list[datetime]] = {}
        for notification in engine.notifications:
            if notification.kind == "LikeReceived":
                for recipient in notification.recipients:
                    like_times.setdefault(recipient, []).append(
                        datetime.fromisoformat(notification.sent_at)
                    )
        cooldown_s = engine.config.like_cooldown_minutes * 60
        for author, times in like_times.items():
            times.sort()
            for earlier, later in zip(times, times[1:]):
                assert (later - earlier).total_seconds() >= cooldown_s, author
        _passed(
            "notification policy: inactive players received only Morning/ScoreChange/HappyHour; "
            "LikeReceived respects the 10-minute per-author cooldown"
        )


class TestC08SimulatorRegimes:
    def test_fixed_scores_collapse_onto_b(self):
        report, _ = run_sim(
            SimConfig(players=20, days=1, policy="greedy_type", scoring="fixed_30_40_20_10", seed=13)
        )
        b_share = report.days[0]["b_share_pct"]
        assert b_share > 70.0, b_share
        _passed(f"simulator regimes: fixed 30/40/20/10 + greedy agents -> B-share {b_share}% > 70%")

    def test_hysteresis_bounds_class_gap(self):
        report, _ = run_sim(
            SimConfig(
                players=20, days=3, policy="greedy_type", scoring="hysteresis",
                seed=13, submissions_per_player=15, reviews_per_player=5,
            )
        )
        gaps = [d["max_abs_a_minus_c"] for d in report.days]
        assert all(gap <= 19 for gap in gaps), gaps
        assert any(len(d["balance_timeline"]) > 1 for d in report.days), "controller never engaged"
        _passed(f"simulator regimes: hysteresis keeps |#A-#C| <= 19 at all times (per-day maxima {gaps})")

    def test_identical_seeds_byte_identical_reports(self):
        cfg = SimConfig(players=9, days=2, policy="greedy_type", scoring="hysteresis", seed=31)
        first, _ = run_sim(cfg)
        second, _ = run_sim(cfg)
        assert first.to_jsonl().encode() == second.to_jsonl().encode()
        assert first.summary_csv().encode() == second.summary_csv().encode()
        _passed("simulator regimes: identical config+seed give byte-identical reports")


class TestC09LemmaRetrieval:
    def test_inflection_retrieval_and_superset(self):
        dictionary = LemmaDictionary("en", {"went": frozenset({"go"})})
        pattern = parse_pattern("go home", "en")
        got = find_candidate_sentences(
            ["He went home.", "Home prices go up.", "She goes."], pattern, dictionary
        )
        assert ("He went home.", True) in got
        assert [s for s, _ in got] == ["He went home.", "Home prices go up."]

        rng = random.Random(909)
        vocab = ["go", "went", "home", "tree", "fast", "the", "a", "now"]
        for _ in range(100):
            corpus = [
                " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 9))) + "."
                for _ in range(rng.randint(0, 7))
            ]
            candidates = dict(find_candidate_sentences(corpus, pattern, dictionary))
            for sentence in corpus:
                tokens = tokenize(sentence)
                if locate(tokens, lemma_sequence(tokens, dictionary), pattern) is not None:
                    assert candidates.get(sentence) is True
        _passed(
            "lemma retrieval: 'He went home.' found for pattern 'go home' via went->go; "
            "superset property holds on 100 random fixtures"
        )


class TestC10ExportRoundTrip:
    def test_event_log_roundtrip_identical_day_stats(self, tmp_path):
        _, engine = run_sim(
            SimConfig(
                players=8, days=5, policy="natural_mix", scoring="hysteresis",
                seed=404, submissions_per_player=4, reviews_per_player=6,
            )
        )
        log_file = engine.dump_log(tmp_path / "events.jsonl")
        fresh = GameEngine.load(log_file, dictionary=LemmaDictionary.empty("en"))
        for date in sorted(engine.days):
            assert day_stats(fresh, date) == day_stats(engine, date), date
        # corpus-format roundtrip: every corpus-derivable field matches live
        records = list(export_corpus(engine))
        for date in sorted(engine.days):
            live = day_stats(engine, date)
            corpus = corpus_day_stats(records, date)
            assert corpus.total == live.total
            assert corpus.type_counts == live.type_counts
            assert corpus.review_histogram == live.review_histogram
            assert corpus.avg_reviews_per_submission == live.avg_reviews_per_submission
            assert corpus.dislike_pct == live.dislike_pct

    def test_ban_exclusion_changes_stats_by_exactly_that_player(self):
        def play(include_dan: bool) -> GameEngine:
            engine = GameEngine(
                GameConfig(), language="en", dictionary=EN_DICT,
                idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
            )
            for pid in ("ann", "bob", "cat", "dan"):
                engine.register_player(pid, pid.title(), at(9))
            engine.open_day(DAY, "hold-tongue", at(9))
            submit_labeled(engine, "ann", "Please hold your tongue and wait.", at(11, 10))
            submit_labeled(engine, "bob", "Try to hold the frog tongue still.", at(11, 20), idiomatic=False)
            if include_dan:
                submit_labeled(engine, "dan", "Hold on to your mother tongue.", at(11, 30), idiomatic=False)
            engine.record_review("bob", 1, "like", at(12, 0))
            engine.record_review("cat", 2, "dislike", at(12, 10))
            if include_dan:
                engine.record_review("dan", 1, "like", at(12, 20))
                engine.record_review("cat", 3, "like", at(12, 30))
            return engine

        full = play(include_dan=True)
        full.ban("mod", "dan", "acceptance", at(13))
        without = play(include_dan=False)
        assert day_stats(full, DAY) == day_stats(without, DAY)
        _passed(
            "export round-trip: fresh import reproduces identical DayStats for all fixture days; "
            "banning a player shifts stats by exactly that player's contribution"
        )


class TestC11CatalogParity:
    def test_parity_and_lint_exit_codes(self, tmp_path):
        catalogs = load_default_catalogs(lint=False)
        assert set(catalogs.languages) == {"en", "it", "tr"}
        assert catalogs.lint() == []
        en_keys = catalogs.catalogs["en"].keys()
        for language in ("it", "tr"):
            assert catalogs.catalogs[language].keys() == en_keys
            for key in en_keys:
                assert catalogs.catalogs[language].placeholders(key) == catalogs.catalogs[
                    "en"
                ].placeholders(key), key

        runner = CliRunner()
        clean = runner.invoke(cli_main, ["lint-catalogs"])
        assert clean.exit_code == 0, clean.output

        (tmp_path / "en.txt").write_text("greet=hi {name}\nbye=later\n", encoding="utf-8")
        (tmp_path / "tr.txt").write_text("greet=selam {ad}\nbye=sonra\n", encoding="utf-8")
        broken = runner.invoke(cli_main, ["lint-catalogs", "--dir", str(tmp_path)])
        assert broken.exit_code != 0
        _passed(
            "catalog parity: en/it/tr share identical key and placeholder sets; "
            "lint exits nonzero on a seeded violation"
        )
