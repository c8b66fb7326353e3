from __future__ import annotations

import io
import json

import pytest

from idiomforge.config import GameConfig
from idiomforge.engine import GameEngine
from idiomforge.errors import ValidationFailed
from idiomforge.matching import parse_idiom_line
from idiomforge.store import (
    EventLog,
    corpus_to_string,
    export_corpus,
    pseudonym,
    read_corpus_jsonl,
    read_corpus_tsv,
    write_corpus_jsonl,
    write_corpus_tsv,
)

from conftest import DAY, EN_DICT, HOLD_TONGUE, at, submit_labeled


def play_fixture_day(tmp_path=None, log_path=None):
    engine = GameEngine(
        GameConfig(),
        language="en",
        dictionary=EN_DICT,
        idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
        log_path=log_path,
    )
    now = at(9)
    for pid in ("ann", "bob", "cat"):
        engine.register_player(pid, pid.title(), now)
    engine.open_day(DAY, "hold-tongue", now)
    submit_labeled(engine, "ann", "Please hold your tongue and wait.", at(11, 10))
    submit_labeled(engine, "bob", "The vet had to hold the dog tongue.", at(11, 20), idiomatic=False)
    submit_labeled(engine, "cat", "Hold on to your mother tongue.", at(11, 30), idiomatic=False)
    engine.record_review("bob", 1, "like", at(12, 0))
    engine.record_review("cat", 1, "like", at(12, 5))
    engine.record_review("ann", 2, "dislike", at(12, 10))
    return engine


class TestEventLogFile:
    def test_append_and_read_roundtrip(self, tmp_path):
        path = tmp_path / "events.jsonl"
        log = EventLog(path)
        log.append("day_opened", {"date": DAY}, at(9).isoformat())
        log.append("noop", {"x": 1}, at(9, 1).isoformat())
        log.close()
        records = EventLog.read(path)
        assert [r.seq for r in records] == [1, 2]
        assert records[0].payload == {"date": DAY}

    def test_gapless_seq_enforced_on_replay(self, tmp_path):
        log = EventLog(None)
        rec = log.append("a", {}, at(9).isoformat())
        other = EventLog(None)
        with pytest.raises(ValidationFailed):
            import dataclasses

            other.record_replayed(dataclasses.replace(rec, seq=5))

    def test_truncated_tail_dropped(self, tmp_path):
        path = tmp_path / "events.jsonl"
        engine = play_fixture_day(log_path=path)
        engine.log.close()
        raw = path.read_bytes()
        # cut the file mid-way through the final line
        cut = raw[: len(raw) - 25]
        broken = tmp_path / "broken.jsonl"
        broken.write_bytes(cut)
        records = EventLog.read(broken)
        full = EventLog.read(path)
        assert len(records) == len(full) - 1
        # every prefix is loadable
        replayed = GameEngine.from_events(
            records,
            GameConfig(),
            language="en",
            dictionary=EN_DICT,
            idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
        )
        assert len(replayed.log.records) == len(records)

    def test_every_prefix_is_valid(self, tmp_path):
        engine = play_fixture_day()
        records = engine.log.records
        for cut in range(len(records) + 1):
            GameEngine.from_events(
                records[:cut],
                GameConfig(),
                language="en",
                dictionary=EN_DICT,
                idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
            )

    def test_load_continues_same_file(self, tmp_path):
        path = tmp_path / "events.jsonl"
        engine = play_fixture_day(log_path=path)
        n_before = len(engine.log.records)
        engine.log.close()
        loaded = GameEngine.load(
            path,
            GameConfig(),
            language="en",
            dictionary=EN_DICT,
            idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
            log_path=path,
        )
        loaded.record_review("cat", 2, "like", at(13))
        loaded.log.close()
        assert len(EventLog.read(path)) == n_before + 1

    def test_version_header_checked(self, tmp_path):
        path = tmp_path / "events.jsonl"
        path.write_text(json.dumps({"log_version": 999}) + "\n", encoding="utf-8")
        with pytest.raises(ValidationFailed):
            EventLog.read(path)


class TestCorpusExport:
    def test_banned_author_omitted_by_default(self):
        engine = play_fixture_day()
        engine.ban("mod", "cat", "test", at(13))
        records = list(export_corpus(engine))
        assert len(records) == 2
        assert all(not r.excluded for r in records)
        with_excluded = list(export_corpus(engine, include_excluded=True))
        assert len(with_excluded) == 3
        assert [r.excluded for r in with_excluded] == [False, False, True]

    def test_deterministic_order_and_fields(self):
        engine = play_fixture_day()
        records = list(export_corpus(engine))
        assert [r.id for r in records] == [1, 2, 3]
        first = records[0]
        assert first.idiom_id == "hold-tongue"
        assert first.sample_type == "A"
        assert first.likes == 2 and first.dislikes == 0
        assert first.language == "en"

    def test_pseudonym_stable_and_opaque(self):
        engine = play_fixture_day()
        records = list(export_corpus(engine))
        assert records[0].author_pseudonym == pseudonym("ann")
        assert "ann" not in records[0].author_pseudonym
        assert pseudonym("ann") == pseudonym("ann")
        assert pseudonym("ann") != pseudonym("bob")

    def test_banned_reviewer_not_counted(self):
        engine = play_fixture_day()
        before = next(r for r in export_corpus(engine) if r.id == 1)
        assert before.likes == 2
        engine.ban("mod", "cat", "test", at(13))
        after = next(r for r in export_corpus(engine) if r.id == 1)
        assert after.likes == 1

    def test_empty_range(self):
        engine = play_fixture_day()
        assert list(export_corpus(engine, date_from="2030-01-01")) == []

    def test_jsonl_roundtrip(self):
        engine = play_fixture_day()
        records = list(export_corpus(engine))
        text = corpus_to_string(records, "jsonl")
        back = read_corpus_jsonl(io.StringIO(text))
        assert back == records

    def test_tsv_roundtrip(self):
        engine = play_fixture_day()
        records = list(export_corpus(engine))
        text = corpus_to_string(records, "tsv")
        back = read_corpus_tsv(io.StringIO(text))
        assert back == records

    def test_tsv_header_order(self):
        engine = play_fixture_day()
        text = corpus_to_string(export_corpus(engine), "tsv")
        header = text.splitlines()[0]
        assert header.split("\t") == [
            "id", "language", "date", "idiom_id", "text", "idiomatic", "sample_type",
            "likes", "dislikes", "reports", "author_pseudonym", "excluded",
        ]
