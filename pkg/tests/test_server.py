from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from idiomforge.analytics import day_stats
from idiomforge.config import GameConfig
from idiomforge.engine import GameEngine
from idiomforge.matching import parse_idiom_line
from idiomforge.server import create_app

from conftest import DAY, EN_DICT, HOLD_TONGUE, at, submit_labeled

TOKEN = "test-token"


class MutableClock:
    def __init__(self, start):
        self.now = start

    def __call__(self):
        return self.now


@pytest.fixture
def api():
    engine = GameEngine(
        GameConfig(),
        language="en",
        dictionary=EN_DICT,
        idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
    )
    clock = MutableClock(at(9))
    for pid in ("ann", "bob", "cat", "dan"):
        engine.register_player(pid, pid.title(), clock())
    app = create_app(engine, token=TOKEN, clock=clock)
    client = TestClient(app)
    client.headers["Authorization"] = f"Bearer {TOKEN}"
    return engine, clock, client


def seed_day(engine, clock):
    engine.open_day(DAY, "hold-tongue", at(9))
    clock.now = at(12)
    submit_labeled(engine, "ann", "Please hold your tongue and wait.", at(11, 10))
    submit_labeled(engine, "bob", "Grandma told me to hold the cow tongue.", at(11, 20), idiomatic=False)
    engine.record_review("cat", 1, "like", at(11, 40))
    engine.record_review("dan", 2, "dislike", at(11, 50))


class TestAuth:
    def test_missing_token_401(self, api):
        _, _, client = api
        bare = TestClient(client.app)
        assert bare.get("/api/reports").status_code == 401

    def test_wrong_token_401(self, api):
        _, _, client = api
        bare = TestClient(client.app)
        bare.headers["Authorization"] = "Bearer nope"
        assert bare.get("/api/reports").status_code == 401


class TestEndpoints:
    def test_stats_matches_analytics(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        response = client.get(f"/api/days/{DAY}/stats")
        assert response.status_code == 200
        assert response.json() == day_stats(engine, DAY).as_dict()

    def test_stats_unknown_day_404(self, api):
        _, _, client = api
        assert client.get("/api/days/1999-01-01/stats").status_code == 404

    def test_schedule_idiom_and_open_day(self, api):
        engine, clock, client = api
        response = client.post(
            "/api/idioms", json={"line": "break-ice\tbreak * ice\tlit\tgloss"}
        )
        assert response.status_code == 200
        assert response.json()["id"] == "break-ice"
        response = client.post(f"/api/days/{DAY}/open", json={"idiom_id": "break-ice"})
        assert response.status_code == 200
        assert engine.current_date == DAY

    def test_malformed_pattern_422_with_parser_message(self, api):
        _, _, client = api
        response = client.post("/api/idioms", json={"line": "broken\t* tongue\tlit\tgloss"})
        assert response.status_code == 422
        assert "wildcard" in response.json()["detail"]

    def test_open_twice_409(self, api):
        engine, clock, client = api
        client.post(f"/api/days/{DAY}/open", json={"idiom_id": "hold-tongue"})
        response = client.post(f"/api/days/{DAY}/open", json={"idiom_id": "hold-tongue"})
        assert response.status_code == 409

    def test_open_unknown_idiom_422(self, api):
        _, _, client = api
        response = client.post(f"/api/days/{DAY}/open", json={"idiom_id": "ghost"})
        assert response.status_code == 422

    def test_happy_hour_conflict_409(self, api):
        engine, clock, client = api
        engine.open_day(DAY, "hold-tongue", at(9))
        clock.now = at(17)
        assert client.post("/api/happy-hour").status_code == 200
        response = client.post("/api/happy-hour")
        assert response.status_code == 409

    def test_ban_excludes_from_stats(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        before = client.get(f"/api/days/{DAY}/stats").json()
        assert before["total"] == 2
        response = client.post("/api/players/ann/ban", json={"reason": "spam"})
        assert response.status_code == 200
        after = client.get(f"/api/days/{DAY}/stats").json()
        assert after["total"] == 1
        assert after["idiomatic_count"] == before["idiomatic_count"] - 1

    def test_ban_unknown_404_double_409(self, api):
        _, _, client = api
        assert client.post("/api/players/ghost/ban", json={"reason": "x"}).status_code == 404
        assert client.post("/api/players/ann/ban", json={"reason": "x"}).status_code == 200
        assert client.post("/api/players/ann/ban", json={"reason": "x"}).status_code == 409
        assert client.post("/api/players/ann/unban").status_code == 200
        assert client.post("/api/players/ann/unban").status_code == 409

    def test_reports_queue(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        engine.record_review("cat", 2, "report", at(12, 10))
        listing = client.get("/api/reports").json()
        assert [r["id"] for r in listing] == [2]
        assert listing[0]["status"] == "flagged"

    def test_moderator_flag_removes_from_queue(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        response = client.post("/api/submissions/2/flag", json={"reason": "off-topic"})
        assert response.status_code == 200
        assert engine.submissions[2].moderator_flagged
        assert engine.next_for("cat", at(12, 30)) is None or engine.next_for("cat", at(12, 30)).id != 2
        assert client.post("/api/submissions/99/flag", json={"reason": "x"}).status_code == 404

    def test_leaderboard(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        data = client.get(f"/api/leaderboard/{DAY}").json()
        assert data["entries"][0]["player_id"] == "ann"  # 10 points from the like
        assert data["soft_target_remaining"] == 98

    def test_export_jsonl_and_filters(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        engine.ban("mod", "bob", "x", at(13))
        body = client.get("/api/export").text
        rows = [json.loads(line) for line in body.splitlines()]
        assert len(rows) == 1
        full = client.get("/api/export", params={"include_excluded": "true"}).text
        assert len(full.splitlines()) == 2
        empty = client.get("/api/export", params={"from": "2030-01-01"}).text
        assert empty == ""
        tsv = client.get("/api/export", params={"fmt": "tsv"}).text
        assert tsv.startswith("id\tlanguage\t")

    def test_status(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        data = client.get("/api/status").json()
        assert data["current_date"] == DAY
        assert data["idiom_id"] == "hold-tongue"
        assert data["submission_count"] == 2

    def test_openapi_served(self, api):
        _, _, client = api
        schema = client.get("/openapi.json").json()
        paths = set(schema["paths"])
        assert {
            "/api/days/{date}/stats",
            "/api/reports",
            "/api/idioms",
            "/api/days/{date}/open",
            "/api/happy-hour",
            "/api/players/{player_id}/ban",
            "/api/players/{player_id}/unban",
            "/api/leaderboard/{date}",
            "/api/export",
        } <= paths


class TestReplayability:
    def test_api_mutations_reproducible_from_log(self, api):
        engine, clock, client = api
        seed_day(engine, clock)
        clock.now = at(17)
        client.post("/api/happy-hour")
        client.post("/api/players/bob/ban", json={"reason": "x"})
        replayed = GameEngine.from_events(
            engine.log.records,
            engine.config,
            language="en",
            dictionary=EN_DICT,
            idioms=[parse_idiom_line(HOLD_TONGUE, "en")],
        )
        assert replayed.state_hash() == engine.state_hash()
