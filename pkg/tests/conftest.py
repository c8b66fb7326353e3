from __future__ import annotations

from datetime import datetime

import pytest

from idiomforge.config import GameConfig
from idiomforge.engine import GameEngine
from idiomforge.lexical import LemmaDictionary
from idiomforge.matching import parse_idiom_line

DAY = "2021-03-05"

EN_DICT = LemmaDictionary(
    "en",
    {
        "held": frozenset({"hold"}),
        "holds": frozenset({"hold"}),
        "holding": frozenset({"hold"}),
        "pulling": frozenset({"pull"}),
        "pulled": frozenset({"pull"}),
        "went": frozenset({"go"}),
        "tongues": frozenset({"tongue"}),
    },
)

HOLD_TONGUE = "hold-tongue\thold * tongue\tto hold a tongue\tto stop talking"
PULL_LEG = "pull-leg\tpull * leg\tto pull a leg\tto tease someone"


def at(hour: int, minute: int = 0, second: int = 0, day: str = DAY) -> datetime:
    return datetime.fromisoformat(f"{day}T{hour:02d}:{minute:02d}:{second:02d}")


@pytest.fixture
def engine(tmp_path):
    eng = GameEngine(
        GameConfig(),
        language="en",
        dictionary=EN_DICT,
        idioms=[parse_idiom_line(HOLD_TONGUE, "en"), parse_idiom_line(PULL_LEG, "en")],
    )
    return eng


@pytest.fixture
def open_engine(engine):
    now = at(10, 0)
    for pid in ("ann", "bob", "cat", "dan"):
        engine.register_player(pid, pid.title(), now)
    engine.open_day(DAY, "hold-tongue", now)
    return engine


def submit_labeled(engine, player, text, now, idiomatic=True):
    outcome = engine.submit(player, text, now)
    assert outcome.kind == "await_label", f"expected idiom match in {text!r}"
    return engine.label_submission(player, idiomatic, now)
