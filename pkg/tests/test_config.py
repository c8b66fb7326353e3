from __future__ import annotations

from datetime import time

import pytest

from idiomforge.config import GameConfig, config_from_mapping, load_config
from idiomforge.errors import ConfigInvalid
from idiomforge.scoring import TypeScores


def test_defaults():
    cfg = GameConfig()
    assert cfg.window_open == time(11, 0)
    assert cfg.window_close == time(23, 0)
    assert cfg.soft_target == 100
    assert cfg.happy_hour_minutes == 60
    assert cfg.like_cooldown_minutes == 10
    assert cfg.base_scores == TypeScores(10, 12, 10, 10)
    assert cfg.activation_threshold == 15
    assert cfg.release_threshold == 5
    assert cfg.balance_compare == "a_vs_c"


def test_load_file(tmp_path):
    path = tmp_path / "game.conf"
    path.write_text(
        "# demo\n"
        "timezone=Europe/Istanbul\n"
        "window_open=10:00\n"
        "soft_target=50\n"
        "scoring.base_b=14\n"
        "balance.compare=idio_vs_nonidio\n",
        encoding="utf-8",
    )
    cfg = load_config(path)
    assert cfg.timezone == "Europe/Istanbul"
    assert cfg.window_open == time(10, 0)
    assert cfg.soft_target == 50
    assert cfg.base_scores.b == 14
    assert cfg.base_scores.a == 10
    assert cfg.balance_compare == "idio_vs_nonidio"


def test_unknown_key_rejected():
    with pytest.raises(ConfigInvalid):
        config_from_mapping({"tyop": "1"})


def test_bad_value_rejected():
    with pytest.raises(ConfigInvalid):
        config_from_mapping({"soft_target": "many"})
    with pytest.raises(ConfigInvalid):
        config_from_mapping({"balance.compare": "sideways"})


def test_inverted_window_rejected():
    with pytest.raises(ConfigInvalid):
        config_from_mapping({"window_open": "23:00", "window_close": "11:00"})
