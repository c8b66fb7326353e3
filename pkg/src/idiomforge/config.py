"""Game configuration: defaults plus a key=value config file loader.

The file format is one ``key=value`` per line, UTF-8, ``#`` comments.
Dotted keys group related knobs (``scoring.base_b=12``,
``balance.compare=a_vs_c``). Unknown keys are rejected so typos fail loud.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import time
from pathlib import Path

from .errors import ConfigInvalid
from .scoring import TypeScores


@dataclass(frozen=True)
class GameConfig:
    timezone: str = "UTC"
    window_open: time = time(11, 0)
    window_close: time = time(23, 0)
    soft_target: int = 100
    happy_hour_minutes: int = 60
    like_cooldown_minutes: int = 10
    base_scores: TypeScores = TypeScores(10, 12, 10, 10)
    boost_delta: int = 5
    activation_threshold: int = 15
    release_threshold: int = 5
    level_divisor: int = 100
    review_point: int = 1
    happy_hour_review_point: int = 2
    author_threshold: int = 10
    reviewer_threshold: int = 25
    streak_days: int = 3
    early_bird_minutes: int = 60
    balance_compare: str = "a_vs_c"  # or idio_vs_nonidio
    near_duplicate_jaccard: float = 0.8
    tip_seed: int = 1
    snapshot_every: int = 100

    def window_minutes(self) -> int:
        open_m = self.window_open.hour * 60 + self.window_open.minute
        close_m = self.window_close.hour * 60 + self.window_close.minute
        return close_m - open_m


def _parse_time(value: str) -> time:
    parts = value.split(":")
    if len(parts) != 2:
        raise ConfigInvalid(f"expected HH:MM, got {value!r}")
    return time(int(parts[0]), int(parts[1]))


def _parse_bool_compare(value: str) -> str:
    if value not in ("a_vs_c", "idio_vs_nonidio"):
        raise ConfigInvalid(f"balance.compare must be a_vs_c or idio_vs_nonidio, got {value!r}")
    return value


def load_config(path: str | Path) -> GameConfig:
    """Load a config file, starting from defaults."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigInvalid(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return config_from_mapping(mapping)


def config_to_mapping(cfg: GameConfig) -> dict[str, str]:
    """Inverse of :func:`config_from_mapping`; used to stamp event logs."""
    return {
        "timezone": cfg.timezone,
        "window_open": cfg.window_open.isoformat("minutes"),
        "window_close": cfg.window_close.isoformat("minutes"),
        "soft_target": str(cfg.soft_target),
        "happy_hour_minutes": str(cfg.happy_hour_minutes),
        "like_cooldown_minutes": str(cfg.like_cooldown_minutes),
        "scoring.base_a": str(cfg.base_scores.a),
        "scoring.base_b": str(cfg.base_scores.b),
        "scoring.base_c": str(cfg.base_scores.c),
        "scoring.base_d": str(cfg.base_scores.d),
        "scoring.boost_delta": str(cfg.boost_delta),
        "scoring.activation_threshold": str(cfg.activation_threshold),
        "scoring.release_threshold": str(cfg.release_threshold),
        "scoring.level_divisor": str(cfg.level_divisor),
        "scoring.review_point": str(cfg.review_point),
        "scoring.happy_hour_review_point": str(cfg.happy_hour_review_point),
        "scoring.author_threshold": str(cfg.author_threshold),
        "scoring.reviewer_threshold": str(cfg.reviewer_threshold),
        "scoring.streak_days": str(cfg.streak_days),
        "scoring.early_bird_minutes": str(cfg.early_bird_minutes),
        "balance.compare": cfg.balance_compare,
        "near_duplicate_jaccard": str(cfg.near_duplicate_jaccard),
        "tip_seed": str(cfg.tip_seed),
        "snapshot_every": str(cfg.snapshot_every),
    }


def config_from_mapping(mapping: dict[str, str]) -> GameConfig:
    cfg = GameConfig()
    base = dict(cfg.base_scores.as_dict())
    updates: dict = {}
    try:
        for key, value in mapping.items():
            if key == "timezone":
                updates["timezone"] = value
            elif key == "window_open":
                updates["window_open"] = _parse_time(value)
            elif key == "window_close":
                updates["window_close"] = _parse_time(value)
            elif key == "soft_target":
                updates["soft_target"] = int(value)
            elif key == "happy_hour_minutes":
                updates["happy_hour_minutes"] = int(value)
            elif key == "like_cooldown_minutes":
                updates["like_cooldown_minutes"] = int(value)
            elif key == "balance.compare":
                updates["balance_compare"] = _parse_bool_compare(value)
            elif key in ("scoring.base_a", "scoring.base_b", "scoring.base_c", "scoring.base_d"):
                base[key[-1].upper()] = int(value)
            elif key == "scoring.boost_delta":
                updates["boost_delta"] = int(value)
            elif key == "scoring.activation_threshold":
                updates["activation_threshold"] = int(value)
            elif key == "scoring.release_threshold":
                updates["release_threshold"] = int(value)
            elif key == "scoring.level_divisor":
                updates["level_divisor"] = int(value)
            elif key == "scoring.review_point":
                updates["review_point"] = int(value)
            elif key == "scoring.happy_hour_review_point":
                updates["happy_hour_review_point"] = int(value)
            elif key == "scoring.author_threshold":
                updates["author_threshold"] = int(value)
            elif key == "scoring.reviewer_threshold":
                updates["reviewer_threshold"] = int(value)
            elif key == "scoring.streak_days":
                updates["streak_days"] = int(value)
            elif key == "scoring.early_bird_minutes":
                updates["early_bird_minutes"] = int(value)
            elif key == "near_duplicate_jaccard":
                updates["near_duplicate_jaccard"] = float(value)
            elif key == "tip_seed":
                updates["tip_seed"] = int(value)
            elif key == "snapshot_every":
                updates["snapshot_every"] = int(value)
            else:
                raise ConfigInvalid(f"unknown config key {key!r}")
    except ValueError as exc:
        raise ConfigInvalid(str(exc)) from exc
    updates["base_scores"] = TypeScores(base["A"], base["B"], base["C"], base["D"])
    cfg = replace(cfg, **updates)
    if cfg.window_minutes() <= 0:
        raise ConfigInvalid("window_close must be after window_open")
    return cfg
