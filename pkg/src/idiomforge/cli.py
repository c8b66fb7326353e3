"""Command-line interface: simulate, report, export, serve, play, lint."""
from __future__ import annotations

import json
import sys
import time as time_mod
from datetime import date as date_cls
from datetime import datetime, time, timedelta
from pathlib import Path

import click

from .config import GameConfig, load_config
from .engine import GameEngine
from .errors import GameError
from .l10n import default_dictionary, default_idioms, load_catalog_dir, load_default_catalogs
from .lexical import LemmaDictionary
from .simulator import POLICIES, REGIMES, SentenceFactory, SimConfig, run_sim
from .store import EventLog, corpus_to_string, export_corpus


def _game_config(config_path: str | None) -> GameConfig:
    return load_config(config_path) if config_path else GameConfig()


def _dictionary_for(option: str, language: str) -> LemmaDictionary:
    if option == "pkg":
        return default_dictionary(language)
    if option == "empty":
        return LemmaDictionary.empty(language)
    return LemmaDictionary.load(option, language)


def _load_engine(log: str, config_path: str | None, language: str | None, dictionary: str) -> GameEngine:
    # config/language default to what the log header recorded
    from .store import EventLog as _EventLog

    header, _ = _EventLog.read_with_header(log)
    language = language or header.get("language", "en")
    kwargs = {"language": language, "dictionary": _dictionary_for(dictionary, language)}
    return GameEngine.load(log, load_config(config_path) if config_path else None, **kwargs)


engine_options = [
    click.option("--log", required=True, type=click.Path(exists=True), help="Event log file."),
    click.option("--language", default=None, help="Override the language stamped in the log header."),
    click.option(
        "--dictionary",
        default="empty",
        show_default=True,
        help="Lemma dictionary the log was produced with: 'pkg', 'empty', or a file path.",
    ),
    click.option("--config", "config_path", type=click.Path(exists=True), default=None),
]


def with_engine_options(fn):
    for option in reversed(engine_options):
        fn = option(fn)
    return fn


@click.group()
def main():
    """Gamified idiom-corpus engine: simulate crowds, inspect and export data."""


@main.command()
@click.option("--players", default=20, show_default=True)
@click.option("--days", default=1, show_default=True)
@click.option("--policy", default="natural_mix", type=click.Choice(POLICIES), show_default=True)
@click.option("--scoring", default="hysteresis", type=click.Choice(REGIMES), show_default=True)
@click.option("--seed", default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.option("--submissions", default=5, show_default=True, help="Submissions per player per day.")
@click.option("--reviews", default=8, show_default=True, help="Review attempts per player per day.")
@click.option("--lurkers", default=0, show_default=True, help="Registered players who never act.")
@click.option("--happy-hour-at", default=None, help="Trigger a happy hour daily at HH:MM.")
@click.option("--figures/--no-figures", default=True, show_default=True)
def simulate(players, days, policy, scoring, seed, out, submissions, reviews, lurkers, happy_hour_at, figures):
    """Run a deterministic crowd simulation and write its report."""
    config = SimConfig(
        players=players,
        days=days,
        policy=policy,
        scoring=scoring,
        seed=seed,
        submissions_per_player=submissions,
        reviews_per_player=reviews,
        lurkers=lurkers,
        happy_hour_at=happy_hour_at,
    )
    report, engine = run_sim(config)
    out_dir = Path(out)
    paths = report.write(out_dir)
    engine.dump_log(out_dir / "events.jsonl")
    if figures:
        from .reports import write_report

        write_report(engine, out_dir)
    click.echo(f"simulated {report.totals['submissions']} submissions, "
               f"{report.totals['reviews']} reviews over {days} day(s)")
    for name, path in sorted(paths.items()):
        click.echo(f"  {name}: {path}")
    click.echo(f"  events: {out_dir / 'events.jsonl'}")


@main.command()
@with_engine_options
@click.option("--out-dir", required=True, type=click.Path())
def stats(log, language, dictionary, config_path, out_dir):
    """Write per-day statistics and the review histogram as CSV."""
    from .analytics import all_day_stats
    from .reports import write_review_histogram_csv, write_stats_csv

    engine = _load_engine(log, config_path, language, dictionary)
    day_stats = all_day_stats(engine)
    out = Path(out_dir)
    click.echo(str(write_stats_csv(engine, day_stats, out / "day_stats.csv")))
    click.echo(str(write_review_histogram_csv(day_stats, out / "review_histogram.csv")))


@main.command()
@with_engine_options
@click.option("--out-dir", required=True, type=click.Path())
def report(log, language, dictionary, config_path, out_dir):
    """Render the full report: CSV tables plus matplotlib figures."""
    from .reports import write_report

    engine = _load_engine(log, config_path, language, dictionary)
    outputs = write_report(engine, out_dir)
    for name, path in sorted(outputs.items()):
        click.echo(f"{name}: {path}")


@main.command()
@with_engine_options
@click.option("--format", "fmt", default="jsonl", type=click.Choice(["jsonl", "tsv"]), show_default=True)
@click.option("--from", "date_from", default=None, help="Earliest date (inclusive).")
@click.option("--to", "date_to", default=None, help="Latest date (inclusive).")
@click.option("--include-excluded", is_flag=True, default=False)
@click.option("--out", default="-", help="Output file, '-' for stdout.")
def export(log, language, dictionary, config_path, fmt, date_from, date_to, include_excluded, out):
    """Export the reviewed corpus as JSON lines or TSV."""
    engine = _load_engine(log, config_path, language, dictionary)
    records = export_corpus(
        engine, date_from=date_from, date_to=date_to, include_excluded=include_excluded
    )
    text = corpus_to_string(records, fmt)
    if out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out}")


@main.command("lint-catalogs")
@click.option("--dir", "directory", type=click.Path(exists=True), default=None,
              help="Catalog directory (defaults to the packaged catalogs).")
def lint_catalogs(directory):
    """Check message catalogs for key and placeholder parity. Exits 2 on problems."""
    try:
        if directory:
            catalog_set = load_catalog_dir(directory, lint=False)
        else:
            catalog_set = load_default_catalogs(lint=False)
        problems = catalog_set.lint()
    except GameError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    if problems:
        for problem in problems:
            click.echo(problem, err=True)
        sys.exit(2)
    click.echo(f"catalogs in parity: {', '.join(catalog_set.languages)}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--token", required=True, help="Moderator bearer token.")
@click.option("--log", type=click.Path(), default=None, help="Persist events to this file.")
@click.option("--language", default="en", show_default=True)
@click.option("--dictionary", default="pkg", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--demo", is_flag=True, default=False,
              help="Seed a demo day with simulated players and enable demo endpoints.")
def serve(host, port, token, log, language, dictionary, config_path, demo):
    """Run the moderator admin API."""
    import uvicorn

    from .server import create_app

    config = _game_config(config_path)
    if log and Path(log).exists():
        engine = GameEngine.load(
            log, config, language=language,
            dictionary=_dictionary_for(dictionary, language), log_path=log,
        )
    else:
        engine = GameEngine(
            config, language=language,
            dictionary=_dictionary_for(dictionary, language),
            idioms=default_idioms(language), log_path=log,
        )
    clock = None
    demo_hooks = None
    if demo:
        clock, demo_hooks = _seed_demo(engine)
    app = create_app(engine, token=token, clock=clock, demo_hooks=demo_hooks)
    uvicorn.run(app, host=host, port=port, log_level="warning")


class DemoClock:
    """Starts at today 11:00 and advances in real time."""

    def __init__(self):
        self.base = datetime.combine(date_cls.today(), time(11, 0))
        self.t0 = time_mod.monotonic()

    def __call__(self) -> datetime:
        return self.base + timedelta(seconds=time_mod.monotonic() - self.t0)


def _seed_demo(engine: GameEngine):
    """Open a day and fill it with a little plausible activity."""
    import random

    clock = DemoClock()
    now = clock()
    players = [f"demo-p{i}" for i in range(1, 7)]
    for player in players:
        engine.register_player(player, player, now)
    if not engine.idioms:
        for pattern in default_idioms(engine.language):
            engine.idioms[pattern.id] = pattern
    idiom_id = next(iter(engine.idioms))
    today = date_cls.today().isoformat()
    if today not in engine.days:
        engine.open_day(today, idiom_id, now)
    pattern = engine.idioms[engine.days[today].idiom_id]
    factory = SentenceFactory(pattern, random.Random(7))
    counter = {"i": 0}

    def do_submit(now, target=None):
        order = ["A", "C", "B", "D"]
        target = target or order[counter["i"] % 4]
        author = players[counter["i"] % len(players)]
        counter["i"] += 1
        text, idiomatic = factory.compose(target)
        outcome = engine.submit(author, text, now)
        assert outcome.kind == "await_label"
        return engine.label_submission(author, idiomatic, now)

    def do_review(now):
        for reviewer in players:
            if engine.players[reviewer].banned:
                continue
            submission = engine.next_for(reviewer, now)
            if submission is not None:
                return engine.record_review(reviewer, submission.id, "like", now)
        return None

    for _ in range(6):
        do_submit(clock())
    do_review(clock())
    do_review(clock())
    # one reported submission so the moderation queue has content
    reporter = next(p for p in players if p != engine.submissions[1].author)
    engine.record_review(reporter, 1, "report", clock())
    return clock, {"submit": do_submit, "review": do_review}


@main.command()
@click.option("--language", default="en", show_default=True)
@click.option("--dictionary", default="pkg", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--log", type=click.Path(), default=None)
@click.option("--player", default="terminal-player", show_default=True)
def play(language, dictionary, config_path, log, player):
    """Play interactively at the terminal (opens today's day if none is open)."""
    from .transport import ChatFrontend, TerminalTransport

    config = _game_config(config_path)
    engine = GameEngine(
        config,
        language=language,
        dictionary=_dictionary_for(dictionary, language),
        idioms=default_idioms(language),
        log_path=log,
    )
    try:
        zone = None
        if config.timezone != "UTC":
            from zoneinfo import ZoneInfo

            zone = ZoneInfo(config.timezone)
        clock = lambda: datetime.now(tz=zone).replace(tzinfo=None)
    except Exception:
        clock = datetime.now
    today = clock().date().isoformat()
    if today not in engine.days and engine.idioms:
        engine.open_day(today, next(iter(engine.idioms)), clock())
    catalogs = load_default_catalogs()
    frontend = ChatFrontend(engine, catalogs, language, clock)
    click.echo("Type 'today', 'submit', 'review', 'scoreboard', 'achievements', 'help' or 'quit'.")
    TerminalTransport(frontend, player_id=player).run()


@main.command()
@click.option("--out", default="docs/openapi.json", show_default=True)
def openapi(out):
    """Write the admin API's OpenAPI description."""
    from .server import create_app

    engine = GameEngine(GameConfig(), language="en")
    app = create_app(engine, token="schema-only")
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(app.openapi(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
