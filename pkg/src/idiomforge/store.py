"""Append-only event log and corpus export/import.

The engine is event-sourced: every state change is an event record with a
gapless sequence number, and full state is a fold over the records. The
on-disk format is JSON lines with a version header; a truncated tail line
(crash mid-write) is dropped on load, so any prefix of the file is a valid
store.

Corpus export emits one record per submission as JSON lines (or TSV with
the same column order). Player identities never leak into exports: authors
appear under a stable pseudonym hash.
"""
from __future__ import annotations

import hashlib
import io
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .errors import ValidationFailed

LOG_VERSION = 1

CORPUS_FIELDS = [
    "id",
    "language",
    "date",
    "idiom_id",
    "text",
    "idiomatic",
    "sample_type",
    "likes",
    "dislikes",
    "reports",
    "author_pseudonym",
    "excluded",
]


@dataclass(frozen=True)
class EventRecord:
    seq: int
    kind: str
    payload: dict
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "kind": self.kind, "ts": self.timestamp, "payload": self.payload},
            ensure_ascii=False,
            sort_keys=True,
        )


class EventLog:
    """Gapless append-only log, optionally mirrored to a JSONL file.

    The header line carries the log version plus whatever the engine wants
    future loads to know (its config and language), so a log file is
    self-describing.
    """

    def __init__(self, path: str | Path | None = None, header_extra: dict | None = None):
        self.path = Path(path) if path else None
        self.records: list[EventRecord] = []
        self._fp: TextIO | None = None
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            fresh = not self.path.exists() or self.path.stat().st_size == 0
            self._fp = self.path.open("a", encoding="utf-8")
            if fresh:
                header = {"log_version": LOG_VERSION, **(header_extra or {})}
                self._fp.write(json.dumps(header, ensure_ascii=False, sort_keys=True) + "\n")
                self._fp.flush()

    @property
    def next_seq(self) -> int:
        return len(self.records) + 1

    def append(self, kind: str, payload: dict, timestamp: str) -> EventRecord:
        record = EventRecord(seq=self.next_seq, kind=kind, payload=payload, timestamp=timestamp)
        self.records.append(record)
        if self._fp:
            self._fp.write(record.to_json() + "\n")
            self._fp.flush()
        return record

    def record_replayed(self, record: EventRecord) -> None:
        """Track an already-validated record during replay (no file write)."""
        if record.seq != self.next_seq:
            raise ValidationFailed(f"event seq {record.seq} breaks gapless order (expected {self.next_seq})")
        self.records.append(record)

    def close(self) -> None:
        if self._fp:
            self._fp.close()
            self._fp = None

    @staticmethod
    def read(path: str | Path) -> list[EventRecord]:
        """Read records from a log file, dropping a truncated tail line."""
        return EventLog.read_with_header(path)[1]

    @staticmethod
    def read_with_header(path: str | Path) -> tuple[dict, list[EventRecord]]:
        header: dict = {}
        records: list[EventRecord] = []
        text = Path(path).read_text(encoding="utf-8")
        lines = text.split("\n")
        # A complete record line ends with a newline, so the final split
        # element is either "" or a truncated fragment from a crash: drop it.
        for line in lines[:-1]:
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError:
                break  # damaged line: everything after is unreachable
            if "log_version" in obj:
                if obj["log_version"] != LOG_VERSION:
                    raise ValidationFailed(f"unsupported log version {obj['log_version']}")
                header = obj
                continue
            records.append(
                EventRecord(seq=obj["seq"], kind=obj["kind"], payload=obj["payload"], timestamp=obj["ts"])
            )
        return header, records

    @staticmethod
    def write_records(
        records: Iterable[EventRecord], path: str | Path, header_extra: dict | None = None
    ) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = {"log_version": LOG_VERSION, **(header_extra or {})}
        with path.open("w", encoding="utf-8") as fp:
            fp.write(json.dumps(header, ensure_ascii=False, sort_keys=True) + "\n")
            for record in records:
                fp.write(record.to_json() + "\n")
        return path


def pseudonym(player_id: str) -> str:
    """Stable export-safe alias for a player id."""
    return hashlib.sha256(f"corpus-pseudonym:{player_id}".encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class CorpusRecord:
    id: int
    language: str
    date: str
    idiom_id: str
    text: str
    idiomatic: bool
    sample_type: str
    likes: int
    dislikes: int
    reports: int
    author_pseudonym: str
    excluded: bool

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in CORPUS_FIELDS}


def write_corpus_jsonl(records: Iterable[CorpusRecord], fp: TextIO) -> int:
    count = 0
    for record in records:
        fp.write(json.dumps(record.as_dict(), ensure_ascii=False) + "\n")
        count += 1
    return count


def write_corpus_tsv(records: Iterable[CorpusRecord], fp: TextIO) -> int:
    fp.write("\t".join(CORPUS_FIELDS) + "\n")
    count = 0
    for record in records:
        row = record.as_dict()
        fp.write("\t".join(_tsv_cell(row[name]) for name in CORPUS_FIELDS) + "\n")
        count += 1
    return count


def _tsv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value).replace("\t", " ").replace("\n", " ")


def read_corpus_jsonl(fp: TextIO) -> list[CorpusRecord]:
    records = []
    for line in fp:
        if not line.strip():
            continue
        obj = json.loads(line)
        records.append(CorpusRecord(**{name: obj[name] for name in CORPUS_FIELDS}))
    return records


def read_corpus_tsv(fp: TextIO) -> list[CorpusRecord]:
    lines = [line.rstrip("\n") for line in fp if line.strip()]
    header = lines[0].split("\t")
    if header != CORPUS_FIELDS:
        raise ValidationFailed("TSV header does not match corpus schema")
    records = []
    for line in lines[1:]:
        cells = line.split("\t")
        obj = dict(zip(CORPUS_FIELDS, cells))
        records.append(
            CorpusRecord(
                id=int(obj["id"]),
                language=obj["language"],
                date=obj["date"],
                idiom_id=obj["idiom_id"],
                text=obj["text"],
                idiomatic=obj["idiomatic"] == "true",
                sample_type=obj["sample_type"],
                likes=int(obj["likes"]),
                dislikes=int(obj["dislikes"]),
                reports=int(obj["reports"]),
                author_pseudonym=obj["author_pseudonym"],
                excluded=obj["excluded"] == "true",
            )
        )
    return records


def export_corpus(
    engine,
    *,
    date_from: str | None = None,
    date_to: str | None = None,
    include_excluded: bool = False,
) -> Iterator[CorpusRecord]:
    """Corpus records for every stored submission, ordered (date, id).

    Excluded (banned-author) submissions are omitted unless
    ``include_excluded`` is set; like/dislike/report counts only include
    verdicts from non-banned reviewers, matching the analytics rules.
    """
    for date in sorted(engine.days):
        if date_from and date < date_from:
            continue
        if date_to and date > date_to:
            continue
        day = engine.days[date]
        for sid in day.submission_ids:
            submission = engine.submissions[sid]
            if submission.excluded and not include_excluded:
                continue
            likes = dislikes = reports = 0
            for review in submission.reviews.values():
                if engine.players[review.reviewer].banned:
                    continue
                if review.verdict == "like":
                    likes += 1
                elif review.verdict == "dislike":
                    dislikes += 1
                else:
                    reports += 1
            yield CorpusRecord(
                id=submission.id,
                language=day.language,
                date=date,
                idiom_id=day.idiom_id,
                text=submission.text,
                idiomatic=submission.idiomatic,
                sample_type=submission.sample_type,
                likes=likes,
                dislikes=dislikes,
                reports=reports,
                author_pseudonym=pseudonym(submission.author),
                excluded=submission.excluded,
            )


def corpus_to_string(records: Iterable[CorpusRecord], fmt: str = "jsonl") -> str:
    buf = io.StringIO()
    if fmt == "jsonl":
        write_corpus_jsonl(records, buf)
    elif fmt == "tsv":
        write_corpus_tsv(records, buf)
    else:
        raise ValueError(f"unknown corpus format {fmt!r}")
    return buf.getvalue()
