"""Idiom patterns, constituent location, and sample-type classification.

A pattern is an ordered sequence of constituent lemmas with optional
wildcard slots ("hold * tongue"). Locating a pattern in a tokenized
sentence finds positions for every constituent, in pattern order, choosing
the minimal-span match (leftmost on ties). Tokens sitting between
constituents are either absorbed by a wildcard (up to its capacity) or
counted as gap tokens.

Two rules keep classification aligned with how people read the sentences:

* Punctuation tokens are transparent: they never consume wildcard capacity
  and never count as gaps, so "hold patient's tongue" behaves like
  "hold patients tongue" even though the apostrophe tokenizes separately.
* Wildcard-absorbed words (possessives, articles) do not count as gaps, so
  "hold your tongue" is still a juxtaposed use.

The gap count then drives the four sample types: idiomatic samples are
A (juxtaposed, gap 0) or B (separated, gap > 0); nonidiomatic samples are
C (juxtaposed) or D (separated).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations
from pathlib import Path

from .errors import BadWildcardPosition, PatternSyntax, TooFewConstituents
from .lexical import Token

DEFAULT_WILDCARD_CAPACITY = 2

_WILDCARD_RE = re.compile(r"^\*(\d+)?$")


class SampleType(str, Enum):
    A = "A"  # idiomatic, constituents juxtaposed
    B = "B"  # idiomatic, constituents separated
    C = "C"  # nonidiomatic, juxtaposed
    D = "D"  # nonidiomatic, separated

    @property
    def idiomatic(self) -> bool:
        return self in (SampleType.A, SampleType.B)

    @property
    def juxtaposed(self) -> bool:
        return self in (SampleType.A, SampleType.C)


@dataclass(frozen=True)
class Constituent:
    lemma: str


@dataclass(frozen=True)
class Wildcard:
    max_tokens: int = DEFAULT_WILDCARD_CAPACITY


Slot = Constituent | Wildcard


@dataclass(frozen=True)
class IdiomPattern:
    id: str
    language: str
    slots: tuple[Slot, ...]
    gloss: str = ""
    literal_gloss: str = ""
    ordered: bool = True  # free-word-order languages may relax this per pattern

    @property
    def constituents(self) -> tuple[str, ...]:
        return tuple(s.lemma for s in self.slots if isinstance(s, Constituent))

    @property
    def text(self) -> str:
        """Pattern back in source syntax, e.g. ``hold *2 tongue``."""
        parts = []
        for slot in self.slots:
            if isinstance(slot, Constituent):
                parts.append(slot.lemma)
            else:
                parts.append("*" if slot.max_tokens == DEFAULT_WILDCARD_CAPACITY else f"*{slot.max_tokens}")
        return " ".join(parts)

    def gap_capacities(self) -> list[int]:
        """Total wildcard capacity between each adjacent constituent pair."""
        capacities: list[int] = []
        pending = 0
        seen_first = False
        for slot in self.slots:
            if isinstance(slot, Wildcard):
                pending += slot.max_tokens
            else:
                if seen_first:
                    capacities.append(pending)
                pending = 0
                seen_first = True
        return capacities


@dataclass(frozen=True)
class IdiomMatch:
    constituent_positions: tuple[int, ...]
    gap_tokens: int

    @property
    def span(self) -> int:
        return self.constituent_positions[-1] - self.constituent_positions[0]


def parse_pattern(
    spec: str,
    language: str,
    *,
    pattern_id: str | None = None,
    gloss: str = "",
    literal_gloss: str = "",
    ordered: bool = True,
) -> IdiomPattern:
    """Parse a pattern string like ``hold * tongue`` or ``take *3 granted``.

    ``*`` is a wildcard with the default capacity, ``*N`` one with capacity
    N >= 1. Raises PatternSyntax / TooFewConstituents / BadWildcardPosition.
    """
    pieces = spec.split()
    if not pieces:
        raise PatternSyntax("empty pattern")
    slots: list[Slot] = []
    for piece in pieces:
        m = _WILDCARD_RE.match(piece)
        if m:
            capacity = int(m.group(1)) if m.group(1) else DEFAULT_WILDCARD_CAPACITY
            if capacity < 1:
                raise PatternSyntax(f"wildcard capacity must be >= 1, got {piece!r}")
            slots.append(Wildcard(capacity))
        elif "*" in piece:
            raise PatternSyntax(f"bad pattern token {piece!r}")
        elif any(ch.isalnum() for ch in piece):
            slots.append(Constituent(piece.lower()))
        else:
            raise PatternSyntax(f"bad pattern token {piece!r}")
    if isinstance(slots[0], Wildcard) or isinstance(slots[-1], Wildcard):
        raise BadWildcardPosition(f"pattern {spec!r} starts or ends with a wildcard")
    n_constituents = sum(1 for s in slots if isinstance(s, Constituent))
    if n_constituents < 2:
        raise TooFewConstituents(f"pattern {spec!r} has {n_constituents} constituent(s), need at least 2")
    return IdiomPattern(
        id=pattern_id or "-".join(s.lemma for s in slots if isinstance(s, Constituent)),
        language=language,
        slots=tuple(slots),
        gloss=gloss,
        literal_gloss=literal_gloss,
        ordered=ordered,
    )


def parse_idiom_line(line: str, language: str) -> IdiomPattern:
    """Parse one idiom-list line: ``id<TAB>pattern<TAB>literal gloss<TAB>idiomatic gloss``."""
    parts = line.rstrip("\n").split("\t")
    if len(parts) != 4:
        raise PatternSyntax(f"expected 4 tab-separated fields, got {len(parts)}")
    idiom_id, pattern_text, literal_gloss, gloss = (p.strip() for p in parts)
    if not idiom_id:
        raise PatternSyntax("empty idiom id")
    return parse_pattern(
        pattern_text, language, pattern_id=idiom_id, gloss=gloss, literal_gloss=literal_gloss
    )


def load_idiom_file(path: str | Path, language: str | None = None) -> list[IdiomPattern]:
    path = Path(path)
    language = language or path.stem
    patterns: list[IdiomPattern] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        try:
            patterns.append(parse_idiom_line(raw, language))
        except PatternSyntax as exc:
            raise PatternSyntax(f"{path.name}:{lineno}: {exc}") from exc
    return patterns


def _word_count_between(tokens: list[Token], lo: int, hi: int) -> int:
    """Word tokens strictly between positions lo and hi (punctuation is transparent)."""
    return sum(1 for idx in range(lo + 1, hi) for t in [tokens[idx]] if t.is_word)


def _gap_for_positions(tokens: list[Token], positions: tuple[int, ...], capacities: list[int]) -> int:
    gap = 0
    for (lo, hi), capacity in zip(zip(positions, positions[1:]), capacities):
        gap += max(0, _word_count_between(tokens, lo, hi) - capacity)
    return gap


def locate(
    tokens: list[Token],
    lemmas: list[frozenset[str]],
    pattern: IdiomPattern,
) -> IdiomMatch | None:
    """Find the pattern's constituents in a tokenized sentence.

    Returns the match with minimal token span, breaking ties toward the
    leftmost positions, or None if any constituent lemma is missing.
    ``tokens`` and ``lemmas`` must be aligned index-for-index.
    """
    if len(tokens) != len(lemmas):
        raise ValueError("tokens and lemma sets are not aligned")
    constituents = pattern.constituents
    candidates = [
        [i for i, ls in enumerate(lemmas) if tokens[i].is_word and lemma in ls]
        for lemma in constituents
    ]
    if any(not c for c in candidates):
        return None
    if pattern.ordered:
        positions = _best_ordered_assignment(candidates)
        if positions is None:
            return None
        gap = _gap_for_positions(tokens, positions, pattern.gap_capacities())
        return IdiomMatch(constituent_positions=positions, gap_tokens=gap)
    return _locate_order_free(tokens, candidates, pattern)


def _best_ordered_assignment(candidates: list[list[int]]) -> tuple[int, ...] | None:
    """Minimal-span, leftmost strictly-increasing assignment of one
    position per constituent, by depth-first search over sorted candidates."""
    best: tuple[int, tuple[int, ...]] | None = None

    def extend(slot: int, acc: tuple[int, ...]) -> None:
        nonlocal best
        if slot == len(candidates):
            key = (acc[-1] - acc[0], acc)
            if best is None or key < best:
                best = key
            return
        for idx in candidates[slot]:
            if acc and idx <= acc[-1]:
                continue
            if best is not None and acc and idx - acc[0] > best[0]:
                break  # candidates sorted ascending; span can only grow
            extend(slot + 1, acc + (idx,))

    extend(0, ())
    return best[1] if best else None


def _locate_order_free(
    tokens: list[Token], candidates: list[list[int]], pattern: IdiomPattern
) -> IdiomMatch | None:
    """Order-free variant: constituents may appear in any order.

    Wildcard capacities pool into one budget applied to the total number of
    word tokens interleaved between the chosen positions.
    """
    best: tuple[int, tuple[int, ...]] | None = None
    for perm in set(permutations(range(len(candidates)))):
        assignment = _best_ordered_assignment([candidates[i] for i in perm])
        if assignment is None:
            continue
        key = (assignment[-1] - assignment[0], assignment)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    positions = best[1]
    budget = sum(s.max_tokens for s in pattern.slots if isinstance(s, Wildcard))
    between = sum(
        _word_count_between(tokens, lo, hi) for lo, hi in zip(positions, positions[1:])
    )
    return IdiomMatch(constituent_positions=positions, gap_tokens=max(0, between - budget))


def classify(match: IdiomMatch, idiomatic: bool) -> SampleType:
    """Sample type from juxtaposition (gap 0 or not) and the player's label."""
    if idiomatic:
        return SampleType.A if match.gap_tokens == 0 else SampleType.B
    return SampleType.C if match.gap_tokens == 0 else SampleType.D
