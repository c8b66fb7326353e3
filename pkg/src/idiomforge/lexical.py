"""Tokenization and dictionary-backed lemmatization.

Constituent lookup is lemma-based so inflected surface forms ("went") are
found through their base form ("go"). A lookup returns a *set* of candidate
lemmas rather than a single guess: one surface form can map to several base
forms, which matters for morphologically rich languages. The lowercased
surface itself is always included as a fallback, so the result is never
empty and matching degrades gracefully when the dictionary has no entry.

Dictionaries are plain UTF-8 text, one entry per line::

    surface<TAB>lemma1,lemma2,...

Lines starting with ``#`` are comments. Lookups are case-insensitive.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DictionaryFormatError, EmptyText


@dataclass(frozen=True)
class Token:
    """One surface token with its position in the source sentence.

    ``start``/``end`` are codepoint offsets such that
    ``text[start:end] == surface``.
    """

    surface: str
    index: int
    start: int
    end: int

    @property
    def char_span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def is_word(self) -> bool:
        """True for alphanumeric tokens, False for punctuation tokens."""
        return any(ch.isalnum() for ch in self.surface)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` on whitespace and punctuation boundaries.

    Runs of alphanumeric characters form word tokens; every other
    non-space character becomes a single-character punctuation token
    (apostrophes included, so "don't" yields three tokens). Raises
    :class:`EmptyText` for blank input.
    """
    if not text or not text.strip():
        raise EmptyText("cannot tokenize blank text")
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalnum():
            j = i + 1
            while j < n and text[j].isalnum():
                j += 1
        else:
            j = i + 1
        tokens.append(Token(surface=text[i:j], index=len(tokens), start=i, end=j))
        i = j
    return tokens


class LemmaDictionary:
    """Immutable surface-form -> lemma-set mapping for one language."""

    def __init__(self, language: str, entries: dict[str, frozenset[str]] | None = None):
        self.language = language
        self._entries: dict[str, frozenset[str]] = {
            surface.lower(): frozenset(lemma.lower() for lemma in lemmas)
            for surface, lemmas in (entries or {}).items()
        }

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, surface: str) -> frozenset[str]:
        return self._entries.get(surface.lower(), frozenset())

    @classmethod
    def load(cls, path: str | Path, language: str | None = None) -> "LemmaDictionary":
        path = Path(path)
        entries: dict[str, frozenset[str]] = {}
        for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise DictionaryFormatError(f"{path.name}:{lineno}: expected 'surface<TAB>lemma1,lemma2,...'")
            surface = parts[0].strip()
            lemmas = frozenset(p.strip().lower() for p in parts[1].split(",") if p.strip())
            if not lemmas:
                raise DictionaryFormatError(f"{path.name}:{lineno}: empty lemma list")
            entries[surface] = lemmas
        return cls(language or path.stem, entries)

    @classmethod
    def empty(cls, language: str = "xx") -> "LemmaDictionary":
        return cls(language, {})


def lemma_candidates(token: Token | str, dictionary: LemmaDictionary) -> frozenset[str]:
    """Candidate lemmas for one token: dictionary entries plus the
    lowercased surface form. Never empty."""
    surface = token.surface if isinstance(token, Token) else token
    return dictionary.lookup(surface) | {surface.lower()}


def lemma_sequence(tokens: list[Token], dictionary: LemmaDictionary) -> list[frozenset[str]]:
    """Lemma candidate sets aligned with ``tokens``."""
    return [lemma_candidates(tok, dictionary) for tok in tokens]
