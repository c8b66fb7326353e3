"""Message catalogs: loading, rendering, and cross-language parity linting.

Catalog files are UTF-8 ``key=template`` lines with ``{name}`` placeholders.
All shipped languages must define the same key set, and each key must use
the same placeholder set in every language; the lint runs at load time so a
missing translation fails before it can reach a player.
"""
from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .errors import CatalogError, MissingKey, MissingParam

PLACEHOLDER_RE = re.compile(r"\{([a-zA-Z_][a-zA-Z0-9_]*)\}")


class MessageCatalog:
    def __init__(self, language: str, messages: dict[str, str]):
        self.language = language
        self.messages = dict(messages)

    def keys(self) -> set[str]:
        return set(self.messages)

    def placeholders(self, key: str) -> set[str]:
        return set(PLACEHOLDER_RE.findall(self.messages[key]))

    def render(self, key: str, params: dict | None = None) -> str:
        if key not in self.messages:
            raise MissingKey(f"[{self.language}] no message key {key!r}")
        template = self.messages[key]
        params = params or {}
        needed = self.placeholders(key)
        missing = needed - set(params)
        if missing:
            raise MissingParam(f"[{self.language}] {key}: missing params {sorted(missing)}")
        out = template
        for name in needed:
            out = out.replace("{" + name + "}", str(params[name]))
        return out

    @classmethod
    def parse(cls, text: str, language: str) -> "MessageCatalog":
        messages: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CatalogError(f"[{language}] line {lineno}: expected key=template")
            key, _, template = line.partition("=")
            key = key.strip()
            if not key:
                raise CatalogError(f"[{language}] line {lineno}: empty key")
            if key in messages:
                raise CatalogError(f"[{language}] line {lineno}: duplicate key {key!r}")
            messages[key] = template
        return cls(language, messages)

    @classmethod
    def load(cls, path: str | Path, language: str | None = None) -> "MessageCatalog":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), language or path.stem)


class CatalogSet:
    """All languages together, linted for key and placeholder parity."""

    def __init__(self, catalogs: dict[str, MessageCatalog], *, lint: bool = True):
        self.catalogs = dict(catalogs)
        if lint:
            problems = self.lint()
            if problems:
                raise CatalogError("catalog parity check failed:\n" + "\n".join(problems))

    @property
    def languages(self) -> list[str]:
        return sorted(self.catalogs)

    def lint(self) -> list[str]:
        """Parity problems across languages; empty when catalogs agree."""
        problems: list[str] = []
        if not self.catalogs:
            return ["no catalogs loaded"]
        languages = self.languages
        reference = languages[0]
        ref_keys = self.catalogs[reference].keys()
        for lang in languages[1:]:
            keys = self.catalogs[lang].keys()
            for key in sorted(ref_keys - keys):
                problems.append(f"{lang}: missing key {key!r} (present in {reference})")
            for key in sorted(keys - ref_keys):
                problems.append(f"{reference}: missing key {key!r} (present in {lang})")
        shared = set.intersection(*(self.catalogs[lang].keys() for lang in languages))
        for key in sorted(shared):
            ref_ph = self.catalogs[reference].placeholders(key)
            for lang in languages[1:]:
                ph = self.catalogs[lang].placeholders(key)
                if ph != ref_ph:
                    problems.append(
                        f"{key}: placeholders differ between {reference} {sorted(ref_ph)} "
                        f"and {lang} {sorted(ph)}"
                    )
        return problems

    def render(self, key: str, language: str, params: dict | None = None) -> str:
        if language not in self.catalogs:
            raise CatalogError(f"no catalog for language {language!r}")
        return self.catalogs[language].render(key, params)


def load_catalog_dir(directory: str | Path, *, lint: bool = True) -> CatalogSet:
    directory = Path(directory)
    catalogs = {
        path.stem: MessageCatalog.load(path) for path in sorted(directory.glob("*.txt"))
    }
    if not catalogs:
        raise CatalogError(f"no catalog files in {directory}")
    return CatalogSet(catalogs, lint=lint)


def load_default_catalogs(*, lint: bool = True) -> CatalogSet:
    base = resources.files("idiomforge").joinpath("data/catalogs")
    catalogs = {}
    for entry in sorted(base.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".txt"):
            catalogs[entry.name[:-4]] = MessageCatalog.parse(
                entry.read_text(encoding="utf-8"), entry.name[:-4]
            )
    return CatalogSet(catalogs, lint=lint)


def default_dictionary(language: str):
    """Shipped demo lemma dictionary for a language, empty if none ships."""
    from .lexical import LemmaDictionary

    base = resources.files("idiomforge").joinpath(f"data/lemmas/{language}.txt")
    try:
        text = base.read_text(encoding="utf-8")
    except FileNotFoundError:
        return LemmaDictionary.empty(language)
    entries: dict[str, frozenset[str]] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        surface, _, lemmas = line.partition("\t")
        entries[surface.strip()] = frozenset(l.strip().lower() for l in lemmas.split(",") if l.strip())
    return LemmaDictionary(language, entries)


def default_idioms(language: str):
    """Shipped idiom list for a language."""
    from .matching import parse_idiom_line

    base = resources.files("idiomforge").joinpath(f"data/idioms/{language}.txt")
    try:
        text = base.read_text(encoding="utf-8")
    except FileNotFoundError:
        return []
    patterns = []
    for raw in text.splitlines():
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        patterns.append(parse_idiom_line(raw, language))
    return patterns
