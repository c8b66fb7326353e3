"""idiomforge: a gamified crowdsourcing engine for idiom usage corpora.

Players get one idiom per day, submit example sentences (idiomatic or
literal), and peer-review each other's entries. The engine locates idiom
constituents by lemma, classifies each sample by constituent position,
keeps the class distribution balanced through score boosts, and exports
the reviewed corpus as JSON lines or TSV.
"""

__version__ = "0.1.0"

from .config import GameConfig, load_config
from .engine import GameEngine
from .lexical import LemmaDictionary, tokenize
from .matching import IdiomPattern, SampleType, classify, locate, parse_pattern

__all__ = [
    "GameConfig",
    "GameEngine",
    "IdiomPattern",
    "LemmaDictionary",
    "SampleType",
    "classify",
    "load_config",
    "locate",
    "parse_pattern",
    "tokenize",
    "__version__",
]
