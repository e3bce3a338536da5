"""Morphology workbench and corpus toolkit for Toto."""

from .errors import TotoError
from .lexicon import Lexicon, LexicalEntry, MorphCategory, WordClass, golden_lexicon, load_lexicon
from .morphology import Analysis, FeatureBundle, analyze, derive, generate

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "FeatureBundle",
    "LexicalEntry",
    "Lexicon",
    "MorphCategory",
    "TotoError",
    "WordClass",
    "analyze",
    "derive",
    "generate",
    "golden_lexicon",
    "load_lexicon",
]
