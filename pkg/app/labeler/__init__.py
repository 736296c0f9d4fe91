from app.labeler.corpus import ReportCorpus, ReportExample, default_corpus, load_corpus
from app.labeler.lexicon import (
    Lexicon,
    default_lexicon,
    format_lexicon,
    load_lexicon,
    parse_lexicon,
    save_lexicon,
)
from app.labeler.parser import classify_fine, label_report, match_keywords, tokenize


__all__ = [
    "Lexicon",
    "ReportCorpus",
    "ReportExample",
    "default_corpus",
    "default_lexicon",
    "load_corpus",
    "load_lexicon",
    "save_lexicon",
    "parse_lexicon",
    "format_lexicon",
    "tokenize",
    "match_keywords",
    "classify_fine",
    "label_report",
]
