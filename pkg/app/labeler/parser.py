import re
from typing import List, Optional, Sequence

from app.common.logger import logger
from app.core.schema import Dimension, FineLabel, KeywordHit, Subcategory
from app.labeler.lexicon import Lexicon, default_lexicon

# Hyphenated compounds ("mild-to-moderate") stay one token.
_TOKEN_PATTERN = re.compile(r"[^\W_]+(?:-[^\W_]+)*")
_VOWELS = frozenset("aeiou")


def tokenize(text: str) -> List[str]:
    """Case-folded word tokens with punctuation stripped."""
    return _TOKEN_PATTERN.findall(text.casefold())


def _inflects(token: str, stem: str, suffixes: Sequence[str]) -> bool:
    if token == stem:
        return True
    for suffix in suffixes:
        if token == stem + suffix:
            return True
        # improve + ing -> improving
        if stem.endswith("e") and suffix[:1] in _VOWELS and token == stem[:-1] + suffix:
            return True
    return False


def _match_token(token: str, position: int, lexicon: Lexicon) -> Optional[KeywordHit]:
    for stem, polarity in lexicon.entries(Dimension.SEVERITY):
        if token == stem:
            return KeywordHit(
                stem=stem,
                surface=token,
                position=position,
                polarity=polarity,
                dimension=Dimension.SEVERITY,
            )
    # longest stem first so overlapping stems resolve deterministically
    stems = sorted(lexicon.entries(Dimension.CHANGE), key=lambda e: (-len(e[0]), e[0]))
    for stem, polarity in stems:
        if _inflects(token, stem, lexicon.suffixes):
            return KeywordHit(
                stem=stem,
                surface=token,
                position=position,
                polarity=polarity,
                dimension=Dimension.CHANGE,
            )
    return None


def match_keywords(tokens: Sequence[str], lexicon: Lexicon) -> List[KeywordHit]:
    """At most one hit per token, reported in token order."""
    hits = (_match_token(token, i, lexicon) for i, token in enumerate(tokens))
    return [hit for hit in hits if hit is not None]


def classify_fine(hits: Sequence[KeywordHit]) -> FineLabel:
    """Apply the division rule: any typical hit makes the report typical.

    A hyphenated severity grade ("mild-to-moderate") replaces the single-word
    grades before it, so "substantial cardiomegaly with mild-to-moderate
    edema" grades the finding by the compound. No hits means typical.
    """
    deciding: List[KeywordHit] = []
    for hit in hits:
        if hit.dimension == Dimension.SEVERITY and "-" in hit.stem:
            deciding = [
                h for h in deciding if h.dimension != Dimension.SEVERITY or "-" in h.stem
            ]
        deciding.append(hit)

    if not deciding or any(h.polarity == Subcategory.TYPICAL for h in deciding):
        subcategory = Subcategory.TYPICAL
    else:
        subcategory = Subcategory.ATYPICAL
    return FineLabel(subcategory=subcategory, hits=tuple(hits))


def label_report(text: str, lexicon: Optional[Lexicon] = None) -> FineLabel:
    lexicon = lexicon or default_lexicon()
    label = classify_fine(match_keywords(tokenize(text), lexicon))
    logger.debug(
        f"Labeled report as {label.subcategory.value} "
        f"({', '.join(h.surface for h in label.hits) or 'no keywords'})"
    )
    return label
