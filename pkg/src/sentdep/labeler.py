"""Aspect occurrence detection and polarity labeling.

The scoring layer consumes (tweet_id, date, aspect, polarity) tuples and
does not care where they come from. Production labels typically arrive
from an external classifier via :func:`sentdep.ingest.parse_labeled`; this
module supplies the detection of aspect occurrences in tokenized text plus
a deterministic lexicon-window labeler that serves as the built-in
reference implementation (and powers synthetic fixtures).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Protocol, Sequence

from .core import PolarityLabel
from .ingest import AspectLexicon, TweetRecord, tokenize

logger = logging.getLogger(__name__)

#: Tokens inspected on each side of an aspect occurrence.
DEFAULT_WINDOW = 5


class PolarityLexicon:
    """Lowercase positive and negative opinion terms.

    The two sets must be disjoint and non-empty; anything not listed is
    treated as neutral context.
    """

    def __init__(self, positive: Iterable[str], negative: Iterable[str]):
        pos = {w.strip().lower() for w in positive if w.strip()}
        neg = {w.strip().lower() for w in negative if w.strip()}
        if not pos or not neg:
            raise ValueError("both polarity term sets must be non-empty")
        overlap = pos & neg
        if overlap:
            raise ValueError(f"terms listed as both positive and negative: {sorted(overlap)}")
        self.positive = frozenset(pos)
        self.negative = frozenset(neg)

    @classmethod
    def from_files(cls, positive_path, negative_path) -> "PolarityLexicon":
        """Load term files: one term per line, '#' comments ignored."""
        return cls(_read_terms(positive_path), _read_terms(negative_path))


def _read_terms(path) -> list[str]:
    terms: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                terms.append(line)
    return terms


@dataclass(frozen=True)
class AspectOccurrence:
    """One contiguous match of an aspect's token sequence in a tweet.

    ``start`` indexes the first matched token; ``end`` is one past the last.
    """

    aspect: str
    start: int
    end: int


def find_aspect_occurrences(
    tokens: Sequence[str], lexicon: AspectLexicon
) -> list[AspectOccurrence]:
    """Locate every aspect occurrence in a token list.

    Matches are on whole contiguous tokens; multi-token aspects must appear
    in order with no gaps. Overlapping matches of *different* aspects are
    all reported (a token span can support several aspects); repeated
    mentions of the same aspect yield one occurrence each. Output is
    ordered by (start, lexicon position).
    """
    found: list[tuple[int, int, AspectOccurrence]] = []
    for lex_idx, seq in enumerate(lexicon.token_sequences):
        w = len(seq)
        for start in range(len(tokens) - w + 1):
            if tuple(tokens[start:start + w]) == seq:
                found.append((start, lex_idx,
                              AspectOccurrence(lexicon.aspects[lex_idx], start, start + w)))
    found.sort(key=lambda t: (t[0], t[1]))
    return [occ for _, _, occ in found]


class Labeler(Protocol):
    """Anything that can assign a polarity to one aspect occurrence."""

    def label(self, tokens: Sequence[str], occurrence: AspectOccurrence) -> PolarityLabel:
        ...


def lexicon_window_label(
    tokens: Sequence[str],
    occurrence: AspectOccurrence,
    lexicon: PolarityLexicon,
    window: int = DEFAULT_WINDOW,
) -> PolarityLabel:
    """Label one occurrence from opinion terms near it.

    Counts positive and negative terms among the ``window`` tokens on each
    side of the occurrence (the aspect's own tokens are skipped). More
    positive than negative terms labels the occurrence positive, the
    reverse negative, and a tie — including zero hits — neutral.
    """
    if window < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    lo = max(0, occurrence.start - window)
    hi = min(len(tokens), occurrence.end + window)
    pos = neg = 0
    for i in range(lo, hi):
        if occurrence.start <= i < occurrence.end:
            continue
        if tokens[i] in lexicon.positive:
            pos += 1
        elif tokens[i] in lexicon.negative:
            neg += 1
    if pos > neg:
        return PolarityLabel.POSITIVE
    if neg > pos:
        return PolarityLabel.NEGATIVE
    return PolarityLabel.NEUTRAL


@dataclass(frozen=True)
class LexiconWindowLabeler:
    """Deterministic :class:`Labeler` built on a polarity lexicon."""

    lexicon: PolarityLexicon
    window: int = DEFAULT_WINDOW

    def label(self, tokens: Sequence[str], occurrence: AspectOccurrence) -> PolarityLabel:
        return lexicon_window_label(tokens, occurrence, self.lexicon, self.window)


def label_corpus(
    tweets: Iterable[TweetRecord],
    aspects: AspectLexicon,
    labeler: Labeler,
) -> list[tuple[str, date, str, PolarityLabel]]:
    """Detect and label every aspect occurrence in a tweet corpus.

    Emits one tuple per occurrence (not per distinct aspect), keyed by the
    tweet's UTC calendar day, in (corpus order, occurrence order). The
    output shape matches :func:`sentdep.ingest.parse_labeled`, so built-in
    and external labels are interchangeable downstream.
    """
    out: list[tuple[str, date, str, PolarityLabel]] = []
    for tweet in tweets:
        tokens = tokenize(tweet.text)
        if not tokens:
            continue
        day = tweet.utc_date
        for occ in find_aspect_occurrences(tokens, aspects):
            out.append((tweet.id, day, occ.aspect, labeler.label(tokens, occ)))
    return out
