"""Lexicon polarity scoring, score histograms, and emotion frequency
comparisons between two prediction sets."""

from __future__ import annotations

import csv
import re
from bisect import bisect_left
from collections import Counter

from .. import resources

__all__ = [
    "NEGATORS",
    "polarity_score",
    "polarity_histogram",
    "HISTOGRAM_BINS",
    "emotion_freq_diff",
    "read_emotion_csv",
]

NEGATORS = frozenset({"not", "never", "no"})

_WORD_RE = re.compile(r"[a-z']+")

# Eight bins of width 0.25 over [-1, 1]. The first is closed on both
# ends; the rest are left-open, right-closed. Upper edges are all exactly
# representable in binary floating point.
_UPPER_EDGES = (-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0)
HISTOGRAM_BINS = (
    "[-1.00,-0.75]",
    "(-0.75,-0.50]",
    "(-0.50,-0.25]",
    "(-0.25,0.00]",
    "(0.00,0.25]",
    "(0.25,0.50]",
    "(0.50,0.75]",
    "(0.75,1.00]",
)

_DEFAULT_LEXICON: dict[str, float] | None = None


def default_polarity_lexicon() -> dict[str, float]:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        _DEFAULT_LEXICON = resources.load_polarity_lexicon()
    return _DEFAULT_LEXICON


def polarity_score(text: str, lexicon: dict[str, float] | None = None) -> float:
    """Mean lexicon value over matched words; a negator (not/never/no)
    flips the sign of the next matched word, and a second negator before
    the match flips it back. No matches -> 0."""
    if lexicon is None:
        lexicon = default_polarity_lexicon()
    values = []
    sign = 1.0
    for word in _WORD_RE.findall(text.lower()):
        if word in NEGATORS:
            sign = -sign
            continue
        value = lexicon.get(word)
        if value is None:
            value = lexicon.get(word.strip("'"))
        if value is not None:
            values.append(sign * value)
            sign = 1.0
    if not values:
        return 0.0
    return sum(values) / len(values)


def polarity_histogram(scores) -> dict[str, int]:
    """Counts per bin; always sums to len(scores)."""
    counts = {label: 0 for label in HISTOGRAM_BINS}
    for score in scores:
        if not -1.0 <= score <= 1.0:
            raise ValueError(f"polarity score {score} outside [-1, 1]")
        index = bisect_left(_UPPER_EDGES, score)
        counts[HISTOGRAM_BINS[index]] += 1
    return counts


def _frequencies(predictions: dict[str, list[str]], taxonomy: tuple[str, ...]) -> dict[str, float]:
    allowed = set(taxonomy)
    counts: Counter = Counter()
    total = 0
    for post_id in sorted(predictions):
        for label in predictions[post_id]:
            if label not in allowed:
                raise ValueError(f"emotion label {label!r} outside the taxonomy")
            counts[label] += 1
            total += 1
    if total == 0:
        return {e: 0.0 for e in taxonomy}
    return {e: counts[e] / total for e in taxonomy}


def emotion_freq_diff(
    pred_inspiring: dict[str, list[str]],
    pred_other: dict[str, list[str]],
    taxonomy=None,
) -> dict[str, float]:
    """Per-corpus-normalized frequency difference per emotion; positive
    means more prevalent in the first (inspiring) predictions."""
    if taxonomy is None:
        taxonomy = resources.load_emotion_labels()
    taxonomy = tuple(taxonomy)
    freq_inspiring = _frequencies(pred_inspiring, taxonomy)
    freq_other = _frequencies(pred_other, taxonomy)
    return {e: freq_inspiring[e] - freq_other[e] for e in taxonomy}


def read_emotion_csv(source) -> dict[str, list[str]]:
    """CSV with header post_id,emotion; multiple rows per post allowed."""
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    handle = open(source, encoding="utf-8", newline="") if own else source
    try:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["post_id", "emotion"]:
            raise ValueError("emotion file must start with post_id,emotion")
        predictions: dict[str, list[str]] = {}
        for row in reader:
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"malformed emotion row: {row!r}")
            predictions.setdefault(row[0], []).append(row[1])
        return predictions
    finally:
        if own:
            handle.close()
