"""Frequency-based keyword statistics over tokenized documents."""

from __future__ import annotations

import math
from collections import Counter

__all__ = ["tfidf_scores", "ranked_terms", "distinctive_terms", "top_ngrams"]


def _token_lists(docs) -> list[list[str]]:
    out = []
    for doc in docs:
        tokens = getattr(doc, "tokens", doc)
        out.append(list(tokens))
    return out


def tfidf_scores(docs, *, other_docs=None, mode: str = "per_post") -> dict[str, float]:
    """Term -> tf * ln(N / df), ordered by (score desc, term asc).

    per_post mode (default): tf is the term's total count over `docs`,
    df and N range over those individual documents. megadoc mode pools
    `docs` and `other_docs` into one document each (N = 2), which zeroes
    terms shared by both pools.
    """
    token_lists = _token_lists(docs)
    if not token_lists:
        raise ValueError("tfidf_scores needs at least one document")
    if mode == "per_post":
        tf = Counter()
        df = Counter()
        for tokens in token_lists:
            tf.update(tokens)
            df.update(set(tokens))
        n_docs = len(token_lists)
        scores = {t: tf[t] * math.log(n_docs / df[t]) for t in tf}
    elif mode == "megadoc":
        if other_docs is None:
            raise ValueError("megadoc mode needs other_docs")
        target = Counter()
        for tokens in token_lists:
            target.update(tokens)
        other_vocab = set()
        for tokens in _token_lists(other_docs):
            other_vocab.update(tokens)
        scores = {
            t: count * math.log(2.0) * (0.0 if t in other_vocab else 1.0)
            for t, count in target.items()
        }
    else:
        raise ValueError(f"unknown tf-idf mode {mode!r}")
    return dict(sorted(scores.items(), key=lambda item: (-item[1], item[0])))


def ranked_terms(scores: dict[str, float], k: int) -> list[tuple[str, float]]:
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return ordered[: max(k, 0)]


def distinctive_terms(inspiring_docs, other_docs) -> list[tuple[str, float]]:
    """Add-one smoothed log-odds of each term between the two corpora,
    ranked descending; swapping the corpora negates every score."""
    inspiring_lists = _token_lists(inspiring_docs)
    other_lists = _token_lists(other_docs)
    if not inspiring_lists or not other_lists:
        raise ValueError("both corpora must contain at least one document")
    c_in = Counter()
    for tokens in inspiring_lists:
        c_in.update(tokens)
    c_out = Counter()
    for tokens in other_lists:
        c_out.update(tokens)
    vocabulary = set(c_in) | set(c_out)
    if not vocabulary:
        return []
    t_in = sum(c_in.values())
    t_out = sum(c_out.values())
    v = len(vocabulary)
    scored = [
        (
            term,
            math.log((c_in[term] + 1) / (t_in + v))
            - math.log((c_out[term] + 1) / (t_out + v)),
        )
        for term in vocabulary
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored


def top_ngrams(docs, n: int, k: int) -> list[tuple[str, int]]:
    """Top-k contiguous token n-grams by count, ties alphabetical."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if k < 0:
        raise ValueError("k must be >= 0")
    counts: Counter = Counter()
    for tokens in _token_lists(docs):
        for i in range(len(tokens) - n + 1):
            counts[" ".join(tokens[i : i + n])] += 1
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ordered[:k]
