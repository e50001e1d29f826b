"""Annotation collection and agreement statistics.

Covers the annotation workflow: handing tasks to annotators (3 distinct
annotators per post), durably recording their judgments, aggregating
votes into post labels with an agreement score, chance-corrected
inter-rater agreement, and the influence/emotion threshold tables.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

__all__ = [
    "INFLUENCE_MOTIVATION",
    "INFLUENCE_FEEL_GOOD",
    "INFLUENCE_NO_EFFECT",
    "INFLUENCE_OTHER",
    "CANONICAL_INFLUENCES",
    "SOLICITED_EMOTIONS",
    "CONFIDENCE_LEVELS",
    "AnnotationRecord",
    "AnnotationAck",
    "AggregateLabel",
    "AnnotationStore",
    "AssignmentLedger",
    "InvalidAnnotationError",
    "DuplicateAnnotationError",
    "UnknownPostError",
    "UndefinedAgreementError",
    "record_annotation",
    "aggregate_labels",
    "agreement_counts",
    "fleiss_kappa",
    "inspiring_rating_matrix",
    "effect_emotion_tables",
    "write_agreement_csv",
    "write_effect_emotion_csv",
]

INFLUENCE_MOTIVATION = "motivation_to_act"
INFLUENCE_FEEL_GOOD = "feel_good"
INFLUENCE_NO_EFFECT = "no_effect"
INFLUENCE_OTHER = "other"

CANONICAL_INFLUENCES = (
    INFLUENCE_MOTIVATION,
    INFLUENCE_FEEL_GOOD,
    INFLUENCE_NO_EFFECT,
)

SOLICITED_EMOTIONS = ("admiration", "gratitude", "curiosity", "optimism", "neutral")

CONFIDENCE_LEVELS = ("low", "high")

ANNOTATIONS_PER_POST = 3


class InvalidAnnotationError(ValueError):
    pass


class DuplicateAnnotationError(ValueError):
    pass


class UnknownPostError(KeyError):
    pass


class UndefinedAgreementError(ValueError):
    pass


@dataclass(frozen=True)
class AnnotationRecord:
    post_id: str
    annotator_id: str
    inspiring: bool
    influences: tuple[str, ...] = ()
    emotions: tuple[str, ...] = ()
    confidence: str = "high"
    submitted_at: int = 0

    def __post_init__(self):
        object.__setattr__(self, "influences", tuple(self.influences))
        object.__setattr__(self, "emotions", tuple(self.emotions))
        if not self.post_id or not self.annotator_id:
            raise InvalidAnnotationError("post_id and annotator_id are required")
        if not isinstance(self.inspiring, bool):
            raise InvalidAnnotationError("inspiring must be a boolean")
        if self.confidence not in CONFIDENCE_LEVELS:
            raise InvalidAnnotationError(f"confidence must be one of {CONFIDENCE_LEVELS}")
        if not self.inspiring and (self.influences or self.emotions):
            raise InvalidAnnotationError(
                "influences and emotions must be empty when inspiring is false"
            )
        for entry in self.influences + self.emotions:
            if not isinstance(entry, str) or not entry.strip():
                raise InvalidAnnotationError("influence/emotion entries must be non-empty text")

    def other_influences(self) -> tuple[str, ...]:
        """Free-text influence entries (anything outside the canonical three)."""
        return tuple(e for e in self.influences if e not in CANONICAL_INFLUENCES)

    def to_json_dict(self) -> dict:
        return {
            "post_id": self.post_id,
            "annotator_id": self.annotator_id,
            "inspiring": self.inspiring,
            "influences": list(self.influences),
            "emotions": list(self.emotions),
            "confidence": self.confidence,
            "submitted_at": self.submitted_at,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "AnnotationRecord":
        return cls(
            post_id=data["post_id"],
            annotator_id=data["annotator_id"],
            inspiring=data["inspiring"],
            influences=tuple(data.get("influences", ())),
            emotions=tuple(data.get("emotions", ())),
            confidence=data.get("confidence", "high"),
            submitted_at=int(data.get("submitted_at", 0)),
        )


@dataclass(frozen=True)
class AnnotationAck:
    post_id: str
    annotator_id: str
    total_records: int


@dataclass(frozen=True)
class AggregateLabel:
    post_id: str
    inspiring: bool
    agreement: int
    num_annotations: int

    @property
    def complete(self) -> bool:
        return self.num_annotations >= ANNOTATIONS_PER_POST


class AnnotationStore:
    """Append-only NDJSON store; one AnnotationRecord per line.

    Existing records are loaded at open so duplicate (post, annotator)
    pairs are rejected across restarts. Appends flush and fsync before
    acknowledging.
    """

    def __init__(self, path):
        self._path = os.fspath(path)
        self._records: list[AnnotationRecord] = []
        self._pairs: set[tuple[str, str]] = set()
        self._lock = threading.Lock()
        if os.path.exists(self._path):
            with open(self._path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if not line:
                        continue
                    record = AnnotationRecord.from_json_dict(json.loads(line))
                    self._records.append(record)
                    self._pairs.add((record.post_id, record.annotator_id))

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self._pairs

    def records(self) -> list[AnnotationRecord]:
        with self._lock:
            return list(self._records)

    def append(self, record: AnnotationRecord) -> int:
        with self._lock:
            pair = (record.post_id, record.annotator_id)
            if pair in self._pairs:
                raise DuplicateAnnotationError(
                    f"annotator {record.annotator_id!r} already labeled post {record.post_id!r}"
                )
            with open(self._path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n")
                handle.flush()
                os.fsync(handle.fileno())
            self._records.append(record)
            self._pairs.add(pair)
            return len(self._records)


class AssignmentLedger:
    """Hands out posts so each ends with exactly ANNOTATIONS_PER_POST
    annotations from distinct annotators.

    next_task reserves a slot; record_annotation (or `complete`) fills it;
    `release` frees an abandoned reservation. All transitions share one
    lock so the cap holds under concurrent annotators. Each annotator
    walks the posts in a private order derived from a hash of their id,
    so concurrent annotators spread across different posts.
    """

    def __init__(self, post_ids, *, cap: int = ANNOTATIONS_PER_POST):
        self._post_ids = sorted(set(post_ids))
        self._cap = cap
        self._completed: dict[str, set[str]] = defaultdict(set)
        self._pending: dict[str, set[str]] = defaultdict(set)
        self._pending_post: dict[str, str] = {}
        self._orders: dict[str, list[str]] = {}
        self._lock = threading.Lock()

    def _order_for(self, annotator_id: str) -> list[str]:
        order = self._orders.get(annotator_id)
        if order is None:
            digest = hashlib.sha256(annotator_id.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "big")
            order = list(self._post_ids)
            random.Random(seed).shuffle(order)
            self._orders[annotator_id] = order
        return order

    def _touched(self, post_id: str) -> set[str]:
        return self._completed[post_id] | self._pending[post_id]

    def next_task(self, annotator_id: str) -> str | None:
        if not annotator_id:
            raise ValueError("annotator_id must be non-empty")
        with self._lock:
            # An unanswered reservation is re-offered, so an annotator
            # holds at most one open slot at a time.
            open_post = self._pending_post.get(annotator_id)
            if open_post is not None:
                return open_post
            for post_id in self._order_for(annotator_id):
                touched = self._touched(post_id)
                if annotator_id in touched or len(touched) >= self._cap:
                    continue
                self._pending[post_id].add(annotator_id)
                self._pending_post[annotator_id] = post_id
                return post_id
        return None

    def complete(self, post_id: str, annotator_id: str) -> None:
        """Mark a submission. Accepts unreserved submissions while capacity
        remains (walk-in annotators); duplicates are rejected."""
        with self._lock:
            if annotator_id in self._completed[post_id]:
                raise DuplicateAnnotationError(
                    f"annotator {annotator_id!r} already labeled post {post_id!r}"
                )
            reserved = annotator_id in self._pending[post_id]
            if not reserved and len(self._touched(post_id)) >= self._cap:
                raise InvalidAnnotationError(f"post {post_id!r} already fully annotated")
            self._pending[post_id].discard(annotator_id)
            if self._pending_post.get(annotator_id) == post_id:
                del self._pending_post[annotator_id]
            self._completed[post_id].add(annotator_id)

    def rollback(self, post_id: str, annotator_id: str) -> None:
        """Undo a `complete` whose paired store write failed."""
        with self._lock:
            self._completed[post_id].discard(annotator_id)

    def release(self, post_id: str, annotator_id: str) -> None:
        with self._lock:
            self._pending[post_id].discard(annotator_id)
            if self._pending_post.get(annotator_id) == post_id:
                del self._pending_post[annotator_id]

    def annotators_of(self, post_id: str) -> set[str]:
        with self._lock:
            return set(self._completed[post_id])

    def is_exhausted(self) -> bool:
        with self._lock:
            return all(
                len(self._completed[p] | self._pending[p]) >= self._cap
                for p in self._post_ids
            )


def record_annotation(
    record: AnnotationRecord,
    store: AnnotationStore,
    *,
    known_posts=None,
    ledger: AssignmentLedger | None = None,
) -> AnnotationAck:
    """Validate and durably append one annotation. Rejects duplicates,
    unknown post ids (when `known_posts` is given), and submissions past
    the per-post cap (when a ledger is given). The ledger is the capacity
    gate: it books the slot first and is rolled back if the write fails."""
    if known_posts is not None and record.post_id not in known_posts:
        raise UnknownPostError(record.post_id)
    if ledger is not None:
        ledger.complete(record.post_id, record.annotator_id)
        try:
            total = store.append(record)
        except BaseException:
            ledger.rollback(record.post_id, record.annotator_id)
            raise
    else:
        total = store.append(record)
    return AnnotationAck(record.post_id, record.annotator_id, total)


def aggregate_labels(records) -> list[AggregateLabel]:
    """Per post: agreement = count of inspiring votes; inspiring iff >= 1."""
    votes: dict[str, list[bool]] = defaultdict(list)
    for record in records:
        votes[record.post_id].append(record.inspiring)
    labels = []
    for post_id in sorted(votes):
        agreement = sum(votes[post_id])
        labels.append(
            AggregateLabel(
                post_id=post_id,
                inspiring=agreement >= 1,
                agreement=agreement,
                num_annotations=len(votes[post_id]),
            )
        )
    return labels


def agreement_counts(labels) -> dict[str, int]:
    """Histogram of posts by agreement level, plus the non-inspiring count."""
    counts = {"non_inspiring": 0, "agreement_1": 0, "agreement_2": 0, "agreement_3": 0}
    for label in labels:
        if label.agreement == 0:
            counts["non_inspiring"] += 1
        elif label.agreement == 1:
            counts["agreement_1"] += 1
        elif label.agreement == 2:
            counts["agreement_2"] += 1
        else:
            counts["agreement_3"] += 1
    return counts


def fleiss_kappa(matrix) -> float:
    """Chance-corrected multi-rater agreement over an items x categories
    count matrix whose rows all sum to the same rater count n >= 2."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError("rating matrix must be 2-D with at least one item")
    if np.any(m < 0) or np.any(m != np.floor(m)):
        raise ValueError("rating matrix cells must be non-negative integers")
    row_sums = m.sum(axis=1)
    n = row_sums[0]
    if n < 2 or np.any(row_sums != n):
        raise ValueError("every item needs the same rater count n >= 2")
    num_items = m.shape[0]
    per_item = (np.sum(m * m, axis=1) - n) / (n * (n - 1))
    observed = float(per_item.mean())
    proportions = m.sum(axis=0) / (num_items * n)
    expected = float(np.sum(proportions * proportions))
    if 1.0 - expected <= 1e-15:
        raise UndefinedAgreementError(
            "all ratings fall in a single category; agreement is undefined"
        )
    return (observed - expected) / (1.0 - expected)


def inspiring_rating_matrix(records, *, raters: int = ANNOTATIONS_PER_POST):
    """Two-column (inspiring, not) count matrix over posts with exactly
    `raters` annotations. Returns (matrix, post_ids) so the subset size
    can be reported next to the statistic."""
    votes: dict[str, list[bool]] = defaultdict(list)
    for record in records:
        votes[record.post_id].append(record.inspiring)
    rows = []
    post_ids = []
    for post_id in sorted(votes):
        if len(votes[post_id]) != raters:
            continue
        yes = sum(votes[post_id])
        rows.append([yes, raters - yes])
        post_ids.append(post_id)
    matrix = np.asarray(rows, dtype=int) if rows else np.zeros((0, 2), dtype=int)
    return matrix, post_ids


def effect_emotion_tables(records):
    """Counts of inspiring posts where >= k annotators picked each
    influence category / emotion, k in {1, 2, 3}. Free-text influences
    pool into 'other'; emotions are lowercased for counting."""
    by_post: dict[str, list[AnnotationRecord]] = defaultdict(list)
    for record in records:
        by_post[record.post_id].append(record)

    influence_table: dict[str, dict[int, int]] = {
        c: {1: 0, 2: 0, 3: 0}
        for c in CANONICAL_INFLUENCES + (INFLUENCE_OTHER,)
    }
    emotion_table: dict[str, dict[int, int]] = {
        e: {1: 0, 2: 0, 3: 0} for e in SOLICITED_EMOTIONS
    }

    for post_id in sorted(by_post):
        posts_records = by_post[post_id]
        if not any(r.inspiring for r in posts_records):
            continue
        influence_votes: dict[str, int] = defaultdict(int)
        emotion_votes: dict[str, int] = defaultdict(int)
        for record in posts_records:
            chosen = set()
            for entry in record.influences:
                chosen.add(entry if entry in CANONICAL_INFLUENCES else INFLUENCE_OTHER)
            for category in chosen:
                influence_votes[category] += 1
            for emotion in {e.strip().lower() for e in record.emotions}:
                emotion_votes[emotion] += 1
        for category, count in influence_votes.items():
            for k in (1, 2, 3):
                if count >= k:
                    influence_table[category][k] += 1
        for emotion, count in emotion_votes.items():
            if emotion not in emotion_table:
                emotion_table[emotion] = {1: 0, 2: 0, 3: 0}
            for k in (1, 2, 3):
                if count >= k:
                    emotion_table[emotion][k] += 1

    return influence_table, emotion_table


def write_agreement_csv(labels, path) -> None:
    counts = agreement_counts(labels)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("non_inspiring,agreement_1,agreement_2,agreement_3\n")
        handle.write(
            f"{counts['non_inspiring']},{counts['agreement_1']},"
            f"{counts['agreement_2']},{counts['agreement_3']}\n"
        )


def write_effect_emotion_csv(influence_table, emotion_table, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("kind,category,at_least_1,at_least_2,at_least_3\n")
        for category in sorted(influence_table):
            row = influence_table[category]
            handle.write(f"influence,{category},{row[1]},{row[2]},{row[3]}\n")
        for emotion in sorted(emotion_table):
            row = emotion_table[emotion]
            handle.write(f"emotion,{emotion},{row[1]},{row[2]},{row[3]}\n")
