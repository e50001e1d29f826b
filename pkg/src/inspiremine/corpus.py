"""Post corpus storage: streaming NDJSON ingestion, querying, and balanced splits.

The store is backed by SQLite so that ingestion memory stays bounded no matter
how large the input dump is. Iteration order is insertion order.
"""

from __future__ import annotations

import csv
import json
import random
import re
import sqlite3
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator

SOURCES = ("reddit_like", "generic")
LABELS = ("inspiring", "non_inspiring")

#: Canonical NDJSON field names, one JSON object per line.
CANONICAL_FIELDS = (
    "id",
    "community",
    "title",
    "body",
    "comments",
    "created_at",
    "share_count",
    "parent_question",
    "author_feeling",
)

_HASHTAG_RE = re.compile(r"#[A-Za-z0-9_]+")

_SCHEMA = """
CREATE TABLE IF NOT EXISTS posts (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    id TEXT NOT NULL UNIQUE,
    source TEXT NOT NULL,
    community TEXT NOT NULL,
    title TEXT NOT NULL,
    body TEXT NOT NULL,
    comments TEXT NOT NULL,
    created_at INTEGER NOT NULL,
    share_count INTEGER,
    parent_question TEXT,
    author_feeling TEXT
);
CREATE TABLE IF NOT EXISTS provenance (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    descriptor TEXT NOT NULL
);
"""


class IngestError(ValueError):
    """Malformed NDJSON record in strict mode; carries the 1-based line number."""

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class PredicateError(ValueError):
    """Raised when a query predicate string cannot be parsed."""


@dataclass
class Comment:
    id: str
    body: str

    def __post_init__(self):
        if not self.id:
            raise ValueError("comment id must be non-empty")


@dataclass
class Post:
    """One social-media post with a flattened comment list.

    ``author_feeling`` carries the author-assigned feeling tag some platforms
    attach to a post (e.g. "feeling inspired"); it is optional and only used
    by the matching rules.
    """

    id: str
    body: str
    source: str = "generic"
    community: str = ""
    title: str = ""
    comments: list[Comment] = field(default_factory=list)
    created_at: int = 0
    share_count: int | None = None
    parent_question: str | None = None
    author_feeling: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("post id must be non-empty")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        if self.share_count is not None and self.share_count < 0:
            raise ValueError("share_count must be >= 0")

    def full_text(self) -> str:
        """Title and body joined with a single space; the default model input."""
        if self.title:
            return f"{self.title} {self.body}".strip()
        return self.body

    def to_record(self) -> dict:
        record = {
            "id": self.id,
            "community": self.community,
            "title": self.title,
            "body": self.body,
            "comments": [{"id": c.id, "body": c.body} for c in self.comments],
            "created_at": self.created_at,
            "share_count": self.share_count,
        }
        if self.parent_question is not None:
            record["parent_question"] = self.parent_question
        if self.author_feeling is not None:
            record["author_feeling"] = self.author_feeling
        return record


class CorpusStore:
    """SQLite-backed, id-keyed post collection.

    Connections are per-thread, so reads are safe from multiple threads once
    ingestion has finished. Mutation is not synchronized; ingest from a single
    thread.
    """

    def __init__(self, path: str | Path):
        self._path = str(path)
        self._local = threading.local()
        self._connection().executescript(_SCHEMA)

    def _connection(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            # Autocommit; ingest manages its own transactions explicitly.
            conn = sqlite3.connect(self._path, isolation_level=None)
            self._local.conn = conn
        return conn

    @property
    def path(self) -> str:
        return self._path

    def __len__(self) -> int:
        (n,) = self._connection().execute("SELECT COUNT(*) FROM posts").fetchone()
        return n

    def __contains__(self, post_id: str) -> bool:
        row = self._connection().execute(
            "SELECT 1 FROM posts WHERE id = ?", (post_id,)
        ).fetchone()
        return row is not None

    def __getitem__(self, post_id: str) -> Post:
        post = self.get(post_id)
        if post is None:
            raise KeyError(post_id)
        return post

    def get(self, post_id: str) -> Post | None:
        row = self._connection().execute(
            "SELECT id, source, community, title, body, comments, created_at,"
            " share_count, parent_question, author_feeling FROM posts WHERE id = ?",
            (post_id,),
        ).fetchone()
        return None if row is None else _post_from_row(row)

    def __iter__(self) -> Iterator[Post]:
        cursor = self._connection().execute(
            "SELECT id, source, community, title, body, comments, created_at,"
            " share_count, parent_question, author_feeling FROM posts ORDER BY seq"
        )
        for row in cursor:
            yield _post_from_row(row)

    def ids(self) -> list[str]:
        cursor = self._connection().execute("SELECT id FROM posts ORDER BY seq")
        return [r[0] for r in cursor]

    def add_post(self, post: Post) -> None:
        try:
            self._connection().execute(*_insert_statement(post))
        except sqlite3.IntegrityError:
            raise ValueError(f"duplicate post id {post.id!r}") from None

    @property
    def provenance(self) -> list[str]:
        cursor = self._connection().execute(
            "SELECT descriptor FROM provenance ORDER BY seq"
        )
        return [r[0] for r in cursor]

    def add_provenance(self, descriptor: str) -> None:
        self._connection().execute(
            "INSERT INTO provenance (descriptor) VALUES (?)", (descriptor,)
        )

    def export_ndjson(self, sink) -> int:
        """Write every post as canonical NDJSON; returns the line count."""
        n = 0
        for post in self:
            sink.write(json.dumps(post.to_record(), ensure_ascii=False) + "\n")
            n += 1
        return n

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None


def _insert_statement(post: Post) -> tuple[str, tuple]:
    return (
        "INSERT INTO posts (id, source, community, title, body, comments,"
        " created_at, share_count, parent_question, author_feeling)"
        " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
        (
            post.id,
            post.source,
            post.community,
            post.title,
            post.body,
            json.dumps([{"id": c.id, "body": c.body} for c in post.comments]),
            post.created_at,
            post.share_count,
            post.parent_question,
            post.author_feeling,
        ),
    )


def _post_from_row(row) -> Post:
    (pid, source, community, title, body, comments, created_at,
     share_count, parent_question, author_feeling) = row
    return Post(
        id=pid,
        source=source,
        community=community,
        title=title,
        body=body,
        comments=[Comment(c["id"], c["body"]) for c in json.loads(comments)],
        created_at=created_at,
        share_count=share_count,
        parent_question=parent_question,
        author_feeling=author_feeling,
    )


def _post_from_record(raw: dict, field_map: dict[str, str] | None, source: str) -> Post:
    if not isinstance(raw, dict):
        raise ValueError("record is not a JSON object")
    record: dict = {}
    for key, value in raw.items():
        name = field_map.get(key, key) if field_map else key
        if name in CANONICAL_FIELDS:
            record[name] = value

    post_id = record.get("id")
    if not isinstance(post_id, str) or not post_id:
        raise ValueError("missing or empty id")
    body = record.get("body", "")
    title = record.get("title", "")
    community = record.get("community", "")
    if not all(isinstance(v, str) for v in (body, title, community)):
        raise ValueError("body/title/community must be strings")

    comments_raw = record.get("comments", [])
    if not isinstance(comments_raw, list):
        raise ValueError("comments must be a list")
    comments = []
    for c in comments_raw:
        if not isinstance(c, dict) or not isinstance(c.get("id"), str) or not c["id"]:
            raise ValueError("comment must be an object with a non-empty id")
        if not isinstance(c.get("body", ""), str):
            raise ValueError("comment body must be a string")
        comments.append(Comment(c["id"], c.get("body", "")))

    created_at = record.get("created_at", 0)
    if isinstance(created_at, bool) or not isinstance(created_at, int):
        raise ValueError("created_at must be an integer")
    share_count = record.get("share_count")
    if share_count is not None:
        if isinstance(share_count, bool) or not isinstance(share_count, int) or share_count < 0:
            raise ValueError("share_count must be a non-negative integer")
    parent_question = record.get("parent_question")
    if parent_question is not None and not isinstance(parent_question, str):
        raise ValueError("parent_question must be a string")
    author_feeling = record.get("author_feeling")
    if author_feeling is not None and not isinstance(author_feeling, str):
        raise ValueError("author_feeling must be a string")

    return Post(
        id=post_id,
        body=body,
        source=source,
        community=community,
        title=title,
        comments=comments,
        created_at=created_at,
        share_count=share_count,
        parent_question=parent_question,
        author_feeling=author_feeling,
    )


def ingest_ndjson(
    store: CorpusStore,
    stream: BinaryIO,
    *,
    field_map: dict[str, str] | None = None,
    strict: bool = False,
    source: str = "generic",
    origin: str = "stream",
    commit_every: int = 10_000,
) -> tuple[int, int]:
    """Stream newline-delimited JSON records into the store.

    One line at a time is held in memory, so peak usage is independent of the
    stream length. Malformed lines are counted and skipped; with ``strict``
    the first malformed line raises :class:`IngestError` and nothing from the
    stream is committed.

    Returns ``(ingested_count, error_count)``.
    """
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}")
    conn = store._connection()
    ingested = 0
    errors = 0
    conn.execute("BEGIN")
    try:
        for line_number, raw_line in enumerate(stream, start=1):
            line = raw_line.strip()
            if not line:
                continue
            try:
                text = line.decode("utf-8") if isinstance(line, bytes) else line
                post = _post_from_record(json.loads(text), field_map, source)
                conn.execute(*_insert_statement(post))
            except (ValueError, sqlite3.IntegrityError) as exc:
                if strict:
                    raise IngestError(line_number, str(exc)) from exc
                errors += 1
                continue
            ingested += 1
            if not strict and ingested % commit_every == 0:
                conn.commit()
                conn.execute("BEGIN")
        conn.execute(
            "INSERT INTO provenance (descriptor) VALUES (?)",
            (json.dumps({"origin": origin, "source": source, "ingested": ingested, "errors": errors}),),
        )
        conn.commit()
    except IngestError:
        conn.rollback()
        raise
    return ingested, errors


# ---------------------------------------------------------------------------
# Query predicates

class Predicate:
    def matches(self, post: Post) -> bool:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class TruePredicate(Predicate):
    def matches(self, post: Post) -> bool:
        return True


@dataclass(frozen=True)
class CommunityContains(Predicate):
    pattern: str

    def matches(self, post: Post) -> bool:
        return self.pattern.lower() in post.community.lower()


@dataclass(frozen=True)
class BodyLength(Predicate):
    """Inclusive character-count bounds on the post body."""

    lo: int
    hi: int

    def matches(self, post: Post) -> bool:
        return self.lo <= len(post.body) <= self.hi


@dataclass(frozen=True)
class HasCommentContaining(Predicate):
    pattern: str

    def matches(self, post: Post) -> bool:
        needle = self.pattern.lower()
        return any(needle in c.body.lower() for c in post.comments)


@dataclass(frozen=True)
class IdIn(Predicate):
    ids: frozenset[str]

    def matches(self, post: Post) -> bool:
        return post.id in self.ids


@dataclass(frozen=True)
class And(Predicate):
    parts: tuple[Predicate, ...]

    def matches(self, post: Post) -> bool:
        return all(p.matches(post) for p in self.parts)


_ATOM_RES = (
    (re.compile(r"true"), lambda m: TruePredicate()),
    (
        re.compile(r"community contains '([^']*)'"),
        lambda m: CommunityContains(m.group(1)),
    ),
    (
        re.compile(r"body length (\d+)\.\.(\d+)"),
        lambda m: BodyLength(int(m.group(1)), int(m.group(2))),
    ),
    (
        re.compile(r"has comment containing '([^']*)'"),
        lambda m: HasCommentContaining(m.group(1)),
    ),
    (
        re.compile(r"id in \(\s*('[^']*'(?:\s*,\s*'[^']*')*)\s*\)"),
        lambda m: IdIn(frozenset(re.findall(r"'([^']*)'", m.group(1)))),
    ),
)

_AND_RE = re.compile(r"\s+and\s+")


def parse_predicate(text: str) -> Predicate:
    """Parse the query mini-language.

    Atoms: ``true`` | ``community contains '<pat>'`` | ``body length <lo>..<hi>``
    | ``has comment containing '<pat>'`` | ``id in ('a', 'b')``, joined with
    ``and``. Patterns are single-quoted literals without escapes.
    """
    pos = 0
    text = text.strip()
    if not text:
        raise PredicateError("empty predicate")
    parts: list[Predicate] = []
    while True:
        for atom_re, build in _ATOM_RES:
            m = atom_re.match(text, pos)
            if m:
                parts.append(build(m))
                pos = m.end()
                break
        else:
            raise PredicateError(f"cannot parse predicate at: {text[pos:]!r}")
        if pos == len(text):
            break
        sep = _AND_RE.match(text, pos)
        if not sep:
            raise PredicateError(f"expected 'and' at: {text[pos:]!r}")
        pos = sep.end()
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def query_posts(store: CorpusStore, predicate: Predicate | str) -> list[Post]:
    """Posts satisfying the predicate, in deterministic store order."""
    if isinstance(predicate, str):
        predicate = parse_predicate(predicate)
    return [post for post in store if predicate.matches(post)]


# ---------------------------------------------------------------------------
# Dataset splits

@dataclass
class DatasetSplit:
    train: list[tuple[str, str]]
    test: list[tuple[str, str]]


def build_balanced_split(
    labeled: Iterable[tuple[str, str]], test_fraction: float, seed: int
) -> DatasetSplit:
    """Class-balanced train/test split.

    Excess majority-class items are dropped uniformly at random under the
    seed; the per-class test size is ``round(per_class * test_fraction)``.
    """
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1)")
    by_label: dict[str, list[str]] = {label: [] for label in LABELS}
    for post_id, label in labeled:
        if label not in by_label:
            raise ValueError(f"unknown label {label!r}")
        by_label[label].append(post_id)
    for label in LABELS:
        if not by_label[label]:
            raise ValueError(f"no items with label {label!r}")

    per_class = min(len(ids) for ids in by_label.values())
    n_test = round(per_class * test_fraction)
    rng = random.Random(seed)
    train: list[tuple[str, str]] = []
    test: list[tuple[str, str]] = []
    for label in LABELS:
        ids = sorted(by_label[label])
        rng.shuffle(ids)
        kept = ids[:per_class]
        test.extend((pid, label) for pid in kept[:n_test])
        train.extend((pid, label) for pid in kept[n_test:])
    return DatasetSplit(train=train, test=test)


def write_split_csv(split: DatasetSplit, sink) -> None:
    writer = csv.writer(sink)
    writer.writerow(["post_id", "label", "part"])
    for post_id, label in split.train:
        writer.writerow([post_id, label, "train"])
    for post_id, label in split.test:
        writer.writerow([post_id, label, "test"])


def read_split_csv(source) -> DatasetSplit:
    reader = csv.reader(source)
    header = next(reader, None)
    if header != ["post_id", "label", "part"]:
        raise ValueError("split file must start with header post_id,label,part")
    split = DatasetSplit(train=[], test=[])
    for row in reader:
        if len(row) != 3 or row[2] not in ("train", "test"):
            raise ValueError(f"bad split row: {row!r}")
        part = split.train if row[2] == "train" else split.test
        part.append((row[0], row[1]))
    return split


def extract_hashtags(text: str) -> list[str]:
    """Hashtags in order of appearance, lowercased, duplicates kept."""
    return [tag.lower() for tag in _HASHTAG_RE.findall(text)]
