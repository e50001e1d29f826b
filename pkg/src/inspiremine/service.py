"""HTTP annotation service.

Small JSON API over the annotation workflow: annotators authenticate
with static bearer tokens, pull their next task, and submit judgments.
The assignment ledger and the append-only store sit behind the
transactional contract of record_annotation, so no post ever collects
more than the per-post annotation cap.
"""

from __future__ import annotations

import json
import os
from contextlib import asynccontextmanager
from dataclasses import dataclass

from fastapi import Depends, FastAPI, Header, HTTPException, Response
from pydantic import BaseModel, Field

from . import __version__
from .annotate import (
    ANNOTATIONS_PER_POST,
    AnnotationRecord,
    AnnotationStore,
    AssignmentLedger,
    DuplicateAnnotationError,
    InvalidAnnotationError,
    UnknownPostError,
    record_annotation,
)
from .corpus import CorpusStore
from .resources import _read_text

__all__ = ["ServiceConfig", "create_app", "serve", "export_annotations"]


@dataclass
class ServiceConfig:
    corpus_path: str
    store_path: str
    tokens: dict[str, str]  # annotator_id -> bearer token
    guidelines_path: str | None = None
    host: str = "127.0.0.1"
    port: int = 8765
    post_ids: list[str] | None = None
    annotations_per_post: int = ANNOTATIONS_PER_POST

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("at least one annotator token is required")
        values = list(self.tokens.values())
        if len(set(values)) != len(values):
            raise ValueError("annotator tokens must be unique")
        if any(not t for t in values):
            raise ValueError("annotator tokens must be non-empty")
        if not os.path.exists(self.corpus_path):
            raise FileNotFoundError(self.corpus_path)
        if self.guidelines_path is not None and not os.path.exists(self.guidelines_path):
            raise FileNotFoundError(self.guidelines_path)


class TaskOut(BaseModel):
    post_id: str
    title: str
    body: str


class AnnotationIn(BaseModel):
    post_id: str
    annotator_id: str | None = None
    inspiring: bool
    influences: list[str] = Field(default_factory=list)
    emotions: list[str] = Field(default_factory=list)
    confidence: str = "high"
    submitted_at: int = 0


class AckOut(BaseModel):
    post_id: str
    annotator_id: str
    total_records: int


class ProgressOut(BaseModel):
    total: int
    fully_annotated: int
    per_annotator: dict[str, int]


def export_annotations(store: AnnotationStore):
    """NDJSON lines for every stored record, in insertion order."""
    for record in store.records():
        yield json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n"


def create_app(config: ServiceConfig) -> FastAPI:
    corpus = CorpusStore(config.corpus_path)
    store = AnnotationStore(config.store_path)
    post_ids = config.post_ids if config.post_ids is not None else corpus.ids()
    ledger = AssignmentLedger(post_ids, cap=config.annotations_per_post)
    post_id_set = set(post_ids)
    for record in store.records():
        if record.post_id in post_id_set:
            ledger.complete(record.post_id, record.annotator_id)
    if config.guidelines_path is not None:
        with open(config.guidelines_path, encoding="utf-8") as handle:
            guidelines_text = handle.read()
    else:
        guidelines_text = _read_text("guidelines.md")
    token_to_annotator = {token: a for a, token in config.tokens.items()}

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        corpus.close()

    app = FastAPI(title="annotation service", version=__version__, lifespan=lifespan)

    def authenticated(authorization: str | None = Header(default=None)) -> str:
        if authorization is None or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="bearer token required")
        annotator = token_to_annotator.get(authorization[len("Bearer "):])
        if annotator is None:
            raise HTTPException(status_code=401, detail="unknown token")
        return annotator

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/guidelines")
    def guidelines():
        return {"guidelines": guidelines_text}

    @app.get("/tasks/next", response_model=TaskOut, responses={204: {"model": None}})
    def next_task(annotator: str = Depends(authenticated)):
        post_id = ledger.next_task(annotator)
        if post_id is None:
            return Response(status_code=204)
        post = corpus[post_id]
        return TaskOut(post_id=post.id, title=post.title, body=post.body)

    @app.post("/annotations", response_model=AckOut, status_code=201)
    def submit(payload: AnnotationIn, annotator: str = Depends(authenticated)):
        if payload.annotator_id is not None and payload.annotator_id != annotator:
            raise HTTPException(
                status_code=400, detail="annotator_id does not match the token"
            )
        try:
            record = AnnotationRecord(
                post_id=payload.post_id,
                annotator_id=annotator,
                inspiring=payload.inspiring,
                influences=tuple(payload.influences),
                emotions=tuple(payload.emotions),
                confidence=payload.confidence,
                submitted_at=payload.submitted_at,
            )
            ack = record_annotation(
                record, store, known_posts=post_id_set, ledger=ledger
            )
        except DuplicateAnnotationError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except UnknownPostError as exc:
            raise HTTPException(status_code=400, detail=f"unknown post {exc.args[0]!r}")
        except InvalidAnnotationError as exc:
            status = 409 if "fully annotated" in str(exc) else 400
            raise HTTPException(status_code=status, detail=str(exc))
        return AckOut(
            post_id=ack.post_id,
            annotator_id=ack.annotator_id,
            total_records=ack.total_records,
        )

    @app.get("/progress", response_model=ProgressOut)
    def progress():
        records = store.records()
        per_annotator: dict[str, int] = {}
        per_post: dict[str, int] = {}
        for record in records:
            per_annotator[record.annotator_id] = per_annotator.get(record.annotator_id, 0) + 1
            per_post[record.post_id] = per_post.get(record.post_id, 0) + 1
        fully = sum(
            1 for c in per_post.values() if c >= config.annotations_per_post
        )
        return ProgressOut(
            total=len(records), fully_annotated=fully, per_annotator=per_annotator
        )

    app.state.store = store
    app.state.ledger = ledger
    app.state.corpus = corpus
    return app


def serve(config: ServiceConfig):
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
