"""HTTP front door: detection, text extraction, result lookup, feedback,
stats, health. Consumed by the dashboard and the email-plugin flow.

Handlers are stateless; everything lives in the shared stores, so any
concurrent handler gives the same answer for the same store state. The
detect path never crawls: slow work always goes through the queue.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Header, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .blacklist import BlacklistStore
from .cache import VerdictCache
from .extract import extract_urls
from .ftw import FastTaskWorker
from .model import (
    UnparseableUrl,
    Verdict,
    VerdictSource,
    VerdictStatus,
    normalize,
    utcnow,
)
from .taskqueue import TaskQueue

MAX_BATCH = 1000
MAX_TEXT_BYTES = 1024 * 1024


class FeedbackState(str, Enum):
    PENDING_REVIEW = "pending_review"
    APPROVED = "approved"
    REJECTED = "rejected"


@dataclass
class FeedbackRecord:
    id: str
    url: str
    proposed_status: VerdictStatus
    proposed_brand: str | None
    comment: str
    state: FeedbackState
    submitted_at: datetime
    reviewed_at: datetime | None = None


class FeedbackStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._records: dict[str, FeedbackRecord] = {}

    def submit(
        self,
        url: str,
        proposed_status: VerdictStatus,
        proposed_brand: str | None,
        comment: str,
    ) -> FeedbackRecord:
        record = FeedbackRecord(
            id=uuid.uuid4().hex,
            url=url,
            proposed_status=proposed_status,
            proposed_brand=proposed_brand,
            comment=comment,
            state=FeedbackState.PENDING_REVIEW,
            submitted_at=utcnow(),
        )
        with self._lock:
            self._records[record.id] = record
        return record

    def get(self, record_id: str) -> FeedbackRecord | None:
        return self._records.get(record_id)

    def review(self, record_id: str, approve: bool) -> FeedbackRecord:
        with self._lock:
            record = self._records.get(record_id)
            if record is None:
                raise KeyError(record_id)
            if record.state != FeedbackState.PENDING_REVIEW:
                raise ValueError("already reviewed")
            record.state = FeedbackState.APPROVED if approve else FeedbackState.REJECTED
            record.reviewed_at = utcnow()
            return record

    def all(self) -> list[FeedbackRecord]:
        return list(self._records.values())


@dataclass
class ApiState:
    blacklist: BlacklistStore
    cache: VerdictCache
    queue: TaskQueue
    ftw: FastTaskWorker
    feedback: FeedbackStore = field(default_factory=FeedbackStore)
    ftw_worker_count: int = 8
    stw_worker_count: int = 4
    review_token: str = ""


class DetectRequest(BaseModel):
    urls: list[str]


class DetectTextRequest(BaseModel):
    text: str


class FeedbackRequest(BaseModel):
    url: str
    proposed_status: str
    proposed_brand: str | None = None
    comment: str = ""


class ReviewRequest(BaseModel):
    decision: str  # approve|reject


def verdict_json(url: str, verdict: Verdict) -> dict[str, Any]:
    return {
        "url": url,
        "status": verdict.status.value,
        "source": verdict.source.value,
        "target_brand": verdict.target_brand,
        "decided_at": verdict.decided_at.isoformat(),
        "detail": verdict.detail,
    }


def feedback_json(record: FeedbackRecord) -> dict[str, Any]:
    return {
        "id": record.id,
        "url": record.url,
        "proposed_status": record.proposed_status.value,
        "proposed_brand": record.proposed_brand,
        "comment": record.comment,
        "state": record.state.value,
        "submitted_at": record.submitted_at.isoformat(),
        "reviewed_at": record.reviewed_at.isoformat() if record.reviewed_at else None,
    }


def create_app(state: ApiState) -> FastAPI:
    app = FastAPI(title="phishtriage", docs_url=None, redoc_url=None)
    app.state.components = state

    @app.exception_handler(RequestValidationError)
    def malformed_body(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse({"detail": "malformed request"}, status_code=400)

    @app.post("/api/v1/detect")
    def detect(req: DetectRequest) -> JSONResponse:
        if not req.urls or len(req.urls) > MAX_BATCH:
            raise HTTPException(400, f"urls must contain 1..{MAX_BATCH} entries")
        verdicts = state.ftw.process_batch(req.urls)
        return JSONResponse(
            [verdict_json(u, v) for u, v in zip(req.urls, verdicts)]
        )

    @app.post("/api/v1/detect-text")
    def detect_text(req: DetectTextRequest) -> JSONResponse:
        if len(req.text.encode("utf-8")) > MAX_TEXT_BYTES:
            raise HTTPException(400, "text exceeds 1 MiB")
        extracted = extract_urls(req.text)[:MAX_BATCH]
        verdicts = state.ftw.process_batch(extracted) if extracted else []
        return JSONResponse(
            {
                "extracted_urls": extracted,
                "results": [
                    verdict_json(u, v) for u, v in zip(extracted, verdicts)
                ],
            }
        )

    @app.get("/api/v1/result")
    def result(url: str = Query(...)) -> JSONResponse:
        try:
            record = normalize(url)
        except UnparseableUrl:
            raise HTTPException(400, "unparseable url")
        cached = state.cache.get(record)
        if cached is not None and cached.source == VerdictSource.USER_FEEDBACK:
            return JSONResponse(verdict_json(url, cached))
        if state.blacklist.contains(record):
            verdict = Verdict(
                status=VerdictStatus.PHISHING,
                source=VerdictSource.LOCAL_BLACKLIST,
                decided_at=utcnow(),
            )
            return JSONResponse(verdict_json(url, verdict))
        if cached is not None:
            return JSONResponse(verdict_json(url, cached))
        if state.queue.is_tracked(record):
            return JSONResponse({"url": url, "status": "pending"})
        return JSONResponse({"url": url, "status": "unknown"})

    @app.post("/api/v1/feedback")
    def submit_feedback(req: FeedbackRequest) -> JSONResponse:
        try:
            record = normalize(req.url)
        except UnparseableUrl:
            raise HTTPException(400, "unparseable url")
        try:
            proposed = VerdictStatus(req.proposed_status)
        except ValueError:
            raise HTTPException(400, "proposed_status must be benign or phishing")
        if proposed not in (VerdictStatus.BENIGN, VerdictStatus.PHISHING):
            raise HTTPException(400, "proposed_status must be benign or phishing")
        fb = state.feedback.submit(
            record.normalized, proposed, req.proposed_brand, req.comment
        )
        return JSONResponse(feedback_json(fb))

    @app.post("/api/v1/feedback/{record_id}/review")
    def review_feedback(
        record_id: str,
        req: ReviewRequest,
        x_review_token: str | None = Header(default=None),
    ) -> JSONResponse:
        if state.review_token and x_review_token != state.review_token:
            raise HTTPException(403, "bad review token")
        if req.decision not in ("approve", "reject"):
            raise HTTPException(400, "decision must be approve or reject")
        try:
            fb = state.feedback.review(record_id, approve=req.decision == "approve")
        except KeyError:
            raise HTTPException(404, "unknown feedback id")
        except ValueError:
            raise HTTPException(409, "already reviewed")
        if fb.state == FeedbackState.APPROVED:
            verdict = Verdict(
                status=fb.proposed_status,
                source=VerdictSource.USER_FEEDBACK,
                decided_at=utcnow(),
                target_brand=fb.proposed_brand,
                detail=f"feedback {fb.id}",
            )
            state.cache.put(normalize(fb.url), verdict)
        return JSONResponse(feedback_json(fb))

    @app.get("/api/v1/feedback")
    def list_feedback(
        x_review_token: str | None = Header(default=None),
    ) -> JSONResponse:
        if state.review_token and x_review_token != state.review_token:
            raise HTTPException(403, "bad review token")
        return JSONResponse([feedback_json(r) for r in state.feedback.all()])

    @app.get("/api/v1/stats")
    def stats(window_days: int = Query(default=30)) -> JSONResponse:
        if window_days < 1:
            raise HTTPException(400, "window_days must be >= 1")
        report = state.cache.aggregate_stats(window_days)
        return JSONResponse(
            {
                "unique_phishing_count": report.unique_phishing_count,
                "per_brand_counts": [
                    {"brand": b, "count": c} for b, c in report.per_brand_counts
                ],
                "per_day_phishing_counts": report.per_day_phishing_counts,
                "source_distribution": report.source_distribution,
            }
        )

    @app.get("/api/v1/health")
    def health() -> JSONResponse:
        return JSONResponse(
            {
                "queue_depth": state.queue.depth,
                "blacklist_version": state.blacklist.version,
                "cache_size": len(state.cache),
                "workers": {
                    "ftw": state.ftw_worker_count,
                    "stw": state.stw_worker_count,
                },
            }
        )

    return app


def mount_static(app: FastAPI, static_dir: str | Path) -> None:
    """Serve the built dashboard under / (API routes take precedence)."""
    static_dir = Path(static_dir)
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="dashboard")
