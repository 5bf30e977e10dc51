"""HTTP service exposing the ask pipeline.

Endpoints:
    POST /api/ask   {"question": str, "mode": "indexed"|"baseline"} -> AskResponse
    GET  /api/stats -> book/index summary
    GET  /healthz   -> {"status": "ok"}

The index and book are shared read-only across concurrent requests.
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse

from .corpus import Book
from .errors import NoKeywords, QaError
from .index import InvertedIndex
from .pipeline import (AnswerRecord, Mode, PipelineConfig, answer_bruteforce,
                       answer_indexed)


# user-facing mode names; AnswerRecord's internal enum calls the full scan
# "bruteforce" while the API/CLI surface calls it "baseline"
MODE_LABEL = {Mode.INDEXED: "indexed", Mode.BRUTEFORCE: "baseline"}


@dataclass(frozen=True)
class AskResponse:
    answer: str
    score: float
    sources: list[dict]
    mode: str
    elapsed_ms: int
    chunks_processed: int

    @classmethod
    def from_record(cls, record: AnswerRecord) -> "AskResponse":
        return cls(
            answer=record.answer.text,
            score=record.answer.score,
            sources=[{"page": r.page_num, "paragraph": r.paragraph_num}
                     for r in record.sources],
            mode=MODE_LABEL[record.mode],
            elapsed_ms=max(0, round(record.elapsed_s * 1000)),
            chunks_processed=record.chunks_processed,
        )

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "score": self.score,
            "sources": self.sources,
            "mode": self.mode,
            "elapsed_ms": self.elapsed_ms,
            "chunks_processed": self.chunks_processed,
        }


def create_app(book: Book, index: InvertedIndex, backend,
               config: PipelineConfig | None = None,
               cors_origin: str | None = None) -> FastAPI:
    config = config or PipelineConfig()
    app = FastAPI(title="bookqa", docs_url=None, redoc_url=None)

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/stats")
    def stats():
        return {
            "book_title": book.title,
            "paragraphs": book.paragraph_count(),
            "entries": index.entry_count(),
            "terms": index.term_count(),
            "extractor_id": index.meta.extractor_id,
        }

    @app.post("/api/ask")
    async def ask(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be a JSON object"}, status_code=400)
        question = body.get("question")
        mode = body.get("mode", Mode.INDEXED.value)
        if not isinstance(question, str) or not question.strip():
            return JSONResponse({"error": "question must be a non-empty string"},
                                status_code=400)
        if mode not in ("indexed", "baseline"):
            return JSONResponse({"error": f"unknown mode {mode!r}"}, status_code=400)
        try:
            # pipeline and backend calls block; keep the event loop free
            if mode == "indexed":
                record = await run_in_threadpool(
                    answer_indexed, book, index, backend, question, config)
            else:
                record = await run_in_threadpool(
                    answer_bruteforce, book, backend, question)
        except NoKeywords as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except QaError as exc:
            return JSONResponse({"error": str(exc)}, status_code=502)
        return AskResponse.from_record(record).to_dict()

    return app
