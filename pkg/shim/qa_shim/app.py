"""FastAPI application implementing the answer/embed wire protocol.

Inference runs sequentially behind a lock by default so latency
measurements stay comparable across runs.
"""

from __future__ import annotations

import logging
import math
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .config import ShimConfig, from_env
from .embed_runner import EmbedRunner
from .qa_runner import QaRunner

logger = logging.getLogger(__name__)


def create_app(config: ShimConfig | None = None) -> FastAPI:
    config = config or from_env()
    qa = QaRunner(config.qa_model_id, config.max_seq_tokens)
    embedder = EmbedRunner(config.embed_model_id, config.max_seq_tokens)
    inference_lock = threading.Lock()
    app = FastAPI(title="qa-shim", docs_url=None, redoc_url=None)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "model_id": config.qa_model_id}

    @app.post("/v1/answer")
    async def answer(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be a JSON object"},
                                status_code=400)
        question = body.get("question")
        context = body.get("context")
        if not isinstance(question, str) or not isinstance(context, str):
            return JSONResponse(
                {"error": "question and context must be strings"}, status_code=400)
        if not context.strip():
            return JSONResponse({"error": "context is empty"}, status_code=422)
        try:
            with inference_lock:
                result = qa.answer(question, context)
        except Exception as exc:
            logger.exception("inference failed")
            return JSONResponse({"error": f"inference failed: {exc}"},
                                status_code=500)
        return {
            "answer": result.answer,
            "score": result.score,
            "start": result.start,
            "end": result.end,
            "model_id": config.qa_model_id,
        }

    @app.post("/v1/embed")
    async def embed(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be a JSON object"},
                                status_code=400)
        texts = body.get("texts")
        if (not isinstance(texts, list)
                or not all(isinstance(t, str) for t in texts)):
            return JSONResponse({"error": "texts must be a list of strings"},
                                status_code=400)
        if not texts:
            return {"embeddings": []}
        try:
            with inference_lock:
                vectors = embedder.embed(texts)
        except Exception as exc:
            logger.exception("inference failed")
            return JSONResponse({"error": f"inference failed: {exc}"},
                                status_code=500)
        if any(not all(math.isfinite(x) for x in v) for v in vectors):
            return JSONResponse({"error": "model produced non-finite components"},
                                status_code=500)
        return {"embeddings": vectors}

    return app


def app_factory() -> FastAPI:
    return create_app()


def serve() -> None:
    import os

    import uvicorn
    config = from_env()
    # WORKERS > 1 exists as a knob, but benchmarks should keep it at 1 so
    # timings stay comparable
    workers = int(os.environ.get("WORKERS", "1"))
    if workers > 1:
        uvicorn.run("qa_shim.app:app_factory", factory=True, host="0.0.0.0",
                    port=config.port, workers=workers, log_level="info")
    else:
        uvicorn.run(create_app(config), host="0.0.0.0", port=config.port,
                    log_level="info")


if __name__ == "__main__":
    serve()
