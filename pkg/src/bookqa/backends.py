"""Answer-extraction and embedding backends.

The engine never runs model inference in-process. Remote models sit behind
a fixed JSON wire protocol (POST /v1/answer, POST /v1/embed, GET /healthz)
and any extractive QA model can serve it. A deterministic lexical mock
makes the whole pipeline reproducible on a desk with no model at all.
"""

from __future__ import annotations

import logging
import threading
import time
import zlib
from dataclasses import dataclass

import requests

from .corpus import StopList, default_stoplist, sentence_spans, tokenize
from .errors import (BackendTimeout, DimensionMismatch, EmptyContext,
                     HttpError, ProviderUnavailable, SchemaError,
                     SpanOutOfBounds)
from .porter import stem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanAnswer:
    """An extracted answer span with character offsets into its context."""

    text: str
    score: float
    start: int
    end: int
    model_id: str

    def validate(self, context: str) -> "SpanAnswer":
        if not (0 <= self.start <= self.end <= len(context)):
            raise SpanOutOfBounds(
                f"span [{self.start}, {self.end}) outside context of length {len(context)}")
        if self.text and context[self.start:self.end] != self.text:
            raise SpanOutOfBounds(
                f"context[{self.start}:{self.end}] does not equal the answer text")
        if not self.text and self.score != 0.0:
            raise SpanOutOfBounds("empty answer must carry score 0")
        return self


EMPTY_ANSWER = SpanAnswer(text="", score=0.0, start=0, end=0, model_id="")


@dataclass(frozen=True)
class BackendConfig:
    endpoint: str
    timeout_s: float = 120.0
    max_in_flight: int = 4
    max_context_chars: int = 4000
    retries: int = 0

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")


def lexical_mock_answer(question: str, context: str,
                        stoplist: StopList | None = None) -> SpanAnswer:
    """Deterministic stand-in for a QA model.

    Scores each context sentence by the fraction of the question's stemmed
    content tokens it contains and returns the best sentence (ties to the
    earliest) as the answer span.
    """
    if not context:
        raise EmptyContext("context is empty")
    stoplist = stoplist or default_stoplist()
    query = []
    for token in tokenize(question):
        if token not in stoplist:
            st = stem(token)
            if st not in query:
                query.append(st)
    spans = sentence_spans(context)
    if not spans:
        spans = [(context, 0, len(context))]
    best = None
    for text, start, end in spans:
        if query:
            stems = {stem(t) for t in tokenize(text)}
            score = len(stems.intersection(query)) / len(query)
        else:
            score = 0.0
        if best is None or score > best[0]:
            best = (score, text, start, end)
    score, text, start, end = best
    return SpanAnswer(text=text, score=score, start=start, end=end,
                      model_id="lexical-mock").validate(context)


class LexicalMockBackend:
    """AnswerExtractor over lexical_mock_answer.

    delay_s injects a constant per-call sleep, used to give the mock a
    model-like unit cost in benchmarks.
    """

    model_id = "lexical-mock"
    max_context_chars: int | None = None

    def __init__(self, stoplist: StopList | None = None, delay_s: float = 0.0):
        self.stoplist = stoplist or default_stoplist()
        self.delay_s = delay_s

    def answer(self, question: str, context: str) -> SpanAnswer:
        if self.delay_s > 0:
            time.sleep(self.delay_s)
        return lexical_mock_answer(question, context, self.stoplist)


def _parse_answer_payload(payload, context: str) -> SpanAnswer:
    if not isinstance(payload, dict):
        raise SchemaError("answer response must be a JSON object")
    for fld in ("answer", "score", "start", "end"):
        if fld not in payload:
            raise SchemaError(f"answer response missing field {fld!r}")
    text, score = payload["answer"], payload["score"]
    start, end = payload["start"], payload["end"]
    if (not isinstance(text, str) or not isinstance(score, (int, float))
            or isinstance(score, bool)
            or not isinstance(start, int) or not isinstance(end, int)
            or isinstance(start, bool) or isinstance(end, bool)):
        raise SchemaError("answer response has ill-typed fields")
    model_id = payload.get("model_id", "")
    if not isinstance(model_id, str):
        raise SchemaError("model_id must be a string")
    score = float(score)
    if score < 0.0 or score > 1.0:
        logger.warning("backend score %.4f outside [0, 1]; clamping", score)
        score = min(1.0, max(0.0, score))
    return SpanAnswer(text=text, score=score, start=start, end=end,
                      model_id=model_id).validate(context)


class HttpAnswerBackend:
    """Client for a remote answer service speaking the /v1/answer protocol."""

    def __init__(self, config: BackendConfig, session: requests.Session | None = None):
        self.config = config
        self.max_context_chars = config.max_context_chars
        self._session = session or requests.Session()
        self._slots = threading.BoundedSemaphore(config.max_in_flight)

    @property
    def model_id(self) -> str:
        return ""

    def answer(self, question: str, context: str) -> SpanAnswer:
        if not context:
            raise EmptyContext("context is empty")
        if len(context) > self.config.max_context_chars:
            raise ValueError("context exceeds max_context_chars; caller must chunk")
        url = self.config.endpoint.rstrip("/") + "/v1/answer"
        body = {"question": question, "context": context}
        attempts = self.config.retries + 1
        last_exc: Exception | None = None
        for _ in range(attempts):
            with self._slots:
                try:
                    resp = self._session.post(url, json=body,
                                              timeout=self.config.timeout_s)
                except requests.Timeout as exc:
                    last_exc = BackendTimeout(str(exc))
                    continue
                except requests.RequestException as exc:
                    last_exc = HttpError(0, f"request failed: {exc}")
                    continue
            if resp.status_code // 100 != 2:
                raise HttpError(resp.status_code, resp.text[:200])
            try:
                payload = resp.json()
            except ValueError as exc:
                raise SchemaError(f"answer response is not JSON: {exc}") from exc
            return _parse_answer_payload(payload, context)
        raise last_exc


class BagOfStemsEmbedder:
    """Deterministic 256-dimensional bag-of-stems embedding provider.

    Each non-stopword stem adds 1 to component crc32(stem) mod 256. No
    normalization; cosine handles scale.
    """

    provider_id = "test-bag256"
    DIM = 256

    def __init__(self, stoplist: StopList | None = None):
        self.stoplist = stoplist or default_stoplist()

    @staticmethod
    def component(stem_text: str) -> int:
        return zlib.crc32(stem_text.encode("utf-8")) % BagOfStemsEmbedder.DIM

    def embed(self, texts: list[str]) -> list[list[float]]:
        vectors = []
        for text in texts:
            vec = [0.0] * self.DIM
            for token in tokenize(text):
                if token not in self.stoplist:
                    vec[self.component(stem(token))] += 1.0
            vectors.append(vec)
        return vectors


class HttpEmbedder:
    """Client for a remote embedding service speaking the /v1/embed protocol."""

    def __init__(self, config: BackendConfig, provider_id: str = "http",
                 session: requests.Session | None = None):
        self.config = config
        self.provider_id = provider_id
        self._session = session or requests.Session()
        self._slots = threading.BoundedSemaphore(config.max_in_flight)

    def embed(self, texts: list[str]) -> list[list[float]]:
        url = self.config.endpoint.rstrip("/") + "/v1/embed"
        with self._slots:
            try:
                resp = self._session.post(url, json={"texts": list(texts)},
                                          timeout=self.config.timeout_s)
            except requests.Timeout as exc:
                raise BackendTimeout(str(exc)) from exc
            except requests.RequestException as exc:
                raise ProviderUnavailable(str(exc)) from exc
        if resp.status_code // 100 != 2:
            raise HttpError(resp.status_code, resp.text[:200])
        try:
            payload = resp.json()
        except ValueError as exc:
            raise SchemaError(f"embed response is not JSON: {exc}") from exc
        if not isinstance(payload, dict) or "embeddings" not in payload:
            raise SchemaError("embed response missing 'embeddings'")
        vectors = payload["embeddings"]
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise SchemaError("embeddings count does not match input texts")
        dims = {len(v) for v in vectors}
        if len(dims) > 1:
            raise DimensionMismatch(f"ragged embedding matrix: lengths {sorted(dims)}")
        return [[float(x) for x in v] for v in vectors]


def check_health(endpoint: str, timeout_s: float = 5.0) -> dict:
    """GET /healthz on a backend service; returns its JSON body."""
    url = endpoint.rstrip("/") + "/healthz"
    try:
        resp = requests.get(url, timeout=timeout_s)
    except requests.RequestException as exc:
        raise ProviderUnavailable(str(exc)) from exc
    if resp.status_code != 200:
        raise HttpError(resp.status_code, resp.text[:200])
    return resp.json()
