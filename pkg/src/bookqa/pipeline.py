"""Question answering over an indexed book.

The indexed path keywords the question, matches those stems against the
index, and dispatches only the top-ranked matched paragraphs to the answer
backend — one paragraph per backend call. The brute-force baseline
dispatches every paragraph of the book.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .backends import EMPTY_ANSWER, SpanAnswer
from .corpus import Book, ParagraphRef, StopList, default_stoplist, tokenize
from .errors import NoKeywords, QaError
from .index import InvertedIndex, lookup_stem
from .porter import stem


@dataclass(frozen=True)
class QueryKeywords:
    """Unique stemmed content tokens of a question, in first-occurrence order."""

    stems: tuple[str, ...]


@dataclass(frozen=True)
class MatchResult:
    ref: ParagraphRef
    matched_stems: frozenset[str]

    @property
    def match_count(self) -> int:
        return len(self.matched_stems)


class NoMatchPolicy(str, Enum):
    EMPTY_ANSWER = "empty_answer"
    FALLBACK_BRUTEFORCE = "fallback_bruteforce"


class Mode(str, Enum):
    INDEXED = "indexed"
    BRUTEFORCE = "bruteforce"


@dataclass(frozen=True)
class PipelineConfig:
    context_top_k: int = 5
    no_match_policy: NoMatchPolicy = NoMatchPolicy.EMPTY_ANSWER

    def __post_init__(self):
        if self.context_top_k < 1:
            raise ValueError("context_top_k must be >= 1")


@dataclass(frozen=True)
class AnswerRecord:
    answer: SpanAnswer
    sources: tuple[ParagraphRef, ...]
    mode: Mode
    elapsed_s: float
    chunks_processed: int


def question_keywords(question: str, stoplist: StopList | None = None) -> QueryKeywords:
    """Tokenize, drop stopwords, stem, dedupe preserving first occurrence."""
    stoplist = stoplist or default_stoplist()
    stems: list[str] = []
    for token in tokenize(question):
        if token in stoplist:
            continue
        st = stem(token)
        if st not in stems:
            stems.append(st)
    if not stems:
        raise NoKeywords(f"no content tokens in question: {question!r}")
    return QueryKeywords(tuple(stems))


def match_paragraphs(index: InvertedIndex, keywords: QueryKeywords) -> list[MatchResult]:
    """Paragraphs reached by any query stem, ranked by how many distinct
    stems matched (ties by paragraph order)."""
    matched: dict[ParagraphRef, set[str]] = {}
    for query_stem in keywords.stems:
        for _phrase, ref in lookup_stem(index, query_stem):
            matched.setdefault(ref, set()).add(query_stem)
    results = [MatchResult(ref, frozenset(stems)) for ref, stems in matched.items()]
    results.sort(key=lambda r: (-r.match_count, r.ref.page_num, r.ref.paragraph_num))
    return results


def _chunk_for(backend, text: str) -> str:
    limit = getattr(backend, "max_context_chars", None)
    if limit is not None and len(text) > limit:
        return text[:limit]
    return text


def _best_answer(backend, question: str,
                 chunks: list[tuple[ParagraphRef, str]]) -> tuple[SpanAnswer, ParagraphRef]:
    """Highest-scoring span over the chunks; ties go to the earliest chunk.

    Chunks are dispatched in the given order, which fixes tie resolution
    regardless of any backend-side concurrency. Backend failures are
    re-raised with the offending chunk's ref attached.
    """
    best: tuple[SpanAnswer, ParagraphRef] | None = None
    for ref, text in chunks:
        try:
            span = backend.answer(question, text)
        except QaError as exc:
            exc.ref = ref
            exc.args = (f"page {ref.page_num} paragraph {ref.paragraph_num}: {exc}",)
            raise
        if best is None or span.score > best[0].score:
            best = (span, ref)
    return best


def answer_indexed(book: Book, index: InvertedIndex, backend, question: str,
                   config: PipelineConfig | None = None,
                   stoplist: StopList | None = None) -> AnswerRecord:
    """Answer using only index-matched paragraphs.

    The top context_top_k matches each become one backend call; on zero
    matches the no-match policy applies. Elapsed time covers question
    keywording through answer selection on a monotonic clock.
    """
    config = config or PipelineConfig()
    t0 = time.monotonic()
    keywords = question_keywords(question, stoplist)
    matches = match_paragraphs(index, keywords)
    if not matches:
        if config.no_match_policy is NoMatchPolicy.FALLBACK_BRUTEFORCE:
            return answer_bruteforce(book, backend, question)
        return AnswerRecord(answer=EMPTY_ANSWER, sources=(), mode=Mode.INDEXED,
                            elapsed_s=time.monotonic() - t0, chunks_processed=0)
    chunks = [(m.ref, _chunk_for(backend, book.resolve(m.ref).text))
              for m in matches[: config.context_top_k]]
    span, ref = _best_answer(backend, question, chunks)
    return AnswerRecord(answer=span, sources=(ref,), mode=Mode.INDEXED,
                        elapsed_s=time.monotonic() - t0,
                        chunks_processed=len(chunks))


def answer_bruteforce(book: Book, backend, question: str) -> AnswerRecord:
    """Baseline: every paragraph of the book becomes one backend call."""
    t0 = time.monotonic()
    chunks = [(ParagraphRef(page.num, para.num), _chunk_for(backend, para.text))
              for page in book.pages for para in page.paragraphs]
    span, ref = _best_answer(backend, question, chunks)
    return AnswerRecord(answer=span, sources=(ref,), mode=Mode.BRUTEFORCE,
                        elapsed_s=time.monotonic() - t0,
                        chunks_processed=len(chunks))
