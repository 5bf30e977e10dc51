"""Per-paragraph keyphrase extraction.

Two extractors share one output type:

* RAKE — fully local degree/frequency scoring over stopword-delimited
  candidate phrases. A two-word phrase whose words occur nowhere else in
  the document scores 4.0 (each word: degree 2 / frequency 1).
* Embedding similarity — ranks content n-grams by cosine similarity of
  their embedding to the whole document's embedding, behind the
  EmbeddingProvider contract.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .corpus import (Book, ParagraphRef, StopList, default_stoplist,
                     sentence_spans, tokenize, tokenize_with_offsets)
from .errors import DimensionMismatch, ExtractionFailed, QaError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KeyPhrase:
    """One extracted phrase: lowercase text, extractor score, 1-based rank."""

    text: str
    score: float
    rank: int


@dataclass(frozen=True)
class CandidatePhrase:
    tokens: tuple[str, ...]
    first_offset: int

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class RakeConfig:
    max_phrase_len: int = 3
    top_k: int = 2
    stoplist: StopList = field(default_factory=default_stoplist)

    def __post_init__(self):
        if self.max_phrase_len < 1 or self.top_k < 1:
            raise ValueError("max_phrase_len and top_k must be >= 1")


@dataclass(frozen=True)
class EmbedExtractConfig:
    ngram_min: int = 1
    ngram_max: int = 2
    top_k: int = 2
    stoplist: StopList = field(default_factory=default_stoplist)

    def __post_init__(self):
        if not (1 <= self.ngram_min <= self.ngram_max):
            raise ValueError("need 1 <= ngram_min <= ngram_max")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


def rake_candidates(text: str, stoplist: StopList,
                    max_phrase_len: int = 3) -> list[CandidatePhrase]:
    """Maximal runs of consecutive non-stopword tokens within each sentence.

    Runs longer than max_phrase_len are discarded outright. Duplicates are
    retained, in first-occurrence order.
    """
    candidates: list[CandidatePhrase] = []
    for _, s_start, s_end in sentence_spans(text):
        run: list[tuple[str, int]] = []
        for token, offset in tokenize_with_offsets(text[s_start:s_end]) + [("", -1)]:
            if token and token not in stoplist:
                run.append((token, s_start + offset))
                continue
            if run:
                if len(run) <= max_phrase_len:
                    candidates.append(CandidatePhrase(
                        tuple(t for t, _ in run), run[0][1]))
                run = []
    return candidates


def rake_score(candidates: list[CandidatePhrase]) -> dict[str, float]:
    """Degree/frequency word scores summed per phrase.

    freq(w) counts occurrences of w across all candidates; deg(w) adds the
    full length of the containing candidate at each occurrence (so a word
    co-occurring in a two-word phrase has degree 2 per occurrence). The
    phrase score is the sum of deg(w)/freq(w) over its words; duplicate
    phrase texts share one entry.
    """
    freq: dict[str, int] = {}
    deg: dict[str, int] = {}
    for cand in candidates:
        for token in cand.tokens:
            freq[token] = freq.get(token, 0) + 1
            deg[token] = deg.get(token, 0) + len(cand.tokens)
    scores: dict[str, float] = {}
    for cand in candidates:
        scores[cand.text] = sum(deg[t] / freq[t] for t in cand.tokens)
    return scores


def rake_extract(text: str, config: RakeConfig | None = None) -> list[KeyPhrase]:
    """Top-k RAKE phrases, score descending, ties by earliest occurrence."""
    config = config or RakeConfig()
    candidates = rake_candidates(text, config.stoplist, config.max_phrase_len)
    if not candidates:
        return []
    scores = rake_score(candidates)
    first_offset: dict[str, int] = {}
    order: list[str] = []
    for cand in candidates:
        if cand.text not in first_offset:
            first_offset[cand.text] = cand.first_offset
            order.append(cand.text)
    ranked = sorted(order, key=lambda p: (-scores[p], first_offset[p]))
    return [KeyPhrase(p, scores[p], rank)
            for rank, p in enumerate(ranked[: config.top_k], start=1)]


def _content_ngrams(text: str, stoplist: StopList, ngram_min: int,
                    ngram_max: int) -> list[str]:
    """Distinct n-grams of consecutive non-stopword tokens, first-occurrence order."""
    tokens = tokenize(text)
    seen: set[str] = set()
    out: list[str] = []
    for n in range(ngram_min, ngram_max + 1):
        for i in range(len(tokens) - n + 1):
            gram = tokens[i: i + n]
            if any(t in stoplist for t in gram):
                continue
            phrase = " ".join(gram)
            if phrase not in seen:
                seen.add(phrase)
                out.append(phrase)
    return out


def cosine(u: list[float], v: list[float]) -> float:
    """Cosine similarity; zero vectors compare as 0.0."""
    dot = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def embed_extract(text: str, provider, config: EmbedExtractConfig | None = None) -> list[KeyPhrase]:
    """Rank content n-grams by embedding cosine to the whole document.

    Issues a single embedding call for [document] + candidates.
    """
    config = config or EmbedExtractConfig()
    candidates = _content_ngrams(text, config.stoplist,
                                 config.ngram_min, config.ngram_max)
    if not candidates:
        return []
    vectors = provider.embed([text] + candidates)
    if len(vectors) != len(candidates) + 1:
        raise DimensionMismatch(
            f"provider returned {len(vectors)} vectors for {len(candidates) + 1} texts")
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionMismatch(f"inconsistent vector lengths: {sorted(dims)}")
    doc_vec = vectors[0]
    scored = [(cosine(doc_vec, vec), i, phrase)
              for i, (phrase, vec) in enumerate(zip(candidates, vectors[1:]))]
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [KeyPhrase(phrase, score, rank)
            for rank, (score, _, phrase) in enumerate(scored[: config.top_k], start=1)]


class RakeExtractor:
    """RAKE bound to a config; the default Phase-1 extractor."""

    extractor_id = "rake"

    def __init__(self, config: RakeConfig | None = None):
        self.config = config or RakeConfig()

    @property
    def top_k(self) -> int:
        return self.config.top_k

    @property
    def stoplist(self) -> StopList:
        return self.config.stoplist

    def extract(self, text: str) -> list[KeyPhrase]:
        return rake_extract(text, self.config)


class EmbedExtractor:
    """Embedding-similarity extractor bound to a provider and config."""

    def __init__(self, provider, config: EmbedExtractConfig | None = None):
        self.provider = provider
        self.config = config or EmbedExtractConfig()
        self.extractor_id = f"embed:{getattr(provider, 'provider_id', 'unknown')}"

    @property
    def top_k(self) -> int:
        return self.config.top_k

    @property
    def stoplist(self) -> StopList:
        return self.config.stoplist

    def extract(self, text: str) -> list[KeyPhrase]:
        return embed_extract(text, self.provider, self.config)


def extract_book_keywords(book: Book, extractor) -> dict[ParagraphRef, list[KeyPhrase]]:
    """Run the extractor independently over every paragraph.

    Paragraphs yielding no keyphrases map to an empty list. Extractor
    failures are re-raised with the offending paragraph attached.
    """
    result: dict[ParagraphRef, list[KeyPhrase]] = {}
    for ref in book.refs():
        text = book.resolve(ref).text
        try:
            phrases = extractor.extract(text)
        except QaError as exc:
            raise ExtractionFailed(ref, exc) from exc
        if not phrases:
            logger.debug("no keyphrases for page %d paragraph %d",
                         ref.page_num, ref.paragraph_num)
        result[ref] = phrases
    return result
