"""Evaluation metrics and the benchmark harness.

Covers sentence-level BLEU with brevity penalty, the latency-improvement
percentage, Fleiss' kappa for rater agreement, and a harness that times
the indexed pipeline against the brute-force baseline question by question
and emits CSV/JSON reports.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Book, StopList, tokenize
from .errors import (DegenerateAgreement, EmptyReference, EmptySuite,
                     NonPositiveBaseline, QaError, SchemaError)
from .index import InvertedIndex
from .pipeline import PipelineConfig, answer_bruteforce, answer_indexed

CSV_HEADER = ["id", "question", "t_indexed_s", "t_baseline_s", "improvement_pct",
              "bleu_indexed", "bleu_baseline", "chunks_indexed", "chunks_baseline"]


@dataclass(frozen=True)
class BleuBreakdown:
    precisions: tuple[float, ...]
    brevity_penalty: float
    effective_n: int
    score: float


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i: i + n]) for i in range(len(tokens) - n + 1))


def bleu(candidate: str, reference: str, max_n: int = 4,
         smoothing_epsilon: float | None = None) -> BleuBreakdown:
    """Sentence-level BLEU of a candidate against one reference.

    Clipped modified n-gram precision up to N = min(max_n, candidate
    length), uniform 1/N weights, brevity penalty exp(1 - r/c) when the
    candidate is not longer than the reference. A zero precision bucket
    zeroes the score unless smoothing_epsilon is given.
    """
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not ref:
        raise EmptyReference("reference has no tokens")
    if not cand:
        return BleuBreakdown(precisions=(), brevity_penalty=0.0,
                             effective_n=0, score=0.0)
    effective_n = min(max_n, len(cand))
    precisions = []
    for n in range(1, effective_n + 1):
        cand_counts = _ngram_counts(cand, n)
        ref_counts = _ngram_counts(ref, n)
        clipped = sum(min(count, ref_counts[gram])
                      for gram, count in cand_counts.items())
        precisions.append(clipped / sum(cand_counts.values()))
    c, r = len(cand), len(ref)
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    if any(p == 0.0 for p in precisions):
        if smoothing_epsilon is None:
            return BleuBreakdown(tuple(precisions), bp, effective_n, 0.0)
        precisions = [max(p, smoothing_epsilon) for p in precisions]
    log_mean = sum(math.log(p) for p in precisions) / effective_n
    return BleuBreakdown(tuple(precisions), bp, effective_n,
                         bp * math.exp(log_mean))


def improvement_pct(t_baseline_s: float, t_indexed_s: float) -> float:
    """Latency improvement 100 * (baseline - indexed) / baseline.

    Rounded to two decimals, ties to even.
    """
    if t_baseline_s <= 0:
        raise NonPositiveBaseline(f"baseline time must be positive, got {t_baseline_s}")
    if t_indexed_s < 0:
        raise ValueError(f"indexed time must be non-negative, got {t_indexed_s}")
    return round(100.0 * (t_baseline_s - t_indexed_s) / t_baseline_s, 2)


@dataclass(frozen=True)
class RatingMatrix:
    """items x categories counts; each row sums to the rater count."""

    counts: tuple[tuple[int, ...], ...]
    raters_per_item: int

    def __post_init__(self):
        if self.raters_per_item < 2:
            raise SchemaError("need at least 2 raters")
        if not self.counts or len(self.counts[0]) < 2:
            raise SchemaError("need at least 1 item and 2 categories")
        width = len(self.counts[0])
        for row in self.counts:
            if len(row) != width:
                raise SchemaError("ragged rating matrix")
            if any(not isinstance(x, int) or x < 0 for x in row):
                raise SchemaError("counts must be non-negative integers")
            if sum(row) != self.raters_per_item:
                raise SchemaError(f"row {row} does not sum to {self.raters_per_item}")


def fleiss_kappa(matrix: RatingMatrix) -> float:
    """Chance-corrected agreement for a fixed number of raters.

    kappa = (P_mean - P_e) / (1 - P_e) with per-item agreement
    P_i = (sum_j n_ij^2 - n) / (n (n - 1)) and P_e from the squared
    category marginals.
    """
    n = matrix.raters_per_item
    items = len(matrix.counts)
    categories = len(matrix.counts[0])
    p_bar = sum((sum(x * x for x in row) - n) / (n * (n - 1))
                for row in matrix.counts) / items
    total = items * n
    p_e = sum((sum(row[j] for row in matrix.counts) / total) ** 2
              for j in range(categories))
    if p_e == 1.0:
        raise DegenerateAgreement("all ratings fall in one category")
    return (p_bar - p_e) / (1.0 - p_e)


@dataclass(frozen=True)
class BenchQuestion:
    id: str
    question: str
    reference: str | None = None


@dataclass
class BenchRow:
    id: str
    question: str
    t_indexed_s: float | None = None
    t_baseline_s: float | None = None
    improvement_pct: float | None = None
    bleu_indexed: float | None = None
    bleu_baseline: float | None = None
    chunks_indexed: int | None = None
    chunks_baseline: int | None = None
    answer_indexed: str | None = None
    answer_baseline: str | None = None
    error: str | None = None


@dataclass
class BenchAggregates:
    mean_t_indexed_s: float | None = None
    mean_t_baseline_s: float | None = None
    mean_improvement_pct: float | None = None
    mean_bleu_indexed: float | None = None
    mean_bleu_baseline: float | None = None
    bleu_delta: float | None = None


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    aggregates: BenchAggregates = field(default_factory=BenchAggregates)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow([
                row.id, row.question,
                _fmt(row.t_indexed_s), _fmt(row.t_baseline_s),
                _fmt2(row.improvement_pct),
                _fmt(row.bleu_indexed), _fmt(row.bleu_baseline),
                "" if row.chunks_indexed is None else row.chunks_indexed,
                "" if row.chunks_baseline is None else row.chunks_baseline,
            ])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        return {
            "rows": [vars(row).copy() for row in self.rows],
            "aggregates": vars(self.aggregates).copy(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), ensure_ascii=False, indent=2)


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9f}"


def _fmt2(value: float | None) -> str:
    return "" if value is None else f"{value:.2f}"


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def load_questions(data: bytes | str) -> list[BenchQuestion]:
    """Parse a questions file: [{"id", "question", "reference"|null}, ...]."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"questions file is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise SchemaError("questions file must be a JSON array")
    out = []
    seen = set()
    for item in raw:
        if not isinstance(item, dict) or "id" not in item or "question" not in item:
            raise SchemaError("each question needs 'id' and 'question'")
        qid = item["id"]
        if qid in seen:
            raise SchemaError(f"duplicate question id {qid!r}")
        seen.add(qid)
        ref = item.get("reference")
        if ref is not None and not isinstance(ref, str):
            raise SchemaError(f"reference for {qid!r} must be a string or null")
        out.append(BenchQuestion(id=qid, question=item["question"], reference=ref))
    return out


def run_benchmark(book: Book, index: InvertedIndex, backend,
                  questions: list[BenchQuestion],
                  config: PipelineConfig | None = None,
                  stoplist: StopList | None = None,
                  modes: tuple[str, ...] = ("indexed", "baseline"),
                  fail_fast: bool = True,
                  warmup: bool = True) -> BenchReport:
    """Time both pipelines per question and score BLEU against references.

    Rows run strictly sequentially. Per question the baseline runs first,
    then the indexed path, preceded by one untimed backend warmup call.
    With fail_fast off, a failing question becomes a row with an error
    marker and the run continues.
    """
    if not questions:
        raise EmptySuite("no questions to benchmark")
    config = config or PipelineConfig()
    report = BenchReport()
    first_text = book.pages[0].paragraphs[0].text
    for bq in questions:
        row = BenchRow(id=bq.id, question=bq.question)
        try:
            if warmup:
                backend.answer(bq.question, first_text)
            if "baseline" in modes:
                base = answer_bruteforce(book, backend, bq.question)
                row.t_baseline_s = base.elapsed_s
                row.chunks_baseline = base.chunks_processed
                row.answer_baseline = base.answer.text
            if "indexed" in modes:
                idx = answer_indexed(book, index, backend, bq.question,
                                     config, stoplist)
                row.t_indexed_s = idx.elapsed_s
                row.chunks_indexed = idx.chunks_processed
                row.answer_indexed = idx.answer.text
            if row.t_baseline_s is not None and row.t_indexed_s is not None:
                row.improvement_pct = improvement_pct(row.t_baseline_s, row.t_indexed_s)
            if bq.reference is not None:
                if row.answer_indexed is not None:
                    row.bleu_indexed = bleu(row.answer_indexed, bq.reference).score
                if row.answer_baseline is not None:
                    row.bleu_baseline = bleu(row.answer_baseline, bq.reference).score
        except QaError as exc:
            if fail_fast:
                exc.args = (f"question {bq.id!r}: {exc}",)
                raise
            row.error = str(exc)
        report.rows.append(row)
    ok = [r for r in report.rows if r.error is None]
    agg = report.aggregates
    agg.mean_t_indexed_s = _mean([r.t_indexed_s for r in ok if r.t_indexed_s is not None])
    agg.mean_t_baseline_s = _mean([r.t_baseline_s for r in ok if r.t_baseline_s is not None])
    agg.mean_improvement_pct = _mean([r.improvement_pct for r in ok
                                      if r.improvement_pct is not None])
    agg.mean_bleu_indexed = _mean([r.bleu_indexed for r in ok if r.bleu_indexed is not None])
    agg.mean_bleu_baseline = _mean([r.bleu_baseline for r in ok
                                    if r.bleu_baseline is not None])
    if agg.mean_bleu_indexed is not None and agg.mean_bleu_baseline is not None:
        agg.bleu_delta = agg.mean_bleu_indexed - agg.mean_bleu_baseline
    return report
