import csv
import io
import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bookqa.errors import (DegenerateAgreement, EmptyReference, EmptySuite,
                           NonPositiveBaseline, SchemaError)
from bookqa.evaluation import (CSV_HEADER, BenchQuestion, RatingMatrix, bleu,
                               fleiss_kappa, improvement_pct, load_questions,
                               run_benchmark)
from bookqa.index import build_index
from bookqa.keywords import RakeExtractor

from corpusgen import build_equivalence_case


class TestBleu:
    def test_identity_scores_one(self):
        text = "layers between the input layer and output layers"
        assert bleu(text, text).score == pytest.approx(1.0, abs=1e-9)

    def test_disjoint_scores_zero(self):
        got = bleu("since then", "transforms the original dataset")
        assert got.score == 0.0

    def test_brevity_penalty_hand_case(self):
        got = bleu("the cat sat", "the cat sat down")
        assert got.effective_n == 3
        assert got.precisions == (1.0, 1.0, 1.0)
        assert got.brevity_penalty == pytest.approx(math.exp(1 - 4 / 3), abs=1e-9)
        assert got.score == pytest.approx(math.exp(1 - 4 / 3), abs=1e-6)

    def test_case_invariant(self):
        assert bleu("The Cat Sat", "the cat sat down").score == \
               bleu("the cat sat", "THE CAT SAT DOWN").score

    def test_candidate_longer_than_reference_no_penalty(self):
        got = bleu("the cat sat down low", "the cat sat down")
        assert got.brevity_penalty == 1.0

    def test_short_candidate_caps_ngram_order(self):
        got = bleu("cat", "the cat sat down")
        assert got.effective_n == 1
        assert got.precisions == (1.0,)

    def test_empty_candidate_scores_zero(self):
        got = bleu("", "the cat")
        assert got.score == 0.0
        assert got.effective_n == 0

    def test_empty_reference_rejected(self):
        with pytest.raises(EmptyReference):
            bleu("the cat", "!!!")

    def test_zero_bucket_zeroes_score_unless_smoothed(self):
        # shares unigrams but no bigrams
        got = bleu("cat the", "the cat")
        assert got.score == 0.0
        smoothed = bleu("cat the", "the cat", smoothing_epsilon=1e-9)
        assert 0.0 < smoothed.score < 1e-3

    def test_clipping(self):
        # candidate repeats a unigram beyond its reference count
        got = bleu("the the the", "the cat")
        assert got.precisions[0] == pytest.approx(1 / 3)

    def test_range_on_random_pairs(self):
        rng = random.Random(42)
        words = ["the", "cat", "sat", "down", "sugar", "eats", "fast", "slow"]
        for _ in range(2000):
            cand = " ".join(rng.choice(words) for _ in range(rng.randint(0, 8)))
            ref = " ".join(rng.choice(words) for _ in range(rng.randint(1, 8)))
            score = bleu(cand, ref).score
            assert 0.0 <= score <= 1.0


class TestImprovementPct:
    def test_paper_book_a(self):
        assert improvement_pct(194.9, 10.7) == 94.51

    def test_paper_book_b_exact_rounding(self):
        # the source prints 98.77 (truncation); half-even rounding gives 98.78
        assert improvement_pct(1622.13, 19.8) == 98.78

    def test_paper_book_c_exact_rounding(self):
        # the source prints 99.02; half-even rounding gives 99.03
        assert improvement_pct(1672, 16.3) == 99.03

    def test_equal_times_zero(self):
        assert improvement_pct(3.3, 3.3) == 0.0

    def test_zero_indexed_is_hundred(self):
        assert improvement_pct(5.0, 0.0) == 100.0

    def test_monotone_decreasing_in_indexed_time(self):
        values = [100.0 * (10.0 - t) / 10.0 for t in (0.0, 2.5, 5.0, 9.9)]
        assert values == sorted(values, reverse=True)
        assert improvement_pct(10.0, 2.5) > improvement_pct(10.0, 5.0)

    def test_non_positive_baseline_rejected(self):
        with pytest.raises(NonPositiveBaseline):
            improvement_pct(0.0, 1.0)

    def test_negative_indexed_rejected(self):
        with pytest.raises(ValueError):
            improvement_pct(1.0, -0.1)


def kappa_oracle(counts, n):
    """Independent brute-force evaluation of the agreement formula."""
    N = len(counts)
    k = len(counts[0])
    p_i = [(sum(x * x for x in row) - n) / (n * (n - 1)) for row in counts]
    p_bar = sum(p_i) / N
    p_j = [sum(row[j] for row in counts) / (N * n) for j in range(k)]
    p_e = sum(p * p for p in p_j)
    return (p_bar - p_e) / (1 - p_e)


class TestFleissKappa:
    def test_perfect_agreement_two_categories(self):
        matrix = RatingMatrix(((2, 0), (0, 2)), raters_per_item=2)
        assert fleiss_kappa(matrix) == pytest.approx(1.0, abs=1e-12)

    def test_perfect_agreement_many(self):
        rows = tuple((3, 0, 0) if i % 2 else (0, 0, 3) for i in range(10))
        assert fleiss_kappa(RatingMatrix(rows, 3)) == pytest.approx(1.0, abs=1e-12)

    def test_worked_example_matches_oracle(self):
        counts = ((2, 0), (1, 1), (0, 2))
        got = fleiss_kappa(RatingMatrix(counts, 2))
        assert got == pytest.approx(kappa_oracle(counts, 2), abs=1e-9)
        assert got == pytest.approx(1 / 3, abs=1e-9)

    def test_random_independent_ratings_near_zero(self):
        rng = random.Random(20260808)
        rows = []
        for _ in range(1000):
            a = rng.randint(0, 1)
            b = rng.randint(0, 1)
            row = [0, 0]
            row[a] += 1
            row[b] += 1
            rows.append(tuple(row))
        kappa = fleiss_kappa(RatingMatrix(tuple(rows), 2))
        assert abs(kappa) < 0.1

    def test_degenerate_agreement(self):
        with pytest.raises(DegenerateAgreement):
            fleiss_kappa(RatingMatrix(((2, 0), (2, 0)), 2))

    def test_matrix_validation(self):
        with pytest.raises(SchemaError):
            RatingMatrix(((1, 0),), raters_per_item=2)
        with pytest.raises(SchemaError):
            RatingMatrix(((2,), (2,)), raters_per_item=2)
        with pytest.raises(SchemaError):
            RatingMatrix(((2, 0), (1, 0)), raters_per_item=2)

    @given(st.lists(st.tuples(st.integers(0, 4)), min_size=2, max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_matches_oracle_on_random_matrices(self, seeds):
        rng = random.Random(str(seeds))
        n = 4
        rows = []
        for _ in range(max(2, len(seeds))):
            row = [0, 0, 0]
            for _ in range(n):
                row[rng.randint(0, 2)] += 1
            rows.append(tuple(row))
        counts = tuple(rows)
        try:
            got = fleiss_kappa(RatingMatrix(counts, n))
        except DegenerateAgreement:
            return
        assert got == pytest.approx(kappa_oracle(counts, n), abs=1e-9)
        assert -1.0 <= got <= 1.0 + 1e-12


class TestLoadQuestions:
    def test_round_trip(self):
        raw = json.dumps([{"id": "q1", "question": "Why?", "reference": "Because."},
                          {"id": "q2", "question": "How?", "reference": None}])
        got = load_questions(raw)
        assert got == [BenchQuestion("q1", "Why?", "Because."),
                       BenchQuestion("q2", "How?", None)]

    def test_duplicate_ids_rejected(self):
        raw = json.dumps([{"id": "q", "question": "a"}, {"id": "q", "question": "b"}])
        with pytest.raises(SchemaError):
            load_questions(raw)

    def test_malformed_rejected(self):
        with pytest.raises(SchemaError):
            load_questions(b"{}")


class TestRunBenchmark:
    def _setup(self, seed=3):
        case = build_equivalence_case(seed=seed)
        index = build_index(case.book, RakeExtractor())
        return case, index

    def test_rows_and_aggregates(self, mock_backend):
        case, index = self._setup()
        questions = [BenchQuestion("q1", case.question, case.answer_sentence),
                     BenchQuestion("q2", case.question, None)]
        report = run_benchmark(case.book, index, mock_backend, questions)
        assert len(report.rows) == 2
        row = report.rows[0]
        assert row.improvement_pct == improvement_pct(row.t_baseline_s, row.t_indexed_s)
        assert row.bleu_indexed == pytest.approx(1.0)
        assert report.rows[1].bleu_indexed is None
        agg = report.aggregates
        assert agg.mean_t_indexed_s == pytest.approx(
            (report.rows[0].t_indexed_s + report.rows[1].t_indexed_s) / 2)
        assert agg.mean_bleu_indexed == pytest.approx(1.0)

    def test_identical_answers_equal_bleu(self, mock_backend):
        case, index = self._setup(seed=11)
        questions = [BenchQuestion("q", case.question, case.answer_sentence)]
        report = run_benchmark(case.book, index, mock_backend, questions)
        row = report.rows[0]
        assert row.answer_indexed == row.answer_baseline
        assert row.bleu_indexed == row.bleu_baseline

    def test_empty_suite_rejected(self, mock_backend):
        case, index = self._setup()
        with pytest.raises(EmptySuite):
            run_benchmark(case.book, index, mock_backend, [])

    def test_fail_fast_annotates_question_id(self, mock_backend):
        case, index = self._setup()
        questions = [BenchQuestion("bad", "the and of", None)]
        with pytest.raises(Exception) as exc_info:
            run_benchmark(case.book, index, mock_backend, questions)
        assert "bad" in str(exc_info.value)

    def test_keep_partial_marks_row(self, mock_backend):
        case, index = self._setup()
        questions = [BenchQuestion("bad", "the and of", None),
                     BenchQuestion("ok", case.question, None)]
        report = run_benchmark(case.book, index, mock_backend, questions,
                               fail_fast=False)
        assert report.rows[0].error is not None
        assert report.rows[1].error is None
        assert report.aggregates.mean_t_indexed_s is not None

    def test_determinism_of_answers(self, mock_backend):
        case, index = self._setup(seed=21)
        questions = [BenchQuestion("q", case.question, case.answer_sentence)]
        r1 = run_benchmark(case.book, index, mock_backend, questions)
        r2 = run_benchmark(case.book, index, mock_backend, questions)
        assert [(r.answer_indexed, r.answer_baseline, r.bleu_indexed,
                 r.bleu_baseline) for r in r1.rows] == \
               [(r.answer_indexed, r.answer_baseline, r.bleu_indexed,
                 r.bleu_baseline) for r in r2.rows]

    def test_csv_header_and_recompute(self, mock_backend):
        case, index = self._setup(seed=5)
        questions = [BenchQuestion("q1", case.question, case.answer_sentence)]
        report = run_benchmark(case.book, index, mock_backend, questions)
        text = report.to_csv()
        reader = csv.reader(io.StringIO(text))
        rows = list(reader)
        assert rows[0] == CSV_HEADER
        assert text.splitlines()[0] == ",".join(CSV_HEADER)
        data = rows[1]
        t_indexed = float(data[2])
        t_baseline = float(data[3])
        assert float(data[4]) == pytest.approx(
            improvement_pct(t_baseline, t_indexed), abs=0.011)

    def test_json_mirrors_rows(self, mock_backend):
        case, index = self._setup(seed=6)
        questions = [BenchQuestion("q1", case.question, None)]
        report = run_benchmark(case.book, index, mock_backend, questions)
        obj = json.loads(report.to_json())
        assert set(obj) == {"rows", "aggregates"}
        assert obj["rows"][0]["id"] == "q1"
        assert obj["rows"][0]["chunks_baseline"] == case.book.paragraph_count()
