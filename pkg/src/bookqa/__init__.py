"""Indexed closed-domain question answering over books.

Phase 1 (offline): extract one or two keyphrases per paragraph and build a
paragraph-level inverted index. Phase 2 (online): keyword the question,
match it against the index, and send only the matched paragraphs to a
pluggable answer-extraction backend instead of scanning the whole book.
"""

from .backends import (BackendConfig, HttpAnswerBackend, HttpEmbedder,
                       LexicalMockBackend, SpanAnswer, BagOfStemsEmbedder,
                       lexical_mock_answer)
from .corpus import (Book, Page, Paragraph, ParagraphRef, StopList,
                     default_stoplist, export_json, ingest_json,
                     ingest_plaintext, is_stopword, load_book, load_stoplist,
                     split_sentences, stem, tokenize)
from .evaluation import (BenchQuestion, BenchReport, BleuBreakdown,
                         RatingMatrix, bleu, fleiss_kappa, improvement_pct,
                         load_questions, run_benchmark)
from .index import (IndexEntry, IndexMeta, InvertedIndex, Posting,
                    build_index, export_text, load_index, lookup_stem,
                    save_index)
from .keywords import (CandidatePhrase, EmbedExtractConfig, EmbedExtractor,
                       KeyPhrase, RakeConfig, RakeExtractor, embed_extract,
                       extract_book_keywords, rake_candidates, rake_extract,
                       rake_score)
from .pipeline import (AnswerRecord, MatchResult, Mode, NoMatchPolicy,
                       PipelineConfig, QueryKeywords, answer_bruteforce,
                       answer_indexed, match_paragraphs, question_keywords)

__version__ = "0.1.0"

__all__ = [
    "AnswerRecord", "BackendConfig", "BenchQuestion", "BenchReport", "Book",
    "BleuBreakdown", "CandidatePhrase", "EmbedExtractConfig", "EmbedExtractor",
    "HttpAnswerBackend", "HttpEmbedder", "IndexEntry", "IndexMeta",
    "InvertedIndex", "KeyPhrase", "LexicalMockBackend", "MatchResult", "Mode",
    "NoMatchPolicy", "Page", "Paragraph", "ParagraphRef", "PipelineConfig",
    "Posting", "QueryKeywords", "RakeConfig", "RakeExtractor", "RatingMatrix",
    "SpanAnswer", "StopList", "BagOfStemsEmbedder", "answer_bruteforce",
    "answer_indexed", "bleu", "build_index", "default_stoplist",
    "embed_extract", "export_json", "export_text", "extract_book_keywords",
    "fleiss_kappa", "improvement_pct", "ingest_json", "ingest_plaintext",
    "is_stopword", "lexical_mock_answer", "load_book", "load_index",
    "load_questions", "load_stoplist", "lookup_stem", "match_paragraphs",
    "question_keywords", "rake_candidates", "rake_extract", "rake_score",
    "run_benchmark", "save_index", "split_sentences", "stem", "tokenize",
]
