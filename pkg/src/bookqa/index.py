"""Paragraph-level inverted index over extracted keyphrases.

Entries are keyed by the phrase exactly as extracted; a derived term map
from stemmed tokens to phrases supports question-side matching (a query
stem "lose" reaches the phrase "losing weight"). The index is immutable
after build/load and persists as versioned JSON.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .corpus import Book, ParagraphRef, tokenize
from .errors import CorruptIndex, EmptyBook, IndexIoError, VersionMismatch
from .keywords import extract_book_keywords
from .porter import stem

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Posting:
    """One page's occurrences of a phrase: sorted unique paragraph numbers."""

    page_num: int
    paragraph_nums: tuple[int, ...]


@dataclass(frozen=True)
class IndexEntry:
    phrase: str
    stemmed_tokens: tuple[str, ...]
    postings: tuple[Posting, ...]

    def refs(self) -> list[ParagraphRef]:
        return [ParagraphRef(p.page_num, n)
                for p in self.postings for n in p.paragraph_nums]


@dataclass(frozen=True)
class IndexMeta:
    book_title: str
    extractor_id: str
    top_k: int
    stoplist_hash: str
    created_at: str
    format_version: int = FORMAT_VERSION


@dataclass
class InvertedIndex:
    entries: dict[str, IndexEntry]
    meta: IndexMeta
    term_map: dict[str, set[str]] = field(compare=False, default_factory=dict)

    def __post_init__(self):
        if not self.term_map:
            self.term_map = _build_term_map(self.entries)

    def entry_count(self) -> int:
        return len(self.entries)

    def term_count(self) -> int:
        return len(self.term_map)


def _build_term_map(entries: dict[str, IndexEntry]) -> dict[str, set[str]]:
    term_map: dict[str, set[str]] = {}
    for phrase, entry in entries.items():
        for st in entry.stemmed_tokens:
            term_map.setdefault(st, set()).add(phrase)
    return term_map


def phrase_stems(phrase: str) -> tuple[str, ...]:
    return tuple(stem(t) for t in tokenize(phrase))


def build_index(book: Book, extractor) -> InvertedIndex:
    """Phase-1 build: extract per paragraph, merge postings per phrase."""
    if book.paragraph_count() == 0:
        raise EmptyBook("cannot index an empty book")
    by_phrase: dict[str, dict[int, set[int]]] = {}
    for ref, phrases in extract_book_keywords(book, extractor).items():
        for kp in phrases:
            pages = by_phrase.setdefault(kp.text, {})
            pages.setdefault(ref.page_num, set()).add(ref.paragraph_num)
    entries: dict[str, IndexEntry] = {}
    for phrase in sorted(by_phrase):
        postings = tuple(
            Posting(page, tuple(sorted(paras)))
            for page, paras in sorted(by_phrase[phrase].items()))
        entries[phrase] = IndexEntry(phrase, phrase_stems(phrase), postings)
    if not entries:
        logger.warning("index for %r has zero entries", book.title)
    meta = IndexMeta(
        book_title=book.title,
        extractor_id=extractor.extractor_id,
        top_k=extractor.top_k,
        stoplist_hash=extractor.stoplist.content_hash(),
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    return InvertedIndex(entries=entries, meta=meta)


def lookup_stem(index: InvertedIndex, query_stem: str) -> list[tuple[str, ParagraphRef]]:
    """All (phrase, ref) pairs whose entry contains the stem, ordered by
    (page, paragraph, phrase); empty if the stem is unknown."""
    pairs = []
    for phrase in index.term_map.get(query_stem, ()):
        for ref in index.entries[phrase].refs():
            pairs.append((phrase, ref))
    pairs.sort(key=lambda pr: (pr[1].page_num, pr[1].paragraph_num, pr[0]))
    return pairs


def export_text(index: InvertedIndex) -> str:
    """Human-readable record per (entry, posting):

        page num:10, paragraph num:1,4, keyword: losing weight

    Lines sorted by (page, first paragraph, phrase).
    """
    lines = []
    for entry in index.entries.values():
        for posting in entry.postings:
            lines.append((posting.page_num, posting.paragraph_nums[0], entry.phrase,
                          "page num:%d, paragraph num:%s, keyword: %s" % (
                              posting.page_num,
                              ",".join(str(n) for n in posting.paragraph_nums),
                              entry.phrase)))
    lines.sort(key=lambda t: (t[0], t[1], t[2]))
    return "\n".join(line for *_, line in lines)


def save_index(index: InvertedIndex, path) -> None:
    obj = {
        "format_version": index.meta.format_version,
        "meta": {
            "book_title": index.meta.book_title,
            "extractor_id": index.meta.extractor_id,
            "top_k": index.meta.top_k,
            "stoplist_hash": index.meta.stoplist_hash,
            "created_at": index.meta.created_at,
        },
        "entries": [
            {
                "keyword": entry.phrase,
                "stems": list(entry.stemmed_tokens),
                "postings": [
                    {"page": p.page_num, "paragraphs": list(p.paragraph_nums)}
                    for p in entry.postings
                ],
            }
            for entry in sorted(index.entries.values(), key=lambda e: e.phrase)
        ],
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, ensure_ascii=False, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise IndexIoError(f"cannot write index to {path}: {exc}") from exc


def load_index(path) -> InvertedIndex:
    """Load and revalidate a persisted index; the term map is rebuilt."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise IndexIoError(f"cannot read index from {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CorruptIndex(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise CorruptIndex("top level must be an object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"format_version {version!r}, expected {FORMAT_VERSION}")
    raw_meta = obj.get("meta")
    if not isinstance(raw_meta, dict):
        raise CorruptIndex("missing meta object")
    try:
        meta = IndexMeta(
            book_title=raw_meta["book_title"],
            extractor_id=raw_meta["extractor_id"],
            top_k=raw_meta["top_k"],
            stoplist_hash=raw_meta["stoplist_hash"],
            created_at=raw_meta["created_at"],
        )
    except KeyError as exc:
        raise CorruptIndex(f"meta missing field {exc.args[0]!r}") from exc
    raw_entries = obj.get("entries")
    if not isinstance(raw_entries, list):
        raise CorruptIndex("missing entries list")
    entries: dict[str, IndexEntry] = {}
    for raw in raw_entries:
        try:
            phrase = raw["keyword"]
            stems = tuple(raw["stems"])
            postings = tuple(
                Posting(p["page"], tuple(p["paragraphs"])) for p in raw["postings"])
        except (KeyError, TypeError) as exc:
            raise CorruptIndex(f"malformed entry: {exc}") from exc
        _validate_entry(phrase, stems, postings)
        if phrase in entries:
            raise CorruptIndex(f"duplicate keyword {phrase!r}")
        entries[phrase] = IndexEntry(phrase, stems, postings)
    return InvertedIndex(entries=entries, meta=meta)


def _validate_entry(phrase: str, stems: tuple[str, ...],
                    postings: tuple[Posting, ...]) -> None:
    if not phrase or not isinstance(phrase, str):
        raise CorruptIndex("entry with empty keyword")
    if stems != phrase_stems(phrase):
        raise CorruptIndex(
            f"stems for {phrase!r} do not match the phrase: {list(stems)}")
    if not postings:
        raise CorruptIndex(f"entry {phrase!r} has no postings")
    prev_page = 0
    for posting in postings:
        if posting.page_num <= prev_page:
            raise CorruptIndex(f"entry {phrase!r}: postings pages not strictly increasing")
        prev_page = posting.page_num
        if not posting.paragraph_nums:
            raise CorruptIndex(f"entry {phrase!r}: empty paragraph list")
        if list(posting.paragraph_nums) != sorted(set(posting.paragraph_nums)):
            raise CorruptIndex(f"entry {phrase!r}: paragraphs not strictly increasing")
        if any(not isinstance(n, int) or n < 1 for n in posting.paragraph_nums):
            raise CorruptIndex(f"entry {phrase!r}: paragraph numbers must be >= 1")
