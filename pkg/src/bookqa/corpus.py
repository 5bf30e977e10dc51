"""Document model and text normalization primitives.

A Book is addressed at the (page number, paragraph number) level. Pages in
plaintext input are separated by form-feed (U+000C); paragraphs within a
page by one or more blank lines. All higher modules share the tokenizer,
sentence splitter, stopword list and stemmer defined here.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import EmptyBook, InvalidEncoding, SchemaError
from .porter import stem as porter_stem

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_SENTENCE_END_RE = re.compile(r"[.!?]+(?=\s|$)")


@dataclass(frozen=True)
class Paragraph:
    num: int
    text: str


@dataclass(frozen=True)
class Page:
    num: int
    paragraphs: tuple[Paragraph, ...]


@dataclass(frozen=True)
class ParagraphRef:
    """Address of one paragraph: (page number, paragraph number), both 1-based."""

    page_num: int
    paragraph_num: int

    def __lt__(self, other: "ParagraphRef") -> bool:
        return (self.page_num, self.paragraph_num) < (other.page_num, other.paragraph_num)

    def as_tuple(self) -> tuple[int, int]:
        return (self.page_num, self.paragraph_num)


@dataclass(frozen=True)
class Book:
    title: str
    pages: tuple[Page, ...]

    def __post_init__(self):
        if not self.pages:
            raise EmptyBook("book has no pages")
        prev = 0
        for page in self.pages:
            if page.num <= prev:
                raise SchemaError(f"page numbers must be strictly increasing, got {page.num} after {prev}")
            prev = page.num
            if not page.paragraphs:
                raise SchemaError(f"page {page.num} has no paragraphs")
            for i, para in enumerate(page.paragraphs, start=1):
                if para.num != i:
                    raise SchemaError(f"page {page.num}: paragraph numbers must be 1-based and contiguous")
                if not para.text.strip():
                    raise SchemaError(f"page {page.num} paragraph {i}: empty text")

    def resolve(self, ref: ParagraphRef) -> Paragraph:
        for page in self.pages:
            if page.num == ref.page_num:
                for para in page.paragraphs:
                    if para.num == ref.paragraph_num:
                        return para
                break
        raise KeyError(f"unresolvable ref: page {ref.page_num} paragraph {ref.paragraph_num}")

    def refs(self) -> list[ParagraphRef]:
        """All paragraph refs in (page, paragraph) order."""
        return [ParagraphRef(page.num, para.num)
                for page in self.pages for para in page.paragraphs]

    def paragraph_count(self) -> int:
        return sum(len(page.paragraphs) for page in self.pages)


@dataclass(frozen=True)
class StopList:
    words: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        for w in self.words:
            if w != w.lower() or any(c.isspace() for c in w):
                raise SchemaError(f"stoplist entry must be lowercase without whitespace: {w!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def content_hash(self) -> str:
        """Hex digest over the sorted word set; recorded in index metadata."""
        payload = "\n".join(sorted(self.words)).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()


def load_stoplist(path=None) -> StopList:
    """Load a stoplist file: one lowercase word per line, '#' comments allowed."""
    if path is None:
        text = resources.files("bookqa").joinpath("data/smart_stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return StopList(frozenset(words))


_DEFAULT_STOPLIST: StopList | None = None


def default_stoplist() -> StopList:
    global _DEFAULT_STOPLIST
    if _DEFAULT_STOPLIST is None:
        _DEFAULT_STOPLIST = load_stoplist()
    return _DEFAULT_STOPLIST


def tokenize(text: str) -> list[str]:
    """Lowercase tokens split on any non-alphanumeric character.

    Unicode-aware; underscores count as separators; digits are kept.
    """
    return [m.group().lower() for m in _TOKEN_RE.finditer(text)]


def tokenize_with_offsets(text: str) -> list[tuple[str, int]]:
    """Like tokenize but each token carries its character offset."""
    return [(m.group().lower(), m.start()) for m in _TOKEN_RE.finditer(text)]


def stem(token: str) -> str:
    """Porter-stem one lowercase token."""
    return porter_stem(token)


def is_stopword(token: str, stoplist: StopList) -> bool:
    return token in stoplist


def split_sentences(text: str) -> list[str]:
    """Split after '.', '!' or '?' followed by whitespace or end of text.

    Delimiters are excluded and empty sentences dropped.
    """
    return [span_text for span_text, _, _ in sentence_spans(text)]


def sentence_spans(text: str) -> list[tuple[str, int, int]]:
    """Sentences with their (start, end) character offsets into text."""
    spans = []
    start = 0
    for m in _SENTENCE_END_RE.finditer(text):
        spans.append((start, m.start()))
        start = m.end()
    spans.append((start, len(text)))
    out = []
    for s, e in spans:
        chunk = text[s:e]
        stripped = chunk.strip()
        if not stripped:
            continue
        lead = len(chunk) - len(chunk.lstrip())
        out.append((stripped, s + lead, s + lead + len(stripped)))
    return out


def ingest_plaintext(data: bytes, title: str) -> Book:
    """Build a Book from plaintext bytes.

    Pages are delimited by form-feed (U+000C) and numbered 1..N in input
    order; paragraphs within a page by one or more blank lines, numbered
    1..M. Whitespace is trimmed and empty paragraphs dropped.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(str(exc)) from exc
    pages = []
    for page_num, raw_page in enumerate(text.split(""), start=1):
        paragraphs = []
        for raw_para in re.split(r"\n\s*\n", raw_page):
            body = raw_para.strip()
            if body:
                paragraphs.append(body)
        # a page with no content keeps its position but yields no Page
        if paragraphs:
            pages.append(Page(page_num, tuple(
                Paragraph(i, body) for i, body in enumerate(paragraphs, start=1))))
    if not pages:
        raise EmptyBook("no non-blank paragraph in input")
    return Book(title, tuple(pages))


def ingest_json(data: bytes) -> Book:
    """Build a Book from its JSON encoding (see export_json)."""
    try:
        obj = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("top level must be an object")
    try:
        title = obj["title"]
        raw_pages = obj["pages"]
    except KeyError as exc:
        raise SchemaError(f"missing field: {exc.args[0]}") from exc
    if not isinstance(title, str) or not isinstance(raw_pages, list):
        raise SchemaError("title must be a string and pages a list")
    if not raw_pages:
        raise EmptyBook("pages list is empty")
    pages = []
    for raw in raw_pages:
        if not isinstance(raw, dict) or "num" not in raw or "paragraphs" not in raw:
            raise SchemaError("each page needs 'num' and 'paragraphs'")
        num, paras = raw["num"], raw["paragraphs"]
        if not isinstance(num, int) or isinstance(num, bool) or num < 1:
            raise SchemaError(f"page num must be an integer >= 1, got {num!r}")
        if not isinstance(paras, list) or not all(isinstance(p, str) for p in paras):
            raise SchemaError(f"page {num}: paragraphs must be a list of strings")
        pages.append(Page(num, tuple(
            Paragraph(i, p) for i, p in enumerate(paras, start=1))))
    return Book(title, tuple(pages))


def export_json(book: Book) -> bytes:
    """Canonical JSON encoding: {"title": ..., "pages": [{"num", "paragraphs"}]}."""
    obj = {
        "title": book.title,
        "pages": [
            {"num": page.num, "paragraphs": [p.text for p in page.paragraphs]}
            for page in book.pages
        ],
    }
    return json.dumps(obj, ensure_ascii=False, indent=2).encode("utf-8")


def load_book(path: str) -> Book:
    """Load a book file; '.json' selects the JSON schema, anything else plaintext."""
    with open(path, "rb") as fh:
        data = fh.read()
    if str(path).endswith(".json"):
        return ingest_json(data)
    import os
    title = os.path.splitext(os.path.basename(str(path)))[0]
    return ingest_plaintext(data, title)
