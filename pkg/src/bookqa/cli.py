"""Command line interface.

    qa index build --book fitness.txt --out fitness.idx.json
    qa index export --index fitness.idx.json
    qa ask --book fitness.txt --index fitness.idx.json --question "..." [--json]
    qa repl --book fitness.txt --index fitness.idx.json
    qa bench --book fitness.txt --index fitness.idx.json \
             --questions questions.json --report report.csv
    qa serve --book fitness.txt --index fitness.idx.json --port 8080

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import json
import os
import sys
import time

import click

from . import evaluation, figures
from .backends import BackendConfig, HttpAnswerBackend, HttpEmbedder, LexicalMockBackend
from .corpus import load_book
from .errors import QaError
from .index import build_index, export_text, load_index, save_index
from .keywords import EmbedExtractConfig, EmbedExtractor, RakeConfig, RakeExtractor
from .pipeline import answer_bruteforce, answer_indexed
from .service import AskResponse


@click.group()
def main():
    """Indexed closed-domain question answering over books."""


@main.group("index")
def index_group():
    """Build or inspect inverted indexes."""


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _make_extractor(extractor_flag: str, top_k: int, embed_url: str | None):
    if extractor_flag == "rake":
        return RakeExtractor(RakeConfig(top_k=top_k))
    if not embed_url:
        raise click.UsageError("--extractor embed requires --embed-url")
    provider = HttpEmbedder(BackendConfig(endpoint=embed_url))
    return EmbedExtractor(provider, EmbedExtractConfig(top_k=top_k))


def _make_backend(backend_flag: str, backend_url: str | None, delay_ms: float = 0.0):
    if backend_flag == "mock":
        return LexicalMockBackend(delay_s=delay_ms / 1000.0)
    url = os.environ.get("QA_BACKEND_URL") or backend_url
    if not url:
        raise click.UsageError("--backend http requires --backend-url or QA_BACKEND_URL")
    return HttpAnswerBackend(BackendConfig(endpoint=url))


@index_group.command("build")
@click.option("--book", "book_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--extractor", "extractor_flag", default="rake",
              type=click.Choice(["rake", "embed"]))
@click.option("--top-k", default=2, show_default=True, type=int)
@click.option("--embed-url", default=None)
def cmd_index_build(book_path, out_path, extractor_flag, top_k, embed_url):
    """Extract keyphrases and write the index JSON (offline, once per book)."""
    t0 = time.monotonic()
    try:
        book = load_book(book_path)
        extractor = _make_extractor(extractor_flag, top_k, embed_url)
        index = build_index(book, extractor)
        save_index(index, out_path)
    except OSError as exc:
        _fail(str(exc))
    except QaError as exc:
        _fail(str(exc))
    click.echo(f"indexed {book.title!r}: {book.paragraph_count()} paragraphs, "
               f"{index.entry_count()} entries, {index.term_count()} terms "
               f"in {time.monotonic() - t0:.2f}s -> {out_path}")


@index_group.command("export")
@click.option("--index", "index_path", required=True, type=click.Path())
def cmd_index_export(index_path):
    """Print the index as human-readable records."""
    try:
        index = load_index(index_path)
    except QaError as exc:
        _fail(str(exc))
    text = export_text(index)
    if text:
        click.echo(text)


def _load_book_and_index(book_path, index_path):
    book = load_book(book_path)
    index = load_index(index_path)
    if index.meta.book_title != book.title:
        click.echo(f"warning: index was built for {index.meta.book_title!r}, "
                   f"book is {book.title!r}", err=True)
    return book, index


def _run_ask(book, index, backend, question, mode):
    if mode == "indexed":
        return answer_indexed(book, index, backend, question)
    return answer_bruteforce(book, backend, question)


def _echo_record(record, as_json: bool) -> None:
    resp = AskResponse.from_record(record)
    if as_json:
        click.echo(json.dumps(resp.to_dict(), ensure_ascii=False))
        return
    click.echo(f"answer : {resp.answer or '(no answer)'}")
    click.echo(f"score  : {resp.score:.4f}")
    srcs = ", ".join(f"page {s['page']} para {s['paragraph']}" for s in resp.sources)
    click.echo(f"sources: {srcs or '(none)'}")
    click.echo(f"mode={resp.mode} elapsed={resp.elapsed_ms}ms "
               f"chunks={resp.chunks_processed}")


@main.command("ask")
@click.option("--book", "book_path", required=True, type=click.Path())
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--question", required=True)
@click.option("--mode", default="indexed", type=click.Choice(["indexed", "baseline"]))
@click.option("--backend", "backend_flag", default="mock",
              type=click.Choice(["mock", "http"]))
@click.option("--backend-url", default=None)
@click.option("--json", "as_json", is_flag=True, default=False)
def cmd_ask(book_path, index_path, question, mode, backend_flag, backend_url, as_json):
    """Answer one question; exit 0 even when the answer is empty."""
    try:
        book, index = _load_book_and_index(book_path, index_path)
        backend = _make_backend(backend_flag, backend_url)
        record = _run_ask(book, index, backend, question, mode)
    except OSError as exc:
        _fail(str(exc))
    except QaError as exc:
        _fail(str(exc))
    _echo_record(record, as_json)


@main.command("repl")
@click.option("--book", "book_path", required=True, type=click.Path())
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--backend", "backend_flag", default="mock",
              type=click.Choice(["mock", "http"]))
@click.option("--backend-url", default=None)
def cmd_repl(book_path, index_path, backend_flag, backend_url):
    """Interactive loop: one question per line; :mode and :quit commands."""
    try:
        book, index = _load_book_and_index(book_path, index_path)
        backend = _make_backend(backend_flag, backend_url)
    except (OSError, QaError) as exc:
        _fail(str(exc))
    mode = "indexed"
    click.echo(f"{book.title}: ask away (:mode indexed|baseline, :quit)")
    while True:
        try:
            line = input("? ").strip()
        except EOFError:
            break
        if not line:
            continue
        if line == ":quit":
            break
        if line.startswith(":mode"):
            parts = line.split()
            if len(parts) == 2 and parts[1] in ("indexed", "baseline"):
                mode = parts[1]
                click.echo(f"mode set to {mode}")
            else:
                click.echo("usage: :mode indexed|baseline")
            continue
        try:
            record = _run_ask(book, index, backend, line, mode)
        except QaError as exc:
            click.echo(f"error: {exc}")
            continue
        _echo_record(record, as_json=False)


@main.command("bench")
@click.option("--book", "book_path", required=True, type=click.Path())
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--questions", "questions_path", required=True, type=click.Path())
@click.option("--report", "report_path", required=True, type=click.Path())
@click.option("--modes", default="both", type=click.Choice(["both", "indexed", "baseline"]))
@click.option("--backend", "backend_flag", default="mock",
              type=click.Choice(["mock", "http"]))
@click.option("--backend-url", default=None)
@click.option("--delay-ms", default=0.0, type=float,
              help="Constant per-call delay injected into the mock backend.")
@click.option("--keep-partial", is_flag=True, default=False,
              help="Keep going on per-question errors; rows carry error markers.")
@click.option("--figures/--no-figures", "render_figures", default=True)
def cmd_bench(book_path, index_path, questions_path, report_path, modes,
              backend_flag, backend_url, delay_ms, keep_partial, render_figures):
    """Run the question suite in both modes; write CSV + JSON (+ figures)."""
    mode_tuple = ("indexed", "baseline") if modes == "both" else (modes,)
    try:
        book, index = _load_book_and_index(book_path, index_path)
        backend = _make_backend(backend_flag, backend_url, delay_ms)
        with open(questions_path, "rb") as fh:
            questions = evaluation.load_questions(fh.read())
        report = evaluation.run_benchmark(book, index, backend, questions,
                                          modes=mode_tuple,
                                          fail_fast=not keep_partial)
    except OSError as exc:
        _fail(str(exc))
    except QaError as exc:
        _fail(str(exc))
    base, ext = os.path.splitext(report_path)
    csv_path = report_path if ext.lower() == ".csv" else base + ".csv"
    json_path = base + ".json"
    try:
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    except OSError as exc:
        _fail(str(exc))
    agg = report.aggregates
    parts = []
    if agg.mean_improvement_pct is not None:
        parts.append(f"mean improvement {agg.mean_improvement_pct:.2f}%")
    if agg.mean_bleu_indexed is not None:
        parts.append(f"mean BLEU indexed {agg.mean_bleu_indexed:.4f}")
    if agg.mean_bleu_baseline is not None:
        parts.append(f"mean BLEU baseline {agg.mean_bleu_baseline:.4f}")
    click.echo(f"{len(report.rows)} questions -> {csv_path}, {json_path}"
               + (f" ({'; '.join(parts)})" if parts else ""))
    if render_figures:
        for path in figures.render_report_figures(report, report_path):
            click.echo(f"figure -> {path}")
    errors = [r for r in report.rows if r.error]
    if errors:
        for row in errors:
            click.echo(f"error in {row.id}: {row.error}", err=True)
        sys.exit(1)


@main.command("serve")
@click.option("--book", "book_path", required=True, type=click.Path())
@click.option("--index", "index_path", required=True, type=click.Path())
@click.option("--port", required=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--backend", "backend_flag", default="mock",
              type=click.Choice(["mock", "http"]))
@click.option("--backend-url", default=None)
@click.option("--cors-origin", default=None)
def cmd_serve(book_path, index_path, port, host, backend_flag, backend_url,
              cors_origin):
    """Serve the ask pipeline over HTTP (hosts the web UI's API)."""
    try:
        book, index = _load_book_and_index(book_path, index_path)
        backend = _make_backend(backend_flag, backend_url)
    except (OSError, QaError) as exc:
        _fail(str(exc))
    from .service import create_app
    import uvicorn
    app = create_app(book, index, backend, cors_origin=cors_origin)
    click.echo(f"serving {book.title!r} on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
