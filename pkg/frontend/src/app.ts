import { ApiClient } from "./api";
import type { AskResponse, ChatTurn, Mode, UiConfig } from "./types";

/** Everything the page shows comes verbatim from the API: answers, scores,
 * elapsed_ms and chunk counts are rendered as received, never recomputed. */

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderResponse(mode: Mode, response: AskResponse): HTMLElement {
  const card = el("div", `response response-${mode}`);
  const head = el("div", "response-head");
  head.appendChild(el("span", "mode-tag", response.mode));
  const badge = el("span", "latency-badge", `${response.elapsed_ms} ms`);
  badge.dataset.elapsedMs = String(response.elapsed_ms);
  head.appendChild(badge);
  head.appendChild(
    el("span", "chunks", `${response.chunks_processed} chunks`),
  );
  card.appendChild(head);
  card.appendChild(
    el("p", "answer", response.answer === "" ? "(no answer)" : response.answer),
  );
  card.appendChild(el("span", "score", `score ${response.score}`));
  const chips = el("div", "sources");
  for (const source of response.sources) {
    chips.appendChild(
      el("span", "source-chip", `p.${source.page} ¶${source.paragraph}`),
    );
  }
  card.appendChild(chips);
  return card;
}

function renderTurn(turn: ChatTurn): HTMLElement {
  const node = el("div", "turn");
  node.appendChild(el("div", "question", turn.question));
  if (turn.error !== undefined) {
    node.appendChild(el("div", "error-bubble", turn.error));
    return node;
  }
  for (const mode of ["baseline", "indexed"] as Mode[]) {
    const response = turn.responses[mode];
    if (response) node.appendChild(renderResponse(mode, response));
  }
  return node;
}

export class ChatApp {
  readonly turns: ChatTurn[] = [];
  private pending = false;

  private readonly history: HTMLElement;
  private readonly input: HTMLInputElement;
  private readonly submit: HTMLButtonElement;
  private readonly modeSelect: HTMLSelectElement;
  private readonly compareToggle: HTMLInputElement;
  private readonly statsPanel: HTMLElement;
  private readonly banner: HTMLElement;

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
    config: UiConfig,
  ) {
    this.banner = el("div", "banner hidden");
    this.statsPanel = el("header", "stats");
    this.history = el("main", "history");

    const form = el("form", "ask-form");
    this.input = el("input", "question-input");
    this.input.type = "text";
    this.input.placeholder = "Ask the book…";
    this.modeSelect = el("select", "mode-select");
    for (const mode of ["indexed", "baseline"]) {
      const option = el("option", undefined, mode);
      option.value = mode;
      this.modeSelect.appendChild(option);
    }
    this.modeSelect.value = config.defaultMode;
    this.compareToggle = el("input", "compare-toggle");
    this.compareToggle.type = "checkbox";
    this.compareToggle.checked = config.compareMode;
    const compareLabel = el("label", "compare-label", "compare");
    compareLabel.prepend(this.compareToggle);
    this.submit = el("button", "submit", "Ask");
    this.submit.type = "submit";

    form.append(this.input, this.modeSelect, compareLabel, this.submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitQuestion(this.input.value);
    });
    this.input.addEventListener("input", () => this.refreshControls());

    root.append(this.banner, this.statsPanel, form, this.history);
    this.refreshControls();
  }

  /** Submit is unavailable while blank or while a question is in flight. */
  get submitDisabled(): boolean {
    return this.submit.disabled;
  }

  private refreshControls(): void {
    this.submit.disabled = this.pending || this.input.value.trim() === "";
  }

  async init(): Promise<void> {
    const healthy = await this.client.health();
    if (!healthy) this.showBanner("service unreachable — answers may fail");
    await this.renderStats();
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.className = "banner degraded";
  }

  async renderStats(): Promise<void> {
    this.statsPanel.replaceChildren();
    try {
      const stats = await this.client.stats();
      this.statsPanel.appendChild(el("h1", "book-title", stats.book_title));
      this.statsPanel.appendChild(
        el("span", "stat", `${stats.paragraphs} paragraphs`),
      );
      this.statsPanel.appendChild(
        el("span", "stat", `${stats.entries} index entries`),
      );
      if (stats.entries === 0) {
        this.statsPanel.appendChild(el("span", "warn-badge", "empty index"));
      }
    } catch {
      this.statsPanel.appendChild(el("span", "stat-error", "index unavailable"));
      this.showBanner("stats unavailable — chat still works");
    }
  }

  /** Ask in the selected mode, or both modes sequentially (baseline first)
   * when compare is on. The turn is appended either way; failures become an
   * inline error turn and never clear history. */
  async submitQuestion(text: string): Promise<ChatTurn | null> {
    const question = text.trim();
    if (question === "" || this.pending) return null;
    this.pending = true;
    this.refreshControls();
    const turn: ChatTurn = {
      question,
      responses: {},
      timestamp: Date.now(),
    };
    try {
      if (this.compareToggle.checked) {
        turn.responses.baseline = await this.client.ask(question, "baseline");
        turn.responses.indexed = await this.client.ask(question, "indexed");
      } else {
        const mode = this.modeSelect.value as Mode;
        turn.responses[mode] = await this.client.ask(question, mode);
      }
    } catch (error) {
      turn.error = error instanceof Error ? error.message : String(error);
    }
    this.turns.push(turn);
    this.history.appendChild(renderTurn(turn));
    this.input.value = "";
    this.pending = false;
    this.refreshControls();
    return turn;
  }
}

export function createApp(
  root: HTMLElement,
  client: ApiClient,
  config?: Partial<UiConfig>,
): ChatApp {
  const merged: UiConfig = {
    apiBase: config?.apiBase ?? "",
    defaultMode: config?.defaultMode ?? "indexed",
    compareMode: config?.compareMode ?? false,
  };
  return new ChatApp(root, client, merged);
}
