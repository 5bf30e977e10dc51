export type Mode = "indexed" | "baseline";

export interface SourceRef {
  page: number;
  paragraph: number;
}

export interface AskResponse {
  answer: string;
  score: number;
  sources: SourceRef[];
  mode: Mode;
  elapsed_ms: number;
  chunks_processed: number;
}

export interface Stats {
  book_title: string;
  paragraphs: number;
  entries: number;
  terms: number;
  extractor_id: string;
}

export interface UiConfig {
  apiBase: string;
  defaultMode: Mode;
  compareMode: boolean;
}

/** One question with the response(s) it produced, or an error. */
export interface ChatTurn {
  question: string;
  responses: Partial<Record<Mode, AskResponse>>;
  error?: string;
  timestamp: number;
}
