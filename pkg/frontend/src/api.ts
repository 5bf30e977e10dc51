import type { AskResponse, Mode, Stats } from "./types";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText || `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") detail = body.error;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  async ask(question: string, mode: Mode): Promise<AskResponse> {
    const response = await fetch(`${this.base}/api/ask`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question, mode }),
    });
    if (!response.ok) throw await parseError(response);
    return response.json();
  }

  async stats(): Promise<Stats> {
    const response = await fetch(`${this.base}/api/stats`);
    if (!response.ok) throw await parseError(response);
    return response.json();
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.base}/healthz`);
      return response.ok;
    } catch {
      return false;
    }
  }
}
