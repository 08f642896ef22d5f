/**
 * Typed client for the engine's JSON API. Every call the UI makes goes
 * through this layer; responses are shape-checked at runtime so contract
 * drift fails the mock tests instead of silently rendering garbage.
 */

export interface DocumentOut {
  doc_id: string;
  n_sentences: number;
  n_triples: number;
}

export interface SessionOut {
  session_id: string;
}

export type CandidateKind = "retrieved-sentence" | "triple-sentence";

export interface TraceEntry {
  text: string;
  kind: CandidateKind;
  score: number;
}

export type ReplyOrigin = "matched" | "chitchat";

export interface MessageOut {
  reply: string;
  origin: ReplyOrigin;
  score: number | null;
  trace: TraceEntry[];
}

export interface UtteranceOut {
  role: "user" | "bot";
  text: string;
  timestamp: number;
}

export interface HistoryOut {
  session_id: string;
  doc_ids: string[];
  history: UtteranceOut[];
}

export interface HealthOut {
  status: string;
  model_loaded: boolean;
  index_docs: number;
}

export interface ConfigOut {
  score_threshold: number;
  retrieval_k: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ContractError extends Error {}

type Fetch = typeof fetch;

function expectKeys(value: unknown, keys: string[], where: string): Record<string, unknown> {
  if (typeof value !== "object" || value === null) {
    throw new ContractError(`${where}: expected an object`);
  }
  const obj = value as Record<string, unknown>;
  for (const key of keys) {
    if (!(key in obj)) {
      throw new ContractError(`${where}: missing field "${key}"`);
    }
  }
  return obj;
}

function checkTrace(value: unknown, where: string): TraceEntry[] {
  if (!Array.isArray(value)) {
    throw new ContractError(`${where}: trace must be an array`);
  }
  return value.map((entry, i) => {
    const obj = expectKeys(entry, ["text", "kind", "score"], `${where}.trace[${i}]`);
    if (obj.kind !== "retrieved-sentence" && obj.kind !== "triple-sentence") {
      throw new ContractError(`${where}.trace[${i}]: unknown kind "${String(obj.kind)}"`);
    }
    if (typeof obj.score !== "number") {
      throw new ContractError(`${where}.trace[${i}]: score must be a number`);
    }
    return { text: String(obj.text), kind: obj.kind, score: obj.score };
  });
}

export class Client {
  constructor(
    private readonly base = "",
    private readonly fetchImpl: Fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(this.base + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body: unknown = await response.json();
    if (!response.ok) {
      const err = expectKeys(body, ["status", "code", "message"], path);
      throw new ApiError(Number(err.status), String(err.code), String(err.message));
    }
    return body;
  }

  async health(): Promise<HealthOut> {
    const obj = expectKeys(await this.request("/api/health"), ["status", "model_loaded", "index_docs"], "health");
    return {
      status: String(obj.status),
      model_loaded: Boolean(obj.model_loaded),
      index_docs: Number(obj.index_docs),
    };
  }

  async config(): Promise<ConfigOut> {
    const obj = expectKeys(await this.request("/api/config"), ["score_threshold", "retrieval_k"], "config");
    return { score_threshold: Number(obj.score_threshold), retrieval_k: Number(obj.retrieval_k) };
  }

  async ingestDocument(text: string, title?: string): Promise<DocumentOut> {
    const obj = expectKeys(
      await this.request("/api/documents", {
        method: "POST",
        body: JSON.stringify({ text, title: title ?? null }),
      }),
      ["doc_id", "n_sentences", "n_triples"],
      "documents",
    );
    return {
      doc_id: String(obj.doc_id),
      n_sentences: Number(obj.n_sentences),
      n_triples: Number(obj.n_triples),
    };
  }

  async createSession(docIds: string[]): Promise<SessionOut> {
    const obj = expectKeys(
      await this.request("/api/sessions", {
        method: "POST",
        body: JSON.stringify({ doc_ids: docIds }),
      }),
      ["session_id"],
      "sessions",
    );
    return { session_id: String(obj.session_id) };
  }

  async sendMessage(sessionId: string, text: string): Promise<MessageOut> {
    const obj = expectKeys(
      await this.request(`/api/sessions/${encodeURIComponent(sessionId)}/messages`, {
        method: "POST",
        body: JSON.stringify({ text }),
      }),
      ["reply", "origin", "score", "trace"],
      "messages",
    );
    if (obj.origin !== "matched" && obj.origin !== "chitchat") {
      throw new ContractError(`messages: unknown origin "${String(obj.origin)}"`);
    }
    if (obj.score !== null && typeof obj.score !== "number") {
      throw new ContractError("messages: score must be a number or null");
    }
    return {
      reply: String(obj.reply),
      origin: obj.origin,
      score: obj.score,
      trace: checkTrace(obj.trace, "messages"),
    };
  }

  async history(sessionId: string): Promise<HistoryOut> {
    const obj = expectKeys(
      await this.request(`/api/sessions/${encodeURIComponent(sessionId)}`),
      ["session_id", "doc_ids", "history"],
      "history",
    );
    return obj as unknown as HistoryOut;
  }
}
