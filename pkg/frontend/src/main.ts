/** App bootstrap: wires the typed client to the chat view, inspector
 * panel, and document upload box. One in-flight message per session. */

import { ApiError, Client, MessageOut } from "./api.js";
import {
  appendBotMessage,
  appendNotice,
  appendUserMessage,
  hideBanner,
  renderInspector,
  showBanner,
} from "./ui.js";

interface AppState {
  sessionId: string | null;
  docIds: string[];
  pending: boolean;
  threshold: number;
}

const state: AppState = { sessionId: null, docIds: [], pending: false, threshold: 0.3 };
const client = new Client();

function must<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function ensureSession(): Promise<string> {
  if (state.sessionId) return state.sessionId;
  const session = await client.createSession(state.docIds);
  state.sessionId = session.session_id;
  must<HTMLElement>("session-label").textContent = `session ${session.session_id.slice(0, 8)}`;
  return session.session_id;
}

async function sendCurrentMessage(): Promise<void> {
  const input = must<HTMLInputElement>("chat-input");
  const text = input.value.trim();
  if (!text || state.pending) return;
  const stream = must<HTMLElement>("chat-stream");
  const banner = must<HTMLElement>("banner");
  setPending(true);
  appendUserMessage(stream, text);
  input.value = "";
  try {
    const sessionId = await ensureSession();
    let message: MessageOut;
    try {
      message = await client.sendMessage(sessionId, text);
    } catch (err) {
      if (err instanceof ApiError && err.code === "session_not_found") {
        // expired server-side; recreate only with the user's consent
        if (window.confirm("This session expired. Start a new one and resend?")) {
          state.sessionId = null;
          const fresh = await ensureSession();
          message = await client.sendMessage(fresh, text);
        } else {
          appendNotice(stream, "message not sent (session expired)");
          return;
        }
      } else {
        throw err;
      }
    }
    appendBotMessage(stream, message);
    renderInspector(must("inspector"), message.trace, state.threshold);
    hideBanner(banner);
  } catch (err) {
    const reason = err instanceof Error ? err.message : String(err);
    showBanner(banner, `send failed: ${reason}`, () => {
      input.value = text;
      void sendCurrentMessage();
    });
  } finally {
    setPending(false);
  }
}

function setPending(pending: boolean): void {
  state.pending = pending;
  must<HTMLButtonElement>("chat-send").disabled = pending;
}

async function uploadDocument(text: string): Promise<void> {
  const status = must<HTMLElement>("upload-status");
  if (!text.trim()) {
    status.textContent = "document text is empty";
    return;
  }
  try {
    const doc = await client.ingestDocument(text);
    status.textContent = `ingested ${doc.doc_id}: ${doc.n_sentences} sentences, ${doc.n_triples} triples`;
    state.docIds = [doc.doc_id];
    state.sessionId = null; // rebinding starts a fresh session
    await ensureSession();
    appendNotice(must("chat-stream"), `bound to document ${doc.doc_id}`);
  } catch (err) {
    if (err instanceof ApiError) {
      status.textContent = `upload rejected: ${err.message}`;
    } else {
      showBanner(must("banner"), "upload failed: network error", () => void uploadDocument(text));
    }
  }
}

async function boot(): Promise<void> {
  const healthLabel = must<HTMLElement>("health-label");
  try {
    const [health, config] = await Promise.all([client.health(), client.config()]);
    state.threshold = config.score_threshold;
    healthLabel.textContent = `${health.index_docs} document(s) indexed, model ${health.model_loaded ? "loaded" : "absent"}`;
  } catch {
    showBanner(must("banner"), "API unreachable", () => void boot());
    return;
  }
  renderInspector(must("inspector"), [], state.threshold);

  must<HTMLButtonElement>("chat-send").addEventListener("click", () => void sendCurrentMessage());
  must<HTMLInputElement>("chat-input").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void sendCurrentMessage();
  });
  must<HTMLButtonElement>("upload-button").addEventListener("click", () => {
    void uploadDocument(must<HTMLTextAreaElement>("upload-text").value);
  });
  const dropZone = must<HTMLElement>("upload-box");
  dropZone.addEventListener("dragover", (event) => event.preventDefault());
  dropZone.addEventListener("drop", (event) => {
    event.preventDefault();
    const file = event.dataTransfer?.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      must<HTMLTextAreaElement>("upload-text").value = text;
      return uploadDocument(text);
    });
  });
  must<HTMLButtonElement>("view-toggle").addEventListener("click", () => {
    document.body.classList.toggle("inspector-hidden");
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  void boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => void boot());
}
