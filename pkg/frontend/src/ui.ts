/** DOM rendering for the chat stream, inspector panel, and upload box. */

import { MessageOut, TraceEntry } from "./api.js";

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

export function appendUserMessage(stream: HTMLElement, text: string): void {
  const row = el("div", "msg msg-user");
  row.appendChild(el("div", "bubble", text));
  stream.appendChild(row);
  stream.scrollTop = stream.scrollHeight;
}

export function appendBotMessage(stream: HTMLElement, message: MessageOut): void {
  const row = el("div", "msg msg-bot");
  const bubble = el("div", "bubble");
  bubble.appendChild(el("span", "reply-text", message.reply));
  const badge = el(
    "span",
    message.origin === "matched" ? "badge badge-matched" : "badge badge-chitchat",
    message.origin === "matched" ? `matched ${message.score === null ? "" : message.score.toFixed(2)}`.trim() : "chit-chat",
  );
  bubble.appendChild(badge);
  row.appendChild(bubble);
  stream.appendChild(row);
  stream.scrollTop = stream.scrollHeight;
}

export function appendNotice(stream: HTMLElement, text: string): void {
  stream.appendChild(el("div", "notice", text));
}

/**
 * Render the candidate trace as a bar list in the server's order (which
 * is score-descending; the UI never re-sorts) with the threshold marker.
 */
export function renderInspector(panel: HTMLElement, trace: TraceEntry[], threshold: number): void {
  panel.replaceChildren();
  if (trace.length === 0) {
    panel.appendChild(el("div", "inspector-empty", "no candidates (chit-chat fallback)"));
    return;
  }
  const list = el("div", "bar-list");
  for (const entry of trace) {
    const row = el("div", "bar-row");
    const label = el("div", "bar-label", entry.text);
    const track = el("div", "bar-track");
    const fill = el("div", entry.kind === "triple-sentence" ? "bar-fill bar-triple" : "bar-fill");
    fill.style.width = `${Math.max(1, Math.round(entry.score * 100))}%`;
    const marker = el("div", "bar-threshold");
    marker.style.left = `${threshold * 100}%`;
    marker.title = `threshold ${threshold}`;
    const score = el("span", "bar-score", entry.score.toFixed(3));
    track.appendChild(fill);
    track.appendChild(marker);
    row.appendChild(label);
    row.appendChild(track);
    row.appendChild(score);
    const detail = el(
      "div",
      "bar-detail",
      entry.kind === "triple-sentence" ? `derived (triple-sentence): ${entry.text}` : `retrieved sentence: ${entry.text}`,
    );
    detail.hidden = true;
    row.appendChild(detail);
    row.addEventListener("click", () => {
      detail.hidden = !detail.hidden;
    });
    if (entry.kind === "triple-sentence") {
      row.appendChild(el("span", "tag-derived", "derived"));
    }
    list.appendChild(row);
  }
  panel.appendChild(list);
}

export function showBanner(
  banner: HTMLElement,
  text: string,
  retry: (() => void) | null,
): void {
  banner.replaceChildren();
  banner.hidden = false;
  banner.appendChild(el("span", "banner-text", text));
  if (retry) {
    const button = el("button", "banner-retry", "Retry");
    button.addEventListener("click", () => {
      banner.hidden = true;
      retry();
    });
    banner.appendChild(button);
  }
}

export function hideBanner(banner: HTMLElement): void {
  banner.hidden = true;
  banner.replaceChildren();
}
