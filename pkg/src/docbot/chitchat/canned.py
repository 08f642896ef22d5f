"""Canned-response floor: a deterministic rotation used when no generator
model is loaded.  Total by construction."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

_DEFAULTS = ["Sorry, could you rephrase that?"]


def load_canned(path: str | Path | None = None) -> list[str]:
    if path is None:
        path = Path(str(resources.files("docbot.data") / "canned_responses.txt"))
    lines = [
        line.strip()
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    return lines or list(_DEFAULTS)


class CannedResponder:
    def __init__(self, responses: list[str] | None = None):
        self._responses = list(responses) if responses else list(_DEFAULTS)
        self._next = 0

    def reply(self, _query: str = "") -> str:
        text = self._responses[self._next]
        self._next = (self._next + 1) % len(self._responses)
        return text
