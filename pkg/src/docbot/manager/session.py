"""In-memory session store with TTL expiry and per-session locking."""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from ..errors import SessionError


@dataclass
class Utterance:
    role: str  # "user" | "bot"
    text: str
    timestamp: float


@dataclass
class Session:
    session_id: str
    doc_ids: tuple[str, ...]
    history: list[Utterance] = field(default_factory=list)
    created_at: float = 0.0
    last_active: float = 0.0

    def append(self, role: str, text: str, now: float, window: int) -> None:
        self.history.append(Utterance(role=role, text=text, timestamp=now))
        # keep the freshest `window` turns only
        if len(self.history) > window:
            del self.history[: len(self.history) - window]
        self.last_active = now

    def context_texts(self, max_utterances: int, include_bot_turns: bool) -> list[str]:
        utts = self.history if include_bot_turns else [u for u in self.history if u.role == "user"]
        return [u.text for u in utts[-max_utterances:]]


class SessionStore:
    """Thread-safe store; expired ids never come back (fresh uuid per session)."""

    def __init__(self, clock=time.monotonic):
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}

    def now(self) -> float:
        return self._clock()

    def create(self, doc_ids: tuple[str, ...]) -> Session:
        now = self._clock()
        session = Session(
            session_id=uuid.uuid4().hex, doc_ids=tuple(doc_ids), created_at=now, last_active=now
        )
        with self._lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionError(f"unknown session {session_id!r}")
        return session

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._lock:
            lock = self._locks.get(session_id)
        if lock is None:
            raise SessionError(f"unknown session {session_id!r}")
        return lock

    def expire_sessions(self, ttl_seconds: float) -> int:
        """Drop sessions idle for at least ttl_seconds; returns the count."""
        now = self._clock()
        with self._lock:
            dead = [sid for sid, s in self._sessions.items() if now - s.last_active >= ttl_seconds]
            for sid in dead:
                del self._sessions[sid]
                del self._locks[sid]
        return len(dead)

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
