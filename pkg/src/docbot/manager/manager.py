"""Turn orchestration: retrieve, assemble candidates, rank against the
session context, answer above the score threshold or fall back to
chit-chat.  A candidate scoring exactly at the threshold is accepted."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

from ..candidates import CandidateSet, generate_candidates
from ..retrieval import RetrievalConfig, SentenceIndex, retrieve_top_k
from .session import Session, SessionStore

ORIGIN_MATCHED = "matched"
ORIGIN_CHITCHAT = "chitchat"


class CandidateScorer(Protocol):
    def score_many(self, context: list[str], responses: list[str]) -> Sequence[float]: ...


@dataclass(frozen=True)
class ManagerConfig:
    score_threshold: float = 0.3
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    max_context_utterances: int = 10
    include_bot_turns: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.score_threshold <= 1.0:
            raise ValueError("score_threshold must lie in [0, 1]")


@dataclass
class TraceEntry:
    text: str
    kind: str
    score: float
    doc_id: str
    sentence_index: int


@dataclass
class ResponseDecision:
    reply: str
    origin: str  # ORIGIN_MATCHED | ORIGIN_CHITCHAT
    score: float | None
    candidate_trace: list[TraceEntry]


class DialogueManager:
    def __init__(
        self,
        index_provider: Callable[[tuple[str, ...]], SentenceIndex | None],
        scorer: CandidateScorer | None,
        chitchat: Callable[[str], str],
        config: ManagerConfig = ManagerConfig(),
        store: SessionStore | None = None,
    ):
        self._index_provider = index_provider
        self._scorer = scorer
        self._chitchat = chitchat
        self.config = config
        self.store = store or SessionStore()

    def create_session(self, doc_ids: Sequence[str]) -> Session:
        return self.store.create(tuple(doc_ids))

    def get_session(self, session_id: str) -> Session:
        return self.store.get(session_id)

    def expire_sessions(self, ttl_seconds: float) -> int:
        return self.store.expire_sessions(ttl_seconds)

    def handle_message(self, session_id: str, text: str) -> ResponseDecision:
        session = self.store.get(session_id)
        with self.store.lock_for(session_id):
            return self._handle_locked(session, text)

    def _handle_locked(self, session: Session, text: str) -> ResponseDecision:
        window = 2 * self.config.max_context_utterances
        now = self.store.now()
        session.append("user", text, now, window)
        candidates = self._candidates_for(session, text)
        decision = self._decide(session, text, candidates)
        session.append("bot", decision.reply, self.store.now(), window)
        return decision

    def _candidates_for(self, session: Session, text: str) -> CandidateSet:
        index = self._index_provider(session.doc_ids) if session.doc_ids else None
        if index is None:
            return CandidateSet(candidates=[])
        retrieved = retrieve_top_k(index, text, self.config.retrieval)
        return generate_candidates(retrieved)

    def _decide(self, session: Session, text: str, candidates: CandidateSet) -> ResponseDecision:
        if not candidates.candidates or self._scorer is None:
            return ResponseDecision(
                reply=self._chitchat(text), origin=ORIGIN_CHITCHAT, score=None, candidate_trace=[]
            )
        context = session.context_texts(
            self.config.max_context_utterances, self.config.include_bot_turns
        )
        scores = list(self._scorer.score_many(context, candidates.texts()))
        best_idx = max(range(len(scores)), key=lambda i: (scores[i], -i))
        best_score = float(scores[best_idx])
        trace = [
            TraceEntry(
                text=c.text,
                kind=c.kind,
                score=float(s),
                doc_id=c.source[0],
                sentence_index=c.source[1],
            )
            for c, s in zip(candidates.candidates, scores)
        ]
        trace.sort(key=lambda t: -t.score)  # stable: ties keep candidate order
        if best_score >= self.config.score_threshold:
            return ResponseDecision(
                reply=candidates.candidates[best_idx].text,
                origin=ORIGIN_MATCHED,
                score=best_score,
                candidate_trace=trace,
            )
        return ResponseDecision(
            reply=self._chitchat(text),
            origin=ORIGIN_CHITCHAT,
            score=best_score,
            candidate_trace=trace,
        )
