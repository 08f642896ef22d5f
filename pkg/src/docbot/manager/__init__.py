from .manager import (
    ORIGIN_CHITCHAT,
    ORIGIN_MATCHED,
    CandidateScorer,
    DialogueManager,
    ManagerConfig,
    ResponseDecision,
    TraceEntry,
)
from .session import Session, SessionStore, Utterance

__all__ = [
    "CandidateScorer", "DialogueManager", "ManagerConfig", "ORIGIN_CHITCHAT",
    "ORIGIN_MATCHED", "ResponseDecision", "Session", "SessionStore",
    "TraceEntry", "Utterance",
]
