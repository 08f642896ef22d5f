"""HTTP facade over the dialogue engine.

JSON over HTTP/1.1; every non-2xx body has the shape
{"status": int, "code": str, "message": str}.  The built web UI, when
present, is served statically at / with the API under /api.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..chitchat import CannedResponder, DecodeConfig, generate_reply, load_canned, load_seq2seq
from ..errors import SessionError
from ..manager import DialogueManager, ManagerConfig
from ..matcher import MatcherScorer, load_matcher
from ..retrieval import RetrievalConfig
from ..textprep import PosTagger, load_abbreviations
from .config import ServiceConfig
from .storage import DocumentStore


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message


class DocumentIn(BaseModel):
    text: str
    title: str | None = None


class DocumentOut(BaseModel):
    doc_id: str
    n_sentences: int
    n_triples: int


class SessionIn(BaseModel):
    doc_ids: list[str] = []


class SessionOut(BaseModel):
    session_id: str


class MessageIn(BaseModel):
    text: str


class TraceOut(BaseModel):
    text: str
    kind: str
    score: float


class MessageOut(BaseModel):
    reply: str
    origin: str
    score: float | None = None
    trace: list[TraceOut]


class UtteranceOut(BaseModel):
    role: str
    text: str
    timestamp: float


class HistoryOut(BaseModel):
    session_id: str
    doc_ids: list[str]
    history: list[UtteranceOut]


class HealthOut(BaseModel):
    status: str
    model_loaded: bool
    index_docs: int


class ConfigOut(BaseModel):
    score_threshold: float
    retrieval_k: int


def build_engine(config: ServiceConfig) -> tuple[DocumentStore, DialogueManager, bool]:
    tagger = PosTagger.from_file(config.pos_lexicon) if config.pos_lexicon else None
    abbreviations = load_abbreviations(config.abbreviations) if config.abbreviations else None
    store = DocumentStore(config.data_dir, tagger, abbreviations)
    scorer = None
    if config.matcher_model:
        params, vocab = load_matcher(config.matcher_model)
        scorer = MatcherScorer(params, vocab)
    if config.chitchat_model:
        seq2seq = load_seq2seq(config.chitchat_model)

        def chitchat(query: str) -> str:
            return generate_reply(query, seq2seq, DecodeConfig())

    else:
        responder = CannedResponder(load_canned(config.canned_responses))
        chitchat = responder.reply
    manager = DialogueManager(
        index_provider=store.index_for,
        scorer=scorer,
        chitchat=chitchat,
        config=ManagerConfig(
            score_threshold=config.score_threshold,
            retrieval=RetrievalConfig(k=config.retrieval_k),
            include_bot_turns=config.include_bot_turns,
        ),
    )
    return store, manager, scorer is not None


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store, manager, model_loaded = build_engine(config)
    app = FastAPI(title="docbot", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = store
    app.state.manager = manager
    app.state.model_loaded = model_loaded

    @app.exception_handler(ApiError)
    async def api_error_handler(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(_req: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"status": exc.status_code, "code": "http_error", "message": str(exc.detail)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"status": 400, "code": "bad_request", "message": str(exc.errors()[:1])},
        )

    def sweep() -> None:
        manager.expire_sessions(config.session_ttl_seconds)

    @app.post("/api/documents", response_model=DocumentOut)
    def ingest_document(body: DocumentIn):
        if not body.text.strip():
            raise ApiError(400, "bad_request", "document text must be non-empty")
        if len(body.text.encode("utf-8")) > config.max_document_bytes:
            raise ApiError(400, "bad_request", "document exceeds the size cap")
        record = store.ingest(body.text, body.title)
        return DocumentOut(
            doc_id=record.doc_id, n_sentences=len(record.sentences), n_triples=record.n_triples
        )

    @app.post("/api/sessions", response_model=SessionOut)
    def create_session(body: SessionIn):
        sweep()
        for doc_id in body.doc_ids:
            if doc_id not in store:
                raise ApiError(404, "doc_not_found", f"unknown document {doc_id!r}")
        session = manager.create_session(body.doc_ids)
        return SessionOut(session_id=session.session_id)

    @app.post("/api/sessions/{session_id}/messages", response_model=MessageOut)
    def post_message(session_id: str, body: MessageIn):
        sweep()
        try:
            decision = manager.handle_message(session_id, body.text)
        except SessionError as e:
            raise ApiError(404, "session_not_found", str(e)) from None
        return MessageOut(
            reply=decision.reply,
            origin=decision.origin,
            score=decision.score,
            trace=[TraceOut(text=t.text, kind=t.kind, score=t.score) for t in decision.candidate_trace],
        )

    @app.get("/api/sessions/{session_id}", response_model=HistoryOut)
    def get_session(session_id: str):
        sweep()
        try:
            session = manager.get_session(session_id)
        except SessionError as e:
            raise ApiError(404, "session_not_found", str(e)) from None
        return HistoryOut(
            session_id=session.session_id,
            doc_ids=list(session.doc_ids),
            history=[
                UtteranceOut(role=u.role, text=u.text, timestamp=u.timestamp)
                for u in session.history
            ],
        )

    @app.get("/api/health", response_model=HealthOut)
    def health():
        return HealthOut(status="ok", model_loaded=model_loaded, index_docs=len(store))

    @app.get("/api/config", response_model=ConfigOut)
    def get_config():
        return ConfigOut(score_threshold=config.score_threshold, retrieval_k=config.retrieval_k)

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")
    return app
