"""Durable document store: preprocessed sentences as JSON plus a
serialized per-document index, reloaded on startup.  Sessions are not
persisted (documented volatility)."""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path

from ..candidates import extract_triples
from ..errors import DataError
from ..retrieval import SentenceIndex, build_index, load_index, save_index
from ..textprep import PosTagger, RawDocument, Sentence, Token, load_abbreviations, preprocess_document


@dataclass
class DocumentRecord:
    doc_id: str
    title: str | None
    text: str
    sentences: list[Sentence]
    n_triples: int


def _sentence_to_json(s: Sentence) -> dict:
    return {
        "index": s.index,
        "text": s.text,
        "tokens": [{"surface": t.surface, "pos": t.pos, "span": list(t.char_span)} for t in s.tokens],
    }


def _sentence_from_json(doc_id: str, obj: dict) -> Sentence:
    tokens = [
        Token(surface=t["surface"], char_span=(t["span"][0], t["span"][1]), pos=t["pos"])
        for t in obj["tokens"]
    ]
    return Sentence(doc_id=doc_id, index=obj["index"], text=obj["text"], tokens=tokens)


class DocumentStore:
    def __init__(
        self,
        data_dir: str | Path,
        tagger: PosTagger | None = None,
        abbreviations: tuple[str, ...] | None = None,
    ):
        self._dir = Path(data_dir)
        (self._dir / "documents").mkdir(parents=True, exist_ok=True)
        (self._dir / "index").mkdir(parents=True, exist_ok=True)
        self._tagger = tagger or PosTagger.from_file()
        self._abbrev = abbreviations if abbreviations is not None else load_abbreviations()
        self._docs: dict[str, DocumentRecord] = {}
        self._indexes: dict[tuple[str, ...], SentenceIndex] = {}
        self._lock = threading.Lock()
        self._load_existing()

    def _doc_path(self, doc_id: str) -> Path:
        return self._dir / "documents" / f"{doc_id}.json"

    def _index_path(self, doc_id: str) -> Path:
        return self._dir / "index" / f"{doc_id}.dbix"

    def _load_existing(self) -> None:
        for path in sorted((self._dir / "documents").glob("*.json")):
            obj = json.loads(path.read_text(encoding="utf-8"))
            doc_id = obj["doc_id"]
            sentences = [_sentence_from_json(doc_id, s) for s in obj["sentences"]]
            record = DocumentRecord(
                doc_id=doc_id,
                title=obj.get("title"),
                text=obj["text"],
                sentences=sentences,
                n_triples=obj["n_triples"],
            )
            self._docs[doc_id] = record
            index_path = self._index_path(doc_id)
            if index_path.is_file():
                by_index = {s.index: s for s in sentences}
                self._indexes[(doc_id,)] = load_index(
                    index_path, lambda d, i, m=by_index: m[i]
                )

    def ingest(self, text: str, title: str | None = None) -> DocumentRecord:
        doc_id = hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]
        with self._lock:
            if doc_id in self._docs:
                return self._docs[doc_id]
            doc = RawDocument(doc_id=doc_id, text=text, title=title)
            sentences = preprocess_document(doc, self._tagger, self._abbrev)
            if not sentences:
                raise DataError("document produced no sentences")
            n_triples = sum(len(extract_triples(s)) for s in sentences)
            record = DocumentRecord(
                doc_id=doc_id, title=title, text=text, sentences=sentences, n_triples=n_triples
            )
            index = build_index(sentences)
            self._doc_path(doc_id).write_text(
                json.dumps(
                    {
                        "doc_id": doc_id,
                        "title": title,
                        "text": text,
                        "n_triples": n_triples,
                        "sentences": [_sentence_to_json(s) for s in sentences],
                    },
                    ensure_ascii=False,
                ),
                encoding="utf-8",
            )
            save_index(index, self._index_path(doc_id))
            self._docs[doc_id] = record
            self._indexes[(doc_id,)] = index
            return record

    def get(self, doc_id: str) -> DocumentRecord:
        record = self._docs.get(doc_id)
        if record is None:
            raise DataError(f"unknown document {doc_id!r}")
        return record

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def __len__(self) -> int:
        return len(self._docs)

    def ids(self) -> list[str]:
        return sorted(self._docs)

    def index_for(self, doc_ids: tuple[str, ...]) -> SentenceIndex | None:
        """Index over the union of the given documents' sentences (cached)."""
        key = tuple(sorted(set(doc_ids)))
        if not key:
            return None
        with self._lock:
            cached = self._indexes.get(key)
            if cached is not None:
                return cached
            sentences = []
            for doc_id in key:
                sentences.extend(self.get(doc_id).sentences)
            index = build_index(sentences)
            self._indexes[key] = index
            return index

    def rebuild_indexes(self) -> int:
        """Rebuild and re-persist every per-document index from stored text."""
        with self._lock:
            self._indexes.clear()
            for doc_id, record in self._docs.items():
                index = build_index(record.sentences)
                save_index(index, self._index_path(doc_id))
                self._indexes[(doc_id,)] = index
            return len(self._docs)
