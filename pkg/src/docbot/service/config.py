"""Service configuration: a flat key=value file with env overrides.

Recognized keys (all optional):

    data_dir            = ./data
    listen              = 127.0.0.1:8080
    matcher_model       = path/to/model.dbm
    chitchat_model      = path/to/chitchat.dbm
    canned_responses    = path/to/responses.txt
    pos_lexicon         = path/to/lexicon.tsv
    abbreviations       = path/to/abbreviations.txt
    score_threshold     = 0.3
    retrieval_k         = 2
    session_ttl_seconds = 1800
    include_bot_turns   = true
    ui_dir              = path/to/frontend/dist

Lines starting with '#' are comments.  DOCBOT_LISTEN and DOCBOT_DATA_DIR
environment variables override the file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class ServiceConfig:
    data_dir: str = "./data"
    listen: str = "127.0.0.1:8080"
    matcher_model: str | None = None
    chitchat_model: str | None = None
    canned_responses: str | None = None
    pos_lexicon: str | None = None
    abbreviations: str | None = None
    score_threshold: float = 0.3
    retrieval_k: int = 2
    session_ttl_seconds: float = 1800.0
    include_bot_turns: bool = True
    ui_dir: str | None = None
    max_document_bytes: int = 1 << 20

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def _parse_bool(key: str, raw: str) -> bool:
    if raw.lower() in _TRUE:
        return True
    if raw.lower() in _FALSE:
        return False
    raise ConfigurationError(f"{key}: expected a boolean, got {raw!r}")


def load_config(path: str | Path | None = None) -> ServiceConfig:
    cfg = ServiceConfig()
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigurationError(f"config file not found: {p}")
        for n, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(f"{p}:{n}: expected 'key = value'")
            key, _, raw = line.partition("=")
            key, raw = key.strip(), raw.strip()
            try:
                _apply(cfg, key, raw)
            except ConfigurationError:
                raise
            except ValueError:
                raise ConfigurationError(f"{p}:{n}: bad value for {key}: {raw!r}") from None
    if os.environ.get("DOCBOT_LISTEN"):
        cfg.listen = os.environ["DOCBOT_LISTEN"]
    if os.environ.get("DOCBOT_DATA_DIR"):
        cfg.data_dir = os.environ["DOCBOT_DATA_DIR"]
    return cfg


def _apply(cfg: ServiceConfig, key: str, raw: str) -> None:
    if key == "data_dir":
        cfg.data_dir = raw
    elif key == "listen":
        cfg.listen = raw
    elif key == "matcher_model":
        cfg.matcher_model = raw or None
    elif key == "chitchat_model":
        cfg.chitchat_model = raw or None
    elif key == "canned_responses":
        cfg.canned_responses = raw or None
    elif key == "pos_lexicon":
        cfg.pos_lexicon = raw or None
    elif key == "abbreviations":
        cfg.abbreviations = raw or None
    elif key == "score_threshold":
        cfg.score_threshold = float(raw)
    elif key == "retrieval_k":
        cfg.retrieval_k = int(raw)
    elif key == "session_ttl_seconds":
        cfg.session_ttl_seconds = float(raw)
    elif key == "include_bot_turns":
        cfg.include_bot_turns = _parse_bool(key, raw)
    elif key == "ui_dir":
        cfg.ui_dir = raw or None
    elif key == "max_document_bytes":
        cfg.max_document_bytes = int(raw)
    else:
        raise ConfigurationError(f"unknown config key {key!r}")
