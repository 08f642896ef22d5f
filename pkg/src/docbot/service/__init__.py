from .app import ApiError, build_engine, create_app
from .config import ServiceConfig, load_config
from .storage import DocumentRecord, DocumentStore

__all__ = [
    "ApiError",
    "DocumentRecord",
    "DocumentStore",
    "ServiceConfig",
    "build_engine",
    "create_app",
    "load_config",
]
