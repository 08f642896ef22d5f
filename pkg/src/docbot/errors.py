"""Exception hierarchy shared across the engine."""


class DocbotError(Exception):
    """Base class for all engine errors."""


class ConfigurationError(DocbotError):
    """Missing or malformed configuration (data files, config keys)."""


class DataError(DocbotError):
    """Malformed or inconsistent input data (corpora, documents, ids)."""


class ModelError(DocbotError):
    """Model files missing, corrupt, or unusable."""


class TrainingError(ModelError):
    """Training preconditions violated or training diverged."""


class ScoringError(ModelError):
    """Scoring called with unusable inputs (e.g. empty context)."""


class ShapeError(DocbotError):
    """Tensor shape mismatch; message names both shapes."""


class IndexBuildError(DataError):
    """Retrieval index cannot be built (e.g. empty corpus)."""


class SessionError(DocbotError):
    """Unknown or expired session."""


class EvaluationError(DataError):
    """Evaluation set violates the grouped-candidates contract."""
