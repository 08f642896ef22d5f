"""docbot: a document-grounded multi-turn chatbot engine."""

__version__ = "0.1.0"
