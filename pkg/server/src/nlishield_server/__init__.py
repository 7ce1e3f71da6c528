"""NLI scoring server exposing the wire protocol over an MNLI cross-encoder."""

from .app import create_app
from .config import ServerConfig
from .scoring import Scorer, TransformersScorer, score_digest

__all__ = ["ServerConfig", "Scorer", "TransformersScorer", "create_app", "score_digest"]

__version__ = "0.1.0"
