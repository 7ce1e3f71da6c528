"""Zero-shot hate-speech detection by combining NLI entailment hypotheses.

Input texts are scored as NLI premises against a main hypothesis claiming
the text contains hate speech, plus supporting hypotheses (targets,
stance, self-directedness, sentiment, animal comparisons) that declarative
strategy rules combine into a final verdict with a full decision trace.
"""

from .core import (
    BinaryDecision,
    DecisionValue,
    EngineError,
    Hypothesis,
    HypothesisRole,
    InputText,
    Label,
    Premise,
    PremiseOrigin,
    ScoreTriple,
    TraceEntry,
    Verdict,
    decide,
    entailment_probability,
)
from .policy import PolicyDocument, build_pipeline, load_policy, parse_policy, policy_hash
from .strategies import Pipeline, StrategyConfig, classify

__all__ = [
    "BinaryDecision",
    "DecisionValue",
    "EngineError",
    "Hypothesis",
    "HypothesisRole",
    "InputText",
    "Label",
    "Pipeline",
    "PolicyDocument",
    "Premise",
    "PremiseOrigin",
    "ScoreTriple",
    "StrategyConfig",
    "TraceEntry",
    "Verdict",
    "build_pipeline",
    "classify",
    "decide",
    "entailment_probability",
    "load_policy",
    "parse_policy",
    "policy_hash",
]

__version__ = "0.1.0"
