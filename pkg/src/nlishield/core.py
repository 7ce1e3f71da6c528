"""Shared value types and the two primitive decision operations.

Everything here is an immutable value object. The two operations at the
bottom (`entailment_probability`, `decide`) are the only places where raw
NLI class probabilities are turned into binary outcomes; every strategy
builds on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

PROB_SUM_TOLERANCE = 1e-6
PLACEHOLDER = "[X]"
SENTENCE_TERMINATORS = (".", "!", "?")


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateScoreError(EngineError):
    """Entailment and contradiction mass are both zero; no pairwise decision."""


class InvariantError(EngineError):
    """An internal consistency check failed (a bug, not a user error)."""


class PremiseOrigin(str, Enum):
    WHOLE_TEXT = "whole_text"
    QUOTED_INNER = "quoted_inner"
    OUTER_WITH_PLACEHOLDER = "outer_with_placeholder"


class HypothesisRole(str, Enum):
    MAIN = "main"
    SUPPORTING = "supporting"


class DecisionValue(str, Enum):
    ENTAIL = "entail"
    NOT_ENTAIL = "not_entail"


class Label(str, Enum):
    HATE = "hate"
    NOT_HATE = "not_hate"


@dataclass(frozen=True)
class InputText:
    """A raw input text to classify."""

    raw: str

    def __post_init__(self) -> None:
        if not self.raw.strip():
            raise ValueError("input text is empty")


@dataclass(frozen=True)
class Premise:
    """One premise derived from an input text.

    A premise with origin `outer_with_placeholder` must contain exactly one
    occurrence of the placeholder token standing in for the quoted segment.
    """

    text: str
    origin: PremiseOrigin = PremiseOrigin.WHOLE_TEXT

    def __post_init__(self) -> None:
        if self.origin is PremiseOrigin.OUTER_WITH_PLACEHOLDER:
            if self.text.count(PLACEHOLDER) != 1:
                raise ValueError(
                    f"outer premise must contain exactly one {PLACEHOLDER!r}: "
                    f"{self.text!r}"
                )


@dataclass(frozen=True)
class Hypothesis:
    """A templated claim scored against a premise.

    The tag identifies the hypothesis within a policy (e.g. "main",
    "fbt:women", "fcs:stance") and is the key for per-hypothesis threshold
    overrides and trace entries.
    """

    text: str
    role: HypothesisRole
    tag: str

    def __post_init__(self) -> None:
        if not self.text or not self.text.endswith(SENTENCE_TERMINATORS):
            raise ValueError(
                f"hypothesis must end with a sentence terminator: {self.text!r}"
            )


@dataclass(frozen=True)
class ScoreTriple:
    """Raw three-class NLI probabilities for one (premise, hypothesis) pair."""

    entailment: float
    neutral: float
    contradiction: float

    def __post_init__(self) -> None:
        for name in ("entailment", "neutral", "contradiction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} probability out of range: {value}")
        total = self.entailment + self.neutral + self.contradiction
        if abs(total - 1.0) > PROB_SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total}, expected 1.0")


@dataclass(frozen=True)
class BinaryDecision:
    """The thresholded outcome for one pair, keeping the probability used."""

    value: DecisionValue
    probability: float

    @property
    def entailed(self) -> bool:
        return self.value is DecisionValue.ENTAIL


@dataclass(frozen=True)
class TraceEntry:
    """One backend consultation recorded in a verdict trace."""

    premise_origin: PremiseOrigin
    hypothesis_tag: str
    probability: float
    decision: BinaryDecision
    rule: Optional[str] = None


@dataclass(frozen=True)
class Verdict:
    """Final binary label plus the full decision trace.

    Exactly one trace entry carries the name of the rule that finalized
    the label.
    """

    label: Label
    trace: tuple[TraceEntry, ...]

    def __post_init__(self) -> None:
        if not self.trace:
            raise InvariantError("verdict trace is empty")
        finalizers = [e for e in self.trace if e.rule is not None]
        if len(finalizers) != 1:
            raise InvariantError(
                f"expected exactly one finalizing trace entry, got {len(finalizers)}"
            )

    @property
    def finalizing_rule(self) -> str:
        entry = next(e for e in self.trace if e.rule is not None)
        assert entry.rule is not None
        return entry.rule


def entailment_probability(score: ScoreTriple) -> float:
    """Two-way renormalized entailment probability.

    Drops the neutral mass and renormalizes over entailment and
    contradiction. Because class probabilities are proportional to
    exponentiated logits, this equals a pairwise softmax over the
    entailment/contradiction logits.
    """
    denominator = score.entailment + score.contradiction
    if denominator <= 0.0:
        raise DegenerateScoreError("degenerate score: no entailment/contradiction mass")
    return score.entailment / denominator


def decide(probability: float, threshold: float) -> BinaryDecision:
    """Threshold a pairwise entailment probability into a binary decision.

    The comparison is an exact `>=`: a probability exactly at the threshold
    counts as entailment.
    """
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability out of range: {probability}")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold out of range: {threshold}")
    value = DecisionValue.ENTAIL if probability >= threshold else DecisionValue.NOT_ENTAIL
    return BinaryDecision(value=value, probability=probability)
