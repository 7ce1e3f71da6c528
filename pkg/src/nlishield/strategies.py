"""The base classifier, the four combination strategies, and their pipeline.

Pipeline order is fixed:

1. the enabled counterspeech (FCS) variant; when the input contains a
   quote, its verdict is final,
2. the base verdict from the main hypothesis,
3. the target filter (FBT): hate -> not_hate when no target is present,
4. the reclaimed-slur filter (FRS): hate -> not_hate when self-directed,
5. the dehumanizing-comparison promotion (CDC): not_hate -> hate, applied
   only when the base verdict (before any filter) was not_hate.

Filters never flip not_hate to hate; the promotion never flips hate to
not_hate. OR-groups short-circuit; the trace records the consulted subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .backend import ScoringBackend
from .core import (
    BinaryDecision,
    Hypothesis,
    InputText,
    InvariantError,
    Label,
    Premise,
    PremiseOrigin,
    TraceEntry,
    Verdict,
    decide,
    entailment_probability,
)
from .segmentation import DEFAULT_QUOTE_PAIRS, split_quotes

FCS_VARIANTS = ("fcs", "fcs_p1", "fcs_p1_fbt")
CANONICAL_ORDER = ("fcs", "fcs_p1", "fcs_p1_fbt", "fbt", "frs", "cdc")


@dataclass(frozen=True)
class StrategyConfig:
    """Which strategies run, in canonical pipeline order."""

    enabled: tuple[str, ...] = ()
    fbt_flavor: Optional[str] = None

    def __post_init__(self) -> None:
        for name in self.enabled:
            if name not in CANONICAL_ORDER:
                raise ValueError(f"unknown strategy: {name!r}")
        ordered = tuple(n for n in CANONICAL_ORDER if n in self.enabled)
        object.__setattr__(self, "enabled", ordered)

    @property
    def fcs_variant(self) -> Optional[str]:
        variants = [n for n in self.enabled if n in FCS_VARIANTS]
        return variants[0] if variants else None

    def has(self, name: str) -> bool:
        return name in self.enabled


@dataclass(frozen=True)
class RuleOutcome:
    """Trace-level record of one rule application."""

    rule: str
    fired: bool
    inputs: tuple[tuple[str, BinaryDecision], ...]
    effect: str = "none"  # "none" | "force_hate" | "force_not_hate"

    def __post_init__(self) -> None:
        if not self.fired and self.effect != "none":
            raise InvariantError("a rule that did not fire cannot have an effect")


@dataclass(frozen=True)
class Pipeline:
    """A fully resolved classification pipeline.

    This is the executable form of a policy document: concrete hypothesis
    objects, thresholds, and strategy switches.
    """

    main: Hypothesis
    config: StrategyConfig = StrategyConfig()
    stance: Optional[Hypothesis] = None
    fbt_hypotheses: tuple[Hypothesis, ...] = ()
    frs_hypothesis: Optional[Hypothesis] = None
    cdc_animals: tuple[Hypothesis, ...] = ()
    cdc_sentiment: Optional[Hypothesis] = None
    threshold_default: float = 0.5
    threshold_overrides: dict[str, float] = field(default_factory=dict)
    quote_pairs: tuple[tuple[str, str], ...] = DEFAULT_QUOTE_PAIRS


class Scorer:
    """Scores pairs through a backend, thresholds them, and records the trace."""

    def __init__(self, backend: ScoringBackend, pipeline: Pipeline):
        self.backend = backend
        self.pipeline = pipeline
        self.entries: list[TraceEntry] = []

    def threshold_for(self, tag: str) -> float:
        return self.pipeline.threshold_overrides.get(tag, self.pipeline.threshold_default)

    def consult(self, premise: Premise, hypothesis: Hypothesis) -> BinaryDecision:
        triple = self.backend.score_pair(premise, hypothesis)
        probability = entailment_probability(triple)
        decision = decide(probability, self.threshold_for(hypothesis.tag))
        self.entries.append(
            TraceEntry(
                premise_origin=premise.origin,
                hypothesis_tag=hypothesis.tag,
                probability=probability,
                decision=decision,
            )
        )
        return decision

    @property
    def last_index(self) -> int:
        return len(self.entries) - 1

    def finish(self, label: Label, rule: str, entry_index: int) -> Verdict:
        entries = list(self.entries)
        entry = entries[entry_index]
        entries[entry_index] = TraceEntry(
            premise_origin=entry.premise_origin,
            hypothesis_tag=entry.hypothesis_tag,
            probability=entry.probability,
            decision=entry.decision,
            rule=rule,
        )
        return Verdict(label=label, trace=tuple(entries))


def any_entailed(
    scorer: Scorer, premise: Premise, hypotheses: Sequence[Hypothesis]
) -> bool:
    """Short-circuiting OR over a hypothesis group."""
    for hypothesis in hypotheses:
        if scorer.consult(premise, hypothesis).entailed:
            return True
    return False


def base_decision(scorer: Scorer, text: InputText) -> BinaryDecision:
    premise = Premise(text.raw, PremiseOrigin.WHOLE_TEXT)
    return scorer.consult(premise, scorer.pipeline.main)


def base_verdict(text: InputText, main: Hypothesis, backend: ScoringBackend) -> Verdict:
    """Classification with the main hypothesis only."""
    pipeline = Pipeline(main=main)
    scorer = Scorer(backend, pipeline)
    decision = base_decision(scorer, text)
    label = Label.HATE if decision.entailed else Label.NOT_HATE
    return scorer.finish(label, "base", scorer.last_index)


def _fcs_label(scorer: Scorer, text: InputText, variant: str) -> Optional[Label]:
    """Label from the enabled counterspeech variant, or None when no quote."""
    pipeline = scorer.pipeline
    if pipeline.stance is None:
        raise InvariantError("counterspeech strategy enabled without a stance hypothesis")
    split = split_quotes(text, pipeline.quote_pairs)
    if split is None:
        return None

    inner_hate = scorer.consult(split.inner, pipeline.main).entailed
    supported = inner_hate and scorer.consult(split.outer, pipeline.stance).entailed
    quoted_branch = inner_hate and supported

    if variant == "fcs":
        return Label.HATE if quoted_branch else Label.NOT_HATE

    if quoted_branch:
        return Label.HATE
    outer_hate = scorer.consult(split.outer, pipeline.main).entailed
    if variant == "fcs_p1":
        return Label.HATE if outer_hate else Label.NOT_HATE
    if variant == "fcs_p1_fbt":
        if outer_hate and any_entailed(scorer, split.outer, pipeline.fbt_hypotheses):
            return Label.HATE
        return Label.NOT_HATE
    raise InvariantError(f"unknown counterspeech variant: {variant!r}")


def apply_fcs(
    text: InputText, main: Hypothesis, stance: Hypothesis, backend: ScoringBackend
) -> Optional[Verdict]:
    """Counterspeech filtering; final verdict when a quote is present, else None."""
    return _run_fcs_variant(text, "fcs", main=main, stance=stance, backend=backend)


def apply_fcs_p1(
    text: InputText, main: Hypothesis, stance: Hypothesis, backend: ScoringBackend
) -> Optional[Verdict]:
    """Counterspeech variant that also tests the main claim on the outer text."""
    return _run_fcs_variant(text, "fcs_p1", main=main, stance=stance, backend=backend)


def apply_fcs_p1_fbt(
    text: InputText,
    main: Hypothesis,
    stance: Hypothesis,
    fbt_hypotheses: Sequence[Hypothesis],
    backend: ScoringBackend,
) -> Optional[Verdict]:
    """Counterspeech variant whose outer-text branch is gated by the target check."""
    return _run_fcs_variant(
        text,
        "fcs_p1_fbt",
        main=main,
        stance=stance,
        fbt_hypotheses=tuple(fbt_hypotheses),
        backend=backend,
    )


def _run_fcs_variant(
    text: InputText,
    variant: str,
    *,
    main: Hypothesis,
    stance: Hypothesis,
    backend: ScoringBackend,
    fbt_hypotheses: tuple[Hypothesis, ...] = (),
) -> Optional[Verdict]:
    pipeline = Pipeline(
        main=main,
        stance=stance,
        fbt_hypotheses=fbt_hypotheses,
        config=StrategyConfig(enabled=(variant,)),
    )
    scorer = Scorer(backend, pipeline)
    label = _fcs_label(scorer, text, variant)
    if label is None:
        return None
    return scorer.finish(label, variant, scorer.last_index)


def apply_fbt(
    text: InputText,
    verdict: Verdict,
    fbt_hypotheses: Sequence[Hypothesis],
    backend: ScoringBackend,
) -> Verdict:
    """Override hate -> not_hate when no protected target is present."""
    if verdict.label is Label.NOT_HATE:
        return verdict
    pipeline = Pipeline(main=_main_of(verdict, fbt_hypotheses), fbt_hypotheses=tuple(fbt_hypotheses))
    scorer = Scorer(backend, pipeline)
    premise = Premise(text.raw, PremiseOrigin.WHOLE_TEXT)
    if any_entailed(scorer, premise, fbt_hypotheses):
        return _extend_trace(verdict, scorer.entries)
    return _extend_trace(verdict, scorer.entries, new_label=Label.NOT_HATE, rule="fbt")


def apply_frs(
    text: InputText, verdict: Verdict, self_hypothesis: Hypothesis, backend: ScoringBackend
) -> Verdict:
    """Override hate -> not_hate when the text is predicted self-directed."""
    if verdict.label is Label.NOT_HATE:
        return verdict
    scorer = Scorer(backend, Pipeline(main=_main_of(verdict, [self_hypothesis])))
    premise = Premise(text.raw, PremiseOrigin.WHOLE_TEXT)
    if scorer.consult(premise, self_hypothesis).entailed:
        return _extend_trace(verdict, scorer.entries, new_label=Label.NOT_HATE, rule="frs")
    return _extend_trace(verdict, scorer.entries)


def apply_cdc(
    text: InputText,
    verdict: Verdict,
    fbt_hypotheses: Sequence[Hypothesis],
    animal_hypotheses: Sequence[Hypothesis],
    sentiment_hypothesis: Hypothesis,
    backend: ScoringBackend,
) -> Verdict:
    """Promote not_hate -> hate for dehumanizing comparisons.

    Requires a protected target, negative sentiment, and at least one
    entailed animal-comparison hypothesis.
    """
    if verdict.label is Label.HATE:
        return verdict
    scorer = Scorer(backend, Pipeline(main=_main_of(verdict, fbt_hypotheses)))
    premise = Premise(text.raw, PremiseOrigin.WHOLE_TEXT)
    fired = (
        any_entailed(scorer, premise, fbt_hypotheses)
        and scorer.consult(premise, sentiment_hypothesis).entailed
        and any_entailed(scorer, premise, animal_hypotheses)
    )
    if fired:
        return _extend_trace(verdict, scorer.entries, new_label=Label.HATE, rule="cdc")
    return _extend_trace(verdict, scorer.entries)


def classify(text: InputText, pipeline: Pipeline, backend: ScoringBackend) -> Verdict:
    """Run the full strategy pipeline for one input."""
    config = pipeline.config
    scorer = Scorer(backend, pipeline)

    variant = config.fcs_variant
    if variant is not None:
        label = _fcs_label(scorer, text, variant)
        if label is not None:
            return scorer.finish(label, variant, scorer.last_index)

    premise = Premise(text.raw, PremiseOrigin.WHOLE_TEXT)
    base = base_decision(scorer, text)
    base_label = Label.HATE if base.entailed else Label.NOT_HATE
    label = base_label
    finalizer = ("base", scorer.last_index)

    if config.has("fbt") and label is Label.HATE:
        if not any_entailed(scorer, premise, pipeline.fbt_hypotheses):
            label = Label.NOT_HATE
            finalizer = ("fbt", scorer.last_index)

    if config.has("frs") and label is Label.HATE:
        if pipeline.frs_hypothesis is None:
            raise InvariantError("frs enabled without a self-directedness hypothesis")
        if scorer.consult(premise, pipeline.frs_hypothesis).entailed:
            label = Label.NOT_HATE
            finalizer = ("frs", scorer.last_index)

    # CDC consults the pre-filter base verdict: a hate verdict suppressed by a
    # filter is not re-promoted.
    if config.has("cdc") and base_label is Label.NOT_HATE:
        if pipeline.cdc_sentiment is None:
            raise InvariantError("cdc enabled without a sentiment hypothesis")
        if (
            any_entailed(scorer, premise, pipeline.fbt_hypotheses)
            and scorer.consult(premise, pipeline.cdc_sentiment).entailed
            and any_entailed(scorer, premise, pipeline.cdc_animals)
        ):
            label = Label.HATE
            finalizer = ("cdc", scorer.last_index)

    rule, index = finalizer
    return scorer.finish(label, rule, index)


def _main_of(verdict: Verdict, hypotheses: Sequence[Hypothesis]) -> Hypothesis:
    # Standalone rule application needs a Pipeline; any hypothesis serves as
    # the (unused) main slot.
    del verdict
    return next(iter(hypotheses))


def _extend_trace(
    verdict: Verdict,
    new_entries: list[TraceEntry],
    *,
    new_label: Optional[Label] = None,
    rule: Optional[str] = None,
) -> Verdict:
    """Append rule consultations to an existing verdict's trace.

    When the rule fired (`rule` given), the finalizer marker moves from the
    old trace onto the last new entry.
    """
    if rule is None:
        return Verdict(label=verdict.label, trace=verdict.trace + tuple(new_entries))
    stripped = tuple(
        TraceEntry(e.premise_origin, e.hypothesis_tag, e.probability, e.decision, None)
        for e in verdict.trace
    )
    entries = list(new_entries)
    last = entries[-1]
    entries[-1] = TraceEntry(
        last.premise_origin, last.hypothesis_tag, last.probability, last.decision, rule
    )
    assert new_label is not None
    return Verdict(label=new_label, trace=stripped + tuple(entries))
