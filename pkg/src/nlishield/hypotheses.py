"""Hypothesis templates: the main-claim grammar and the fixed supporting sets.

The main-claim grammar enumerates every phrasing of "this text contains
hate speech" built from a small set of building blocks, plus four fixed
subject-less forms. The supporting sets are the exact hypothesis lists
used by the four combination strategies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import EngineError, Hypothesis, HypothesisRole, PLACEHOLDER

MAIN_HYPOTHESIS_DEFAULT = "That contains hate speech."
STANCE_HYPOTHESIS_DEFAULT = "This text supports [X]."

STRATEGY_NAMES = ("fbt", "fcs", "frs", "cdc")
FBT_FLAVORS = ("groups", "characteristics")

_FBT_GROUPS = (
    ("women", "This text is about women."),
    ("trans-people", "This text is about trans people."),
    ("gay-people", "This text is about gay people."),
    ("black-people", "This text is about black people."),
    ("disabled-people", "This text is about disabled people."),
    ("muslims", "This text is about Muslims."),
    ("immigrants", "This text is about immigrants."),
)

_FBT_CHARACTERISTICS = (
    ("gender", "This text is about gender."),
    ("sexual-orientation", "This text is about sexual orientation."),
    ("race", "This text is about race."),
    ("ethnicity", "This text is about ethnicity."),
    ("disability", "This text is about disability."),
    ("religion", "This text is about religion."),
    ("national-origin", "This text is about national origin."),
)

_CDC_ANIMALS = (
    ("insects", "This text is about insects."),
    ("apes", "This text is about apes."),
    ("primates", "This text is about primates."),
    ("rats", "This text is about rats."),
    ("a-plague", "This text is about a plague."),
)

CDC_SENTIMENT_TEXT = "This text has a negative sentiment."
FRS_SELF_TEXT = "This text is about myself."


@dataclass(frozen=True)
class GrammarSpec:
    """Building blocks for the main-claim grammar.

    The generated set is the full cross product subject x noun x
    verb/predicate pair, plus the fixed `extra_forms`. Grammaticality is
    encoded in the verb/predicate pairing: "is" never takes "hateful
    content" and "contains" never takes bare "hateful".
    """

    subjects: tuple[str, ...] = ("It", "That", "This")
    subject_nouns: tuple[str, ...] = ("", "example", "text")
    verb_predicate_pairs: tuple[tuple[str, str], ...] = (
        ("is", "hate speech"),
        ("is", "hateful"),
        ("contains", "hate speech"),
        ("contains", "hateful content"),
    )
    extra_forms: tuple[str, ...] = (
        "Containing hate speech.",
        "Contains hate speech.",
        "Hate speech.",
        "Hateful.",
    )


@dataclass(frozen=True)
class SupportingSet:
    """The ordered supporting hypotheses backing one strategy."""

    strategy: str
    hypotheses: tuple[Hypothesis, ...]


def generate_main_hypotheses(spec: GrammarSpec = GrammarSpec()) -> tuple[Hypothesis, ...]:
    """Enumerate the main-claim grammar: deduplicated, sorted lexicographically."""
    texts = set(spec.extra_forms)
    for subject in spec.subjects:
        for noun in spec.subject_nouns:
            for verb, predicate in spec.verb_predicate_pairs:
                words = [subject] + ([noun] if noun else []) + [verb, predicate]
                texts.add(" ".join(words) + ".")
    return tuple(
        Hypothesis(text=text, role=HypothesisRole.MAIN, tag="main")
        for text in sorted(texts)
    )


def _supporting(strategy: str, items: tuple[tuple[str, str], ...]) -> tuple[Hypothesis, ...]:
    return tuple(
        Hypothesis(text=text, role=HypothesisRole.SUPPORTING, tag=f"{strategy}:{slug}")
        for slug, text in items
    )


def supporting_set(strategy: str, flavor: str | None = None) -> SupportingSet:
    """The fixed supporting-hypothesis list for a strategy.

    `flavor` selects between protected groups and protected characteristics
    and is only meaningful for the target check (FBT, and CDC's reuse of it).
    """
    if strategy == "fbt":
        if flavor == "characteristics":
            return SupportingSet("fbt", _supporting("fbt", _FBT_CHARACTERISTICS))
        if flavor in (None, "groups"):
            return SupportingSet("fbt", _supporting("fbt", _FBT_GROUPS))
        raise EngineError(f"unknown FBT flavor: {flavor!r}")
    if strategy == "fcs":
        return SupportingSet("fcs", (render_stance_hypothesis(STANCE_HYPOTHESIS_DEFAULT),))
    if strategy == "frs":
        return SupportingSet(
            "frs",
            (Hypothesis(text=FRS_SELF_TEXT, role=HypothesisRole.SUPPORTING, tag="frs:self"),),
        )
    if strategy == "cdc":
        animals = _supporting("cdc", _CDC_ANIMALS)
        sentiment = Hypothesis(
            text=CDC_SENTIMENT_TEXT, role=HypothesisRole.SUPPORTING, tag="cdc:sentiment"
        )
        return SupportingSet("cdc", animals + (sentiment,))
    raise EngineError(f"unknown strategy: {strategy!r}")


def render_stance_hypothesis(template: str) -> Hypothesis:
    """Validate a stance template; it must mention the placeholder exactly once."""
    if template.count(PLACEHOLDER) != 1:
        raise EngineError(
            f"stance hypothesis must contain {PLACEHOLDER!r} exactly once: {template!r}"
        )
    return Hypothesis(text=template, role=HypothesisRole.SUPPORTING, tag="fcs:stance")
