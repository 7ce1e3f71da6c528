"""Declarative policy documents: parsing, validation, serialization.

The policy format is line oriented. Scalar keys take `key: value`; list
keys take `key:` followed by indented `- item` lines:

    # hate-speech policy
    model_id: facebook/bart-large-mnli
    main_hypothesis: That contains hate speech.
    threshold_default: 0.5
    strategies:
      - fbt groups
      - fcs
      - frs
      - cdc
    threshold_overrides:
      - frs:self = 0.7
    quote_chars:
      - " "
      - “ ”
    supporting_overrides:
      - frs: This text is about myself. | This text is about us.

See docs/policy-format.md for the full grammar. Parsing either succeeds
with every default filled in or fails with a line/column diagnostic;
semantic problems are reported by `validate_policy` instead.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .core import EngineError, Hypothesis, HypothesisRole, PLACEHOLDER
from .hypotheses import (
    FBT_FLAVORS,
    MAIN_HYPOTHESIS_DEFAULT,
    STANCE_HYPOTHESIS_DEFAULT,
    render_stance_hypothesis,
    supporting_set,
)
from .segmentation import DEFAULT_QUOTE_PAIRS
from .strategies import CANONICAL_ORDER, FCS_VARIANTS, Pipeline, StrategyConfig

DEFAULT_MODEL_ID = "facebook/bart-large-mnli"

SCALAR_KEYS = ("model_id", "main_hypothesis", "threshold_default")
LIST_KEYS = ("strategies", "threshold_overrides", "quote_chars", "supporting_overrides")


class PolicyError(EngineError):
    """A policy document could not be parsed."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class PolicyDocument:
    """A parsed, default-filled policy."""

    model_id: str = DEFAULT_MODEL_ID
    main_hypothesis: str = MAIN_HYPOTHESIS_DEFAULT
    threshold_default: float = 0.5
    threshold_overrides: tuple[tuple[str, float], ...] = ()
    strategies: StrategyConfig = StrategyConfig()
    supporting_overrides: tuple[tuple[str, tuple[str, ...]], ...] = ()
    quote_chars: tuple[tuple[str, str], ...] = DEFAULT_QUOTE_PAIRS

    def override_for(self, strategy: str) -> Optional[tuple[str, ...]]:
        for name, texts in self.supporting_overrides:
            if name == strategy:
                return texts
        return None


def parse_policy(document: str) -> PolicyDocument:
    """Parse a policy document, applying defaults for absent keys."""
    scalars: dict[str, str] = {}
    lists: dict[str, list[str]] = {}
    current_list: Optional[str] = None
    item_lines: dict[str, list[int]] = {}

    lines = document.splitlines()
    for lineno, raw_line in enumerate(lines, start=1):
        stripped = raw_line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if raw_line[0] in (" ", "\t"):
            if current_list is None:
                raise PolicyError("indented line outside a list key", lineno)
            indent = len(raw_line) - len(raw_line.lstrip())
            if not stripped.startswith("- "):
                raise PolicyError("list items must start with '- '", lineno, indent + 1)
            lists[current_list].append(stripped[2:].strip())
            item_lines[current_list].append(lineno)
            continue
        current_list = None
        match = re.match(r"^([A-Za-z_][A-Za-z0-9_]*):(.*)$", raw_line)
        if match is None:
            raise PolicyError("expected 'key: value' or 'key:'", lineno)
        key, rest = match.group(1), match.group(2).strip()
        if key in SCALAR_KEYS:
            if key in scalars:
                raise PolicyError(f"duplicate key {key!r}", lineno)
            if not rest:
                raise PolicyError(f"key {key!r} requires a value", lineno)
            scalars[key] = rest
        elif key in LIST_KEYS:
            if key in lists:
                raise PolicyError(f"duplicate key {key!r}", lineno)
            if rest:
                raise PolicyError(f"list key {key!r} takes indented '- ' items", lineno)
            lists[key] = []
            item_lines[key] = []
            current_list = key
        else:
            raise PolicyError(f"unknown key {key!r}", lineno)

    threshold_default = _parse_threshold(
        scalars.get("threshold_default", "0.5"), _key_line(lines, "threshold_default")
    )
    main_hypothesis = scalars.get("main_hypothesis", MAIN_HYPOTHESIS_DEFAULT)
    if not main_hypothesis:
        raise PolicyError("main_hypothesis is empty", _key_line(lines, "main_hypothesis"))

    strategies = _parse_strategies(lists.get("strategies", []), item_lines.get("strategies", []))
    overrides = _parse_threshold_overrides(
        lists.get("threshold_overrides", []), item_lines.get("threshold_overrides", [])
    )
    quote_chars = _parse_quote_chars(
        lists.get("quote_chars", []), item_lines.get("quote_chars", [])
    )
    supporting = _parse_supporting_overrides(
        lists.get("supporting_overrides", []), item_lines.get("supporting_overrides", [])
    )

    return PolicyDocument(
        model_id=scalars.get("model_id", DEFAULT_MODEL_ID),
        main_hypothesis=main_hypothesis,
        threshold_default=threshold_default,
        threshold_overrides=overrides,
        strategies=strategies,
        supporting_overrides=supporting,
        quote_chars=quote_chars,
    )


def serialize_policy(doc: PolicyDocument) -> str:
    """Canonical text form; `parse_policy(serialize_policy(d)) == d`."""
    out = [
        f"model_id: {doc.model_id}",
        f"main_hypothesis: {doc.main_hypothesis}",
        f"threshold_default: {doc.threshold_default!r}",
    ]
    if doc.strategies.enabled:
        out.append("strategies:")
        flavor = doc.strategies.fbt_flavor
        for name in doc.strategies.enabled:
            if name in ("fbt", "fcs_p1_fbt", "cdc") and flavor is not None:
                out.append(f"  - {name} {flavor}")
                flavor = None  # flavor only needs stating once
            else:
                out.append(f"  - {name}")
    if doc.threshold_overrides:
        out.append("threshold_overrides:")
        for tag, value in doc.threshold_overrides:
            out.append(f"  - {tag} = {value!r}")
    out.append("quote_chars:")
    for open_char, close_char in doc.quote_chars:
        out.append(f"  - {open_char} {close_char}")
    if doc.supporting_overrides:
        out.append("supporting_overrides:")
        for strategy, texts in doc.supporting_overrides:
            out.append(f"  - {strategy}: " + " | ".join(texts))
    return "\n".join(out) + "\n"


def policy_hash(doc: PolicyDocument) -> str:
    """Content hash of the canonical serialization; embedded in reports."""
    return hashlib.sha256(serialize_policy(doc).encode("utf-8")).hexdigest()


def validate_policy(doc: PolicyDocument) -> list[str]:
    """Semantic diagnostics; an empty list means the policy is executable."""
    diagnostics: list[str] = []
    enabled = doc.strategies.enabled
    variants = [n for n in enabled if n in FCS_VARIANTS]
    if len(variants) > 1:
        diagnostics.append("conflicting FCS variants: " + ", ".join(variants))
    if variants:
        stance_texts = doc.override_for("fcs") or (STANCE_HYPOTHESIS_DEFAULT,)
        for text in stance_texts:
            if text.count(PLACEHOLDER) != 1:
                diagnostics.append(
                    f"placeholder missing: stance hypothesis {text!r} must contain "
                    f"{PLACEHOLDER!r} exactly once"
                )
    needs_flavor = [n for n in enabled if n in ("cdc", "fcs_p1_fbt")]
    if needs_flavor and doc.strategies.fbt_flavor is None:
        diagnostics.append(
            f"{needs_flavor[0]} enabled without an FBT flavor (groups/characteristics)"
        )
    known = set(CANONICAL_ORDER) | {"fbt"}
    for strategy, _texts in doc.supporting_overrides:
        if strategy not in known:
            diagnostics.append(f"supporting override references unknown strategy {strategy!r}")
    return diagnostics


def build_pipeline(doc: PolicyDocument) -> Pipeline:
    """Resolve a document into an executable pipeline.

    Raises EngineError when the document does not validate.
    """
    problems = validate_policy(doc)
    if problems:
        raise EngineError("policy does not validate: " + "; ".join(problems))

    config = doc.strategies
    main = Hypothesis(text=doc.main_hypothesis, role=HypothesisRole.MAIN, tag="main")

    stance = None
    if config.fcs_variant is not None:
        stance_texts = doc.override_for("fcs")
        template = stance_texts[0] if stance_texts else STANCE_HYPOTHESIS_DEFAULT
        stance = render_stance_hypothesis(template)

    fbt_hypotheses: tuple[Hypothesis, ...] = ()
    if config.has("fbt") or config.has("cdc") or config.has("fcs_p1_fbt"):
        override = doc.override_for("fbt")
        if override is not None:
            fbt_hypotheses = _custom_hypotheses("fbt", override)
        else:
            fbt_hypotheses = supporting_set("fbt", config.fbt_flavor or "groups").hypotheses

    frs_hypothesis = None
    if config.has("frs"):
        override = doc.override_for("frs")
        if override is not None:
            frs_hypothesis = _custom_hypotheses("frs", override)[0]
        else:
            frs_hypothesis = supporting_set("frs").hypotheses[0]

    cdc_animals: tuple[Hypothesis, ...] = ()
    cdc_sentiment = None
    if config.has("cdc"):
        override = doc.override_for("cdc")
        if override is not None:
            custom = _custom_hypotheses("cdc", override)
            cdc_animals, cdc_sentiment = custom[:-1], custom[-1]
        else:
            full = supporting_set("cdc").hypotheses
            cdc_animals, cdc_sentiment = full[:-1], full[-1]

    return Pipeline(
        main=main,
        config=config,
        stance=stance,
        fbt_hypotheses=fbt_hypotheses,
        frs_hypothesis=frs_hypothesis,
        cdc_animals=cdc_animals,
        cdc_sentiment=cdc_sentiment,
        threshold_default=doc.threshold_default,
        threshold_overrides=dict(doc.threshold_overrides),
        quote_pairs=doc.quote_chars,
    )


def load_policy(name_or_path: str | Path) -> PolicyDocument:
    """Load a policy from a path, or by name from the shipped policy set."""
    path = Path(name_or_path)
    if not path.exists():
        shipped = Path(__file__).parent / "policies" / f"{name_or_path}.policy"
        if shipped.exists():
            path = shipped
        else:
            raise EngineError(f"policy not found: {name_or_path}")
    return parse_policy(path.read_text(encoding="utf-8"))


def _custom_hypotheses(strategy: str, texts: tuple[str, ...]) -> tuple[Hypothesis, ...]:
    hypotheses = []
    seen = set()
    for text in texts:
        slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
        tag = f"{strategy}:{slug}"
        if tag in seen:
            raise EngineError(f"duplicate hypothesis tag {tag!r}")
        seen.add(tag)
        hypotheses.append(Hypothesis(text=text, role=HypothesisRole.SUPPORTING, tag=tag))
    return tuple(hypotheses)


def _key_line(lines: list[str], key: str) -> int:
    for lineno, line in enumerate(lines, start=1):
        if line.startswith(f"{key}:"):
            return lineno
    return 1


def _parse_threshold(raw: str, lineno: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise PolicyError(f"not a number: {raw!r}", lineno) from None
    if not 0.0 <= value <= 1.0:
        raise PolicyError(f"threshold out of range [0, 1]: {value}", lineno)
    return value


def _parse_strategies(items: list[str], linenos: list[int]) -> StrategyConfig:
    enabled: list[str] = []
    flavor: Optional[str] = None
    for item, lineno in zip(items, linenos):
        tokens = item.split()
        if not tokens:
            raise PolicyError("empty strategy item", lineno)
        name = tokens[0]
        if name not in CANONICAL_ORDER:
            raise PolicyError(f"unknown strategy {name!r}", lineno)
        if name in enabled:
            raise PolicyError(f"strategy {name!r} listed twice", lineno)
        enabled.append(name)
        if len(tokens) > 2:
            raise PolicyError(f"too many tokens in strategy item {item!r}", lineno)
        if len(tokens) == 2:
            if name not in ("fbt", "cdc", "fcs_p1_fbt"):
                raise PolicyError(f"strategy {name!r} takes no flavor", lineno)
            if tokens[1] not in FBT_FLAVORS:
                raise PolicyError(f"unknown flavor {tokens[1]!r}", lineno)
            if flavor is not None and flavor != tokens[1]:
                raise PolicyError("conflicting FBT flavors", lineno)
            flavor = tokens[1]
    return StrategyConfig(enabled=tuple(enabled), fbt_flavor=flavor)


def _parse_threshold_overrides(
    items: list[str], linenos: list[int]
) -> tuple[tuple[str, float], ...]:
    overrides: list[tuple[str, float]] = []
    seen = set()
    for item, lineno in zip(items, linenos):
        if "=" not in item:
            raise PolicyError(f"expected 'tag = value': {item!r}", lineno)
        tag, _, raw_value = item.partition("=")
        tag = tag.strip()
        if not tag:
            raise PolicyError("empty hypothesis tag", lineno)
        if tag in seen:
            raise PolicyError(f"duplicate threshold override for {tag!r}", lineno)
        seen.add(tag)
        overrides.append((tag, _parse_threshold(raw_value.strip(), lineno)))
    return tuple(overrides)


def _parse_quote_chars(items: list[str], linenos: list[int]) -> tuple[tuple[str, str], ...]:
    if not items:
        return DEFAULT_QUOTE_PAIRS
    pairs: list[tuple[str, str]] = []
    for item, lineno in zip(items, linenos):
        tokens = item.split()
        if len(tokens) != 2 or len(tokens[0]) != 1 or len(tokens[1]) != 1:
            raise PolicyError(
                f"expected two quote characters separated by a space: {item!r}", lineno
            )
        pairs.append((tokens[0], tokens[1]))
    return tuple(pairs)


def _parse_supporting_overrides(
    items: list[str], linenos: list[int]
) -> tuple[tuple[str, tuple[str, ...]], ...]:
    overrides: list[tuple[str, tuple[str, ...]]] = []
    seen = set()
    for item, lineno in zip(items, linenos):
        strategy, sep, rest = item.partition(":")
        strategy = strategy.strip()
        if not sep or not strategy:
            raise PolicyError(f"expected 'strategy: hyp | hyp | ...': {item!r}", lineno)
        if strategy in seen:
            raise PolicyError(f"duplicate supporting override for {strategy!r}", lineno)
        seen.add(strategy)
        texts = tuple(t.strip() for t in rest.split("|") if t.strip())
        if not texts:
            raise PolicyError(f"supporting override for {strategy!r} has no hypotheses", lineno)
        overrides.append((strategy, texts))
    return tuple(overrides)
