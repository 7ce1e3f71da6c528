"""Accuracy metrics, per-functionality delta reports, and hypothesis sweeps."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional, Sequence

from .backend import ScoringBackend
from .core import EngineError, Hypothesis, Label
from .datasets import FUNCTIONALITY_LABELS, LabeledExample
from .policy import PolicyDocument, build_pipeline, policy_hash
from .strategies import base_verdict, classify

# Appendix-style grouping expressions for the hypothesis sweep. Membership
# is a case-sensitive match anchored at a word boundary, so "is" groups the
# "X is Y." phrasings without also swallowing every "This ...".
GROUP_EXPRESSIONS = (
    "It",
    "This",
    "That",
    "hateful",
    "hateful content",
    "hate speech",
    "example",
    "text",
    "is",
    "contain",
)


@dataclass(frozen=True)
class Run:
    """One classifier pass over a dataset."""

    policy_hash: str
    dataset_name: str
    examples: tuple[LabeledExample, ...]
    predictions: tuple[Label, ...]

    def __post_init__(self) -> None:
        if len(self.examples) != len(self.predictions):
            raise EngineError("run has mismatched example and prediction counts")


@dataclass(frozen=True)
class EvalReport:
    policy_hash: str
    dataset_name: str
    overall_accuracy: float
    per_functionality: dict[str, float]
    confusion: tuple[int, int, int, int]  # tp, fp, tn, fn
    deltas_vs_baseline: Optional[dict[str, float]] = None
    baseline_policy_hash: Optional[str] = None

    def to_dict(self) -> dict:
        tp, fp, tn, fn = self.confusion
        return {
            "policy_hash": self.policy_hash,
            "baseline_policy_hash": self.baseline_policy_hash,
            "dataset_name": self.dataset_name,
            "overall_accuracy": self.overall_accuracy,
            "per_functionality": dict(sorted(self.per_functionality.items())),
            "deltas_vs_baseline": (
                dict(sorted(self.deltas_vs_baseline.items()))
                if self.deltas_vs_baseline is not None
                else None
            ),
            "confusion": {"tp": tp, "fp": fp, "tn": tn, "fn": fn},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def accuracy(predictions: Sequence, golds: Sequence) -> float:
    """Percentage of matching predictions. Full precision; round only for display."""
    if len(predictions) != len(golds):
        raise EngineError("accuracy: length mismatch")
    if not predictions:
        raise EngineError("accuracy: empty inputs")
    matches = sum(1 for p, g in zip(predictions, golds) if p == g)
    return 100.0 * matches / len(predictions)


def prf_metrics(
    predictions: Sequence[bool], golds: Sequence[bool]
) -> tuple[float, float, float, float]:
    """(accuracy, f1, recall, precision) in percent for a binary task.

    Degenerate convention: precision (and hence F1) is 0 when there are no
    positive predictions; recall is 0 when there are no gold positives.
    """
    if len(predictions) != len(golds):
        raise EngineError("prf_metrics: length mismatch")
    tp = sum(1 for p, g in zip(predictions, golds) if p and g)
    fp = sum(1 for p, g in zip(predictions, golds) if p and not g)
    fn = sum(1 for p, g in zip(predictions, golds) if not p and g)
    acc = accuracy(predictions, golds)
    precision = 100.0 * tp / (tp + fp) if (tp + fp) else 0.0
    recall = 100.0 * tp / (tp + fn) if (tp + fn) else 0.0
    f1 = (
        2 * precision * recall / (precision + recall)
        if (precision + recall) > 0
        else 0.0
    )
    return acc, f1, recall, precision


def run_policy(
    examples: Sequence[LabeledExample],
    doc: PolicyDocument,
    backend: ScoringBackend,
    dataset_name: str = "dataset",
) -> Run:
    """Classify every example under a policy."""
    pipeline = build_pipeline(doc)
    predictions = tuple(classify(e.text, pipeline, backend).label for e in examples)
    return Run(
        policy_hash=policy_hash(doc),
        dataset_name=dataset_name,
        examples=tuple(examples),
        predictions=predictions,
    )


def build_report(run: Run, baseline: Optional[Run] = None) -> EvalReport:
    """Report for one run, with signed pp deltas when a baseline is given."""
    golds = tuple(e.gold for e in run.examples)
    overall = accuracy(run.predictions, golds)
    tp = sum(1 for p, g in zip(run.predictions, golds) if p is Label.HATE and g is Label.HATE)
    fp = sum(1 for p, g in zip(run.predictions, golds) if p is Label.HATE and g is Label.NOT_HATE)
    tn = sum(
        1 for p, g in zip(run.predictions, golds) if p is Label.NOT_HATE and g is Label.NOT_HATE
    )
    fn = sum(1 for p, g in zip(run.predictions, golds) if p is Label.NOT_HATE and g is Label.HATE)

    per_functionality = _per_functionality_accuracy(run)
    deltas = None
    baseline_hash = None
    if baseline is not None:
        if tuple(e.id for e in baseline.examples) != tuple(e.id for e in run.examples):
            raise EngineError("baseline run covers a different example set")
        baseline_acc = _per_functionality_accuracy(baseline)
        deltas = {
            name: per_functionality[name] - baseline_acc[name] for name in per_functionality
        }
        deltas["overall"] = overall - accuracy(
            baseline.predictions, tuple(e.gold for e in baseline.examples)
        )
        baseline_hash = baseline.policy_hash
    return EvalReport(
        policy_hash=run.policy_hash,
        dataset_name=run.dataset_name,
        overall_accuracy=overall,
        per_functionality=per_functionality,
        confusion=(tp, fp, tn, fn),
        deltas_vs_baseline=deltas,
        baseline_policy_hash=baseline_hash,
    )


def per_functionality_report(run: Run, baseline: Run) -> EvalReport:
    """Delta report against a baseline over the identical example set."""
    return build_report(run, baseline)


def compare_hypotheses(
    examples: Sequence[LabeledExample],
    hypotheses: Sequence[Hypothesis],
    backend: ScoringBackend,
) -> tuple[list[tuple[Hypothesis, float]], dict[str, float]]:
    """Evaluate each hypothesis alone as the main hypothesis.

    Returns the (hypothesis, accuracy) list sorted by accuracy descending
    with lexicographic tie-breaking, plus the grouped averages over the
    fixed expression list.
    """
    if not hypotheses:
        raise EngineError("compare_hypotheses: no hypotheses given")
    golds = tuple(e.gold for e in examples)
    scored: list[tuple[Hypothesis, float]] = []
    for hypothesis in hypotheses:
        predictions = tuple(
            base_verdict(e.text, hypothesis, backend).label for e in examples
        )
        scored.append((hypothesis, accuracy(predictions, golds)))
    scored.sort(key=lambda item: (-item[1], item[0].text))

    averages: dict[str, float] = {}
    for expression in GROUP_EXPRESSIONS:
        pattern = re.compile(r"\b" + re.escape(expression))
        members = [acc for hyp, acc in scored if pattern.search(hyp.text)]
        if members:
            averages[expression] = sum(members) / len(members)
    return scored, averages


def _per_functionality_accuracy(run: Run) -> dict[str, float]:
    buckets: dict[str, list[tuple[Label, Label]]] = {}
    for example, prediction in zip(run.examples, run.predictions):
        name = example.functionality or "all"
        buckets.setdefault(name, []).append((prediction, example.gold))
    return {
        name: accuracy([p for p, _ in pairs], [g for _, g in pairs])
        for name, pairs in buckets.items()
    }


def functionality_sort_key(name: str) -> tuple[int, str]:
    label = FUNCTIONALITY_LABELS.get(name)
    if label is not None:
        return (int(label[1:]), name)
    return (1000, name)


def render_report(report: EvalReport) -> str:
    """Human-readable table, one-decimal accuracies (full precision in JSON)."""
    lines = [
        f"dataset: {report.dataset_name}",
        f"policy:  {report.policy_hash[:12]}",
        f"overall accuracy: {report.overall_accuracy:.1f}",
        "",
    ]
    has_deltas = report.deltas_vs_baseline is not None
    header = f"{'functionality':<44}{'acc':>8}" + ("{:>8}".format("delta") if has_deltas else "")
    lines.append(header)
    for name in sorted(report.per_functionality, key=functionality_sort_key):
        label = FUNCTIONALITY_LABELS.get(name)
        shown = f"{label}: {name}" if label else name
        row = f"{shown:<44}{report.per_functionality[name]:>8.1f}"
        if has_deltas:
            assert report.deltas_vs_baseline is not None
            row += f"{report.deltas_vs_baseline[name]:>+8.1f}"
        lines.append(row)
    if has_deltas:
        assert report.deltas_vs_baseline is not None
        lines.append(
            f"{'overall':<44}{report.overall_accuracy:>8.1f}"
            f"{report.deltas_vs_baseline['overall']:>+8.1f}"
        )
    return "\n".join(lines)


def render_sweep(
    ranked: list[tuple[Hypothesis, float]], averages: dict[str, float]
) -> str:
    lines = [f"{'hypothesis':<44}{'acc':>8}"]
    for hypothesis, acc in ranked:
        lines.append(f"{hypothesis.text:<44}{acc:>8.1f}")
    lines.append("")
    for expression in GROUP_EXPRESSIONS:
        if expression in averages:
            lines.append(f"{'average: ' + expression:<44}{averages[expression]:>8.1f}")
    return "\n".join(lines)
