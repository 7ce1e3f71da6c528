"""Command-line entry point.

Exit codes: 0 success, 1 configuration/input error, 2 backend/transport
error, 3 internal invariant violation.
"""

from __future__ import annotations

import dataclasses
import functools
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import click

from .backend import (
    BackendError,
    CachedBackend,
    FixtureBackend,
    HttpBackend,
    MockBackend,
    MockRuleTable,
    ScoreCache,
    ScoringBackend,
)
from .core import EngineError, Hypothesis, HypothesisRole, InputText, InvariantError
from .datasets import (
    COUNTER_QUOTE_FUNCTIONALITY,
    LabeledExample,
    SUPPORTING_TASK_NAMES,
    infer_supporting_labels,
    load_ethos_binary,
    load_generic_csv,
    load_hatecheck,
)
from .evaluation import (
    build_report,
    compare_hypotheses,
    prf_metrics,
    render_report,
    render_sweep,
    run_policy,
)
from .hypotheses import generate_main_hypotheses
from .policy import PolicyDocument, build_pipeline, load_policy, policy_hash
from .segmentation import split_quotes
from .strategies import classify
from .core import decide, entailment_probability

ENDPOINT_ENV_VAR = "NLISHIELD_ENDPOINT"

EXIT_CONFIG_ERROR = 1
EXIT_BACKEND_ERROR = 2
EXIT_INVARIANT_ERROR = 3


class ConfigError(EngineError):
    """Bad flags, missing files, unusable policy: the user's problem to fix."""


def _mapped_exit(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except InvariantError as exc:
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(EXIT_INVARIANT_ERROR)
        except BackendError as exc:
            click.echo(f"backend error: {exc}", err=True)
            sys.exit(EXIT_BACKEND_ERROR)
        except (ConfigError, EngineError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG_ERROR)

    return wrapper


@dataclasses.dataclass(frozen=True)
class RunManifest:
    """Provenance record written next to every report."""

    command: str
    policy_path: Optional[str]
    policy_hash: str
    dataset_path: Optional[str]
    dataset_sha256: Optional[str]
    backend: str
    cache_path: Optional[str]
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2) + "\n"


def make_backend(
    spec: Optional[str], model_id: str, cache_path: Optional[str]
) -> ScoringBackend:
    """Build a backend from a `--backend` flag value.

    Accepted forms: an http(s) URL, `fixture:PATH`, `mock:PATH`. With no
    flag, the endpoint environment variable is used.
    """
    if spec is None:
        spec = os.environ.get(ENDPOINT_ENV_VAR)
        if spec is None:
            raise ConfigError(
                f"no backend configured: pass --backend or set {ENDPOINT_ENV_VAR}"
            )
    backend: ScoringBackend
    if spec.startswith(("http://", "https://")):
        backend = HttpBackend(spec, model_id=model_id)
    elif spec.startswith("http:"):
        backend = HttpBackend(spec[len("http:") :], model_id=model_id)
    elif spec.startswith("fixture:"):
        path = Path(spec[len("fixture:") :])
        if not path.exists():
            raise ConfigError(f"fixture file not found: {path}")
        backend = FixtureBackend(path, model_id=model_id)
    elif spec.startswith("mock:"):
        path = Path(spec[len("mock:") :])
        if not path.exists():
            raise ConfigError(f"mock table file not found: {path}")
        backend = MockBackend(MockRuleTable.from_file(path), model_id=model_id)
    else:
        raise ConfigError(f"unknown backend spec: {spec!r}")
    if cache_path is not None:
        backend = CachedBackend(backend, ScoreCache(cache_path))
    return backend


def load_dataset(spec: str) -> tuple[str, Path, list[LabeledExample]]:
    """Parse a `--dataset KIND:PATH` flag and load the examples."""
    kind, sep, raw_path = spec.partition(":")
    if not sep or kind not in ("hatecheck", "ethos", "csv"):
        raise ConfigError(
            f"dataset must be hatecheck:PATH, ethos:PATH, or csv:PATH, got {spec!r}"
        )
    path = Path(raw_path)
    if not path.exists():
        raise ConfigError(f"dataset file not found: {path}")
    loaders = {
        "hatecheck": load_hatecheck,
        "ethos": load_ethos_binary,
        "csv": load_generic_csv,
    }
    return kind, path, loaders[kind](path)


def _file_sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _resolve_policy(policy_flag: Optional[str]) -> tuple[Optional[str], PolicyDocument]:
    if policy_flag is None:
        return None, PolicyDocument()
    return policy_flag, load_policy(policy_flag)


def _write_report(
    report_path: str,
    report_json: str,
    *,
    command: str,
    policy_path: Optional[str],
    doc_hash: str,
    dataset_path: Optional[Path],
    backend_spec: str,
    cache_path: Optional[str],
) -> None:
    path = Path(report_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_json, encoding="utf-8")
    manifest = RunManifest(
        command=command,
        policy_path=policy_path,
        policy_hash=doc_hash,
        dataset_path=str(dataset_path) if dataset_path else None,
        dataset_sha256=_file_sha256(dataset_path) if dataset_path else None,
        backend=backend_spec,
        cache_path=cache_path,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    Path(str(path) + ".manifest.json").write_text(manifest.to_json(), encoding="utf-8")


backend_option = click.option("--backend", "backend_spec", default=None, help="http(s) URL, fixture:PATH, or mock:PATH")
cache_option = click.option("--cache", "cache_path", default=None, help="score cache JSONL path")
model_option = click.option("--model-id", default=None, help="override the policy's model id")


@click.group()
def main() -> None:
    """Zero-shot hate-speech detection via NLI entailment."""


@main.command("classify")
@click.option("--policy", "policy_flag", default=None, help="policy file or shipped policy name")
@click.option("--text", required=True)
@backend_option
@cache_option
@model_option
@_mapped_exit
def cmd_classify(policy_flag, text, backend_spec, cache_path, model_id) -> None:
    """Classify one text and print the label with its full decision trace."""
    _, doc = _resolve_policy(policy_flag)
    backend = make_backend(backend_spec, model_id or doc.model_id, cache_path)
    pipeline = build_pipeline(doc)
    verdict = classify(InputText(text), pipeline, backend)
    click.echo(f"label: {verdict.label.value}")
    click.echo("trace:")
    for entry in verdict.trace:
        fired = f"  <- {entry.rule}" if entry.rule else ""
        click.echo(
            f"  [{entry.premise_origin.value}] {entry.hypothesis_tag}: "
            f"p={entry.probability:.4f} {entry.decision.value}{fired}"
        )


@main.command("evaluate")
@click.option("--dataset", "dataset_spec", required=True, help="hatecheck:PATH | ethos:PATH | csv:PATH")
@click.option("--policy", "policy_flag", default=None)
@click.option("--baseline-policy", "baseline_flag", default=None)
@click.option("--report", "report_path", default=None, help="write the JSON report here")
@backend_option
@cache_option
@model_option
@_mapped_exit
def cmd_evaluate(dataset_spec, policy_flag, baseline_flag, report_path, backend_spec, cache_path, model_id) -> None:
    """Evaluate a policy over a dataset; optionally print deltas vs a baseline."""
    kind, dataset_path, examples = load_dataset(dataset_spec)
    policy_path, doc = _resolve_policy(policy_flag)
    backend = make_backend(backend_spec, model_id or doc.model_id, cache_path)
    run = run_policy(examples, doc, backend, dataset_name=kind)
    baseline_run = None
    if baseline_flag is not None:
        _, baseline_doc = _resolve_policy(baseline_flag)
        baseline_run = run_policy(examples, baseline_doc, backend, dataset_name=kind)
    report = build_report(run, baseline_run)
    click.echo(render_report(report))
    if report_path is not None:
        _write_report(
            report_path,
            report.to_json(),
            command="evaluate",
            policy_path=policy_path,
            doc_hash=policy_hash(doc),
            dataset_path=dataset_path,
            backend_spec=backend_spec or "",
            cache_path=cache_path,
        )


@main.command("sweep-hypotheses")
@click.option("--dataset", "dataset_spec", required=True)
@click.option("--hypotheses", "hypotheses_path", default=None, help="file with one hypothesis per line (default: the built-in grammar)")
@click.option("--report", "report_path", default=None)
@backend_option
@cache_option
@model_option
@_mapped_exit
def cmd_sweep_hypotheses(dataset_spec, hypotheses_path, report_path, backend_spec, cache_path, model_id) -> None:
    """Rank main-hypothesis candidates by standalone accuracy."""
    kind, dataset_path, examples = load_dataset(dataset_spec)
    backend = make_backend(backend_spec, model_id or PolicyDocument().model_id, cache_path)
    if hypotheses_path is None:
        hypotheses = generate_main_hypotheses()
    else:
        path = Path(hypotheses_path)
        if not path.exists():
            raise ConfigError(f"hypotheses file not found: {path}")
        lines = [line.strip() for line in path.read_text(encoding="utf-8").splitlines()]
        hypotheses = tuple(
            Hypothesis(text=line, role=HypothesisRole.MAIN, tag="main")
            for line in lines
            if line
        )
        if not hypotheses:
            raise ConfigError(f"hypotheses file is empty: {path}")
    ranked, averages = compare_hypotheses(examples, hypotheses, backend)
    click.echo(render_sweep(ranked, averages))
    if report_path is not None:
        payload = {
            "dataset_name": kind,
            "ranked": [{"hypothesis": h.text, "accuracy": a} for h, a in ranked],
            "group_averages": averages,
        }
        _write_report(
            report_path,
            json.dumps(payload, sort_keys=True, indent=2) + "\n",
            command="sweep-hypotheses",
            policy_path=None,
            doc_hash="",
            dataset_path=dataset_path,
            backend_spec=backend_spec or "",
            cache_path=cache_path,
        )


@main.command("eval-supporting")
@click.option("--dataset", "dataset_spec", required=True, help="hatecheck:PATH")
@click.option("--task", required=True, help="one of: " + ", ".join(SUPPORTING_TASK_NAMES))
@click.option("--hypotheses", "hypotheses_path", required=True, help="file with one hypothesis per line")
@backend_option
@cache_option
@model_option
@_mapped_exit
def cmd_eval_supporting(dataset_spec, task, hypotheses_path, backend_spec, cache_path, model_id) -> None:
    """Score supporting-hypothesis candidates against derived gold labels."""
    if task not in SUPPORTING_TASK_NAMES:
        raise ConfigError(f"unknown task {task!r}; choose from: {', '.join(SUPPORTING_TASK_NAMES)}")
    kind, _, examples = load_dataset(dataset_spec)
    if kind != "hatecheck":
        raise ConfigError("supporting tasks are derived from HateCheck annotations")
    path = Path(hypotheses_path)
    if not path.exists():
        raise ConfigError(f"hypotheses file not found: {path}")
    lines = [line.strip() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines:
        raise ConfigError(f"hypotheses file is empty: {path}")
    backend = make_backend(backend_spec, model_id or PolicyDocument().model_id, cache_path)
    task_labels = infer_supporting_labels(examples, task)

    if task == "stance-F20":
        _eval_stance(examples, lines, backend)
        return

    golds = [e.id in task_labels.positive_ids for e in examples]
    rows = []
    for text in lines:
        hypothesis = Hypothesis(text=text, role=HypothesisRole.SUPPORTING, tag="sweep")
        predictions = []
        for example in examples:
            triple = backend.score_pair(_whole(example), hypothesis)
            predictions.append(decide(entailment_probability(triple), 0.5).entailed)
        rows.append((text, prf_metrics(predictions, golds)))
    rows.sort(key=lambda row: (-row[1][1], row[0]))
    click.echo(f"{'hypothesis':<48}{'acc':>7}{'f1':>7}{'rec':>7}{'prec':>7}")
    for text, (acc, f1, recall, precision) in rows:
        click.echo(f"{text:<48}{acc:>7.1f}{f1:>7.1f}{recall:>7.1f}{precision:>7.1f}")


def _eval_stance(examples, lines, backend) -> None:
    """Stance task: quoted counterspeech only, gold is always `against`."""
    from .hypotheses import render_stance_hypothesis

    subset = [e for e in examples if e.functionality == COUNTER_QUOTE_FUNCTIONALITY]
    if not subset:
        raise ConfigError("dataset contains no quoted-counterspeech examples")
    rows = []
    for text in lines:
        hypothesis = render_stance_hypothesis(text)
        correct = 0
        total = 0
        for example in subset:
            split = split_quotes(example.text)
            if split is None:
                continue
            total += 1
            triple = backend.score_pair(split.outer, hypothesis)
            predicted_for = decide(entailment_probability(triple), 0.5).entailed
            if not predicted_for:  # gold stance is always against the quote
                correct += 1
        acc = 100.0 * correct / total if total else 0.0
        rows.append((text, acc))
    rows.sort(key=lambda row: (-row[1], row[0]))
    click.echo(f"{'hypothesis':<48}{'acc':>7}")
    for text, acc in rows:
        click.echo(f"{text:<48}{acc:>7.1f}")


def _whole(example: LabeledExample):
    from .core import Premise, PremiseOrigin

    return Premise(example.text.raw, PremiseOrigin.WHOLE_TEXT)


if __name__ == "__main__":
    main()
