#!/usr/bin/env python3
"""Regenerate the committed fixtures.

Produces, under fixtures/:

* hatecheck_synth.csv, ethos_synth.csv — the deterministic stand-in corpora,
* scores.jsonl — every (premise, hypothesis) score the reports depend on,
  produced by the deterministic pseudo-scorer and keyed by digest,
* reports/hatecheck-baseline.json, reports/hatecheck-all.json — evaluation
  reports that must be byte-identical when replayed from scores.jsonl.

Run from the repository root: python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from nlishield.backend import CachedBackend, HashBackend, ScoreCache
from nlishield.datasets import load_hatecheck
from nlishield.devdata import write_ethos_csv, write_hatecheck_csv
from nlishield.evaluation import build_report, run_policy
from nlishield.policy import load_policy


def main() -> int:
    fixtures = ROOT / "fixtures"
    reports = fixtures / "reports"
    reports.mkdir(parents=True, exist_ok=True)

    hatecheck_csv = write_hatecheck_csv(fixtures / "hatecheck_synth.csv")
    write_ethos_csv(fixtures / "ethos_synth.csv")

    scores_path = fixtures / "scores.jsonl"
    if scores_path.exists():
        scores_path.unlink()
    backend = CachedBackend(HashBackend(), ScoreCache(scores_path))

    examples = load_hatecheck(hatecheck_csv)
    baseline_run = run_policy(
        examples, load_policy("hatecheck-baseline"), backend, dataset_name="hatecheck"
    )
    all_run = run_policy(
        examples, load_policy("hatecheck-all"), backend, dataset_name="hatecheck"
    )

    baseline_report = build_report(baseline_run)
    all_report = build_report(all_run, baseline=baseline_run)

    (reports / "hatecheck-baseline.json").write_text(
        baseline_report.to_json(), encoding="utf-8"
    )
    (reports / "hatecheck-all.json").write_text(all_report.to_json(), encoding="utf-8")

    print(f"wrote {scores_path} ({sum(1 for _ in scores_path.open())} scores)")
    print(f"baseline accuracy: {baseline_report.overall_accuracy:.2f}")
    print(f"all-strategies accuracy: {all_report.overall_accuracy:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
