"""Acceptance suite: one test per release criterion.

Each criterion is verified against an independent oracle computed inside
the test, never against the implementation's own intermediate output. The
terminal summary (see conftest) prints one PASS/FAIL line per criterion.
"""

import itertools
import math
import random
import time
from pathlib import Path

import pytest

from nlishield.backend import (
    FixtureBackend,
    MockBackend,
    MockRule,
    MockRuleTable,
    ScoringBackend,
)
from nlishield.core import InputText, Label, ScoreTriple, entailment_probability
from nlishield.datasets import load_ethos_binary, load_hatecheck
from nlishield.evaluation import build_report, run_policy
from nlishield.hypotheses import generate_main_hypotheses
from nlishield.policy import (
    PolicyDocument,
    load_policy,
    parse_policy,
    serialize_policy,
    validate_policy,
)
from nlishield.segmentation import split_quotes
from nlishield.strategies import StrategyConfig, base_verdict, classify

from conftest import ENTAIL, NOT_ENTAIL
from test_strategies import make_pipeline

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

MAIN = "That contains hate speech."
TEXT = "the probe text"

# Boolean inputs of the non-quoted pipeline, in consultation order.
TAGS = (
    ("main", MAIN),
    ("fbt0", "This text is about women."),
    ("fbt1", "This text is about trans people."),
    ("fbt2", "This text is about gay people."),
    ("fbt3", "This text is about black people."),
    ("fbt4", "This text is about disabled people."),
    ("fbt5", "This text is about Muslims."),
    ("fbt6", "This text is about immigrants."),
    ("frs", "This text is about myself."),
    ("sent", "This text has a negative sentiment."),
    ("cdc0", "This text is about insects."),
    ("cdc1", "This text is about apes."),
    ("cdc2", "This text is about primates."),
    ("cdc3", "This text is about rats."),
    ("cdc4", "This text is about a plague."),
)


QUOTED_TEXT = 'say "bad stuff" now'
INNER = "bad stuff"
OUTER = "say [X] now"

STANCE = "This text supports [X]."
FBT_TEXTS = tuple(text for name, text in TAGS if name.startswith("fbt"))
CDC_TEXTS = tuple(text for name, text in TAGS if name.startswith("cdc"))

# Boolean variables per policy: name -> (premise, hypothesis) pair.
_PLAIN_VARS = {name: (TEXT, text) for name, text in TAGS}
_QUOTE_VARS = {
    "inner_main": (INNER, MAIN),
    "stance": (OUTER, STANCE),
    "outer_main": (OUTER, MAIN),
    **{f"ofbt{i}": (OUTER, text) for i, text in enumerate(FBT_TEXTS)},
}


def _any(assign, prefix, count):
    return any(assign[f"{prefix}{i}"] for i in range(count))


def _oracle_filters(assign, *, fbt=False, frs=False, cdc=False):
    """Brute-force restatement of the quote-free pipeline. True means hate."""
    base = assign["main"]
    label = base
    if fbt and label and not _any(assign, "fbt", 7):
        label = False
    if frs and label and assign["frs"]:
        label = False
    if cdc and not base and _any(assign, "fbt", 7) and assign["sent"] and _any(assign, "cdc", 5):
        label = True
    return label


def _oracle_fcs(assign, variant):
    """Brute-force counterspeech semantics on a quoted text. True means hate."""
    quoted_branch = assign["inner_main"] and assign["stance"]
    if variant == "fcs":
        return quoted_branch
    if quoted_branch:
        return True
    if variant == "fcs_p1":
        return assign["outer_main"]
    return assign["outer_main"] and _any(assign, "ofbt", 7)


# (policy name, input text, pipeline strategies, variable names, oracle)
_TRUTH_TABLES = (
    ("baseline", TEXT, (), ("main",), lambda a: a["main"]),
    ("fbt", TEXT, ("fbt",), ("main",) + tuple(f"fbt{i}" for i in range(7)),
     lambda a: _oracle_filters(a, fbt=True)),
    ("frs", TEXT, ("frs",), ("main", "frs"), lambda a: _oracle_filters(a, frs=True)),
    ("cdc", TEXT, ("cdc",),
     ("main", "sent") + tuple(f"fbt{i}" for i in range(7)) + tuple(f"cdc{i}" for i in range(5)),
     lambda a: _oracle_filters(a, cdc=True)),
    ("all", TEXT, ("fcs", "fbt", "frs", "cdc"), tuple(name for name, _ in TAGS),
     lambda a: _oracle_filters(a, fbt=True, frs=True, cdc=True)),
    ("fcs", QUOTED_TEXT, ("fcs",), ("inner_main", "stance"),
     lambda a: _oracle_fcs(a, "fcs")),
    ("fcs_p1", QUOTED_TEXT, ("fcs_p1",), ("inner_main", "stance", "outer_main"),
     lambda a: _oracle_fcs(a, "fcs_p1")),
    ("fcs_p1_fbt", QUOTED_TEXT, ("fcs_p1_fbt",),
     ("inner_main", "stance", "outer_main") + tuple(f"ofbt{i}" for i in range(7)),
     lambda a: _oracle_fcs(a, "fcs_p1_fbt")),
    ("all_quoted", QUOTED_TEXT, ("fcs", "fbt", "frs", "cdc"), ("inner_main", "stance"),
     lambda a: _oracle_fcs(a, "fcs")),
)


def _table_backend(assign: dict, variables: dict) -> MockBackend:
    entries = tuple(
        MockRule(
            premise_pattern=variables[name][0],
            premise_match="exact",
            hypothesis=variables[name][1],
            scores=ENTAIL if value else NOT_ENTAIL,
        )
        for name, value in assign.items()
    )
    return MockBackend(MockRuleTable(entries=entries, default=NOT_ENTAIL))


def test_criterion_01_pipeline_matches_brute_force_truth_table():
    """For every policy, every assignment of rule outcomes (up to 2^15)
    yields the independently enumerated label."""
    variables = {**_PLAIN_VARS, **_QUOTE_VARS}
    start = time.monotonic()
    for name, text, strategies, var_names, oracle in _TRUTH_TABLES:
        pipeline = make_pipeline(*strategies)
        for bits in itertools.product((False, True), repeat=len(var_names)):
            assign = dict(zip(var_names, bits))
            backend = _table_backend(assign, variables)
            verdict = classify(InputText(text), pipeline, backend)
            expected = Label.HATE if oracle(assign) else Label.NOT_HATE
            assert verdict.label is expected, (name, assign)
    assert time.monotonic() - start < 10.0


def test_criterion_02_filters_monotone_over_randomized_inputs():
    """10,000 random rule-outcome worlds: filters only ever suppress, the
    promotion only ever adds, relative to the base verdict."""
    rng = random.Random(20240824)
    texts = [TEXT, 'quoted "kill them" here', "another probe"]
    pipeline_filters = make_pipeline("fbt", "frs")
    pipeline_fcs_filters = make_pipeline("fcs", "fbt", "frs")
    pipeline_cdc = make_pipeline("cdc")
    main_hyp = make_pipeline().main
    for _ in range(10_000):
        text = rng.choice(texts)
        outcomes = {}

        class RandomBackend(ScoringBackend):
            model_id = "rand"

            def _score(self, premise, hypothesis, tag):
                key = (premise, hypothesis)
                if key not in outcomes:
                    outcomes[key] = rng.random() < 0.5
                return ENTAIL if outcomes[key] else NOT_ENTAIL

        backend = RandomBackend()
        base = base_verdict(InputText(text), main_hyp, backend).label
        filtered = classify(InputText(text), pipeline_filters, backend).label
        promoted = classify(InputText(text), pipeline_cdc, backend).label
        if base is Label.NOT_HATE:
            assert filtered is Label.NOT_HATE
        if base is Label.HATE:
            assert promoted is Label.HATE
        if split_quotes(InputText(text)) is None:
            # FCS is a no-op on quote-free text
            with_fcs = classify(InputText(text), pipeline_fcs_filters, backend).label
            assert with_fcs is filtered


def test_criterion_03_main_grammar_matches_golden_forty():
    golden = (Path(__file__).parent / "data" / "main_hypotheses_golden.txt").read_text()
    expected = golden.splitlines()
    assert len(expected) == 40
    generated = [h.text for h in generate_main_hypotheses()]
    assert generated == expected
    assert generated == sorted(set(generated))


def test_criterion_04_quote_corpus_and_round_trip():
    from test_segmentation import CORPUS

    assert len(CORPUS) == 20
    for text, inner, _outer in CORPUS:
        split = split_quotes(InputText(text))
        if inner is None:
            assert split is None
        else:
            assert split.inner.text == inner
            assert split.reconstruct() == text


def test_criterion_05_loader_counts_and_balance():
    examples = load_hatecheck(FIXTURES / "hatecheck_synth.csv")
    assert len(examples) == 3728
    assert len({e.functionality for e in examples}) == 29
    hateful = sum(1 for e in examples if e.gold is Label.HATE)
    assert 100.0 * hateful / len(examples) == pytest.approx(68.8, abs=0.05)
    ethos = load_ethos_binary(FIXTURES / "ethos_synth.csv")
    assert len(ethos) == 997


def test_criterion_06_renormalization_identity():
    """1000 random triples: e/(e+c) equals the pairwise softmax of the log
    scores and ignores the neutral mass, to 1e-9."""
    rng = random.Random(6)
    for _ in range(1000):
        e = rng.uniform(0.001, 0.997)
        c = rng.uniform(0.001, 0.998 - e)
        n = 1.0 - e - c
        triple = ScoreTriple(e, n, c)
        p = entailment_probability(triple)
        assert abs(p - e / (e + c)) < 1e-9
        softmax = math.exp(math.log(e)) / (math.exp(math.log(e)) + math.exp(math.log(c)))
        assert abs(p - softmax) < 1e-9
        scale = rng.uniform(0.05, 1.0)
        rescaled = ScoreTriple(e * scale, 1.0 - (e + c) * scale, c * scale)
        assert abs(entailment_probability(rescaled) - p) < 1e-9


def test_criterion_07_policy_round_trip_and_diagnostics():
    for name in ("hatecheck-baseline", "hatecheck-all", "ethos-tc-all", "ethos-tc-fbt-frs"):
        doc = load_policy(name)
        text = serialize_policy(doc)
        assert parse_policy(text) == doc
        assert serialize_policy(parse_policy(text)) == text
        assert validate_policy(doc) == []
    broken = PolicyDocument(strategies=StrategyConfig(enabled=("fcs", "fcs_p1")))
    assert validate_policy(broken) != []
    bad = PolicyDocument(strategies=StrategyConfig(enabled=("cdc",)))
    assert validate_policy(bad) != []


def test_criterion_08_reports_reproduce_byte_identically():
    """Replaying the committed score fixture regenerates the committed
    reports byte for byte."""
    backend = FixtureBackend(FIXTURES / "scores.jsonl", model_id="pseudo-nli-1")
    examples = load_hatecheck(FIXTURES / "hatecheck_synth.csv")
    baseline_run = run_policy(
        examples, load_policy("hatecheck-baseline"), backend, dataset_name="hatecheck"
    )
    all_run = run_policy(
        examples, load_policy("hatecheck-all"), backend, dataset_name="hatecheck"
    )
    baseline_json = build_report(baseline_run).to_json()
    all_json = build_report(all_run, baseline=baseline_run).to_json()
    assert baseline_json.encode() == (FIXTURES / "reports" / "hatecheck-baseline.json").read_bytes()
    assert all_json.encode() == (FIXTURES / "reports" / "hatecheck-all.json").read_bytes()
