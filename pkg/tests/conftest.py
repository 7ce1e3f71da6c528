import pytest

from nlishield.backend import MockBackend, MockRule, MockRuleTable
from nlishield.core import ScoreTriple
from nlishield.devdata import write_ethos_csv, write_hatecheck_csv

ENTAIL = ScoreTriple(0.9, 0.02, 0.08)
NOT_ENTAIL = ScoreTriple(0.08, 0.02, 0.9)


def pair_backend(outcomes, default=False, model_id="mock"):
    """Mock backend fixing the binary outcome per exact (premise, hypothesis) pair."""
    entries = tuple(
        MockRule(
            premise_pattern=premise,
            premise_match="exact",
            hypothesis=hypothesis,
            scores=ENTAIL if entailed else NOT_ENTAIL,
        )
        for (premise, hypothesis), entailed in outcomes.items()
    )
    table = MockRuleTable(entries=entries, default=ENTAIL if default else NOT_ENTAIL)
    return MockBackend(table, model_id=model_id)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in getattr(report, "nodeid", ""):
                rows.append((report.nodeid.split("::")[-1], outcome == "passed"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, passed in sorted(rows):
            terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def hatecheck_path(tmp_path_factory):
    return write_hatecheck_csv(tmp_path_factory.mktemp("data") / "hatecheck_synth.csv")


@pytest.fixture(scope="session")
def ethos_path(tmp_path_factory):
    return write_ethos_csv(tmp_path_factory.mktemp("data") / "ethos_synth.csv")
