import math

import pytest
from hypothesis import given, strategies as st

from nlishield.core import (
    BinaryDecision,
    DecisionValue,
    DegenerateScoreError,
    Hypothesis,
    HypothesisRole,
    InputText,
    InvariantError,
    Label,
    Premise,
    PremiseOrigin,
    ScoreTriple,
    TraceEntry,
    Verdict,
    decide,
    entailment_probability,
)


class TestValueTypes:
    def test_input_text_rejects_whitespace_only(self):
        with pytest.raises(ValueError):
            InputText("   \t ")

    def test_outer_premise_needs_exactly_one_placeholder(self):
        Premise("before [X] after", PremiseOrigin.OUTER_WITH_PLACEHOLDER)
        with pytest.raises(ValueError):
            Premise("no placeholder", PremiseOrigin.OUTER_WITH_PLACEHOLDER)
        with pytest.raises(ValueError):
            Premise("[X] and [X]", PremiseOrigin.OUTER_WITH_PLACEHOLDER)

    def test_hypothesis_needs_sentence_terminator(self):
        Hypothesis("That contains hate speech.", HypothesisRole.MAIN, "main")
        with pytest.raises(ValueError):
            Hypothesis("That contains hate speech", HypothesisRole.MAIN, "main")

    def test_score_triple_must_sum_to_one(self):
        ScoreTriple(0.5, 0.25, 0.25)
        with pytest.raises(ValueError):
            ScoreTriple(0.5, 0.5, 0.5)
        with pytest.raises(ValueError):
            ScoreTriple(1.2, -0.1, -0.1)

    def test_verdict_requires_one_finalizer(self):
        entry = TraceEntry(
            PremiseOrigin.WHOLE_TEXT,
            "main",
            0.9,
            BinaryDecision(DecisionValue.ENTAIL, 0.9),
        )
        final = TraceEntry(
            PremiseOrigin.WHOLE_TEXT,
            "main",
            0.9,
            BinaryDecision(DecisionValue.ENTAIL, 0.9),
            rule="base",
        )
        Verdict(Label.HATE, (final,))
        with pytest.raises(InvariantError):
            Verdict(Label.HATE, ())
        with pytest.raises(InvariantError):
            Verdict(Label.HATE, (entry,))
        with pytest.raises(InvariantError):
            Verdict(Label.HATE, (final, final))


class TestEntailmentProbability:
    def test_symmetry(self):
        assert entailment_probability(ScoreTriple(0.5, 0.0, 0.5)) == 0.5

    def test_neutral_mass_irrelevant(self):
        assert entailment_probability(ScoreTriple(0.2, 0.6, 0.2)) == 0.5

    def test_hand_arithmetic(self):
        assert entailment_probability(ScoreTriple(0.6, 0.1, 0.3)) == pytest.approx(
            0.6 / 0.9, abs=1e-12
        )

    def test_degenerate_score(self):
        with pytest.raises(DegenerateScoreError):
            entailment_probability(ScoreTriple(0.0, 1.0, 0.0))

    @given(
        e=st.floats(0.01, 0.98),
        c=st.floats(0.01, 0.98),
        scale=st.floats(0.05, 1.0),
    )
    def test_invariant_under_neutral_rescaling(self, e, c, scale):
        # Shrinking e and c by a common factor (moving mass to neutral)
        # must not move the pairwise probability.
        total = e + c
        if total >= 1.0:
            e, c = e / (total + 0.02), c / (total + 0.02)
        base = ScoreTriple(e, 1.0 - e - c, c)
        rescaled = ScoreTriple(e * scale, 1.0 - (e + c) * scale, c * scale)
        assert entailment_probability(base) == pytest.approx(
            entailment_probability(rescaled), abs=1e-9
        )

    @given(e=st.floats(0.001, 0.999))
    def test_matches_pairwise_softmax_of_logits(self, e):
        c = 1.0 - e
        triple = ScoreTriple(e / 2, 0.5, c / 2)
        le, lc = math.log(e / 2), math.log(c / 2)
        softmax = math.exp(le) / (math.exp(le) + math.exp(lc))
        assert entailment_probability(triple) == pytest.approx(softmax, abs=1e-9)


class TestDecide:
    def test_boundary_is_entail(self):
        assert decide(0.5, 0.5).value is DecisionValue.ENTAIL

    def test_below_threshold(self):
        assert decide(0.4999, 0.5).value is DecisionValue.NOT_ENTAIL

    def test_certainty(self):
        assert decide(1.0, 0.5).value is DecisionValue.ENTAIL

    def test_stores_probability(self):
        assert decide(0.73, 0.5).probability == 0.73

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            decide(1.5, 0.5)
        with pytest.raises(ValueError):
            decide(0.5, -0.1)

    @given(e=st.floats(0.001, 0.999))
    def test_half_threshold_equals_argmax_off_tie(self, e):
        c = 1.0 - e
        triple = ScoreTriple(e * 0.9, 0.1, c * 0.9)
        p = entailment_probability(triple)
        if p != 0.5:
            argmax_entail = triple.entailment > triple.contradiction
            assert decide(p, 0.5).entailed == argmax_entail
