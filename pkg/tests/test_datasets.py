import pytest

from nlishield.core import Label
from nlishield.datasets import (
    DatasetError,
    FUNCTIONALITY_LABELS,
    HATECHECK_FUNCTIONALITY_ORDER,
    HATECHECK_GROUPS,
    SUPPORTING_TASK_NAMES,
    infer_supporting_labels,
    load_ethos_binary,
    load_generic_csv,
    load_hatecheck,
)


class TestHateCheckLoader:
    def test_counts(self, hatecheck_path):
        examples = load_hatecheck(hatecheck_path)
        assert len(examples) == 3728
        functionalities = {e.functionality for e in examples}
        assert len(functionalities) == 29
        assert functionalities == set(HATECHECK_FUNCTIONALITY_ORDER)

    def test_class_balance(self, hatecheck_path):
        examples = load_hatecheck(hatecheck_path)
        hateful = sum(1 for e in examples if e.gold is Label.HATE)
        assert hateful == 2565
        assert hateful / len(examples) == pytest.approx(0.688, abs=0.0005)

    def test_gold_mapping_agrees_with_functionality_suffix(self, hatecheck_path):
        for example in load_hatecheck(hatecheck_path):
            expected = Label.HATE if example.functionality.endswith("_h") else Label.NOT_HATE
            assert example.gold is expected

    def test_case_ids_unique(self, hatecheck_path):
        examples = load_hatecheck(hatecheck_path)
        assert len({e.id for e in examples}) == len(examples)

    def test_functionality_labels(self):
        assert FUNCTIONALITY_LABELS["derog_neg_emote_h"] == "F1"
        assert FUNCTIONALITY_LABELS["slur_reclaimed_nh"] == "F9"
        assert FUNCTIONALITY_LABELS["counter_quote_nh"] == "F20"
        assert FUNCTIONALITY_LABELS["spell_leet_h"] == "F29"

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("functionality,test_case\nslur_h,text\n")
        with pytest.raises(DatasetError, match="missing columns"):
            load_hatecheck(path)

    def test_unknown_gold_label_reports_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "functionality,test_case,label_gold,target_ident\n"
            "slur_h,ok text,hateful,women\n"
            "slur_h,bad text,maybe,women\n"
        )
        with pytest.raises(DatasetError, match="row 3"):
            load_hatecheck(path)

    def test_ids_synthesized_without_case_id(self, tmp_path):
        path = tmp_path / "noid.csv"
        path.write_text(
            "functionality,test_case,label_gold,target_ident\n"
            "slur_h,some text,hateful,women\n"
        )
        (example,) = load_hatecheck(path)
        assert example.id == "hc-1"


class TestEthosLoader:
    def test_counts_and_balance(self, ethos_path):
        examples = load_ethos_binary(ethos_path)
        assert len(examples) == 997
        assert sum(1 for e in examples if e.gold is Label.HATE) == 639

    def test_tie_is_hate(self, ethos_path):
        # the first synthetic row carries isHate exactly 0.5
        assert load_ethos_binary(ethos_path)[0].gold is Label.HATE

    def test_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("text;score\nhello;1\n")
        with pytest.raises(DatasetError, match="comment;isHate"):
            load_ethos_binary(path)

    def test_non_numeric_score_reports_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("comment;isHate\nfine;0.9\nbroken;yes\n")
        with pytest.raises(DatasetError, match="row 3"):
            load_ethos_binary(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(DatasetError, match="missing header"):
            load_ethos_binary(path)


class TestGenericLoader:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "generic.csv"
        path.write_text('text,label\n"first, with comma",hate\nsecond,not_hate\n')
        examples = load_generic_csv(path)
        assert [e.gold for e in examples] == [Label.HATE, Label.NOT_HATE]
        assert examples[0].text.raw == "first, with comma"

    def test_unknown_label(self, tmp_path):
        path = tmp_path / "generic.csv"
        path.write_text("text,label\nsomething,spam\n")
        with pytest.raises(DatasetError, match="row 2"):
            load_generic_csv(path)


@pytest.fixture(scope="module")
def examples(hatecheck_path):
    return load_hatecheck(hatecheck_path)


class TestSupportingTasks:
    def test_group_tasks_partition_targeted_rows(self, examples):
        # every row with a target annotation is positive for exactly one group
        tasks = {
            name: infer_supporting_labels(examples, name) for name in HATECHECK_GROUPS
        }
        for example in examples:
            memberships = [n for n, t in tasks.items() if example.id in t.positive_ids]
            if example.target_ident:
                assert memberships == [example.target_ident]
            else:
                assert memberships == []

    def test_umbrella_queer_people(self, examples):
        queer = infer_supporting_labels(examples, "queer people").positive_ids
        gay = infer_supporting_labels(examples, "gay people").positive_ids
        trans = infer_supporting_labels(examples, "trans people").positive_ids
        assert queer == gay | trans

    def test_umbrella_gender(self, examples):
        gender = infer_supporting_labels(examples, "gender").positive_ids
        women = infer_supporting_labels(examples, "women").positive_ids
        trans = infer_supporting_labels(examples, "trans people").positive_ids
        assert gender == women | trans

    def test_self_directed_is_reclaimed_slur_rows(self, examples):
        task = infer_supporting_labels(examples, "self-directed")
        expected = {e.id for e in examples if e.functionality == "slur_reclaimed_nh"}
        assert task.positive_ids == frozenset(expected)
        assert task.positive_ids

    def test_stance_task_is_counter_quote_rows(self, examples):
        task = infer_supporting_labels(examples, "stance-F20")
        expected = {e.id for e in examples if e.functionality == "counter_quote_nh"}
        assert task.positive_ids == frozenset(expected)

    def test_unknown_task(self, examples):
        with pytest.raises(DatasetError, match="unknown supporting task"):
            infer_supporting_labels(examples, "astrology")

    def test_requires_target_annotations(self, ethos_path):
        examples = load_ethos_binary(ethos_path)
        with pytest.raises(DatasetError, match="target annotations"):
            infer_supporting_labels(examples, "women")

    def test_task_name_registry(self):
        assert "queer people" in SUPPORTING_TASK_NAMES
        assert "stance-F20" in SUPPORTING_TASK_NAMES
        assert len(SUPPORTING_TASK_NAMES) == 11
