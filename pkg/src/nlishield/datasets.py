"""Dataset loaders and supporting-task label derivation.

Two evaluation sets are supported out of the box:

* HateCheck: a CSV with columns functionality, test_case, label_gold,
  target_ident (extra columns are ignored).
* ETHOS (binary part): a semicolon-delimited file with header
  `comment;isHate`, where isHate is a real number in [0, 1].

Texts are used raw: no lowercasing, no normalization. The spelling
variation categories are the test signal and must reach the classifier
untouched.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .core import EngineError, InputText, Label


class DatasetError(EngineError):
    """A dataset file is missing, malformed, or inconsistent."""


@dataclass(frozen=True)
class LabeledExample:
    id: str
    text: InputText
    gold: Label
    functionality: Optional[str] = None
    target_ident: Optional[str] = None


@dataclass(frozen=True)
class SupportingTask:
    """A binary auxiliary task derived from HateCheck annotations."""

    name: str
    positive_ids: frozenset[str]


# HateCheck functionality codes in F1..F29 order, keyed by the verbatim
# `functionality` column values.
HATECHECK_FUNCTIONALITY_ORDER = (
    "derog_neg_emote_h",
    "derog_neg_attrib_h",
    "derog_dehum_h",
    "derog_impl_h",
    "threat_dir_h",
    "threat_norm_h",
    "slur_h",
    "slur_homonym_nh",
    "slur_reclaimed_nh",
    "profanity_h",
    "profanity_nh",
    "ref_subs_clause_h",
    "ref_subs_sent_h",
    "negate_pos_h",
    "negate_neg_nh",
    "phrase_question_h",
    "phrase_opinion_h",
    "ident_neutral_nh",
    "ident_pos_nh",
    "counter_quote_nh",
    "counter_ref_nh",
    "target_obj_nh",
    "target_indiv_nh",
    "target_group_nh",
    "spell_char_swap_h",
    "spell_char_del_h",
    "spell_space_del_h",
    "spell_space_add_h",
    "spell_leet_h",
)

FUNCTIONALITY_LABELS = {
    code: f"F{i}" for i, code in enumerate(HATECHECK_FUNCTIONALITY_ORDER, start=1)
}

RECLAIMED_SLUR_FUNCTIONALITY = "slur_reclaimed_nh"  # F9
COUNTER_QUOTE_FUNCTIONALITY = "counter_quote_nh"  # F20

HATECHECK_GROUPS = (
    "women",
    "trans people",
    "gay people",
    "black people",
    "disabled people",
    "Muslims",
    "immigrants",
)

# Umbrella tasks map several annotated groups to one positive class.
_UMBRELLA_TASKS = {
    "queer people": ("gay people", "trans people", "transgender people"),
    "gender": ("women", "trans people", "transgender people"),
}

SUPPORTING_TASK_NAMES = HATECHECK_GROUPS + tuple(_UMBRELLA_TASKS) + (
    "self-directed",
    "stance-F20",
)


def load_hatecheck(path: str | Path) -> list[LabeledExample]:
    """Load the HateCheck CSV. Gold mapping: hateful -> hate, non-hateful -> not_hate."""
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DatasetError(f"{path}: missing header")
        required = {"functionality", "test_case", "label_gold", "target_ident"}
        missing = required - set(reader.fieldnames)
        if missing:
            raise DatasetError(f"{path}: missing columns: {', '.join(sorted(missing))}")
        examples: list[LabeledExample] = []
        for row_number, row in enumerate(reader, start=2):
            gold_raw = row["label_gold"]
            if gold_raw == "hateful":
                gold = Label.HATE
            elif gold_raw == "non-hateful":
                gold = Label.NOT_HATE
            else:
                raise DatasetError(f"{path}: row {row_number}: unknown gold label {gold_raw!r}")
            examples.append(
                LabeledExample(
                    id=row.get("case_id") or f"hc-{row_number - 1}",
                    text=InputText(row["test_case"]),
                    gold=gold,
                    functionality=row["functionality"],
                    target_ident=row["target_ident"] or "",
                )
            )
    return examples


def load_ethos_binary(path: str | Path) -> list[LabeledExample]:
    """Load the binary ETHOS file. gold = hate iff isHate >= 0.5 (tie inclusive)."""
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle, delimiter=";")
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: missing header") from None
        if [h.strip() for h in header[:2]] != ["comment", "isHate"]:
            raise DatasetError(f"{path}: expected header 'comment;isHate', got {header!r}")
        examples: list[LabeledExample] = []
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 2:
                raise DatasetError(f"{path}: row {row_number}: expected 'comment;isHate'")
            try:
                is_hate = float(row[1])
            except ValueError:
                raise DatasetError(
                    f"{path}: row {row_number}: non-numeric isHate value {row[1]!r}"
                ) from None
            gold = Label.HATE if is_hate >= 0.5 else Label.NOT_HATE
            examples.append(
                LabeledExample(id=f"ethos-{row_number - 1}", text=InputText(row[0]), gold=gold)
            )
    return examples


def load_generic_csv(path: str | Path) -> list[LabeledExample]:
    """Load a plain CSV with columns text, label (label in {hate, not_hate})."""
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"text", "label"} <= set(reader.fieldnames):
            raise DatasetError(f"{path}: expected columns 'text' and 'label'")
        examples: list[LabeledExample] = []
        for row_number, row in enumerate(reader, start=2):
            try:
                gold = Label(row["label"])
            except ValueError:
                raise DatasetError(
                    f"{path}: row {row_number}: unknown label {row['label']!r}"
                ) from None
            examples.append(
                LabeledExample(id=f"csv-{row_number - 1}", text=InputText(row["text"]), gold=gold)
            )
    return examples


def infer_supporting_labels(
    examples: Iterable[LabeledExample], task_name: str
) -> SupportingTask:
    """Derive gold labels for one supporting task from HateCheck annotations.

    Group tasks: positive iff the example's target annotation names that
    group. Umbrella tasks combine several groups. "self-directed" marks
    every reclaimed-slur example positive; "stance-F20" marks every
    counterspeech-with-quote example positive (the gold stance is always
    against the quote).
    """
    examples = list(examples)
    for example in examples:
        if example.target_ident is None:
            raise DatasetError(
                f"supporting tasks need target annotations; example {example.id} has none"
            )

    if task_name in HATECHECK_GROUPS:
        aliases = {task_name}
        if task_name == "trans people":
            aliases.add("transgender people")
        positives = frozenset(e.id for e in examples if e.target_ident in aliases)
    elif task_name in _UMBRELLA_TASKS:
        members = set(_UMBRELLA_TASKS[task_name])
        positives = frozenset(e.id for e in examples if e.target_ident in members)
    elif task_name == "self-directed":
        positives = frozenset(
            e.id for e in examples if e.functionality == RECLAIMED_SLUR_FUNCTIONALITY
        )
    elif task_name == "stance-F20":
        positives = frozenset(
            e.id for e in examples if e.functionality == COUNTER_QUOTE_FUNCTIONALITY
        )
    else:
        raise DatasetError(f"unknown supporting task {task_name!r}")
    return SupportingTask(name=task_name, positive_ids=positives)
