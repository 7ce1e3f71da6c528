"""Synthetic stand-in corpora for offline development and testing.

The real benchmark files are not redistributable, so this module generates
deterministic look-alikes with the same schema and the same headline
statistics (row counts, category counts, class balance). The texts are
deliberately mild placeholders; they exercise the pipeline mechanics
(targets, quotes, self-directed phrasing), not model quality.

Usage: python -m nlishield.devdata OUTDIR
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

from .datasets import HATECHECK_FUNCTIONALITY_ORDER, HATECHECK_GROUPS

HATECHECK_TOTAL = 3728
HATECHECK_HATEFUL = 2565  # 68.80% of 3728
ETHOS_TOTAL = 997
ETHOS_HATEFUL = 639

_NO_TARGET_FUNCTIONALITIES = ("target_obj_nh", "target_indiv_nh", "target_group_nh")

_TEMPLATES = {
    "derog_neg_emote_h": "I really cannot stand {group}, sample {i}.",
    "derog_neg_attrib_h": "{group} are just the worst kind of people, sample {i}.",
    "derog_dehum_h": "{group} are nothing but vermin, sample {i}.",
    "derog_impl_h": "{group} are about as clever as rats, sample {i}.",
    "threat_dir_h": "I am going to hurt {group} like you, sample {i}.",
    "threat_norm_h": "{group} should all be locked away, sample {i}.",
    "slur_h": "All {group} are blorks, sample {i}.",
    "slur_homonym_nh": "I dug up the blork root in my garden, sample {i}.",
    "slur_reclaimed_nh": "As a blork myself, I say it proudly, sample {i}.",
    "profanity_h": "Damn {group}, every single one of them, sample {i}.",
    "profanity_nh": "Damn, I burned my toast again, sample {i}.",
    "ref_subs_clause_h": "Whenever I meet {group}, I remember how much I loathe them, sample {i}.",
    "ref_subs_sent_h": "I saw {group} today. They disgust me, sample {i}.",
    "negate_pos_h": "{group} are not even slightly decent people, sample {i}.",
    "negate_neg_nh": "No {group} deserve to be insulted, sample {i}.",
    "phrase_question_h": "Why are {group} always so vile, sample {i}?",
    "phrase_opinion_h": "In my opinion {group} are repulsive, sample {i}.",
    "ident_neutral_nh": "Many {group} live in my neighbourhood, sample {i}.",
    "ident_pos_nh": "I love spending time with {group}, sample {i}.",
    "counter_quote_nh": 'People who say "{group} are the worst" are disgusting, sample {i}.',
    "counter_ref_nh": "Claiming that {group} are inferior is hateful nonsense, sample {i}.",
    "target_obj_nh": "I hate this broken printer so much, sample {i}.",
    "target_indiv_nh": "I really cannot stand you, sample {i}.",
    "target_group_nh": "Estate agents are the worst profession, sample {i}.",
    "spell_char_swap_h": "I ahte {group} so much, sample {i}.",
    "spell_char_del_h": "I hte {group} so much, sample {i}.",
    "spell_space_del_h": "Ihate{group}somuch, sample {i}.",
    "spell_space_add_h": "I h a t e {group}, sample {i}.",
    "spell_leet_h": "1 h4te {group} s0 much, sample {i}.",
}


def _functionality_sizes() -> dict[str, int]:
    hateful = [c for c in HATECHECK_FUNCTIONALITY_ORDER if c.endswith("_h")]
    non_hateful = [c for c in HATECHECK_FUNCTIONALITY_ORDER if c.endswith("_nh")]
    sizes: dict[str, int] = {}
    base, extra = divmod(HATECHECK_HATEFUL, len(hateful))
    for index, code in enumerate(hateful):
        sizes[code] = base + (1 if index < extra else 0)
    remaining = HATECHECK_TOTAL - HATECHECK_HATEFUL
    base, extra = divmod(remaining, len(non_hateful))
    for index, code in enumerate(non_hateful):
        sizes[code] = base + (1 if index < extra else 0)
    return sizes


def hatecheck_rows() -> list[dict[str, str]]:
    """Deterministic synthetic HateCheck rows (same columns as the real file)."""
    rows: list[dict[str, str]] = []
    sizes = _functionality_sizes()
    case_id = 0
    for code in HATECHECK_FUNCTIONALITY_ORDER:
        template = _TEMPLATES[code]
        label = "hateful" if code.endswith("_h") else "non-hateful"
        for i in range(sizes[code]):
            case_id += 1
            if code in _NO_TARGET_FUNCTIONALITIES:
                group = ""
                text = template.format(group="", i=i)
            else:
                group = HATECHECK_GROUPS[i % len(HATECHECK_GROUPS)]
                text = template.format(group=group, i=i)
            rows.append(
                {
                    "case_id": str(case_id),
                    "functionality": code,
                    "test_case": text,
                    "label_gold": label,
                    "target_ident": group,
                }
            )
    assert len(rows) == HATECHECK_TOTAL
    return rows


def ethos_rows() -> list[tuple[str, float]]:
    """Deterministic synthetic binary-ETHOS rows, including an exact 0.5 tie."""
    rows: list[tuple[str, float]] = []
    for i in range(ETHOS_TOTAL):
        if i < ETHOS_HATEFUL:
            score = 0.5 if i == 0 else round(0.5 + 0.5 * ((i * 37) % 100) / 100.0, 3)
            text = f"Synthetic hateful comment number {i} about a protected characteristic."
        else:
            score = round(0.499 * ((i * 53) % 100) / 100.0, 3)
            text = f"Synthetic harmless comment number {i} about everyday life."
        rows.append((text, score))
    return rows


def write_hatecheck_csv(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(
            handle,
            fieldnames=["case_id", "functionality", "test_case", "label_gold", "target_ident"],
        )
        writer.writeheader()
        writer.writerows(hatecheck_rows())
    return path


def write_ethos_csv(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write("comment;isHate\n")
        for text, score in ethos_rows():
            handle.write(f"{text};{score}\n")
    return path


def main(argv: list[str] | None = None) -> int:
    args = argv if argv is not None else sys.argv[1:]
    if len(args) != 1:
        print("usage: python -m nlishield.devdata OUTDIR", file=sys.stderr)
        return 1
    out = Path(args[0])
    print(write_hatecheck_csv(out / "hatecheck_synth.csv"))
    print(write_ethos_csv(out / "ethos_synth.csv"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
