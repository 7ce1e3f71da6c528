"""Export scored pairs as a replay fixture.

Input: JSON lines, one {"premise": ..., "hypothesis": ...} object per line.
Output: JSON lines, one
{"digest": ..., "entailment": ..., "neutral": ..., "contradiction": ...}
object per input line, where the digest follows the shared cache-key rule,
so the file is directly consumable by the client's `fixture:` backend.
Re-exporting the same pairs with the same model yields a byte-identical
file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import ServerConfig
from .scoring import Scorer, score_digest


def read_pairs(path: str | Path) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            pairs.append((record["premise"], record["hypothesis"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"{path}: line {lineno}: {exc}") from None
    if not pairs:
        raise ValueError(f"{path}: no pairs found")
    return pairs


def export_fixtures(
    pairs: Sequence[tuple[str, str]],
    scorer: Scorer,
    out_path: str | Path,
    batch_size: int = 16,
) -> int:
    """Score every pair and write the digest-keyed fixture. Returns the
    number of lines written."""
    out_path = Path(out_path)
    lines = []
    for start in range(0, len(pairs), batch_size):
        chunk = list(pairs[start : start + batch_size])
        for (premise, hypothesis), scores in zip(chunk, scorer.score(chunk)):
            record = {
                "digest": score_digest(scorer.model_id, premise, hypothesis),
                "entailment": scores["entailment"],
                "neutral": scores["neutral"],
                "contradiction": scores["contradiction"],
            }
            lines.append(json.dumps(record, sort_keys=True))
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return len(lines)


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("pairs_file", help="JSONL of {premise, hypothesis} objects")
    parser.add_argument("out_file", help="fixture JSONL to write")
    parser.add_argument("--model-id", default=ServerConfig.model_id)
    parser.add_argument("--device", default=ServerConfig.device)
    parser.add_argument("--batch-size", type=int, default=16)
    args = parser.parse_args(argv)

    try:
        pairs = read_pairs(args.pairs_file)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    from .scoring import TransformersScorer

    scorer = TransformersScorer(args.model_id, args.device)
    count = export_fixtures(pairs, scorer, args.out_file, args.batch_size)
    print(f"wrote {count} scores to {args.out_file}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
