"""Quotation identification and placeholder substitution.

Splits an input text into the first quoted span (inner premise) and the
surrounding text with the span replaced by the placeholder (outer
premise). Only double-quote styles count as quotation marks; apostrophes
in contractions must never trigger a split.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import InputText, PLACEHOLDER, Premise, PremiseOrigin

DEFAULT_QUOTE_PAIRS: tuple[tuple[str, str], ...] = (
    ('"', '"'),
    ("“", "”"),  # curly double quotes
)


@dataclass(frozen=True)
class QuoteSplit:
    """A quoted segment and its surroundings.

    `span` is the byte range (UTF-8) of the quoted region including the
    quote characters. Re-wrapping `inner` in the original quote characters
    and substituting it for the placeholder in `outer` reproduces the
    original text exactly.
    """

    inner: Premise
    outer: Premise
    span: tuple[int, int]
    open_char: str
    close_char: str

    def reconstruct(self) -> str:
        quoted = self.open_char + self.inner.text + self.close_char
        return self.outer.text.replace(PLACEHOLDER, quoted, 1)


def split_quotes(
    text: InputText,
    quote_pairs: tuple[tuple[str, str], ...] = DEFAULT_QUOTE_PAIRS,
) -> Optional[QuoteSplit]:
    """Split out the first balanced quoted span, if any.

    Returns None when no split applies: no quotes, unbalanced quotes for
    every recognized style, or an empty quoted span. Only the first span is
    processed; later quotes stay verbatim in the outer premise.
    """
    raw = text.raw
    if PLACEHOLDER in raw:
        # Substitution would be ambiguous; treat as unquotable.
        return None

    best: Optional[tuple[int, int, str, str]] = None
    for open_char, close_char in quote_pairs:
        span = _first_balanced_span(raw, open_char, close_char)
        if span is not None and (best is None or span[0] < best[0]):
            best = (span[0], span[1], open_char, close_char)
    if best is None:
        return None

    start, end, open_char, close_char = best
    inner_text = raw[start + len(open_char) : end]
    if inner_text == "":
        return None
    outer_text = raw[:start] + PLACEHOLDER + raw[end + len(close_char) :]
    byte_start = len(raw[:start].encode("utf-8"))
    byte_end = len(raw[: end + len(close_char)].encode("utf-8"))
    return QuoteSplit(
        inner=Premise(inner_text, PremiseOrigin.QUOTED_INNER),
        outer=Premise(outer_text, PremiseOrigin.OUTER_WITH_PLACEHOLDER),
        span=(byte_start, byte_end),
        open_char=open_char,
        close_char=close_char,
    )


def _first_balanced_span(raw: str, open_char: str, close_char: str) -> Optional[tuple[int, int]]:
    """(start, end) string indices of the first span for one quote style.

    `start` points at the opening quote, `end` at the closing quote. The
    style must be balanced over the whole text, otherwise it contributes
    no span.
    """
    if open_char == close_char:
        count = raw.count(open_char)
        if count == 0 or count % 2 != 0:
            return None
        start = raw.index(open_char)
        end = raw.index(open_char, start + 1)
        return start, end
    opens = raw.count(open_char)
    closes = raw.count(close_char)
    if opens == 0 or opens != closes:
        return None
    start = raw.index(open_char)
    if raw.index(close_char) < start:
        return None
    end = raw.find(close_char, start + 1)
    if end < 0:
        return None
    return start, end
