"""Model-backed pair scoring and the shared cache-key digest rule."""

from __future__ import annotations

import hashlib
from typing import Protocol, Sequence

LABELS = ("contradiction", "neutral", "entailment")

# Must match the client's cache-key rule byte for byte, so exported
# fixtures are directly consumable there.
_UNIT_SEPARATOR = "\x1f"


def score_digest(model_id: str, premise: str, hypothesis: str) -> str:
    payload = _UNIT_SEPARATOR.join((model_id, premise, hypothesis))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Scorer(Protocol):
    """Anything that maps (premise, hypothesis) pairs to class probabilities."""

    model_id: str

    def score(self, pairs: Sequence[tuple[str, str]]) -> list[dict[str, float]]:
        """One {"entailment", "neutral", "contradiction"} dict per pair,
        in request order; each summing to 1 within 1e-6."""
        ...


class TransformersScorer:
    """Scores pairs with a Hugging Face sequence-classification checkpoint.

    The class order is read from the model's own id2label config and mapped
    by name — MNLI checkpoints disagree on positional label order, and
    assuming one silently swaps entailment and contradiction.
    """

    def __init__(self, model_id: str, device: str = "cpu"):
        import torch
        from transformers import AutoModelForSequenceClassification, AutoTokenizer

        self.model_id = model_id
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(model_id)
        self._model = AutoModelForSequenceClassification.from_pretrained(model_id)
        self._model.to(device)
        self._model.eval()
        self._device = device

        id2label = {
            int(index): str(label).lower()
            for index, label in self._model.config.id2label.items()
        }
        self._label_index: dict[str, int] = {}
        for index, label in id2label.items():
            for name in LABELS:
                if name in label:
                    self._label_index[name] = index
        missing = set(LABELS) - set(self._label_index)
        if missing:
            raise ValueError(
                f"model {model_id!r} does not expose the NLI labels "
                f"{sorted(missing)}; id2label = {id2label}"
            )

    def score(self, pairs: Sequence[tuple[str, str]]) -> list[dict[str, float]]:
        torch = self._torch
        premises = [p for p, _ in pairs]
        hypotheses = [h for _, h in pairs]
        encoded = self._tokenizer(
            premises, hypotheses, padding=True, truncation=True, return_tensors="pt"
        ).to(self._device)
        with torch.no_grad():
            logits = self._model(**encoded).logits
        probabilities = torch.softmax(logits, dim=-1).cpu()
        return [
            {name: float(row[self._label_index[name]]) for name in LABELS}
            for row in probabilities
        ]
