"""Pluggable NLI scoring backends.

Four backends share one interface:

* `HttpBackend` speaks the scoring wire protocol against a model server.
* `FixtureBackend` replays previously recorded scores keyed by digest.
* `MockBackend` serves fixed scores from a declarative rule table.
* `HashBackend` derives deterministic pseudo-scores from the pair digest
  (useful for property tests and for generating reproducible fixtures
  without a model).

`CachedBackend` wraps any of them with a persistent append-only JSONL
score cache.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import requests

from .core import EngineError, Hypothesis, Premise, ScoreTriple

logger = logging.getLogger(__name__)

UNIT_SEPARATOR = "\x1f"
DEFAULT_BATCH_SIZE = 16
DEFAULT_MAX_ATTEMPTS = 3
DEFAULT_BACKOFF_SECONDS = 0.25


class BackendError(EngineError):
    """Scoring failed. `retryable` distinguishes transient transport trouble
    from permanent problems; `attempts` counts tries actually made."""

    def __init__(self, message: str, *, retryable: bool = False, attempts: int = 1):
        super().__init__(message)
        self.retryable = retryable
        self.attempts = attempts


class ProtocolError(BackendError):
    """The server reply did not conform to the wire protocol. Never retried."""

    def __init__(self, message: str):
        super().__init__(message, retryable=False)


def score_digest(model_id: str, premise: str, hypothesis: str) -> str:
    """SHA-256 digest identifying one (model, premise, hypothesis) pair.

    The three components are joined with the ASCII unit separator (0x1F)
    before hashing, so no component can smuggle a boundary.
    """
    payload = UNIT_SEPARATOR.join((model_id, premise, hypothesis))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CacheKey:
    digest: str

    def __post_init__(self) -> None:
        if len(self.digest) != 64 or any(c not in "0123456789abcdef" for c in self.digest):
            raise ValueError(f"not a sha256 hex digest: {self.digest!r}")

    @classmethod
    def for_pair(cls, model_id: str, premise: str, hypothesis: str) -> "CacheKey":
        return cls(score_digest(model_id, premise, hypothesis))


@dataclass(frozen=True)
class ScoreRequest:
    """A batch of raw text pairs to score, in order."""

    pairs: tuple[tuple[str, str], ...]
    model_id: str

    def __post_init__(self) -> None:
        if not self.pairs:
            raise ValueError("score request has no pairs")
        for premise, hypothesis in self.pairs:
            if not premise or not hypothesis:
                raise ValueError("score request contains an empty premise or hypothesis")


class ScoringBackend:
    """Base interface: deterministic scoring of (premise, hypothesis) pairs."""

    model_id: str

    def score_pair(self, premise: Premise, hypothesis: Hypothesis) -> ScoreTriple:
        return self._score(premise.text, hypothesis.text, hypothesis.tag)

    def score_batch(self, request: ScoreRequest) -> list[ScoreTriple]:
        return [self._score(p, h, "") for p, h in request.pairs]

    def _score(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        raise NotImplementedError


@dataclass(frozen=True)
class MockRule:
    """One entry of a mock rule table.

    The premise pattern matches either exactly or as a substring. The
    hypothesis side matches on exact text, on tag, or on anything if both
    are None.
    """

    premise_pattern: str
    scores: ScoreTriple
    premise_match: str = "exact"  # "exact" | "substring"
    hypothesis: Optional[str] = None
    hypothesis_tag: Optional[str] = None

    def matches(self, premise: str, hypothesis: str, tag: str) -> bool:
        if self.premise_match == "exact":
            if premise != self.premise_pattern:
                return False
        elif self.premise_match == "substring":
            if self.premise_pattern not in premise:
                return False
        else:
            raise ValueError(f"unknown premise match mode: {self.premise_match!r}")
        if self.hypothesis is not None and hypothesis != self.hypothesis:
            return False
        if self.hypothesis_tag is not None and tag != self.hypothesis_tag:
            return False
        return True


@dataclass(frozen=True)
class MockRuleTable:
    """Deterministic lookup: first matching entry wins, else the default."""

    entries: tuple[MockRule, ...]
    default: ScoreTriple = ScoreTriple(0.1, 0.1, 0.8)

    def lookup(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        for entry in self.entries:
            if entry.matches(premise, hypothesis, tag):
                return entry.scores
        return self.default

    @classmethod
    def from_file(cls, path: str | Path) -> "MockRuleTable":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        entries = tuple(
            MockRule(
                premise_pattern=item["premise"],
                premise_match=item.get("premise_match", "exact"),
                hypothesis=item.get("hypothesis"),
                hypothesis_tag=item.get("hypothesis_tag"),
                scores=ScoreTriple(*item["scores"]),
            )
            for item in data.get("entries", [])
        )
        default = ScoreTriple(*data.get("default", (0.1, 0.1, 0.8)))
        return cls(entries=entries, default=default)


class MockBackend(ScoringBackend):
    def __init__(self, table: MockRuleTable, model_id: str = "mock"):
        self.table = table
        self.model_id = model_id

    def _score(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        return self.table.lookup(premise, hypothesis, tag)


class HashBackend(ScoringBackend):
    """Pseudo-scores derived from the pair digest.

    Purely a function of (model_id, premise, hypothesis): stable across
    runs and platforms, with no model behind it. Used for property tests
    and fixture generation.
    """

    def __init__(self, model_id: str = "pseudo-nli-1"):
        self.model_id = model_id

    def _score(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        digest = score_digest(self.model_id, premise, hypothesis)
        # Two 24-bit windows of the digest drive the class split.
        a = int(digest[:6], 16) / 0xFFFFFF
        b = int(digest[6:12], 16) / 0xFFFFFF
        entailment = a * (1.0 - 0.5 * b)
        neutral = 0.5 * b * a
        contradiction = 1.0 - entailment - neutral
        # Guard against float fuzz at the edges.
        contradiction = min(max(contradiction, 0.0), 1.0)
        return ScoreTriple(entailment, neutral, contradiction)


class FixtureBackend(ScoringBackend):
    """Replays recorded scores from a JSONL file keyed by pair digest.

    A miss is an error: fixtures are meant to fully cover a run so that
    it can be reproduced without any network access.
    """

    def __init__(self, path: str | Path, model_id: str):
        self.model_id = model_id
        self.path = Path(path)
        self._scores = _read_score_lines(self.path)

    def _score(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        digest = score_digest(self.model_id, premise, hypothesis)
        try:
            return self._scores[digest]
        except KeyError:
            raise BackendError(
                f"fixture miss for pair ({premise!r}, {hypothesis!r}) "
                f"with model {self.model_id!r}"
            ) from None


class HttpBackend(ScoringBackend):
    """Client for the scoring wire protocol.

    POST {url}/v1/score with {"model_id": ..., "pairs": [{"premise": ...,
    "hypothesis": ...}, ...]} and expect {"scores": [...]} in request
    order. Transient failures are retried with exponential backoff.
    """

    def __init__(
        self,
        url: str,
        model_id: str,
        *,
        batch_size: int = DEFAULT_BATCH_SIZE,
        max_attempts: int = DEFAULT_MAX_ATTEMPTS,
        backoff_seconds: float = DEFAULT_BACKOFF_SECONDS,
        session: Optional[requests.Session] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.url = url.rstrip("/")
        self.model_id = model_id
        self.batch_size = batch_size
        self.max_attempts = max_attempts
        self.backoff_seconds = backoff_seconds
        self.session = session or requests.Session()
        self._sleep = sleep

    def _score(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        request = ScoreRequest(pairs=((premise, hypothesis),), model_id=self.model_id)
        return self.score_batch(request)[0]

    def score_batch(self, request: ScoreRequest) -> list[ScoreTriple]:
        results: list[ScoreTriple] = []
        for start in range(0, len(request.pairs), self.batch_size):
            chunk = request.pairs[start : start + self.batch_size]
            results.extend(self._post_chunk(chunk))
        return results

    def _post_chunk(self, pairs: Sequence[tuple[str, str]]) -> list[ScoreTriple]:
        body = {
            "model_id": self.model_id,
            "pairs": [{"premise": p, "hypothesis": h} for p, h in pairs],
        }
        last_error: Optional[Exception] = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                response = self.session.post(f"{self.url}/v1/score", json=body, timeout=60)
            except requests.RequestException as exc:
                last_error = exc
                if attempt < self.max_attempts:
                    self._sleep(self.backoff_seconds * 2 ** (attempt - 1))
                continue
            if response.status_code == 200:
                return self._parse_scores(response, expected=len(pairs))
            if response.status_code in (502, 503, 504):
                last_error = BackendError(
                    f"server unavailable (HTTP {response.status_code})", retryable=True
                )
                if attempt < self.max_attempts:
                    self._sleep(self.backoff_seconds * 2 ** (attempt - 1))
                continue
            raise ProtocolError(
                f"scoring request rejected with HTTP {response.status_code}: "
                f"{response.text[:200]}"
            )
        raise BackendError(
            f"scoring failed after {self.max_attempts} attempts: {last_error}",
            retryable=True,
            attempts=self.max_attempts,
        )

    @staticmethod
    def _parse_scores(response: requests.Response, *, expected: int) -> list[ScoreTriple]:
        try:
            payload = response.json()
            scores = payload["scores"]
            triples = [
                ScoreTriple(s["entailment"], s["neutral"], s["contradiction"])
                for s in scores
            ]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed scoring response: {exc}") from exc
        if len(triples) != expected:
            raise ProtocolError(
                f"scoring response has {len(triples)} scores, expected {expected}"
            )
        return triples


class ScoreCache:
    """Append-only JSONL score store, one object per line:
    {"digest": ..., "entailment": ..., "neutral": ..., "contradiction": ...}

    Writes are serialized with a lock; corrupt lines are skipped with a
    warning so a torn write cannot poison a whole cache file.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._scores: dict[str, ScoreTriple] = {}
        if self.path.exists():
            self._scores = _read_score_lines(self.path)

    def __len__(self) -> int:
        return len(self._scores)

    def get(self, key: CacheKey) -> Optional[ScoreTriple]:
        return self._scores.get(key.digest)

    def put(self, key: CacheKey, score: ScoreTriple) -> None:
        with self._lock:
            if key.digest in self._scores:
                return
            self._scores[key.digest] = score
            line = json.dumps(
                {
                    "digest": key.digest,
                    "entailment": score.entailment,
                    "neutral": score.neutral,
                    "contradiction": score.contradiction,
                },
                sort_keys=True,
            )
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")


def cached_score(cache: ScoreCache, key: CacheKey, inner: Callable[[], ScoreTriple]) -> ScoreTriple:
    """Return the cached score for `key`, computing and persisting on a miss."""
    hit = cache.get(key)
    if hit is not None:
        return hit
    score = inner()
    cache.put(key, score)
    return score


class CachedBackend(ScoringBackend):
    """Wraps another backend with a persistent score cache."""

    def __init__(self, inner: ScoringBackend, cache: ScoreCache):
        self.inner = inner
        self.cache = cache
        self.model_id = inner.model_id

    def _score(self, premise: str, hypothesis: str, tag: str) -> ScoreTriple:
        key = CacheKey.for_pair(self.model_id, premise, hypothesis)
        return cached_score(self.cache, key, lambda: self.inner._score(premise, hypothesis, tag))


def _read_score_lines(path: Path) -> dict[str, ScoreTriple]:
    scores: dict[str, ScoreTriple] = {}
    with path.open(encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                scores[record["digest"]] = ScoreTriple(
                    record["entailment"], record["neutral"], record["contradiction"]
                )
            except (ValueError, KeyError, TypeError):
                logger.warning("skipping corrupt score line %s:%d", path, lineno)
    return scores


def write_score_lines(
    path: Path, records: Iterable[tuple[str, ScoreTriple]]
) -> None:
    """Write (digest, score) records as a JSONL score file (fixture format)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for digest, score in records:
            handle.write(
                json.dumps(
                    {
                        "digest": digest,
                        "entailment": score.entailment,
                        "neutral": score.neutral,
                        "contradiction": score.contradiction,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
