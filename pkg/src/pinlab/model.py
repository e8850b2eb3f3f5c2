"""Context-conditioned probabilistic model over 4-digit PINs.

The canonical trained representation is the joint histogram of all observed
4-digit sequences (a 10x10x10x10 count tensor). Every conditional count is a
marginalization of it, which keeps count identities exact and makes the model
trivially serializable.

Estimation of missing digits uses add-alpha smoothed conditionals with three
escalation rules: a direct smoothed joint over two missing digits when the
conditioning context is frequent enough (count >= tau), an independence
product of per-position conditionals when it is sparse, and a pooled global
digit prior when the context was never seen at all.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus, code_to_digits, digits_to_code
from .errors import DataError
from .masks import MaskPattern, Observation

DIGITS = 10

PATH_DIRECT_SINGLE = "direct_single"
PATH_JOINT = "joint"
PATH_INDEPENDENCE = "independence"
PATH_PRIOR_FALLBACK = "prior_fallback"

_HEADER = re.compile(r"^PINMODEL v1 alpha=(\S+) tau=(\d+)$")
_ENTRY = re.compile(r"^([0-9]{4}) ([0-9]+)$")
_TRAILER = re.compile(r"^TOTAL ([0-9]+)$")


@dataclass(frozen=True)
class ModelConfig:
    alpha: float = 1.0
    tau: int = 10

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive: {self.alpha}")
        if self.tau < 0:
            raise ValueError(f"tau must be non-negative: {self.tau}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "tau", int(self.tau))


@dataclass(frozen=True)
class CompletionDistribution:
    """Normalized probabilities over all candidate fillings of the missing positions.

    ``probs`` has shape (10,) * |missing|, axes ordered by ascending missing
    position, so C-order flattening enumerates candidates lexicographically.
    """

    pattern: MaskPattern
    probs: np.ndarray
    used_path: str

    @property
    def flat(self) -> np.ndarray:
        return self.probs.reshape(-1)

    def prob_of(self, candidate: tuple[int, ...]) -> float:
        return float(self.probs[tuple(candidate)])


class TrainedModel:
    """Immutable histogram + smoothing config; safe for concurrent readers."""

    def __init__(self, counts: np.ndarray, config: ModelConfig = ModelConfig()):
        counts = np.ascontiguousarray(counts, dtype=np.int64)
        if counts.shape != (DIGITS,) * 4:
            raise ValueError(f"counts must have shape (10,10,10,10), got {counts.shape}")
        if counts.min() < 0:
            raise ValueError("histogram counts must be non-negative")
        counts.flags.writeable = False
        self.counts = counts
        self.config = config
        self.total_pins = int(counts.sum())
        pooled = np.zeros(DIGITS, dtype=np.int64)
        for axis in range(4):
            other = tuple(a for a in range(4) if a != axis)
            pooled += counts.sum(axis=other)
        pooled.flags.writeable = False
        self.pooled_digit_counts = pooled
        self.total_digit_slots = 4 * self.total_pins

    @classmethod
    def train(cls, corpus: Corpus, config: ModelConfig = ModelConfig()) -> "TrainedModel":
        counts = np.bincount(corpus.codes, minlength=DIGITS**4).reshape((DIGITS,) * 4)
        return cls(counts, config)

    def with_config(self, config: ModelConfig) -> "TrainedModel":
        """Same histogram under a different smoothing config (counts are shared)."""
        clone = object.__new__(TrainedModel)
        clone.counts = self.counts
        clone.config = config
        clone.total_pins = self.total_pins
        clone.pooled_digit_counts = self.pooled_digit_counts
        clone.total_digit_slots = self.total_digit_slots
        return clone

    # -- count queries (exact integers, marginalizations of the histogram) --

    def pin_count(self, digits: tuple[int, ...]) -> int:
        return int(self.counts[tuple(digits)])

    def _context_slice(self, observation: Observation) -> np.ndarray:
        """Sub-tensor at the observed values; remaining axes follow ascending
        missing position order."""
        index: list[object] = [slice(None)] * 4
        for p, v in zip(observation.pattern.observed, observation.values):
            index[p - 1] = v
        return self.counts[tuple(index)]

    def context_count(self, observation: Observation) -> int:
        """N(C): how many training PINs match the observation at all observed positions."""
        return int(self._context_slice(observation).sum())

    def target_counts(self, observation: Observation, target_position: int) -> np.ndarray:
        """N(x,C) for all x: context matches with digit x at the target position,
        other missing positions marginalized out."""
        missing = observation.pattern.missing
        if target_position not in missing:
            raise ValueError(f"position {target_position} is not missing in {observation.pattern.label}")
        sub = self._context_slice(observation)
        axis = missing.index(target_position)
        other = tuple(a for a in range(sub.ndim) if a != axis)
        return sub.sum(axis=other) if other else sub

    # -- smoothed probabilities --

    def smoothed_conditional(self, observation: Observation, target_position: int, digit: int) -> float:
        """(N(x,C) + alpha) / (N(C) + alpha * 10). Returns 1/10 when N(C) = 0;
        the prior fallback is applied only at the completion-distribution level."""
        vec = self.target_counts(observation, target_position)
        alpha = self.config.alpha
        return float((vec[digit] + alpha) / (vec.sum() + alpha * DIGITS))

    def prior_probability(self, digit: int) -> float:
        """Global prior pooled over all four positions: (N(x) + alpha) / (N + alpha * 10)."""
        alpha = self.config.alpha
        return float(
            (self.pooled_digit_counts[digit] + alpha) / (self.total_digit_slots + alpha * DIGITS)
        )

    def _prior_vector(self) -> np.ndarray:
        alpha = self.config.alpha
        return (self.pooled_digit_counts + alpha) / (self.total_digit_slots + alpha * DIGITS)

    def joint_two_probability(self, observation: Observation, pair: tuple[int, int]) -> float:
        """Smoothed joint over two missing digits:
        (N([a,b,C]) + alpha) / (N(C) + alpha * 100)."""
        if observation.pattern.num_missing != 2:
            raise ValueError("joint estimation requires exactly two missing positions")
        sub = self._context_slice(observation)
        alpha = self.config.alpha
        return float((sub[pair] + alpha) / (sub.sum() + alpha * DIGITS**2))

    def completion_distribution(self, observation: Observation) -> CompletionDistribution:
        """Select the estimation path and return the normalized distribution.

        Path selection: unseen context -> prior fallback; one missing digit ->
        direct smoothed conditional; two missing with N(C) >= tau -> smoothed
        joint; otherwise (sparse pairs and all triples) -> independence product
        of per-position conditionals, renormalized.
        """
        pattern = observation.pattern
        m = pattern.num_missing
        alpha = self.config.alpha
        sub = self._context_slice(observation)
        n_c = int(sub.sum())

        if n_c == 0:
            prior = self._prior_vector()
            probs = prior
            for _ in range(m - 1):
                probs = np.multiply.outer(probs, prior)
            path = PATH_PRIOR_FALLBACK
        elif m == 1:
            return CompletionDistribution(pattern, (sub + alpha) / (n_c + alpha * DIGITS), PATH_DIRECT_SINGLE)
        elif m == 2 and n_c >= self.config.tau:
            return CompletionDistribution(pattern, (sub + alpha) / (n_c + alpha * DIGITS**2), PATH_JOINT)
        else:
            factors = []
            for axis in range(m):
                other = tuple(a for a in range(m) if a != axis)
                vec = sub.sum(axis=other)
                factors.append((vec + alpha) / (n_c + alpha * DIGITS))
            probs = factors[0]
            for vec in factors[1:]:
                probs = np.multiply.outer(probs, vec)
            path = PATH_INDEPENDENCE

        probs = probs / probs.sum()
        return CompletionDistribution(pattern, probs, path)

    # -- persistence --

    def save(self, path) -> None:
        """Text format: header, nonzero entries sorted by PIN string, TOTAL trailer."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"PINMODEL v1 alpha={self.config.alpha!r} tau={self.config.tau}\n")
            flat = self.counts.reshape(-1)
            for code in np.flatnonzero(flat):
                fh.write(f"{int(code):04d} {int(flat[code])}\n")
            fh.write(f"TOTAL {self.total_pins}\n")

    @classmethod
    def load(cls, path) -> "TrainedModel":
        counts = np.zeros((DIGITS,) * 4, dtype=np.int64)
        config = None
        declared_total = None
        last_code = -1
        with open(path, "r", encoding="utf-8", newline="\n") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw[:-1] if raw.endswith("\n") else raw
                if lineno == 1:
                    header = _HEADER.match(line)
                    if not header:
                        raise DataError(f"{path}: line 1: bad or unsupported model header: {line!r}")
                    try:
                        config = ModelConfig(alpha=float(header.group(1)), tau=int(header.group(2)))
                    except ValueError as exc:
                        raise DataError(f"{path}: line 1: {exc}") from exc
                    continue
                if declared_total is not None:
                    raise DataError(f"{path}: line {lineno}: content after TOTAL trailer")
                trailer = _TRAILER.match(line)
                if trailer:
                    declared_total = int(trailer.group(1))
                    continue
                entry = _ENTRY.match(line)
                if not entry:
                    raise DataError(f"{path}: line {lineno}: malformed entry: {line!r}")
                code = int(entry.group(1))
                if code <= last_code:
                    raise DataError(f"{path}: line {lineno}: entries out of order or duplicated")
                last_code = code
                counts[code_to_digits(code)] = int(entry.group(2))
        if config is None:
            raise DataError(f"{path}: empty model file (missing header)")
        model = cls(counts, config)
        if declared_total is not None and declared_total != model.total_pins:
            raise DataError(
                f"{path}: TOTAL mismatch: trailer says {declared_total}, entries sum to {model.total_pins}"
            )
        return model

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrainedModel):
            return NotImplemented
        return self.config == other.config and np.array_equal(self.counts, other.counts)


def train(corpus: Corpus, config: ModelConfig = ModelConfig()) -> TrainedModel:
    return TrainedModel.train(corpus, config)
