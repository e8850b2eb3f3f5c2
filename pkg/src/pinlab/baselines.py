"""Comparison scorers derived from the same joint PIN histogram.

All three baselines satisfy the scorer contract (normalized, strictly
positive distributions) and all their count tables are exact integer
marginalizations of the histogram they are built from.
"""

from __future__ import annotations

import numpy as np

from .corpus import Corpus
from .masks import MaskPattern, Observation
from .model import (
    DIGITS,
    PATH_DIRECT_SINGLE,
    PATH_INDEPENDENCE,
    PATH_JOINT,
    CompletionDistribution,
    TrainedModel,
)


def _pair_tables(counts: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """10x10 co-occurrence counts for every ordered position pair (i < j), 1-based."""
    tables = {}
    for i in range(1, 5):
        for j in range(i + 1, 5):
            other = tuple(a for a in range(4) if a + 1 not in (i, j))
            tables[(i, j)] = counts.sum(axis=other)
    return tables


def _check_histogram(counts: np.ndarray) -> np.ndarray:
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (DIGITS,) * 4:
        raise ValueError(f"expected a (10,10,10,10) histogram, got {counts.shape}")
    return counts


def _pair_conditional(tables, t: int, j: int, observed_digit: int, alpha: float) -> np.ndarray:
    """Smoothed P(d_t = v | d_j = observed_digit) for all v."""
    if t < j:
        col = tables[(t, j)][:, observed_digit]
    else:
        col = tables[(j, t)][observed_digit, :]
    return (col + alpha) / (col.sum() + alpha * DIGITS)


class BigramModel:
    """Scores each missing position off its nearest observed neighbor.

    Ties in neighbor distance prefer the higher-index (right) neighbor. On
    the pattern d1d3|d2d4 this reduces exactly to P(d1|d2) * P(d3|d4).
    """

    def __init__(self, counts: np.ndarray, alpha: float = 1.0):
        counts = _check_histogram(counts)
        self.alpha = float(alpha)
        self.tables = _pair_tables(counts)

    @classmethod
    def train(cls, corpus: Corpus, alpha: float = 1.0) -> "BigramModel":
        return cls(TrainedModel.train(corpus).counts, alpha)

    @staticmethod
    def neighbor(pattern: MaskPattern, t: int) -> int:
        return min(pattern.observed, key=lambda j: (abs(t - j), -j))

    def completion_distribution(self, observation: Observation) -> CompletionDistribution:
        pattern = observation.pattern
        probs = None
        for t in pattern.missing:
            j = self.neighbor(pattern, t)
            vec = _pair_conditional(self.tables, t, j, observation.value_at(j), self.alpha)
            probs = vec if probs is None else np.multiply.outer(probs, vec)
        probs = probs / probs.sum()
        path = PATH_DIRECT_SINGLE if pattern.num_missing == 1 else PATH_INDEPENDENCE
        return CompletionDistribution(pattern, probs, path)


class MarkovChainModel:
    """Position-homogeneous first-order chain over the four digits.

    The initial distribution comes from the first-digit marginal; the single
    transition matrix pools the three adjacent position pairs. Conditioning on
    an observation is exact: the full 10^4 sequence distribution is enumerated
    once and sliced, then renormalized over the candidate completions.
    """

    def __init__(self, counts: np.ndarray, alpha: float = 1.0):
        counts = _check_histogram(counts)
        self.alpha = float(alpha)
        first = counts.sum(axis=(1, 2, 3))
        transitions = np.zeros((DIGITS, DIGITS), dtype=np.int64)
        for i in range(3):
            other = tuple(a for a in range(4) if a not in (i, i + 1))
            transitions += counts.sum(axis=other)
        self.initial = (first + alpha) / (first.sum() + alpha * DIGITS)
        rows = transitions.sum(axis=1, keepdims=True)
        self.transition = (transitions + alpha) / (rows + alpha * DIGITS)
        # Exact joint over all 10^4 sequences: pi(a) A(a,b) A(b,c) A(c,d).
        self.sequence_probs = np.einsum(
            "a,ab,bc,cd->abcd", self.initial, self.transition, self.transition, self.transition
        )

    @classmethod
    def train(cls, corpus: Corpus, alpha: float = 1.0) -> "MarkovChainModel":
        return cls(TrainedModel.train(corpus).counts, alpha)

    def completion_distribution(self, observation: Observation) -> CompletionDistribution:
        index: list[object] = [slice(None)] * 4
        for p, v in zip(observation.pattern.observed, observation.values):
            index[p - 1] = v
        sub = self.sequence_probs[tuple(index)]
        return CompletionDistribution(observation.pattern, sub / sub.sum(), PATH_JOINT)


class NaiveBayesModel:
    """Per-position posterior from a digit-class prior times observed-digit likelihoods.

    For each missing position t: P(d_t = v | obs) is proportional to
    P_t(v) * prod over observed j of P(o_j | d_t = v), with every factor
    add-alpha smoothed over the 10 outcomes. Missing positions are treated
    independently and the product is renormalized.
    """

    def __init__(self, counts: np.ndarray, alpha: float = 1.0):
        counts = _check_histogram(counts)
        self.alpha = float(alpha)
        self.total_pins = int(counts.sum())
        self.position_counts = np.stack(
            [counts.sum(axis=tuple(a for a in range(4) if a != p)) for p in range(4)]
        )
        self.tables = _pair_tables(counts)

    @classmethod
    def train(cls, corpus: Corpus, alpha: float = 1.0) -> "NaiveBayesModel":
        return cls(TrainedModel.train(corpus).counts, alpha)

    def _position_posterior(self, observation: Observation, t: int) -> np.ndarray:
        alpha = self.alpha
        class_counts = self.position_counts[t - 1]
        post = (class_counts + alpha) / (self.total_pins + alpha * DIGITS)
        for j in observation.pattern.observed:
            o = observation.value_at(j)
            if t < j:
                cooc = self.tables[(t, j)][:, o]
            else:
                cooc = self.tables[(j, t)][o, :]
            post = post * (cooc + alpha) / (class_counts + alpha * DIGITS)
        return post / post.sum()

    def completion_distribution(self, observation: Observation) -> CompletionDistribution:
        pattern = observation.pattern
        probs = None
        for t in pattern.missing:
            vec = self._position_posterior(observation, t)
            probs = vec if probs is None else np.multiply.outer(probs, vec)
        probs = probs / probs.sum()
        path = PATH_DIRECT_SINGLE if pattern.num_missing == 1 else PATH_INDEPENDENCE
        return CompletionDistribution(pattern, probs, path)
