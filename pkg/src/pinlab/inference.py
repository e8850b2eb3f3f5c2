"""Ranked predictions and guess ranks on top of any completion scorer."""

from __future__ import annotations

from typing import Protocol

import numpy as np

from .masks import Observation, candidate_from_index, candidate_index
from .model import PATH_PRIOR_FALLBACK, CompletionDistribution


class Scorer(Protocol):
    """Anything that maps an observation to a normalized completion distribution."""

    def completion_distribution(self, observation: Observation) -> CompletionDistribution: ...


class UniformScorer:
    """Degenerate no-information scorer; useful as a floor reference and in tests."""

    def completion_distribution(self, observation: Observation) -> CompletionDistribution:
        m = observation.pattern.num_missing
        probs = np.full((10,) * m, 10.0 ** -m)
        return CompletionDistribution(observation.pattern, probs, PATH_PRIOR_FALLBACK)


def descending_order(flat_probs: np.ndarray) -> np.ndarray:
    """Candidate indices by descending probability; ties broken by ascending
    lexicographic (= candidate index) order via the stable sort."""
    return np.argsort(-flat_probs, kind="stable")


def rank_lookup(flat_probs: np.ndarray) -> np.ndarray:
    """rank_lookup[i] is the 1-based rank of candidate index i."""
    order = descending_order(flat_probs)
    ranks = np.empty(order.size, dtype=np.int64)
    ranks[order] = np.arange(1, order.size + 1)
    return ranks


def rank_completions(scorer: Scorer, observation: Observation) -> list[tuple[tuple[int, ...], float]]:
    """Total deterministic order over the full candidate space."""
    dist = scorer.completion_distribution(observation)
    flat = dist.flat
    m = observation.pattern.num_missing
    return [(candidate_from_index(int(i), m), float(flat[i])) for i in descending_order(flat)]


def predict(scorer: Scorer, observation: Observation) -> tuple[int, ...]:
    dist = scorer.completion_distribution(observation)
    flat = dist.flat
    return candidate_from_index(int(descending_order(flat)[0]), observation.pattern.num_missing)


def true_rank(scorer: Scorer, observation: Observation, truth: tuple[int, ...]) -> int:
    """1-based position of the true completion in the ranked candidate list."""
    m = observation.pattern.num_missing
    truth = tuple(int(d) for d in truth)
    if len(truth) != m or any(not 0 <= d <= 9 for d in truth):
        raise ValueError(f"truth must be {m} digits for pattern {observation.pattern.label}: {truth}")
    dist = scorer.completion_distribution(observation)
    return int(rank_lookup(dist.flat)[candidate_index(truth)])
