"""Scenario evaluation: accuracy, macro metrics, top-k success, guess ranks.

Test records are tallied by (context, truth) through the joint test
histogram, so a scorer is queried once per distinct context and all
aggregates are exact integer reductions. This makes evaluation deterministic
and order-independent by construction while remaining record-equivalent to a
per-PIN loop.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus
from .errors import DataError
from .inference import Scorer, descending_order
from .masks import MaskPattern, Observation, candidate_from_index
from .model import ModelConfig, TrainedModel

_Z95 = 1.959964


@dataclass(frozen=True)
class ConfusionTally:
    """Sparse (true candidate index, predicted candidate index) -> count,
    over the full 10^|M| class space."""

    space: int
    counts: Mapping[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True)
class ScenarioResult:
    pattern: MaskPattern
    n: int
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_class_recall: tuple[float, ...]
    topk: dict[int, float]
    expected_rank: float
    ci95: tuple[float, float]

    def to_dict(self) -> dict:
        m = self.pattern.num_missing
        return {
            "pattern": {
                "label": self.pattern.label,
                "missing": list(self.pattern.missing),
                "observed": list(self.pattern.observed),
            },
            "n": self.n,
            "accuracy": self.accuracy,
            "ci95": [self.ci95[0], self.ci95[1]],
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "expected_rank": self.expected_rank,
            "top_k": {str(k): v for k, v in self.topk.items()},
            "per_class_recall": {
                "".join(str(d) for d in candidate_from_index(i, m)): r
                for i, r in enumerate(self.per_class_recall)
            },
        }


def wald_interval(successes: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Normal-approximation proportion interval, clipped to [0, 1]."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= successes <= n:
        raise ValueError(f"successes must be in 0..{n}: {successes}")
    z = _Z95 if level == 0.95 else NormalDist().inv_cdf((1 + level) / 2)
    p = successes / n
    half = z * (p * (1 - p) / n) ** 0.5
    return (max(0.0, p - half), min(1.0, p + half))


def topk_success(ranks: Sequence[int], k: int) -> float:
    """Fraction of 1-based ranks at or under k."""
    if k < 1:
        raise ValueError(f"k must be >= 1: {k}")
    if not ranks:
        raise ValueError("no ranks")
    return sum(1 for r in ranks if r <= k) / len(ranks)


def expected_guess_rank(ranks: Sequence[int]) -> float:
    if not ranks:
        raise ValueError("no ranks")
    return sum(ranks) / len(ranks)


def macro_metrics(tally: ConfusionTally) -> tuple[float, float, float, tuple[float, ...]]:
    """Macro precision/recall/F1 over ALL classes (zero-support classes count
    as zeros), plus per-class recall. 0/0 ratios resolve to 0."""
    if tally.total <= 0:
        raise ValueError("empty confusion tally")
    tp = np.zeros(tally.space, dtype=np.int64)
    support = np.zeros(tally.space, dtype=np.int64)
    predicted = np.zeros(tally.space, dtype=np.int64)
    for (t, p), c in tally.counts.items():
        support[t] += c
        predicted[p] += c
        if t == p:
            tp[t] += c
    with np.errstate(invalid="ignore"):
        precision = np.where(predicted > 0, tp / np.maximum(predicted, 1), 0.0)
        recall = np.where(support > 0, tp / np.maximum(support, 1), 0.0)
        denom = precision + recall
        f1 = np.where(denom > 0, 2 * precision * recall / np.where(denom > 0, denom, 1), 0.0)
    return (
        float(precision.mean()),
        float(recall.mean()),
        float(f1.mean()),
        tuple(float(r) for r in recall),
    )


def _validate_ks(ks: Sequence[int], space: int) -> list[int]:
    out = []
    for k in ks:
        k = int(k)
        if k < 1:
            raise ValueError(f"k must be >= 1: {k}")
        if k > space:
            raise ValueError(f"k exceeds candidate space: {k} > {space}")
        out.append(k)
    return out


def evaluate_scenario(
    scorer: Scorer,
    test: Corpus,
    pattern: MaskPattern,
    ks: Sequence[int] = (1, 3, 5, 10),
) -> ScenarioResult:
    """Mask every test PIN per the pattern, query the scorer once per distinct
    context, and assemble all metrics from exact weighted tallies."""
    n = len(test)
    if n == 0:
        raise DataError("empty test set")
    space = pattern.candidate_space
    ks = _validate_ks(ks, space)

    hist = np.bincount(test.codes, minlength=10**4).reshape((10,) * 4)
    obs_axes = tuple(p - 1 for p in pattern.observed)
    mis_axes = tuple(p - 1 for p in pattern.missing)
    grouped = np.transpose(hist, obs_axes + mis_axes).reshape(10 ** len(obs_axes), space)

    correct = 0
    rank_sum = 0
    topk_hits = {k: 0 for k in ks}
    confusion: dict[tuple[int, int], int] = {}

    for ctx_index in range(grouped.shape[0]):
        weights = grouped[ctx_index]
        total = int(weights.sum())
        if total == 0:
            continue
        ctx_digits = candidate_from_index(ctx_index, len(obs_axes))
        observation = Observation(pattern, ctx_digits)
        flat = scorer.completion_distribution(observation).flat
        order = descending_order(flat)
        ranks = np.empty(space, dtype=np.int64)
        ranks[order] = np.arange(1, space + 1)
        pred = int(order[0])

        correct += int(weights[pred])
        rank_sum += int((weights * ranks).sum())
        for k in ks:
            topk_hits[k] += int(weights[ranks <= k].sum())
        for t in np.flatnonzero(weights):
            confusion[(int(t), pred)] = confusion.get((int(t), pred), 0) + int(weights[t])

    tally = ConfusionTally(space, confusion)
    precision, recall, f1, per_class_recall = macro_metrics(tally)
    return ScenarioResult(
        pattern=pattern,
        n=n,
        accuracy=correct / n,
        macro_precision=precision,
        macro_recall=recall,
        macro_f1=f1,
        per_class_recall=per_class_recall,
        topk={k: topk_hits[k] / n for k in ks},
        expected_rank=rank_sum / n,
        ci95=wald_interval(correct, n),
    )


def _worker_cap() -> int:
    raw = os.environ.get("PINLAB_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def evaluate_suite(
    scorers: Mapping[str, Scorer],
    test: Corpus,
    patterns: Sequence[MaskPattern],
    ks: Sequence[int] = (1, 3, 5, 10),
) -> dict[str, list[ScenarioResult]]:
    """Every scorer over every pattern. Worker parallelism is capped by the
    PINLAB_THREADS env var; results are assembled in a fixed order either way."""
    tasks = [(name, pattern) for name in scorers for pattern in patterns]
    workers = min(_worker_cap(), max(1, len(tasks)))
    if workers == 1:
        results = [evaluate_scenario(scorers[name], test, pattern, ks) for name, pattern in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda t: evaluate_scenario(scorers[t[0]], test, t[1], ks), tasks)
            )
    out: dict[str, list[ScenarioResult]] = {name: [] for name in scorers}
    for (name, _), result in zip(tasks, results):
        out[name].append(result)
    return out


def tau_sensitivity(
    train: Corpus,
    test: Corpus,
    pattern: MaskPattern,
    taus: Iterable[int],
    alpha: float = 1.0,
    ks: Sequence[int] = (1, 3, 5, 10),
) -> dict[int, ScenarioResult]:
    """Re-evaluate the joint-vs-independence gate per tau. The histogram is
    tau-independent, so it is trained once and shared."""
    if pattern.num_missing != 2:
        raise ValueError("tau sensitivity applies to patterns with exactly two missing digits")
    base = TrainedModel.train(train, ModelConfig(alpha=alpha, tau=0))
    out: dict[int, ScenarioResult] = {}
    for tau in taus:
        model = base.with_config(ModelConfig(alpha=alpha, tau=tau))
        out[int(tau)] = evaluate_scenario(model, test, pattern, ks)
    return out


def report_to_json_bytes(report: dict) -> bytes:
    """Canonical report serialization: stable key order, lossless floats, LF."""
    return (json.dumps(report, indent=2, allow_nan=False) + "\n").encode("utf-8")
