"""pinlab: quantify 4-digit PIN security degradation under partial digit exposure."""

from .baselines import BigramModel, MarkovChainModel, NaiveBayesModel
from .corpus import (
    Corpus,
    SplitConfig,
    corpus_fingerprint,
    extract_pins,
    extract_pins_with_stats,
    load_corpus,
    save_corpus,
    split_corpus,
)
from .errors import DataError
from .evaluation import (
    ConfusionTally,
    ScenarioResult,
    evaluate_scenario,
    evaluate_suite,
    expected_guess_rank,
    macro_metrics,
    tau_sensitivity,
    topk_success,
    wald_interval,
)
from .inference import Scorer, UniformScorer, predict, rank_completions, true_rank
from .masks import MaskPattern, Observation, all_patterns, observe, truth
from .model import CompletionDistribution, ModelConfig, TrainedModel, train

__version__ = "0.1.0"

__all__ = [
    "BigramModel",
    "CompletionDistribution",
    "ConfusionTally",
    "Corpus",
    "DataError",
    "MarkovChainModel",
    "MaskPattern",
    "ModelConfig",
    "NaiveBayesModel",
    "Observation",
    "ScenarioResult",
    "Scorer",
    "SplitConfig",
    "TrainedModel",
    "UniformScorer",
    "all_patterns",
    "corpus_fingerprint",
    "evaluate_scenario",
    "evaluate_suite",
    "expected_guess_rank",
    "extract_pins",
    "extract_pins_with_stats",
    "load_corpus",
    "macro_metrics",
    "observe",
    "predict",
    "rank_completions",
    "save_corpus",
    "split_corpus",
    "tau_sensitivity",
    "topk_success",
    "train",
    "true_rank",
    "truth",
    "wald_interval",
]
