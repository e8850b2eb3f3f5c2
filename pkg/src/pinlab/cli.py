"""pinlab command line: extract, train, evaluate, predict, sensitivity.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 data-format error.
All diagnostics go to stderr; reports and predictions are the only stdout.
"""

from __future__ import annotations

import argparse
import sys

from .baselines import BigramModel, MarkovChainModel, NaiveBayesModel
from .corpus import (
    SplitConfig,
    corpus_fingerprint,
    extract_pins_with_stats,
    load_corpus,
    save_corpus,
    split_corpus,
)
from .errors import DataError
from .evaluation import evaluate_suite, report_to_json_bytes, tau_sensitivity
from .inference import rank_completions
from .masks import MaskPattern, Observation, all_patterns, parse_pattern
from .model import ModelConfig, TrainedModel

MODEL_NAMES = ("proposed", "bigram", "markov", "nb")
DEFAULT_TAUS = (1, 5, 10, 20, 50)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 by default; the exit-code contract reserves 2 for I/O.
        raise ValueError(message)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"{flag} expects a comma-separated integer list: {text!r}") from None


def _parse_scenarios(text: str) -> list[MaskPattern]:
    if text.strip().lower() == "all":
        return all_patterns()
    return [parse_pattern(tok) for tok in text.split(",") if tok.strip()]


def _parse_models(text: str) -> list[str]:
    if text.strip().lower() == "all":
        return list(MODEL_NAMES)
    names = [tok.strip() for tok in text.split(",") if tok.strip()]
    for name in names:
        if name not in MODEL_NAMES:
            raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODEL_NAMES)}")
    return names


def _build_scorers(names, train_corpus, config: ModelConfig):
    histogram = TrainedModel.train(train_corpus, config)
    scorers = {}
    for name in names:
        if name == "proposed":
            scorers[name] = histogram
        elif name == "bigram":
            scorers[name] = BigramModel(histogram.counts, config.alpha)
        elif name == "markov":
            scorers[name] = MarkovChainModel(histogram.counts, config.alpha)
        elif name == "nb":
            scorers[name] = NaiveBayesModel(histogram.counts, config.alpha)
    return scorers


def _add_model_flags(sub) -> None:
    sub.add_argument("--alpha", type=float, default=1.0, help="Laplace smoothing pseudo-count")
    sub.add_argument("--tau", type=int, default=10, help="min context count for direct joint estimation")


def _add_split_flags(sub) -> None:
    sub.add_argument("--seed", type=int, default=39, help="shuffle seed for the train/test split")
    sub.add_argument("--train-fraction", type=float, default=0.8, help="train share of the split")


def cmd_extract(args) -> int:
    with open(args.input, "rb") as fh:
        corpus, stats = extract_pins_with_stats(line.rstrip(b"\n") for line in fh)
    save_corpus(corpus, args.output)
    _log(f"lines read: {stats.lines_read}")
    _log(f"lines skipped: {stats.lines_skipped}")
    _log(f"pins extracted: {stats.pins_extracted}")
    return 0


def cmd_train(args) -> int:
    corpus = load_corpus(args.corpus)
    if args.no_split:
        train_part = corpus
    else:
        train_part, _ = split_corpus(corpus, SplitConfig(args.train_fraction, args.seed))
        if len(train_part) == 0:
            raise DataError("training split is empty; use --no-split or a larger corpus")
    model = TrainedModel.train(train_part, ModelConfig(args.alpha, args.tau))
    model.save(args.model)
    _log(f"trained on {len(train_part)} pins -> {args.model}")
    return 0


def _corpus_block(path: str, corpus, train_part, test_part) -> dict:
    return {
        "path": str(path),
        "pins": len(corpus),
        "fingerprint": corpus_fingerprint(corpus),
        "train_pins": len(train_part),
        "test_pins": len(test_part),
    }


def cmd_evaluate(args) -> int:
    corpus = load_corpus(args.corpus)
    split_cfg = SplitConfig(args.train_fraction, args.seed)
    train_part, test_part = split_corpus(corpus, split_cfg)
    patterns = _parse_scenarios(args.scenarios)
    names = _parse_models(args.models)
    ks = _parse_int_list(args.ks, "--ks")
    config = ModelConfig(args.alpha, args.tau)
    scorers = _build_scorers(names, train_part, config)
    results = evaluate_suite(scorers, test_part, patterns, ks)
    report = {
        "schema_version": "report_v1",
        "kind": "evaluation",
        "config": {
            "alpha": config.alpha,
            "tau": config.tau,
            "seed": split_cfg.seed,
            "train_fraction": split_cfg.train_fraction,
            "ks": ks,
            "scenarios": [p.label for p in patterns],
            "models": names,
        },
        "corpus": _corpus_block(args.corpus, corpus, train_part, test_part),
        "results": {name: [r.to_dict() for r in results[name]] for name in names},
    }
    with open(args.report, "wb") as fh:
        fh.write(report_to_json_bytes(report))
    _log(f"evaluated {len(names)} model(s) x {len(patterns)} scenario(s) -> {args.report}")
    return 0


def cmd_predict(args) -> int:
    observation = Observation.from_mask_string(args.observation)
    model = TrainedModel.load(args.model)
    dist = model.completion_distribution(observation)
    ranked = rank_completions(model, observation)
    for candidate, prob in ranked[:10]:
        text = "".join(str(d) for d in candidate)
        print(f"{text} {prob:.10g} {dist.used_path}")
    return 0


def cmd_sensitivity(args) -> int:
    corpus = load_corpus(args.corpus)
    split_cfg = SplitConfig(args.train_fraction, args.seed)
    train_part, test_part = split_corpus(corpus, split_cfg)
    pattern = parse_pattern(args.scenario)
    if pattern.num_missing != 2:
        raise ValueError(f"sensitivity requires a two-missing-digit scenario, got {pattern.label}")
    taus = _parse_int_list(args.taus, "--taus")
    ks = _parse_int_list(args.ks, "--ks")
    results = tau_sensitivity(train_part, test_part, pattern, taus, alpha=args.alpha, ks=ks)
    report = {
        "schema_version": "report_v1",
        "kind": "tau_sensitivity",
        "config": {
            "alpha": args.alpha,
            "taus": taus,
            "seed": split_cfg.seed,
            "train_fraction": split_cfg.train_fraction,
            "ks": ks,
            "scenario": pattern.label,
        },
        "corpus": _corpus_block(args.corpus, corpus, train_part, test_part),
        "results": [dict(tau=t, **results[t].to_dict()) for t in taus],
    }
    with open(args.report, "wb") as fh:
        fh.write(report_to_json_bytes(report))
    _log(f"sensitivity over taus {taus} on {pattern.label} -> {args.report}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="pinlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract 4-digit PINs from a password dump")
    p.add_argument("input"), p.add_argument("output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train a model from a corpus file")
    p.add_argument("corpus"), p.add_argument("model")
    _add_model_flags(p), _add_split_flags(p)
    p.add_argument("--no-split", action="store_true", help="train on the whole corpus")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="split, train and evaluate models across scenarios")
    p.add_argument("corpus")
    p.add_argument("--report", required=True, help="output JSON report path")
    _add_model_flags(p), _add_split_flags(p)
    p.add_argument("--scenarios", default="all", help="comma list of tokens like d1,d1d2 or 'all'")
    p.add_argument("--models", default="all", help=f"comma list from {','.join(MODEL_NAMES)} or 'all'")
    p.add_argument("--ks", default="1,3,5,10", help="comma list of top-k cutoffs")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="rank completions for a partial PIN like ?2?4")
    p.add_argument("model"), p.add_argument("observation")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sensitivity", help="sweep the joint-estimation gate tau")
    p.add_argument("corpus")
    p.add_argument("--report", required=True, help="output JSON report path")
    p.add_argument("--alpha", type=float, default=1.0)
    _add_split_flags(p)
    p.add_argument("--scenario", default="d1d2", help="two-missing-digit scenario token")
    p.add_argument("--taus", default=",".join(str(t) for t in DEFAULT_TAUS))
    p.add_argument("--ks", default="1,3,5,10")
    p.set_defaults(func=cmd_sensitivity)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except DataError as exc:
        _log(f"pinlab: data error: {exc}")
        return 3
    except OSError as exc:
        _log(f"pinlab: i/o error: {exc}")
        return 2
    except ValueError as exc:
        _log(f"pinlab: usage error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
