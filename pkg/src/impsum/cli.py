"""Command line interface: summarize, impute, evaluate, tune, stats."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .cooccurrence import density, write_matrix
from .corpus import load_corpus
from .experiment import (
    ASSOCIATION_THRESHOLD,
    DEFAULT_GRID,
    METHODS,
    ExperimentConfig,
    Pipeline,
    association_lines,
    make_folds,
    run_report,
    tune_lambda,
)
from .cooccurrence import associations_above
from .text import PROMPTS, StopwordList


def parse_grid(text: str) -> tuple:
    """``start:stop:step`` (inclusive) or a comma separated list."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}")
        count = int(round((stop - start) / step)) + 1
        return tuple(round(start + k * step, 10) for k in range(count))
    return tuple(float(x) for x in text.split(",") if x.strip())


def _methods(text: str) -> tuple:
    items = tuple(x.strip() for x in text.replace(",", " ").split() if x.strip())
    bad = [m for m in items if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    return items


def build_parser():
    parser = argparse.ArgumentParser(prog="impsum", description="Summarize short responses with an imputed concept-coverage ILP.")
    parser.add_argument("--config", help="JSON file whose keys override flag defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--corpus", required=True, help="corpus JSON Lines file")
        p.add_argument("--stopwords", help="stopword file, one word per line")
        p.add_argument("--max-iterations", type=int, default=500)
        p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("summarize", help="summarize one lecture/prompt document")
    common(p)
    p.add_argument("--lecture", required=True)
    p.add_argument("--prompt", required=True, choices=PROMPTS)
    p.add_argument("--method", default="ilp-impute", choices=METHODS)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--budget", type=int, default=30)

    p = sub.add_parser("impute", help="impute the corpus concept-sentence matrix")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--matrix-out")
    p.add_argument("--trace-out")
    p.add_argument("--associations", type=int, default=20, help="print this many imputed associations")

    p = sub.add_parser("evaluate", help="ROUGE table for several methods")
    common(p)
    p.add_argument("--methods", type=_methods, default=METHODS)
    p.add_argument("--budget", type=int, default=30)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="fixed lambda for ilp-impute (default: tune by cross-validation)")
    p.add_argument("--grid", type=parse_grid, default=DEFAULT_GRID)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="directory for summaries, table and association listings")

    p = sub.add_parser("tune", help="cross-validate lambda for ilp-impute")
    common(p)
    p.add_argument("--grid", type=parse_grid, default=DEFAULT_GRID)
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=30)

    p = sub.add_parser("stats", help="corpus statistics")
    common(p)
    return parser, sub


def _apply_config(parser, sub, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        cfg = json.loads(Path(known.config).read_text(encoding="utf-8"))
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        if "lambda" in cfg:
            cfg["lam"] = cfg.pop("lambda")
        if isinstance(cfg.get("grid"), str):
            cfg["grid"] = parse_grid(cfg["grid"])
        if isinstance(cfg.get("methods"), str):
            cfg["methods"] = _methods(cfg["methods"])
        for choice in sub.choices.values():
            choice.set_defaults(**cfg)
            for action in choice._actions:
                if action.dest in cfg:
                    action.required = False
    return parser.parse_args(argv)


def _stopwords(args):
    return StopwordList.from_file(args.stopwords) if args.stopwords else None


def _config(args, **extra) -> ExperimentConfig:
    return ExperimentConfig(max_iterations=args.max_iterations, rel_tolerance=args.tolerance, **extra)


def cmd_summarize(args, out):
    corpus = load_corpus(args.corpus)
    pipe = Pipeline(corpus, _stopwords(args), _config(args, word_budget=args.budget))
    key = (args.lecture, args.prompt)
    summary = pipe.summarize(key, args.method, args.lam)
    out.write(f"# {args.method} lecture={args.lecture} prompt={args.prompt} "
              f"words={summary.total_words}/{args.budget}\n")
    for s in pipe.summary_sentences(key, summary):
        out.write(f"- {s.text}\n")
    if key in corpus.references:
        scores = pipe.score(key, summary)
        out.write(" ".join(f"{m} F={100 * scores[m].f1:.1f}" for m in scores) + "\n")


def cmd_impute(args, out):
    pipe = Pipeline(load_corpus(args.corpus), _stopwords(args), _config(args))
    result = pipe.imputed(args.lam)
    if args.matrix_out:
        write_matrix(result.values, args.matrix_out)
    if args.trace_out:
        result.write_trace(args.trace_out)
    out.write(f"matrix: {pipe.matrix.n_concepts} concepts x {pipe.matrix.n_sentences} sentences\n")
    out.write(f"lambda={args.lam:g} iterations={result.iterations_run} converged={result.converged} "
              f"objective={result.final_objective:.6g}\n")
    out.write(f"density: binary {100 * density(pipe.matrix):.3f}% -> imputed {100 * density(result):.3f}%\n")
    assoc = associations_above(result, ASSOCIATION_THRESHOLD)
    out.write(f"imputed associations >= {ASSOCIATION_THRESHOLD}: {len(assoc)}\n")
    if assoc and args.associations > 0:
        out.write("\n".join(association_lines(pipe, assoc, args.associations)) + "\n")


def cmd_evaluate(args, out):
    config = _config(args, word_budget=args.budget, methods=args.methods, lam=args.lam,
                     lambda_grid=args.grid, folds=args.folds, seed=args.seed)
    report = run_report(load_corpus(args.corpus), config, args.out, _stopwords(args))
    out.write(report.table())


def cmd_tune(args, out):
    corpus = load_corpus(args.corpus)
    config = _config(args, word_budget=args.budget, lambda_grid=args.grid, folds=args.folds, seed=args.seed)
    pipe = Pipeline(corpus, _stopwords(args), config)
    folds = make_folds(corpus.annotated_lectures(), args.folds, args.seed)
    result = tune_lambda(pipe, folds, config)
    for k, fold in enumerate(result.folds, start=1):
        grid = " ".join(f"{lam:g}:{100 * f:.1f}" for lam, f in fold.tuning_rouge1_f.items())
        out.write(f"fold {k} test={','.join(fold.test_lectures)} lambda={fold.chosen_lambda:g} "
                  f"test R1-F={100 * fold.test_scores['rouge-1'].f1:.1f}\n  tuning R1-F by lambda: {grid}\n")
    out.write("mean over folds: " + " ".join(
        f"{m} R={100 * s.recall:.1f} P={100 * s.precision:.1f} F={100 * s.f1:.1f}" for m, s in result.mean_scores.items()
    ) + "\n")


def cmd_stats(args, out):
    pipe = Pipeline(load_corpus(args.corpus), _stopwords(args))
    for name, value in pipe.stats().as_rows():
        out.write(f"{name:<30}{value}\n")


COMMANDS = {
    "summarize": cmd_summarize,
    "impute": cmd_impute,
    "evaluate": cmd_evaluate,
    "tune": cmd_tune,
    "stats": cmd_stats,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser, sub = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config(parser, sub, argv)
    except (OSError, ValueError) as exc:
        print(f"impsum: error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args, out)
    except (OSError, ValueError, KeyError, RuntimeError, FloatingPointError) as exc:
        print(f"impsum: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
