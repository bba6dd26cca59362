"""Summarization pipeline, fold splits, lambda tuning and the results table."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import baselines, ilp
from .cooccurrence import associations_above, build_matrix, density
from .corpus import Corpus
from .rouge import METRICS, RougeScore, macro_average, score_all
from .softimpute import ImputeConfig, ImputedMatrix, soft_impute
from .text import StopwordList, corpus_sentences, corpus_stats, default_stopwords, extract_concepts, tokenize

logger = logging.getLogger(__name__)

METHODS = ("ilp-impute", "ilp-baseline", "sumbasic", "lexrank")
DEFAULT_GRID = tuple(round(0.5 * k, 1) for k in range(11))
ASSOCIATION_THRESHOLD = 0.9


@dataclass
class ExperimentConfig:
    word_budget: int = 30
    lambda_grid: tuple = DEFAULT_GRID
    folds: int = 3
    methods: tuple = METHODS
    seed: int = 0
    lam: Optional[float] = None  # fixed lambda for ilp-impute; None tunes by cross-validation
    max_iterations: int = 500
    rel_tolerance: float = 1e-6

    def __post_init__(self):
        self.lambda_grid = tuple(float(x) for x in self.lambda_grid)
        self.methods = tuple(self.methods)
        if self.word_budget <= 0:
            raise ValueError("word budget must be positive")
        if not self.lambda_grid or min(self.lambda_grid) < 0:
            raise ValueError("lambda grid must be non-empty and non-negative")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown or not self.methods:
            raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
        if self.folds < 1:
            raise ValueError("folds must be >= 1")

    def impute_config(self, lam: float) -> ImputeConfig:
        return ImputeConfig(lam=lam, max_iterations=self.max_iterations, rel_tolerance=self.rel_tolerance)


class Pipeline:
    """Tokenized corpus with its global concept-sentence matrix.

    The matrix covers every sentence of every lecture so that imputation can
    share statistics across documents. Imputed matrices are cached per
    lambda.
    """

    def __init__(self, corpus: Corpus, stopwords: Optional[StopwordList] = None, config: Optional[ExperimentConfig] = None):
        self.corpus = corpus
        self.stopwords = stopwords or default_stopwords()
        self.config = config or ExperimentConfig()
        self.sentences = corpus_sentences(corpus.responses)
        if not self.sentences:
            raise ValueError("corpus has no sentences")
        self.concepts = extract_concepts(self.sentences, self.stopwords)
        self.concept_index = {c.bigram: c.concept_id for c in self.concepts}
        self.matrix = build_matrix(self.sentences, self.concepts)
        self.doc_columns: dict = {}
        for s in self.sentences:
            self.doc_columns.setdefault(s.source.document_key, []).append(s.sentence_id)
        self._imputed: dict = {}
        self._doc_concepts: dict = {}

    def stats(self):
        return corpus_stats(self.sentences, self.concepts)

    def imputed(self, lam: float) -> ImputedMatrix:
        lam = float(lam)
        if lam not in self._imputed:
            self._imputed[lam] = soft_impute(self.matrix, self.config.impute_config(lam))
            res = self._imputed[lam]
            logger.info("imputed lambda=%g in %d iterations (converged=%s)", lam, res.iterations_run, res.converged)
        return self._imputed[lam]

    def document_sentences(self, key):
        if key not in self.doc_columns:
            raise KeyError(f"no responses for lecture {key[0]!r}, prompt {key[1]!r}")
        return [self.sentences[j] for j in self.doc_columns[key]]

    def document_concepts(self, key):
        """Concepts of one document, weighted by their sentence frequency in it."""
        if key not in self._doc_concepts:
            self._doc_concepts[key] = extract_concepts(self.document_sentences(key), self.stopwords)
        return self._doc_concepts[key]

    def imputed_problem(self, key, lam: float, word_budget: int) -> ilp.SelectionProblem:
        sents = self.document_sentences(key)
        local = self.document_concepts(key)
        rows = [self.concept_index[c.bigram] for c in local]
        cols = self.doc_columns[key]
        values = self.imputed(lam).values[np.ix_(rows, cols)]
        return baselines.document_problem(sents, local, values, word_budget, ilp.CONTINUOUS)

    def summarize(self, key, method: str, lam: Optional[float] = None, word_budget: Optional[int] = None) -> ilp.Summary:
        """Summary of one (lecture, prompt) document; indices are local to it."""
        budget = self.config.word_budget if word_budget is None else word_budget
        sents = self.document_sentences(key)
        if method == "ilp-impute":
            if lam is None:
                raise ValueError("ilp-impute needs a lambda")
            if not self.document_concepts(key):
                return ilp.Summary((), np.zeros(0), 0.0, 0)
            return ilp.solve_exact(self.imputed_problem(key, lam, budget))
        if method == "ilp-baseline":
            return baselines.ilp_baseline(sents, self.document_concepts(key), budget)
        if method == "sumbasic":
            return baselines.sumbasic(sents, budget, self.stopwords)
        if method == "lexrank":
            return baselines.lexrank(sents, baselines.BaselineConfig(word_budget=budget))
        raise ValueError(f"unknown method {method!r}")

    def summary_sentences(self, key, summary: ilp.Summary):
        sents = self.document_sentences(key)
        return [sents[j] for j in summary.selected]

    def summary_tokens(self, key, summary: ilp.Summary) -> list[str]:
        return [t for s in self.summary_sentences(key, summary) for t in s.tokens]

    def reference_tokens(self, key) -> list[str]:
        return tokenize(self.corpus.reference_text(key))

    def score(self, key, summary: ilp.Summary) -> dict:
        return score_all(self.summary_tokens(key, summary), self.reference_tokens(key))


def make_folds(lectures: Sequence[str], folds: int, seed: int = 0) -> list[list[str]]:
    """Shuffle ``lectures`` with ``seed`` and deal them round-robin into folds."""
    lectures = sorted(set(lectures))
    if folds < 1 or len(lectures) < folds:
        raise ValueError(f"cannot split {len(lectures)} lectures into {folds} folds")
    rng = random.Random(seed)
    rng.shuffle(lectures)
    out = [[] for _ in range(folds)]
    for k, lecture in enumerate(lectures):
        out[k % folds].append(lecture)
    return [sorted(f) for f in out]


@dataclass
class FoldResult:
    test_lectures: list
    chosen_lambda: float
    tuning_rouge1_f: dict
    test_scores: dict


@dataclass
class TuneResult:
    folds: list
    mean_scores: dict

    def chosen_lambdas(self) -> list:
        return [f.chosen_lambda for f in self.folds]


def _mean_scores(pipe: Pipeline, keys, method: str, lam: Optional[float]) -> dict:
    per_doc = [pipe.score(k, pipe.summarize(k, method, lam)) for k in keys]
    return {m: macro_average([d[m] for d in per_doc]) for m in METRICS}


def _documents_of(corpus: Corpus, lectures) -> list:
    lectures = set(lectures)
    return [k for k in corpus.annotated_documents() if k[0] in lectures]


def tune_lambda(pipe: Pipeline, folds: Sequence[Sequence[str]], config: Optional[ExperimentConfig] = None) -> TuneResult:
    """Cross-validated lambda choice for ilp-impute.

    For every fold, each grid value is scored by mean ROUGE-1 F over the
    documents of the other folds; the best (smallest on ties) is evaluated on
    the held-out fold. Reported scores are means over folds.
    """
    config = config or pipe.config
    annotated = set(pipe.corpus.annotated_lectures())
    missing = sorted(l for f in folds for l in f if l not in annotated)
    if missing:
        raise ValueError(f"lectures without reference summaries: {missing}")
    results = []
    for k, test in enumerate(folds):
        tuning = [l for j, f in enumerate(folds) if j != k for l in f]
        if set(tuning) & set(test):
            raise ValueError("a lecture appears in both the tuning and the test folds")
        tune_docs = _documents_of(pipe.corpus, tuning) if tuning else _documents_of(pipe.corpus, test)
        grid_scores = {}
        for lam in config.lambda_grid:
            grid_scores[lam] = _mean_scores(pipe, tune_docs, "ilp-impute", lam)["rouge-1"].f1
        best = min(config.lambda_grid, key=lambda lam: (-grid_scores[lam], lam))
        test_scores = _mean_scores(pipe, _documents_of(pipe.corpus, test), "ilp-impute", best)
        results.append(FoldResult(list(test), best, grid_scores, test_scores))
    mean = {m: macro_average([f.test_scores[m] for f in results]) for m in METRICS}
    return TuneResult(results, mean)


@dataclass
class MethodRow:
    method: str
    scores: dict
    summaries: dict = field(default_factory=dict)


@dataclass
class Report:
    rows: list
    binary_density: float
    imputed_density: dict
    lambdas: dict
    associations: dict

    def table(self) -> str:
        header1 = f"{'':<14}|{'ROUGE-1':^21}|{'ROUGE-2':^21}|{'ROUGE-SU4':^21}"
        header2 = f"{'System':<14}|" + "|".join([f"{'R':>7}{'P':>7}{'F':>7}"] * 3)
        lines = [header1, header2, "-" * len(header2)]
        for row in self.rows:
            cells = "|".join(
                "".join(f"{100 * v:7.1f}" for v in (row.scores[m].recall, row.scores[m].precision, row.scores[m].f1))
                for m in METRICS
            )
            lines.append(f"{row.method:<14}|{cells}")
        lines.append("")
        lines.append(f"binary matrix density: {100 * self.binary_density:.3f}%")
        for lam, dens in sorted(self.imputed_density.items()):
            lines.append(f"imputed matrix density (lambda={lam:g}): {100 * dens:.3f}%")
        if self.lambdas:
            chosen = ", ".join(f"{'+'.join(k)}: {v:g}" for k, v in sorted(self.lambdas.items()))
            lines.append(f"ilp-impute lambda by test lectures: {chosen}")
        return "\n".join(lines) + "\n"


def run_report(corpus: Corpus, config: ExperimentConfig, out_dir=None,
               stopwords: Optional[StopwordList] = None) -> Report:
    """Score every method on all annotated documents.

    ilp-impute uses ``config.lam`` when set; otherwise each document is
    summarized with the lambda tuned on the folds that exclude its lecture.
    Scores are macro-averaged over documents.
    """
    pipe = Pipeline(corpus, stopwords, config)
    docs = corpus.annotated_documents()
    if not docs:
        raise ValueError("corpus has no reference summaries to evaluate against")

    lam_for_doc: dict = {}
    lambdas: dict = {}
    if "ilp-impute" in config.methods:
        if config.lam is not None:
            lam_for_doc = {k: float(config.lam) for k in docs}
        else:
            folds = make_folds(corpus.annotated_lectures(), config.folds, config.seed)
            tuned = tune_lambda(pipe, folds, config)
            for fold in tuned.folds:
                lambdas[tuple(fold.test_lectures)] = fold.chosen_lambda
                for k in _documents_of(corpus, fold.test_lectures):
                    lam_for_doc[k] = fold.chosen_lambda

    rows = []
    for method in config.methods:
        summaries = {k: pipe.summarize(k, method, lam_for_doc.get(k)) for k in docs}
        per_doc = [pipe.score(k, summaries[k]) for k in docs]
        scores = {m: macro_average([d[m] for d in per_doc]) for m in METRICS}
        rows.append(MethodRow(method, scores, summaries))

    used = sorted(set(lam_for_doc.values()))
    imputed_density = {lam: density(pipe.imputed(lam)) for lam in used}
    associations = {lam: associations_above(pipe.imputed(lam), ASSOCIATION_THRESHOLD) for lam in used}
    report = Report(rows, density(pipe.matrix), imputed_density, lambdas, associations)
    if out_dir is not None:
        write_report_files(pipe, report, Path(out_dir))
    return report


def association_lines(pipe: Pipeline, associations, limit: Optional[int] = None) -> list[str]:
    lines = ["value\tconcept\tsentence"]
    for j, i, value in associations[:limit]:
        lines.append(f"{value:.4f}\t{pipe.concepts[i].label}\t{pipe.sentences[j].text}")
    return lines


def write_report_files(pipe: Pipeline, report: Report, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "results.txt").write_text(report.table(), encoding="utf-8")
    with (out_dir / "summaries.jsonl").open("w", encoding="utf-8") as fh:
        for row in report.rows:
            for key, summary in row.summaries.items():
                rec = {
                    "method": row.method,
                    "lecture": key[0],
                    "prompt": key[1],
                    "words": summary.total_words,
                    "sentences": [s.text for s in pipe.summary_sentences(key, summary)],
                }
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    for lam, assoc in report.associations.items():
        path = out_dir / f"associations_lambda_{lam:g}.tsv"
        path.write_text("\n".join(association_lines(pipe, assoc)) + "\n", encoding="utf-8")
