"""Extractive summarization of short responses with an imputed concept-coverage ILP."""

from .cooccurrence import CooccurrenceMatrix, associations_above, build_matrix, density
from .corpus import Corpus, load_corpus
from .experiment import ExperimentConfig, Pipeline, run_report
from .ilp import SelectionProblem, Summary, solve_brute_force, solve_exact, solve_greedy, value_of_selection
from .rouge import RougeScore, evaluate_corpus, rouge_n, rouge_su4
from .softimpute import ImputeConfig, ImputedMatrix, objective, project, soft_impute, soft_threshold, svd
from .text import Concept, ResponseUnit, Sentence, StopwordList, extract_concepts, split_sentences, tokenize

__version__ = "0.1.0"
