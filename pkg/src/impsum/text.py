"""Tokenization, sentence splitting and bigram-concept extraction."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

PROMPTS = ("interesting", "confusing", "learning")

# word characters, optionally joined by a single hyphen or apostrophe
_TOKEN_RE = re.compile(r"[^\W_]+(?:['\-][^\W_]+)*")
_SENTENCE_BREAK_RE = re.compile(r"[.!?]+|\n")
_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "‐": "-", "‑": "-"})


@dataclass(frozen=True)
class ResponseUnit:
    lecture_id: str
    prompt_id: str
    raw_text: str
    student_id: Optional[str] = None

    def __post_init__(self):
        if self.prompt_id not in PROMPTS:
            raise ValueError(f"unknown prompt {self.prompt_id!r}; expected one of {PROMPTS}")
        if not self.raw_text.strip():
            raise ValueError("response text is empty")

    @property
    def document_key(self) -> tuple[str, str]:
        return (self.lecture_id, self.prompt_id)


@dataclass(frozen=True)
class Sentence:
    sentence_id: int
    source: ResponseUnit
    tokens: tuple[str, ...]
    text: str = ""

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a sentence needs at least one token")

    @property
    def word_count(self) -> int:
        return len(self.tokens)

    def bigrams(self) -> list[tuple[str, str]]:
        return list(zip(self.tokens[:-1], self.tokens[1:]))


@dataclass(frozen=True)
class Concept:
    concept_id: int
    bigram: tuple[str, str]
    weight: float

    @property
    def label(self) -> str:
        return " ".join(self.bigram)


@dataclass(frozen=True)
class StopwordList:
    words: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.words:
            raise ValueError("stopword list is empty")
        bad = [w for w in self.words if w != w.lower()]
        if bad:
            raise ValueError(f"stopwords must be lowercase: {sorted(bad)[:5]}")

    def __contains__(self, word: str) -> bool:
        return word in self.words

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "StopwordList":
        words = set()
        for line in lines:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line)
        return cls(frozenset(words))

    @classmethod
    def from_file(cls, path) -> "StopwordList":
        return cls.from_lines(Path(path).read_text(encoding="utf-8").splitlines())


def default_stopwords() -> StopwordList:
    """The bundled English list (``data/stopwords_en_v1.txt``)."""
    text = resources.files("impsum").joinpath("data/stopwords_en_v1.txt").read_text("utf-8")
    return StopwordList.from_lines(text.splitlines())


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and return its word tokens.

    Punctuation is dropped, except hyphens and apostrophes that sit between
    two word characters ("don't", "stress-strain").
    """
    return _TOKEN_RE.findall(text.translate(_APOSTROPHES).lower())


def split_sentences(unit: ResponseUnit, start_id: int = 0) -> list[Sentence]:
    """Split a response on terminal punctuation and newlines.

    Pieces without any token are dropped. Sentence ids are assigned
    contiguously from ``start_id``.
    """
    sentences = []
    for piece in _SENTENCE_BREAK_RE.split(unit.raw_text):
        tokens = tokenize(piece)
        if tokens:
            sentences.append(Sentence(start_id + len(sentences), unit, tuple(tokens), piece.strip()))
    return sentences


def corpus_sentences(responses: Sequence[ResponseUnit]) -> list[Sentence]:
    """Sentences of every response, with ids contiguous over the whole list."""
    out: list[Sentence] = []
    for unit in responses:
        out.extend(split_sentences(unit, start_id=len(out)))
    return out


def is_concept_bigram(bigram: tuple[str, str], stopwords: StopwordList) -> bool:
    return not (bigram[0] in stopwords and bigram[1] in stopwords)


def extract_concepts(sentences: Sequence[Sentence], stopwords: StopwordList) -> list[Concept]:
    """Distinct bigrams of ``sentences`` weighted by sentence frequency.

    Bigrams made only of stopwords are skipped; a bigram with a single
    stopword ("a bike") is kept. Ids follow first occurrence.
    """
    if not stopwords.words:
        raise ValueError("stopword list is empty")
    if not sentences:
        raise ValueError("no sentences to extract concepts from")
    frequency: Counter = Counter()
    order: list[tuple[str, str]] = []
    for sentence in sentences:
        seen = set()
        for bigram in sentence.bigrams():
            if bigram in seen or not is_concept_bigram(bigram, stopwords):
                continue
            seen.add(bigram)
            if bigram not in frequency:
                order.append(bigram)
            frequency[bigram] += 1
    return [Concept(i, bigram, float(frequency[bigram])) for i, bigram in enumerate(order)]


@dataclass
class CorpusStats:
    n_responses: int
    n_sentences: int
    n_concepts: int
    mean_response_length: float
    std_response_length: float
    words_per_document: dict
    mean_document_words: float
    low_frequency_fraction: float
    density: float

    def as_rows(self) -> list[tuple[str, str]]:
        return [
            ("responses", str(self.n_responses)),
            ("sentences (M)", str(self.n_sentences)),
            ("concepts (N)", str(self.n_concepts)),
            ("response length", f"{self.mean_response_length:.1f} +/- {self.std_response_length:.1f} words"),
            ("pseudo-documents", str(len(self.words_per_document))),
            ("words per pseudo-document", f"{self.mean_document_words:.1f}"),
            ("concepts with frequency <= 2", f"{100 * self.low_frequency_fraction:.1f}%"),
            ("matrix density", f"{100 * self.density:.2f}%"),
        ]


def corpus_stats(sentences: Sequence[Sentence], concepts: Sequence[Concept]) -> CorpusStats:
    """Descriptive statistics of a tokenized corpus.

    Response length counts the tokens of all sentences of a response.
    Density is the fraction of nonzero cells of the binary concept-sentence
    matrix, which equals the summed sentence frequencies over N*M.
    """
    if not sentences:
        raise ValueError("empty corpus")
    per_response: dict[int, int] = {}
    units: dict[int, ResponseUnit] = {}
    for s in sentences:
        per_response[id(s.source)] = per_response.get(id(s.source), 0) + s.word_count
        units[id(s.source)] = s.source
    lengths = np.array(list(per_response.values()), dtype=float)
    per_doc: dict[tuple[str, str], int] = {}
    for key, n in per_response.items():
        doc = units[key].document_key
        per_doc[doc] = per_doc.get(doc, 0) + n
    weights = np.array([c.weight for c in concepts], dtype=float)
    n, m = len(concepts), len(sentences)
    return CorpusStats(
        n_responses=len(per_response),
        n_sentences=m,
        n_concepts=n,
        mean_response_length=float(lengths.mean()),
        std_response_length=float(lengths.std()),
        words_per_document=dict(sorted(per_doc.items())),
        mean_document_words=float(np.mean(list(per_doc.values()))),
        low_frequency_fraction=float(np.mean(weights <= 2)) if n else 0.0,
        density=float(weights.sum() / (n * m)) if n else 0.0,
    )
