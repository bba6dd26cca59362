"""Corpus files: JSON Lines of responses and reference summaries.

Response record::

    {"lecture": "L01", "prompt": "interesting", "student": "S1", "text": "..."}

Reference record::

    {"lecture": "L01", "prompt": "interesting", "reference": ["bullet", ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .text import PROMPTS, ResponseUnit


class CorpusError(ValueError):
    pass


@dataclass
class Corpus:
    responses: list
    references: dict = field(default_factory=dict)

    def __post_init__(self):
        keys = {r.document_key for r in self.responses}
        orphans = sorted(k for k in self.references if k not in keys)
        if orphans:
            raise CorpusError(f"references without responses: {orphans}")

    def documents(self) -> list[tuple[str, str]]:
        """(lecture, prompt) keys in corpus order."""
        seen: dict = {}
        for r in self.responses:
            seen.setdefault(r.document_key, None)
        return list(seen)

    def annotated_documents(self) -> list[tuple[str, str]]:
        return [k for k in self.documents() if k in self.references]

    def annotated_lectures(self) -> list[str]:
        return sorted({lecture for lecture, _ in self.references})

    def reference_text(self, key: tuple[str, str]) -> str:
        bullets = self.references[key]
        return "\n".join(b.strip().rstrip(".") + "." for b in bullets)


def _document_sort_key(unit_and_pos):
    unit, pos = unit_and_pos
    return (unit.lecture_id, PROMPTS.index(unit.prompt_id), pos)


def parse_corpus(lines, source: str = "<corpus>") -> Corpus:
    responses = []
    references: dict = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        where = f"{source}:{lineno}"
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{where}: invalid JSON ({exc.msg})") from exc
        if not isinstance(rec, dict) or "lecture" not in rec or "prompt" not in rec:
            raise CorpusError(f"{where}: record needs 'lecture' and 'prompt'")
        lecture, prompt = str(rec["lecture"]), rec["prompt"]
        if prompt not in PROMPTS:
            raise CorpusError(f"{where}: unknown prompt {prompt!r}")
        if "reference" in rec:
            bullets = rec["reference"]
            if isinstance(bullets, str):
                bullets = [bullets]
            if not isinstance(bullets, list) or not all(isinstance(b, str) for b in bullets) or not bullets:
                raise CorpusError(f"{where}: 'reference' must be a non-empty list of strings")
            key = (lecture, prompt)
            if key in references:
                raise CorpusError(f"{where}: duplicate reference for {key}")
            references[key] = bullets
        elif "text" in rec:
            text = rec["text"]
            student = rec.get("student")
            if not isinstance(text, str):
                raise CorpusError(f"{where}: 'text' must be a string")
            try:
                unit = ResponseUnit(lecture, prompt, text, None if student is None else str(student))
            except ValueError as exc:
                raise CorpusError(f"{where}: {exc}") from exc
            responses.append(unit)
        else:
            raise CorpusError(f"{where}: record has neither 'text' nor 'reference'")
    ordered = [u for u, _ in sorted(((u, k) for k, u in enumerate(responses)), key=_document_sort_key)]
    return Corpus(ordered, dict(sorted(references.items(), key=lambda kv: (kv[0][0], PROMPTS.index(kv[0][1])))))


def load_corpus(path) -> Corpus:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_corpus(fh, source=str(path))


def fixture_corpus_path() -> Path:
    """The bundled synthetic corpus (not the data of any published study)."""
    return Path(str(resources.files("impsum").joinpath("data/fixture_corpus.jsonl")))
