"""Distill class description documents into prototype sentence sets.

A class is represented either by its top-similarity sentences, by one
paragraph joining those sentences, or by the bare (normalized) label.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from sentact.embed.vectors import cosine_similarity
from sentact.errors import ConfigurationError, DataError
from sentact.text.sentences import (
    RawDocument,
    Sentence,
    expand_contractions,
    filter_min_words,
    split_sentences,
)

Mode = Literal["sentences", "paragraph", "label_only"]

_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")
_SEPARATORS = re.compile(r"[_\-]+")


def normalize_label(label: str) -> str:
    """Lowercase a class label, expanding underscores, hyphens and camel-case
    boundaries to single spaces ("horse_riding" -> "horse riding",
    "YoYo" -> "yo yo")."""
    if not label.strip():
        raise DataError("empty class label")
    text = _SEPARATORS.sub(" ", label)
    text = _CAMEL.sub(" ", text)
    return " ".join(text.lower().split())


@dataclass(frozen=True)
class PrototypeSet:
    """The selected sentence prototypes for one class."""

    class_label: str
    mode: Mode
    prototypes: tuple[Sentence, ...]
    selection_scores: tuple[float, ...]

    def __post_init__(self):
        if self.mode not in ("sentences", "paragraph", "label_only"):
            raise DataError(f"unknown prototype mode {self.mode!r}")
        if self.mode in ("paragraph", "label_only") and len(self.prototypes) != 1:
            raise DataError(
                f"mode {self.mode!r} requires exactly one prototype, "
                f"got {len(self.prototypes)} for class {self.class_label!r}"
            )
        if len(self.prototypes) != len(self.selection_scores):
            raise DataError(
                f"prototypes/scores length mismatch for class {self.class_label!r}"
            )
        if not self.prototypes:
            raise DataError(f"empty prototype set for class {self.class_label!r}")
        if self.mode == "sentences":
            scores = self.selection_scores
            if any(scores[i] < scores[i + 1] for i in range(len(scores) - 1)):
                raise DataError(
                    f"selection scores not sorted descending for {self.class_label!r}"
                )


def prepare_sentences(doc: RawDocument) -> list[Sentence]:
    """Split a document and expand contractions in every sentence."""
    return [expand_contractions(s) for s in split_sentences(doc)]


def select_prototypes(
    label: str,
    sentences: list[Sentence],
    embed,
    min_words: int,
    max_sentences: int,
) -> PrototypeSet:
    """Pick the ``max_sentences`` sentences most cosine-similar to the label.

    Sentences shorter than ``min_words`` are dropped first. Ties are broken
    by original document order (earlier sentence wins), so the result is
    deterministic for a deterministic embedding provider.
    """
    if max_sentences < 1:
        raise ConfigurationError(f"max_sentences must be >= 1, got {max_sentences}")
    surviving = filter_min_words(sentences, min_words)
    if not surviving:
        raise ConfigurationError(
            f"class {label!r}: no sentences with at least {min_words} words "
            f"(max_sentences={max_sentences}); relax min_words or fix the document"
        )
    label_vec = embed.embed(normalize_label(label))
    scored = [
        (cosine_similarity(embed.embed(s.text), label_vec), i, s)
        for i, s in enumerate(surviving)
    ]
    scored.sort(key=lambda t: (-t[0], t[1]))
    top = scored[:max_sentences]
    return PrototypeSet(
        class_label=label,
        mode="sentences",
        prototypes=tuple(s for _, _, s in top),
        selection_scores=tuple(score for score, _, _ in top),
    )


def build_paragraph_prototype(label: str, sentences: list[Sentence]) -> PrototypeSet:
    """Join the selected sentences into one paragraph prototype.

    The stored score is 0.0: a paragraph is not ranked by selection
    similarity.
    """
    if not sentences:
        raise DataError(f"class {label!r}: cannot build a paragraph from no sentences")
    text = " ".join(s.text for s in sentences)
    return PrototypeSet(
        class_label=label,
        mode="paragraph",
        prototypes=(Sentence(text, origin="document"),),
        selection_scores=(0.0,),
    )


def build_label_prototype(label: str) -> PrototypeSet:
    """Represent a class by its normalized label text alone."""
    return PrototypeSet(
        class_label=label,
        mode="label_only",
        prototypes=(Sentence(normalize_label(label), origin="document"),),
        selection_scores=(0.0,),
    )


def load_documents(descriptions_dir: str | Path) -> list[RawDocument]:
    """Read one UTF-8 description file per class from a directory.

    The class label is the file stem (underscored); files are returned in
    sorted order for reproducible downstream artifacts.
    """
    root = Path(descriptions_dir)
    if not root.is_dir():
        raise DataError(f"descriptions directory not found: {root}")
    paths = sorted(root.glob("*.txt"))
    if not paths:
        raise DataError(f"no .txt description files in {root}")
    return [
        RawDocument(class_label=p.stem, body=p.read_text(encoding="utf-8"),
                    source_id=p.name)
        for p in paths
    ]


def build_prototype_set(
    doc: RawDocument,
    mode: Mode,
    embed,
    min_words: int,
    max_sentences: int,
) -> PrototypeSet:
    """Build one class's prototypes in the requested representation mode."""
    if mode == "label_only":
        return build_label_prototype(doc.class_label)
    sentences = prepare_sentences(doc)
    selected = select_prototypes(
        doc.class_label, sentences, embed, min_words, max_sentences
    )
    if mode == "paragraph":
        return build_paragraph_prototype(doc.class_label, list(selected.prototypes))
    return selected


def write_prototype_store(
    path: str | Path,
    prototype_sets: list[PrototypeSet],
    min_words: int,
    max_sentences: int,
    embedder_id: str,
) -> None:
    """Persist prototype sets as JSON lines, one record per class."""
    config = {
        "min_words": min_words,
        "max_sentences": max_sentences,
        "embedder_id": embedder_id,
    }
    with open(path, "w", encoding="utf-8") as fh:
        for ps in prototype_sets:
            record = {
                "class": ps.class_label,
                "mode": ps.mode,
                "prototypes": [
                    {"text": s.text, "score": score}
                    for s, score in zip(ps.prototypes, ps.selection_scores)
                ],
                "config": config,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_prototype_store(path: str | Path) -> list[PrototypeSet]:
    """Load prototype sets written by :func:`write_prototype_store`."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"prototype store not found: {path}")
    sets = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{line_no}: invalid JSON ({exc})") from exc
            sets.append(
                PrototypeSet(
                    class_label=record["class"],
                    mode=record["mode"],
                    prototypes=tuple(
                        Sentence(p["text"], origin="document")
                        for p in record["prototypes"]
                    ),
                    selection_scores=tuple(
                        float(p["score"]) for p in record["prototypes"]
                    ),
                )
            )
    return sets
