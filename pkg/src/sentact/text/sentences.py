"""Sentence segmentation, contraction expansion, and length filtering.

Segmentation is a deliberately reproducible rule: split on ``.``, ``!``,
``?`` followed by whitespace or end of text, with a fixed abbreviation
stop-list, instead of delegating to an external NLP toolkit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Literal

from sentact.errors import DataError
from sentact.text.contractions import CONTRACTIONS

Origin = Literal["document", "observer", "fused"]

# Period after these tokens does not end a sentence.
ABBREVIATIONS = frozenset(
    {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.",
        "e.g.", "i.e.", "etc.", "vs.", "cf.", "al.", "fig.", "no.",
        "approx.", "ca.",
    }
)

_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*(?=\s|$)")
_PARAGRAPH = re.compile(r"\n\s*\n")
_WS = re.compile(r"\s+")

_APOSTROPHES = str.maketrans({"’": "'", "ʼ": "'"})
_CONTRACTION_RE = re.compile(
    "|".join(re.escape(k) for k in sorted(CONTRACTIONS, key=len, reverse=True)),
    re.IGNORECASE,
)


@dataclass(frozen=True)
class RawDocument:
    """One per-class description document, paragraphs separated by blank lines."""

    class_label: str
    body: str
    source_id: str = ""

    def __post_init__(self):
        if not self.class_label.strip():
            raise DataError("document has an empty class label")
        if not self.body.strip():
            raise DataError(
                f"document for class {self.class_label!r} has an empty body"
            )


@dataclass(frozen=True)
class Sentence:
    """A normalized sentence; word_count is always derived from the text."""

    text: str
    origin: Origin = "document"
    word_count: int = field(init=False)

    def __post_init__(self):
        if self.origin not in ("document", "observer", "fused"):
            raise DataError(f"unknown sentence origin {self.origin!r}")
        object.__setattr__(self, "word_count", len(self.text.split()))


def split_sentences(doc: RawDocument) -> list[Sentence]:
    """Split a document body into sentences.

    Paragraphs are handled independently; within a paragraph, a run of
    terminal punctuation followed by whitespace (or end of paragraph)
    closes a sentence unless the final token is a known abbreviation.
    A trailing segment without terminal punctuation still counts as a
    sentence.
    """
    if not doc.body.strip():
        raise DataError(f"empty body for class {doc.class_label!r}")
    sentences: list[Sentence] = []
    for paragraph in _PARAGRAPH.split(doc.body):
        paragraph = paragraph.strip()
        if not paragraph:
            continue
        start = 0
        for match in _BOUNDARY.finditer(paragraph):
            segment = paragraph[start : match.end()]
            last_token = segment.rsplit(None, 1)[-1].lower() if segment.split() else ""
            if last_token in ABBREVIATIONS:
                continue
            text = _WS.sub(" ", segment).strip()
            if text:
                sentences.append(Sentence(text, origin="document"))
            start = match.end()
        tail = _WS.sub(" ", paragraph[start:]).strip()
        if tail:
            sentences.append(Sentence(tail, origin="document"))
    return sentences


def _match_case(original: str, expansion: str) -> str:
    if original[:1].isupper():
        return expansion[:1].upper() + expansion[1:]
    return expansion


def expand_contractions_text(text: str) -> str:
    """Expand every known contraction in raw text; identity otherwise."""
    normalized = text.translate(_APOSTROPHES)
    return _CONTRACTION_RE.sub(
        lambda m: _match_case(m.group(0), CONTRACTIONS[m.group(0).lower()]),
        normalized,
    )


def expand_contractions(sentence: Sentence) -> Sentence:
    """Expand contractions in a sentence, recomputing its word count."""
    expanded = expand_contractions_text(sentence.text)
    if expanded == sentence.text:
        return sentence
    return Sentence(expanded, origin=sentence.origin)


def filter_min_words(sentences: list[Sentence], min_words: int) -> list[Sentence]:
    """Keep sentences with at least ``min_words`` words, preserving order."""
    if min_words < 1:
        raise DataError(f"min_words must be >= 1, got {min_words}")
    return [s for s in sentences if s.word_count >= min_words]
