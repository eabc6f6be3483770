"""Embedding providers: the deterministic bag-of-words stub and the
text-keyed vector table adapter for pretrained paraphrase models.

A provider exposes ``embedder_id``, ``dim`` and ``embed(sentence)``. All
providers are deterministic for fixed inputs.
"""

from __future__ import annotations

import hashlib
import string
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np

from sentact.embed.vectors import EmbeddingVector
from sentact.errors import ConfigurationError, DataError


@runtime_checkable
class EmbeddingProvider(Protocol):
    embedder_id: str
    dim: int

    def embed(self, sentence) -> EmbeddingVector: ...


def sentence_text(sentence) -> str:
    """Accept either a plain string or an object with a ``text`` attribute."""
    text = getattr(sentence, "text", sentence)
    if not isinstance(text, str):
        raise DataError(f"cannot embed object of type {type(sentence).__name__}")
    return text


_PUNCT = str.maketrans("", "", string.punctuation)


def _bow_tokens(text: str) -> list[str]:
    tokens = []
    for raw in text.lower().split():
        tok = raw.translate(_PUNCT)
        if tok:
            tokens.append(tok)
    return tokens


class BagOfWordsProvider:
    """Hashed bag-of-words counts; cosine between outputs measures word overlap.

    Tokens are lowercased and stripped of punctuation, then hashed into
    ``dim`` buckets with SHA-1 (stable across processes).
    """

    def __init__(self, dim: int = 512):
        if dim < 1:
            raise ConfigurationError(f"bag-of-words dim must be >= 1, got {dim}")
        self.dim = dim
        self.embedder_id = f"bow:{dim}"

    def _bucket(self, token: str) -> int:
        digest = hashlib.sha1(token.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big") % self.dim

    def embed(self, sentence) -> EmbeddingVector:
        text = sentence_text(sentence)
        tokens = _bow_tokens(text)
        if not tokens:
            raise DataError(f"cannot embed empty sentence {text!r}")
        values = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            values[self._bucket(tok)] += 1.0
        return EmbeddingVector(values, self.embedder_id)


class TableProvider:
    """Exact-text lookup into a precomputed sentence-vector table."""

    def __init__(self, table: dict[str, np.ndarray], dim: int, embedder_id: str,
                 source: str = ""):
        self.dim = dim
        self.embedder_id = embedder_id
        self.source = source
        self._table = table

    def embed(self, sentence) -> EmbeddingVector:
        text = sentence_text(sentence)
        vec = self._table.get(text)
        if vec is None:
            where = f" in {self.source}" if self.source else ""
            raise DataError(f"no vector{where} for sentence: {text!r}")
        return EmbeddingVector(vec, self.embedder_id)

    def __len__(self) -> int:
        return len(self._table)

    def sentences(self) -> list[str]:
        return list(self._table)


def load_external_provider(table_path: str | Path) -> TableProvider:
    """Load a tab-separated vector table.

    Format: a header line ``#dim=<n> id=<embedder_id>`` followed by one
    record per line: the sentence text, a tab, then ``n`` decimal floats
    separated by tabs.
    """
    path = Path(table_path)
    if not path.is_file():
        raise DataError(f"vector table not found: {path}")
    table: dict[str, np.ndarray] = {}
    dim = None
    embedder_id = None
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise DataError(f"{path}: missing '#dim=... id=...' header line")
        for part in header[1:].split():
            key, _, value = part.partition("=")
            if key == "dim":
                dim = int(value)
            elif key == "id":
                embedder_id = value
        if dim is None or dim < 1 or not embedder_id:
            raise DataError(f"{path}: header must declare dim and id, got {header!r}")
        for line_no, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            text = fields[0]
            if len(fields) - 1 != dim:
                raise DataError(
                    f"{path}:{line_no}: expected {dim} values for {text!r}, "
                    f"got {len(fields) - 1}"
                )
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise DataError(f"{path}:{line_no}: bad float ({exc})") from exc
            table[text] = vec
    return TableProvider(table, dim, embedder_id, source=str(path))


def write_vector_table(path: str | Path, records: dict[str, np.ndarray],
                       dim: int, embedder_id: str) -> None:
    """Write a vector table in the format read by :func:`load_external_provider`.

    Floats are written with ``repr`` so the round trip is exact.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#dim={dim} id={embedder_id}\n")
        for text, vec in records.items():
            if "\t" in text or "\n" in text:
                raise DataError(f"sentence text may not contain tabs/newlines: {text!r}")
            if vec.shape != (dim,):
                raise DataError(
                    f"vector for {text!r} has shape {vec.shape}, expected ({dim},)"
                )
            fh.write(text + "\t" + "\t".join(repr(float(x)) for x in vec) + "\n")


def parse_provider(spec: str, root: str | Path | None = None) -> EmbeddingProvider:
    """Build a provider from a CLI-style spec string.

    Supported forms: ``bow``, ``bow:<dim>``, ``table:<path>``, ``toy:<path>``.
    """
    kind, _, arg = spec.partition(":")
    if kind == "bow":
        return BagOfWordsProvider(int(arg) if arg else 512)
    if kind == "table":
        if not arg:
            raise ConfigurationError("table provider needs a path: table:<path>")
        path = Path(arg)
        if root is not None and not path.is_absolute():
            path = Path(root) / path
        return load_external_provider(path)
    if kind == "toy":
        if not arg:
            raise ConfigurationError("toy provider needs a path: toy:<path>")
        from sentact.embed.toy import ToyProvider

        path = Path(arg)
        if root is not None and not path.is_absolute():
            path = Path(root) / path
        return ToyProvider.load(path)
    raise ConfigurationError(
        f"unknown embedding provider spec {spec!r} "
        "(expected bow[:dim], table:<path>, or toy:<path>)"
    )
