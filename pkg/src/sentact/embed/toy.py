"""Trainable toy sentence embedder: a token-embedding table with mean
pooling, trained with one of three Siamese pair objectives
(classification, similarity regression, triplet margin).

This is the smallest encoder honoring the shared-encoder + mean-pooling
contract; pretrained transformer encoders are consumed through the
table provider instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from sentact.embed.providers import sentence_text
from sentact.embed.vectors import EmbeddingVector
from sentact.errors import ConfigurationError, DataError

UNK = 0
UNK_TOKEN = "<unk>"


@dataclass
class EmbedderConfig:
    vocabulary_size: int
    n_s: int
    pooling: str = "mean"
    objective: str = "classification"  # classification | regression | triplet
    k_labels: int = 2
    margin_epsilon: float = 1.0
    seed: int = 0
    learning_rate: float = 0.5
    epochs: int = 200

    def __post_init__(self):
        if self.pooling != "mean":
            raise ConfigurationError(f"unsupported pooling {self.pooling!r}")
        if self.objective not in ("classification", "regression", "triplet"):
            raise ConfigurationError(f"unknown objective {self.objective!r}")
        if self.margin_epsilon <= 0:
            raise ConfigurationError("margin_epsilon must be > 0")
        if self.objective == "classification" and self.k_labels < 2:
            raise ConfigurationError("classification needs k_labels >= 2")
        if self.vocabulary_size < 1 or self.n_s < 1:
            raise ConfigurationError("vocabulary_size and n_s must be positive")


def build_vocabulary(texts: list[str]) -> dict[str, int]:
    """Map each distinct lowercased token to an id; id 0 is reserved for UNK."""
    tokens = sorted({tok for text in texts for tok in text.lower().split()})
    vocab = {UNK_TOKEN: UNK}
    for tok in tokens:
        if tok != UNK_TOKEN:
            vocab[tok] = len(vocab)
    return vocab


def encode_tokens(text: str, vocab: dict[str, int]) -> list[int]:
    tokens = text.lower().split()
    if not tokens:
        raise DataError(f"cannot embed empty sentence {text!r}")
    return [vocab.get(tok, UNK) for tok in tokens]


class ToyEncoder(torch.nn.Module):
    """Shared Siamese encoder: embedding table + mean pooling."""

    def __init__(self, vocabulary_size: int, n_s: int):
        super().__init__()
        self.table = torch.nn.Embedding(vocabulary_size, n_s, dtype=torch.float64)

    def forward(self, token_ids: torch.Tensor) -> torch.Tensor:
        return self.table(token_ids).mean(dim=0)


class ToyProvider:
    """Embedding provider backed by a (possibly trained) toy encoder."""

    def __init__(self, encoder: ToyEncoder, vocab: dict[str, int],
                 config: EmbedderConfig, history: list[float] | None = None,
                 head: torch.nn.Module | None = None):
        self.encoder = encoder
        self.vocab = vocab
        self.config = config
        self.history = history or []
        self.head = head
        self.dim = config.n_s
        self.embedder_id = f"toy-{config.objective}-{config.n_s}d"

    def embed(self, sentence) -> EmbeddingVector:
        text = sentence_text(sentence)
        ids = torch.tensor(encode_tokens(text, self.vocab), dtype=torch.long)
        with torch.no_grad():
            vec = self.encoder(ids)
        return EmbeddingVector(vec.numpy().copy(), self.embedder_id)

    def save(self, path: str | Path) -> None:
        payload = {
            "config": {
                "vocabulary_size": self.config.vocabulary_size,
                "n_s": self.config.n_s,
                "pooling": self.config.pooling,
                "objective": self.config.objective,
                "k_labels": self.config.k_labels,
                "margin_epsilon": self.config.margin_epsilon,
                "seed": self.config.seed,
                "learning_rate": self.config.learning_rate,
                "epochs": self.config.epochs,
            },
            "vocab": self.vocab,
            "table": self.encoder.table.weight.detach().numpy().tolist(),
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ToyProvider":
        path = Path(path)
        if not path.is_file():
            raise DataError(f"toy embedder file not found: {path}")
        payload = json.loads(path.read_text(encoding="utf-8"))
        config = EmbedderConfig(**payload["config"])
        encoder = ToyEncoder(config.vocabulary_size, config.n_s)
        with torch.no_grad():
            encoder.table.weight.copy_(
                torch.tensor(payload["table"], dtype=torch.float64)
            )
        return cls(encoder, payload["vocab"], config)


def _init_encoder(texts: list[str], config: EmbedderConfig) -> tuple[ToyEncoder, dict[str, int]]:
    vocab = build_vocabulary(texts)
    if len(vocab) > config.vocabulary_size:
        raise ConfigurationError(
            f"corpus has {len(vocab)} distinct tokens but vocabulary_size is "
            f"{config.vocabulary_size}"
        )
    torch.manual_seed(config.seed)
    encoder = ToyEncoder(config.vocabulary_size, config.n_s)
    return encoder, vocab


def _encode_batch(texts: list[str], vocab: dict[str, int],
                  encoder: ToyEncoder) -> torch.Tensor:
    return torch.stack(
        [encoder(torch.tensor(encode_tokens(t, vocab), dtype=torch.long))
         for t in texts]
    )


def train_classification_objective(
    pairs: list[tuple], config: EmbedderConfig
) -> ToyProvider:
    """Train the encoder with a softmax pair classifier on
    [u_a, u_b, |u_a - u_b|]; returns the provider with loss history attached.
    """
    if config.objective != "classification":
        raise ConfigurationError("config.objective must be 'classification'")
    texts_a = [sentence_text(a) for a, _, _ in pairs]
    texts_b = [sentence_text(b) for _, b, _ in pairs]
    labels = [int(lbl) for _, _, lbl in pairs]
    if any(l < 0 or l >= config.k_labels for l in labels):
        bad = next(l for l in labels if l < 0 or l >= config.k_labels)
        raise ConfigurationError(
            f"pair label {bad} outside [0, {config.k_labels}) for k_labels="
            f"{config.k_labels}"
        )
    encoder, vocab = _init_encoder(texts_a + texts_b, config)
    head = torch.nn.Linear(3 * config.n_s, config.k_labels, bias=False,
                           dtype=torch.float64)
    target = torch.tensor(labels, dtype=torch.long)
    params = list(encoder.parameters()) + list(head.parameters())
    opt = torch.optim.SGD(params, lr=config.learning_rate)
    history = []
    for _ in range(config.epochs):
        opt.zero_grad()
        ua = _encode_batch(texts_a, vocab, encoder)
        ub = _encode_batch(texts_b, vocab, encoder)
        logits = head(torch.cat([ua, ub, (ua - ub).abs()], dim=1))
        loss = torch.nn.functional.cross_entropy(logits, target)
        loss.backward()
        opt.step()
        history.append(float(loss))
    return ToyProvider(encoder, vocab, config, history, head=head)


def train_regression_objective(
    pairs: list[tuple], config: EmbedderConfig
) -> ToyProvider:
    """Regress the cosine similarity of sentence pairs onto targets in
    [-1, 1] with a mean-squared-error loss."""
    if config.objective != "regression":
        raise ConfigurationError("config.objective must be 'regression'")
    texts_a = [sentence_text(a) for a, _, _ in pairs]
    texts_b = [sentence_text(b) for _, b, _ in pairs]
    targets = [float(t) for _, _, t in pairs]
    if any(t < -1.0 or t > 1.0 for t in targets):
        bad = next(t for t in targets if t < -1.0 or t > 1.0)
        raise DataError(f"similarity target {bad} outside [-1, 1]")
    encoder, vocab = _init_encoder(texts_a + texts_b, config)
    target = torch.tensor(targets, dtype=torch.float64)
    opt = torch.optim.SGD(encoder.parameters(), lr=config.learning_rate)
    history = []
    for _ in range(config.epochs):
        opt.zero_grad()
        ua = _encode_batch(texts_a, vocab, encoder)
        ub = _encode_batch(texts_b, vocab, encoder)
        predicted = torch.nn.functional.cosine_similarity(ua, ub, dim=1)
        loss = ((predicted - target) ** 2).mean()
        loss.backward()
        opt.step()
        history.append(float(loss))
    return ToyProvider(encoder, vocab, config, history)


def triplet_loss(sa: torch.Tensor, sp: torch.Tensor, sn: torch.Tensor,
                 margin: float) -> torch.Tensor:
    """max(||s_a - s_p|| - ||s_a - s_n|| + margin, 0), Euclidean, per row."""
    dp = torch.linalg.vector_norm(sa - sp, dim=-1)
    dn = torch.linalg.vector_norm(sa - sn, dim=-1)
    return torch.clamp(dp - dn + margin, min=0.0)


def train_triplet_objective(
    triplets: list[tuple], config: EmbedderConfig
) -> ToyProvider:
    """Pull anchors toward positives and away from negatives by at least
    the configured margin."""
    if config.objective != "triplet":
        raise ConfigurationError("config.objective must be 'triplet'")
    texts_a = [sentence_text(a) for a, _, _ in triplets]
    texts_p = [sentence_text(p) for _, p, _ in triplets]
    texts_n = [sentence_text(n) for _, _, n in triplets]
    encoder, vocab = _init_encoder(texts_a + texts_p + texts_n, config)
    opt = torch.optim.SGD(encoder.parameters(), lr=config.learning_rate)
    history = []
    for _ in range(config.epochs):
        opt.zero_grad()
        sa = _encode_batch(texts_a, vocab, encoder)
        sp = _encode_batch(texts_p, vocab, encoder)
        sn = _encode_batch(texts_n, vocab, encoder)
        loss = triplet_loss(sa, sp, sn, config.margin_epsilon).mean()
        loss.backward()
        opt.step()
        history.append(float(loss))
    return ToyProvider(encoder, vocab, config, history)
