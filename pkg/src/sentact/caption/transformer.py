"""Single-stream encoder–decoder captioner.

Encoder: learned input projection + positional encoding, then stacked
self-attention / feed-forward layers. Decoder: masked word self-attention,
encoder–decoder attention over the encoded features, feed-forward, and a
linear + softmax generator. Residual connections with layer normalization
wrap every sub-layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from sentact.caption.features import FeatureStack
from sentact.caption.layers import (
    FeedForward,
    LayerNorm,
    MultiHeadAttention,
    causal_mask,
    positional_encoding_matrix,
)
from sentact.caption.vocab import BOS
from sentact.errors import ConfigurationError, DataError


@dataclass
class ModelParams:
    """Architecture configuration; the learned weights live in the modules."""

    vocab_size: int
    d_feat: int
    d_model: int = 64
    n_heads: int = 4
    n_encoder_layers: int = 2
    n_decoder_layers: int = 2
    d_ff: int | None = None  # defaults to 4 * d_model
    dropout_rate: float = 0.1
    max_len: int = 20
    seed: int = 0
    d_feat_asm: int | None = None  # second input stream (bi-modal only)

    def __post_init__(self):
        if self.d_model % self.n_heads != 0:
            raise ConfigurationError(
                f"d_model={self.d_model} not divisible by n_heads={self.n_heads}"
            )
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigurationError(
                f"dropout_rate must be in [0, 1), got {self.dropout_rate}"
            )
        if self.d_ff is None:
            self.d_ff = 4 * self.d_model
        if self.vocab_size < 5:
            raise ConfigurationError(
                "vocab_size must cover the four reserved ids plus content"
            )

    @property
    def d_k(self) -> int:
        return self.d_model // self.n_heads


class EncoderLayer(nn.Module):
    def __init__(self, p: ModelParams):
        super().__init__()
        self.self_attn = MultiHeadAttention(p.d_model, p.n_heads)
        self.ffn = FeedForward(p.d_model, p.d_ff, p.d_model)
        self.norm_attn = LayerNorm(p.d_model)
        self.norm_ffn = LayerNorm(p.d_model)
        self.dropout = nn.Dropout(p.dropout_rate)

    def forward(self, x: torch.Tensor, site: str) -> torch.Tensor:
        x = self.norm_attn(x + self.dropout(
            self.self_attn(x, x, x, site=f"{site}.self")))
        return self.norm_ffn(x + self.dropout(self.ffn(x)))


class DecoderLayer(nn.Module):
    def __init__(self, p: ModelParams):
        super().__init__()
        self.self_attn = MultiHeadAttention(p.d_model, p.n_heads)
        self.cross_attn = MultiHeadAttention(p.d_model, p.n_heads)
        self.ffn = FeedForward(p.d_model, p.d_ff, p.d_model)
        self.norm_self = LayerNorm(p.d_model)
        self.norm_cross = LayerNorm(p.d_model)
        self.norm_ffn = LayerNorm(p.d_model)
        self.dropout = nn.Dropout(p.dropout_rate)

    def forward(self, x: torch.Tensor, memory: torch.Tensor,
                mask: torch.Tensor, site: str) -> torch.Tensor:
        x = self.norm_self(x + self.dropout(
            self.self_attn(x, x, x, mask=mask, site=f"{site}.self")))
        x = self.norm_cross(x + self.dropout(
            self.cross_attn(x, memory, memory, site=f"{site}.cross")))
        return self.norm_ffn(x + self.dropout(self.ffn(x)))


class TransformerCaptioner(nn.Module):
    arch = "transformer"

    def __init__(self, params: ModelParams):
        super().__init__()
        torch.manual_seed(params.seed)
        self.params = params
        self.input_proj = nn.Linear(params.d_feat, params.d_model,
                                    dtype=torch.float64)
        self.encoder_layers = nn.ModuleList(
            EncoderLayer(params) for _ in range(params.n_encoder_layers)
        )
        self.token_embedding = nn.Embedding(params.vocab_size, params.d_model,
                                            dtype=torch.float64)
        self.decoder_layers = nn.ModuleList(
            DecoderLayer(params) for _ in range(params.n_decoder_layers)
        )
        self.generator = nn.Linear(params.d_model, params.vocab_size,
                                   dtype=torch.float64)
        self.dropout = nn.Dropout(params.dropout_rate)
        self.eval()

    def _stack_tensor(self, stack) -> torch.Tensor:
        feats = stack.features if isinstance(stack, FeatureStack) else np.asarray(stack)
        if feats.ndim != 2 or feats.shape[0] < 1:
            raise DataError("encoder needs a non-empty 2-D feature stack")
        if feats.shape[1] != self.params.d_feat:
            raise DataError(
                f"feature dim {feats.shape[1]} does not match model d_feat="
                f"{self.params.d_feat}"
            )
        return torch.tensor(np.asarray(feats, dtype=np.float64),
                            dtype=torch.float64)

    def encode(self, stack) -> torch.Tensor:
        """Encode one visual feature stack to (n_c, d_model)."""
        x = self._stack_tensor(stack)
        x = self.input_proj(x)
        x = self.dropout(x + positional_encoding_matrix(x.shape[0],
                                                        self.params.d_model))
        for i, layer in enumerate(self.encoder_layers):
            x = layer(x, site=f"encoder.{i}")
        return x

    def encode_features(self, *stacks) -> torch.Tensor:
        if len(stacks) != 1:
            raise DataError(
                f"transformer captioner takes exactly one stream, got {len(stacks)}"
            )
        return self.encode(stacks[0])

    def _embed_prefix(self, prefix_ids) -> torch.Tensor:
        ids = list(prefix_ids)
        if not ids or ids[0] != BOS:
            raise DataError("decoder prefix must start with the BOS id")
        if any(i < 0 or i >= self.params.vocab_size for i in ids):
            bad = next(i for i in ids if i < 0 or i >= self.params.vocab_size)
            raise DataError(f"prefix token id {bad} outside vocabulary")
        tok = torch.tensor(ids, dtype=torch.long)
        x = self.token_embedding(tok)
        return self.dropout(x + positional_encoding_matrix(len(ids),
                                                           self.params.d_model))

    def decode_logits(self, prefix_ids, memory: torch.Tensor) -> torch.Tensor:
        """Next-token logits for every prefix position, causally masked."""
        x = self._embed_prefix(prefix_ids)
        mask = causal_mask(x.shape[0])
        for i, layer in enumerate(self.decoder_layers):
            x = layer(x, memory, mask, site=f"decoder.{i}")
        return self.generator(x)

    def decode_distributions(self, prefix_ids, memory) -> np.ndarray:
        with torch.no_grad():
            logits = self.decode_logits(prefix_ids, memory)
            return torch.softmax(logits, dim=-1).numpy()

    def decode_step(self, prefix_ids, memory) -> np.ndarray:
        """Probability distribution over the vocabulary for the next token."""
        return self.decode_distributions(prefix_ids, memory)[-1]

    def next_distribution(self, prefix_ids, memory) -> np.ndarray:
        return self.decode_step(prefix_ids, memory)
