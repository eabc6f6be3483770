"""Building blocks of the captioning architectures: sinusoidal positions,
scaled dot-product attention, multi-head attention, position-wise
feed-forward, and layer normalization.

All blocks run in float64. An optional recorder captures the attention
weights of every site during a forward pass so tests can verify that
every weight row is a probability distribution.
"""

from __future__ import annotations

import contextlib
import contextvars
import math

import numpy as np
import torch
from torch import nn

from sentact.errors import ConfigurationError, NumericError

_RECORDER: contextvars.ContextVar[list | None] = contextvars.ContextVar(
    "attention_recorder", default=None
)


@contextlib.contextmanager
def record_attention():
    """Collect (site, weights) for every attention evaluated in the block."""
    sink: list[tuple[str, np.ndarray]] = []
    token = _RECORDER.set(sink)
    try:
        yield sink
    finally:
        _RECORDER.reset(token)


def positional_encoding(pos: int, d_model: int) -> np.ndarray:
    """Sinusoidal position vector: entry 2i is sin(pos/10000^(2i/d_model)),
    entry 2i+1 the matching cosine."""
    if d_model % 2 != 0 or d_model < 2:
        raise ConfigurationError(f"d_model must be a positive even number, got {d_model}")
    if pos < 0:
        raise ConfigurationError(f"position must be non-negative, got {pos}")
    i = np.arange(d_model // 2, dtype=np.float64)
    angle = pos / np.power(10000.0, 2.0 * i / d_model)
    out = np.empty(d_model, dtype=np.float64)
    out[0::2] = np.sin(angle)
    out[1::2] = np.cos(angle)
    return out


def positional_encoding_matrix(length: int, d_model: int) -> torch.Tensor:
    rows = [positional_encoding(pos, d_model) for pos in range(length)]
    return torch.tensor(np.stack(rows), dtype=torch.float64)


def attend(q: torch.Tensor, k: torch.Tensor, v: torch.Tensor,
           mask: torch.Tensor | None = None,
           site: str = "attention") -> tuple[torch.Tensor, torch.Tensor]:
    """softmax(q kᵀ / sqrt(d_k)) v over the last two dims; leading dims batch.

    ``mask`` is a boolean (Lq, Lk) tensor; False entries are excluded from
    attention (their weights are exactly zero).
    """
    if q.shape[-1] != k.shape[-1]:
        raise NumericError(
            f"query/key width mismatch: {q.shape[-1]} vs {k.shape[-1]}"
        )
    if k.shape[-2] != v.shape[-2]:
        raise NumericError(
            f"key/value row mismatch: {k.shape[-2]} vs {v.shape[-2]}"
        )
    d_k = q.shape[-1]
    scores = q @ k.transpose(-2, -1) / math.sqrt(d_k)
    if mask is not None:
        scores = scores.masked_fill(~mask, float("-inf"))
    weights = torch.softmax(scores, dim=-1)
    sink = _RECORDER.get()
    if sink is not None:
        sink.append((site, weights.detach().numpy().copy()))
    return weights @ v, weights


def scaled_dot_product_attention(
    q, k, v, d_k: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """NumPy-facing scaled dot-product attention returning (output, weights)."""
    qa = np.asarray(q, dtype=np.float64)
    ka = np.asarray(k, dtype=np.float64)
    va = np.asarray(v, dtype=np.float64)
    if qa.ndim != 2 or ka.ndim != 2 or va.ndim != 2:
        raise NumericError("attention inputs must be 2-D matrices")
    if d_k is not None and d_k != qa.shape[1]:
        raise NumericError(
            f"declared d_k={d_k} does not match query width {qa.shape[1]}"
        )
    out, weights = attend(
        torch.from_numpy(qa), torch.from_numpy(ka), torch.from_numpy(va)
    )
    return out.numpy(), weights.numpy()


def causal_mask(length: int) -> torch.Tensor:
    """Lower-triangular boolean mask: position t may read positions <= t."""
    return torch.tril(torch.ones(length, length, dtype=torch.bool))


class MultiHeadAttention(nn.Module):
    """Concatenation of h scaled dot-product heads over learned projections,
    followed by the output projection."""

    def __init__(self, d_model: int, n_heads: int):
        super().__init__()
        if d_model % n_heads != 0:
            raise ConfigurationError(
                f"d_model={d_model} not divisible by n_heads={n_heads}"
            )
        self.d_model = d_model
        self.n_heads = n_heads
        self.d_k = d_model // n_heads
        kw = {"dtype": torch.float64}
        self.w_q = nn.Linear(d_model, d_model, **kw)
        self.w_k = nn.Linear(d_model, d_model, **kw)
        self.w_v = nn.Linear(d_model, d_model, **kw)
        self.w_o = nn.Linear(d_model, d_model, **kw)

    def _split(self, x: torch.Tensor) -> torch.Tensor:
        length = x.shape[0]
        return x.reshape(length, self.n_heads, self.d_k).transpose(0, 1)

    def forward(self, q: torch.Tensor, k: torch.Tensor, v: torch.Tensor,
                mask: torch.Tensor | None = None,
                site: str = "mha") -> torch.Tensor:
        heads_q = self._split(self.w_q(q))
        heads_k = self._split(self.w_k(k))
        heads_v = self._split(self.w_v(v))
        out, _ = attend(heads_q, heads_k, heads_v, mask=mask, site=site)
        concat = out.transpose(0, 1).reshape(q.shape[0], self.d_model)
        return self.w_o(concat)


class FeedForward(nn.Module):
    """max(0, x W1 + b1) W2 + b2, applied to each position independently."""

    def __init__(self, d_in: int, d_ff: int, d_out: int):
        super().__init__()
        self.w_1 = nn.Linear(d_in, d_ff, dtype=torch.float64)
        self.w_2 = nn.Linear(d_ff, d_out, dtype=torch.float64)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.shape[-1] != self.w_1.in_features:
            raise NumericError(
                f"feed-forward expects width {self.w_1.in_features}, "
                f"got {x.shape[-1]}"
            )
        return self.w_2(torch.relu(self.w_1(x)))


class LayerNorm(nn.Module):
    """Row-wise layer normalization with learned gain and bias."""

    def __init__(self, d_model: int, eps: float = 1e-6):
        super().__init__()
        self.eps = eps
        self.gain = nn.Parameter(torch.ones(d_model, dtype=torch.float64))
        self.bias = nn.Parameter(torch.zeros(d_model, dtype=torch.float64))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        mean = x.mean(dim=-1, keepdim=True)
        var = x.var(dim=-1, unbiased=False, keepdim=True)
        return self.gain * (x - mean) / torch.sqrt(var + self.eps) + self.bias
