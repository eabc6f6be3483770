"""Bi-modal encoder–decoder captioner.

The encoder runs per-stream self-attention, then cross-modal attention
(each stream attending to the other), then per-modality feed-forward.
The decoder attends to both encoded streams from the masked word
representation and joins the two attended views through a bridge
feed-forward layer on their concatenation.
"""

from __future__ import annotations

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
from sentact.caption.transformer import ModelParams
from sentact.caption.vocab import BOS
from sentact.errors import ConfigurationError, DataError


class BmtEncoderLayer(nn.Module):
    def __init__(self, p: ModelParams):
        super().__init__()
        self.self_visual = MultiHeadAttention(p.d_model, p.n_heads)
        self.self_asm = MultiHeadAttention(p.d_model, p.n_heads)
        self.cross_visual = MultiHeadAttention(p.d_model, p.n_heads)  # visual -> asm
        self.cross_asm = MultiHeadAttention(p.d_model, p.n_heads)  # asm -> visual
        self.ffn_visual = FeedForward(p.d_model, p.d_ff, p.d_model)
        self.ffn_asm = FeedForward(p.d_model, p.d_ff, p.d_model)
        self.norm_self_visual = LayerNorm(p.d_model)
        self.norm_self_asm = LayerNorm(p.d_model)
        self.norm_cross_visual = LayerNorm(p.d_model)
        self.norm_cross_asm = LayerNorm(p.d_model)
        self.norm_ffn_visual = LayerNorm(p.d_model)
        self.norm_ffn_asm = LayerNorm(p.d_model)
        self.dropout = nn.Dropout(p.dropout_rate)

    def forward(self, visual: torch.Tensor, asm: torch.Tensor, site: str):
        vs = self.norm_self_visual(visual + self.dropout(
            self.self_visual(visual, visual, visual, site=f"{site}.self.visual")))
        as_ = self.norm_self_asm(asm + self.dropout(
            self.self_asm(asm, asm, asm, site=f"{site}.self.asm")))
        vc = self.norm_cross_visual(vs + self.dropout(
            self.cross_visual(vs, as_, as_, site=f"{site}.cross.visual")))
        ac = self.norm_cross_asm(as_ + self.dropout(
            self.cross_asm(as_, vs, vs, site=f"{site}.cross.asm")))
        vo = self.norm_ffn_visual(vc + self.dropout(self.ffn_visual(vc)))
        ao = self.norm_ffn_asm(ac + self.dropout(self.ffn_asm(ac)))
        return vo, ao


class BmtDecoderLayer(nn.Module):
    def __init__(self, p: ModelParams):
        super().__init__()
        self.self_attn = MultiHeadAttention(p.d_model, p.n_heads)
        self.attn_asm = MultiHeadAttention(p.d_model, p.n_heads)
        self.attn_visual = MultiHeadAttention(p.d_model, p.n_heads)
        # bridge joins the two attended views: input width is 2 * d_model
        self.bridge = FeedForward(2 * p.d_model, p.d_ff, p.d_model)
        self.ffn = FeedForward(p.d_model, p.d_ff, p.d_model)
        self.norm_self = LayerNorm(p.d_model)
        self.norm_bridge = LayerNorm(p.d_model)
        self.norm_ffn = LayerNorm(p.d_model)
        self.dropout = nn.Dropout(p.dropout_rate)

    def forward(self, x: torch.Tensor, memory_visual: torch.Tensor,
                memory_asm: torch.Tensor, mask: torch.Tensor,
                site: str) -> torch.Tensor:
        x = self.norm_self(x + self.dropout(
            self.self_attn(x, x, x, mask=mask, site=f"{site}.self")))
        attended_asm = self.attn_asm(
            x, memory_asm, memory_asm, site=f"{site}.cross.asm")
        attended_visual = self.attn_visual(
            x, memory_visual, memory_visual, site=f"{site}.cross.visual")
        joined = torch.cat([attended_asm, attended_visual], dim=-1)
        x = self.norm_bridge(x + self.dropout(self.bridge(joined)))
        return self.norm_ffn(x + self.dropout(self.ffn(x)))


class BimodalCaptioner(nn.Module):
    arch = "bmt"

    def __init__(self, params: ModelParams):
        super().__init__()
        if params.d_feat_asm is None:
            raise ConfigurationError(
                "bi-modal captioner needs d_feat_asm for its second stream"
            )
        torch.manual_seed(params.seed)
        self.params = params
        self.proj_visual = nn.Linear(params.d_feat, params.d_model,
                                     dtype=torch.float64)
        self.proj_asm = nn.Linear(params.d_feat_asm, params.d_model,
                                  dtype=torch.float64)
        self.encoder_layers = nn.ModuleList(
            BmtEncoderLayer(params) for _ in range(params.n_encoder_layers)
        )
        self.token_embedding = nn.Embedding(params.vocab_size, params.d_model,
                                            dtype=torch.float64)
        self.decoder_layers = nn.ModuleList(
            BmtDecoderLayer(params) for _ in range(params.n_decoder_layers)
        )
        self.generator = nn.Linear(params.d_model, params.vocab_size,
                                   dtype=torch.float64)
        self.dropout = nn.Dropout(params.dropout_rate)
        self.eval()

    def _stream_tensor(self, stack, proj: nn.Linear, name: str) -> torch.Tensor:
        feats = stack.features if isinstance(stack, FeatureStack) else np.asarray(stack)
        if feats.ndim != 2 or feats.shape[0] < 1:
            raise DataError(f"{name} stream must be a non-empty 2-D feature stack")
        if feats.shape[1] != proj.in_features:
            raise DataError(
                f"{name} stream dim {feats.shape[1]} does not match configured "
                f"{proj.in_features}"
            )
        x = torch.tensor(np.asarray(feats, dtype=np.float64), dtype=torch.float64)
        x = proj(x)
        return self.dropout(x + positional_encoding_matrix(x.shape[0],
                                                           self.params.d_model))

    def encode(self, visual, asm) -> tuple[torch.Tensor, torch.Tensor]:
        """Encode both streams; returns (visual memory, asm memory) with the
        input row counts preserved."""
        v = self._stream_tensor(visual, self.proj_visual, "visual")
        a = self._stream_tensor(asm, self.proj_asm, "asm")
        for i, layer in enumerate(self.encoder_layers):
            v, a = layer(v, a, site=f"encoder.{i}")
        return v, a

    def encode_features(self, *stacks):
        if len(stacks) != 2:
            raise DataError(
                f"bi-modal captioner takes exactly two streams, got {len(stacks)}"
            )
        return self.encode(stacks[0], stacks[1])

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

    def decode_logits(self, prefix_ids, memory) -> torch.Tensor:
        memory_visual, memory_asm = memory
        x = self._embed_prefix(prefix_ids)
        mask = causal_mask(x.shape[0])
        for i, layer in enumerate(self.decoder_layers):
            x = layer(x, memory_visual, memory_asm, mask, site=f"decoder.{i}")
        return self.generator(x)

    def decode_distributions(self, prefix_ids, memory) -> np.ndarray:
        with torch.no_grad():
            logits = self.decode_logits(prefix_ids, memory)
            return torch.softmax(logits, dim=-1).numpy()

    def decode_step(self, prefix_ids, memory) -> np.ndarray:
        return self.decode_distributions(prefix_ids, memory)[-1]

    def next_distribution(self, prefix_ids, memory) -> np.ndarray:
        return self.decode_step(prefix_ids, memory)
