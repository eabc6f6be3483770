"""Dense sentence vectors and cosine similarity.

Vectors are not L2-normalized at rest: cosine is scale-invariant anyway,
and raw vectors are needed for Euclidean distances elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sentact.errors import NumericError


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """A fixed-dimension sentence representation tagged with its embedder."""

    values: np.ndarray
    embedder_id: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise NumericError(f"embedding must be 1-D, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericError(f"non-finite embedding from {self.embedder_id!r}")
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def _as_array(v) -> np.ndarray:
    if isinstance(v, EmbeddingVector):
        return v.values
    return np.asarray(v, dtype=np.float64)


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, in [-1, 1].

    Zero-norm inputs are an error, never silently 0.
    """
    va, vb = _as_array(a), _as_array(b)
    if va.shape != vb.shape:
        raise NumericError(
            f"cosine similarity dimension mismatch: {va.shape} vs {vb.shape}"
        )
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise NumericError("cosine similarity undefined for a zero-norm vector")
    value = float(np.dot(va, vb) / (na * nb))
    # guard against |value| creeping past 1 by rounding error
    return max(-1.0, min(1.0, value))
