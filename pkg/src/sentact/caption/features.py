"""Per-video feature stacks and their plain-text file format.

A stack is the captioner's input unit: one fixed-dimension vector per
frame window. Extraction itself is out of scope; stacks come from files
or the synthetic generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from sentact.errors import DataError

MODALITIES = ("visual", "audio", "semantic")


@dataclass(frozen=True, eq=False)
class FeatureStack:
    video_id: str
    modality: str
    features: np.ndarray  # (n_c, d_feat)

    def __post_init__(self):
        if self.modality not in MODALITIES:
            raise DataError(f"unknown modality {self.modality!r}")
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2 or feats.shape[0] < 1:
            raise DataError(
                f"feature stack for {self.video_id!r} must be a non-empty 2-D "
                f"array, got shape {feats.shape}"
            )
        if not np.all(np.isfinite(feats)):
            raise DataError(f"non-finite features for video {self.video_id!r}")
        object.__setattr__(self, "features", feats)

    @property
    def n_c(self) -> int:
        return self.features.shape[0]

    @property
    def d_feat(self) -> int:
        return self.features.shape[1]


def write_feature_stack(path: str | Path, stack: FeatureStack) -> None:
    """Write header ``#<video_id> <dim> <n_c> <modality>`` then one line of
    floats per stack position (repr floats, exact round trip)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#{stack.video_id} {stack.d_feat} {stack.n_c} {stack.modality}\n")
        for row in stack.features:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_feature_stack(path: str | Path) -> FeatureStack:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"feature file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise DataError(f"{path}: missing '#video_id dim n_c modality' header")
        parts = header[1:].split()
        if len(parts) != 4:
            raise DataError(f"{path}: malformed header {header!r}")
        video_id, dim_s, n_c_s, modality = parts
        dim, n_c = int(dim_s), int(n_c_s)
        rows = []
        for line_no, line in enumerate(fh, 2):
            line = line.strip()
            if not line:
                continue
            values = line.split()
            if len(values) != dim:
                raise DataError(
                    f"{path}:{line_no}: expected {dim} floats, got {len(values)}"
                )
            rows.append([float(x) for x in values])
    if len(rows) != n_c:
        raise DataError(f"{path}: header claims n_c={n_c} but found {len(rows)} rows")
    return FeatureStack(video_id, modality, np.array(rows, dtype=np.float64))


def feature_path(features_dir: str | Path, video_id: str, modality: str) -> Path:
    return Path(features_dir) / f"{video_id}.{modality}.feat"


def load_video_stacks(
    features_dir: str | Path, video_id: str, modalities: tuple[str, ...]
) -> list[FeatureStack]:
    stacks = []
    for modality in modalities:
        path = feature_path(features_dir, video_id, modality)
        stacks.append(read_feature_stack(path))
    return stacks
