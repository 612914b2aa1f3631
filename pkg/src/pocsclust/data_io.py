"""Datasets and file formats.

Three sources are supported: labeled-embedding CSV (features plus an
optional integer label column), the big-endian IDX image/label pair used by
the classic digit corpus, and synthetic isotropic Gaussian mixtures.
"""

import os
import struct
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import ndtri

from .errors import DataFormatError, ValidationError

IDX_MAGIC_IMAGES = 2051
IDX_MAGIC_LABELS = 2049

# 53-bit grid keeps the uniform draw strictly inside (0, 1) so the inverse
# normal CDF stays finite
_U_GRID = float(1 << 53)


@dataclass
class EmbeddingDataset:
    """n x d float64 features with optional nonnegative integer labels."""

    features: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = "data"

    def __post_init__(self):
        X = np.ascontiguousarray(self.features, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
            raise ValidationError(f"features must be a non-empty 2-d array, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValidationError("features contain non-finite values")
        self.features = X
        if self.labels is not None:
            y = np.ascontiguousarray(self.labels, dtype=np.int64)
            if y.shape != (X.shape[0],):
                raise ValidationError(
                    f"labels must have shape ({X.shape[0]},), got {y.shape}"
                )
            if y.size and y.min() < 0:
                raise ValidationError("labels must be nonnegative")
            self.labels = y

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


def _parse_float(text, row, col):
    try:
        return float(text)
    except ValueError:
        raise DataFormatError(f"row {row}, column {col}: not a number: {text!r}") from None


def load_csv(path, labeled="auto") -> EmbeddingDataset:
    """Read a feature CSV. A header row is detected by non-numeric fields.

    labeled=True treats the last column as an integer label, False treats
    every column as a feature, and 'auto' looks for a header whose last
    field is named 'label'.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n").rstrip("\r") for ln in fh]
    rows = [ln.split(",") for ln in lines if ln.strip() != ""]
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    header = None
    first = rows[0]
    numeric_first = True
    for cell in first:
        try:
            float(cell)
        except ValueError:
            numeric_first = False
            break
    if not numeric_first:
        header = [c.strip() for c in first]
        rows = rows[1:]
        if not rows:
            raise DataFormatError(f"{path}: header but no data rows")
    if labeled == "auto":
        labeled = header is not None and header[-1].lower() == "label"
    elif not isinstance(labeled, bool):
        raise ValidationError(f"labeled must be True, False, or 'auto', got {labeled!r}")
    width = len(rows[0])
    if labeled and width < 2:
        raise DataFormatError(f"{path}: need at least one feature column plus the label")
    values = np.empty((len(rows), width), dtype=np.float64)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFormatError(
                f"{path}: row {i}: expected {width} columns, got {len(row)}"
            )
        for j, cell in enumerate(row):
            values[i, j] = _parse_float(cell, i, j)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise DataFormatError(f"{path}: row {bad[0]}, column {bad[1]}: non-finite value")
    name = os.path.splitext(os.path.basename(path))[0]
    if labeled:
        raw = values[:, -1]
        if np.any(raw != np.floor(raw)):
            bad = int(np.flatnonzero(raw != np.floor(raw))[0])
            raise DataFormatError(f"{path}: row {bad}: label is not an integer")
        if np.any(raw < 0):
            bad = int(np.flatnonzero(raw < 0)[0])
            raise DataFormatError(f"{path}: row {bad}: label is negative")
        return EmbeddingDataset(values[:, :-1].copy(), raw.astype(np.int64), name=name)
    return EmbeddingDataset(values, None, name=name)


def save_csv(path, dataset: EmbeddingDataset, header: bool = True) -> None:
    """Write features (and labels, when present) with full float precision."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if header:
            cols = [f"f{j}" for j in range(dataset.dim)]
            if dataset.labels is not None:
                cols.append("label")
            fh.write(",".join(cols) + "\n")
        for i in range(dataset.n):
            cells = [f"{v:.17g}" for v in dataset.features[i]]
            if dataset.labels is not None:
                cells.append(str(int(dataset.labels[i])))
            fh.write(",".join(cells) + "\n")


def read_idx(path) -> np.ndarray:
    """Parse one big-endian IDX file of unsigned bytes into a uint8 array."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 4:
        raise DataFormatError(f"{path}: truncated header")
    magic = struct.unpack(">i", blob[:4])[0]
    dtype_code = (magic >> 8) & 0xFF
    ndim = magic & 0xFF
    if magic < 0 or dtype_code != 0x08 or not 1 <= ndim <= 3:
        raise DataFormatError(f"{path}: bad magic {magic}")
    header_end = 4 + 4 * ndim
    if len(blob) < header_end:
        raise DataFormatError(f"{path}: truncated dimension header")
    shape = struct.unpack(f">{ndim}i", blob[4:header_end])
    if any(s < 0 for s in shape):
        raise DataFormatError(f"{path}: negative dimension in header")
    count = int(np.prod(shape)) if ndim else 0
    body = blob[header_end:]
    if len(body) != count:
        raise DataFormatError(
            f"{path}: expected {count} data bytes for shape {shape}, got {len(body)}"
        )
    return np.frombuffer(body, dtype=np.uint8).reshape(shape)


def load_idx(images_path, labels_path=None, normalize: bool = True, name=None) -> EmbeddingDataset:
    """Load an IDX image file (and optional label file) as flattened
    row-major rows, scaled to [0, 1] when normalize is set."""
    images = read_idx(images_path)
    magic_ndim = images.ndim
    if magic_ndim != 3:
        raise DataFormatError(f"{images_path}: expected a 3-d image file, got {magic_ndim}-d")
    n, rows, cols = images.shape
    X = images.reshape(n, rows * cols).astype(np.float64)
    if normalize:
        X /= 255.0
    y = None
    if labels_path is not None:
        labels = read_idx(labels_path)
        if labels.ndim != 1:
            raise DataFormatError(f"{labels_path}: expected a 1-d label file, got {labels.ndim}-d")
        if labels.shape[0] != n:
            raise DataFormatError(
                f"label count {labels.shape[0]} does not match image count {n}"
            )
        y = labels.astype(np.int64)
    if name is None:
        name = os.path.splitext(os.path.basename(images_path))[0]
    return EmbeddingDataset(X, y, name=name)


@dataclass(frozen=True)
class MixtureSpec:
    """Isotropic Gaussian mixture description: k clusters of equal size in
    dim dimensions, cluster centers uniform in [center_low, center_high]^dim."""

    k: int
    dim: int
    points_per_cluster: int
    sigma: float = 1.0
    center_low: float = 0.0
    center_high: float = 20.0
    seed: Optional[int] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValidationError(f"k must be >= 1, got {self.k}")
        if self.dim < 1:
            raise ValidationError(f"dim must be >= 1, got {self.dim}")
        if self.points_per_cluster < 1:
            raise ValidationError(
                f"points_per_cluster must be >= 1, got {self.points_per_cluster}"
            )
        if not (np.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if not (np.isfinite(self.center_low) and np.isfinite(self.center_high)):
            raise ValidationError("center bounds must be finite")
        if self.center_low > self.center_high:
            raise ValidationError(
                f"center_low must be <= center_high, got {self.center_low} > {self.center_high}"
            )

    @property
    def n(self) -> int:
        return self.k * self.points_per_cluster


def _unit_normals(rng, shape):
    # inverse-CDF sampling on a 53-bit open-interval uniform grid
    u = rng.integers(1, 1 << 53, size=shape).astype(np.float64) / _U_GRID
    return ndtri(u)


def gen_mixture(spec: MixtureSpec) -> EmbeddingDataset:
    """Draw the mixture: centers first, then each cluster's points in order.
    Labels record the cluster of origin."""
    rng = np.random.default_rng(spec.seed)
    centers = rng.uniform(spec.center_low, spec.center_high, size=(spec.k, spec.dim))
    ppc = spec.points_per_cluster
    X = np.empty((spec.n, spec.dim), dtype=np.float64)
    y = np.empty(spec.n, dtype=np.int64)
    for j in range(spec.k):
        at = j * ppc
        X[at : at + ppc] = centers[j] + spec.sigma * _unit_normals(rng, (ppc, spec.dim))
        y[at : at + ppc] = j
    name = f"mix-k{spec.k}-d{spec.dim}-n{spec.n}"
    return EmbeddingDataset(X, y, name=name)


def standardize(data):
    """Zero-mean unit-variance columns. Constant columns are only centered.
    Accepts an array or an EmbeddingDataset and returns the same kind."""
    if isinstance(data, EmbeddingDataset):
        return EmbeddingDataset(
            standardize(data.features), data.labels, name=data.name
        )
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError(f"expected a 2-d array, got shape {X.shape}")
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd == 0.0, 1.0, sd)
    return (X - mu) / sd
