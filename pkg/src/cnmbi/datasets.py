"""Tabular data loading, normalization, and seeded synthetic generators."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, TextIO, Union

import numpy as np

from .errors import DataError, DegenerateDataError

NORMALIZATIONS = ("none", "minmax", "zscore")

SCENARIO_LEVELS = {
    "noise": (20, 30, 40, 50),
    "density": (1, 2, 3, 4),
    "count": (5, 10, 20, 40),
}

NOISE_LABEL = -1


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def count_clusters(labels) -> int:
    """Number of distinct non-noise labels."""
    labels = np.asarray(labels)
    return int(np.unique(labels[labels != NOISE_LABEL]).size)


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ``n x d`` point matrix with optional ground truth.

    Arrays are copied and made read-only on construction.
    """

    points: np.ndarray
    labels: Optional[np.ndarray] = None
    name: str = "dataset"
    true_k: Optional[int] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise DataError(f"points must be a 2-D matrix, got shape {pts.shape}")
        n, d = pts.shape
        if n < 2 or d < 1:
            raise DataError(f"need n >= 2 points and d >= 1 features, got {n}x{d}")
        if not np.isfinite(pts).all():
            raise DataError("points contain NaN or Inf")
        object.__setattr__(self, "points", _frozen(pts))

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (n,):
                raise DataError(f"labels must have length {n}, got shape {labels.shape}")
            labels = _frozen(labels.astype(np.int64))
            object.__setattr__(self, "labels", labels)
            if self.true_k is None:
                object.__setattr__(self, "true_k", count_clusters(labels))
            elif self.true_k != count_clusters(labels):
                raise DataError(
                    f"true_k={self.true_k} disagrees with {count_clusters(labels)} distinct labels"
                )

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def subset(self, mask: np.ndarray, name: Optional[str] = None) -> "Dataset":
        """Rows where ``mask`` is true, in original order."""
        labels = None if self.labels is None else self.labels[mask]
        return Dataset(self.points[mask], labels, name or self.name, None, dict(self.meta))


# --------------------------------------------------------------------------
# CSV


def _parse_float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {text!r}")
    return v


def _row_is_numeric(row) -> bool:
    try:
        for cell in row:
            float(cell)
    except ValueError:
        return False
    return True


def normalize_points(points: np.ndarray, method: str) -> np.ndarray:
    """Per-feature ``minmax`` to [0, 1] or ``zscore`` (population variance).

    Constant features map to 0 in both modes.
    """
    if method not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {method!r}; expected one of {NORMALIZATIONS}")
    pts = np.asarray(points, dtype=np.float64)
    if method == "none":
        return pts.copy()
    out = np.zeros_like(pts)
    if method == "minmax":
        lo = pts.min(axis=0)
        span = pts.max(axis=0) - lo
        ok = span > 0
        out[:, ok] = (pts[:, ok] - lo[ok]) / span[ok]
    else:
        mu = pts.mean(axis=0)
        sd = pts.std(axis=0)  # ddof=0
        ok = sd > 0
        out[:, ok] = (pts[:, ok] - mu[ok]) / sd[ok]
    return out


def load_csv(
    path: Union[str, Path],
    label_column: Union[str, int, None] = None,
    normalize: str = "none",
    name: Optional[str] = None,
) -> Dataset:
    """Read a numeric CSV into a :class:`Dataset`.

    A header row is assumed iff the first row does not parse as numbers.
    ``label_column`` is a header name or a zero-based column index.
    """
    path = Path(path)
    if normalize not in NORMALIZATIONS:
        raise DataError(f"unknown normalization {normalize!r}; expected one of {NORMALIZATIONS}")
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: empty file")

    header = None
    if not _row_is_numeric(rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path}: header row but no data")

    width = len(header) if header is not None else len(rows[0])
    first_line = 2 if header is not None else 1
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DataError(
                f"{path}: line {i + first_line} has {len(r)} columns, expected {width}"
            )

    label_idx = None
    if label_column is not None:
        if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
            if header is None or label_column not in header:
                raise DataError(f"{path}: no column named {label_column!r}")
            label_idx = header.index(label_column)
        else:
            label_idx = int(label_column)
            if not -width <= label_idx < width:
                raise DataError(f"{path}: label column {label_idx} out of range for {width} columns")
            label_idx %= width  # negative indices count from the end

    feature_cols = [c for c in range(width) if c != label_idx]
    if not feature_cols:
        raise DataError(f"{path}: no feature columns")
    pts = np.empty((len(rows), len(feature_cols)), dtype=np.float64)
    labels = np.empty(len(rows), dtype=np.int64) if label_idx is not None else None
    for i, r in enumerate(rows):
        for out_c, c in enumerate(feature_cols):
            try:
                pts[i, out_c] = _parse_float(r[c])
            except ValueError:
                raise DataError(
                    f"{path}: line {i + first_line}, column {c}: cannot parse {r[c]!r} as a finite number"
                ) from None
        if labels is not None:
            try:
                labels[i] = int(float(r[label_idx]))
            except ValueError:
                raise DataError(
                    f"{path}: line {i + first_line}, column {label_idx}: bad label {r[label_idx]!r}"
                ) from None

    pts = normalize_points(pts, normalize)
    return Dataset(pts, labels, name or path.stem, meta={"source": str(path), "normalize": normalize})


def save_csv(data: Dataset, path: Union[str, Path, TextIO], header: bool = True) -> None:
    """Write points (and a trailing ``label`` column if present) using round-trip float text.

    ``path`` may also be an open text stream such as ``sys.stdout``.
    """
    if hasattr(path, "write"):
        _write_rows(data, path, header)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_rows(data, fh, header)


def _write_rows(data: Dataset, fh, header: bool) -> None:
    w = csv.writer(fh, lineterminator="\n")
    if header:
        cols = [f"x{j}" for j in range(data.d)]
        if data.labels is not None:
            cols.append("label")
        w.writerow(cols)
    for i in range(data.n):
        row = [repr(float(v)) for v in data.points[i]]
        if data.labels is not None:
            row.append(str(int(data.labels[i])))
        w.writerow(row)


# --------------------------------------------------------------------------
# Generators


def _place_centers(rng, k, d, separation, max_rounds=200, tries_per_center=500):
    # box grows with k so the packing stays feasible
    side = 2.0 * separation * max(1.0, k ** (1.0 / d))
    for _ in range(max_rounds):
        centers = []
        for _ in range(k):
            for _ in range(tries_per_center):
                c = rng.uniform(0.0, side, size=d)
                if all(np.linalg.norm(c - o) >= separation for o in centers):
                    centers.append(c)
                    break
            else:
                break
        if len(centers) == k:
            return np.array(centers)
    raise DegenerateDataError(
        f"could not place {k} centers {separation} apart in d={d} after {max_rounds} rounds"
    )


def _gaussian_clusters(rng, centers, sizes, spreads):
    pts, labels = [], []
    for c, (center, m, s) in enumerate(zip(centers, sizes, spreads)):
        pts.append(center + s * rng.standard_normal((m, centers.shape[1])))
        labels.append(np.full(m, c, dtype=np.int64))
    return np.vstack(pts), np.concatenate(labels)


def generate_blobs(
    k: int,
    per_cluster: int,
    d: int = 2,
    spread: float = 1.0,
    separation: float = 5.0,
    seed: int = 0,
) -> Dataset:
    """Isotropic Gaussian blobs whose generating centers are at least ``separation`` apart."""
    if k < 1 or per_cluster < 2 or d < 1:
        raise ValueError(f"need k >= 1, per_cluster >= 2, d >= 1 (got {k}, {per_cluster}, {d})")
    if spread <= 0 or separation <= 0:
        raise ValueError("spread and separation must be positive")
    rng = np.random.default_rng(seed)
    centers = _place_centers(rng, k, d, separation)
    pts, labels = _gaussian_clusters(rng, centers, [per_cluster] * k, [spread] * k)
    return Dataset(
        pts,
        labels,
        f"blobs-k{k}-seed{seed}",
        k,
        meta={"centers": centers.tolist(), "spread": spread, "separation": separation, "seed": seed},
    )


def add_uniform_noise(data: Dataset, fraction: float, seed: int, inflate: float = 0.2) -> Dataset:
    """Append uniform background points labelled -1.

    ``fraction`` is the noise share of the *returned* dataset; noise is drawn
    from the bounding box of ``data`` widened by ``inflate`` of its extent
    (split evenly between both sides of every axis).
    """
    if not 0 <= fraction < 1:
        raise ValueError(f"noise fraction must be in [0, 1), got {fraction}")
    rng = np.random.default_rng(seed)
    m = int(round(data.n * fraction / (1.0 - fraction)))
    lo = data.points.min(axis=0)
    hi = data.points.max(axis=0)
    pad = 0.5 * inflate * (hi - lo)
    noise = rng.uniform(lo - pad, hi + pad, size=(m, data.d))
    labels = data.labels if data.labels is not None else np.zeros(data.n, dtype=np.int64)
    return Dataset(
        np.vstack([data.points, noise]),
        np.concatenate([labels, np.full(m, NOISE_LABEL, dtype=np.int64)]),
        f"{data.name}+noise{fraction:g}",
        meta={**data.meta, "noise_fraction": fraction},
    )


def generate_unbalanced(seed: int = 0) -> Dataset:
    """Three clusters of 1000/300/200 points with distinct spreads (multi-density)."""
    rng = np.random.default_rng(seed)
    centers = np.array([[0.0, 0.0], [9.0, 1.0], [3.0, 8.0]])
    pts, labels = _gaussian_clusters(rng, centers, [1000, 300, 200], [1.2, 0.7, 0.45])
    return Dataset(pts, labels, f"unbalanced-seed{seed}", 3)


def density_sizes(level: int, smallest: int = 100, clusters: int = 8) -> list:
    """Geometric cluster sizes with max/min ratio 2**(level-1)."""
    ratio = 2.0 ** (level - 1)
    return [int(round(smallest * ratio ** (i / (clusters - 1)))) for i in range(clusters)]


def generate_scenario(family: str, level: int, seed: int = 0) -> Dataset:
    """Robustness scenarios.

    * ``noise`` (level 20-50): two blobs plus ``level`` percent uniform noise.
    * ``density`` (level 1-4): eight blobs, sizes geometric with max/min ratio 1, 2, 4, 8.
    * ``count`` (level 5/10/20/40): ``level`` equal blobs.
    """
    if family not in SCENARIO_LEVELS:
        raise ValueError(f"unknown scenario family {family!r}; expected one of {sorted(SCENARIO_LEVELS)}")
    if level not in SCENARIO_LEVELS[family]:
        raise ValueError(f"{family} level must be one of {SCENARIO_LEVELS[family]}, got {level}")

    if family == "count":
        base = generate_blobs(level, 50, 2, spread=0.5, separation=5.0, seed=seed)
    elif family == "density":
        rng = np.random.default_rng(seed)
        centers = _place_centers(rng, 8, 2, 6.0)
        sizes = density_sizes(level)
        pts, labels = _gaussian_clusters(rng, centers, sizes, [0.6] * 8)
        base = Dataset(pts, labels, "", 8, meta={"sizes": sizes})
    else:
        base = generate_blobs(2, 200, 2, spread=0.6, separation=6.0, seed=seed)
        base = add_uniform_noise(base, level / 100.0, seed + 1)

    return Dataset(
        base.points,
        base.labels,
        f"{family}-{level}-seed{seed}",
        meta={**base.meta, "family": family, "level": level, "seed": seed},
    )
