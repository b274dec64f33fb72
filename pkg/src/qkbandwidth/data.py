"""Dataset loading, preprocessing and synthetic generators.

Preprocessing order is split -> mean removal -> PCA, with both transforms
fitted on the training fold only unless ``fit_on="all"`` is requested.
Mean removal does not rescale columns to unit variance.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .linalg import eigh_symmetric

MIN_ROWS = 4


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        if X.ndim != 2:
            raise ValidationError(f"features must be 2-D, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValidationError("features contain non-finite values")
        object.__setattr__(self, "features", X)
        if self.labels is not None:
            y = np.asarray(self.labels, dtype=float).ravel()
            if y.shape[0] != X.shape[0]:
                raise ValidationError(f"{y.shape[0]} labels for {X.shape[0]} rows")
            object.__setattr__(self, "labels", y)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, idx) -> "Dataset":
        y = None if self.labels is None else self.labels[idx]
        return Dataset(self.features[idx], y, self.name)


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_csv(path, label_column: str | int | None = None, name: str | None = None) -> Dataset:
    """Read a rectangular numeric CSV with an optional header row.

    ``label_column`` is a header name or a zero-based column index. Labels
    with exactly two distinct values are mapped to ``-1`` (smaller) and
    ``+1`` (larger).
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError(f"{path} is empty")
    header = None
    first = [c.strip() for c in rows[0]]
    if not all(_is_number(c) for c in first if c):
        header = first
        rows = rows[1:]
        start = 2
    else:
        start = 1
    width = len(header) if header is not None else len(rows[0]) if rows else 0
    values = []
    for r, row in enumerate(rows, start=start):
        if len(row) != width:
            raise ParseError(f"expected {width} cells, found {len(row)}", row=r)
        parsed = []
        for c, cell in enumerate(row, start=1):
            cell = cell.strip()
            if cell == "":
                raise ParseError("missing value", row=r, col=c)
            try:
                parsed.append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric value {cell!r}", row=r, col=c) from None
        values.append(parsed)
    table = np.array(values, dtype=float).reshape(len(values), width)

    labels = None
    if label_column is not None:
        if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
            if header is None or label_column not in header:
                raise ParseError(f"label column {label_column!r} not found in header")
            j = header.index(label_column)
        else:
            j = int(label_column)
            if not -width <= j < width:
                raise ParseError(f"label column index {j} out of range for {width} columns")
            j %= width
        raw = table[:, j]
        table = np.delete(table, j, axis=1)
        classes = np.unique(raw)
        if classes.size > 2:
            raise ParseError(f"label column has {classes.size} distinct values, expected 2")
        labels = np.where(raw == classes[-1], 1.0, -1.0) if classes.size == 2 else np.ones_like(raw)
    return Dataset(table, labels, name or str(path))


def save_csv(path, X, y=None, header=None) -> None:
    X = np.asarray(X, dtype=float)
    cols = header or [f"x{i}" for i in range(X.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols + (["label"] if y is not None else []))
        for i in range(X.shape[0]):
            row = [repr(float(v)) for v in X[i]]
            if y is not None:
                row.append(repr(float(y[i])))
            w.writerow(row)


# ---------------------------------------------------------------- transforms


def standardize_fit_apply(train, test):
    """Subtract the train column means from both folds."""
    train = np.asarray(train, dtype=float)
    test = np.asarray(test, dtype=float)
    if train.shape[0] == 0:
        raise ValidationError("train fold is empty")
    means = train.mean(axis=0)
    test_out = test - means if test.size else test.reshape(0, train.shape[1])
    return train - means, test_out, means


@dataclass(frozen=True, eq=False)
class PcaTransform:
    mean: np.ndarray
    components: np.ndarray  # (d, n) orthonormal columns
    explained_variance: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[1]


def pca_fit(train, n_components: int) -> PcaTransform:
    """Top eigenvectors of the train covariance.

    Each component is signed so that its largest-magnitude entry is positive.
    """
    X = np.asarray(train, dtype=float)
    N, d = X.shape
    if not 1 <= n_components <= min(N, d):
        raise ValidationError(f"n_components must be in [1, {min(N, d)}], got {n_components}")
    mean = X.mean(axis=0)
    Xc = X - mean
    cov = Xc.T @ Xc / max(N - 1, 1)
    w, V = eigh_symmetric(0.5 * (cov + cov.T))
    V = V[:, :n_components].copy()
    w = np.clip(w[:n_components], 0.0, None)
    for k in range(n_components):
        col = V[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            V[:, k] = -col
    return PcaTransform(mean, V, w)


def pca_apply(t: PcaTransform, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.shape[0] == 0:
        return np.zeros((0, t.n_components))
    return (X - t.mean) @ t.components


def split(dataset: Dataset, train_fraction: float = 0.8, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded shuffle into train and test folds."""
    if not 0 < train_fraction < 1:
        raise ValidationError(f"train_fraction must be in (0, 1), got {train_fraction}")
    N = dataset.n_rows
    perm = np.random.default_rng(seed).permutation(N)
    n_train = int(round(train_fraction * N))
    return dataset.subset(np.sort(perm[:n_train])), dataset.subset(np.sort(perm[n_train:]))


@dataclass(frozen=True, eq=False)
class Prepared:
    X_train: np.ndarray
    y_train: np.ndarray | None
    X_test: np.ndarray
    y_test: np.ndarray | None
    means: np.ndarray
    pca: PcaTransform | None


def preprocess(
    dataset: Dataset,
    n_components: int,
    seed: int,
    train_fraction: float = 0.8,
    standardize: bool = True,
    fit_on: str = "train",
) -> Prepared:
    """Split, remove the mean and project onto ``n_components`` principal axes.

    ``fit_on="all"`` fits both transforms on the full dataset before
    splitting (leaks test statistics; kept for comparison).
    """
    if fit_on not in ("train", "all"):
        raise ValidationError(f"fit_on must be 'train' or 'all', got {fit_on!r}")
    train, test = split(dataset, train_fraction, seed)
    fit_rows = dataset.features if fit_on == "all" else train.features
    means = fit_rows.mean(axis=0) if standardize else np.zeros(dataset.n_features)
    Xtr = train.features - means
    Xte = test.features - means
    pca = None
    if n_components < dataset.n_features:
        pca = pca_fit(fit_rows - means, n_components)
        Xtr, Xte = pca_apply(pca, Xtr), pca_apply(pca, Xte)
    elif n_components > dataset.n_features:
        raise ValidationError(f"cannot keep {n_components} components of {dataset.n_features} features")
    return Prepared(Xtr, train.labels, Xte, test.labels, means, pca)


# ---------------------------------------------------------------- generators


def synth_uniform(N: int, n: int, seed: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    return Dataset(rng.uniform(-np.pi, np.pi, size=(N, n)), None, f"uniform_n{n}_N{N}")


def synth_hidden_manifold(N: int, d: int, manifold_dim: int, seed: int = 0, noise: float = 0.0) -> Dataset:
    """Binary data on a curved low-dimensional manifold embedded in ``d`` dimensions.

    Latent ``z ~ N(0, diag(s**2))`` with decaying scales ``s_k = 1/(1+k)``,
    features ``x = tanh(2 z F / sqrt(m))`` for a Gaussian ``F`` of shape
    ``(m, d)``, labels from a one-hidden-layer teacher acting on ``z`` and
    thresholded at its median. ``noise`` adds Gaussian jitter to the features.
    """
    if manifold_dim < 1 or d < 1:
        raise ValidationError("d and manifold_dim must be >= 1")
    if manifold_dim > d:
        raise ValidationError(f"manifold_dim {manifold_dim} exceeds ambient dimension {d}")
    if N < MIN_ROWS:
        raise ValidationError(f"need at least {MIN_ROWS} rows, got {N}")
    rng = np.random.default_rng(seed)
    m = manifold_dim
    scales = 1.0 / (1.0 + np.arange(m))
    z = rng.standard_normal((N, m)) * scales
    F = rng.standard_normal((m, d))
    X = np.tanh(z @ F / np.sqrt(m) * 2.0)
    if noise:
        X = X + noise * rng.standard_normal(X.shape)
    W = rng.standard_normal((m, 2 * m))
    v = rng.standard_normal(2 * m)
    teacher = np.tanh(z @ W) @ v
    y = np.where(teacher > np.median(teacher), 1.0, -1.0)
    return Dataset(X, y, f"hidden_manifold_d{d}_m{m}")
