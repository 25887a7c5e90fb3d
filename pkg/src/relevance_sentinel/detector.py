"""Single-cluster anomaly detectors.

Both detectors treat the relevant training documents as one cluster and
flag a query as an outlier (label 0) when its score strictly exceeds
``(1 + coeff) * max(training scores)``.

KNN
    Score is the mean Euclidean distance from the query to every cluster
    point. Training scores are each point's mean distance to the *other*
    points (divisor ``n - 1``).
CBLOF
    Unweighted, single large cluster: score is the Euclidean distance to
    the cluster centroid.

:func:`partition_clusters` implements the general large/small cluster
split used by multi-cluster CBLOF; it is not needed on the single-cluster
path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

import numpy as np

from .vectorizer import FeatureVector

OK = "OK"
EMPTY_DOC = "EMPTY_DOC"

Vector = Union[FeatureVector, np.ndarray, Sequence[float]]


def _as_dense(v: Vector) -> np.ndarray:
    if isinstance(v, FeatureVector):
        return v.to_dense()
    return np.asarray(v, dtype=float)


def euclidean_distance(u: Vector, v: Vector) -> float:
    """Square-rooted Euclidean distance.

    Accepts :class:`FeatureVector` or dense sequences. Two sparse vectors
    are compared over the union of their supports.
    """
    if isinstance(u, FeatureVector) and isinstance(v, FeatureVector):
        if u.dim != v.dim:
            raise ValueError(f"dimension mismatch: {u.dim} != {v.dim}")
        a, b = u.entries, v.entries
        sq = math.fsum((a.get(i, 0.0) - b.get(i, 0.0)) ** 2 for i in a.keys() | b.keys())
        return math.sqrt(sq)
    a, b = _as_dense(u), _as_dense(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} != {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def compute_threshold(max_score: float, coeff: float) -> float:
    """``(1 + coeff) * max_score``."""
    if max_score < 0:
        raise ValueError(f"max_score must be non-negative, got {max_score}")
    if not coeff > -1:
        raise ValueError(f"threshold coefficient must be > -1, got {coeff}")
    return (1.0 + coeff) * max_score


def _stack(cluster: Sequence[FeatureVector]) -> np.ndarray:
    dims = {v.dim for v in cluster}
    if len(dims) > 1:
        raise ValueError(f"cluster vectors have mixed dimensions {sorted(dims)}")
    return np.vstack([v.to_dense() for v in cluster])


def _row_distances(matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum((matrix - x) ** 2, axis=1))


@dataclass(frozen=True)
class KnnModel:
    cluster: tuple[FeatureVector, ...]
    train_averages: tuple[float, ...]
    alpha_thresh: float = 0.0
    max_average: float = field(init=False)
    threshold: float = field(init=False)
    _matrix: np.ndarray = field(init=False, repr=False, compare=False)

    method = "knn"

    def __post_init__(self):
        object.__setattr__(self, "cluster", tuple(self.cluster))
        object.__setattr__(self, "train_averages", tuple(float(a) for a in self.train_averages))
        if len(self.cluster) < 2:
            raise ValueError("KNN needs a cluster of at least 2 points")
        if len(self.train_averages) != len(self.cluster):
            raise ValueError("train_averages must have one entry per cluster point")
        mx = max(self.train_averages)
        object.__setattr__(self, "max_average", mx)
        object.__setattr__(self, "threshold", compute_threshold(mx, self.alpha_thresh))
        object.__setattr__(self, "_matrix", _stack(self.cluster))

    @property
    def dim(self) -> int:
        return self._matrix.shape[1]

    @property
    def coeff(self) -> float:
        return self.alpha_thresh

    @property
    def max_score(self) -> float:
        return self.max_average

    def with_coeff(self, coeff: float) -> "KnnModel":
        return replace(self, alpha_thresh=coeff)


@dataclass(frozen=True)
class CblofModel:
    centroid: tuple[float, ...]
    train_distances: tuple[float, ...]
    beta_thresh: float = 0.0
    max_distance: float = field(init=False)
    threshold: float = field(init=False)
    _centroid: np.ndarray = field(init=False, repr=False, compare=False)

    method = "cblof"

    def __post_init__(self):
        object.__setattr__(self, "centroid", tuple(float(c) for c in self.centroid))
        object.__setattr__(self, "train_distances", tuple(float(d) for d in self.train_distances))
        if not self.train_distances:
            raise ValueError("CBLOF needs a non-empty cluster")
        mx = max(self.train_distances)
        object.__setattr__(self, "max_distance", mx)
        object.__setattr__(self, "threshold", compute_threshold(mx, self.beta_thresh))
        object.__setattr__(self, "_centroid", np.array(self.centroid, dtype=float))

    @property
    def dim(self) -> int:
        return len(self.centroid)

    @property
    def coeff(self) -> float:
        return self.beta_thresh

    @property
    def max_score(self) -> float:
        return self.max_distance

    def with_coeff(self, coeff: float) -> "CblofModel":
        return replace(self, beta_thresh=coeff)


DetectorModel = Union[KnnModel, CblofModel]


def fit_knn(cluster: Sequence[FeatureVector], alpha_thresh: float = 0.0) -> KnnModel:
    """Fit the mean-distance detector on ``cluster`` (k = all points)."""
    cluster = tuple(cluster)
    n = len(cluster)
    if n < 2:
        raise ValueError(f"KNN needs a cluster of at least 2 points, got {n}")
    m = _stack(cluster)
    averages = []
    for i in range(n):
        d = _row_distances(m, m[i])
        d[i] = 0.0
        averages.append(float(d.sum() / (n - 1)))
    return KnnModel(cluster, tuple(averages), alpha_thresh)


def knn_score(model: KnnModel, x: FeatureVector) -> float:
    """Mean distance from ``x`` to all ``n`` cluster points."""
    _check_dim(model, x)
    return float(_row_distances(model._matrix, x.to_dense()).mean())


def fit_cblof(cluster: Sequence[FeatureVector], beta_thresh: float = 0.0) -> CblofModel:
    """Fit the centroid-distance detector on ``cluster``."""
    cluster = tuple(cluster)
    if not cluster:
        raise ValueError("CBLOF needs a non-empty cluster")
    m = _stack(cluster)
    centroid = m.mean(axis=0)
    dists = _row_distances(m, centroid)
    return CblofModel(tuple(centroid.tolist()), tuple(dists.tolist()), beta_thresh)


def cblof_score(model: CblofModel, x: FeatureVector) -> float:
    """Distance from ``x`` to the cluster centroid."""
    _check_dim(model, x)
    return float(np.sqrt(np.sum((x.to_dense() - model._centroid) ** 2)))


def _check_dim(model: DetectorModel, x: FeatureVector) -> None:
    if x.dim != model.dim:
        raise ValueError(f"vector dimension {x.dim} does not match model dimension {model.dim}")


def fit_detector(method: str, cluster: Sequence[FeatureVector], coeff: float = 0.0) -> DetectorModel:
    if method == "knn":
        return fit_knn(cluster, coeff)
    if method == "cblof":
        return fit_cblof(cluster, coeff)
    raise ValueError(f"unknown method {method!r}; expected 'knn' or 'cblof'")


def score(model: DetectorModel, x: FeatureVector) -> float:
    if isinstance(model, KnnModel):
        return knn_score(model, x)
    return cblof_score(model, x)


class Verdict(NamedTuple):
    label: int
    score: float
    reason: str = OK


def is_outlier(score_value: float, threshold: float) -> bool:
    # A score equal to the threshold is still relevant.
    return score_value > threshold


def classify(model: DetectorModel, x: FeatureVector) -> Verdict:
    """Label ``x`` as 1 (relevant) or 0 (outlier).

    Zero vectors are scored like any other input but carry the
    ``EMPTY_DOC`` reason code.
    """
    s = score(model, x)
    label = 0 if is_outlier(s, model.threshold) else 1
    return Verdict(label, s, EMPTY_DOC if x.is_empty else OK)


@dataclass(frozen=True)
class ClusterPartition:
    boundary: int
    large_clusters: tuple[int, ...]
    small_clusters: tuple[int, ...]
    alpha_part: float
    beta_part: float


def partition_clusters(sizes: Sequence[int], alpha_part: float = 0.7, beta_part: float = 4.0) -> ClusterPartition:
    """Split clusters sorted by decreasing size into large and small ones.

    The boundary ``b`` (1-based) is the first index where either the
    first ``b`` clusters hold at least ``alpha_part`` of all points, or
    ``|C_b| / |C_{b+1}| >= beta_part``. Cluster indices in the result are
    1-based as well. Comparisons use exact rational arithmetic so that,
    e.g., 70 of 100 points meets ``alpha_part = 0.7``.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if any(s <= 0 for s in sizes):
        raise ValueError("cluster sizes must be positive")
    if any(a < b for a, b in zip(sizes, sizes[1:])):
        raise ValueError("cluster sizes must be sorted in non-increasing order")
    if not 0 < alpha_part <= 1:
        raise ValueError(f"alpha_part must be in (0, 1], got {alpha_part}")
    if beta_part < 1:
        raise ValueError(f"beta_part must be >= 1, got {beta_part}")

    alpha = Fraction(str(alpha_part))
    beta = Fraction(str(beta_part))
    mass_needed = sum(sizes) * alpha
    k = len(sizes)
    boundary = k
    prefix = 0
    for b in range(1, k + 1):
        prefix += sizes[b - 1]
        if prefix >= mass_needed:
            boundary = b
            break
        if b < k and sizes[b - 1] >= beta * sizes[b]:
            boundary = b
            break
    return ClusterPartition(
        boundary=boundary,
        large_clusters=tuple(range(1, boundary + 1)),
        small_clusters=tuple(range(boundary + 1, k + 1)),
        alpha_part=alpha_part,
        beta_part=beta_part,
    )
