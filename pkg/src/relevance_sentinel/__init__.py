"""Relevance filtering of short texts by single-cluster anomaly detection.

Texts known to be relevant form one cluster in TF-IDF space; anything that
lies too far from that cluster (by mean pairwise distance or by distance to
the centroid) is flagged as irrelevant.
"""

__version__ = "0.1.0"

from .corpus import Dataset, DatasetError, LabeledDocument, extract_relevant_cluster, load_dataset
from .detector import (
    CblofModel,
    KnnModel,
    classify,
    compute_threshold,
    euclidean_distance,
    fit_cblof,
    fit_knn,
)
from .metrics import ConfusionMatrix, MetricsReport, compute_metrics, confusion
from .textprep import PreprocessConfig, TokenDocument, preprocess, preprocess_all
from .vectorizer import FeatureVector, TfidfModel, fit, transform

__all__ = [
    "CblofModel",
    "ConfusionMatrix",
    "Dataset",
    "DatasetError",
    "FeatureVector",
    "KnnModel",
    "LabeledDocument",
    "MetricsReport",
    "PreprocessConfig",
    "TfidfModel",
    "TokenDocument",
    "classify",
    "compute_metrics",
    "compute_threshold",
    "confusion",
    "euclidean_distance",
    "extract_relevant_cluster",
    "fit",
    "fit_cblof",
    "fit_knn",
    "load_dataset",
    "preprocess",
    "preprocess_all",
    "transform",
]
