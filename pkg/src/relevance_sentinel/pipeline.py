"""End-to-end wiring: dataset -> tokens -> TF-IDF -> detector."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .corpus import Dataset, extract_relevant_cluster
from .detector import DetectorModel, Verdict, classify, fit_detector
from .model_store import ModelBundle
from .textprep import PreprocessConfig, preprocess, preprocess_all
from .vectorizer import FeatureVector, TfidfModel, fit, transform


class EmptyClusterError(ValueError):
    pass


@dataclass(frozen=True)
class FittedPipeline:
    preprocess: PreprocessConfig
    tfidf: TfidfModel
    detector: DetectorModel
    cluster: tuple[FeatureVector, ...]


def fit_pipeline(
    train: Dataset,
    method: str,
    coeff: float = 0.0,
    cfg: PreprocessConfig | None = None,
    fit_on_all: bool = False,
    smooth_idf: bool = False,
) -> FittedPipeline:
    """Fit TF-IDF (on the relevant cluster unless ``fit_on_all``) and the detector."""
    cfg = cfg or PreprocessConfig()
    relevant = extract_relevant_cluster(train)
    if not len(relevant):
        raise EmptyClusterError("empty relevant cluster: training data has no label-1 documents")
    rel_tokens = preprocess_all(relevant, cfg)
    fit_docs = preprocess_all(train, cfg) if fit_on_all else rel_tokens
    tfidf = fit(fit_docs, smooth_idf=smooth_idf)
    cluster = tuple(transform(tfidf, d) for d in rel_tokens)
    detector = fit_detector(method, cluster, coeff)
    return FittedPipeline(cfg, tfidf, detector, cluster)


def vectorize(tfidf: TfidfModel, cfg: PreprocessConfig, texts: Iterable[str]) -> list[FeatureVector]:
    return [transform(tfidf, preprocess(t, cfg)) for t in texts]


def classify_texts(bundle: ModelBundle | FittedPipeline, texts: Iterable[str]) -> list[Verdict]:
    vectors = vectorize(bundle.tfidf, bundle.preprocess, texts)
    return [classify(bundle.detector, v) for v in vectors]
