"""TF-IDF weighting with sparse, L2-normalized output vectors.

TF is the relative term count within a document, IDF is ``ln(N / df)``
without smoothing, and the product is normalized to unit length.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .textprep import TokenDocument


@dataclass(frozen=True)
class FeatureVector:
    """Sparse vector over a vocabulary of size ``dim``.

    ``entries`` maps term index to a nonzero weight. An empty ``entries``
    is the zero vector (empty or fully out-of-vocabulary document).
    """

    entries: Mapping[int, float]
    dim: int
    normalized: bool = False

    def __post_init__(self):
        entries = {int(i): float(w) for i, w in sorted(self.entries.items()) if w != 0.0}
        for i in entries:
            if not 0 <= i < self.dim:
                raise ValueError(f"index {i} outside dimension {self.dim}")
        object.__setattr__(self, "entries", entries)

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def norm(self) -> float:
        return math.sqrt(math.fsum(w * w for w in self.entries.values()))

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        if self.entries:
            out[list(self.entries)] = list(self.entries.values())
        return out

    @classmethod
    def from_dense(cls, values: Sequence[float], normalized: bool = False) -> "FeatureVector":
        return cls({i: v for i, v in enumerate(values) if v != 0.0}, len(values), normalized)


@dataclass(frozen=True)
class TfidfModel:
    vocabulary: Mapping[str, int]
    doc_freq: tuple[int, ...]
    n_docs: int
    idf: tuple[float, ...]
    smooth_idf: bool = False
    normalize: bool = True
    _terms: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = sorted(self.vocabulary, key=self.vocabulary.__getitem__)
        if [self.vocabulary[t] for t in terms] != list(range(len(terms))):
            raise ValueError("vocabulary indices must be a bijection onto 0..|V|-1")
        if not (len(self.doc_freq) == len(self.idf) == len(terms)):
            raise ValueError("doc_freq/idf length does not match vocabulary size")
        for t, df in zip(terms, self.doc_freq):
            if not 1 <= df <= self.n_docs:
                raise ValueError(f"doc_freq[{t!r}]={df} outside [1, {self.n_docs}]")
        object.__setattr__(self, "vocabulary", dict(self.vocabulary))
        object.__setattr__(self, "doc_freq", tuple(int(x) for x in self.doc_freq))
        object.__setattr__(self, "idf", tuple(float(x) for x in self.idf))
        object.__setattr__(self, "_terms", tuple(terms))

    @property
    def dim(self) -> int:
        return len(self.vocabulary)

    @property
    def terms(self) -> tuple[str, ...]:
        """Vocabulary terms in index order."""
        return self._terms


def term_frequency(doc: TokenDocument | Sequence[str], term: str) -> float:
    """Occurrences of ``term`` divided by the document length."""
    tokens = doc.tokens if isinstance(doc, TokenDocument) else tuple(doc)
    if not tokens:
        raise ValueError("term frequency is undefined for an empty document")
    return tokens.count(term) / len(tokens)


def _idf(n_docs: int, df: int, smooth: bool) -> float:
    if smooth:
        return math.log((1 + n_docs) / (1 + df))
    return math.log(n_docs / df)


def fit(docs: Iterable[TokenDocument], smooth_idf: bool = False, normalize: bool = True) -> TfidfModel:
    """Build vocabulary, document frequencies and IDF weights.

    Empty documents count towards ``n_docs`` but contribute no terms.
    ``smooth_idf`` uses ``ln((1 + N) / (1 + df))``, which still gives zero
    weight to terms present in every document.
    """
    docs = list(docs)
    if not docs:
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    df: Counter[str] = Counter()
    for d in docs:
        df.update(set(d.tokens))
    if not df:
        raise ValueError("cannot fit TF-IDF: every document is empty")
    terms = sorted(df)
    n = len(docs)
    return TfidfModel(
        vocabulary={t: i for i, t in enumerate(terms)},
        doc_freq=tuple(df[t] for t in terms),
        n_docs=n,
        idf=tuple(_idf(n, df[t], smooth_idf) for t in terms),
        smooth_idf=smooth_idf,
        normalize=normalize,
    )


def transform(model: TfidfModel, doc: TokenDocument) -> FeatureVector:
    """Weight ``doc`` by TF-IDF; unknown tokens are dropped.

    Zero-weight terms are omitted, so a document made only of terms that
    occur in every fit document maps to the zero vector.
    """
    vocab = model.vocabulary
    if not doc.tokens:
        return FeatureVector({}, model.dim)
    length = len(doc.tokens)
    counts = Counter(t for t in doc.tokens if t in vocab)
    weights = {}
    for term, c in counts.items():
        w = (c / length) * model.idf[vocab[term]]
        if w != 0.0:
            weights[vocab[term]] = w
    if not weights or not model.normalize:
        return FeatureVector(weights, model.dim)
    norm = math.sqrt(math.fsum(w * w for w in weights.values()))
    return FeatureVector({i: w / norm for i, w in weights.items()}, model.dim, normalized=True)


def transform_all(model: TfidfModel, docs: Iterable[TokenDocument]) -> list[FeatureVector]:
    return [transform(model, d) for d in docs]
