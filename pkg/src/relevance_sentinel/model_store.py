"""Saving and loading fitted pipelines as canonical JSON.

The file layout is described in ``docs/model-format.md``. Floats are
written with ``repr`` (shortest round-trip form), keys are sorted and the
output is compact, so identical bundles always produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .detector import CblofModel, DetectorModel, KnnModel
from .textprep import PreprocessConfig
from .vectorizer import FeatureVector, TfidfModel

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """The model file cannot be parsed or violates the schema."""


@dataclass(frozen=True)
class ModelBundle:
    preprocess: PreprocessConfig
    tfidf: TfidfModel
    detector: DetectorModel
    metadata: dict[str, Any] = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        if self.detector.dim != self.tfidf.dim:
            raise ModelFormatError(
                f"detector dimension {self.detector.dim} does not match vocabulary size {self.tfidf.dim}"
            )


def file_fingerprint(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def make_metadata(train_path: str | Path | None = None) -> dict[str, Any]:
    """Fit metadata. ``SOURCE_DATE_EPOCH`` pins the timestamp for reproducible files."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    ts = int(epoch) if epoch else int(time.time())
    return {
        "fit_timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(ts)),
        "corpus_fingerprint": file_fingerprint(train_path) if train_path is not None else None,
        "tool_version": __version__,
    }


# -- encoding --------------------------------------------------------------


def _encode_vectors(vectors) -> dict:
    return {
        "indices": [list(v.entries) for v in vectors],
        "values": [list(v.entries.values()) for v in vectors],
        "normalized": [v.normalized for v in vectors],
    }


def _encode_detector(det: DetectorModel) -> dict:
    if isinstance(det, KnnModel):
        return {
            "method": "knn",
            "alpha_thresh": det.alpha_thresh,
            "cluster": _encode_vectors(det.cluster),
            "train_averages": list(det.train_averages),
            "max_average": det.max_average,
            "threshold": det.threshold,
        }
    return {
        "method": "cblof",
        "beta_thresh": det.beta_thresh,
        "centroid": list(det.centroid),
        "train_distances": list(det.train_distances),
        "max_distance": det.max_distance,
        "threshold": det.threshold,
    }


def bundle_to_dict(bundle: ModelBundle) -> dict:
    tf = bundle.tfidf
    return {
        "format_version": bundle.format_version,
        "preprocess": bundle.preprocess.to_dict(),
        "tfidf": {
            "terms": list(tf.terms),
            "doc_freq": list(tf.doc_freq),
            "idf": list(tf.idf),
            "n_docs": tf.n_docs,
            "smooth_idf": tf.smooth_idf,
            "normalize": tf.normalize,
        },
        "detector": _encode_detector(bundle.detector),
        "metadata": dict(bundle.metadata),
    }


def dumps(bundle: ModelBundle) -> str:
    return json.dumps(bundle_to_dict(bundle), sort_keys=True, separators=(",", ":"), allow_nan=False, ensure_ascii=False) + "\n"


def save_model(bundle: ModelBundle, path: str | Path) -> None:
    """Write ``bundle`` atomically: temp file in the target directory, then rename."""
    data = dumps(bundle).encode("utf-8")
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


# -- decoding --------------------------------------------------------------


def _get(d: dict, key: str, typ, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ModelFormatError(f"missing field {where}{key}")
    val = d[key]
    if typ is float:
        ok = isinstance(val, (int, float)) and not isinstance(val, bool)
    elif typ is int:
        ok = isinstance(val, int) and not isinstance(val, bool)
    else:
        ok = isinstance(val, typ)
    if not ok:
        raise ModelFormatError(f"field {where}{key} has wrong type {type(val).__name__}")
    return val


def _numbers(d: dict, key: str, where: str, typ=float) -> tuple:
    vals = _get(d, key, list, where)
    for i, v in enumerate(vals):
        if isinstance(v, bool) or not isinstance(v, (int, float) if typ is float else int):
            raise ModelFormatError(f"field {where}{key}[{i}] is not a number")
    return tuple(vals)


def _decode_vectors(d: dict, dim: int, where: str) -> tuple[FeatureVector, ...]:
    idx = _get(d, "indices", list, where)
    vals = _get(d, "values", list, where)
    norm = _get(d, "normalized", list, where)
    if not len(idx) == len(vals) == len(norm):
        raise ModelFormatError(f"{where}indices/values/normalized lengths differ")
    out = []
    for i, (ii, vv, nn) in enumerate(zip(idx, vals, norm)):
        if len(ii) != len(vv):
            raise ModelFormatError(f"{where}vector {i}: indices and values lengths differ")
        try:
            out.append(FeatureVector(dict(zip(ii, vv)), dim, bool(nn)))
        except (TypeError, ValueError) as exc:
            raise ModelFormatError(f"{where}vector {i}: {exc}") from None
    return tuple(out)


def _check_same(name: str, stored: float, derived: float) -> None:
    if stored != derived:
        raise ModelFormatError(f"stored detector.{name}={stored!r} disagrees with recomputed {derived!r}")


def _decode_detector(d: dict, dim: int) -> DetectorModel:
    method = _get(d, "method", str, "detector.")
    try:
        if method == "knn":
            cluster = _decode_vectors(_get(d, "cluster", dict, "detector."), dim, "detector.cluster.")
            det = KnnModel(cluster, _numbers(d, "train_averages", "detector."), _get(d, "alpha_thresh", float, "detector."))
            _check_same("max_average", _get(d, "max_average", float, "detector."), det.max_average)
        elif method == "cblof":
            det = CblofModel(
                _numbers(d, "centroid", "detector."),
                _numbers(d, "train_distances", "detector."),
                _get(d, "beta_thresh", float, "detector."),
            )
            _check_same("max_distance", _get(d, "max_distance", float, "detector."), det.max_distance)
        else:
            raise ModelFormatError(f"unknown detector.method {method!r}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"invalid detector: {exc}") from None
    _check_same("threshold", _get(d, "threshold", float, "detector."), det.threshold)
    if det.dim != dim:
        raise ModelFormatError(f"detector dimension {det.dim} does not match vocabulary size {dim}")
    return det


def bundle_from_dict(d: dict) -> ModelBundle:
    if not isinstance(d, dict):
        raise ModelFormatError("top-level value is not an object")
    version = _get(d, "format_version", int, "")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {version} (this reader supports {FORMAT_VERSION})")
    try:
        pre = PreprocessConfig.from_dict(_get(d, "preprocess", dict, ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"invalid preprocess section: {exc}") from None
    t = _get(d, "tfidf", dict, "")
    terms = _get(t, "terms", list, "tfidf.")
    try:
        tfidf = TfidfModel(
            vocabulary={term: i for i, term in enumerate(terms)},
            doc_freq=_numbers(t, "doc_freq", "tfidf.", int),
            n_docs=_get(t, "n_docs", int, "tfidf."),
            idf=_numbers(t, "idf", "tfidf."),
            smooth_idf=_get(t, "smooth_idf", bool, "tfidf."),
            normalize=_get(t, "normalize", bool, "tfidf."),
        )
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"invalid tfidf section: {exc}") from None
    if len(set(terms)) != len(terms):
        raise ModelFormatError("tfidf.terms contains duplicates")
    det = _decode_detector(_get(d, "detector", dict, ""), tfidf.dim)
    meta = _get(d, "metadata", dict, "")
    return ModelBundle(pre, tfidf, det, meta, version)


def loads(text: str) -> ModelBundle:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"malformed model file at offset {exc.pos} (line {exc.lineno}, column {exc.colno}): {exc.msg}") from None
    return bundle_from_dict(d)


def load_model(path: str | Path) -> ModelBundle:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
