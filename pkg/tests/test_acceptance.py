"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary lists
PASS/FAIL per criterion.
"""

import dataclasses
import math
import random
import time

import numpy as np
import pytest

import oracles
from conftest import random_corpus, token_docs
from reference_tables import (
    CBLOF_MAX_DISTANCE,
    CBLOF_ROWS,
    KNN_MAX_AVERAGE,
    KNN_ROWS,
    N_TEST_IRRELEVANT,
    N_TEST_RELEVANT,
    as_table,
)
from relevance_sentinel.cli import main
from relevance_sentinel.detector import (
    cblof_score,
    classify,
    compute_threshold,
    euclidean_distance,
    fit_cblof,
    fit_knn,
    knn_score,
)
from relevance_sentinel.metrics import ConfusionMatrix, compute_metrics, confusion
from relevance_sentinel.model_store import ModelBundle, dumps, load_model, save_model
from relevance_sentinel.pipeline import classify_texts, fit_pipeline
from relevance_sentinel.corpus import Dataset, LabeledDocument
from relevance_sentinel.sweep import compare_methods, run_sweep, select_best
from relevance_sentinel.textprep import TokenDocument
from relevance_sentinel.vectorizer import FeatureVector, fit, transform
from synthetic import two_topic_corpus, write_csv

GRID = (0.001, 0.005, 0.01, 0.05, -0.001, -0.005, -0.01, -0.05)


def vectorized_corpus(rng, **kw):
    corpus = random_corpus(rng, **kw)
    model = fit(token_docs(corpus))
    vecs = [transform(model, TokenDocument(f"d{i}", tuple(t))) for i, t in enumerate(corpus)]
    return corpus, model, vecs


def test_c1_threshold_reproduction():
    cases = [(KNN_MAX_AVERAGE, r[0], r[1]) for r in KNN_ROWS] + [(CBLOF_MAX_DISTANCE, r[0], r[1]) for r in CBLOF_ROWS]
    assert len(cases) == 16
    for max_score, coeff, expected in cases:
        assert abs(compute_threshold(max_score, coeff) - expected) <= 1e-5, (max_score, coeff)
    best = math.inf
    for _ in range(20):
        t0 = time.perf_counter()
        for max_score, coeff, _ in cases:
            compute_threshold(max_score, coeff)
        best = min(best, time.perf_counter() - t0)
    assert best < 1e-3


def test_c2_metric_reproduction():
    knn = compute_metrics(ConfusionMatrix(tp=25, fp=10, fn=4, tn=91))
    cblof = compute_metrics(ConfusionMatrix(tp=26, fp=10, fn=3, tn=91))
    knn_row = next(r for r in KNN_ROWS if r[0] == -0.01)
    cblof_row = next(r for r in CBLOF_ROWS if r[0] == -0.005)
    for m, row in ((knn, knn_row), (cblof, cblof_row)):
        got = (m.accuracy, m.precision, m.recall, m.f1)
        for g, e in zip(got, row[2:]):
            assert abs(g - e) <= 1e-6
    assert abs(knn.accuracy - 0.892308) <= 1e-6 and abs(cblof.accuracy - 0.900000) <= 1e-6
    assert abs(knn.f1 - 0.781250) <= 1e-6 and abs(cblof.f1 - 0.800000) <= 1e-6
    # The F1 without the factor two would be 0.390625 here.
    assert abs(knn.f1 - knn.precision * knn.recall / (knn.precision + knn.recall)) > 0.3


def test_c3_degenerate_collapse():
    rng = random.Random(3)
    checked = 0
    for _ in range(60):
        _, _, vecs = vectorized_corpus(rng)
        cluster, queries = vecs[: max(2, len(vecs) // 2)], vecs
        labels = [rng.randint(0, 1) for _ in queries]
        for fitter, scorer in ((fit_knn, knn_score), (fit_cblof, cblof_score)):
            base = fitter(cluster)
            scores = [scorer(base, q) for q in queries]
            if min(scores) == 0 or base.max_score == 0:
                continue
            coeff = 0.5 * min(scores) / base.max_score - 1
            model = base.with_coeff(coeff)
            assert model.threshold < min(scores)
            preds = [classify(model, q).label for q in queries]
            assert preds == [0] * len(queries)
            m = compute_metrics(confusion(preds, labels))
            assert m.accuracy == labels.count(0) / len(labels)
            assert m.precision == m.recall == m.f1 == 0
            checked += 1
    assert checked >= 50
    # 29 relevant / 101 irrelevant instance.
    labels = [1] * N_TEST_RELEVANT + [0] * N_TEST_IRRELEVANT
    m = compute_metrics(confusion([0] * len(labels), labels))
    assert abs(m.accuracy - 0.776923) <= 1e-6
    assert m.accuracy == 101 / 130
    assert m.precision == m.recall == m.f1 == 0


def test_c4_selection_and_comparison():
    knn_best = select_best(as_table("knn", KNN_ROWS))
    cblof_best = select_best(as_table("cblof", CBLOF_ROWS))
    assert knn_best.coeff == -0.01
    assert cblof_best.coeff == -0.005
    rep = compare_methods(knn_best, cblof_best)
    assert rep.overall == "cblof"
    assert all(w == "cblof" for w in rep.winners.values())


def test_c5_oracle_equivalence():
    rng = random.Random(2024)
    tol = 1e-9
    for _ in range(100):
        corpus, model, vecs = vectorized_corpus(rng, max_docs=50, max_vocab=200)
        assert len(corpus) <= 50 and model.dim <= 200
        dense = [oracles.tfidf_dense(corpus, t) for t in corpus]
        for v, d in zip(vecs, dense):
            assert np.max(np.abs(v.to_dense() - np.array(d))) <= tol
            # From the raw formulas: TF * IDF over the literal counts.
            for term, i in model.vocabulary.items():
                assert abs(model.idf[i] - oracles.idf(corpus, term)) <= tol

        coeff = rng.choice(GRID)
        knn = fit_knn(vecs, coeff)
        ref_avg = oracles.knn_train_averages(dense)
        assert max(abs(a - b) for a, b in zip(knn.train_averages, ref_avg)) <= tol
        assert abs(knn.threshold - oracles.threshold(max(ref_avg), coeff)) <= tol

        cb = fit_cblof(vecs, coeff)
        c = oracles.centroid(dense)
        ref_dist = [oracles.dist(p, c) for p in dense]
        assert max(abs(a - b) for a, b in zip(cb.centroid, c)) <= tol
        assert max(abs(a - b) for a, b in zip(cb.train_distances, ref_dist)) <= tol
        assert abs(cb.threshold - oracles.threshold(max(ref_dist), coeff)) <= tol

        extra = [[rng.choice(list(model.vocabulary)) for _ in range(rng.randint(1, 6))] for _ in range(5)]
        for toks in list(corpus) + extra:
            q = transform(model, TokenDocument("q", tuple(toks)))
            qd = oracles.tfidf_dense(corpus, toks)
            assert abs(knn_score(knn, q) - oracles.knn_query(dense, qd)) <= tol
            assert abs(cblof_score(cb, q) - oracles.cblof_query(dense, qd)) <= tol


def test_c6_property_suite():
    rng = random.Random(77)
    nprng = np.random.default_rng(77)

    # Distance axioms.
    for _ in range(300):
        dim = int(nprng.integers(1, 30))
        a, b, c = (FeatureVector.from_dense(nprng.normal(size=dim) * (nprng.random(dim) < 0.5)) for _ in range(3))
        dab = euclidean_distance(a, b)
        assert abs(dab - euclidean_distance(b, a)) <= 1e-9
        assert euclidean_distance(a, a) <= 1e-9
        assert euclidean_distance(a, c) <= dab + euclidean_distance(b, c) + 1e-9

    for _ in range(40):
        corpus, model, vecs = vectorized_corpus(rng)
        # Unit norm.
        for v in vecs:
            if not v.is_empty:
                assert abs(v.norm() - 1) <= 1e-9

        cluster = vecs[: max(2, len(vecs) // 2)]
        labels = [rng.randint(0, 1) for _ in vecs]
        test = list(zip(vecs, labels))
        for method, fitter in (("knn", fit_knn), ("cblof", fit_cblof)):
            base = fitter(cluster)

            # Antitone outlier set in the coefficient.
            prev = None
            for c in sorted(GRID + (0.0, 0.2, -0.3)):
                out = {i for i, v in enumerate(vecs) if classify(base.with_coeff(c), v).label == 0}
                if prev is not None:
                    assert out <= prev
                prev = out

            # Recall saturation.
            scores = [classify(base, v).score for v in vecs]
            if base.max_score > 0:
                coeff = max(scores) / base.max_score - 1 + 1e-9
                if coeff > -1:
                    m = base.with_coeff(coeff)
                    preds = [classify(m, v).label for v in vecs]
                    assert confusion(preds, labels).fn == 0

            # Boundary: the farthest cluster point scores exactly the cblof threshold.
            if method == "cblof":
                top = max(range(len(cluster)), key=lambda i: base.train_distances[i])
                verdict = classify(base, cluster[top])
                assert verdict.score == base.threshold and verdict.label == 1

            # Global IDF rescaling leaves classifications unchanged.
            for factor in (2.0, 1 / math.log(10), 0.37, 13.0):
                scaled = dataclasses.replace(model, idf=tuple(w * factor for w in model.idf))
                svecs = [transform(scaled, TokenDocument("d", tuple(t))) for t in corpus]
                for v, s in zip(vecs, svecs):
                    assert s.entries.keys() == v.entries.keys()
                    assert max((abs(s.entries[k] - v.entries[k]) for k in v.entries), default=0) <= 1e-12
                sbase = fitter(svecs[: len(cluster)])
                for c in GRID:
                    a = [classify(base.with_coeff(c), v).label for v in vecs]
                    b = [classify(sbase.with_coeff(c), v).label for v in svecs]
                    assert a == b

    # Boundary for knn: identical points give threshold 0 and score 0.
    p = FeatureVector({0: 0.6, 1: 0.8}, 2)
    m = fit_knn([p, p, p], 0.0)
    assert knn_score(m, p) == m.threshold == 0
    assert classify(m, p).label == 1
    assert classify(m, FeatureVector({0: 1.0}, 2)).label == 0


def test_c7_end_to_end_synthetic(tmp_path, capsys):
    rows = two_topic_corpus(seed=0, n_docs=500, noise=0.1)
    train = write_csv(tmp_path / "train.csv", rows[:300])
    test = write_csv(tmp_path / "test.csv", rows[300:])
    import csv

    for method in ("knn", "cblof"):
        out = tmp_path / f"{method}.csv"
        t0 = time.perf_counter()
        code = main(["sweep", "--train", str(train), "--test", str(test), "--method", method, "--out", str(out)])
        elapsed = time.perf_counter() - t0
        assert code == 0
        assert elapsed < 10
        with open(out, newline="") as fh:
            table = list(csv.DictReader(fh))
        printed = capsys.readouterr().out
        best_line = next(line for line in printed.splitlines() if line.startswith("best:"))
        best_f1 = float(best_line.rsplit("f1=", 1)[1])
        assert best_f1 >= 0.9
        assert max(float(r["f1"]) for r in table) >= 0.9


def test_c8_persistence(tmp_path):
    rng = random.Random(8)
    for k in range(30):
        corpus = random_corpus(rng)
        docs = [LabeledDocument(f"d{i}", " ".join(t), 1 if i < 2 else rng.randint(0, 1)) for i, t in enumerate(corpus)]
        ds = Dataset(tuple(docs))
        method = ("knn", "cblof")[k % 2]
        f = fit_pipeline(ds, method, rng.choice(GRID))
        bundle = ModelBundle(f.preprocess, f.tfidf, f.detector, {"run": k})
        path = tmp_path / f"m{k}.json"
        save_model(bundle, path)
        loaded = load_model(path)
        texts = [d.text for d in docs] + [" ".join(rng.choice(list(f.tfidf.vocabulary)) for _ in range(4)) for _ in range(10)]
        for a, b in zip(classify_texts(bundle, texts), classify_texts(loaded, texts)):
            assert abs(a.score - b.score) <= 1e-12
            assert a.label == b.label
        again = tmp_path / f"m{k}b.json"
        save_model(loaded, again)
        assert path.read_bytes() == again.read_bytes()
        assert dumps(bundle) == dumps(loaded)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
