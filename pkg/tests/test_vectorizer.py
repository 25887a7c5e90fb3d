import math
import random

import pytest

import oracles
from conftest import random_corpus, token_docs
from relevance_sentinel.textprep import TokenDocument
from relevance_sentinel.vectorizer import FeatureVector, TfidfModel, fit, term_frequency, transform


def doc(*tokens):
    return TokenDocument("x", tokens)


def test_term_frequency():
    assert term_frequency(doc("armed", "car", "taken"), "car") == pytest.approx(0.333333, abs=1e-6)
    assert term_frequency(doc("car", "car"), "car") == 1.0
    assert term_frequency(doc("car"), "gun") == 0.0
    with pytest.raises(ValueError):
        term_frequency(doc(), "car")


def test_idf_single_occurrence():
    docs = token_docs([["gun", "car"], ["car"], ["car", "road"], ["road"]])
    m = fit(docs)
    assert m.idf[m.vocabulary["gun"]] == pytest.approx(1.386294, abs=1e-6)
    assert m.n_docs == 4


def test_idf_zero_for_universal_term():
    m = fit(token_docs([["car", "stolen"], ["car", "found"]]))
    assert m.dim == 3
    assert m.vocabulary == {"car": 0, "found": 1, "stolen": 2}
    assert m.idf[m.vocabulary["car"]] == 0.0
    assert m.idf[m.vocabulary["stolen"]] == m.idf[m.vocabulary["found"]] == pytest.approx(math.log(2))


def test_fit_counts_empty_documents():
    m = fit(token_docs([["a"], [], ["a", "b"]]))
    assert m.n_docs == 3
    assert m.doc_freq == (2, 1)


def test_fit_errors():
    with pytest.raises(ValueError):
        fit([])
    with pytest.raises(ValueError):
        fit(token_docs([[], []]))


def test_transform_oov_and_empty():
    m = fit(token_docs([["car", "stolen"], ["car", "found"]]))
    assert transform(m, doc("unknown", "words")).is_empty
    assert transform(m, doc()).is_empty
    assert transform(m, doc("car")).is_empty  # idf 0


def test_transform_single_nonzero_term():
    m = fit(token_docs([["car", "stolen"], ["car", "found"]]))
    v = transform(m, doc("car", "stolen"))
    assert v.entries == {m.vocabulary["stolen"]: 1.0}
    assert v.normalized


def test_transform_equal_weights():
    m = fit(token_docs([["a", "b"], ["c"]]))
    v = transform(m, doc("a", "b"))
    assert list(v.entries.values()) == pytest.approx([0.7071068, 0.7071068], abs=1e-7)


def test_transform_without_normalization():
    m = fit(token_docs([["a", "b"], ["c"]]), normalize=False)
    v = transform(m, doc("a", "b"))
    assert not v.normalized
    assert list(v.entries.values()) == pytest.approx([0.5 * math.log(2)] * 2)


def test_smoothed_idf():
    m = fit(token_docs([["a", "b"], ["a"]]), smooth_idf=True)
    assert m.idf == pytest.approx((0.0, math.log(3 / 2)))


def test_token_order_irrelevant():
    m = fit(token_docs([["a", "b", "c"], ["a", "d"], ["e"]]))
    assert transform(m, doc("a", "b", "b", "c")) == transform(m, doc("b", "c", "a", "b"))


def test_model_invariants(rng):
    for _ in range(30):
        m = fit(token_docs(random_corpus(rng)))
        assert sorted(m.vocabulary.values()) == list(range(m.dim))
        assert list(m.terms) == sorted(m.terms)
        for t, i in m.vocabulary.items():
            assert 1 <= m.doc_freq[i] <= m.n_docs
            assert m.idf[i] >= 0
            assert (m.idf[i] == 0) == (m.doc_freq[i] == m.n_docs)


def test_invalid_model_rejected():
    with pytest.raises(ValueError):
        TfidfModel({"a": 1}, (1,), 1, (0.0,))
    with pytest.raises(ValueError):
        TfidfModel({"a": 0}, (3,), 2, (0.0,))


def test_feature_vector_rejects_out_of_range():
    with pytest.raises(ValueError):
        FeatureVector({5: 1.0}, 3)
    assert FeatureVector({0: 0.0, 1: 2.0}, 3).entries == {1: 2.0}


def test_unit_norm_and_oracle_match(rng):
    for _ in range(100):
        corpus = random_corpus(rng)
        m = fit(token_docs(corpus))
        for toks in corpus:
            v = transform(m, TokenDocument("q", tuple(toks)))
            expected = oracles.tfidf_dense(corpus, toks)
            assert v.to_dense().tolist() == pytest.approx(expected, abs=1e-12)
            if not v.is_empty:
                assert abs(v.norm() - 1.0) <= 1e-9
