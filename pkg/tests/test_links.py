from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import T0
from issuelens.corpus import Corpus, Issue, IssueLink
from issuelens.links import (
    DocumentVector,
    EmbeddingError,
    LinkSimilarityRecord,
    analyze_links,
    cosine_similarity,
    distribution_rows,
    document_terms,
    embed_document,
    fit_tfidf,
    load_external_embeddings,
    per_type_distributions,
    record_rows,
)


def test_terms_drop_punctuation_and_markup():
    assert document_terms("Fix: the {code}x=1{code} BUG, now!") == ["fix", "the", "bug", "now"]
    assert document_terms("a the b", frozenset({"the"})) == ["a", "b"]


def test_rare_term_outweighs_common():
    model = fit_tfidf(["a b", "a c"])
    v = embed_document(model, "a b")
    a_id, b_id = model.vocabulary["a"][0], model.vocabulary["b"][0]
    assert v.sparse[b_id] > v.sparse[a_id]
    assert model.idf("b") == pytest.approx(math.log(3 / 2) + 1)


def test_term_in_every_document_has_unit_idf():
    assert fit_tfidf(["x y", "x z", "x"]).idf("x") == 1.0


def test_model_shape_and_determinism():
    docs = ["the gate opens", "the gate closes", "a radio"]
    model = fit_tfidf(docs)
    ids = sorted(i for i, _ in model.vocabulary.values())
    assert ids == list(range(len(model.vocabulary)))
    assert all(1 <= df <= model.n_documents for _, df in model.vocabulary.values())
    assert fit_tfidf(docs) == model


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        fit_tfidf([])
    with pytest.raises(ValueError):
        fit_tfidf(["", "  "])


def test_three_document_fixture():
    # values from a hand evaluation of raw tf x (ln((1+N)/(1+df)) + 1), L2 normalised
    model = fit_tfidf(["a b", "a c", "b b d"])
    v = [embed_document(model, d) for d in ("a b", "a c", "b b d")]
    assert cosine_similarity(v[0], v[1]) == pytest.approx(0.42804603506311856, abs=1e-9)
    assert cosine_similarity(v[0], v[2]) == pytest.approx(0.5908524456113747, abs=1e-9)
    assert cosine_similarity(v[1], v[2]) == 0.0


def test_embedding_norms_and_oov():
    model = fit_tfidf(["alpha beta", "beta gamma"])
    v = embed_document(model, "alpha beta")
    assert v.norm == pytest.approx(1.0, abs=1e-12)
    assert embed_document(model, "alpha beta zzz") == v
    zero = embed_document(model, "zzz qqq")
    assert zero.norm == 0.0 and zero.sparse == {}
    assert cosine_similarity(zero, v) == 0.0


def test_identical_documents_identical_vectors():
    model = fit_tfidf(["same text here", "same text here"])
    a, b = embed_document(model, "same text here"), embed_document(model, "same text here")
    assert a == b and cosine_similarity(a, b) == pytest.approx(1.0, abs=1e-9)


def test_cosine_hand_values():
    a = DocumentVector.from_dense([1.0, 0.0])
    b = DocumentVector.from_dense([1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert cosine_similarity(a, b) == pytest.approx(0.7071067811865476, abs=1e-12)
    assert cosine_similarity(DocumentVector.from_sparse({0: 1.0}),
                             DocumentVector.from_sparse({1: 2.0})) == 0.0


def test_cosine_errors():
    with pytest.raises(EmbeddingError):
        cosine_similarity(DocumentVector.from_dense([1.0, 2.0]), DocumentVector.from_dense([1.0]))
    with pytest.raises(EmbeddingError):
        cosine_similarity(DocumentVector.from_dense([1.0]), DocumentVector.from_sparse({0: 1.0}))
    with pytest.raises(EmbeddingError):
        DocumentVector.from_dense([[1.0, 2.0]])


dense = st.lists(st.floats(-100, 100, allow_nan=False), min_size=3, max_size=3)


@given(dense, dense)
def test_cosine_symmetric_and_bounded(x, y):
    a, b = DocumentVector.from_dense(x), DocumentVector.from_dense(y)
    assert cosine_similarity(a, b) == cosine_similarity(b, a)
    assert -1.0 <= cosine_similarity(a, b) <= 1.0


@given(dense, dense, st.floats(1e-3, 1e3))
def test_cosine_scale_invariant(x, y, k):
    a, b = DocumentVector.from_dense(x), DocumentVector.from_dense(y)
    if a.norm < 1e-6 or b.norm < 1e-6:
        return
    scaled = DocumentVector.from_dense([k * v for v in x])
    assert cosine_similarity(scaled, b) == pytest.approx(cosine_similarity(a, b), abs=1e-9)


@given(dense)
def test_norm_matches_recomputation(x):
    v = DocumentVector.from_dense(x)
    assert v.norm == pytest.approx(math.sqrt(sum(t * t for t in x)), abs=1e-9)


words = st.lists(st.sampled_from(["gate", "radio", "fails", "open", "tls", "route"]),
                 min_size=1, max_size=8).map(" ".join)


@given(st.lists(words, min_size=2, max_size=6))
def test_tfidf_similarities_in_unit_interval(docs):
    model = fit_tfidf(docs)
    vecs = [embed_document(model, d) for d in docs]
    for a in vecs:
        assert all(w >= 0 for w in a.sparse.values())
        for b in vecs:
            assert 0.0 <= cosine_similarity(a, b) <= 1.0


# ---------------------------------------------------------------- distributions

def _rec(t, s, n=0):
    return LinkSimilarityRecord(t, f"A-{n}", f"B-{n}", s)


def test_two_value_distribution():
    (d,) = per_type_distributions([_rec("Relates", 0.0), _rec("Relates", 1.0, 1)])
    assert (d.min, d.q1, d.median, d.q3, d.max, d.mean) == (0.0, 0.25, 0.5, 0.75, 1.0, 0.5)


def test_distributions_sorted_by_median():
    recs = [_rec("Relates", 0.2), _rec("Cloners", 1.0, 1), _rec("Duplicate", 0.6, 2)]
    assert [d.link_type for d in per_type_distributions(recs)] == [
        "Cloners", "Duplicate", "Relates"]
    assert per_type_distributions([]) == []


@given(st.lists(st.tuples(st.sampled_from(["A", "B"]), st.floats(-1, 1)), min_size=1))
def test_distribution_ordering(pairs):
    for d in per_type_distributions([_rec(t, s, n) for n, (t, s) in enumerate(pairs)]):
        assert d.min <= d.q1 <= d.median <= d.q3 <= d.max and d.count >= 1


# ---------------------------------------------------------------- pipeline

def _linked(a_text, b_text, link_type="Duplicate"):
    a = Issue("T-1", "T", summary=a_text, description="", created=T0,
              links=(IssueLink(link_type, "outward", "T-1", "T-2"),))
    b = Issue("T-2", "T", summary=b_text, description="", created=T0)
    return Corpus((a, b))


def test_identical_duplicate_pair():
    result = analyze_links(_linked("same words", "same words"), 2021)
    assert [(r.link_type, r.similarity) for r in result.records] == [
        ("Duplicate", pytest.approx(1.0, abs=1e-9))]


def test_external_requires_sidecar():
    with pytest.raises(ValueError):
        analyze_links(_linked("a", "b"), 2021, provider="external")
    with pytest.raises(ValueError):
        analyze_links(_linked("a", "b"), 2021, provider="bert")


def test_sidecar_loading(tmp_path):
    path = tmp_path / "v.tsv"
    path.write_text("T-1\t1 0 0 0\nX-9\t0 1 0 0\n")
    ext = load_external_embeddings(path, _linked("a", "b"))
    assert len(ext.vectors) == 2 and ext.dim == 4 and ext.unmatched == ("X-9",)


@pytest.mark.parametrize("body,match", [
    ("T-1\t1 0 0 0\nT-2\t1 0 0 0 0\n", "T-2"),
    ("T-1 1 0\n", "key<TAB>values"),
    ("T-1\t1 x\n", "non-numeric"),
    ("T-1\t1 0\nT-1\t0 1\n", "duplicate"),
    ("T-1\t\n", "empty"),
])
def test_sidecar_errors(tmp_path, body, match):
    path = tmp_path / "v.tsv"
    path.write_text(body)
    with pytest.raises(EmbeddingError, match=match):
        load_external_embeddings(path)


def test_external_pipeline_and_missing_vectors(tmp_path):
    path = tmp_path / "v.tsv"
    path.write_text("T-1\t1 0\nT-2\t1 1\n")
    result = analyze_links(_linked("a", "b"), 2021, provider="external", sidecar=path)
    assert result.records[0].similarity == pytest.approx(0.7071067811865476)
    path.write_text("T-1\t1 0\n")
    result = analyze_links(_linked("a", "b"), 2021, provider="external", sidecar=path)
    assert result.records == () and result.missing_vector == 1


def test_examples_clone_group_on_top(examples):
    result = analyze_links(examples, 2021)
    dists = {d.link_type: d for d in result.distributions}
    assert dists["Cloners"].median == pytest.approx(1.0, abs=1e-9)
    assert result.distributions[0].link_type == "Cloners"
    assert all(dists["Cloners"].median >= d.median for d in result.distributions)


def test_providers_join_on_pair(examples, tmp_path):
    tfidf = analyze_links(examples, 2021)
    keys = sorted({k for r in tfidf.records for k in (r.source_key, r.target_key)})
    path = tmp_path / "v.tsv"
    path.write_text("".join(f"{k}\t{n + 1} 1 0\n" for n, k in enumerate(keys)))
    ext = analyze_links(examples, 2021, provider="external", sidecar=path)
    pair = lambda r: (r.link_type, r.source_key, r.target_key)  # noqa: E731
    assert {pair(r) for r in ext.records} == {pair(r) for r in tfidf.records}


def test_fit_scope_switch(examples):
    a = analyze_links(examples, 2021, fit_scope="linked")
    b = analyze_links(examples, 2021, fit_scope="tracker")
    assert [r.source_key for r in a.records] == [r.source_key for r in b.records]
    with pytest.raises(ValueError):
        analyze_links(examples, 2021, fit_scope="world")


def test_rows(examples):
    result = analyze_links(examples, 2021)
    assert len(record_rows(result.records)) == len(result.records)
    assert distribution_rows(result.distributions)[0][0] == "Cloners"
