"""TF-IDF weighting, cosine similarity, and the dwell-boosted CS vector."""

import math
import random
from collections import Counter

import numpy as np
import pytest

from footfall import similarity
from footfall.kgraph import CategoryDocument, query_context
from footfall.model import CategoryRegistry, QueryRecord, Trajectory
from footfall.similarity import (
    all_cosines,
    contextual_similarity,
    cosine,
    cosine_vectors,
    dwell_fractions,
    fit_tfidf,
    semantic_weight,
    semantic_weights,
    top_k_categories,
)

from conftest import ts


def doc(name, **terms):
    return CategoryDocument(name, Counter(terms))


def test_idf_single_document_term():
    corpus = [doc(f"c{i}", common=1) for i in range(18)]
    corpus[0] = doc("c0", common=1, rare=1)
    model = fit_tfidf(corpus)
    assert model.idf["rare"] == pytest.approx(math.log(18.0), abs=1e-12)
    assert model.idf["rare"] == pytest.approx(2.8904, abs=1e-4)


def test_idf_zero_for_ubiquitous_term():
    corpus = [doc(f"c{i}", common=2) for i in range(18)]
    model = fit_tfidf(corpus)
    assert model.idf["common"] == 0.0
    assert model.doc_vectors[0] == {}


def test_identical_documents_get_identical_vectors():
    corpus = [doc("a", x=2, y=1), doc("b", x=2, y=1)]
    model = fit_tfidf(corpus)
    assert model.doc_vectors[0] == model.doc_vectors[1]


def test_empty_corpus_is_hard_error():
    with pytest.raises(ValueError):
        fit_tfidf([])


def test_cosine_self_similarity_is_one():
    corpus = [doc("a", x=2, y=3), doc("b", z=1)]
    model = fit_tfidf(corpus)
    assert cosine(model, 0, Counter(x=2, y=3)) == pytest.approx(1.0, abs=1e-12)


def test_cosine_orthogonal_is_zero():
    corpus = [doc("a", x=1), doc("b", y=1)]
    model = fit_tfidf(corpus)
    assert cosine(model, 0, Counter(y=5)) == 0.0
    assert cosine(model, 0, Counter()) == 0.0


def test_cosine_matches_dense_oracle_on_random_corpora():
    rng = random.Random(77)
    for _ in range(25):
        n_docs = rng.randint(2, 12)
        vocab = [f"t{i}" for i in range(rng.randint(3, 30))]
        corpus = [
            doc(
                f"c{d}",
                **{
                    t: rng.randint(1, 5)
                    for t in rng.sample(vocab, rng.randint(1, len(vocab)))
                },
            )
            for d in range(n_docs)
        ]
        model = fit_tfidf(corpus)
        query = Counter(
            {t: rng.randint(1, 4) for t in rng.sample(vocab, rng.randint(1, len(vocab)))}
        )

        # Dense oracle: raw tf matrix * ln(N/df), plain numpy cosine.
        df = Counter()
        for d in corpus:
            df.update(set(d.terms))
        idf = {t: math.log(n_docs / df[t]) for t in df}
        for i, d in enumerate(corpus):
            u = np.array([d.terms.get(t, 0) * idf[t] for t in vocab if t in idf])
            v = np.array([query.get(t, 0) * idf[t] for t in vocab if t in idf])
            nu, nv = np.linalg.norm(u), np.linalg.norm(v)
            expected = float(u @ v / (nu * nv)) if nu > 0 and nv > 0 else 0.0
            assert cosine(model, i, query) == pytest.approx(expected, abs=1e-9)


def test_cosine_scale_invariance_preserves_ranking():
    corpus = [doc("a", x=1, y=2), doc("b", y=1, z=2), doc("c", z=3)]
    model = fit_tfidf(corpus)
    query = Counter(x=1, y=1)
    scaled = Counter(x=7, y=7)
    assert all_cosines(model, query) == pytest.approx(all_cosines(model, scaled), abs=1e-12)
    assert top_k_categories(all_cosines(model, query), 3) == top_k_categories(
        all_cosines(model, scaled), 3
    )


REG3 = CategoryRegistry.from_roots({"Coffee": "kg:c", "Footwear": "kg:f", "Bakeries": "kg:b"})


def _traj(hops):
    return Trajectory(
        device_id="u1",
        visit_index=0,
        visit_start=ts("2013-03-01T10:00:00Z"),
        visit_end=ts("2013-03-01T12:00:00Z"),
        hops=tuple(hops),
    )


def test_dwell_fraction_single_label():
    fractions = dwell_fractions(_traj([("A", 600.0)]), {"A": frozenset({"Coffee"})}, REG3)
    assert fractions[REG3.position("Coffee")] == 1.0
    assert fractions.sum() == 1.0


def test_dwell_fraction_multi_label_overlaps():
    fractions = dwell_fractions(
        _traj([("A", 600.0)]), {"A": frozenset({"Coffee", "Bakeries"})}, REG3
    )
    assert fractions[REG3.position("Coffee")] == 1.0
    assert fractions[REG3.position("Bakeries")] == 1.0


def test_dwell_fraction_split():
    fractions = dwell_fractions(
        _traj([("A", 600.0), ("B", 600.0)]),
        {"A": frozenset({"Coffee"}), "B": frozenset({"Footwear"})},
        REG3,
    )
    assert fractions[REG3.position("Coffee")] == 0.5
    assert fractions[REG3.position("Footwear")] == 0.5


def test_contextual_similarity_product_and_gates():
    cos = np.array([0.8, 0.8, 0.0])
    t = np.array([0.5, 0.0, 0.7])
    cs = contextual_similarity(cos, t)
    assert cs[0] == pytest.approx(0.4)
    assert cs[1] == 0.0  # zero dwell gates the product
    assert cs[2] == 0.0  # zero cosine gates the product
    assert np.all(contextual_similarity(np.zeros(3), np.zeros(3)) == 0.0)


def test_contextual_similarity_bounded_by_fraction():
    rng = np.random.default_rng(3)
    cos = rng.uniform(0, 1, 18)
    t = rng.uniform(0, 1, 18)
    cs = contextual_similarity(cos, t)
    assert np.all(cs <= np.minimum(1.0, t) + 1e-12)


def test_semantic_weight_dot_product():
    cs = np.array([0.3, 0.2, 0.5])
    assert semantic_weight(frozenset(), cs, REG3) == 0.0
    assert semantic_weight(frozenset(REG3.names()), cs, REG3) == pytest.approx(1.0)
    assert semantic_weight(frozenset({"Footwear"}), cs, REG3) == pytest.approx(
        cs[REG3.position("Footwear")]
    )


def test_semantic_weights_cover_all_aps():
    cs = np.array([0.3, 0.2, 0.5])
    weights = semantic_weights(
        {"A": frozenset({"Coffee"}), "B": frozenset()}, cs, REG3
    )
    assert weights["A"] > 0.0 and weights["B"] == 0.0


def test_top_k_ties_and_clamp():
    assert top_k_categories([0.5, 0.5, 0.5], 2) == [0, 1]
    assert top_k_categories([0.1, 0.9, 0.5], 1) == [1]
    full = top_k_categories([0.0] * 18, 18)
    assert full == list(range(18))
    assert top_k_categories([0.1, 0.2], 99) == [1, 0]


def test_ugg_shoes_argmax_is_footwear(bundled, bundled_model):
    registry, _, store = bundled
    ctx = query_context(store, ["Ugg Shoes"], hops=2)
    cosines = all_cosines(bundled_model, ctx.document)
    best = top_k_categories(cosines, 1)[0]
    assert registry.names()[best] == "Footwear"
    assert top_k_categories(cosines, 1) == [best]


def test_face_shop_mascara_argmax_is_cosmetics(bundled, bundled_model):
    registry, _, store = bundled
    ctx = query_context(store, ["the face shop clear mascara reviews"], hops=2)
    cosines = all_cosines(bundled_model, ctx.document)
    assert registry.names()[top_k_categories(cosines, 1)[0]] == "Cosmetics"


def test_profile_csv_style_fields(bundled, bundled_model):
    registry, _, store = bundled
    traj = Trajectory(
        device_id="u1",
        visit_index=0,
        visit_start=ts("2013-03-01T10:00:00Z"),
        visit_end=ts("2013-03-01T11:00:00Z"),
        hops=(("A", 900.0),),
        queries=(QueryRecord("u1", "A", ts("2013-03-01T10:05:00Z"), "ugg shoes"),),
    )
    ctx = query_context(store, ["ugg shoes"], hops=2)
    profile = similarity.profile_trajectory(
        bundled_model, traj, ctx.document, {"A": frozenset({"Footwear"})}, registry
    )
    pos = registry.position("Footwear")
    assert profile.cs[pos] == pytest.approx(profile.cosines[pos] * profile.fractions[pos])
    assert profile.cs.argmax() == pos


def test_cosine_vectors_symmetry():
    u = {"a": 1.0, "b": 2.0}
    v = {"b": 3.0, "c": 1.0}
    assert cosine_vectors(u, v) == pytest.approx(cosine_vectors(v, u), abs=1e-15)
