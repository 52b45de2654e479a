"""TF-IDF similarity between category documents and visit query context.

The similarity space is defined by the category corpus: tf is the raw term
count inside a document, idf(t) = ln(N/df_t) over the N corpus documents,
and query-side documents are vectorized with the corpus idf (unseen terms
contribute nothing). Cosine handles length normalization.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .kgraph import CategoryDocument
from .model import CategoryRegistry, Trajectory

SparseVec = dict[str, float]


@dataclass(frozen=True)
class TfIdfModel:
    doc_names: tuple[str, ...]
    idf: dict[str, float]
    doc_vectors: tuple[SparseVec, ...]

    def vectorize(self, terms: Mapping[str, int]) -> SparseVec:
        """Weight a term multiset with the corpus idf; unknown terms drop out."""
        vec = {}
        for term, count in terms.items():
            w = self.idf.get(term)
            if w is not None and w > 0 and count > 0:
                vec[term] = count * w
        return vec


def fit_tfidf(corpus: Sequence[CategoryDocument]) -> TfIdfModel:
    if not corpus:
        raise ValueError("cannot fit TF-IDF on an empty corpus")
    n_docs = len(corpus)
    df: Counter = Counter()
    for doc in corpus:
        df.update(set(doc.terms))
    idf = {term: math.log(n_docs / count) for term, count in df.items()}
    vectors = []
    for doc in corpus:
        vectors.append(
            {t: c * idf[t] for t, c in doc.terms.items() if idf[t] > 0 and c > 0}
        )
    return TfIdfModel(
        doc_names=tuple(d.category for d in corpus),
        idf=idf,
        doc_vectors=tuple(vectors),
    )


def cosine_vectors(u: SparseVec, v: SparseVec) -> float:
    """Cosine of two sparse vectors; 0.0 when either has no mass."""
    nu = math.sqrt(sum(w * w for w in u.values()))
    nv = math.sqrt(sum(w * w for w in v.values()))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    if len(u) > len(v):
        u, v = v, u
    dot = sum(w * v[t] for t, w in u.items() if t in v)
    return dot / (nu * nv)


def cosine(model: TfIdfModel, doc_index: int, query_terms: Mapping[str, int]) -> float:
    """Cosine between corpus document `doc_index` and a query term multiset."""
    return cosine_vectors(model.doc_vectors[doc_index], model.vectorize(query_terms))


def all_cosines(model: TfIdfModel, query_terms: Mapping[str, int]) -> np.ndarray:
    qv = model.vectorize(query_terms)
    return np.array([cosine_vectors(dv, qv) for dv in model.doc_vectors])


def dwell_fractions(
    trajectory: Trajectory,
    ap_labels: Mapping[str, frozenset[str]],
    registry: CategoryRegistry,
) -> np.ndarray:
    """Share of total visit dwell spent at APs carrying each category.

    APs carry multiple labels, so the fractions may sum past 1.
    """
    fractions = np.zeros(len(registry))
    total = trajectory.total_dwell
    if total <= 0:
        return fractions
    for ap_id, dwell in trajectory.hops:
        for name in ap_labels.get(ap_id, ()):
            fractions[registry.position(name)] += dwell
    return fractions / total


def contextual_similarity(cosines: np.ndarray, fractions: np.ndarray) -> np.ndarray:
    """Dwell-boosted similarity: t_i * cos_i where both are strictly positive."""
    cosines = np.asarray(cosines, dtype=float)
    fractions = np.asarray(fractions, dtype=float)
    if cosines.shape != fractions.shape:
        raise ValueError("cosines and dwell fractions must align")
    return np.where((cosines > 0) & (fractions > 0), cosines * fractions, 0.0)


@dataclass(frozen=True)
class SimilarityProfile:
    """Per-visit category similarities: cosine, dwell fraction, and CS."""

    categories: tuple[str, ...]
    cosines: np.ndarray
    fractions: np.ndarray
    cs: np.ndarray


def profile_trajectory(
    model: TfIdfModel,
    trajectory: Trajectory,
    query_terms: Mapping[str, int],
    ap_labels: Mapping[str, frozenset[str]],
    registry: CategoryRegistry,
) -> SimilarityProfile:
    cosines = all_cosines(model, query_terms)
    fractions = dwell_fractions(trajectory, ap_labels, registry)
    return SimilarityProfile(
        categories=tuple(registry.names()),
        cosines=cosines,
        fractions=fractions,
        cs=contextual_similarity(cosines, fractions),
    )


def semantic_weight(
    labels: frozenset[str], cs: np.ndarray, registry: CategoryRegistry
) -> float:
    """Dot product of an AP's label indicator with the CS vector."""
    return float(sum(cs[registry.position(name)] for name in labels))


def semantic_weights(
    ap_labels: Mapping[str, frozenset[str]], cs: np.ndarray, registry: CategoryRegistry
) -> dict[str, float]:
    return {
        ap_id: semantic_weight(labels, cs, registry)
        for ap_id, labels in ap_labels.items()
    }


def top_k_categories(cosines: Sequence[float], k: int) -> list[int]:
    """Category positions ranked by cosine descending, ties by position."""
    if k < 0:
        raise ValueError("k must be >= 0")
    k = min(k, len(cosines))
    order = sorted(range(len(cosines)), key=lambda i: (-cosines[i], i))
    return order[:k]
