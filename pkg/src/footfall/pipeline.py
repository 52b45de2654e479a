"""End-to-end wiring between ingestion, the similarity space, and the
classifiers/predictors. The CLI is a thin shell over these helpers.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Sequence

from . import kgraph, locpred, similarity
from .features import FeatureVector, extract_features
from .kgraph import CategoryDocument, TripleStore
from .model import CategoryRegistry, IntentLabel, Trajectory, canonical_json


def bundled_path(name: str):
    """Path to a data file shipped inside the package."""
    return resources.files("footfall.data") / name


def load_term_doc(path) -> Counter:
    """Read a {"terms": [...]} document into a normalized term multiset."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    doc: Counter = Counter()
    for term in raw["terms"]:
        norm = kgraph.normalize_term(term)
        if norm:
            doc[norm] += 1
    return doc


def save_corpus(path, corpus: Sequence[CategoryDocument]) -> None:
    payload = [
        {
            "category": doc.category,
            "terms": [
                {"term": t, "count": c} for t, c in sorted(doc.terms.items())
            ],
        }
        for doc in corpus
    ]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(payload))
        fh.write("\n")


def load_corpus(path) -> list[CategoryDocument]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    return [
        CategoryDocument(
            category=entry["category"],
            terms=Counter({t["term"]: t["count"] for t in entry["terms"]}),
        )
        for entry in payload
    ]


@dataclass
class ContextEngine:
    """Holds the fitted similarity space for a deployment."""

    store: TripleStore
    registry: CategoryRegistry
    ap_labels: Mapping[str, frozenset[str]]
    model: similarity.TfIdfModel
    query_hops: int = 2

    @classmethod
    def build(
        cls,
        store: TripleStore,
        registry: CategoryRegistry,
        ap_labels: Mapping[str, frozenset[str]],
        depth: int = 5,
        query_hops: int = 2,
        corpus: Sequence[CategoryDocument] | None = None,
    ) -> "ContextEngine":
        if corpus is None:
            corpus = kgraph.build_category_corpus(store, registry, depth)
        return cls(
            store=store,
            registry=registry,
            ap_labels=ap_labels,
            model=similarity.fit_tfidf(corpus),
            query_hops=query_hops,
        )

    def query_terms(self, texts: Sequence[str]) -> Counter:
        return kgraph.query_context(self.store, texts, hops=self.query_hops).document

    def profile(self, trajectory: Trajectory) -> similarity.SimilarityProfile:
        terms = self.query_terms([q.text for q in trajectory.queries])
        return similarity.profile_trajectory(
            self.model, trajectory, terms, self.ap_labels, self.registry
        )

    def features(
        self,
        trajectory: Trajectory,
        store_doc: Counter | None = None,
        crowd_doc: Counter | None = None,
        label: IntentLabel | None = None,
    ) -> FeatureVector:
        terms = self.query_terms([q.text for q in trajectory.queries])
        profile = similarity.profile_trajectory(
            self.model, trajectory, terms, self.ap_labels, self.registry
        )
        return extract_features(
            trajectory, profile, terms, self.model, store_doc, crowd_doc, label
        )

    def semantic_weights_for(self, texts: Sequence[str]) -> dict[str, float]:
        """Per-AP weights from query context alone (no dwell available yet)."""
        terms = self.query_terms(texts)
        cosines = similarity.all_cosines(self.model, terms)
        return similarity.semantic_weights(self.ap_labels, cosines, self.registry)


# ---------------------------------------------------------------------------
# Prediction protocol: partition test visits at their first query.


@dataclass
class PredictionCase:
    trajectory: Trajectory
    partition: locpred.Partition

    @property
    def prefix_queries(self) -> list[str]:
        first = min(
            self.trajectory.queries, key=lambda q: (q.at, q.ap_id, q.text)
        )
        return [
            q.text for q in self.trajectory.queries if q.at <= first.at
        ]


@dataclass
class PredictionSetup:
    matrix: locpred.VisitMatrix
    cases: list[PredictionCase]
    fallback_count: int


def prepare_prediction(
    trajectories: Sequence[Trajectory],
    ap_universe: Sequence[str],
    max_test: int | None = None,
) -> PredictionSetup:
    """Split eligible visits at the first query; the rest train in full.

    The training matrix holds full rows for non-test visits plus the
    observed prefixes of every test visit.
    """
    ordered = sorted(trajectories, key=lambda t: t.trajectory_id)
    cases: list[PredictionCase] = []
    fallback = 0
    test_ids: set[str] = set()
    for traj in ordered:
        if max_test is not None and len(cases) >= max_test:
            break
        if not traj.queries or len(traj.hops) < 2:
            continue
        part = locpred.partition_at_first_query(traj)
        if not part.suffix:
            continue
        fallback += int(part.fallback)
        cases.append(PredictionCase(trajectory=traj, partition=part))
        test_ids.add(traj.trajectory_id)

    rows: list[tuple[str, Sequence[str]]] = []
    for traj in ordered:
        if traj.trajectory_id in test_ids:
            continue
        rows.append((traj.trajectory_id, traj.ap_ids))
    for case in cases:
        rows.append((case.trajectory.trajectory_id, case.partition.prefix_aps))
    return PredictionSetup(
        matrix=locpred.build_visit_matrix(rows, ap_universe),
        cases=cases,
        fallback_count=fallback,
    )


@dataclass
class PredictionRow:
    trajectory_id: str
    method: str
    k: int
    predicted: list[str]
    actual: list[str]
    ranking: list[str]  # full candidate ranking, used by sensitivity sweeps

    def to_json(self) -> str:
        return canonical_json(
            {
                "trajectory_id": self.trajectory_id,
                "method": self.method,
                "k": self.k,
                "predicted": self.predicted,
                "actual": self.actual,
            }
        )


def run_prediction(
    setup: PredictionSetup,
    method: str,
    k: int,
    engine: ContextEngine | None = None,
    k_neighbors: int = 10,
) -> list[PredictionRow]:
    """Score every test case with one method ('i-i', 'i-i-w', or 'u-u')."""
    if method not in ("i-i", "i-i-w", "u-u"):
        raise ValueError(f"unknown prediction method {method!r}")
    if method == "i-i-w" and engine is None:
        raise ValueError("weighted prediction needs a context engine")
    rows = []
    for case in setup.cases:
        prefix = list(case.partition.prefix_aps)
        if method == "u-u":
            scores = locpred.user_user_scores(setup.matrix, prefix, k_neighbors)
        else:
            scores = locpred.item_item_scores(setup.matrix, prefix)
            if method == "i-i-w":
                weights = engine.semantic_weights_for(case.prefix_queries)
                scores = locpred.weighted_scores(scores, weights)
        ranking = locpred.top_k(scores, len(scores))
        rows.append(
            PredictionRow(
                trajectory_id=case.trajectory.trajectory_id,
                method=method,
                k=k,
                predicted=ranking[:k],
                actual=list(case.partition.suffix_aps),
                ranking=ranking,
            )
        )
    return rows


def load_labels_csv(path) -> dict[str, IntentLabel]:
    labels = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "trajectory_id,label":
            raise ValueError(f"{path}: unexpected labels header {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            tid, value = line.split(",", 1)
            labels[tid] = IntentLabel(value)
    return labels


def self_consistency_rate(
    engine: ContextEngine,
    trajectories: Sequence[Trajectory],
    labels: Mapping[str, IntentLabel],
    targets: Mapping[str, str | None],
) -> tuple[float, int]:
    """Share of intentful visits whose top-CS category is the ground truth.

    Returns (rate, n_checked); visits without a target are skipped.
    """
    hits = 0
    checked = 0
    names = engine.registry.names()
    for traj in trajectories:
        tid = traj.trajectory_id
        if labels.get(tid) is not IntentLabel.INTENTFUL:
            continue
        target = targets.get(tid)
        if target is None:
            continue
        profile = engine.profile(traj)
        checked += 1
        best = similarity.top_k_categories(profile.cs, 1)
        if best and names[best[0]] == target and profile.cs[best[0]] > 0:
            hits += 1
    return (hits / checked if checked else 0.0), checked
