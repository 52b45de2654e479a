"""Next-location prediction over binary visited-AP vectors.

Item-based scores average the Jaccard similarity between the candidate AP's
column and each visited AP's column; user-based scores aggregate the k most
similar training rows. Semantic weighting multiplies a candidate's score by
the AP's context weight, so APs the visitor's queries point at rise in the
ranking. Cold-start APs (all-zero training columns) keep score 0 and rank
last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import Trajectory


@dataclass(frozen=True)
class VisitMatrix:
    """Rows are trajectories, columns are APs, entries are visited flags."""

    ap_ids: tuple[str, ...]
    row_ids: tuple[str, ...]
    rows: np.ndarray  # (m, n) of {0,1}

    def __post_init__(self):
        if self.rows.shape != (len(self.row_ids), len(self.ap_ids)):
            raise ValueError("matrix shape does not match row/column ids")
        if self.rows.size and not self.rows.any(axis=1).all():
            raise ValueError("every trajectory row needs at least one visited AP")

    def column_index(self) -> dict[str, int]:
        return {ap: i for i, ap in enumerate(self.ap_ids)}

    def popularity(self) -> dict[str, int]:
        """Per-AP visit counts over the training rows."""
        counts = self.rows.sum(axis=0)
        return {ap: int(counts[i]) for i, ap in enumerate(self.ap_ids)}


def build_visit_matrix(
    visits: Sequence[tuple[str, Sequence[str]]], ap_universe: Sequence[str]
) -> VisitMatrix:
    """Assemble the matrix from (row_id, visited ap ids) pairs.

    Columns follow the given AP universe order (floorplan APs, sorted by id
    upstream); AP ids outside the universe are ignored.
    """
    ap_ids = tuple(ap_universe)
    index = {ap: i for i, ap in enumerate(ap_ids)}
    rows = np.zeros((len(visits), len(ap_ids)), dtype=np.int8)
    row_ids = []
    for r, (row_id, aps) in enumerate(visits):
        row_ids.append(row_id)
        for ap in aps:
            col = index.get(ap)
            if col is not None:
                rows[r, col] = 1
    return VisitMatrix(ap_ids=ap_ids, row_ids=tuple(row_ids), rows=rows)


def jaccard(u: np.ndarray, v: np.ndarray) -> float:
    """|intersection| / |union| of two binary vectors; both-empty gives 0."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError("vector length mismatch")
    inter = int(np.sum((u > 0) & (v > 0)))
    union = int(np.sum((u > 0) | (v > 0)))
    return inter / union if union else 0.0


def _column_similarities(matrix: VisitMatrix) -> np.ndarray:
    """Pairwise Jaccard between AP columns; all-zero columns score 0."""
    cols = matrix.rows.astype(np.float64)
    inter = cols.T @ cols
    sizes = cols.sum(axis=0)
    union = sizes[:, None] + sizes[None, :] - inter
    with np.errstate(divide="ignore", invalid="ignore"):
        sim = np.where(union > 0, inter / np.where(union > 0, union, 1.0), 0.0)
    return sim


def item_item_scores(matrix: VisitMatrix, prefix_aps: Sequence[str]) -> dict[str, float]:
    """Average column similarity between each unvisited AP and the prefix."""
    index = matrix.column_index()
    visited = [index[ap] for ap in prefix_aps if ap in index]
    if not visited:
        raise ValueError("prefix shares no APs with the training matrix columns")
    sim = _column_similarities(matrix)
    mean_sim = sim[visited].mean(axis=0)
    prefix_set = set(prefix_aps)
    return {
        ap: float(mean_sim[i])
        for i, ap in enumerate(matrix.ap_ids)
        if ap not in prefix_set
    }


def user_user_scores(
    matrix: VisitMatrix, prefix_aps: Sequence[str], k_neighbors: int
) -> dict[str, float]:
    """Similarity-weighted neighbor vote, normalized by the similarity mass."""
    if k_neighbors < 1:
        raise ValueError("k_neighbors must be >= 1")
    index = matrix.column_index()
    target = np.zeros(len(matrix.ap_ids), dtype=np.int8)
    for ap in prefix_aps:
        col = index.get(ap)
        if col is not None:
            target[col] = 1
    rows = matrix.rows
    inter = rows @ target
    union = rows.sum(axis=1) + target.sum() - inter
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = np.where(union > 0, inter / np.where(union > 0, union, 1.0), 0.0)
    # Highest similarity first, ties by row position.
    order = np.lexsort((np.arange(len(sims)), -sims))
    neighbors = order[: min(k_neighbors, len(sims))]
    mass = float(sims[neighbors].sum())
    prefix_set = set(prefix_aps)
    if mass == 0.0:
        return {ap: 0.0 for ap in matrix.ap_ids if ap not in prefix_set}
    votes = sims[neighbors] @ rows[neighbors].astype(np.float64)
    return {
        ap: float(votes[i] / mass)
        for i, ap in enumerate(matrix.ap_ids)
        if ap not in prefix_set
    }


def weighted_scores(
    scores: Mapping[str, float], ss_per_ap: Mapping[str, float]
) -> dict[str, float]:
    """Multiply each CF score by the AP's semantic weight (missing weight = 0)."""
    return {ap: score * ss_per_ap.get(ap, 0.0) for ap, score in scores.items()}


def top_k(scores: Mapping[str, float], k: int) -> list[str]:
    """APs by descending score, ties by ap_id; at most k, at most all."""
    if k < 0:
        raise ValueError("k must be >= 0")
    ranked = sorted(scores, key=lambda ap: (-scores[ap], ap))
    return ranked[:k]


@dataclass(frozen=True)
class Partition:
    prefix: tuple[tuple[str, float], ...]
    suffix: tuple[tuple[str, float], ...]
    fallback: bool  # query AP missing from hops; nearest hop by time used

    @property
    def prefix_aps(self) -> tuple[str, ...]:
        return tuple(ap for ap, _ in self.prefix)

    @property
    def suffix_aps(self) -> tuple[str, ...]:
        return tuple(ap for ap, _ in self.suffix)


def partition_at_first_query(trajectory: Trajectory) -> Partition:
    """Split hops at the AP where the visit's first query was issued.

    The prefix includes that AP itself. When the query's AP never survived
    into the hops, the hop nearest in time (by the cumulative-dwell
    timeline) stands in and the result is flagged.
    """
    if not trajectory.queries:
        raise ValueError("trajectory has no queries to partition at")
    first = min(trajectory.queries, key=lambda q: (q.at, q.ap_id, q.text))
    hops = trajectory.hops
    cut = None
    for i, (ap, _) in enumerate(hops):
        if ap == first.ap_id:
            cut = i
            break
    fallback = cut is None
    if fallback:
        offset = (first.at - trajectory.visit_start).total_seconds()
        elapsed = 0.0
        best_gap = None
        for i, (_, dwell) in enumerate(hops):
            mid = elapsed + dwell / 2.0
            gap = abs(mid - offset)
            if best_gap is None or gap < best_gap:
                best_gap, cut = gap, i
            elapsed += dwell
    return Partition(prefix=hops[: cut + 1], suffix=hops[cut + 1 :], fallback=fallback)
