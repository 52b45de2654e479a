"""Prediction metrics and the popularity-sensitivity analysis.

Pure functions over ranked prediction lists; report rendering lives with
the CLI. Accuracy@k divides by k even when fewer than k locations remain
to be found, so values near the ceiling read conservatively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy import stats


def accuracy_at_k(predicted: Sequence[str], actual: Iterable[str], k: int) -> float:
    """Fraction of the first k predictions that are in the actual set."""
    if k <= 0:
        raise ValueError("k must be > 0")
    actual_set = set(actual)
    hits = sum(1 for ap in predicted[:k] if ap in actual_set)
    return hits / k


def mrr(ranked_lists: Sequence[Sequence[str]], actual_sets: Sequence[Iterable[str]]) -> float:
    """Mean reciprocal rank of the first correct prediction per trajectory.

    Trajectories whose list never hits contribute 0.
    """
    if not ranked_lists:
        raise ValueError("no prediction lists")
    if len(ranked_lists) != len(actual_sets):
        raise ValueError("prediction/actual length mismatch")
    total = 0.0
    for ranked, actual in zip(ranked_lists, actual_sets):
        actual_set = set(actual)
        for rank, ap in enumerate(ranked, start=1):
            if ap in actual_set:
                total += 1.0 / rank
                break
    return total / len(ranked_lists)


def top_n_popular(popularity: Mapping[str, int], n: int) -> set[str]:
    """The n most-visited APs, ties by ap_id for determinism."""
    ranked = sorted(popularity, key=lambda ap: (-popularity[ap], ap))
    return set(ranked[:n])


def sensitivity_remove_top_n(
    rankings: Sequence[Sequence[str]],
    actual_sets: Sequence[Iterable[str]],
    popularity: Mapping[str, int],
    n_values: Sequence[int],
    k: int = 10,
) -> list[tuple[int, float]]:
    """Accuracy@k after dropping the n most popular APs, for each n.

    Removal applies to both the candidate rankings and the actual sets;
    trajectories left with an empty actual set no longer count. Scores for
    the surviving candidates are unchanged by removal, so filtering the
    ranking equals re-predicting over the reduced pool.
    """
    if not rankings:
        raise ValueError("no prediction lists")
    total_aps = len(popularity)
    out = []
    for n in n_values:
        if n >= total_aps:
            raise ValueError(f"cannot remove {n} of {total_aps} APs")
        removed = top_n_popular(popularity, n)
        accs = []
        for ranked, actual in zip(rankings, actual_sets):
            remaining_actual = set(actual) - removed
            if not remaining_actual:
                continue
            remaining_ranked = [ap for ap in ranked if ap not in removed]
            accs.append(accuracy_at_k(remaining_ranked, remaining_actual, k))
        out.append((n, float(np.mean(accs)) if accs else 0.0))
    return out


@dataclass(frozen=True)
class PearsonResult:
    r: float
    p: float


def pearson_correlation(xs: Sequence[float], ys: Sequence[float]) -> PearsonResult:
    """Pearson r with a two-tailed p-value from the t transform."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape:
        raise ValueError("input length mismatch")
    n = len(x)
    if n < 3:
        raise ValueError("need at least 3 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("zero variance input")
    r = float(dx @ dy) / (sx * sy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return PearsonResult(r=r, p=0.0)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    p = float(2.0 * stats.t.sf(abs(t), n - 2))
    return PearsonResult(r=r, p=p)
