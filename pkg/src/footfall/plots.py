"""Figure rendering for the reporting commands.

Every report path writes its delimited table and, next to it, a PNG of the
same data. Rendering is headless (Agg) and deterministic for fixed inputs.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_METHOD_STYLE = {
    "i-i": {"color": "#555555", "marker": "o"},
    "i-i-w": {"color": "#c0392b", "marker": "s"},
    "u-u": {"color": "#2471a3", "marker": "^"},
}


def _style(method: str) -> dict:
    return _METHOD_STYLE.get(method, {"color": "#27ae60", "marker": "d"})


def plot_association_cdf(cdf: Sequence[tuple[float, float]], path) -> None:
    """Step plot of the association-duration CDF."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if cdf:
        bounds = [b / 60.0 for b, _ in cdf]
        fractions = [f for _, f in cdf]
        ax.step([0.0] + bounds, [0.0] + fractions, where="post", color="#2471a3")
        ax.axvline(10.0, color="#c0392b", linestyle="--", linewidth=1, label="10 min filter")
        ax.legend(loc="lower right")
    ax.set_xlabel("association duration (minutes)")
    ax.set_ylabel("cumulative fraction")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_sensitivity(
    curves: Mapping[str, Sequence[tuple[int, float]]], path, k: int = 10
) -> None:
    """Accuracy@k as a function of how many popular APs were removed."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for method in sorted(curves):
        points = curves[method]
        ax.plot(
            [n for n, _ in points],
            [acc for _, acc in points],
            label=method,
            linewidth=1.5,
            markersize=4,
            **_style(method),
        )
    ax.set_xlabel("removed top-n popular APs")
    ax.set_ylabel(f"accuracy@{k}")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_mrr_bars(mrr_by_method: Mapping[str, Mapping[int, float]], path) -> None:
    """Grouped bars: MRR per method for each prediction depth k."""
    methods = sorted(mrr_by_method)
    ks = sorted({k for values in mrr_by_method.values() for k in values})
    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.8 / max(1, len(methods))
    for i, method in enumerate(methods):
        xs = [j + i * width for j in range(len(ks))]
        ys = [mrr_by_method[method].get(k, 0.0) for k in ks]
        ax.bar(xs, ys, width=width, label=method, color=_style(method)["color"])
    ax.set_xticks([j + width * (len(methods) - 1) / 2 for j in range(len(ks))])
    ax.set_xticklabels([f"k={k}" for k in ks])
    ax.set_ylabel("mean reciprocal rank")
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_intent_metrics(reports: Mapping[str, Mapping[str, float]], path) -> None:
    """Weighted metrics per classifier/feature-set combination."""
    names = sorted(reports)
    metrics = ["accuracy", "precision", "recall", "f_score"]
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.8 / len(metrics)
    for i, metric in enumerate(metrics):
        xs = [j + i * width for j in range(len(names))]
        ys = [reports[name].get(metric, 0.0) for name in names]
        ax.bar(xs, ys, width=width, label=metric)
    ax.set_xticks([j + width * (len(metrics) - 1) / 2 for j in range(len(names))])
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend(ncol=2, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_category_cosines(categories: Sequence[str], cosines: Sequence[float], path) -> None:
    """Per-category cosine profile for one query context."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(categories)), cosines, color="#2471a3")
    ax.set_xticks(range(len(categories)))
    ax.set_xticklabels(categories, rotation=60, ha="right", fontsize=8)
    ax.set_ylabel("cosine similarity")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
