"""Visit-intent classifiers: decision table, naive Bayes, and their hybrid.

Continuous features are equal-frequency discretized (B bins, default 5).
Class encoding is 0 = intentless, 1 = intentful; every tie breaks towards
intentless, the majority class. Hybrid posteriors combine the decision
table's cell distribution with the naive Bayes likelihood product,
normalized so they sum to 1; all products run in log space.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .model import IntentLabel

log = logging.getLogger(__name__)

CLASS_LABELS = (IntentLabel.INTENTLESS, IntentLabel.INTENTFUL)  # index 0, 1


def _to_label(idx: int) -> IntentLabel:
    return CLASS_LABELS[idx]


class Discretizer:
    """Per-feature equal-frequency binning fitted on training data."""

    def __init__(self, edges: Sequence[np.ndarray]):
        self.edges = [np.asarray(e, dtype=float) for e in edges]
        for e in self.edges:
            if len(e) > 1 and not np.all(np.diff(e) > 0):
                raise ValueError("bin edges must be strictly increasing")

    @classmethod
    def fit(cls, x: np.ndarray, bins: int = 5) -> "Discretizer":
        if bins < 2:
            raise ValueError("need at least 2 bins")
        n = x.shape[0]
        if n == 0:
            raise ValueError("cannot fit discretizer on empty data")
        edges = []
        for j in range(x.shape[1]):
            col = np.sort(x[:, j])
            # Cut after element ceil(n*k/bins) so bin counts differ by <= 1
            # on distinct values; duplicate cut values collapse. A cut at the
            # column maximum can never split training rows, only manufacture
            # a phantom bin that skews smoothing, so it is dropped.
            cuts = np.unique([col[math.ceil(n * k / bins) - 1] for k in range(1, bins)])
            edges.append(cuts[cuts < col[-1]])
        return cls(edges)

    @property
    def n_bins(self) -> np.ndarray:
        return np.array([len(e) + 1 for e in self.edges], dtype=np.int64)

    def transform(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != len(self.edges):
            raise ValueError("feature count mismatch")
        out = np.empty(x.shape, dtype=np.int64)
        for j, e in enumerate(self.edges):
            out[:, j] = np.searchsorted(e, x[:, j], side="left")
        return out

    def to_dict(self) -> dict:
        return {"edges": [e.tolist() for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict) -> "Discretizer":
        return cls([np.array(e, dtype=float) for e in d["edges"]])


# ---------------------------------------------------------------------------
# Core fitted parts shared by the three classifiers.


def _class_counts(y: np.ndarray) -> np.ndarray:
    return np.array([(y == 0).sum(), (y == 1).sum()], dtype=float)


def _fit_body(xb: np.ndarray, y: np.ndarray, schema: tuple[int, ...]) -> dict:
    body: dict[tuple[int, ...], np.ndarray] = {}
    for row, label in zip(xb[:, schema], y):
        key = tuple(int(v) for v in row)
        cell = body.get(key)
        if cell is None:
            cell = np.zeros(2)
            body[key] = cell
        cell[label] += 1
    return body


def _fit_conditionals(
    xb: np.ndarray, y: np.ndarray, feats: tuple[int, ...], n_bins: np.ndarray
) -> list[np.ndarray]:
    """Laplace-smoothed p(bin | class) tables, one per selected feature."""
    counts = _class_counts(y)
    cond = []
    for j in feats:
        table = np.zeros((int(n_bins[j]), 2))
        np.add.at(table, (xb[:, j], y), 1.0)
        cond.append((table + 1.0) / (counts[None, :] + n_bins[j]))
    return cond


@dataclass
class DecisionTableModel:
    """Schema + body decision table; unmatched rows fall back to the majority."""

    discretizer: Discretizer
    feature_names: tuple[str, ...]
    schema: tuple[int, ...]
    body: dict
    class_counts: np.ndarray

    @property
    def default_label(self) -> IntentLabel:
        return _to_label(int(self.class_counts[1] > self.class_counts[0]))

    def proba_binned(self, xb: np.ndarray) -> np.ndarray:
        priors = self.class_counts / self.class_counts.sum()
        out = np.empty((xb.shape[0], 2))
        sub = xb[:, self.schema]
        for i in range(xb.shape[0]):
            cell = self.body.get(tuple(int(v) for v in sub[i]))
            if cell is not None and cell.sum() > 0:
                out[i] = cell / cell.sum()
            else:
                out[i] = priors
        return out

    def predict_proba_batch(self, x: np.ndarray) -> np.ndarray:
        return self.proba_binned(self.discretizer.transform(x))

    def predict_batch(self, x: np.ndarray) -> np.ndarray:
        p = self.predict_proba_batch(x)
        return (p[:, 1] > p[:, 0]).astype(np.int64)


@dataclass
class NaiveBayesModel:
    """Multinomial NB over discretized features with Laplace alpha=1."""

    discretizer: Discretizer
    feature_names: tuple[str, ...]
    feature_idx: tuple[int, ...]
    priors: np.ndarray
    conditionals: list[np.ndarray]

    def log_likelihood_binned(self, xb: np.ndarray) -> np.ndarray:
        """Sum of log p(bin | class) over this model's features, per row."""
        out = np.zeros((xb.shape[0], 2))
        for j, table in zip(self.feature_idx, self.conditionals):
            out += np.log(table[xb[:, j]])
        return out

    def proba_binned(self, xb: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            logu = np.log(self.priors)[None, :] + self.log_likelihood_binned(xb)
        return _normalize_log(logu)

    def predict_proba_batch(self, x: np.ndarray) -> np.ndarray:
        return self.proba_binned(self.discretizer.transform(x))

    def predict_batch(self, x: np.ndarray) -> np.ndarray:
        p = self.predict_proba_batch(x)
        return (p[:, 1] > p[:, 0]).astype(np.int64)


@dataclass
class DtnbModel:
    """Hybrid over two disjoint feature subsets, combined per the product rule."""

    discretizer: Discretizer
    feature_names: tuple[str, ...]
    dt: DecisionTableModel
    nb: NaiveBayesModel

    def proba_binned(self, xb: np.ndarray) -> np.ndarray:
        # P(l|f) = a * P_dt(l|f_dt) * P_nb(l|f_nb) / P(l); the nb posterior
        # over prior collapses to the bare likelihood product.
        with np.errstate(divide="ignore"):
            logu = np.log(self.dt.proba_binned(xb)) + self.nb.log_likelihood_binned(xb)
        degenerate = np.all(np.isneginf(logu), axis=1)
        if degenerate.any():
            priors = self.dt.class_counts / self.dt.class_counts.sum()
            logu[degenerate] = np.log(priors)[None, :]
        return _normalize_log(logu)

    def predict_proba_batch(self, x: np.ndarray) -> np.ndarray:
        return self.proba_binned(self.discretizer.transform(x))

    def predict_batch(self, x: np.ndarray) -> np.ndarray:
        p = self.predict_proba_batch(x)
        return (p[:, 1] > p[:, 0]).astype(np.int64)


def _normalize_log(logu: np.ndarray) -> np.ndarray:
    m = np.max(logu, axis=1, keepdims=True)
    m = np.where(np.isneginf(m), 0.0, m)
    u = np.exp(logu - m)
    return u / u.sum(axis=1, keepdims=True)


def predict_dtnb(model, values: np.ndarray) -> tuple[IntentLabel, dict]:
    """Classify one feature vector, returning the label and both posteriors."""
    proba = model.predict_proba_batch(np.atleast_2d(values))[0]
    label = _to_label(int(proba[1] > proba[0]))
    return label, {CLASS_LABELS[i].value: float(proba[i]) for i in range(2)}


# ---------------------------------------------------------------------------
# Cross-validated accuracy used by forward selection.


def _loo_predictions(
    xb: np.ndarray,
    y: np.ndarray,
    dt_feats: tuple[int, ...],
    nb_feats: tuple[int, ...],
    n_bins: np.ndarray,
) -> np.ndarray:
    """Leave-one-out predictions for a feature split, fully vectorized.

    Per held-out row all counts (cell, conditional, prior) drop that row's
    own contribution, which is exactly a refit on the remaining n-1 rows.
    """
    n = len(y)
    rows = np.arange(n)
    counts = _class_counts(y)

    loo_priors = np.repeat(counts[None, :], n, axis=0)
    loo_priors[rows, y] -= 1.0
    prior_dist = loo_priors / (n - 1)

    if dt_feats:
        _, grp = np.unique(xb[:, dt_feats], axis=0, return_inverse=True)
    else:
        grp = np.zeros(n, dtype=np.int64)
    g_counts = np.zeros((int(grp.max()) + 1, 2))
    np.add.at(g_counts, (grp, y), 1.0)
    cell = g_counts[grp].copy()
    cell[rows, y] -= 1.0
    cell_tot = cell.sum(axis=1)

    p_dt = np.where(cell_tot[:, None] > 0, cell / np.maximum(cell_tot, 1.0)[:, None], prior_dist)
    with np.errstate(divide="ignore"):
        logu = np.log(p_dt)
        for j in nb_feats:
            table = np.zeros((int(n_bins[j]), 2))
            np.add.at(table, (xb[:, j], y), 1.0)
            own = table[xb[:, j]].copy()
            own[rows, y] -= 1.0
            logu += np.log(own + 1.0) - np.log(loo_priors + n_bins[j])

    pred = (logu[:, 1] > logu[:, 0]).astype(np.int64)
    dead = np.all(np.isneginf(logu), axis=1)
    if dead.any():
        pred[dead] = (loo_priors[dead, 1] > loo_priors[dead, 0]).astype(np.int64)
    return pred


def _fold_predictions(
    xb: np.ndarray,
    y: np.ndarray,
    dt_feats: tuple[int, ...],
    nb_feats: tuple[int, ...],
    n_bins: np.ndarray,
    folds: list[np.ndarray],
) -> np.ndarray:
    pred = np.empty(len(y), dtype=np.int64)
    xb_dt = xb[:, dt_feats]
    for test_idx in folds:
        mask = np.ones(len(y), dtype=bool)
        mask[test_idx] = False
        xb_tr, y_tr = xb[mask], y[mask]
        counts = _class_counts(y_tr)
        priors = counts / counts.sum()
        body = _fit_body(xb_tr, y_tr, dt_feats)
        cond = _fit_conditionals(xb_tr, y_tr, nb_feats, n_bins)
        with np.errstate(divide="ignore"):
            logu = np.empty((len(test_idx), 2))
            for i, r in enumerate(test_idx):
                cell = body.get(tuple(int(v) for v in xb_dt[r]))
                dist = cell / cell.sum() if cell is not None and cell.sum() > 0 else priors
                logu[i] = np.log(dist)
            for j, table in zip(nb_feats, cond):
                logu += np.log(table[xb[test_idx, j]])
        p = (logu[:, 1] > logu[:, 0]).astype(np.int64)
        dead = np.all(np.isneginf(logu), axis=1)
        if dead.any():
            p[dead] = int(counts[1] > counts[0])
        pred[test_idx] = p
    return pred


def kfold_indices(y: np.ndarray, k: int) -> list[np.ndarray]:
    """Deterministic stratified folds: class-sorted deal, no RNG."""
    n = len(y)
    if k < 2:
        raise ValueError("fold count must be >= 2")
    if k > n:
        raise ValueError(f"fold count {k} exceeds data size {n}")
    order = np.lexsort((np.arange(n), y))
    return [order[i::k] for i in range(k)]


def parse_cv_scheme(scheme: str, y: np.ndarray) -> list[np.ndarray] | str:
    if scheme == "loo":
        if len(y) < 2:
            raise ValueError("LOO requires at least 2 rows")
        return "loo"
    if scheme.startswith("kfold:"):
        return kfold_indices(y, int(scheme.split(":", 1)[1]))
    raise ValueError(f"unknown cv scheme {scheme!r}; use 'loo' or 'kfold:N'")


def _cv_accuracy(xb, y, dt_feats, nb_feats, n_bins, cv) -> float:
    if cv == "loo":
        pred = _loo_predictions(xb, y, dt_feats, nb_feats, n_bins)
    else:
        pred = _fold_predictions(xb, y, dt_feats, nb_feats, n_bins, cv)
    return float((pred == y).mean())


# ---------------------------------------------------------------------------
# Training.


def _check_training(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape[0] == 0:
        raise ValueError("empty training set")
    if x.shape[0] != y.shape[0]:
        raise ValueError("feature/label row mismatch")
    if len(np.unique(y)) < 2:
        log.warning("single-class training data: model degenerates to that class")


def _names(feature_names, width) -> tuple[str, ...]:
    if feature_names is None:
        return tuple(f"F{i + 1}" for i in range(width))
    if len(feature_names) != width:
        raise ValueError("feature_names length mismatch")
    return tuple(feature_names)


def train_dt(
    x: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str] | None = None,
    bins: int = 5,
    cv: str = "loo",
) -> DecisionTableModel:
    """Fit a decision table, choosing the schema by greedy forward search.

    Each step adds the feature with the best cross-validated accuracy and
    the search stops when no candidate strictly improves it; ties go to
    the lowest feature index.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    _check_training(x, y)
    disc = Discretizer.fit(x, bins)
    xb = disc.transform(x)
    n_bins = disc.n_bins
    folds = parse_cv_scheme(cv, y)

    schema: list[int] = []
    best = _cv_accuracy(xb, y, (), (), n_bins, folds)
    while True:
        gain_feat = None
        for f in range(x.shape[1]):
            if f in schema:
                continue
            acc = _cv_accuracy(xb, y, tuple(schema + [f]), (), n_bins, folds)
            if acc > best:
                best, gain_feat = acc, f
        if gain_feat is None:
            break
        schema.append(gain_feat)

    return DecisionTableModel(
        discretizer=disc,
        feature_names=_names(feature_names, x.shape[1]),
        schema=tuple(schema),
        body=_fit_body(xb, y, tuple(schema)),
        class_counts=_class_counts(y),
    )


def train_nb(
    x: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str] | None = None,
    bins: int = 5,
) -> NaiveBayesModel:
    """Fit naive Bayes over all features with maximum-likelihood priors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    _check_training(x, y)
    disc = Discretizer.fit(x, bins)
    xb = disc.transform(x)
    feats = tuple(range(x.shape[1]))
    counts = _class_counts(y)
    return NaiveBayesModel(
        discretizer=disc,
        feature_names=_names(feature_names, x.shape[1]),
        feature_idx=feats,
        priors=counts / counts.sum(),
        conditionals=_fit_conditionals(xb, y, feats, disc.n_bins),
    )


def fit_dtnb_partition(
    x: np.ndarray,
    y: np.ndarray,
    dt_feats: Sequence[int],
    nb_feats: Sequence[int],
    feature_names: Sequence[str] | None = None,
    bins: int = 5,
) -> DtnbModel:
    """Assemble the hybrid for a fixed feature partition (no search)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    _check_training(x, y)
    dt_feats, nb_feats = tuple(dt_feats), tuple(nb_feats)
    if set(dt_feats) & set(nb_feats):
        raise ValueError("decision-table and naive-Bayes feature sets must be disjoint")
    disc = Discretizer.fit(x, bins)
    xb = disc.transform(x)
    names = _names(feature_names, x.shape[1])
    counts = _class_counts(y)
    dt = DecisionTableModel(
        discretizer=disc,
        feature_names=names,
        schema=dt_feats,
        body=_fit_body(xb, y, dt_feats),
        class_counts=counts,
    )
    nb = NaiveBayesModel(
        discretizer=disc,
        feature_names=names,
        feature_idx=nb_feats,
        priors=counts / counts.sum(),
        conditionals=_fit_conditionals(xb, y, nb_feats, disc.n_bins),
    )
    return DtnbModel(discretizer=disc, feature_names=names, dt=dt, nb=nb)


def train_dtnb(
    x: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str] | None = None,
    bins: int = 5,
    cv: str = "loo",
) -> DtnbModel:
    """Fit the hybrid: greedy search over moving features out of the table.

    Starts with every feature in the decision table; each step either moves
    one feature to the naive-Bayes side or discards it, keeping the single
    change with the best cross-validated accuracy, and stops when nothing
    strictly improves.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    _check_training(x, y)
    disc = Discretizer.fit(x, bins)
    xb = disc.transform(x)
    n_bins = disc.n_bins
    folds = parse_cv_scheme(cv, y)

    f_dt = list(range(x.shape[1]))
    f_nb: list[int] = []
    best = _cv_accuracy(xb, y, tuple(f_dt), tuple(f_nb), n_bins, folds)
    while True:
        change = None
        for f in list(f_dt):
            rest = tuple(g for g in f_dt if g != f)
            for action, nb_set in (("nb", tuple(f_nb) + (f,)), ("drop", tuple(f_nb))):
                acc = _cv_accuracy(xb, y, rest, nb_set, n_bins, folds)
                if acc > best:
                    best, change = acc, (f, action)
        if change is None:
            break
        f, action = change
        f_dt.remove(f)
        if action == "nb":
            f_nb.append(f)

    return fit_dtnb_partition(
        x, y, tuple(f_dt), tuple(sorted(f_nb)), feature_names=feature_names, bins=bins
    )


@dataclass
class MajorityModel:
    """Baseline predicting the training majority class everywhere."""

    label_idx: int

    def predict_batch(self, x: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(x).shape[0], self.label_idx, dtype=np.int64)

    def predict_proba_batch(self, x: np.ndarray) -> np.ndarray:
        p = np.zeros((np.atleast_2d(x).shape[0], 2))
        p[:, self.label_idx] = 1.0
        return p


Trainer = Callable[[np.ndarray, np.ndarray], object]


def make_trainer(kind: str, bins: int = 5, cv: str = "loo") -> Trainer:
    if kind == "dt":
        return lambda x, y: train_dt(x, y, bins=bins, cv=cv)
    if kind == "nb":
        return lambda x, y: train_nb(x, y, bins=bins)
    if kind == "dtnb":
        return lambda x, y: train_dtnb(x, y, bins=bins, cv=cv)
    if kind == "majority":
        return lambda x, y: MajorityModel(int((y == 1).sum() > (y == 0).sum()))
    raise ValueError(f"unknown classifier kind {kind!r}")


# ---------------------------------------------------------------------------
# Evaluation.


@dataclass
class EvalReport:
    accuracy: float
    per_class: dict
    weighted: dict

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "per_class": self.per_class,
            "weighted": self.weighted,
        }


def metrics_from_predictions(y_true: np.ndarray, y_pred: np.ndarray) -> EvalReport:
    n = len(y_true)
    per_class = {}
    weighted = {"precision": 0.0, "recall": 0.0, "f_score": 0.0}
    for idx, label in enumerate(CLASS_LABELS):
        tp = int(np.sum((y_pred == idx) & (y_true == idx)))
        fp = int(np.sum((y_pred == idx) & (y_true != idx)))
        fn = int(np.sum((y_pred != idx) & (y_true == idx)))
        support = tp + fn
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / support if support else 0.0
        f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label.value] = {
            "precision": precision,
            "recall": recall,
            "f_score": f_score,
            "support": support,
        }
        for key, value in (("precision", precision), ("recall", recall), ("f_score", f_score)):
            weighted[key] += support / n * value
    return EvalReport(
        accuracy=float((y_true == y_pred).mean()), per_class=per_class, weighted=weighted
    )


def evaluate_classifier(
    trainer: Trainer, x: np.ndarray, y: np.ndarray, scheme: str = "kfold:10"
) -> EvalReport:
    """Cross-validated evaluation: retrain per fold, score pooled predictions."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    n = len(y)
    if scheme == "loo":
        folds = [np.array([i]) for i in range(n)]
    elif scheme.startswith("kfold:"):
        folds = kfold_indices(y, int(scheme.split(":", 1)[1]))
    else:
        raise ValueError(f"unknown evaluation scheme {scheme!r}")
    pred = np.empty(n, dtype=np.int64)
    for test_idx in folds:
        mask = np.ones(n, dtype=bool)
        mask[test_idx] = False
        model = trainer(x[mask], y[mask])
        pred[test_idx] = model.predict_batch(x[test_idx])
    return metrics_from_predictions(y, pred)


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p_two_tailed: float


def paired_t_test(scores_a: Sequence[float], scores_b: Sequence[float]) -> TTestResult:
    """Two-tailed paired-samples t-test on matched score lists."""
    a = np.asarray(scores_a, dtype=float)
    b = np.asarray(scores_b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("score lists must have equal length")
    n = len(a)
    if n < 2:
        raise ValueError("paired t-test requires at least 2 pairs")
    d = a - b
    sd = d.std(ddof=1)
    if sd == 0:
        raise ValueError("zero variance of differences: t statistic is degenerate")
    t = float(d.mean() / (sd / math.sqrt(n)))
    df = n - 1
    p = float(2.0 * stats.t.sf(abs(t), df))
    return TTestResult(t=t, df=df, p_two_tailed=p)


# ---------------------------------------------------------------------------
# Serialization.


def _body_to_json(body: dict) -> dict:
    return {
        ",".join(str(v) for v in key): {"IL": cell[0], "IF": cell[1]}
        for key, cell in sorted(body.items())
    }


def _body_from_json(raw: dict) -> dict:
    body = {}
    for key, cell in raw.items():
        tup = tuple(int(v) for v in key.split(",")) if key else ()
        body[tup] = np.array([cell["IL"], cell["IF"]], dtype=float)
    return body


def model_to_dict(model) -> dict:
    names = list(model.feature_names)
    base = {"feature_names": names, "discretizer": model.discretizer.to_dict()}
    if isinstance(model, DecisionTableModel):
        base["kind"] = "dt"
        base["dt"] = {
            "schema": [names[i] for i in model.schema],
            "body": _body_to_json(model.body),
            "default": model.default_label.value,
            "class_counts": {"IL": model.class_counts[0], "IF": model.class_counts[1]},
        }
    elif isinstance(model, NaiveBayesModel):
        base["kind"] = "nb"
        base["nb"] = {
            "features": [names[i] for i in model.feature_idx],
            "priors": {"IL": model.priors[0], "IF": model.priors[1]},
            "conditionals": [t.tolist() for t in model.conditionals],
        }
    elif isinstance(model, DtnbModel):
        base["kind"] = "dtnb"
        inner_dt = model_to_dict(model.dt)["dt"]
        inner_nb = model_to_dict(model.nb)["nb"]
        base["dt"] = inner_dt
        base["nb"] = inner_nb
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return base


def model_from_dict(raw: dict):
    names = tuple(raw["feature_names"])
    disc = Discretizer.from_dict(raw["discretizer"])
    index = {name: i for i, name in enumerate(names)}

    def build_dt(section) -> DecisionTableModel:
        return DecisionTableModel(
            discretizer=disc,
            feature_names=names,
            schema=tuple(index[n] for n in section["schema"]),
            body=_body_from_json(section["body"]),
            class_counts=np.array(
                [section["class_counts"]["IL"], section["class_counts"]["IF"]], dtype=float
            ),
        )

    def build_nb(section) -> NaiveBayesModel:
        return NaiveBayesModel(
            discretizer=disc,
            feature_names=names,
            feature_idx=tuple(index[n] for n in section["features"]),
            priors=np.array([section["priors"]["IL"], section["priors"]["IF"]], dtype=float),
            conditionals=[np.array(t, dtype=float) for t in section["conditionals"]],
        )

    kind = raw["kind"]
    if kind == "dt":
        return build_dt(raw["dt"])
    if kind == "nb":
        return build_nb(raw["nb"])
    if kind == "dtnb":
        return DtnbModel(
            discretizer=disc,
            feature_names=names,
            dt=build_dt(raw["dt"]),
            nb=build_nb(raw["nb"]),
        )
    raise ValueError(f"unknown model kind {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
