"""Assembly of the 43-dimensional cyber-physical-contextual feature vector.

Layout: F1 hop count, F2 total dwell (s), F3-F20 per-category dwell
fractions, F21 query count, F22-F39 per-category contextual similarity,
F40 max CS, F41 sum CS, F42 cosine against the store-name document, F43
cosine against the crowdsourced-keyword document.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model import CategoryRegistry, IntentLabel, Trajectory
from .similarity import SimilarityProfile, TfIdfModel, cosine_vectors

log = logging.getLogger(__name__)

N_FEATURES = 43
FEATURE_NAMES = tuple(f"F{i}" for i in range(1, N_FEATURES + 1))

# Feature-set selectors exposed on the CLI.
FEATURE_SETS = {
    "phy": tuple(range(0, 20)),
    "phy+cyb": tuple(range(0, 21)),
    "cont": tuple(range(21, 43)),
    "phy+cont": tuple(range(0, 20)) + tuple(range(21, 43)),
    "phy+cyb+cont": tuple(range(0, 43)),
}


def feature_set_indices(name: str) -> tuple[int, ...]:
    try:
        return FEATURE_SETS[name]
    except KeyError:
        raise ValueError(
            f"unknown feature set {name!r}; choose from {sorted(FEATURE_SETS)}"
        ) from None


@dataclass(frozen=True)
class FeatureVector:
    trajectory_id: str
    values: np.ndarray  # length 43, ordered F1..F43
    label: IntentLabel | None = None

    def __post_init__(self):
        if self.values.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} features, got {self.values.shape}")


def extract_features(
    trajectory: Trajectory,
    profile: SimilarityProfile,
    query_terms: Mapping[str, int],
    model: TfIdfModel,
    store_doc: Counter | None = None,
    crowd_doc: Counter | None = None,
    label: IntentLabel | None = None,
) -> FeatureVector:
    """Build F1..F43 for one visit.

    ``profile`` must have been computed from this trajectory's queries and
    dwell; ``query_terms`` is the same cyber-context document the profile
    used. The store and crowd documents are vectorized against the corpus
    idf; when absent the corresponding features are 0.
    """
    if len(profile.categories) != 18:
        raise ValueError("feature layout F3-F20/F22-F39 requires 18 categories")
    values = np.zeros(N_FEATURES)
    values[0] = len(trajectory.hops)
    values[1] = trajectory.total_dwell
    values[2:20] = profile.fractions
    values[20] = len(trajectory.queries)
    values[21:39] = profile.cs
    values[39] = float(np.max(profile.cs))
    values[40] = float(np.sum(profile.cs))

    qv = model.vectorize(query_terms)
    for slot, doc, what in ((41, store_doc, "store-name"), (42, crowd_doc, "crowd-keyword")):
        if doc is None:
            log.warning("missing %s document; F%d set to 0", what, slot + 1)
            continue
        values[slot] = cosine_vectors(model.vectorize(doc), qv)

    return FeatureVector(
        trajectory_id=trajectory.trajectory_id, values=values, label=label
    )


def to_matrix(vectors: Sequence[FeatureVector]) -> tuple[np.ndarray, np.ndarray]:
    """Stack feature vectors into (X, y); y holds 1 for intentful, 0 otherwise.

    Raises if any vector is unlabeled.
    """
    if not vectors:
        raise ValueError("no feature vectors")
    x = np.stack([fv.values for fv in vectors])
    labels = []
    for fv in vectors:
        if fv.label is None:
            raise ValueError(f"trajectory {fv.trajectory_id} is unlabeled")
        labels.append(1 if fv.label is IntentLabel.INTENTFUL else 0)
    return x, np.array(labels, dtype=np.int64)


def write_features_csv(path, vectors: Sequence[FeatureVector]) -> None:
    """Write the feature matrix: header F1..F43,label plus a trajectory id."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("trajectory_id," + ",".join(FEATURE_NAMES) + ",label\n")
        for fv in vectors:
            label = fv.label.value if fv.label is not None else "?"
            row = ",".join(format(v, ".10g") for v in fv.values)
            fh.write(f"{fv.trajectory_id},{row},{label}\n")


def read_features_csv(path) -> list[FeatureVector]:
    vectors = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        expected = ["trajectory_id", *FEATURE_NAMES, "label"]
        if header != expected:
            raise ValueError(f"{path}: unexpected feature CSV header")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            tid, raw_values, raw_label = parts[0], parts[1:-1], parts[-1]
            label = None if raw_label == "?" else IntentLabel(raw_label)
            vectors.append(
                FeatureVector(
                    trajectory_id=tid,
                    values=np.array([float(v) for v in raw_values]),
                    label=label,
                )
            )
    return vectors
