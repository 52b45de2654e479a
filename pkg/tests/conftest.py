"""Shared fixtures: bundled deployment data and small hand-built worlds."""

from __future__ import annotations

from datetime import datetime, timezone

import pytest

from footfall import kgraph, pipeline, spatial
from footfall.model import (
    AccessPoint,
    Floorplan,
    Shop,
    load_category_map,
)


def ts(text: str) -> datetime:
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def bundled():
    """Registry, mall->semantic map, and the bundled KG snapshot."""
    registry, category_map = load_category_map(pipeline.bundled_path("category_map.json"))
    store, rejects = kgraph.load_triples(pipeline.bundled_path("mini_kg.tsv"))
    assert not rejects
    return registry, category_map, store


@pytest.fixture(scope="session")
def bundled_corpus(bundled):
    registry, _, store = bundled
    return kgraph.build_category_corpus(store, registry, depth=5)


@pytest.fixture(scope="session")
def bundled_model(bundled_corpus):
    from footfall import similarity

    return similarity.fit_tfidf(bundled_corpus)


@pytest.fixture(scope="session")
def small_floorplan():
    """Two-floor plan with a handful of APs and shops for spatial tests."""
    aps = (
        AccessPoint("wapA", 0.0, 0.0, 0),
        AccessPoint("wapB", 10.0, 0.0, 0),
        AccessPoint("wapC", 5.0, 12.0, 0),
        AccessPoint("wapD", 0.0, 0.0, 1),
    )
    shops = (
        Shop("s1", "corner cafe", "Cafe", 1.0, 1.0, 0),
        Shop("s2", "boot room", "General Footwear", 9.0, 1.0, 0),
        Shop("s3", "bread box", "Bakeries", 4.0, 11.0, 0),
        Shop("s4", "upstairs deli", "Delicatessen", 1.0, 0.0, 1),
    )
    return Floorplan(
        aps=aps,
        shops=shops,
        entry_exit_aps=frozenset({"wapA", "wapB"}),
        rectification_overrides=(),
    )


@pytest.fixture(scope="session")
def synth_world(bundled):
    """One generated mall shared by generator and pipeline tests."""
    from footfall import synth

    registry, category_map, store = bundled
    floorplan = synth.make_floorplan(11, registry, category_map)
    result = synth.generate(11, 176, floorplan, store, registry, category_map)
    return floorplan, result


@pytest.fixture(scope="session")
def synth_engine(bundled, synth_world):
    registry, category_map, store = bundled
    floorplan, _ = synth_world
    assignment = spatial.voronoi_assign(floorplan).assignment
    labels = spatial.label_aps(assignment, floorplan, category_map, registry)
    return pipeline.ContextEngine.build(store, registry, labels)
