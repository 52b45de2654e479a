"""Per-floor AP coverage cells and semantic labeling of APs.

Each shop belongs to the cell of the nearest AP on its floor (point-seeded
Voronoi membership). Manual overrides can re-home individual shops to match
real frontages before labels are derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import CategoryRegistry, Floorplan


@dataclass
class AssignmentReport:
    assignment: dict[str, str] = field(default_factory=dict)  # shop_id -> ap_id
    unassigned: list[str] = field(default_factory=list)

    @property
    def mean_shops_per_cell(self) -> float:
        """Average shop count over cells that contain at least one shop."""
        if not self.assignment:
            return 0.0
        counts: dict[str, int] = {}
        for ap_id in self.assignment.values():
            counts[ap_id] = counts.get(ap_id, 0) + 1
        return sum(counts.values()) / len(counts)


def voronoi_assign(floorplan: Floorplan) -> AssignmentReport:
    """Map every shop to the nearest AP on its floor (ties by ap_id)."""
    by_floor: dict[int, list] = {}
    for ap in floorplan.aps:
        by_floor.setdefault(ap.floor, []).append(ap)

    report = AssignmentReport()
    for shop in floorplan.shops:
        candidates = by_floor.get(shop.floor)
        if not candidates:
            report.unassigned.append(shop.shop_id)
            continue
        best = min(
            candidates,
            key=lambda ap: (math.hypot(ap.x - shop.x, ap.y - shop.y), ap.ap_id),
        )
        report.assignment[shop.shop_id] = best.ap_id
    return report


def apply_rectification(
    assignment: dict[str, str],
    overrides: dict[str, str],
    floorplan: Floorplan,
) -> dict[str, str]:
    """Apply manual shop->AP overrides on top of a Voronoi assignment."""
    ap_ids = floorplan.ap_ids()
    shop_ids = {s.shop_id for s in floorplan.shops}
    rectified = dict(assignment)
    for shop_id, ap_id in overrides.items():
        if shop_id not in shop_ids:
            raise ValueError(f"rectification names unknown shop {shop_id!r}")
        if ap_id not in ap_ids:
            raise ValueError(f"rectification names unknown AP {ap_id!r}")
        rectified[shop_id] = ap_id
    return rectified


def label_aps(
    assignment: dict[str, str],
    floorplan: Floorplan,
    category_map: dict[str, str],
    registry: CategoryRegistry,
) -> dict[str, frozenset[str]]:
    """Derive each AP's semantic label set from the shops in its cell.

    Every AP in the floorplan gets an entry; APs with empty cells get an
    empty label set.
    """
    shops = {s.shop_id: s for s in floorplan.shops}
    registered = set(registry.names())
    labels: dict[str, set[str]] = {ap.ap_id: set() for ap in floorplan.aps}
    for shop_id, ap_id in assignment.items():
        mall_cat = shops[shop_id].mall_category
        try:
            semantic = category_map[mall_cat]
        except KeyError:
            raise ValueError(
                f"mall category {mall_cat!r} (shop {shop_id!r}) missing from category map"
            ) from None
        if semantic not in registered:
            raise ValueError(f"category map target {semantic!r} is not registered")
        labels[ap_id].add(semantic)
    return {ap_id: frozenset(cats) for ap_id, cats in labels.items()}


def labels_to_dict(labels: dict[str, frozenset[str]]) -> dict[str, list[str]]:
    return {ap_id: sorted(cats) for ap_id, cats in sorted(labels.items())}


def labels_from_dict(raw: dict[str, list[str]]) -> dict[str, frozenset[str]]:
    return {ap_id: frozenset(cats) for ap_id, cats in raw.items()}
