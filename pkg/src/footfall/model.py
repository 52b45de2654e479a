"""Shared domain types for indoor visitor analytics.

Everything here is immutable after construction and safe to share across
threads. Timestamps are UTC at second resolution; device ids are opaque
strings and never re-hashed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable

TS_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def parse_ts(value: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp with a trailing Z."""
    return datetime.strptime(value, TS_FORMAT).replace(tzinfo=timezone.utc)


def format_ts(value: datetime) -> str:
    if value.tzinfo is not None:
        value = value.astimezone(timezone.utc)
    return value.strftime(TS_FORMAT)


def canonical_json(obj) -> str:
    """Canonical serialized form: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class IntentLabel(str, Enum):
    INTENTFUL = "IF"
    INTENTLESS = "IL"


@dataclass(frozen=True, order=True)
class SemanticCategory:
    """One of the registered semantic categories backing the similarity space."""

    index: int  # 1-based, stable ordering
    name: str
    kg_root: str


class CategoryRegistry:
    """Ordered registry of semantic categories.

    The canonical deployment registers exactly 18 categories; smaller
    registries are allowed for unit-scale corpora.
    """

    def __init__(self, categories: Iterable[SemanticCategory]):
        cats = tuple(sorted(categories, key=lambda c: c.index))
        if not cats:
            raise ValueError("registry requires at least one category")
        names = [c.name for c in cats]
        if len(set(names)) != len(names):
            raise ValueError("category names must be unique")
        if [c.index for c in cats] != list(range(1, len(cats) + 1)):
            raise ValueError("category indexes must be 1..h without gaps")
        self.categories = cats
        self._by_name = {c.name: c for c in cats}

    @classmethod
    def from_roots(cls, semantic_roots: dict[str, str]) -> "CategoryRegistry":
        """Build a registry from {name: kg_root}, indexed in name order."""
        names = sorted(semantic_roots)
        return cls(
            SemanticCategory(index=i + 1, name=n, kg_root=semantic_roots[n])
            for i, n in enumerate(names)
        )

    def __len__(self) -> int:
        return len(self.categories)

    def __iter__(self):
        return iter(self.categories)

    def names(self) -> list[str]:
        return [c.name for c in self.categories]

    def by_name(self, name: str) -> SemanticCategory:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown semantic category: {name!r}") from None

    def position(self, name: str) -> int:
        """0-based slot of a category in vector representations."""
        return self.by_name(name).index - 1


@dataclass(frozen=True)
class AccessPoint:
    ap_id: str
    x: float
    y: float
    floor: int
    labels: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.floor < 0:
            raise ValueError(f"AP {self.ap_id}: floor must be >= 0")

    def to_dict(self) -> dict:
        return {
            "id": self.ap_id,
            "x": self.x,
            "y": self.y,
            "floor": self.floor,
            "labels": sorted(self.labels),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AccessPoint":
        return cls(
            ap_id=d["id"],
            x=float(d["x"]),
            y=float(d["y"]),
            floor=int(d["floor"]),
            labels=frozenset(d.get("labels", ())),
        )


@dataclass(frozen=True)
class Shop:
    shop_id: str
    name: str
    mall_category: str
    x: float
    y: float
    floor: int

    def to_dict(self) -> dict:
        return {
            "id": self.shop_id,
            "name": self.name,
            "category": self.mall_category,
            "x": self.x,
            "y": self.y,
            "floor": self.floor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Shop":
        return cls(
            shop_id=d["id"],
            name=d["name"],
            mall_category=d["category"],
            x=float(d["x"]),
            y=float(d["y"]),
            floor=int(d["floor"]),
        )


@dataclass(frozen=True)
class AssociationRecord:
    device_id: str
    ap_id: str
    start: datetime
    duration: float  # seconds
    bytes_down: int = 0
    bytes_up: int = 0

    def __post_init__(self):
        if not self.duration >= 0:
            raise ValueError("association duration must be finite and >= 0")
        if self.bytes_down < 0 or self.bytes_up < 0:
            raise ValueError("byte counters must be >= 0")

    @property
    def end(self) -> datetime:
        from datetime import timedelta

        return self.start + timedelta(seconds=self.duration)

    def to_dict(self) -> dict:
        return {
            "device_id": self.device_id,
            "ap_id": self.ap_id,
            "start": format_ts(self.start),
            "duration_s": self.duration,
            "bytes_down": self.bytes_down,
            "bytes_up": self.bytes_up,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AssociationRecord":
        return cls(
            device_id=d["device_id"],
            ap_id=d["ap_id"],
            start=parse_ts(d["start"]),
            duration=float(d["duration_s"]),
            bytes_down=int(d.get("bytes_down", 0)),
            bytes_up=int(d.get("bytes_up", 0)),
        )


@dataclass(frozen=True)
class QueryRecord:
    device_id: str
    ap_id: str
    at: datetime
    text: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("query text must be non-empty after trimming")

    def to_dict(self) -> dict:
        return {
            "device_id": self.device_id,
            "ap_id": self.ap_id,
            "at": format_ts(self.at),
            "text": self.text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QueryRecord":
        return cls(
            device_id=d["device_id"],
            ap_id=d["ap_id"],
            at=parse_ts(d["at"]),
            text=d["text"],
        )


@dataclass(frozen=True)
class Trajectory:
    """One visit: ordered (AP, aggregated dwell) hops plus the visit's queries."""

    device_id: str
    visit_index: int
    visit_start: datetime
    visit_end: datetime
    hops: tuple[tuple[str, float], ...]
    queries: tuple[QueryRecord, ...] = ()
    complete: bool = False

    def __post_init__(self):
        if not self.hops:
            raise ValueError("trajectory requires at least one hop")
        aps = [ap for ap, _ in self.hops]
        if len(set(aps)) != len(aps):
            raise ValueError("each AP may appear at most once per trajectory")
        if any(dwell <= 0 for _, dwell in self.hops):
            raise ValueError("hop dwell must be > 0")

    @classmethod
    def build(
        cls,
        device_id: str,
        visit_index: int,
        visit_start: datetime,
        visit_end: datetime,
        hops: Iterable[tuple[str, float]],
        queries: Iterable[QueryRecord] = (),
        complete: bool = False,
        dwell_threshold: float = 0.0,
    ) -> "Trajectory":
        """Construct a trajectory, rejecting hops below the dwell threshold."""
        hops = tuple(hops)
        below = [ap for ap, dwell in hops if dwell < dwell_threshold]
        if below:
            raise ValueError(f"hops below dwell threshold: {below}")
        return cls(
            device_id=device_id,
            visit_index=visit_index,
            visit_start=visit_start,
            visit_end=visit_end,
            hops=hops,
            queries=tuple(queries),
            complete=complete,
        )

    @property
    def trajectory_id(self) -> str:
        return f"{self.device_id}#{self.visit_index}"

    @property
    def total_dwell(self) -> float:
        return sum(dwell for _, dwell in self.hops)

    @property
    def ap_ids(self) -> tuple[str, ...]:
        return tuple(ap for ap, _ in self.hops)

    def with_complete(self, complete: bool) -> "Trajectory":
        return replace(self, complete=complete)

    def to_dict(self) -> dict:
        return {
            "device_id": self.device_id,
            "visit_index": self.visit_index,
            "visit_start": format_ts(self.visit_start),
            "visit_end": format_ts(self.visit_end),
            "hops": [[ap, dwell] for ap, dwell in self.hops],
            "queries": [q.to_dict() for q in self.queries],
            "complete": self.complete,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trajectory":
        return cls(
            device_id=d["device_id"],
            visit_index=int(d["visit_index"]),
            visit_start=parse_ts(d["visit_start"]),
            visit_end=parse_ts(d["visit_end"]),
            hops=tuple((ap, float(dwell)) for ap, dwell in d["hops"]),
            queries=tuple(QueryRecord.from_dict(q) for q in d.get("queries", ())),
            complete=bool(d.get("complete", False)),
        )


@dataclass(frozen=True)
class Floorplan:
    aps: tuple[AccessPoint, ...]
    shops: tuple[Shop, ...]
    entry_exit_aps: frozenset[str]
    rectification_overrides: tuple[tuple[str, str], ...] = ()  # (shop_id, ap_id)

    def ap_ids(self) -> set[str]:
        return {ap.ap_id for ap in self.aps}

    def floors(self) -> set[int]:
        return {ap.floor for ap in self.aps}

    def to_dict(self) -> dict:
        return {
            "aps": [a.to_dict() for a in self.aps],
            "shops": [s.to_dict() for s in self.shops],
            "entry_exit_aps": sorted(self.entry_exit_aps),
            "rectification_overrides": [
                {"shop_id": s, "ap_id": a} for s, a in self.rectification_overrides
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Floorplan":
        return cls(
            aps=tuple(AccessPoint.from_dict(a) for a in d["aps"]),
            shops=tuple(Shop.from_dict(s) for s in d.get("shops", ())),
            entry_exit_aps=frozenset(d.get("entry_exit_aps", ())),
            rectification_overrides=tuple(
                (o["shop_id"], o["ap_id"])
                for o in d.get("rectification_overrides", ())
            ),
        )


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, kind: str, message: str) -> None:
        self.violations.append(Violation(kind, message))


def validate_deployment(
    floorplan: Floorplan, mall_categories: set[str] | None = None
) -> ValidationReport:
    """Check a floorplan for structural problems.

    Violations are data, not exceptions: the report lists every issue found
    and an empty report means the deployment is valid.
    """
    report = ValidationReport()

    seen: set[str] = set()
    for ap in floorplan.aps:
        if ap.ap_id in seen:
            report.add("duplicate-ap-id", f"AP id {ap.ap_id!r} appears more than once")
        seen.add(ap.ap_id)

    floors = floorplan.floors()
    seen_shops: set[str] = set()
    for shop in floorplan.shops:
        if shop.shop_id in seen_shops:
            report.add(
                "duplicate-shop-id", f"shop id {shop.shop_id!r} appears more than once"
            )
        seen_shops.add(shop.shop_id)
        if shop.floor not in floors:
            report.add(
                "shop-on-missing-floor",
                f"shop {shop.shop_id!r} is on floor {shop.floor} which has no AP",
            )
        if mall_categories is not None and shop.mall_category not in mall_categories:
            report.add(
                "unknown-mall-category",
                f"shop {shop.shop_id!r} has unknown category {shop.mall_category!r}",
            )

    if not floorplan.entry_exit_aps:
        report.add("empty-entry-exit-set", "no entry/exit APs configured")
    ap_ids = floorplan.ap_ids()
    for entry in sorted(floorplan.entry_exit_aps):
        if entry not in ap_ids:
            report.add(
                "unknown-entry-exit-ap", f"entry/exit AP {entry!r} is not in the floorplan"
            )
    shop_ids = {s.shop_id for s in floorplan.shops}
    for shop_id, ap_id in floorplan.rectification_overrides:
        if shop_id not in shop_ids:
            report.add("unknown-override-shop", f"override names unknown shop {shop_id!r}")
        if ap_id not in ap_ids:
            report.add("unknown-override-ap", f"override names unknown AP {ap_id!r}")

    return report


def load_floorplan(path) -> Floorplan:
    with open(path, encoding="utf-8") as fh:
        return Floorplan.from_dict(json.load(fh))


def save_floorplan(floorplan: Floorplan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(floorplan.to_dict()))
        fh.write("\n")


def load_category_map(path) -> tuple[CategoryRegistry, dict[str, str]]:
    """Load {"mall_to_semantic": ..., "semantic_roots": ...} config.

    Returns the 18-category registry and the operator-to-semantic mapping.
    """
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    roots = raw["semantic_roots"]
    if len(roots) != 18:
        raise ValueError(f"expected 18 semantic categories, found {len(roots)}")
    registry = CategoryRegistry.from_roots(roots)
    mapping = dict(raw["mall_to_semantic"])
    unknown = sorted(set(mapping.values()) - set(registry.names()))
    if unknown:
        raise ValueError(f"mall categories map to unregistered semantics: {unknown}")
    return registry, mapping
