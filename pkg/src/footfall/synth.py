"""Seeded synthetic fixtures: floorplans, logs, and ground-truth labels.

The generated mall has a hub corridor (popular hallway APs, Zipf-ranked)
with one AP cluster per semantic category hanging off it. Visits are random
walks over the Voronoi-neighbor adjacency of the APs: intentful personas
steer into their target category's cluster and concentrate dwell there,
intentless personas wander. Query text comes from knowledge-graph entity
labels (on topic) or from a tourist vocabulary that never links (off
topic). Everything is reproducible from the seed.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from .kgraph import TripleStore
from .model import (
    AccessPoint,
    AssociationRecord,
    CategoryRegistry,
    Floorplan,
    IntentLabel,
    QueryRecord,
    Shop,
)

TOURIST_QUERIES = [
    "sydney festival dates",
    "ferry timetable circular quay",
    "weather tomorrow sydney",
    "baggage claim airport",
    "train to airport",
    "currency exchange rate",
    "hotel check in time",
    "free walking tour map",
    "flight status qf12",
    "translate thank you",
    "city parking rates",
    "opera house tickets",
    "harbour bridge climb",
    "bus route 333",
    "public holiday trading",
    "wifi login help",
    "power adapter australia",
    "taxi fare estimate",
]

ON_TOPIC_TEMPLATES = [
    "{e}",
    "{e} review",
    "{e} reviews",
    "{e} sale",
    "{e} price",
    "{e} near me",
    "buy {e}",
    "{e} opening hours",
    "{e} specials",
]


@dataclass(frozen=True)
class Persona:
    kind: str  # "intentful" | "intentless"
    target: str | None = None  # semantic category; None rotates per visit
    dwell_bias: float = 0.75
    query_on_topic_prob: float = 0.85

    def __post_init__(self):
        if self.kind not in ("intentful", "intentless"):
            raise ValueError(f"unknown persona kind {self.kind!r}")
        if self.kind == "intentful" and not self.dwell_bias > 0.5:
            raise ValueError("intentful personas need dwell_bias > 0.5")


def default_mix(intentful_frac: float) -> list[tuple[Persona, float]]:
    return [
        (Persona("intentful"), intentful_frac),
        (Persona("intentless"), 1.0 - intentful_frac),
    ]


@dataclass
class SynthResult:
    floorplan: Floorplan
    associations: list[AssociationRecord]
    queries: list[QueryRecord]
    labels: dict[str, IntentLabel]  # trajectory_id -> label
    targets: dict[str, str | None]  # trajectory_id -> ground-truth category

    def write(self, al_path, ql_path, labels_path) -> None:
        with open(al_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["device_id", "ap_id", "start_ts", "duration_s", "bytes_down", "bytes_up"])
            for r in self.associations:
                w.writerow(
                    [
                        r.device_id,
                        r.ap_id,
                        r.start.strftime("%Y-%m-%dT%H:%M:%SZ"),
                        int(r.duration),
                        r.bytes_down,
                        r.bytes_up,
                    ]
                )
        with open(ql_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["device_id", "ap_id", "ts", "query"])
            for q in self.queries:
                w.writerow([q.device_id, q.ap_id, q.at.strftime("%Y-%m-%dT%H:%M:%SZ"), q.text])
        with open(labels_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["trajectory_id", "label"])
            for tid in sorted(self.labels):
                w.writerow([tid, self.labels[tid].value])


def make_floorplan(
    seed: int,
    registry: CategoryRegistry,
    category_map: dict[str, str],
    n_aps: int = 70,
    n_shops: int = 200,
    n_floors: int = 1,
    n_hubs: int = 16,
) -> Floorplan:
    """Hub corridor plus one shop cluster per category, spread over floors."""
    if n_aps < n_hubs + len(registry):
        raise ValueError("need at least one cluster AP per category plus the hubs")
    rng = random.Random(seed)
    names = registry.names()
    # Operator categories that map onto each semantic category.
    inverse: dict[str, list[str]] = {}
    for mall_cat, semantic in sorted(category_map.items()):
        inverse.setdefault(semantic, []).append(mall_cat)

    hubs_per_floor = [n_hubs // n_floors] * n_floors
    for i in range(n_hubs % n_floors):
        hubs_per_floor[i] += 1
    cluster_floor = [i % n_floors for i in range(len(names))]

    aps: list[AccessPoint] = []
    hub_ids: list[str] = []
    seq = 0
    for floor in range(n_floors):
        for h in range(hubs_per_floor[floor]):
            ap_id = f"wap{seq:03d}"
            aps.append(AccessPoint(ap_id=ap_id, x=40.0 * h, y=0.0, floor=floor))
            hub_ids.append(ap_id)
            seq += 1

    n_cluster_aps = n_aps - n_hubs
    base = n_cluster_aps // len(names)
    extra = n_cluster_aps % len(names)
    cluster_aps: dict[str, list[str]] = {}
    shops: list[Shop] = []
    shop_seq = 0
    shops_left = n_shops
    for c, name in enumerate(names):
        size = base + (1 if c < extra else 0)
        floor = cluster_floor[c]
        side = 1.0 if c % 2 == 0 else -1.0
        cx = 25.0 + 35.0 * (c // 2)
        cy = side * 55.0
        members: list[str] = []
        for _ in range(size):
            ap_id = f"wap{seq:03d}"
            seq += 1
            aps.append(
                AccessPoint(
                    ap_id=ap_id,
                    x=cx + rng.uniform(-12.0, 12.0),
                    y=cy + rng.uniform(-10.0, 10.0),
                    floor=floor,
                )
            )
            members.append(ap_id)
        cluster_aps[name] = members
        # Spread the remaining shop budget evenly over remaining clusters.
        quota = round(shops_left / (len(names) - c))
        shops_left -= quota
        positions = {a.ap_id: a for a in aps}
        for _ in range(quota):
            anchor = positions[rng.choice(members)]
            shops.append(
                Shop(
                    shop_id=f"shop{shop_seq:03d}",
                    name=f"{name.lower()} store {shop_seq}",
                    mall_category=rng.choice(inverse[name]),
                    x=anchor.x + rng.uniform(-6.0, 6.0),
                    y=anchor.y + rng.uniform(-6.0, 6.0),
                    floor=anchor.floor,
                )
            )
            shop_seq += 1

    first_floor_hubs = [h for h in hub_ids if h in {a.ap_id for a in aps if a.floor == 0}]
    entries = {first_floor_hubs[0], first_floor_hubs[-1]}
    if len(first_floor_hubs) > 3:
        entries.add(first_floor_hubs[len(first_floor_hubs) // 2])
    return Floorplan(
        aps=tuple(aps),
        shops=tuple(shops),
        entry_exit_aps=frozenset(entries),
        rectification_overrides=(),
    )


def entities_by_category(store: TripleStore, registry: CategoryRegistry) -> dict[str, list[str]]:
    """Entity labels grouped by the single category root their subjects reach."""
    root_names = {c.kg_root: c.name for c in registry}
    out: dict[str, list[str]] = {c.name: [] for c in registry}
    for entity in store.entities():
        roots: set[str] = set()
        frontier = store.objects(entity, "subject")
        seen = set(frontier)
        for _ in range(10):
            nxt = []
            for node in frontier:
                if node in root_names:
                    roots.add(root_names[node])
                for parent in store.objects(node, "broader"):
                    if parent not in seen:
                        seen.add(parent)
                        nxt.append(parent)
            frontier = nxt
            if not frontier:
                break
        if len(roots) == 1:
            name = roots.pop()
            for label in store.labels_of(entity):
                out[name].append(label)
    return {name: sorted(set(labels)) for name, labels in out.items()}


@dataclass
class _VisitPlan:
    device_id: str
    persona: Persona
    target: str | None
    complete: bool
    start: datetime


@dataclass
class _Generator:
    rng: random.Random
    floorplan: Floorplan
    hub_ids: list[str]
    cluster_aps: dict[str, list[str]]
    zipf_weight: dict[str, float]
    entity_labels: dict[str, list[str]]
    short_frac: float
    short_carry: float = 0.0
    associations: list[AssociationRecord] = field(default_factory=list)
    queries: list[QueryRecord] = field(default_factory=list)

    def _draw_long_dwell(self) -> int:
        # Clipped lognormal, always on the kept side of the 10-minute filter.
        dwell = self.rng.lognormvariate(6.9, 0.45)
        return int(60 * round(min(max(dwell, 660.0), 3600.0) / 60))

    def _draw_short_dwell(self) -> int:
        return self.rng.choice([120, 180, 240, 300, 360, 420, 480, 540])

    def _sample_hubs(self, count: int, exclude: set[str]) -> list[str]:
        """Popularity-weighted hub transits, distinct, corridor-agnostic."""
        pool = [h for h in self.hub_ids if h not in exclude]
        picked: list[str] = []
        for _ in range(min(count, len(pool))):
            weights = [self.zipf_weight[h] for h in pool]
            hub = self.rng.choices(pool, weights=weights, k=1)[0]
            picked.append(hub)
            pool.remove(hub)
        return picked

    def _walk(self, plan: _VisitPlan) -> list[str]:
        """Compose a visit route: entry, corridor hubs, cluster stops, exit.

        Hub transits are sampled by popularity rather than along a corridor
        path: at a 5-minute sampling interval only the hubs a visitor
        lingers at register, so the recorded route compresses to a
        destination-agnostic hub subset plus the destination cluster.
        """
        rng = self.rng
        entry = rng.choice(sorted(self.floorplan.entry_exit_aps))
        exits = sorted(self.floorplan.entry_exit_aps - {entry}) or [entry]
        exit_ap = rng.choice(exits)

        if plan.persona.kind == "intentful":
            clusters = [plan.target]
            n_stops = rng.randint(2, 3)
        else:
            k = rng.randint(1, 2) if plan.target is None else 1
            clusters = (
                [plan.target]
                if plan.target
                else rng.sample(sorted(self.cluster_aps), k=k)
            )
            n_stops = rng.randint(1, 3)

        stops: list[str] = []
        for name in clusters:
            members = self.cluster_aps[name]
            take = min(n_stops, len(members))
            stops.extend(rng.sample(members, k=take))

        used = {entry, exit_ap}
        walk = [entry]
        walk += self._sample_hubs(rng.randint(1, 2), exclude=used)
        walk += stops
        walk += self._sample_hubs(rng.choice([0, 0, 1]), exclude=used | set(walk))
        walk.append(exit_ap)
        # Distinct APs except entry==exit edge case; keep exit last.
        seen: set[str] = set()
        deduped = []
        for ap in walk[:-1]:
            if ap not in seen and ap != exit_ap:
                seen.add(ap)
                deduped.append(ap)
        deduped.append(exit_ap)
        walk = deduped

        if not plan.complete:
            # Partial visit: shed the entry leg and possibly the exit.
            if len(walk) > 2:
                walk = walk[1:]
            if len(walk) > 2 and rng.random() < 0.5:
                walk = walk[:-1]
        return walk

    def synthesize_visit(self, plan: _VisitPlan) -> tuple[str, set[str]]:
        """Emit AL/QL rows for one visit; returns (first long hub, stop APs)."""
        rng = self.rng
        walk = self._walk(plan)
        target_cluster = (
            set(self.cluster_aps[plan.target]) if plan.target else set()
        )

        # Decide which hops carry a kept (long) association.
        long_flags = []
        for i, ap in enumerate(walk):
            forced = (
                (plan.complete and (i == 0 or i == len(walk) - 1))
                or ap in target_cluster
            )
            long_flags.append(forced or rng.random() > 0.15)
        if sum(long_flags) < 3 and plan.complete:
            for i in range(len(walk)):
                long_flags[i] = True

        dwells = {}
        for i, ap in enumerate(walk):
            if long_flags[i]:
                dwells[i] = self._draw_long_dwell()

        # Bias the dwell distribution towards the target cluster.
        if plan.persona.kind == "intentful" and target_cluster:
            t_total = sum(d for i, d in dwells.items() if walk[i] in target_cluster)
            o_total = sum(d for i, d in dwells.items() if walk[i] not in target_cluster)
            bias = plan.persona.dwell_bias
            if t_total > 0 and o_total > 0:
                current = t_total / (t_total + o_total)
                if current < bias:
                    factor = bias * o_total / ((1.0 - bias) * t_total)
                    for i in list(dwells):
                        if walk[i] in target_cluster:
                            dwells[i] = int(min(dwells[i] * factor, 7200))

        # Passing-by associations keep the short side of the duration CDF on
        # target. The carry nets out walk hops that already came up short, so
        # the aggregate short fraction converges on short_frac across visits.
        n_long = len(dwells)
        n_short_walk = len(walk) - n_long
        want = self.short_frac / (1.0 - self.short_frac) * n_long + self.short_carry
        n_shorts = max(n_short_walk, int(want))
        self.short_carry = want - n_shorts
        hop_set = set(walk)
        pool = sorted({ap.ap_id for ap in self.floorplan.aps} - hop_set)
        pass_aps = rng.sample(pool, k=min(n_shorts - n_short_walk, len(pool)))

        # Timeline: hops in walk order, passes spliced between them.
        events: list[tuple[str, int, bool]] = []  # (ap, dwell, is_hop_long)
        pass_iter = iter(pass_aps)
        for i, ap in enumerate(walk):
            if long_flags[i]:
                events.append((ap, dwells[i], True))
            else:
                events.append((ap, self._draw_short_dwell(), False))
            if i < len(walk) - 1:
                nxt = next(pass_iter, None)
                if nxt is not None:
                    events.append((nxt, self._draw_short_dwell(), False))
        for ap in pass_iter:
            events.append((ap, self._draw_short_dwell(), False))

        t = plan.start
        long_hop_times: list[tuple[str, datetime, int]] = []
        for ap, dwell, is_long in events:
            self.associations.append(
                AssociationRecord(
                    device_id=plan.device_id,
                    ap_id=ap,
                    start=t,
                    duration=dwell,
                    bytes_down=rng.randint(1_000, 2_000_000),
                    bytes_up=rng.randint(500, 200_000),
                )
            )
            if is_long:
                long_hop_times.append((ap, t, dwell))
            t = t + timedelta(seconds=dwell + rng.randint(20, 180))

        # Queries: the first at an early long hop, the rest anywhere inside.
        n_queries = 1 + rng.choice([0, 0, 1, 1, 2])
        early = long_hop_times[: max(1, min(2, len(long_hop_times) - 1))]
        issue_at = [rng.choice(early)]
        for _ in range(n_queries - 1):
            issue_at.append(rng.choice(long_hop_times))
        for ap, start, dwell in issue_at:
            offset = rng.randint(0, max(0, dwell - 1))
            self.queries.append(
                QueryRecord(
                    device_id=plan.device_id,
                    ap_id=ap,
                    at=start + timedelta(seconds=offset),
                    text=self._query_text(plan),
                )
            )
        stop_aps = {ap for ap, _, _ in long_hop_times}
        return issue_at[0][0], stop_aps

    def _query_text(self, plan: _VisitPlan) -> str:
        rng = self.rng
        on_topic = (
            plan.persona.kind == "intentful"
            and rng.random() < plan.persona.query_on_topic_prob
            and self.entity_labels.get(plan.target)
        )
        if on_topic:
            entity = rng.choice(self.entity_labels[plan.target])
            return rng.choice(ON_TOPIC_TEMPLATES).format(e=entity)
        return rng.choice(TOURIST_QUERIES)


def _allocate(n: int, mix: list[tuple[Persona, float]]) -> list[Persona]:
    """Largest-remainder allocation of n visits over the persona mix."""
    total = sum(frac for _, frac in mix)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"persona mix fractions sum to {total}, expected 1")
    raw = [frac * n for _, frac in mix]
    counts = [int(r) for r in raw]
    remainders = sorted(
        range(len(mix)), key=lambda i: (-(raw[i] - counts[i]), i)
    )
    for i in remainders[: n - sum(counts)]:
        counts[i] += 1
    out = []
    for (persona, _), count in zip(mix, counts):
        out.extend([persona] * count)
    return out


def generate(
    seed: int,
    n_trajectories: int,
    floorplan: Floorplan,
    store: TripleStore,
    registry: CategoryRegistry,
    category_map: dict[str, str],
    persona_mix: list[tuple[Persona, float]] | None = None,
    complete_frac: float = 1.0,
    short_assoc_frac: float = 0.3,
    zipf_exponent: float = 1.0,
) -> SynthResult:
    """Generate AL/QL logs plus ground truth for n visits, one per device."""
    rng = random.Random(seed)
    persona_mix = persona_mix or default_mix(48 / 176)

    names = registry.names()
    # Cluster membership: APs labeled per the floorplan's shop layout.
    from .spatial import label_aps, voronoi_assign

    assignment = voronoi_assign(floorplan).assignment
    labels = label_aps(assignment, floorplan, category_map, registry)
    cluster_aps: dict[str, list[str]] = {name: [] for name in names}
    hub_ids = []
    for ap in floorplan.aps:
        cats = labels.get(ap.ap_id, frozenset())
        if not cats:
            hub_ids.append(ap.ap_id)
        else:
            for name in sorted(cats):
                cluster_aps[name].append(ap.ap_id)
    empty = [name for name, aps in cluster_aps.items() if not aps]
    if empty:
        raise ValueError(f"floorplan has no APs for categories: {empty}")

    # Zipf popularity: hubs take the top ranks, cluster APs shuffle behind.
    ranked = sorted(hub_ids)
    rest = sorted(set(a.ap_id for a in floorplan.aps) - set(ranked))
    rng.shuffle(rest)
    ranked.extend(rest)
    zipf_weight = {
        ap: 1.0 / (rank + 1) ** zipf_exponent for rank, ap in enumerate(ranked)
    }

    gen = _Generator(
        rng=rng,
        floorplan=floorplan,
        hub_ids=sorted(hub_ids),
        cluster_aps=cluster_aps,
        zipf_weight=zipf_weight,
        entity_labels=entities_by_category(store, registry),
        short_frac=short_assoc_frac,
    )

    personas = _allocate(n_trajectories, persona_mix)
    rng.shuffle(personas)
    base = datetime(2013, 3, 1, 8, 0, 0, tzinfo=timezone.utc)
    labels_out: dict[str, IntentLabel] = {}
    targets: dict[str, str | None] = {}
    for idx, persona in enumerate(personas):
        device_id = f"u{idx:05d}"
        target = None
        if persona.kind == "intentful":
            target = persona.target or names[rng.randrange(len(names))]
        elif rng.random() < 0.55:
            # Intentless visitors still browse somewhere specific.
            target = names[rng.randrange(len(names))]
        plan = _VisitPlan(
            device_id=device_id,
            persona=persona,
            target=target,
            complete=rng.random() < complete_frac,
            start=base + timedelta(seconds=idx * 37 + rng.randint(0, 14 * 3600)),
        )
        gen.synthesize_visit(plan)
        tid = f"{device_id}#0"
        labels_out[tid] = (
            IntentLabel.INTENTFUL if persona.kind == "intentful" else IntentLabel.INTENTLESS
        )
        targets[tid] = target if persona.kind == "intentful" else None

    return SynthResult(
        floorplan=floorplan,
        associations=gen.associations,
        queries=gen.queries,
        labels=labels_out,
        targets=targets,
    )
