"""Association/query log parsing and per-device sessionization.

Both logs are batch CSV files. Malformed rows are never silently dropped:
they land in a rejects report alongside the parsed records.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Sequence

from .model import AssociationRecord, QueryRecord, Trajectory, parse_ts

AL_HEADER = ["device_id", "ap_id", "start_ts", "duration_s", "bytes_down", "bytes_up"]
QL_HEADER = ["device_id", "ap_id", "ts", "query"]


@dataclass(frozen=True)
class RejectedRow:
    line_no: int
    reason: str


@dataclass
class ParseResult:
    records: list = field(default_factory=list)
    rejects: list[RejectedRow] = field(default_factory=list)


@dataclass(frozen=True)
class SessionizationConfig:
    """Sessionization knobs; defaults follow the production deployment."""

    dwell_threshold: float = 600.0  # seconds; drop hops dwelling less than this
    session_gap: float = 1800.0  # seconds between associations that splits visits
    sampling_interval: float = 300.0  # AP log sampling period

    def __post_init__(self):
        if self.dwell_threshold < self.sampling_interval:
            raise ValueError("dwell_threshold must be >= sampling_interval")
        if self.session_gap <= 0:
            raise ValueError("session_gap must be > 0")


def _check_header(row: list[str], expected: list[str], path) -> None:
    if [c.strip() for c in row] != expected:
        raise ValueError(
            f"{path}: header mismatch, expected {','.join(expected)!r}, got {','.join(row)!r}"
        )


def parse_association_log(path) -> ParseResult:
    """Parse an AL CSV into AssociationRecords, in file order."""
    result = ParseResult()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected AL header") from None
        _check_header(header, AL_HEADER, path)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(AL_HEADER):
                result.rejects.append(RejectedRow(line_no, "wrong field count"))
                continue
            device_id, ap_id, start_ts, duration_s, bytes_down, bytes_up = row
            try:
                start = parse_ts(start_ts)
                duration = float(duration_s)
                down = int(bytes_down)
                up = int(bytes_up)
            except (ValueError, TypeError) as exc:
                result.rejects.append(RejectedRow(line_no, f"unparseable field: {exc}"))
                continue
            if not math.isfinite(duration) or duration < 0:
                result.rejects.append(RejectedRow(line_no, "negative or non-finite duration"))
                continue
            if down < 0 or up < 0:
                result.rejects.append(RejectedRow(line_no, "negative byte counter"))
                continue
            result.records.append(
                AssociationRecord(
                    device_id=device_id,
                    ap_id=ap_id,
                    start=start,
                    duration=duration,
                    bytes_down=down,
                    bytes_up=up,
                )
            )
    return result


def parse_query_log(path) -> ParseResult:
    """Parse a QL CSV into QueryRecords (query field RFC-4180 quoted)."""
    result = ParseResult()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected QL header") from None
        _check_header(header, QL_HEADER, path)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(QL_HEADER):
                result.rejects.append(RejectedRow(line_no, "wrong field count"))
                continue
            device_id, ap_id, ts, text = row
            try:
                at = parse_ts(ts)
            except ValueError as exc:
                result.rejects.append(RejectedRow(line_no, f"unparseable timestamp: {exc}"))
                continue
            if not text.strip():
                result.rejects.append(RejectedRow(line_no, "empty query text"))
                continue
            result.records.append(
                QueryRecord(device_id=device_id, ap_id=ap_id, at=at, text=text)
            )
    return result


def write_rejects(path, rejects: Iterable[RejectedRow]) -> None:
    """Write a rejects report as JSON lines {line_no, reason}."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in rejects:
            fh.write(json.dumps({"line_no": r.line_no, "reason": r.reason}, sort_keys=True))
            fh.write("\n")


@dataclass
class SessionizeResult:
    trajectories: list[Trajectory] = field(default_factory=list)
    rejects: list[RejectedRow] = field(default_factory=list)
    dropped_visits: int = 0  # visits with no hop surviving the dwell filter


def _split_visits(
    records: list[AssociationRecord], gap: float
) -> list[list[AssociationRecord]]:
    """Split one device's time-sorted associations at gaps longer than `gap`."""
    visits: list[list[AssociationRecord]] = []
    current: list[AssociationRecord] = []
    latest_end: datetime | None = None
    for rec in records:
        if latest_end is not None and (rec.start - latest_end).total_seconds() > gap:
            visits.append(current)
            current = []
            latest_end = None
        current.append(rec)
        latest_end = rec.end if latest_end is None else max(latest_end, rec.end)
    if current:
        visits.append(current)
    return visits


def sessionize(
    records: Sequence[AssociationRecord],
    queries: Sequence[QueryRecord] = (),
    config: SessionizationConfig | None = None,
    known_aps: set[str] | None = None,
) -> SessionizeResult:
    """Group associations into per-device visits and aggregate dwell per AP.

    A new visit starts whenever the gap between consecutive association
    intervals exceeds ``config.session_gap``. Dwell is summed over repeat
    associations with the same AP inside a visit, then hops below
    ``config.dwell_threshold`` are removed. Queries are attached to the
    visit whose time span contains them, regardless of which AP they were
    issued at. Input order never matters: records are sorted internally and
    output is ordered by (device_id, visit_start).
    """
    config = config or SessionizationConfig()
    result = SessionizeResult()

    kept_records: dict[str, list[AssociationRecord]] = {}
    for i, rec in enumerate(records):
        if known_aps is not None and rec.ap_id not in known_aps:
            result.rejects.append(
                RejectedRow(i, f"association references unknown AP {rec.ap_id!r}")
            )
            continue
        kept_records.setdefault(rec.device_id, []).append(rec)

    device_queries: dict[str, list[QueryRecord]] = {}
    for i, q in enumerate(queries):
        if known_aps is not None and q.ap_id not in known_aps:
            result.rejects.append(
                RejectedRow(i, f"query references unknown AP {q.ap_id!r}")
            )
            continue
        device_queries.setdefault(q.device_id, []).append(q)

    for device_id in sorted(kept_records):
        recs = sorted(
            kept_records[device_id],
            key=lambda r: (r.start, r.ap_id, r.duration, r.bytes_down, r.bytes_up),
        )
        dev_queries = sorted(
            device_queries.get(device_id, ()), key=lambda q: (q.at, q.ap_id, q.text)
        )
        visit_index = 0
        for visit in _split_visits(recs, config.session_gap):
            visit_start = visit[0].start
            visit_end = max(r.end for r in visit)
            dwell: dict[str, float] = {}
            first_seen: dict[str, datetime] = {}
            for rec in visit:
                dwell[rec.ap_id] = dwell.get(rec.ap_id, 0.0) + rec.duration
                first_seen.setdefault(rec.ap_id, rec.start)
            hops = [
                (ap, dwell[ap])
                for ap in sorted(dwell, key=lambda a: (first_seen[a], a))
                if dwell[ap] >= config.dwell_threshold
            ]
            if not hops:
                result.dropped_visits += 1
                continue
            attached = tuple(
                q for q in dev_queries if visit_start <= q.at <= visit_end
            )
            result.trajectories.append(
                Trajectory(
                    device_id=device_id,
                    visit_index=visit_index,
                    visit_start=visit_start,
                    visit_end=visit_end,
                    hops=tuple(hops),
                    queries=attached,
                )
            )
            visit_index += 1

    return result


def mark_complete(trajectory: Trajectory, entry_exit_aps: set[str]) -> Trajectory:
    """Flag trajectories with >= 3 hops that start and end at entry/exit APs."""
    hops = trajectory.hops
    complete = (
        len(hops) >= 3
        and hops[0][0] in entry_exit_aps
        and hops[-1][0] in entry_exit_aps
    )
    return trajectory.with_complete(complete)


def association_cdf(
    records: Sequence[AssociationRecord], bin_width: float
) -> list[tuple[float, float]]:
    """Cumulative distribution of association durations.

    Returns (duration_bound, cumulative_fraction) pairs with bounds at
    multiples of ``bin_width``; the final fraction is 1.0. Empty input
    yields an empty CDF.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be > 0")
    durations = [r.duration for r in records]
    if not durations:
        return []
    n_bins = max(1, math.ceil(max(durations) / bin_width))
    total = len(durations)
    out = []
    for k in range(1, n_bins + 1):
        bound = k * bin_width
        out.append((bound, sum(1 for d in durations if d <= bound) / total))
    return out
