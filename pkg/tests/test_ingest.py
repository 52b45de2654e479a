"""Log parsing, sessionization, the 10-minute filter, and the duration CDF."""

import random

import pytest

from footfall.ingest import (
    SessionizationConfig,
    association_cdf,
    mark_complete,
    parse_association_log,
    parse_query_log,
    sessionize,
)
from footfall.model import AssociationRecord, QueryRecord

from conftest import ts


def _al_file(tmp_path, rows):
    path = tmp_path / "al.csv"
    lines = ["device_id,ap_id,start_ts,duration_s,bytes_down,bytes_up"] + rows
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_parse_association_row(tmp_path):
    path = _al_file(tmp_path, ["u1,wap030,2013-03-01T10:00:00Z,900,1024,256"])
    result = parse_association_log(path)
    assert not result.rejects
    (rec,) = result.records
    assert rec.device_id == "u1"
    assert rec.ap_id == "wap030"
    assert rec.duration == 900.0
    assert rec.bytes_down == 1024


def test_parse_rejects_negative_duration(tmp_path):
    path = _al_file(tmp_path, ["u1,wap030,2013-03-01T10:00:00Z,-5,0,0"])
    result = parse_association_log(path)
    assert not result.records
    assert len(result.rejects) == 1
    assert result.rejects[0].line_no == 2
    assert "duration" in result.rejects[0].reason


def test_parse_empty_file_with_header(tmp_path):
    path = _al_file(tmp_path, [])
    result = parse_association_log(path)
    assert result.records == [] and result.rejects == []


def test_parse_header_mismatch(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header mismatch"):
        parse_association_log(path)


def test_parse_query_log_quoted_text(tmp_path):
    path = tmp_path / "ql.csv"
    path.write_text(
        'device_id,ap_id,ts,query\nu1,wap030,2013-03-01T10:02:00Z,"ugg, shoes"\n',
        encoding="utf-8",
    )
    result = parse_query_log(path)
    assert result.records[0].text == "ugg, shoes"


def _assoc(device, ap, start, minutes):
    return AssociationRecord(device, ap, ts(start), minutes * 60.0)


def test_sessionize_single_visit():
    records = [
        _assoc("u1", "A", "2013-03-01T10:00:00Z", 15),
        _assoc("u1", "B", "2013-03-01T10:20:00Z", 12),
    ]
    result = sessionize(records)
    (traj,) = result.trajectories
    assert traj.hops == (("A", 900.0), ("B", 720.0))
    assert traj.visit_start == ts("2013-03-01T10:00:00Z")
    assert traj.visit_end == ts("2013-03-01T10:32:00Z")


def test_sessionize_aggregates_repeat_visits_before_filter():
    # Two sub-threshold associations with the same AP survive in aggregate.
    records = [
        _assoc("u1", "A", "2013-03-01T10:00:00Z", 8),
        _assoc("u1", "A", "2013-03-01T10:15:00Z", 7),
    ]
    result = sessionize(records)
    (traj,) = result.trajectories
    assert traj.hops == (("A", 900.0),)


def test_sessionize_discards_visit_filtered_empty():
    records = [_assoc("u1", "A", "2013-03-01T10:00:00Z", 9)]
    result = sessionize(records)
    assert result.trajectories == []
    assert result.dropped_visits == 1


def test_sessionize_splits_on_gap():
    records = [
        _assoc("u1", "A", "2013-03-01T10:00:00Z", 15),
        _assoc("u1", "B", "2013-03-01T11:00:00Z", 15),  # 45 min gap after A ends
    ]
    result = sessionize(records)
    assert len(result.trajectories) == 2
    assert [t.visit_index for t in result.trajectories] == [0, 1]


def test_sessionize_attaches_queries_by_visit_span():
    records = [
        _assoc("u1", "A", "2013-03-01T10:00:00Z", 15),
        _assoc("u1", "B", "2013-03-01T10:20:00Z", 12),
    ]
    queries = [
        QueryRecord("u1", "C", ts("2013-03-01T10:25:00Z"), "inside"),
        QueryRecord("u1", "A", ts("2013-03-01T12:00:00Z"), "outside"),
    ]
    result = sessionize(records, queries)
    (traj,) = result.trajectories
    # Query at AP C attaches even though C never becomes a hop.
    assert [q.text for q in traj.queries] == ["inside"]


def test_sessionize_rejects_unknown_ap():
    records = [_assoc("u1", "ghost", "2013-03-01T10:00:00Z", 15)]
    queries = [QueryRecord("u1", "ghost", ts("2013-03-01T10:05:00Z"), "hello")]
    result = sessionize(records, queries, known_aps={"A", "B"})
    assert len(result.rejects) == 2
    assert result.trajectories == []


def test_sessionize_order_insensitive():
    rng = random.Random(5)
    records = []
    for d in range(4):
        start = ts("2013-03-01T09:00:00Z")
        for i in range(6):
            records.append(
                AssociationRecord(
                    f"u{d}", f"wap{i % 3}", start, rng.choice([480, 700, 900])
                )
            )
            from datetime import timedelta

            start = start + timedelta(seconds=rng.choice([600, 1200, 2400]))
    baseline = sessionize(records).trajectories
    for _ in range(3):
        shuffled = records[:]
        rng.shuffle(shuffled)
        assert sessionize(shuffled).trajectories == baseline


def test_dwell_never_exceeds_visit_span(synth_world):
    floorplan, result = synth_world
    sessions = sessionize(result.associations, result.queries, known_aps=floorplan.ap_ids())
    for traj in sessions.trajectories:
        span = (traj.visit_end - traj.visit_start).total_seconds()
        assert traj.total_dwell <= span + 1e-9


def test_mark_complete_rules():
    def impl(hops, entry_exit):
        traj = sessionize(
            [_assoc("u1", ap, f"2013-03-01T1{i}:00:00Z", 15) for i, ap in enumerate(hops)],
            config=SessionizationConfig(session_gap=7200),
        ).trajectories[0]
        return mark_complete(traj, entry_exit).complete

    assert impl(["E1", "A", "E2"], {"E1", "E2"}) is True
    assert impl(["E1", "A"], {"E1", "E2"}) is False
    assert impl(["A", "B", "C"], {"E1", "E2"}) is False


def test_cdf_two_bins():
    records = [
        _assoc("u1", "A", "2013-03-01T10:00:00Z", m) for m in (5, 5, 15, 15)
    ]
    assert association_cdf(records, 600) == [(600, 0.5), (1200, 1.0)]


def test_cdf_single_step():
    records = [_assoc("u1", "A", "2013-03-01T10:00:00Z", 10) for _ in range(4)]
    assert association_cdf(records, 600) == [(600, 1.0)]


def test_cdf_empty_input():
    assert association_cdf([], 600) == []


def test_cdf_monotone_and_bounded(synth_world):
    _, result = synth_world
    cdf = association_cdf(result.associations, 300)
    fractions = [f for _, f in cdf]
    assert all(0.0 <= f <= 1.0 for f in fractions)
    assert all(a <= b for a, b in zip(fractions, fractions[1:]))
    assert fractions[-1] == 1.0


def test_generator_short_association_share(synth_world):
    # The generated log keeps roughly three in ten associations under the
    # 10-minute filter, matching the deployment's duration profile.
    _, result = synth_world
    cdf = association_cdf(result.associations, 600)
    assert abs(cdf[0][1] - 0.30) < 0.05


def test_config_validation():
    with pytest.raises(ValueError):
        SessionizationConfig(dwell_threshold=100.0, sampling_interval=300.0)
    with pytest.raises(ValueError):
        SessionizationConfig(session_gap=0.0)
