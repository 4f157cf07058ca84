import io

import pytest
from hypothesis import given, strategies as st

from chronoslice.core import OutOfOrderTimestamp, TemporalEdge
from chronoslice.ingest import (
    IngestConfig,
    NodeGroups,
    ParseError,
    data_dir,
    find_dataset,
    parse_stream,
    read_network,
    synth_stream,
    write_stream,
)


def parse(text, **kw):
    return read_network(io.StringIO(text), IngestConfig(**kw))


def test_sociopatterns_line():
    net = parse("31220 1558 1567 3B 3B\n", time_divisor=20, rebase=False)
    assert [(e.source, e.target, e.t_orig) for e in net.events] == [("1558", "1567", 1561)]
    assert net.groups.labels == {"1558": "3B", "1567": "3B"}
    assert net.raw_origin == 31220


def test_rebase_preserves_differences():
    text = "31220 a b\n31240 b c\n31300 a c\n"
    plain = parse(text, time_divisor=20, rebase=False).events
    rebased = parse(text, time_divisor=20).events
    assert [e.t_orig for e in rebased] == [0, 1, 4]
    assert [b.t_orig - a.t_orig for a, b in zip(plain, plain[1:])] == \
        [b.t_orig - a.t_orig for a, b in zip(rebased, rebased[1:])]


def test_self_edges_counted():
    net = parse("0 a a\n1 a b\n")
    assert net.self_edges == 1 and net.meta.edge_count == 1


def test_csv_and_jsonl():
    net = parse("source,target,time\na,b,3\nb,c,5\n", format="csv")
    assert [(e.source, e.target, e.t_orig) for e in net.events] == [("a", "b", 0), ("b", "c", 2)]
    net = parse('{"source": 1, "target": 2, "time": 7}\n', format="jsonl", rebase=False)
    assert net.events == [TemporalEdge("1", "2", 7)]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as info:
        parse("0 a b\n1 a\n")
    assert info.value.line == 2
    with pytest.raises(ParseError) as info:
        parse("source,target,time\na,b,x\n", format="csv")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse("source,target\na,b\n", format="csv")
    with pytest.raises(ParseError) as info:
        parse('{"source": 1}\n', format="jsonl")
    assert info.value.line == 1


def test_out_of_order_strict_and_sorted():
    text = "5 a b\n3 b c\n"
    with pytest.raises(OutOfOrderTimestamp) as info:
        parse(text)
    assert info.value.line == 2
    net = parse(text, strict_order=False, sort_buffer=True)
    assert [e.t_orig for e in net.events] == [0, 2]


def test_config_validation():
    with pytest.raises(ValueError) as info:
        IngestConfig(format="xml", time_divisor=0, sort_buffer=True)
    msg = str(info.value)
    assert "format" in msg and "time_divisor" in msg and "mutually exclusive" in msg


def test_stream_is_single_use():
    stream = parse_stream(io.StringIO("0 a b\n"))
    assert len(list(stream)) == 1
    with pytest.raises(RuntimeError):
        list(stream)


def test_node_groups(tmp_path):
    p = tmp_path / "groups.txt"
    p.write_text("a 1A\nb,2B\n")
    g = NodeGroups.read(p)
    assert g["a"] == "1A" and g.members("2B") == ["b"]
    assert g.unused(["a"]) == ["b"]
    assert g.group_names() == ["1A", "2B"]


edge_lists = st.lists(
    st.tuples(st.sampled_from(["a", "b", "c", "d"]), st.sampled_from(["a", "b", "c", "d"]), st.integers(0, 5)),
    max_size=30,
)


@pytest.mark.parametrize("fmt", ["csv", "sociopatterns", "jsonl"])
@given(raw=edge_lists)
def test_round_trip(fmt, raw):
    t, events = 0, []
    for a, b, dt in raw:
        t += dt
        if a != b:
            events.append(TemporalEdge(a, b, t))
    buf = io.StringIO()
    write_stream(events, buf, fmt)
    back = read_network(io.StringIO(buf.getvalue()), IngestConfig(format=fmt, rebase=False)).events
    assert back == events


def test_sociopatterns_round_trip_keeps_groups():
    net = parse("20 a b 1A 2B\n40 b c 2B 1A\n", time_divisor=20)
    buf = io.StringIO()
    write_stream(net.events, buf, "sociopatterns", net.groups)
    again = parse(buf.getvalue())
    assert again.events == net.events and again.groups.labels == net.groups.labels


def test_synth_examples():
    assert synth_stream([(10, 0, 5)], seed=1) == []
    a = synth_stream([(100, 2, 10)], seed=4)
    assert len(a) == 200 and a == synth_stream([(100, 2, 10)], seed=4)
    assert a != synth_stream([(100, 2, 10)], seed=5)
    assert all(e.source != e.target for e in a)
    assert [e.t_orig for e in a] == sorted(e.t_orig for e in a)


def test_synth_fractional_rate_is_seeded():
    a = synth_stream([(200, 0.5, 4)], seed=9)
    assert a == synth_stream([(200, 0.5, 4)], seed=9)
    assert 50 < len(a) < 150


def test_data_dir_env(monkeypatch, tmp_path):
    monkeypatch.setenv("CHRONOSLICE_DATA", str(tmp_path))
    assert data_dir() == tmp_path
    assert find_dataset("nothing.csv") is None
    (tmp_path / "x.csv.gz").write_bytes(b"")
    assert find_dataset("x.csv") == tmp_path / "x.csv.gz"


def test_primary_school_meta(primary_school):
    meta = primary_school.meta
    assert (meta.node_count, meta.edge_count, meta.timestamp_count) == (242, 125_773, 5_846)
    assert len(primary_school.groups.group_names()) == 11
