import bisect
import re
from pathlib import Path

import pytest

from chronoslice.baselines import uniform_slices
from chronoslice.core import RemappedEvent, TemporalEdge
from chronoslice.ingest import NodeGroups
from chronoslice.layout import (
    LayoutSpec,
    UnknownNode,
    column_map,
    order_nodes,
    render,
    render_msv,
    render_tam,
)
from chronoslice.slicer import SlicerConfig, slice_stream

GOLDEN = Path(__file__).parent / "golden"

TOY = [("A", "B", 0), ("A", "B", 1), ("B", "C", 1), ("A", "C", 2), ("C", "D", 3), ("B", "D", 3)]


def remapped(triples, slice_index=0):
    return [RemappedEvent(a, b, t, slice_index) for a, b, t in triples]


def lines(svg):
    return re.findall(r'<line x1="([\d.]+)" y1="([\d.]+)" x2="([\d.]+)" y2="([\d.]+)" stroke="([^"]+)"[^>]*data-slice', svg)


def squares(svg):
    return re.findall(r'<rect x="([\d.]+)" y="([\d.]+)" width="[\d.]+" height="[\d.]+" fill="([^"]+)" data-slice="(\d+)"', svg)


class TestOrdering:
    def test_appearance(self):
        rows = order_nodes([TemporalEdge("B", "C", 0), TemporalEdge("A", "B", 1)])
        assert rows.rows == {"B": 0, "C": 1, "A": 2}

    def test_degree_ties_lexicographic(self):
        ev = remapped([("c", "a", 0), ("b", "d", 0), ("a", "b", 1)])
        rows = order_nodes(ev, "degree")
        assert list(rows.rows) == ["a", "b", "c", "d"]

    def test_lexicographic(self):
        assert list(order_nodes(remapped([("z", "m", 0), ("b", "a", 1)]), "lexicographic").rows) == ["a", "b", "m", "z"]

    def test_external_file(self, tmp_path):
        p = tmp_path / "order.txt"
        p.write_text("# rows from an external run\nD\nB\nA\nC\n")
        rows = order_nodes(remapped(TOY), "external-file", order_file=p)
        assert list(rows.rows) == ["D", "B", "A", "C"]

    def test_external_file_missing_node(self, tmp_path):
        p = tmp_path / "order.txt"
        p.write_text("C\nA\n")
        with pytest.warns(UnknownNode):
            rows = order_nodes(remapped(TOY), "external-file", order_file=p)
        assert list(rows.rows) == ["C", "A", "B", "D"]

    def test_group_bands(self):
        groups = NodeGroups({"A": "2B", "B": "1A", "C": "2B"})
        rows = order_nodes(remapped(TOY), groups=groups)
        assert rows.rows == {"B": 0, "A": 1, "C": 2, "D": 3}
        assert rows.bands == [("1A", 0, 0), ("2B", 1, 2), ("other", 3, 3)]


class TestMsv:
    def test_single_edge(self):
        svg = render_msv(remapped([("A", "B", 0)]), LayoutSpec(kind="msv", cell=10, margin=0)).to_svg()
        assert lines(svg) == [("5", "5", "5", "15", "#1f5fa8")]

    def test_golden_toy(self):
        events = uniform_slices([TemporalEdge(*t) for t in TOY], 1).events
        svg = render_msv(events, LayoutSpec(kind="msv", cell=10, margin=10), (0, 3)).to_svg()
        assert svg == (GOLDEN / "toy_msv.svg").read_text()

    def test_resolution_two_merges(self):
        res = uniform_slices([TemporalEdge(*t) for t in TOY], 2)
        canvas = render_msv(res.events, LayoutSpec(kind="msv"))
        assert canvas.marks == 5

    def test_slice_colours_alternate(self):
        ev = remapped([("A", "B", 0)], 0) + remapped([("A", "B", 1)], 1) + remapped([("A", "B", 2)], 2)
        svg = render_msv(ev, LayoutSpec(kind="msv", slice_palette=["red", "blue"])).to_svg()
        assert [l[4] for l in lines(svg)] == ["red", "blue", "red"]


class TestTam:
    def test_continuity(self):
        svg = render_tam(remapped([("A", "B", 0), ("A", "B", 1), ("A", "B", 2)]), LayoutSpec(cell=4, margin=0)).to_svg()
        a_row = sorted(float(x) for x, y, _, _ in squares(svg) if y == "0")
        assert a_row == [0.0, 4.0, 8.0]

    def test_blank_column(self):
        svg = render_tam(remapped([("A", "B", 0), ("A", "B", 2)]), LayoutSpec(cell=4, margin=0)).to_svg()
        xs = {x for x, _, _, _ in squares(svg)}
        assert xs == {"0", "8"}

    def test_no_phantom_marks(self):
        ev = remapped([("A", "B", 0), ("B", "C", 0), ("A", "C", 5)])
        canvas = render_tam(ev, LayoutSpec(cell=1, margin=0))
        cells = {(n, e.t_display) for e in ev for n in (e.source, e.target)}
        assert canvas.marks == len(cells) == len(squares(canvas.to_svg()))

    def test_intensity_option(self):
        ev = remapped([("A", "B", 0), ("A", "C", 0), ("A", "B", 1)])
        svg = render_tam(ev, LayoutSpec(intensity=True)).to_svg()
        assert "fill-opacity" in svg


def test_column_map_and_elision():
    cols, breaks, n = column_map([0, 1, 7], 0, 8, None)
    assert n == 8 and cols[7] == 7 and breaks == []
    cols, breaks, n = column_map([0, 1, 7], 0, 8, 3)
    assert n == 4 and cols == {0: 0, 1: 1, 7: 3} and breaks == [(2, 2, 5)]
    cols, breaks, n = column_map([0, 3], 0, 4, 3)
    assert n == 4 and breaks == []


def test_column_count_matches_display_span():
    ev = slice_stream([TemporalEdge("a", "b", t) for t in range(0, 500, 7)], SlicerConfig(w_size=20)).events
    canvas = render_tam(ev, LayoutSpec(cell=1, margin=0))
    assert canvas.width == ev[-1].t_display - ev[0].t_display + 1


def test_spec_validation():
    for bad in (dict(kind="matrix"), dict(slice_palette=[]), dict(gap_elision_threshold=1), dict(order="external-file")):
        with pytest.raises(ValueError):
            LayoutSpec(**bad)


def test_render_deterministic(primary_school):
    res = slice_stream(primary_school.events, SlicerConfig(w_size=100, alpha=0.99))
    spec = LayoutSpec(kind="msv", groups=primary_school.groups, group_filter=["2A", "2B", "4A"], cell=2)
    a = render(res.events, spec).to_svg()
    b = render(res.events, spec).to_svg()
    assert a == b


def test_colour_bands_match_slices(primary_school):
    res = slice_stream(primary_school.events, SlicerConfig(w_size=100, alpha=0.9))
    svg = render_tam(res.events, LayoutSpec()).to_svg()
    drawn = {int(s) for _, _, _, s in squares(svg)}
    times = [e.t_orig for e in primary_school.events]
    non_empty = {r.index for r in res.records
                 if bisect.bisect_left(times, r.t_end_orig) > bisect.bisect_left(times, r.t_ini)}
    assert drawn == non_empty


def test_lunch_burst_between_classes(primary_school):
    groups = primary_school.groups
    res = slice_stream(primary_school.events, SlicerConfig(w_size=100, alpha=0.99))
    sel = {"2A", "2B", "4A"}
    per_slice = {}
    for e in res.events:
        ga, gb = groups[e.source], groups[e.target]
        if ga in sel and gb in sel and ga != gb:
            per_slice[e.slice_index] = per_slice.get(e.slice_index, 0) + 1
    peak = max(per_slice, key=per_slice.get)
    rec = res.records[peak]

    def hour(t):
        return ((primary_school.raw_origin // 20 + t) * 20 % 86400) / 3600

    # the slice holding the most inter-class contacts overlaps the 12:00-14:00 lunch period
    assert hour(rec.t_ini) < 14 and hour(rec.t_end_orig - 1) > 12
