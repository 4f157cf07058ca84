import json
import subprocess
import sys

import pytest

from chronoslice.cli import main
from chronoslice.slicer import load_schedule


@pytest.fixture
def toy(tmp_path):
    p = tmp_path / "toy.txt"
    p.write_text("".join(f"{t} a{t % 3} b{t % 5} 1A 2B\n" for t in range(0, 600, 2)))
    return p


def test_slice(toy, tmp_path, capsys):
    out = tmp_path / "s.jsonl"
    assert main(["slice", str(toy), "--wsize", "50", "--schedule", str(out), "--summary", str(tmp_path / "sum.json"),
                 "--events", str(tmp_path / "ev.csv")]) == 0
    records = load_schedule(out)
    summary = json.loads((tmp_path / "sum.json").read_text())
    assert summary["slices"] == len(records) and summary["events_in"] == 300
    assert (tmp_path / "ev.csv").read_text().startswith("source,target,t_display,slice_index\n")
    assert "slices" in capsys.readouterr().out


def test_uniform_tau_one_is_identity(toy, tmp_path):
    ev = tmp_path / "ev.csv"
    assert main(["slice", str(toy), "--method", "uniform", "--tau", "1", "--schedule", str(tmp_path / "s.jsonl"),
                 "--events", str(ev)]) == 0
    ts = [int(line.split(",")[2]) for line in ev.read_text().splitlines()[1:]]
    assert ts == list(range(0, 600, 2))
    assert load_schedule(tmp_path / "s.jsonl")[0].display_width == 599


def test_validation_lists_every_error(toy, capsys):
    code = main(["slice", str(toy), "--wsize", "0", "--ff", "1.5", "--delta", "2", "--schedule", "x"])
    err = capsys.readouterr().err
    assert code == 1
    assert "--wsize" in err and "--ff" in err and "--delta" in err
    assert err.count("\n") == 1


def test_usage_error_exit_code(capsys):
    assert main(["nosuch"]) == 1
    assert main(["synth", "--segments", "10:x", "--output", "/dev/null"]) == 1


def test_data_error(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("5 a b\n3 a b\n")
    assert main(["slice", str(p), "--schedule", str(tmp_path / "s.jsonl")]) == 2
    assert "line 2" in capsys.readouterr().err
    p.write_text("5 a\n")
    assert main(["slice", str(p), "--schedule", str(tmp_path / "s.jsonl")]) == 2


def test_io_error(toy, tmp_path, capsys):
    assert main(["slice", str(tmp_path / "missing.txt"), "--schedule", str(tmp_path / "s.jsonl")]) == 3
    assert main(["slice", str(toy), "--schedule", str(tmp_path / "no" / "s.jsonl")]) == 3


def test_render_stats_compare_synth(toy, tmp_path):
    assert main(["render", str(toy), "--layout", "msv", "--order", "degree", "--elide-gaps", "3",
                 "--svg", str(tmp_path / "a.svg")]) == 0
    assert (tmp_path / "a.svg").read_text().startswith("<?xml")
    assert main(["stats", str(toy), "--json", str(tmp_path / "s.json"), "--series", str(tmp_path / "s.csv")]) == 0
    assert json.loads((tmp_path / "s.json").read_text())["ecdf"]["timestamps"] > 0
    assert main(["compare", str(toy), "--uniform", "2", "--json", str(tmp_path / "c.json"),
                 "--csv", str(tmp_path / "c.csv")]) == 0
    names = [r["strategy"] for r in json.loads((tmp_path / "c.json").read_text())["strategies"]]
    assert names == ["ours(w=100,ff=0.99)", "res-1", "res-2", "bvc"]
    assert main(["synth", "--segments", "50:1:5,50:20:10,50:1:5", "--seed", "3",
                 "--output", str(tmp_path / "syn.csv")]) == 0
    assert main(["slice", str(tmp_path / "syn.csv"), "--format", "csv", "--wsize", "10",
                 "--schedule", str(tmp_path / "syn.jsonl")]) == 0


def test_module_entry_point():
    done = subprocess.run([sys.executable, "-m", "chronoslice", "--version"], capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.strip()
