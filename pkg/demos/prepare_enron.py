"""
Preparing the per-day Enron edge list
=====================================

The slicer reads Enron as ``source,target,time`` with ``time`` a day index.
This script builds that file from any timestamped e-mail edge list:

    python demos/prepare_enron.py raw_edges.txt data/enron.csv

Each input line is ``sender recipient unix_seconds`` (whitespace or comma
separated; lines starting with ``#`` are skipped). Self-mails are dropped,
timestamps are floored to UTC days and counted from the first day, and the
output is sorted by day. Several mails between the same pair on one day stay
separate events; the slicer merges them when drawing.
"""

import csv
import sys

SECONDS_PER_DAY = 86400


def read_raw(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.replace(",", " ").split()
            if len(parts) < 3 or parts[0].startswith("#"):
                continue
            yield parts[0], parts[1], int(float(parts[2]))


def main(src, dst):
    rows = [(a, b, t // SECONDS_PER_DAY) for a, b, t in read_raw(src) if a != b]
    rows.sort(key=lambda r: r[2])
    first = rows[0][2] if rows else 0
    with open(dst, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["source", "target", "time"])
        w.writerows((a, b, day - first) for a, b, day in rows)
    nodes = {n for a, b, _ in rows for n in (a, b)}
    span = rows[-1][2] - first + 1 if rows else 0
    print(f"{len(nodes)} nodes, {len(rows)} edges, {span} days -> {dst}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
