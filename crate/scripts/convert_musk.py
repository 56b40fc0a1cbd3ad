#!/usr/bin/env python3
"""Convert a headerless Musk CSV (label,bag,f1..f166) into the bag CSV format.

The public Musk 1/2 files are distributed in several layouts. This script reads
the one where each row is `label,bag_number,f1,...,f166` (no header) and writes
`bag_id,label,f1,...,f166` with a header row.

usage: convert_musk.py <input.csv> <output.csv>
"""
import csv
import sys


def main(src, dst):
    with open(src, newline="") as fin, open(dst, "w", newline="") as fout:
        rows = list(csv.reader(fin))
        if not rows:
            sys.exit("empty input")
        d = len(rows[0]) - 2
        out = csv.writer(fout, lineterminator="\n")
        out.writerow(["bag_id", "label"] + [f"f{j + 1}" for j in range(d)])
        for row in rows:
            label, bag = row[0], row[1]
            out.writerow([f"bag{int(bag)}", label] + row[2:])


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
