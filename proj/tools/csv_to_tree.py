#!/usr/bin/env python3
"""Convert a two-column CSV of (label, review text) into the pos/ and neg/ tree
read by `polarity`. Labels: 1/+1/pos -> pos, -1/0/neg -> neg. Files are named
p0000.txt / n0000.txt so ids stay unique across labels."""

import argparse
import csv
import pathlib
import sys

POS = {"1", "+1", "pos", "positive"}
NEG = {"-1", "0", "neg", "negative"}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_file", type=pathlib.Path)
    ap.add_argument("out_dir", type=pathlib.Path)
    args = ap.parse_args()

    rows = {"pos": [], "neg": []}
    with args.csv_file.open(encoding="utf-8-sig", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if len(row) < 2:
                continue
            label = row[0].strip().lower()
            if label in POS:
                rows["pos"].append(row[1])
            elif label in NEG:
                rows["neg"].append(row[1])
            else:
                print(f"{args.csv_file}:{lineno}: unknown label {row[0]!r}", file=sys.stderr)
                return 3

    for label, texts in rows.items():
        d = args.out_dir / label
        d.mkdir(parents=True, exist_ok=True)
        for i, text in enumerate(texts):
            (d / f"{label[0]}{i:04d}.txt").write_text(text.rstrip("\n") + "\n", encoding="utf-8")
    print(f"pos={len(rows['pos'])} neg={len(rows['neg'])} -> {args.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
