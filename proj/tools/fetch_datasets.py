#!/usr/bin/env python3
"""Fetch the UCI benchmark datasets used by the bench manifest.

The UCI archive itself is often unreachable from build machines, so the files
are taken from two package archives on PyPI that redistribute them verbatim:

  Orange 2.7.8 (Orange/datasets/*.tab): iris, wine, zoo, bupa (liver),
      hayes-roth, monks-1, flare1/flare2 (solar flares)
  keel-ds 0.2.5 (keel_ds/data/balanced/raw/letter.dat): letter recognition

Each dataset is written as a comma-separated file with a header row and the
label in the last column. The solar flare label is the C-class flare count
binarized to none/flare, since the test file contains counts that never
occur in the training file. Identifier columns (zoo animal name, hayes-roth
name, monks instance id) are dropped.

Not available from either archive: abalone, user modelling, bank notes,
SPECT heart. Download those from https://archive.ics.uci.edu/ by hand and
add them to the manifest.

Usage: tools/fetch_datasets.py [output_dir]   (default: ./data)
"""

import csv
import io
import pathlib
import sys
import urllib.request
import zipfile

ORANGE_URL = (
    "https://files.pythonhosted.org/packages/cb/de/"
    "fce623cd2c9062e79f92ad0249332e4d71213e01f1008773ff4ff6dc688a/"
    "Orange-2.7.8-cp27-none-macosx_10_6_intel.whl"
)
KEEL_URL = (
    "https://files.pythonhosted.org/packages/77/88/"
    "c99136c61bb85663bd8cfb328fada55846eb10bd7271058160526e9674bf/"
    "keel_ds-0.2.5-py3-none-any.whl"
)

LETTERS_TRAIN = 2000
LETTERS_TEST = 1000


def fetch(url):
    with urllib.request.urlopen(url) as resp:
        return resp.read()


def read_tab(text, drop=(), label=None, relabel=None):
    """Parse an Orange .tab file (names, types, flags, then data rows)."""
    lines = text.splitlines()
    names = lines[0].split("\t")
    flags = lines[2].split("\t") + [""] * len(names)
    if label is None:
        label = next(n for n, f in zip(names, flags) if "class" in f)
    keep = [i for i, n in enumerate(names) if n not in drop and n != label]
    li = names.index(label)
    rows = []
    for line in lines[3:]:
        if not line.strip():
            continue
        cells = line.split("\t")
        y = cells[li].strip()
        rows.append([cells[i].strip() for i in keep] + [relabel(y) if relabel else y])
    return [names[i] for i in keep] + [label], rows


def flare_label(count):
    return "none" if int(count) == 0 else "flare"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"  {path.name}: {len(rows)} rows")


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)

    print("fetching Orange 2.7.8 wheel")
    orange = zipfile.ZipFile(io.BytesIO(fetch(ORANGE_URL)))

    def tab(name):
        return orange.read(f"Orange/datasets/{name}.tab").decode("utf-8")

    specs = [
        ("iris", "iris", (), None),
        ("wine", "wine", (), None),
        ("zoo", "zoo", ("name",), None),
        ("liver", "bupa", (), None),
        ("hayes-roth_train", "hayes-roth_learn", ("name",), None),
        ("hayes-roth_test", "hayes-roth_test", (), None),
        ("monks-1_train", "monks-1_learn", ("instance",), None),
        ("monks-1_test", "monks-1_test", ("instance",), None),
        ("solar_train", "flare1", ("M_class", "X_class"), "C_class"),
        ("solar_test", "flare2", ("M_class", "X_class"), "C_class"),
    ]
    for out_name, src, drop, label in specs:
        relabel = flare_label if src.startswith("flare") else None
        header, rows = read_tab(tab(src), drop, label, relabel)
        write_csv(out / f"{out_name}.csv", header, rows)

    print("fetching keel-ds wheel")
    keel = zipfile.ZipFile(io.BytesIO(fetch(KEEL_URL)))
    text = keel.read("keel_ds/data/balanced/raw/letter.dat").decode("utf-8")
    names = ["x-box", "y-box", "width", "high", "onpix", "x-bar", "y-bar", "x2bar",
             "y2bar", "xybar", "x2ybr", "xy2br", "x-ege", "xegvy", "y-ege", "yegvx",
             "lettr"]
    rows = [[c.strip() for c in line.split(",")]
            for line in text.splitlines() if line.strip() and not line.startswith("@")]
    write_csv(out / "letters_train.csv", names, rows[:LETTERS_TRAIN])
    write_csv(out / "letters_test.csv", names, rows[LETTERS_TRAIN:LETTERS_TRAIN + LETTERS_TEST])


if __name__ == "__main__":
    main()
