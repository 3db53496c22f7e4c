#!/usr/bin/env python3
"""Regenerate data/*.jsonl from the KnotInfo table shipped with the
`database_knotinfo` pip package.

    pip install database_knotinfo
    python3 scripts/build_dataset.py

Knots are renamed to Rolfsen's table: KnotInfo lists the Perko pair once, so
KnotInfo 10_162..10_165 are Rolfsen 10_163..10_166.
"""

import csv
import json
import os
import re
import sys

import database_knotinfo

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SPECIAL = {"11n_42": "KT", "11n_34": "Conway"}
CSV_NAME = "knotinfo_data_complete.csv"


def rolfsen_name(name):
    c, i = name.split("_")
    if c == "10" and int(i) >= 162:
        return f"10_{int(i) + 1}"
    return name


def pd_text(pd):
    tuples = json.loads(pd)
    return " ".join("X({},{},{},{})".format(*t) for t in tuples)


def small_int(text):
    text = text.strip()
    return int(text) if re.fullmatch(r"\d+", text) else None


def record(row, name):
    fibered = {"Y": True, "N": False}.get(row["fibered"].strip())
    bridge = small_int(row["bridge_index"])
    return {
        "name": name,
        "pd": pd_text(row["pd_notation"]),
        "fibered": fibered,
        "u": small_int(row["unknotting_number"]),
        "rank": 2 if bridge == 2 else None,
        "tunnel": small_int(row["tunnel_number"]),
        "delta": row["alexander_polynomial"].strip() or None,
        "source": f"KnotInfo {row['name']}" + ("" if name == row["name"] else f" (listed here as {name})"),
    }


def load_rows():
    path = os.path.join(os.path.dirname(database_knotinfo.__file__), "csv_data", CSV_NAME)
    csv.field_size_limit(sys.maxsize)
    with open(path, newline="") as fh:
        yield from csv.DictReader(fh, delimiter="|")


HEADER = [
    "# Prime knots in Rolfsen table order; one JSON object per line.",
    "# pd, fibered, unknotting number (u), tunnel number and Alexander polynomial",
    "# (delta, cross-check only) are taken from KnotInfo; rank is 2 exactly for",
    "# two-bridge knots and null otherwise. A range such as [2,3] for u is null.",
]


def write(path, records):
    with open(path, "w") as fh:
        for line in HEADER:
            fh.write(line + "\n")
        for r in records:
            fh.write(json.dumps(r) + "\n")
    print(f"{path}: {len(records)} records")


def main():
    table, special = [], []
    for row in load_rows():
        name = row["name"]
        if name in SPECIAL:
            special.append(record(row, SPECIAL[name]))
            continue
        m = re.fullmatch(r"(\d+)_(\d+)", name)
        if not m or not (3 <= int(m.group(1)) <= 10):
            continue
        table.append(record(row, rolfsen_name(name)))
    data = os.path.join(ROOT, "data")
    os.makedirs(data, exist_ok=True)
    write(os.path.join(data, "knots_10.jsonl"), table)
    write(os.path.join(data, "knots_9.jsonl"), [r for r in table if int(r["name"].split("_")[0]) <= 9])
    special.sort(key=lambda r: r["name"] != "KT")
    write(os.path.join(data, "special.jsonl"), special)


if __name__ == "__main__":
    main()
