#!/usr/bin/env python3
# Copyright 2026 The revexp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Recomputes report cells from the per-instance audit logs of a run.

usage: verify_audit.py RUN_DIR [--min-cells N]
"""

import argparse
import json
import math
import pathlib
import re
import sys


def slug(metric):
    return re.sub(r"[^a-z0-9]+", "-", metric.lower()).strip("-")


def rows(path):
    with open(path, encoding="utf-8") as f:
        for line in f:
            fields = line.rstrip("\n").split("\t")
            if fields[-1] != "excluded":
                yield fields


def air(lines):
    flips = [int(f[6]) for f in lines]
    return 100.0 * (1.0 - sum(flips) / len(flips)), len(flips)


def mrr(lines):
    ranks = [int(f[4]) for f in lines]
    # Ranks must agree with the logged perplexities, ties ranking gold last.
    for f, rank in zip(lines, ranks):
        gold = float(f[5])
        cands = [float(x) for x in f[6].split(",")] if f[6] else []
        if 1 + sum(c <= gold for c in cands) != rank:
            raise ValueError("rank does not match perplexities for gold %s" % f[1])
    total = 0.0
    for r in ranks:
        total += 1.0 / r
    return 100.0 * (total / len(ranks)), len(ranks)


def squared_error(lines):
    total = 0.0
    for f in lines:
        d = float(f[4]) - float(f[5])
        total += d * d
    return total / len(lines), len(lines)


def rmse(lines):
    mse, n = squared_error(lines)
    return math.sqrt(mse), n


def mean(lines):
    total = 0.0
    for f in lines:
        total += float(f[2])
    return total / len(lines), len(lines)


RECOMPUTE = {
    "AIR": air,
    "AIR (generated)": air,
    "MRR-AE": mrr,
    "TLAE": squared_error,
    "TLAE (gold rating)": squared_error,
    "Entail": mean,
    "GreedyF1": mean,
    "CondNLL": mean,
    "RMSE": rmse,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("run_dir", type=pathlib.Path)
    ap.add_argument("--min-cells", type=int, default=3)
    args = ap.parse_args()

    report = json.loads((args.run_dir / "report.json").read_text(encoding="utf-8"))
    checked = 0
    bad = 0
    for row in report["rows"]:
        for cell in row["metrics"]:
            path = args.run_dir / "audit" / row["model"] / (slug(cell["name"]) + ".tsv")
            if cell["name"] not in RECOMPUTE or not path.exists():
                continue
            value, n = RECOMPUTE[cell["name"]](list(rows(path)))
            ok = n == cell["samples"] and math.isclose(value, cell["value"], rel_tol=1e-12,
                                                         abs_tol=1e-12)
            checked += 1
            if not ok:
                bad += 1
                print("MISMATCH %s %s: report %.17g (%d) audit %.17g (%d)" %
                      (row["model"], cell["name"], cell["value"], cell["samples"], value, n))
    print("verified %d cells, %d mismatches" % (checked, bad))
    if bad or checked < args.min_cells:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
