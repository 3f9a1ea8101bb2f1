"""Pilot run that fixes the ensemble thresholds used by the acceptance suite.

Uses seeds 1001..1050 (disjoint from the acceptance seeds 1..50) and writes
calibration/pilot.json.  Run once; the output is committed.

    python3 scripts/pilot_calibration.py
"""

import json
import math
import statistics
import sys
import time
from pathlib import Path

from robustasym.checks import check_avg_degree, check_common_neighbors, check_small_set_density
from robustasym.generators import GnpdParams, GnpParams, default_degree, gen_gnp, gen_gnpd
from robustasym.search import exact_delta_2, transposition_stats

PILOT_SEEDS = range(1001, 1051)
OUT = Path(__file__).resolve().parent.parent / "calibration" / "pilot.json"


def lemma2_pilot():
    n, p = 5000, 20 / 5000
    d = default_degree(n, p)
    rows = []
    for seed in PILOT_SEEDS:
        G = gen_gnpd(GnpdParams(n, p, d, seed))
        avg = check_avg_degree(G, p, d)
        cn = check_common_neighbors(G)
        dens = check_small_set_density(G, n // (d * d))
        rows.append({
            "seed": seed,
            "min_degree": avg.statistics["min_degree"],
            "avg_degree_deviation": avg.statistics["deviation"],
            "max_common_neighbors": cn.statistics["max_common_neighbors"],
            "density": dens.verdict,
        })
        print(f"lemma2 seed {seed}: {rows[-1]}", file=sys.stderr)
    devs = [r["avg_degree_deviation"] for r in rows]
    return {
        "n": n, "p": p, "d": d, "seeds": [PILOT_SEEDS.start, PILOT_SEEDS.stop - 1],
        "min_degree_ok": sum(r["min_degree"] >= d for r in rows),
        "avg_degree_max_deviation_in_sqrt_pn": max(devs) / math.sqrt(p * n),
        "common_neighbors_le_2": sum(r["max_common_neighbors"] <= 2 for r in rows),
        "max_common_neighbors_histogram": {
            str(c): sum(r["max_common_neighbors"] == c for r in rows)
            for c in sorted({r["max_common_neighbors"] for r in rows})
        },
        "density_pass": sum(r["density"] == "pass" for r in rows),
        "rows": rows,
    }


def delta2_pilot():
    n, p = 300, 0.3
    out = []
    for seed in PILOT_SEEDS:
        G = gen_gnp(GnpParams(n, p, seed))
        e = exact_delta_2(G)
        mean = transposition_stats(G).mean_normalized(G.n, G.m)
        out.append({"seed": seed, "delta2": float(e.delta), "mean_normalized": float(mean)})
    return {
        "n": n, "p": p, "seeds": [PILOT_SEEDS.start, PILOT_SEEDS.stop - 1],
        "min_delta2": min(r["delta2"] for r in out),
        "median_delta2": statistics.median(r["delta2"] for r in out),
        "max_mean_rel_error": max(abs(r["mean_normalized"] - 2 * (1 - p)) / (2 * (1 - p)) for r in out),
        "rows": out,
    }


def main():
    t0 = time.time()
    doc = {"delta2": delta2_pilot(), "lemma2": lemma2_pilot()}
    doc["delta2"]["frozen_threshold"] = 0.7
    doc["lemma2"]["frozen_thresholds"] = {"min_degree": 50, "common_neighbors": 45, "small_set_density": 45,
                                          "avg_degree_slack": 5.0}
    OUT.parent.mkdir(exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {OUT} in {time.time() - t0:.0f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
