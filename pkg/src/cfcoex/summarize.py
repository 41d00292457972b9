"""Aggregate a run directory's CSV files into one summary.csv.

Per (strategy, precoder, policy) combination the summary reports, with the
stat column naming each statistic:

  * metric se      — per-eMBB-UE spectral efficiency: quantiles, mean, count;
  * metric sum_se  — per-block sum SE (from blocks.csv when present): same;
  * metric eps     — per-URLLC-UE error probability: quantiles, mean, count,
                     availability (fraction of (UE, drop) pairs at or below
                     eps_target) and excluded_pairs (UEs never active in a
                     drop, whose error probability is undefined);
  * metric outage  — per-drop eMBB service-outage fraction: mean, count.

eps_target is read from the run's config.json (falling back to the package
default). An empty input directory yields a single explicit marker row
rather than an empty file.
"""

import csv
import json
import logging
import os

import numpy as np

log = logging.getLogger(__name__)

SUMMARY_HEADER = ("strategy", "precoder", "policy", "metric", "stat", "value")
QUANTS = ((0.05, "q05"), (0.25, "q25"), (0.50, "q50"), (0.75, "q75"), (0.95, "q95"))


def load_rows(path):
    """Rows of one result CSV as dicts, with value parsed to float."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        rows = list(csv.DictReader(f))
    for r in rows:
        r["value"] = float(r["value"])
    return rows


def _collect(rows, table):
    for r in rows:
        key = (r["strategy"], r["precoder"], r["policy"])
        table.setdefault(key, {}).setdefault(r["metric"], []).append(r["value"])


def summarize_dir(in_dir, out_path=None, eps_target=None):
    """Write summary.csv for a run directory; returns the output path."""
    if eps_target is None:
        eps_target = 1e-5
        cfg_path = os.path.join(in_dir, "config.json")
        if os.path.exists(cfg_path):
            with open(cfg_path, "r", encoding="utf-8") as f:
                eps_target = float(json.load(f).get("eps_target", eps_target))

    table = {}
    res_path = os.path.join(in_dir, "results.csv")
    if os.path.exists(res_path):
        _collect(load_rows(res_path), table)
    blk_path = os.path.join(in_dir, "blocks.csv")
    if os.path.exists(blk_path):
        _collect(load_rows(blk_path), table)

    out_path = out_path or os.path.join(in_dir, "summary.csv")
    with open(out_path, "w", encoding="utf-8", newline="") as f:
        wr = csv.writer(f, lineterminator="\n")
        wr.writerow(SUMMARY_HEADER)
        if not table:
            wr.writerow(("-", "-", "-", "-", "empty", "1"))
            log.warning("no result rows under %s; wrote empty-summary marker", in_dir)
            return out_path
        for key in sorted(table):
            metrics = table[key]

            def put(metric, stat, value):
                wr.writerow(key + (metric, stat, f"{float(value):.9g}"))

            for metric in ("se", "sum_se", "eps"):
                vals = metrics.get(metric)
                if not vals:
                    continue
                arr = np.asarray(vals)
                for q, name in QUANTS:
                    put(metric, name, np.quantile(arr, q))
                put(metric, "mean", arr.mean())
                put(metric, "count", arr.size)
            if "eps" in metrics or "eps_excluded" in metrics:
                eps = np.asarray(metrics.get("eps", []))
                put("eps", "availability",
                    float((eps <= eps_target).mean()) if eps.size else 0.0)
                put("eps", "excluded_pairs", len(metrics.get("eps_excluded", ())))
            if "outage" in metrics:
                arr = np.asarray(metrics["outage"])
                put("outage", "mean", arr.mean())
                put("outage", "count", arr.size)
    log.info("wrote %s", out_path)
    return out_path
