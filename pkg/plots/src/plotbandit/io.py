"""Readers for the experiment output files.

These parse the published file formats only:
  trace CSV      algorithm,dataset,seed,t,cum_mistakes
  aggregate CSV  algorithm,dataset,t,mean_cum_mistakes
  dataset file   header "K d gamma R mode", rows "x_1 ... x_d y",
                 optional "W" witness block of K rows
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

TRACE_COLUMNS = ("algorithm", "dataset", "seed", "t", "cum_mistakes")
AGGREGATE_COLUMNS = ("algorithm", "dataset", "t", "mean_cum_mistakes")


class SchemaError(ValueError):
    pass


def _check_columns(path, fieldnames, expected):
    missing = [c for c in expected if c not in (fieldnames or [])]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")


def read_trace_csv(path) -> list[dict]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        _check_columns(path, reader.fieldnames, TRACE_COLUMNS)
        return [
            {
                "algorithm": row["algorithm"],
                "dataset": row["dataset"],
                "seed": int(row["seed"]),
                "t": int(row["t"]),
                "cum_mistakes": int(row["cum_mistakes"]),
            }
            for row in reader
        ]


def read_aggregate_csv(path) -> list[dict]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        _check_columns(path, reader.fieldnames, AGGREGATE_COLUMNS)
        return [
            {
                "algorithm": row["algorithm"],
                "dataset": row["dataset"],
                "t": int(row["t"]),
                "mean_cum_mistakes": float(row["mean_cum_mistakes"]),
            }
            for row in reader
        ]


def read_dataset_file(path) -> dict:
    """Dataset file -> {K, d, gamma, R, mode, X (T,d), y (T,)}."""
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    K, d, gamma, R, mode = lines[0].split()
    K, d = int(K), int(d)
    X, y = [], []
    i = 1
    while i < len(lines):
        if lines[i] == "W":
            i += 1 + K  # witness block is irrelevant for plotting
            continue
        parts = lines[i].split()
        X.append([float(v) for v in parts[:-1]])
        y.append(int(parts[-1]))
        i += 1
    return {
        "K": K,
        "d": d,
        "gamma": float(gamma),
        "R": float(R),
        "mode": mode,
        "X": np.array(X).reshape(len(y), d) if y else np.zeros((0, d)),
        "y": np.array(y, dtype=int),
    }


def reaggregate(trace_paths, tol: float = 1e-12) -> dict:
    """Recompute mean cumulative mistakes per (algorithm, t) from per-seed
    trace files; keys -> mean."""
    acc: dict[tuple, list[int]] = {}
    for p in sorted(str(q) for q in trace_paths):
        for row in read_trace_csv(p):
            acc.setdefault((row["algorithm"], row["t"]), []).append(row["cum_mistakes"])
    return {k: sum(v) / len(v) for k, v in acc.items()}


def verify_against_traces(aggregate_path, trace_paths, tol: float = 1e-12):
    """Raise if the aggregate file disagrees with a re-aggregation of the
    per-seed traces beyond tol."""
    recomputed = reaggregate(trace_paths)
    for row in read_aggregate_csv(aggregate_path):
        key = (row["algorithm"], row["t"])
        if key not in recomputed:
            raise SchemaError(f"aggregate row {key} has no per-seed backing rows")
        if abs(recomputed[key] - row["mean_cum_mistakes"]) > tol:
            raise SchemaError(
                f"aggregate mean for {key} is {row['mean_cum_mistakes']}, "
                f"re-aggregation gives {recomputed[key]}"
            )


def find_sibling_traces(aggregate_path) -> list[str]:
    """Per-seed trace CSVs in the traces/ directory next to an aggregate."""
    trace_dir = Path(aggregate_path).parent / "traces"
    if not trace_dir.is_dir():
        return []
    return sorted(str(p) for p in trace_dir.glob("*.csv"))
