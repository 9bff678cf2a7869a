"""Experiment orchestration: configs, multi-seed runs, CSV traces, and
bound-versus-empirical summaries.

Outputs per experiment:
  traces/<algorithm>__<dataset>__seed<k>.csv   one row per logged round
  aggregate.csv                                mean cumulative mistakes
  summary.json                                 final means + bound checks

CSV trace schema: algorithm,dataset,seed,t,cum_mistakes
Aggregate schema:  algorithm,dataset,t,mean_cum_mistakes
"""

from __future__ import annotations

import csv
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bounds as bounds_mod
from .core import (
    ExampleStream,
    MistakeTrace,
    load_dataset,
    probe_strong_separability,
    run_bandit_session,
    run_fullinfo_session,
    verify_strong_separability,
    verify_weak_separability,
)
from .instances import gen_fullinfo_lower_instance, gen_sector_dataset, gen_bandit_lower_instance, gen_wedge_dataset
from .kernels import make_kernel
from .learners import (
    BanditronLearner,
    KernelizedLearner,
    MulticlassPerceptron,
    NearestNeighborLearner,
    OvaLearner,
)

OUTPUT_ENV_VAR = "BANDITSEP_OUT"

#: exploration rates tried for the epsilon-greedy baseline
BANDITRON_ETA_GRID = (0.02, 0.01, 0.005, 0.002, 0.001, 0.0005)


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: dict  # {"generator": name, "params": {...}} or {"file": path}
    learners: tuple  # learner spec strings
    T: int
    seeds: tuple
    log_every: Optional[int] = None
    out_dir: Optional[str] = None

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        if self.log_every is not None and self.log_every < 1:
            raise ValueError("log_every must be >= 1")

    @property
    def effective_log_every(self) -> int:
        if self.log_every is not None:
            return self.log_every
        return 100 if self.T >= 100_000 else 1

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as f:
            raw = json.load(f)
        seeds = raw.get("seeds")
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        return cls(
            dataset=raw["dataset"],
            learners=tuple(raw["learners"]),
            T=int(raw["T"]),
            seeds=tuple(int(s) for s in seeds),
            log_every=raw.get("log_every"),
            out_dir=raw.get("out_dir"),
        )


_SPEC_RE = re.compile(r"^([a-z-]+)(?:\((.*)\))?$")


def parse_learner_spec(spec: str) -> tuple[str, dict]:
    """'kernelized(kernel=rational)' -> ('kernelized', {'kernel': 'rational'})."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise ValueError(f"malformed learner spec {spec!r}")
    name, args = m.group(1), {}
    if m.group(2):
        for part in m.group(2).split(","):
            k, _, v = part.partition("=")
            if not _:
                raise ValueError(f"malformed learner argument {part!r} in {spec!r}")
            args[k.strip()] = v.strip()
    return name, args


def build_learner(spec: str, K: int, d: int):
    """Instantiate a learner from its config string."""
    name, args = parse_learner_spec(spec)
    if name == "ova":
        return OvaLearner(K, d)
    if name == "kernelized":
        return KernelizedLearner(K, d, make_kernel(args.get("kernel", "rational"),
                                                  **{k: v for k, v in args.items() if k != "kernel"}))
    if name == "perceptron":
        return MulticlassPerceptron(K, d)
    if name == "nearest-neighbor":
        return NearestNeighborLearner(K, d, gamma=float(args["gamma"]))
    if name == "banditron":
        return BanditronLearner(K, d, eta=float(args["eta"]))
    raise ValueError(f"unknown learner {name!r}")


def is_fullinfo(spec: str) -> bool:
    return parse_learner_spec(spec)[0] == "perceptron"


GENERATORS = {
    "wedge": lambda T, seed, kind="strong", **_: gen_wedge_dataset(kind, T, seed),
    "sector": lambda T, seed, gamma=0.3, K=3, **_: gen_sector_dataset(T, float(gamma), seed, K=int(K)),
    "bandit-lower": lambda T, seed, K=3, R=1.0, gamma=0.1, **_: gen_bandit_lower_instance(
        int(K), float(R), float(gamma), seed),
    "fullinfo-lower": lambda T, seed, K=2, R=1.0, gamma=0.1, **_: gen_fullinfo_lower_instance(
        int(K), float(R), float(gamma), seed),
}


def materialize_dataset(spec: dict, T: int, seed: int) -> tuple[str, ExampleStream]:
    """(dataset tag for CSV rows, stream). Generator datasets are re-drawn
    per seed; file datasets are fixed across seeds."""
    if "file" in spec:
        stream = load_dataset(spec["file"])
        return Path(spec["file"]).stem, stream
    name = spec["generator"]
    if name not in GENERATORS:
        raise ValueError(f"unknown generator {name!r}")
    params = dict(spec.get("params", {}))
    stream = GENERATORS[name](T, seed, **params)
    if T and len(stream) > T:
        stream = ExampleStream(
            K=stream.K, d=stream.d, examples=list(stream.examples)[:T],
            gamma=stream.gamma, radius=stream.radius, witness=stream.witness,
        )
    return name, stream


def _sanitize(s: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]", "_", s)


def run_experiment(config: ExperimentConfig) -> dict:
    """Run every (learner, seed) cell; returns a manifest of written files."""
    out_root = Path(
        config.out_dir or os.environ.get(OUTPUT_ENV_VAR) or "runs"
    )
    trace_dir = out_root / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)
    stride = config.effective_log_every

    trace_files = []
    finals: dict[str, list[int]] = {}
    curves: dict[str, dict[int, list[int]]] = {}
    ds_meta = None
    for spec in config.learners:
        for seed in config.seeds:
            tag, stream = materialize_dataset(config.dataset, config.T, seed)
            if ds_meta is None:
                ds_meta = {
                    "name": tag, "K": stream.K, "d": stream.d,
                    "gamma": stream.gamma, "R": stream.radius,
                    "mode": stream.witness.kind if stream.witness else None,
                }
            learner = build_learner(spec, stream.K, stream.d)
            if is_fullinfo(spec):
                trace = run_fullinfo_session(learner, stream, seed=seed)
            else:
                trace = run_bandit_session(learner, stream, seed)
            fname = trace_dir / f"{_sanitize(spec)}__{_sanitize(tag)}__seed{seed}.csv"
            _write_trace_csv(fname, spec, tag, seed, trace, stride)
            trace_files.append(str(fname))
            finals.setdefault(spec, []).append(trace.mistakes)
            series = curves.setdefault(spec, {})
            for t, _, _, cum in trace.records:
                if t % stride == 0 or t == trace.rounds:
                    series.setdefault(t, []).append(cum)

    agg_path = out_root / "aggregate.csv"
    with open(agg_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["algorithm", "dataset", "t", "mean_cum_mistakes"])
        for spec in config.learners:
            for t in sorted(curves.get(spec, {})):
                vals = curves[spec][t]
                w.writerow([spec, ds_meta["name"], t, repr(sum(vals) / len(vals))])

    summary = {
        "dataset": ds_meta,
        "T": config.T,
        "seeds": list(config.seeds),
        "final_mean_mistakes": {
            spec: sum(v) / len(v) for spec, v in finals.items()
        },
        "bounds": _bound_checks(config.learners, ds_meta, finals),
    }
    summary_path = out_root / "summary.json"
    with open(summary_path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
    return {
        "traces": trace_files,
        "aggregate": str(agg_path),
        "summary": str(summary_path),
    }


def _write_trace_csv(path, spec, tag, seed, trace: MistakeTrace, stride: int):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["algorithm", "dataset", "seed", "t", "cum_mistakes"])
        for t, _, _, cum in trace.records:
            if t % stride == 0 or t == trace.rounds:
                w.writerow([spec, tag, seed, t, cum])


def _bound_checks(learners, ds_meta, finals) -> dict:
    """Proven-bound flags for learners the theory covers on this dataset."""
    checks = {}
    if ds_meta is None or ds_meta["gamma"] is None:
        return checks
    K, R, gamma = ds_meta["K"], ds_meta["R"], ds_meta["gamma"]
    for spec, vals in finals.items():
        name, args = parse_learner_spec(spec)
        mean = sum(vals) / len(vals)
        bound = None
        if name == "ova" and ds_meta["mode"] == "strong":
            bound = bounds_mod.expected_mistakes_strong_upper(K, R, gamma).value
        elif name == "perceptron":
            bound = bounds_mod.perceptron_mistakes_upper(R, gamma).value
        elif name == "nearest-neighbor":
            bound = bounds_mod.nn_mistakes_upper(K, R, float(args["gamma"]), ds_meta["d"]).value
        if bound is not None:
            checks[spec] = {"bound": bound, "mean": mean, "ok": mean <= bound}
    return checks


# ---------------------------------------------------------------------------
# dataset verification report

def verify_dataset(path) -> dict:
    """Run both separability verifiers against the file's embedded witness."""
    stream = load_dataset(path)
    report = {
        "K": stream.K,
        "d": stream.d,
        "gamma": stream.gamma,
        "R": stream.radius,
        "T": len(stream),
        "max_norm": max((float(np.linalg.norm(ex.x)) for ex in stream.examples), default=0.0),
        "witness": stream.witness is not None,
    }
    if stream.witness is None:
        report["notice"] = "no witness block; separability checks skipped"
        return report
    ok_w, viol_w = verify_weak_separability(stream.examples, stream.witness, stream.gamma)
    report["weak"] = {"pass": ok_w, "violation": viol_w}
    ok_s, viol_s = verify_strong_separability(stream.examples, stream.witness, stream.gamma)
    if ok_s:
        report["strong"] = {"pass": True, "violation": None}
    else:
        # the witness itself may be weak-only; fall back to a probe
        probed = probe_strong_separability(list(stream.examples), stream.K, stream.gamma)
        report["strong"] = {
            "pass": probed,
            "violation": viol_s,
            "probe": "found" if probed else "refuted-up-to-probe",
        }
    return report
