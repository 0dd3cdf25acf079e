"""Parallel, deterministic trial execution."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .config import ExperimentConfig
from .experiments import Experiment, Report, build_experiment
from .records import TrialRecord, read_csv, write_csv

_WORKER: Experiment | None = None


def _init_worker(cfg):
    global _WORKER
    _WORKER = build_experiment(cfg)


def _run_one(exp, index, timing):
    t0 = time.perf_counter()
    rec = exp.trial(index, exp.seed(index))
    if timing:
        rec.ms = int(round(1000 * (time.perf_counter() - t0)))
    return rec


def _run_chunk(indices, timing):
    return [_run_one(_WORKER, i, timing) for i in indices]


@dataclass
class RunResult:
    config: ExperimentConfig
    records: list
    report: Report


def run_experiment(cfg: ExperimentConfig, jobs=1, timing=False) -> RunResult:
    """Run every trial; records come back ordered by trial index whatever ``jobs`` is."""
    exp = build_experiment(cfg)
    T = exp.trials
    if jobs <= 1 or T < 2:
        records = [_run_one(exp, i, timing) for i in range(T)]
    else:
        jobs = min(jobs, T)
        step = max(1, -(-T // (4 * jobs)))
        chunks = [range(lo, min(lo + step, T)) for lo in range(0, T, step)]
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(cfg,)) as pool:
            parts = pool.map(_run_chunk, chunks, [timing] * len(chunks))
            records = [r for part in parts for r in part]
        records.sort(key=lambda r: r.trial)
    return RunResult(cfg, records, exp.report(records, timing=timing))


def sidecar_path(csv_path) -> str:
    return str(csv_path) + ".config.toml"


def save_run(result: RunResult, csv_path, timing=False):
    """Write the CSV and, next to it, the config needed to replay any row."""
    write_csv(csv_path, result.records, timing=timing)
    with open(sidecar_path(csv_path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(result.config.to_toml())


def replay_trial(csv_path, index, cfg: ExperimentConfig = None):
    """Re-run trial ``index`` from its recorded seed; returns (recorded, fresh)."""
    if cfg is None:
        cfg = ExperimentConfig.load(sidecar_path(csv_path))
    recorded = {r.trial: r for r in read_csv(csv_path)}
    if index not in recorded:
        raise KeyError(f"trial {index} not in {csv_path}")
    exp = build_experiment(cfg)
    old: TrialRecord = recorded[index]
    fresh = exp.trial(index, old.seed)
    if exp.seed(index) != old.seed:
        raise ValueError(f"recorded seed of trial {index} does not match the config")
    return old, fresh
