"""Replay an update stream through the pipeline and collect metrics.

Metrics are one JSON object per update (append-only, parseable on their own);
the summary aggregates timing and quality figures.  Wall-clock fields aside,
a replay is a pure function of (stream, algo config).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from .core import Instance, InstanceConfig, edge_key
from .errors import ReplayError
from .exact import DEFAULT_ORACLE_LIMIT, max_matching_exact
from .pipeline import Pipeline
from .streams import UpdateEvent


def _percentile(sorted_vals: Sequence[int], q: float) -> int:
    if not sorted_vals:
        return 0
    idx = min(len(sorted_vals) - 1, int(q * len(sorted_vals)))
    return sorted_vals[idx]


def replay(
    events: Iterable[UpdateEvent],
    config: InstanceConfig,
    oracle_every: int = 100,
    metrics_path: str | Path | None = None,
    oracle_limit: int = DEFAULT_ORACLE_LIMIT,
) -> dict:
    """Feed events to the pipeline in order; return the summary dict."""
    inst = Instance(config)
    pipe = Pipeline(inst)
    present: set = set()
    deg = [0] * config.n

    out = open(metrics_path, "w", encoding="utf-8") if metrics_path else None
    times: list[int] = []
    adjusts: list[int] = []
    ratios: list[float] = []
    records = 0
    last = {"m0": 0, "answer": 0}
    last_mu: int | None = None
    try:
        for ev in events:
            key = edge_key(ev.u, ev.v)
            if ev.op == "ins":
                if key in present:
                    raise ReplayError(ev.seq, f"insert of present edge {key}")
                if deg[key[0]] >= config.delta_cap or deg[key[1]] >= config.delta_cap:
                    raise ReplayError(ev.seq, f"insert of {key} exceeds delta")
                present.add(key)
                deg[key[0]] += 1
                deg[key[1]] += 1
            elif ev.op == "del":
                if key not in present:
                    raise ReplayError(ev.seq, f"delete of absent edge {key}")
                present.remove(key)
                deg[key[0]] -= 1
                deg[key[1]] -= 1
            else:
                raise ReplayError(ev.seq, f"unknown op {ev.op!r}")

            report = pipe.handle_update(ev.op, ev.u, ev.v)
            records += 1
            m0 = len(pipe.base.matching)
            answer = pipe.union.size()
            mu = None
            ratio = None
            if oracle_every and records % oracle_every == 0:
                mu = max_matching_exact(config.n, present, limit=oracle_limit).size
                ratio = answer / mu if mu else 1.0
                ratios.append(ratio)
                last_mu = mu
            times.append(report.elapsed_ns)
            adjusts.append(report.adjustment_complexity())
            last = {"m0": m0, "answer": answer}
            if out is not None:
                rec = {
                    "seq": ev.seq,
                    "op": ev.op,
                    "u": ev.u,
                    "v": ev.v,
                    "m0": m0,
                    "answer": answer,
                    "mu": mu,
                    "ratio": ratio,
                    "m0_delta": report.adjustment_complexity(),
                    "level_deltas": {
                        str(i): d.size() for i, d in report.level_deltas.items()
                    },
                    "lv_probe": report.candidate_probes,
                    "ns": report.elapsed_ns,
                }
                out.write(json.dumps(rec) + "\n")
    finally:
        if out is not None:
            out.close()

    sorted_times = sorted(times)
    summary = {
        "events": records,
        "n": config.n,
        "delta": config.delta_cap,
        "levels": config.levels,
        "algo_seed": config.algo_seed,
        "final_m0": last["m0"],
        "final_answer": last["answer"],
        "final_mu": last_mu,
        "mean_ns": sum(times) / len(times) if times else 0.0,
        "p50_ns": _percentile(sorted_times, 0.50),
        "p99_ns": _percentile(sorted_times, 0.99),
        "max_ns": sorted_times[-1] if sorted_times else 0,
        "mean_adjustment": sum(adjusts) / len(adjusts) if adjusts else 0.0,
        "max_adjustment": max(adjusts) if adjusts else 0,
        "min_ratio": min(ratios) if ratios else None,
        "final_ratio": ratios[-1] if ratios else None,
    }
    return summary


def write_summary(summary: dict, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
