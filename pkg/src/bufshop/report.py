"""Run artifacts: per-run reports and multi-run batch summaries.

Report serialization is canonical: identical runs produce byte-identical
text.  Wall-clock time therefore stays out of the serialized form (it is
still carried on the in-memory object and printed by the CLI).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .decoder import Metrics, Schedule
from .instance_io import instance_from_dict, instance_to_dict
from .model import Instance

METRIC_NAMES = ("cmax", "twip", "ts", "tpb")


@dataclass
class RunReport:
    """Everything one seeded run produced."""

    algorithm: str
    seed: int
    instance: Instance
    params: dict
    curve: list[int]                 # best makespan so far, one entry per generation
    best_sequence: tuple[int, ...]
    schedule: Schedule
    metrics: Metrics
    obl_triggers: int = 0            # generations in which the reflection escape fired
    wall_clock_s: float = 0.0


def _record_dicts(schedule: Schedule) -> list[dict]:
    return [
        {
            "job": r.job,
            "stage": r.stage,
            "machine": r.machine,
            "setup": r.setup,
            "start": r.start,
            "completion": r.completion,
            "buffer_entry": r.buffer_entry,
            "buffer_leave": r.buffer_leave,
            "departure": r.departure,
        }
        for r in schedule.records()
    ]


def report_to_json(report: RunReport) -> str:
    doc = {
        "algorithm": report.algorithm,
        "seed": report.seed,
        "instance": instance_to_dict(report.instance),
        "params": report.params,
        "curve": [int(v) for v in report.curve],
        "best_sequence": [int(v) for v in report.best_sequence],
        "metrics": dict(zip(METRIC_NAMES, report.metrics)),
        "records": _record_dicts(report.schedule),
        "obl_triggers": report.obl_triggers,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def report_from_json(text: str) -> RunReport:
    doc = json.loads(text)
    inst = instance_from_dict(doc["instance"])
    n, m = len(inst.jobs), inst.stage_count
    arrays = {name: np.zeros((n, m), dtype=np.int64)
              for name in ("machine", "setup", "start", "completion",
                           "buffer_entry", "buffer_leave", "departure")}
    for rec in doc["records"]:
        i, j = rec["job"] - 1, rec["stage"] - 1
        arrays["machine"][i, j] = rec["machine"] - 1
        arrays["setup"][i, j] = rec["setup"]
        arrays["start"][i, j] = rec["start"]
        arrays["completion"][i, j] = rec["completion"]
        arrays["buffer_entry"][i, j] = -1 if rec["buffer_entry"] is None else rec["buffer_entry"]
        arrays["buffer_leave"][i, j] = -1 if rec["buffer_leave"] is None else rec["buffer_leave"]
        arrays["departure"][i, j] = rec["departure"]
    sequence = tuple(int(v) for v in doc["best_sequence"])
    schedule = Schedule(instance=inst, sequence=sequence, **arrays)
    return RunReport(
        algorithm=doc["algorithm"],
        seed=doc["seed"],
        instance=inst,
        params=doc["params"],
        curve=[int(v) for v in doc["curve"]],
        best_sequence=sequence,
        schedule=schedule,
        metrics=Metrics(**doc["metrics"]),
        obl_triggers=doc.get("obl_triggers", 0),
    )


@dataclass
class BatchSummary:
    """Best/worst/average of each metric over a batch of seeded runs."""

    algorithm: str
    runs: int
    base_seed: int
    stats: dict[str, dict[str, float]] = field(default_factory=dict)


def summarize(algorithm: str, base_seed: int, reports: list[RunReport]) -> BatchSummary:
    if not reports:
        raise ValueError("cannot summarize an empty batch")
    stats = {}
    for k, name in enumerate(METRIC_NAMES):
        values = [report.metrics[k] for report in reports]
        stats[name] = {
            "optimum": float(min(values)),
            "worst": float(max(values)),
            "average": float(np.mean(values)),
        }
    return BatchSummary(algorithm=algorithm, runs=len(reports),
                        base_seed=base_seed, stats=stats)


def summary_table(summaries: list[BatchSummary]) -> str:
    """Aligned text table: one metric/stat row, one column per algorithm."""
    algos = [s.algorithm for s in summaries]
    header = f"{'metric':<8}{'stat':<10}" + "".join(f"{a:>10}" for a in algos)
    lines = [header, "-" * len(header)]
    for name in METRIC_NAMES:
        for stat in ("optimum", "worst", "average"):
            cells = []
            for s in summaries:
                v = s.stats[name][stat]
                cells.append(f"{v:>10.2f}" if stat == "average" else f"{v:>10.0f}")
            label = name if stat == "optimum" else ""
            lines.append(f"{label:<8}{stat:<10}" + "".join(cells))
    return "\n".join(lines) + "\n"
