"""Problem data for buffer-limited flexible flow lines with changeover setups.

A line has ``stage_count`` stages in fixed order, each with a pool of
identical parallel machines.  Finite buffers sit between consecutive stages;
a job that finishes a stage while the next buffer is full and no downstream
machine is free stays on its machine and blocks it.  Jobs carry discrete
property labels (e.g. model, colour); when two jobs processed back to back
on a machine differ in a property, the machine pays that stage's changeover
time for the property before the next job can start.

All durations are non-negative integers in abstract time units.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Job:
    """One job: a 1-based id, per-stage processing times, property labels."""

    id: int
    processing_times: tuple[int, ...]
    properties: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "processing_times", tuple(self.processing_times))
        object.__setattr__(self, "properties", tuple(str(p) for p in self.properties))


@dataclass(frozen=True)
class Instance:
    """An immutable problem instance; safe to share across concurrent runs.

    ``buffer_capacities[j]`` is the capacity of the buffer feeding stage
    ``j + 2`` (stages are 1-based; stage 1 has no input buffer).
    ``setup_params[j][x]`` is the changeover time paid at stage ``j + 2``
    when property ``x`` differs between consecutive jobs on a machine.
    """

    stage_count: int
    machines_per_stage: tuple[int, ...]
    buffer_capacities: tuple[int, ...]
    jobs: tuple[Job, ...]
    property_count: int = 0
    setup_params: tuple[tuple[int, ...], ...] = ()
    property_names: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "machines_per_stage", tuple(self.machines_per_stage))
        object.__setattr__(self, "buffer_capacities", tuple(self.buffer_capacities))
        object.__setattr__(self, "jobs", tuple(self.jobs))
        rows = tuple(tuple(row) for row in self.setup_params)
        if not rows and self.property_count == 0 and self.stage_count > 1:
            rows = ((),) * (self.stage_count - 1)
        object.__setattr__(self, "setup_params", rows)
        names = tuple(self.property_names)
        if not names and self.property_count:
            names = tuple(f"p{x + 1}" for x in range(self.property_count))
        object.__setattr__(self, "property_names", names)

    @property
    def job_count(self) -> int:
        return len(self.jobs)

    @cached_property
    def _jobs_by_id(self) -> dict[int, Job]:
        return {job.id: job for job in self.jobs}

    def job_by_id(self, job_id: int) -> Job:
        return self._jobs_by_id[job_id]


def _is_count(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


def validate_instance(inst: Instance) -> list[str]:
    """Check every structural invariant; returns the full list of violations.

    An empty list means the instance is well formed.
    """
    bad = []
    m = inst.stage_count
    n = len(inst.jobs)
    if not _is_count(m) or m < 1:
        bad.append(f"stage_count must be a positive integer, got {m!r}")
        return bad
    if len(inst.machines_per_stage) != m:
        bad.append(
            f"machines_per_stage has {len(inst.machines_per_stage)} entries, expected {m}"
        )
    for j, cnt in enumerate(inst.machines_per_stage, start=1):
        if not _is_count(cnt) or cnt < 1:
            bad.append(f"stage {j}: machine count must be a positive integer, got {cnt!r}")
    if len(inst.buffer_capacities) != m - 1:
        bad.append(
            f"buffer_capacities has {len(inst.buffer_capacities)} entries, expected {m - 1}"
        )
    for j, cap in enumerate(inst.buffer_capacities, start=2):
        if not _is_count(cap) or cap < 0:
            bad.append(f"buffer before stage {j}: capacity must be a non-negative integer, got {cap!r}")
    if n < 1:
        bad.append("instance has no jobs")
    if not _is_count(inst.property_count) or inst.property_count < 0:
        bad.append(f"property_count must be a non-negative integer, got {inst.property_count!r}")
    if len(inst.property_names) != inst.property_count:
        bad.append(
            f"{len(inst.property_names)} property names for {inst.property_count} properties"
        )

    seen_ids = set()
    for job in inst.jobs:
        if not _is_count(job.id) or not 1 <= job.id <= n:
            bad.append(f"job id {job.id!r} outside 1..{n}")
        elif job.id in seen_ids:
            bad.append(f"duplicate job id {job.id}")
        else:
            seen_ids.add(job.id)
        if len(job.processing_times) != m:
            bad.append(
                f"job {job.id}: {len(job.processing_times)} processing times for {m} stages"
            )
        for j, dur in enumerate(job.processing_times, start=1):
            if not _is_count(dur) or dur < 0:
                bad.append(
                    f"job {job.id} stage {j}: processing time must be a non-negative integer, got {dur!r}"
                )
        if len(job.properties) != inst.property_count:
            bad.append(
                f"job {job.id}: {len(job.properties)} property values for {inst.property_count} properties"
            )

    if len(inst.setup_params) != max(m - 1, 0):
        bad.append(
            f"setup_params has {len(inst.setup_params)} rows, expected one per stage 2..{m}"
        )
    for j, row in enumerate(inst.setup_params, start=2):
        if len(row) != inst.property_count:
            bad.append(
                f"stage {j}: {len(row)} setup parameters for {inst.property_count} properties"
            )
        for x, dur in enumerate(row):
            if not _is_count(dur) or dur < 0:
                bad.append(
                    f"stage {j} property {x + 1}: setup parameter must be a non-negative integer, got {dur!r}"
                )
    return bad


def setup_time(inst: Instance, stage: int, prev_job: Job | None, next_job: Job) -> int:
    """Changeover duration before ``next_job`` on a machine of ``stage``.

    ``stage`` is 1-based and must lie in 2..stage_count (stage 1 machines
    never need changeovers).  The first job on a machine has no predecessor
    (``prev_job=None``) and starts on a ready machine at no cost.  Otherwise
    the cost is the sum of the stage's per-property parameters over the
    properties whose labels differ between the two jobs.
    """
    if not 2 <= stage <= inst.stage_count:
        raise ValueError(
            f"stage {stage} out of range for changeovers (valid: 2..{inst.stage_count})"
        )
    if prev_job is None:
        return 0
    params = inst.setup_params[stage - 2]
    total = 0
    for x in range(inst.property_count):
        if prev_job.properties[x] != next_job.properties[x]:
            total += params[x]
    return int(total)
