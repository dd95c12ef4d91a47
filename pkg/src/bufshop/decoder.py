"""Turn a launch sequence into a feasible timed schedule, and score it.

Dispatch policy (the contract shared with ``bufshop.oracle``, which
re-implements it independently as a unit-clock simulation):

1. Every job is available at stage 1 from time 0.  Whenever a stage-1
   machine is free, the next unlaunched job of the sequence starts on the
   free machine that has been idle the longest (ties: lowest machine
   index).  Stage 1 has no changeovers.
2. A job that finishes stage j < m stays on its machine until it can move
   into the buffer ahead of stage j+1: either the buffer has a free slot,
   or strictly more downstream machines are free than jobs are queued (the
   job then passes straight through, a zero-length buffer visit).  Held-up
   jobs move in order of (completion time, job id); while held up they
   block their machine.
3. Each later stage serves its buffer first-come-first-served by (buffer
   entry, previous-stage completion, job id), again on the machine idle the
   longest.  The changeover starts the instant the job leaves the buffer,
   so start = buffer_leave + setup and the buffer slot frees at that
   moment.
4. A job's machine-departure time equals its buffer entry at the next
   stage (at the last stage, its completion); the machine admits no new
   job before then.
5. Within one instant, moves cascade (finish, transfer, launch, dispatch)
   until nothing more can happen.

``decode`` is deterministic: equal inputs produce identical schedules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from . import _kernel
from .model import Instance, setup_time


class Metrics(NamedTuple):
    """The four schedule quality indices (all integer durations)."""

    cmax: int   # completion time of the last job
    twip: int   # total time jobs spend between stages (wait + block + setup)
    ts: int     # total changeover time
    tpb: int    # total time jobs spend blocking a machine after finishing


class StageRecord(NamedTuple):
    """Timing of one job at one stage (1-based ids, stages, machines)."""

    job: int
    stage: int
    machine: int
    setup: int
    start: int
    completion: int
    buffer_entry: int | None   # None at stage 1
    buffer_leave: int | None
    departure: int


class Packed(NamedTuple):
    """Array form of an instance, shared by every decode of that instance."""

    proc: np.ndarray       # (n, m) processing times
    mcount: np.ndarray     # (m,) machines per stage
    kcap: np.ndarray       # (m,) capacity of the buffer feeding each stage
    setup: np.ndarray      # (m, n + 1, n) changeover lookup, row 0 = clean machine


@dataclass(frozen=True)
class Schedule:
    """A decoded schedule: one timing record per (job, stage).

    Arrays are indexed [job_id - 1, stage - 1]; ``buffer_entry`` and
    ``buffer_leave`` hold -1 at stage 1 where no buffer exists.
    """

    instance: Instance
    sequence: tuple[int, ...]
    machine: np.ndarray
    setup: np.ndarray
    start: np.ndarray
    completion: np.ndarray
    buffer_entry: np.ndarray
    buffer_leave: np.ndarray
    departure: np.ndarray

    def record(self, job_id: int, stage: int) -> StageRecord:
        i, j = job_id - 1, stage - 1
        return StageRecord(
            job=job_id,
            stage=stage,
            machine=int(self.machine[i, j]) + 1,
            setup=int(self.setup[i, j]),
            start=int(self.start[i, j]),
            completion=int(self.completion[i, j]),
            buffer_entry=int(self.buffer_entry[i, j]) if j > 0 else None,
            buffer_leave=int(self.buffer_leave[i, j]) if j > 0 else None,
            departure=int(self.departure[i, j]),
        )

    def records(self) -> Iterator[StageRecord]:
        for job in self.instance.jobs:
            for stage in range(1, self.instance.stage_count + 1):
                yield self.record(job.id, stage)


def pack_instance(inst: Instance) -> Packed:
    """Precompute the arrays ``decode_loop`` works on.

    Raises ValueError when job ids are not exactly 1..n or dimensions do not
    line up (run ``validate_instance`` for the full report).
    """
    n, m = len(inst.jobs), inst.stage_count
    by_id = [None] * n
    for job in inst.jobs:
        if not 1 <= job.id <= n or by_id[job.id - 1] is not None:
            raise ValueError(f"job ids must be exactly 1..{n}")
        by_id[job.id - 1] = job
    proc = np.zeros((n, m), dtype=np.int64)
    for i, job in enumerate(by_id):
        if len(job.processing_times) != m:
            raise ValueError(f"job {job.id} has {len(job.processing_times)} times for {m} stages")
        proc[i] = job.processing_times
    mcount = np.asarray(inst.machines_per_stage, dtype=np.int64)
    kcap = np.zeros(m, dtype=np.int64)
    if m > 1:
        kcap[1:] = inst.buffer_capacities
    setup = np.zeros((m, n + 1, n), dtype=np.int64)
    for j in range(1, m):
        params = inst.setup_params[j - 1]
        for p in range(n):
            for q in range(n):
                total = 0
                for x in range(inst.property_count):
                    if by_id[p].properties[x] != by_id[q].properties[x]:
                        total += params[x]
                setup[j, p + 1, q] = total
    return Packed(proc, mcount, kcap, setup)


def _sequence_to_indices(inst: Instance, sequence) -> np.ndarray:
    seq = [int(s) for s in sequence]
    n = len(inst.jobs)
    if sorted(seq) != list(range(1, n + 1)):
        raise ValueError(f"sequence {tuple(seq)} is not a permutation of job ids 1..{n}")
    return np.asarray(seq, dtype=np.int64) - 1


class CmaxEvaluator:
    """Repeated decoding of one instance with reusable output buffers.

    The optimizers call this once per fitness evaluation; the buffers avoid
    re-allocating seven arrays per decode.
    """

    def __init__(self, inst: Instance, loop=None):
        self.instance = inst
        self.packed = pack_instance(inst)
        n, m = self.packed.proc.shape
        self._last_stage = m - 1
        self._bufs = tuple(np.zeros((n, m), dtype=np.int64) for _ in range(7))
        self._loop = loop if loop is not None else _kernel.decode_loop

    def cmax_of_indices(self, order: np.ndarray) -> int:
        status = self._loop(*self.packed, order, *self._bufs)
        if status != _kernel.STATUS_OK:
            raise RuntimeError("schedule construction stalled; instance is malformed")
        return int(self._bufs[3][:, self._last_stage].max())

    def cmax_of_keys(self, keys: np.ndarray) -> int:
        return self.cmax_of_indices(np.argsort(keys, kind="stable").astype(np.int64))


def decode(inst: Instance, sequence, loop=None) -> Schedule:
    """Build the schedule the dispatch policy assigns to ``sequence``.

    ``sequence`` must be a permutation of the job ids 1..n giving the
    stage-1 launch order.  ``loop`` overrides the decode backend (used by
    tests and benchmarks to compare the compiled and plain paths).
    """
    packed = pack_instance(inst)
    order = _sequence_to_indices(inst, sequence)
    n, m = packed.proc.shape
    bufs = tuple(np.zeros((n, m), dtype=np.int64) for _ in range(7))
    loop = loop if loop is not None else _kernel.decode_loop
    status = loop(*packed, order, *bufs)
    if status != _kernel.STATUS_OK:
        raise RuntimeError("schedule construction stalled; instance is malformed")
    machine, setup, start, comp, te, tl, to = bufs
    return Schedule(
        instance=inst,
        sequence=tuple(int(s) for s in sequence),
        machine=machine,
        setup=setup,
        start=start,
        completion=comp,
        buffer_entry=te,
        buffer_leave=tl,
        departure=to,
    )


def compute_metrics(sched: Schedule) -> Metrics:
    """Score a schedule: makespan, between-stage waiting, setups, blocking."""
    m = sched.instance.stage_count
    cmax = int(sched.completion[:, m - 1].max())
    ts = int(sched.setup.sum())
    if m > 1:
        twip = int((sched.start[:, 1:] - sched.completion[:, :-1]).sum())
        tpb = int((sched.buffer_entry[:, 1:] - sched.completion[:, :-1]).sum())
    else:
        twip = tpb = 0
    return Metrics(cmax=cmax, twip=twip, ts=ts, tpb=tpb)


def verify_schedule(inst: Instance, sched: Schedule) -> list[str]:
    """Check a schedule against every feasibility rule, independent of decode.

    Returns one message per violation; an empty list means feasible.
    """
    bad = []
    n, m = len(inst.jobs), inst.stage_count
    by_id = {job.id: job for job in inst.jobs}
    for arr in (sched.machine, sched.setup, sched.start, sched.completion,
                sched.buffer_entry, sched.buffer_leave, sched.departure):
        if arr.shape != (n, m):
            return [f"record array shape {arr.shape} does not match {n} jobs x {m} stages"]

    for i in range(n):
        job = by_id.get(i + 1)
        if job is None:
            bad.append(f"no job with id {i + 1}")
            continue
        for j in range(m):
            tag = f"job {i + 1} stage {j + 1}"
            mach = int(sched.machine[i, j])
            if not 0 <= mach < inst.machines_per_stage[j]:
                bad.append(f"{tag}: machine index {mach + 1} out of range")
            st, cp = int(sched.start[i, j]), int(sched.completion[i, j])
            su, to = int(sched.setup[i, j]), int(sched.departure[i, j])
            if st < 0:
                bad.append(f"{tag}: negative start time {st}")
            if cp != st + job.processing_times[j]:
                bad.append(
                    f"{tag}: completion {cp} != start {st} + processing {job.processing_times[j]}"
                )
            if j > 0:
                prev_cp = int(sched.completion[i, j - 1])
                te, tl = int(sched.buffer_entry[i, j]), int(sched.buffer_leave[i, j])
                if st < prev_cp + su:
                    bad.append(
                        f"{tag}: start {st} precedes previous completion {prev_cp} plus setup {su}"
                    )
                if te < prev_cp:
                    bad.append(f"{tag}: buffer entry {te} precedes previous completion {prev_cp}")
                if tl < te:
                    bad.append(f"{tag}: buffer leave {tl} precedes buffer entry {te}")
                if tl + su != st:
                    bad.append(f"{tag}: buffer leave {tl} + setup {su} != start {st}")
            if j < m - 1:
                if to != int(sched.buffer_entry[i, j + 1]):
                    bad.append(
                        f"{tag}: departure {to} != next-stage buffer entry "
                        f"{int(sched.buffer_entry[i, j + 1])}"
                    )
            elif to != cp:
                bad.append(f"{tag}: departure {to} != final completion {cp}")

    # Per-machine changeover values and interval overlap.  A machine is
    # occupied from the start of a job's setup until the job departs.
    # Service order sorts by setup start then departure; zero-length
    # services tied on both fall back to the dispatch priority (sequence
    # position at stage 1, buffer order later).
    seq_pos = {job_id: k for k, job_id in enumerate(sched.sequence)}
    for j in range(m):
        for l in range(inst.machines_per_stage[j]):
            rows = [i for i in range(n) if int(sched.machine[i, j]) == l]
            if j == 0:
                rows.sort(key=lambda i: (int(sched.start[i, j]),
                                         int(sched.departure[i, j]),
                                         seq_pos.get(i + 1, i)))
            else:
                rows.sort(key=lambda i: (int(sched.start[i, j]) - int(sched.setup[i, j]),
                                         int(sched.departure[i, j]),
                                         int(sched.buffer_entry[i, j]),
                                         int(sched.completion[i, j - 1]),
                                         i))
            prev = None
            for i in rows:
                tag = f"job {i + 1} stage {j + 1} machine {l + 1}"
                su = int(sched.setup[i, j])
                if j == 0:
                    want = 0
                else:
                    want = setup_time(inst, j + 1, by_id.get(prev + 1) if prev is not None else None,
                                      by_id[i + 1])
                if su != want:
                    bad.append(f"{tag}: setup {su} != required changeover {want}")
                if prev is not None:
                    if int(sched.start[i, j]) - su < int(sched.departure[prev, j]):
                        bad.append(
                            f"{tag}: occupation from {int(sched.start[i, j]) - su} overlaps "
                            f"job {prev + 1} until {int(sched.departure[prev, j])}"
                        )
                prev = i

    # Buffer occupancy: a job occupies a slot from entry to leave.
    for j in range(1, m):
        cap = inst.buffer_capacities[j - 1]
        entries = sorted((int(sched.buffer_entry[i, j]), i) for i in range(n))
        for at, _ in entries:
            inside = sum(
                1 for i in range(n)
                if int(sched.buffer_entry[i, j]) <= at < int(sched.buffer_leave[i, j])
            )
            if inside > cap:
                bad.append(
                    f"buffer before stage {j + 1}: {inside} residents at time {at} "
                    f"exceed capacity {cap}"
                )
    return bad


class Segment(NamedTuple):
    """One colored bar of the schedule chart."""

    lane: str
    kind: str   # processing | setup | blocking | buffer
    start: int
    end: int
    job: int


def gantt_lanes(inst: Instance) -> list[str]:
    """Display order of chart lanes: each stage's machines, then the buffer feeding the next."""
    lanes = []
    for j in range(1, inst.stage_count + 1):
        if j > 1:
            lanes.append(f"B{j}")
        for l in range(1, inst.machines_per_stage[j - 1] + 1):
            lanes.append(f"M{j}.{l}")
    return lanes


def gantt_segments(sched: Schedule) -> list[Segment]:
    """Chart segments for a schedule: processing plus any contention bars.

    Machine lanes carry processing (default fill), setup (red) and blocking
    (blue) bars; buffer lanes carry residence (green) bars.  Zero-length
    intervals are omitted.
    """
    n, m = len(sched.instance.jobs), sched.instance.stage_count
    segs = []
    for i in range(n):
        for j in range(m):
            lane = f"M{j + 1}.{int(sched.machine[i, j]) + 1}"
            st, cp = int(sched.start[i, j]), int(sched.completion[i, j])
            su, to = int(sched.setup[i, j]), int(sched.departure[i, j])
            if su > 0:
                segs.append(Segment(lane, "setup", st - su, st, i + 1))
            segs.append(Segment(lane, "processing", st, cp, i + 1))
            if to > cp:
                segs.append(Segment(lane, "blocking", cp, to, i + 1))
            if j > 0:
                te, tl = int(sched.buffer_entry[i, j]), int(sched.buffer_leave[i, j])
                if tl > te:
                    segs.append(Segment(f"B{j + 1}", "buffer", te, tl, i + 1))
    segs.sort(key=lambda s: (s.lane, s.start, s.end, s.job))
    return segs
