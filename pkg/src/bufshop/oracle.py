"""Reference results for tiny instances: brute force over every sequence.

``oracle_simulate`` re-implements the dispatch policy documented in
``bufshop.decoder`` with a deliberately different structure — the clock
advances one time unit at a time and state lives in plain dictionaries —
so agreement between the two is a meaningful cross-check rather than a
tautology.  ``exhaustive_best`` enumerates all n! launch sequences to find
the true optimum.  Both refuse instances above ``job_limit``.
"""

from __future__ import annotations

import itertools

from .decoder import Metrics
from .model import Instance, setup_time

ORACLE_JOB_LIMIT = 8


def oracle_simulate(inst: Instance, sequence, job_limit: int = ORACLE_JOB_LIMIT) -> Metrics:
    """Score one launch sequence by stepping the line one time unit at a time."""
    n, m = len(inst.jobs), inst.stage_count
    if n > job_limit:
        raise ValueError(f"{n} jobs exceed the reference simulator limit of {job_limit}")
    order = [int(s) for s in sequence]
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError(f"sequence {tuple(order)} is not a permutation of job ids 1..{n}")
    jobs = {job.id: job for job in inst.jobs}
    cap = {j: inst.buffer_capacities[j - 2] for j in range(2, m + 1)}

    machines = {
        j: [{"idle_since": 0, "holder": None, "last": None}
            for _ in range(inst.machines_per_stage[j - 1])]
        for j in range(1, m + 1)
    }
    status = {i: "pool" for i in jobs}       # pool | busy | stuck | queued | done
    stage_of = {i: 1 for i in jobs}
    rec: dict[tuple[int, int], dict] = {}
    pending = list(order)

    def free_machine(stage):
        """Index of the free machine idle the longest, or None."""
        candidates = [(box["idle_since"], k) for k, box in enumerate(machines[stage])
                      if box["holder"] is None]
        return min(candidates)[1] if candidates else None

    def step(now):
        moved_any = False
        while True:
            moved = False

            # Processing that finishes at this instant.
            running = sorted(
                (i for i in jobs if status[i] == "busy"
                 and rec[(i, stage_of[i])]["comp"] == now),
                key=lambda i: (stage_of[i], i),
            )
            for i in running:
                stage = stage_of[i]
                if stage == m:
                    rec[(i, stage)]["to"] = now
                    box = machines[stage][rec[(i, stage)]["machine"]]
                    box["holder"] = None
                    box["idle_since"] = now
                    status[i] = "done"
                else:
                    status[i] = "stuck"
                moved = True

            # Finished jobs trying to enter the next buffer.
            for stage in range(1, m):
                while True:
                    stuck = sorted(
                        (i for i in jobs if status[i] == "stuck" and stage_of[i] == stage),
                        key=lambda i: (rec[(i, stage)]["comp"], i),
                    )
                    if not stuck:
                        break
                    queued = sum(1 for i in jobs
                                 if status[i] == "queued" and stage_of[i] == stage + 1)
                    idle = sum(1 for box in machines[stage + 1] if box["holder"] is None)
                    if queued >= cap[stage + 1] and idle <= queued:
                        break
                    i = stuck[0]
                    rec[(i, stage)]["to"] = now
                    box = machines[stage][rec[(i, stage)]["machine"]]
                    box["holder"] = None
                    box["idle_since"] = now
                    rec[(i, stage + 1)] = {"te": now}
                    status[i] = "queued"
                    stage_of[i] = stage + 1
                    moved = True

            # Stage-1 launches in genome order.
            while pending:
                k = free_machine(1)
                if k is None:
                    break
                i = pending.pop(0)
                machines[1][k]["holder"] = i
                machines[1][k]["last"] = i
                rec[(i, 1)] = {
                    "machine": k, "setup": 0, "start": now,
                    "comp": now + jobs[i].processing_times[0],
                }
                status[i] = "busy"
                moved = True

            # Buffer service, first come first served.
            for stage in range(2, m + 1):
                while True:
                    k = free_machine(stage)
                    if k is None:
                        break
                    queued = sorted(
                        (i for i in jobs if status[i] == "queued" and stage_of[i] == stage),
                        key=lambda i: (rec[(i, stage)]["te"], rec[(i, stage - 1)]["comp"], i),
                    )
                    if not queued:
                        break
                    i = queued[0]
                    box = machines[stage][k]
                    prev = jobs[box["last"]] if box["last"] is not None else None
                    s = setup_time(inst, stage, prev, jobs[i])
                    box["holder"] = i
                    box["last"] = i
                    r = rec[(i, stage)]
                    r.update(machine=k, setup=s, tl=now, start=now + s,
                             comp=now + s + jobs[i].processing_times[stage - 1])
                    status[i] = "busy"
                    moved = True

            if not moved:
                return moved_any
            moved_any = True

    total_work = sum(sum(job.processing_times) for job in jobs.values())
    for row in inst.setup_params:
        total_work += n * sum(row)
    now = 0
    while any(status[i] != "done" for i in jobs):
        step(now)
        if all(status[i] == "done" for i in jobs):
            break
        now += 1
        if now > total_work + 1:
            raise RuntimeError("reference simulation exceeded its work bound")

    cmax = max(rec[(i, m)]["comp"] for i in jobs)
    ts = sum(rec[(i, j)]["setup"] for i in jobs for j in range(1, m + 1))
    twip = sum(rec[(i, j)]["start"] - rec[(i, j - 1)]["comp"]
               for i in jobs for j in range(2, m + 1))
    tpb = sum(rec[(i, j)]["te"] - rec[(i, j - 1)]["comp"]
              for i in jobs for j in range(2, m + 1))
    return Metrics(cmax=cmax, twip=twip, ts=ts, tpb=tpb)


def exhaustive_best(inst: Instance, job_limit: int = ORACLE_JOB_LIMIT):
    """Best launch sequence over all n! permutations.

    Returns ``(sequence, metrics)`` where ``sequence`` is the
    lexicographically smallest permutation attaining the minimum makespan.
    """
    n = len(inst.jobs)
    if n > job_limit:
        raise ValueError(f"{n} jobs exceed the enumeration limit of {job_limit}")
    best_seq = None
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        met = oracle_simulate(inst, perm, job_limit=job_limit)
        if best is None or met.cmax < best.cmax:
            best = met
            best_seq = perm
    return best_seq, best
