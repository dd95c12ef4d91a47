"""Event-driven schedule construction loop.

This is the hot path: every fitness evaluation of the optimizers runs it
once.  The loop is written in a nopython-compatible subset of numpy so the
same function body serves two backends:

* compiled with ``numba.njit`` (default when numba is importable), or
* executed as plain Python over numpy arrays.

Set ``BUFSHOP_NO_NUMBA=1`` to force the plain backend.  ``decode_loop`` is
whichever backend is active; ``decode_loop_py`` is always the plain one
(used by tests and ``benchmarks/bench_kernel.py`` to compare the two).
"""

from __future__ import annotations

import os

import numpy as np

# Sentinel timestamp larger than any reachable schedule time.
FAR = np.int64(1) << 60

STATUS_OK = 0
STATUS_STALLED = 1


def _decode_loop(proc, mcount, kcap, setup, seq,
                 out_machine, out_setup, out_start, out_comp,
                 out_te, out_tl, out_to):
    """Fill the per-(job, stage) output arrays for one launch sequence.

    All arrays are int64.  ``proc`` is (n, m) processing times, ``mcount``
    machines per stage, ``kcap[j]`` the capacity of the buffer feeding stage
    ``j`` (kcap[0] unused), ``setup[j, p + 1, q]`` the changeover before job
    ``q`` when job ``p`` ran last on the machine (row 0 = clean machine), and
    ``seq`` the 0-based launch order.  Returns STATUS_OK, or STATUS_STALLED
    if the simulation cannot advance (unreachable for well-formed inputs).

    Job phases: 0 awaiting launch, 1 on a machine (setup+processing),
    2 finished but holding its machine, 3 waiting in a buffer, 4 done.
    """
    n, m = proc.shape
    max_m = 0
    for j in range(m):
        if mcount[j] > max_m:
            max_m = mcount[j]
    avail = np.zeros((m, max_m), dtype=np.int64)     # time machine last freed; FAR = occupied
    last = np.full((m, max_m), -1, dtype=np.int64)   # previous job on machine
    phase = np.zeros(n, dtype=np.int64)
    at_stage = np.zeros(n, dtype=np.int64)
    launched = 0
    done = 0
    t = np.int64(0)

    while done < n:
        # Everything that can happen at time t cascades to a fixed point.
        changed = True
        while changed:
            changed = False

            # Jobs whose processing ends now.  At the final stage the machine
            # frees immediately; elsewhere the job keeps holding it.
            for j in range(m):
                for i in range(n):
                    if phase[i] == 1 and at_stage[i] == j and out_comp[i, j] == t:
                        if j == m - 1:
                            out_to[i, j] = t
                            avail[j, out_machine[i, j]] = t
                            phase[i] = 4
                            done += 1
                        else:
                            phase[i] = 2
                        changed = True

            # Finished jobs move into the next buffer: earliest completion
            # first (ties: lower job id).  A move is allowed when the buffer
            # has a free slot, or when more machines than queued jobs are
            # free downstream (the job passes straight through).
            for j in range(m - 1):
                tgt = j + 1
                while True:
                    pick = -1
                    pick_c = FAR
                    for i in range(n):
                        if phase[i] == 2 and at_stage[i] == j and out_comp[i, j] < pick_c:
                            pick = i
                            pick_c = out_comp[i, j]
                    if pick < 0:
                        break
                    waiting = 0
                    for i in range(n):
                        if phase[i] == 3 and at_stage[i] == tgt:
                            waiting += 1
                    free = 0
                    for l in range(mcount[tgt]):
                        if avail[tgt, l] <= t:
                            free += 1
                    if waiting < kcap[tgt] or free > waiting:
                        out_te[pick, tgt] = t
                        out_to[pick, j] = t
                        avail[j, out_machine[pick, j]] = t
                        phase[pick] = 3
                        at_stage[pick] = tgt
                        changed = True
                    else:
                        break

            # Stage-1 launches follow the genome order; each job takes the
            # machine idle the longest (ties: lowest index).  No changeovers.
            while launched < n:
                best_l = -1
                best_av = FAR
                for l in range(mcount[0]):
                    if avail[0, l] <= t and avail[0, l] < best_av:
                        best_av = avail[0, l]
                        best_l = l
                if best_l < 0:
                    break
                i = seq[launched]
                launched += 1
                out_machine[i, 0] = best_l
                out_setup[i, 0] = 0
                out_start[i, 0] = t
                out_comp[i, 0] = t + proc[i, 0]
                out_te[i, 0] = -1
                out_tl[i, 0] = -1
                avail[0, best_l] = FAR
                last[0, best_l] = i
                phase[i] = 1
                at_stage[i] = 0
                changed = True

            # Later stages serve their buffer first-come-first-served by
            # (entry time, previous completion, job id).  The changeover
            # starts the moment the job leaves the buffer.
            for j in range(1, m):
                while True:
                    best_l = -1
                    best_av = FAR
                    for l in range(mcount[j]):
                        if avail[j, l] <= t and avail[j, l] < best_av:
                            best_av = avail[j, l]
                            best_l = l
                    if best_l < 0:
                        break
                    pick = -1
                    pk_te = FAR
                    pk_pc = FAR
                    for i in range(n):
                        if phase[i] == 3 and at_stage[i] == j:
                            te_i = out_te[i, j]
                            pc_i = out_comp[i, j - 1]
                            if te_i < pk_te or (te_i == pk_te and pc_i < pk_pc):
                                pick = i
                                pk_te = te_i
                                pk_pc = pc_i
                    if pick < 0:
                        break
                    s = setup[j, last[j, best_l] + 1, pick]
                    out_machine[pick, j] = best_l
                    out_setup[pick, j] = s
                    out_tl[pick, j] = t
                    out_start[pick, j] = t + s
                    out_comp[pick, j] = t + s + proc[pick, j]
                    avail[j, best_l] = FAR
                    last[j, best_l] = pick
                    phase[pick] = 1
                    changed = True

        if done >= n:
            break
        nxt = FAR
        for i in range(n):
            if phase[i] == 1:
                c = out_comp[i, at_stage[i]]
                if c < nxt:
                    nxt = c
        if nxt >= FAR or nxt <= t:
            return STATUS_STALLED
        t = nxt
    return STATUS_OK


def _numba_wanted() -> bool:
    flag = os.environ.get("BUFSHOP_NO_NUMBA", "").strip().lower()
    return flag not in ("1", "true", "yes", "on")


decode_loop_py = _decode_loop

if _numba_wanted():
    try:
        from numba import njit

        decode_loop = njit(cache=True)(_decode_loop)
        NUMBA_ENABLED = True
    except ImportError:
        decode_loop = _decode_loop
        NUMBA_ENABLED = False
else:
    decode_loop = _decode_loop
    NUMBA_ENABLED = False
