#!/usr/bin/env python3
"""Side-by-side decode throughput: numba-compiled kernel vs plain Python.

The decode loop is the hot path of every optimizer run (one call per fitness
evaluation), so this is the speedup that matters end to end.  Validates that
both backends produce identical schedules before timing.
"""

import time

import numpy as np

from bufshop import _kernel, bundled_bus_instance, random_instance
from bufshop.decoder import CmaxEvaluator

if not _kernel.NUMBA_ENABLED:
    raise SystemExit("numba backend inactive (BUFSHOP_NO_NUMBA set or numba missing); "
                     "nothing to compare")

CASES = [
    ("bus15 (n=15, m=4)", bundled_bus_instance(), 2000),
    ("random n=30, m=5", random_instance(30, 5, [3, 2, 2, 2, 3], [2, 1, 2, 1],
                                         (5, 40), [(3, (1, 4))], seed=9), 600),
    ("random n=60, m=4", random_instance(60, 4, [4, 3, 3, 4], [3, 2, 3],
                                         (5, 40), [(3, (1, 4)), (2, (1, 3))], seed=9), 200),
]

print("Warming up jit compilation...")
t0 = time.perf_counter()
CmaxEvaluator(CASES[0][1]).cmax_of_keys(np.zeros(15))
print(f"warmup {time.perf_counter() - t0:.1f}s\n")

print(f"{'case':<22}{'decodes':>8}{'jit (s)':>10}{'python (s)':>12}{'speedup':>9}{'match':>7}")
print("-" * 68)
for label, inst, reps in CASES:
    n = len(inst.jobs)
    rng = np.random.default_rng(1)
    keys = rng.random((reps, n))

    jit_eval = CmaxEvaluator(inst)
    py_eval = CmaxEvaluator(inst, loop=_kernel.decode_loop_py)

    jit_vals = np.empty(reps)
    t0 = time.perf_counter()
    for k in range(reps):
        jit_vals[k] = jit_eval.cmax_of_keys(keys[k])
    t_jit = time.perf_counter() - t0

    py_vals = np.empty(reps)
    t0 = time.perf_counter()
    for k in range(reps):
        py_vals[k] = py_eval.cmax_of_keys(keys[k])
    t_py = time.perf_counter() - t0

    match = bool((jit_vals == py_vals).all())
    print(f"{label:<22}{reps:>8}{t_jit:>10.3f}{t_py:>12.3f}"
          f"{t_py / t_jit:>8.1f}x{'ok' if match else 'FAIL':>7}")
