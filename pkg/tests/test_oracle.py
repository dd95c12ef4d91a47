import itertools

import pytest

from bufshop.decoder import Metrics, compute_metrics, decode
from bufshop.instance_io import random_instance
from bufshop.model import Instance, Job
from bufshop.oracle import ORACLE_JOB_LIMIT, exhaustive_best, oracle_simulate


def test_hand_examples(two_job_line, blocking_line):
    assert oracle_simulate(two_job_line, [1, 2]).cmax == 8
    assert oracle_simulate(blocking_line, [1, 2]) == Metrics(11, 4, 0, 4)


def test_single_job():
    inst = Instance(stage_count=3, machines_per_stage=[1, 1, 1],
                    buffer_capacities=[2, 2], jobs=[Job(1, [3, 1, 4])])
    assert oracle_simulate(inst, [1]) == Metrics(8, 0, 0, 0)


def test_job_limit_enforced(bus):
    with pytest.raises(ValueError):
        oracle_simulate(bus, range(1, 16))
    with pytest.raises(ValueError):
        exhaustive_best(bus)


def test_rejects_bad_sequence(two_job_line):
    with pytest.raises(ValueError):
        oracle_simulate(two_job_line, [1, 1])


def test_all_permutations_match_decoder():
    inst = random_instance(5, 2, [2, 1], [1], (1, 9), [(2, (1, 3))], seed=77)
    for perm in itertools.permutations(range(1, 6)):
        assert oracle_simulate(inst, perm) == compute_metrics(decode(inst, perm))


def test_exhaustive_best_single_job():
    inst = Instance(stage_count=2, machines_per_stage=[1, 1],
                    buffer_capacities=[1], jobs=[Job(1, [2, 2])])
    seq, met = exhaustive_best(inst)
    assert seq == (1,)
    assert met.cmax == 4


def test_exhaustive_best_ties_break_lexicographically():
    inst = Instance(stage_count=2, machines_per_stage=[1, 1],
                    buffer_capacities=[1],
                    jobs=[Job(1, [2, 3]), Job(2, [2, 3])])
    seq, met = exhaustive_best(inst)
    assert seq == (1, 2)
    assert met.cmax == 8


def test_exhaustive_best_regression_fixture():
    # Frozen once from a full enumeration of this seeded instance.
    inst = random_instance(6, 3, [2, 1, 2], [1, 0], (1, 9), [(2, (1, 3))], seed=5)
    seq, met = exhaustive_best(inst)
    assert seq == (2, 6, 4, 3, 5, 1)
    assert met == Metrics(cmax=31, twip=27, ts=5, tpb=7)
    assert oracle_simulate(inst, seq) == met
    assert compute_metrics(decode(inst, seq)) == met
