import pytest

from bufshop.instance_io import random_instance
from bufshop.report import (
    report_from_json,
    report_to_json,
    summarize,
    summary_table,
)
from bufshop.woa import WoaParams, run_woa


@pytest.fixture(scope="module")
def small_report():
    inst = random_instance(5, 2, [2, 1], [1], (1, 9), [(2, (1, 3))], seed=2)
    return run_woa(inst, WoaParams(population=6, max_generations=15), seed=4)


def test_report_round_trip(small_report):
    text = report_to_json(small_report)
    back = report_from_json(text)
    assert back.algorithm == small_report.algorithm
    assert back.seed == small_report.seed
    assert back.curve == small_report.curve
    assert back.best_sequence == small_report.best_sequence
    assert back.metrics == small_report.metrics
    assert back.instance == small_report.instance
    assert report_to_json(back) == text


def test_serialized_report_excludes_wall_clock(small_report):
    assert small_report.wall_clock_s > 0.0
    assert "wall_clock" not in report_to_json(small_report)


def test_reconstructed_schedule_verifies(small_report):
    from bufshop.decoder import verify_schedule
    back = report_from_json(report_to_json(small_report))
    assert verify_schedule(back.instance, back.schedule) == []


def test_summary_ordering_invariant(small_report):
    inst = small_report.instance
    reports = [run_woa(inst, WoaParams(population=6, max_generations=10), seed=s)
               for s in range(5)]
    summary = summarize("woa", 0, reports)
    for stats in summary.stats.values():
        assert stats["optimum"] <= stats["average"] <= stats["worst"]


def test_summary_single_run_collapses(small_report):
    summary = summarize("woa", 4, [small_report])
    for stats in summary.stats.values():
        assert stats["optimum"] == stats["worst"] == stats["average"]


def test_summary_table_shape(small_report):
    table = summary_table([summarize("woa", 4, [small_report])])
    lines = table.strip().splitlines()
    # header + rule + 4 metrics x 3 stats
    assert len(lines) == 2 + 12
    assert "cmax" in table and "average" in table
