"""Buffer-limited flexible flow shop scheduling with whale-style metaheuristics."""

from ._kernel import NUMBA_ENABLED
from .decoder import (
    Metrics,
    Schedule,
    StageRecord,
    compute_metrics,
    decode,
    gantt_lanes,
    gantt_segments,
    verify_schedule,
)
from .encoding import Bounds, DEFAULT_BOUNDS, clamp, keys_to_sequence, random_position
from .instance_io import (
    InstanceFormatError,
    bundled_bus_instance,
    convert_carlier_neron,
    load_instance,
    random_instance,
    save_instance,
)
from .iwoa import (
    IwoaParams,
    congestion,
    levy_encircle_update,
    levy_search_update,
    levy_step,
    opposition,
    run_iwoa,
    sa_accept,
)
from .model import Instance, Job, setup_time, validate_instance
from .oracle import ORACLE_JOB_LIMIT, exhaustive_best, oracle_simulate
from .report import BatchSummary, RunReport, report_from_json, report_to_json, summarize
from .woa import (
    WoaParams,
    coefficient_a,
    encircle_update,
    run_woa,
    sample_coefficients,
    search_update,
    spiral_update,
    woa_step,
)

__version__ = "0.1.0"
