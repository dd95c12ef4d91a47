"""Instance files, the bundled bus-plant instance, and random fixtures.

The on-disk format is JSON with an explicit schema version; the packaged
``data/bus15.json`` is the canonical example.  Field reference:

    schema_version   currently 1
    name             free-form label
    stages           number of stages m
    machines_per_stage   m positive integers
    buffer_capacities    m-1 non-negative integers (buffer feeding stage j+1)
    property_names       X labels (may be empty)
    setup_params         m-1 rows of X integers: changeover per property,
                         one row per stage 2..m
    jobs                 objects {id, times[m], props[X]}

All durations are non-negative integers in abstract time units.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

from .model import Instance, Job, validate_instance

SCHEMA_VERSION = 1


class InstanceFormatError(ValueError):
    """Raised when instance text cannot be parsed or fails validation."""


def instance_to_dict(inst: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": inst.name,
        "stages": inst.stage_count,
        "machines_per_stage": list(inst.machines_per_stage),
        "buffer_capacities": list(inst.buffer_capacities),
        "property_names": list(inst.property_names),
        "setup_params": [list(row) for row in inst.setup_params],
        "jobs": [
            {"id": job.id, "times": list(job.processing_times), "props": list(job.properties)}
            for job in inst.jobs
        ],
    }


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise InstanceFormatError(f"instance document must be an object, got {type(data).__name__}")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise InstanceFormatError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    missing = [k for k in ("stages", "machines_per_stage", "buffer_capacities", "jobs")
               if k not in data]
    if missing:
        raise InstanceFormatError(f"missing fields: {', '.join(missing)}")
    try:
        jobs = tuple(
            Job(
                id=row["id"],
                processing_times=tuple(row["times"]),
                properties=tuple(row.get("props", ())),
            )
            for row in data["jobs"]
        )
        inst = Instance(
            stage_count=data["stages"],
            machines_per_stage=tuple(data["machines_per_stage"]),
            buffer_capacities=tuple(data["buffer_capacities"]),
            jobs=jobs,
            property_count=len(data.get("property_names", ())),
            setup_params=tuple(tuple(row) for row in data.get("setup_params", ())),
            property_names=tuple(data.get("property_names", ())),
            name=str(data.get("name", "")),
        )
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"malformed instance document: {exc}") from exc
    problems = validate_instance(inst)
    if problems:
        raise InstanceFormatError("invalid instance:\n  " + "\n  ".join(problems))
    return inst


def load_instance(text: str) -> Instance:
    """Parse and validate instance text; errors carry the offending location."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return instance_from_dict(data)


def save_instance(inst: Instance) -> str:
    """Serialize an instance; ``load_instance`` round-trips it losslessly."""
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def bundled_bus_instance() -> Instance:
    """The packaged 15-job, 4-stage bus plant instance."""
    text = resources.files("bufshop").joinpath("data/bus15.json").read_text("utf-8")
    return load_instance(text)


def random_instance(n: int, m: int, machines, buffers, time_range,
                    property_spec=(), seed: int = 0, name: str = "") -> Instance:
    """Seeded random instance, mainly for enumeration-scale testing.

    ``machines`` is one count per stage (or a single int for all stages);
    ``buffers`` one capacity per stage 2..m (or a single int).  Processing
    times are uniform integers over the inclusive ``time_range``.
    ``property_spec`` is a sequence of ``(label_count, (lo, hi))`` pairs:
    one property dimension each, with per-stage changeover parameters drawn
    uniformly from the inclusive range.
    """
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 jobs and m >= 1 stages, got n={n}, m={m}")
    machines = [machines] * m if isinstance(machines, int) else list(machines)
    buffers = [buffers] * (m - 1) if isinstance(buffers, int) else list(buffers)
    if len(machines) != m or any(c < 1 for c in machines):
        raise ValueError(f"machines must be {m} positive counts, got {machines}")
    if len(buffers) != m - 1 or any(c < 0 for c in buffers):
        raise ValueError(f"buffers must be {m - 1} non-negative capacities, got {buffers}")
    lo, hi = time_range
    if not 0 <= lo <= hi:
        raise ValueError(f"invalid time range {time_range}")
    rng = np.random.default_rng(seed)
    spec = list(property_spec)
    for labels, (slo, shi) in spec:
        if labels < 1 or not 0 <= slo <= shi:
            raise ValueError(f"invalid property spec entry {(labels, (slo, shi))}")
    jobs = tuple(
        Job(
            id=i + 1,
            processing_times=tuple(int(v) for v in rng.integers(lo, hi + 1, m)),
            properties=tuple(
                f"v{int(rng.integers(labels))}" for labels, _ in spec
            ),
        )
        for i in range(n)
    )
    setup_params = tuple(
        tuple(int(rng.integers(slo, shi + 1)) for _, (slo, shi) in spec)
        for _ in range(m - 1)
    )
    return Instance(
        stage_count=m,
        machines_per_stage=tuple(machines),
        buffer_capacities=tuple(buffers),
        jobs=jobs,
        property_count=len(spec),
        setup_params=setup_params,
        name=name or f"random-n{n}m{m}s{seed}",
    )


def convert_carlier_neron(text: str, name: str = "",
                          buffer_capacity: int | None = None) -> Instance:
    """Convert a multi-stage flow shop benchmark listing to an instance.

    Expected layout (whitespace separated, ``#`` comments allowed)::

        n m
        <m machine counts>
        <n rows of m processing times>

    These benchmark families assume unbounded buffers and no changeovers,
    so every buffer defaults to capacity n (never binding) unless
    ``buffer_capacity`` is given.  The datasets themselves are not bundled.
    """
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise InstanceFormatError(f"non-integer token in benchmark listing: {exc}") from exc
    if len(values) < 2:
        raise InstanceFormatError("benchmark listing is empty")
    n, m = values[0], values[1]
    expected = 2 + m + n * m
    if n < 1 or m < 1 or len(values) != expected:
        raise InstanceFormatError(
            f"benchmark listing for n={n}, m={m} needs {expected} integers, got {len(values)}"
        )
    machines = values[2:2 + m]
    times = values[2 + m:]
    cap = n if buffer_capacity is None else buffer_capacity
    jobs = tuple(
        Job(id=i + 1, processing_times=tuple(times[i * m:(i + 1) * m]))
        for i in range(n)
    )
    inst = Instance(
        stage_count=m,
        machines_per_stage=tuple(machines),
        buffer_capacities=(cap,) * (m - 1),
        jobs=jobs,
        name=name,
    )
    problems = validate_instance(inst)
    if problems:
        raise InstanceFormatError("invalid benchmark instance:\n  " + "\n  ".join(problems))
    return inst
