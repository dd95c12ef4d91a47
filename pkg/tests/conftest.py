import numpy as np
import pytest

from bufshop import bundled_bus_instance, decode
from bufshop.model import Instance, Job


@pytest.fixture(scope="session")
def bus():
    return bundled_bus_instance()


@pytest.fixture(scope="session", autouse=True)
def warm_kernel(bus):
    # First decode triggers jit compilation; keep it out of timed sections.
    decode(bus, range(1, 16))


@pytest.fixture
def two_job_line():
    # 2 jobs, 2 stages, 1 machine each, buffer capacity 1, no properties.
    return Instance(
        stage_count=2,
        machines_per_stage=[1, 1],
        buffer_capacities=[1],
        jobs=[Job(1, [2, 3]), Job(2, [2, 3])],
    )


@pytest.fixture
def blocking_line():
    # Zero-capacity buffer: the second job must block on the first machine.
    return Instance(
        stage_count=2,
        machines_per_stage=[1, 1],
        buffer_capacities=[0],
        jobs=[Job(1, [1, 5]), Job(2, [1, 5])],
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
