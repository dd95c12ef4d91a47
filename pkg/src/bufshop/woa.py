"""Whale-style population search over random-key positions.

Each candidate is a key vector decoded to a launch sequence; fitness is the
schedule makespan (lower is better).  Per generation each individual either
spirals toward the incumbent best or takes a coefficient-driven step around
the best (exploitation) or around a random population member (exploration),
with the step coefficient's amplitude shrinking linearly over generations so
the swarm shifts from exploring to exploiting.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .decoder import CmaxEvaluator, compute_metrics, decode
from .encoding import DEFAULT_BOUNDS, Bounds, clamp, keys_to_sequence, random_position
from .model import Instance, validate_instance
from .report import RunReport


@dataclass
class WoaParams:
    population: int = 30
    max_generations: int = 300
    spiral_choice_prob: float = 0.5   # chance of the non-spiral branch
    spiral_shape: float = 1.0
    bounds: Bounds = field(default_factory=lambda: DEFAULT_BOUNDS)

    def __post_init__(self):
        self.bounds = Bounds(*self.bounds)
        if self.population < 2:
            raise ValueError(f"population must be >= 2, got {self.population}")
        if self.max_generations < 1:
            raise ValueError(f"max_generations must be >= 1, got {self.max_generations}")
        if not 0.0 <= self.spiral_choice_prob <= 1.0:
            raise ValueError(f"spiral_choice_prob must lie in [0, 1], got {self.spiral_choice_prob}")
        if not self.bounds.lower <= self.bounds.upper:
            raise ValueError(f"empty bounds {self.bounds}")


def coefficient_a(t: int, t_max: int) -> float:
    """Amplitude schedule: 2 at generation 0, falling linearly to 0 at t_max."""
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    return 2.0 - 2.0 * t / t_max


def sample_coefficients(a: float, dim: int, rng: np.random.Generator):
    """Per-dimension step coefficients: A uniform on [-a, a], C uniform on [0, 2]."""
    r1 = rng.random(dim)
    r2 = rng.random(dim)
    return 2.0 * a * r1 - a, 2.0 * r2


def _check_same_shape(x, anchor):
    if x.shape != anchor.shape:
        raise ValueError(f"position shapes differ: {x.shape} vs {anchor.shape}")


def encircle_update(x, best, big_a, big_c, bounds: Bounds = DEFAULT_BOUNDS):
    """Step around the best position: best - A * |C * best - x|, clamped."""
    x = np.asarray(x, dtype=float)
    best = np.asarray(best, dtype=float)
    _check_same_shape(x, best)
    d = np.abs(big_c * best - x)
    return clamp(best - big_a * d, bounds)


def search_update(x, mate, big_a, big_c, bounds: Bounds = DEFAULT_BOUNDS):
    """Step around a random population member instead of the best."""
    x = np.asarray(x, dtype=float)
    mate = np.asarray(mate, dtype=float)
    _check_same_shape(x, mate)
    d = np.abs(big_c * mate - x)
    return clamp(mate - big_a * d, bounds)


def spiral_update(x, best, l: float, shape: float = 1.0,
                  bounds: Bounds = DEFAULT_BOUNDS):
    """Logarithmic-spiral approach to the best position, l drawn from (0, 1)."""
    x = np.asarray(x, dtype=float)
    best = np.asarray(best, dtype=float)
    _check_same_shape(x, best)
    dp = np.abs(best - x)
    return clamp(best + dp * math.exp(shape * l) * math.cos(2.0 * math.pi * l), bounds)


def woa_step(population: np.ndarray, best: np.ndarray, t: int,
             params: WoaParams, rng: np.random.Generator) -> np.ndarray:
    """One generation of position updates (fitness is re-evaluated by the caller).

    Per individual: with probability 1 - spiral_choice_prob take the spiral
    branch; otherwise draw per-dimension coefficients and one random mate,
    and move each dimension around the mate where |A| >= 1 (exploration) or
    around the best where |A| < 1 (exploitation).  All draws come from
    ``rng`` in a fixed order, so a seeded run is reproducible.
    """
    a = coefficient_a(t, params.max_generations)
    npop, dim = population.shape
    out = np.empty_like(population)
    for i in range(npop):
        x = population[i]
        p = rng.random()
        if p >= params.spiral_choice_prob:
            l = rng.random()
            out[i] = spiral_update(x, best, l, params.spiral_shape, params.bounds)
        else:
            big_a, big_c = sample_coefficients(a, dim, rng)
            mate = population[int(rng.integers(npop))]
            searched = search_update(x, mate, big_a, big_c, params.bounds)
            encircled = encircle_update(x, best, big_a, big_c, params.bounds)
            out[i] = np.where(np.abs(big_a) >= 1.0, searched, encircled)
    return out


def run_woa(inst: Instance, params: WoaParams | None = None, seed: int = 0) -> RunReport:
    """Seeded full run; the tracked best never worsens between generations."""
    params = params if params is not None else WoaParams()
    problems = validate_instance(inst)
    if problems:
        raise ValueError("invalid instance:\n  " + "\n  ".join(problems))
    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = len(inst.jobs)
    evaluator = CmaxEvaluator(inst)

    pop = np.stack([random_position(n, params.bounds, rng)
                    for _ in range(params.population)])
    fit = np.array([evaluator.cmax_of_keys(row) for row in pop], dtype=float)
    best_i = int(fit.argmin())
    best_keys = pop[best_i].copy()
    best_fit = float(fit[best_i])

    curve = []
    for t in range(params.max_generations):
        pop = woa_step(pop, best_keys, t, params, rng)
        fit = np.array([evaluator.cmax_of_keys(row) for row in pop], dtype=float)
        i = int(fit.argmin())
        if fit[i] < best_fit:
            best_fit = float(fit[i])
            best_keys = pop[i].copy()
        curve.append(int(best_fit))

    sequence = keys_to_sequence(best_keys)
    schedule = decode(inst, sequence)
    return RunReport(
        algorithm="woa",
        seed=seed,
        instance=inst,
        params=asdict(params),
        curve=curve,
        best_sequence=sequence,
        schedule=schedule,
        metrics=compute_metrics(schedule),
        wall_clock_s=time.perf_counter() - started,
    )
