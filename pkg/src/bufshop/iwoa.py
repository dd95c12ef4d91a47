"""Whale-style search with heavy-tailed steps, crowding escape, and annealing.

Three additions over :mod:`bufshop.woa`:

* non-spiral moves are scaled by a heavy-tailed step factor (Mantegna
  sampling), mixing short refinements with occasional long jumps;
* each candidate must pass a simulated-annealing acceptance test against
  the individual's incumbent, so worse moves survive early on but rarely
  late;
* when the population crowds together (low spread of fitness relative to
  the best), everyone except a small elite is reflected through the middle
  of the search box and re-scored, restoring diversity.
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
from .woa import WoaParams, coefficient_a, sample_coefficients, spiral_update


@dataclass
class IwoaParams:
    woa: WoaParams = field(default_factory=WoaParams)
    levy_gamma: float = 1.5
    congestion_threshold: float = 0.01
    elite_fraction: float = 0.10
    sa_initial_temp: float | None = None   # None: 0.1 x the initial best makespan
    sa_cooling: float = 0.97
    abs_step_results: bool = False  # mirror negative update results into the positive axis

    def __post_init__(self):
        if not 0.3 < self.levy_gamma < 1.99:
            raise ValueError(f"levy_gamma must lie in (0.3, 1.99), got {self.levy_gamma}")
        if self.congestion_threshold < 0.0:
            raise ValueError(f"congestion_threshold must be >= 0, got {self.congestion_threshold}")
        if not 0.0 <= self.elite_fraction <= 1.0:
            raise ValueError(f"elite_fraction must lie in [0, 1], got {self.elite_fraction}")
        if self.sa_initial_temp is not None and self.sa_initial_temp <= 0.0:
            raise ValueError(f"sa_initial_temp must be positive, got {self.sa_initial_temp}")
        if not 0.0 < self.sa_cooling < 1.0:
            raise ValueError(f"sa_cooling must lie in (0, 1), got {self.sa_cooling}")


def mantegna_sigma(gamma: float) -> float:
    """Scale of the numerator normal in Mantegna's heavy-tail sampler."""
    num = math.gamma(1.0 + gamma) * math.sin(math.pi * gamma / 2.0)
    den = math.gamma((1.0 + gamma) / 2.0) * gamma * 2.0 ** ((gamma - 1.0) / 2.0)
    return (num / den) ** (1.0 / gamma)


def levy_step(gamma: float, rng: np.random.Generator) -> float:
    """One heavy-tailed step factor u / |v|^(1/gamma), u ~ N(0, sigma_u^2), v ~ N(0, 1)."""
    if not 0.3 < gamma < 1.99:
        raise ValueError(f"gamma must lie in (0.3, 1.99), got {gamma}")
    u = rng.normal(0.0, mantegna_sigma(gamma))
    v = rng.normal(0.0, 1.0)
    return u / abs(v) ** (1.0 / gamma)


def _scaled_update(x, anchor, big_a, big_c, step, bounds, absolute):
    x = np.asarray(x, dtype=float)
    anchor = np.asarray(anchor, dtype=float)
    if x.shape != anchor.shape:
        raise ValueError(f"position shapes differ: {x.shape} vs {anchor.shape}")
    d = np.abs(big_c * anchor - x)
    new = anchor - step * big_a * d
    if absolute:
        new = np.abs(new)
    return clamp(new, bounds)


def levy_encircle_update(x, best, big_a, big_c, step: float,
                         bounds: Bounds = DEFAULT_BOUNDS, absolute: bool = False):
    """Best-anchored step scaled by a heavy-tailed factor; step=1 matches the plain move."""
    return _scaled_update(x, best, big_a, big_c, step, bounds, absolute)


def levy_search_update(x, mate, big_a, big_c, step: float,
                       bounds: Bounds = DEFAULT_BOUNDS, absolute: bool = False):
    """Mate-anchored step scaled by a heavy-tailed factor; step=1 matches the plain move."""
    return _scaled_update(x, mate, big_a, big_c, step, bounds, absolute)


def congestion(fitnesses) -> float:
    """Spread of fitness around the mean, normalized by the best value.

    Near zero means the population has crowded together.  Invariant under
    scaling all fitnesses by a positive constant; a zero best value falls
    back to an unnormalized spread.
    """
    f = np.asarray(fitnesses, dtype=float)
    if f.size == 0:
        raise ValueError("congestion needs at least one fitness value")
    best = f.min()
    denom = best if best != 0.0 else 1.0
    return float(np.mean(((f - f.mean()) / denom) ** 2))


def opposition(x, bounds: Bounds = DEFAULT_BOUNDS) -> np.ndarray:
    """Reflect keys through the middle of the bounds: lower + upper - x."""
    return bounds.lower + bounds.upper - np.asarray(x, dtype=float)


def sa_accept(f_current: float, f_candidate: float, temp: float,
              rng: np.random.Generator) -> bool:
    """Annealing acceptance: improvements always, worsenings with exp(-delta/T)."""
    if temp <= 0.0:
        raise ValueError(f"temperature must be positive, got {temp}")
    if f_candidate < f_current:
        return True
    return rng.random() < math.exp(-(f_candidate - f_current) / temp)


def run_iwoa(inst: Instance, params: IwoaParams | None = None, seed: int = 0) -> RunReport:
    """Seeded full run; the tracked best never worsens between generations."""
    params = params if params is not None else IwoaParams()
    problems = validate_instance(inst)
    if problems:
        raise ValueError("invalid instance:\n  " + "\n  ".join(problems))
    started = time.perf_counter()
    base = params.woa
    rng = np.random.default_rng(seed)
    n = len(inst.jobs)
    evaluator = CmaxEvaluator(inst)

    pop = np.stack([random_position(n, base.bounds, rng)
                    for _ in range(base.population)])
    fit = np.array([evaluator.cmax_of_keys(row) for row in pop], dtype=float)
    best_i = int(fit.argmin())
    best_keys = pop[best_i].copy()
    best_fit = float(fit[best_i])

    temp = params.sa_initial_temp
    if temp is None:
        temp = 0.1 * best_fit
    if temp <= 0.0:
        temp = 1.0
    elite = max(1, math.ceil(params.elite_fraction * base.population))
    obl_triggers = 0

    curve = []
    for t in range(base.max_generations):
        a = coefficient_a(t, base.max_generations)
        cand = np.empty_like(pop)
        for i in range(base.population):
            x = pop[i]
            p = rng.random()
            step = levy_step(params.levy_gamma, rng)
            if p >= base.spiral_choice_prob:
                l = rng.random()
                cand[i] = spiral_update(x, best_keys, l, base.spiral_shape, base.bounds)
            else:
                big_a, big_c = sample_coefficients(a, n, rng)
                mate = pop[int(rng.integers(base.population))]
                searched = levy_search_update(x, mate, big_a, big_c, step,
                                              base.bounds, params.abs_step_results)
                encircled = levy_encircle_update(x, best_keys, big_a, big_c, step,
                                                 base.bounds, params.abs_step_results)
                cand[i] = np.where(np.abs(big_a) >= 1.0, searched, encircled)

        cand_fit = np.array([evaluator.cmax_of_keys(row) for row in cand], dtype=float)
        for i in range(base.population):
            if sa_accept(float(fit[i]), float(cand_fit[i]), temp, rng):
                pop[i] = cand[i]
                fit[i] = cand_fit[i]
        i = int(cand_fit.argmin())
        if cand_fit[i] < best_fit:
            best_fit = float(cand_fit[i])
            best_keys = cand[i].copy()

        if congestion(fit) < params.congestion_threshold:
            obl_triggers += 1
            order = np.argsort(fit, kind="stable")
            rest = order[elite:]
            pop[rest] = opposition(pop[rest], base.bounds)
            for i in rest:
                fit[i] = evaluator.cmax_of_keys(pop[i])
            i = int(fit.argmin())
            if fit[i] < best_fit:
                best_fit = float(fit[i])
                best_keys = pop[i].copy()

        temp *= params.sa_cooling
        curve.append(int(best_fit))

    sequence = keys_to_sequence(best_keys)
    schedule = decode(inst, sequence)
    return RunReport(
        algorithm="iwoa",
        seed=seed,
        instance=inst,
        params=asdict(params),
        curve=curve,
        best_sequence=sequence,
        schedule=schedule,
        metrics=compute_metrics(schedule),
        obl_triggers=obl_triggers,
        wall_clock_s=time.perf_counter() - started,
    )
