"""Seeded Monte Carlo simulation of the drunk angel.

Each turn adds an independent uniform integer in [-c, c] to every coordinate.
After the N turns of a plan the angel is caged if her final Euclidean norm is
at most k, and she never left if every visited position had norm at most k.
With ``strict_boundary`` both comparisons become "less than k".

Two samplers are available.  ``"walk"`` runs the whole walk and reports both
events.  ``"endpoint"`` draws the final position directly from its exact law
(the per-axis counts of each step value are multinomial), which is enough for
the caged rate at a cost independent of N; it cannot say whether the angel
ever left, so those fields are ``None``.
"""

from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from angelcage import _kernels
from angelcage.analytic import CagePlan, make_plan

log = logging.getLogger(__name__)

SAMPLERS = ("walk", "endpoint")
MAX_SEED = 2**64 - 1
# trials per work unit; fixed so results never depend on the thread count
BLOCK = 1024
THREADS_ENV = "ANGELCAGE_THREADS"


@dataclass(frozen=True)
class SimulationConfig:
    plan: CagePlan
    trials: int
    master_seed: int
    record_traces: bool = False
    sampler: str = "walk"
    strict_boundary: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.plan.turns < 1:
            raise ValueError(f"plan needs at least one turn, got {self.plan.turns}")
        if self.plan.power < 0:
            raise ValueError(f"power must be >= 0, got {self.plan.power}")
        if not 0 <= self.master_seed <= MAX_SEED:
            raise ValueError(f"master_seed must fit in 64 unsigned bits, got {self.master_seed}")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if self.record_traces and self.sampler != "walk":
            raise ValueError("traces need the walk sampler")

    def inside(self, norm2):
        """Cage-region test on squared norms (scalars or arrays)."""
        k2 = self.plan.inner_k**2
        return norm2 < k2 if self.strict_boundary else norm2 <= k2


@dataclass(frozen=True)
class Trace:
    """Positions visited by one walk, origin first; shape (N + 1, n)."""

    positions: np.ndarray

    @property
    def turns(self) -> int:
        return len(self.positions) - 1

    @property
    def final_position(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.positions[-1])

    def distances(self) -> np.ndarray:
        return np.sqrt((self.positions.astype(np.float64) ** 2).sum(axis=1))


@dataclass(frozen=True)
class TrialOutcome:
    final_position: tuple[int, ...]
    caged: bool
    never_left: bool | None
    max_distance: float | None
    trace: Trace | None = None


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    caged_count: int
    never_left_count: int | None
    elapsed: float

    @property
    def trials(self) -> int:
        return self.config.trials

    @property
    def caged_rate(self) -> float:
        return self.caged_count / self.trials

    @property
    def never_left_rate(self) -> float | None:
        if self.never_left_count is None:
            return None
        return self.never_left_count / self.trials

    @property
    def ci_halfwidth_95(self) -> float:
        return ci_halfwidth(self.caged_rate, self.trials)

    @property
    def std_error(self) -> float:
        p = self.caged_rate
        return math.sqrt(p * (1 - p) / self.trials)


def ci_halfwidth(p: float, trials: int, z: float = 1.96) -> float:
    return z * math.sqrt(p * (1 - p) / trials)


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    threads = int(raw)
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {raw!r}")
    return threads


def _blocks(total: int, size: int = BLOCK):
    return [(start, min(size, total - start)) for start in range(0, total, size)]


def _map_blocks(fn, blocks, threads):
    if threads is None:
        threads = default_threads()
    if threads <= 1 or len(blocks) <= 1:
        return [fn(*b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: fn(*b), blocks))


def _u64(seed: int) -> np.uint64:
    # numba would type a plain int >= 2**63 as int64 and overflow
    return np.uint64(seed)


def _walk_block(plan: CagePlan, seed: int, start: int, count: int):
    final = np.empty((count, plan.dim), dtype=np.int64)
    peak = np.empty(count, dtype=np.int64)
    _kernels.walk_batch(plan.dim, plan.power, plan.turns, _u64(seed), start, final, peak)
    return final, peak


def endpoint_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial_index,)))


def _endpoint_block(plan: CagePlan, seed: int, start: int, count: int):
    c = plan.power
    values = np.arange(-c, c + 1, dtype=np.int64)
    pvals = np.full(2 * c + 1, 1.0 / (2 * c + 1))
    final = np.empty((count, plan.dim), dtype=np.int64)
    for i in range(count):
        counts = endpoint_rng(seed, start + i).multinomial(plan.turns, pvals, size=plan.dim)
        final[i] = counts @ values
    return final, None


def _block_fn(config: SimulationConfig):
    if config.sampler == "walk":
        return lambda start, count: _walk_block(config.plan, config.master_seed, start, count)
    return lambda start, count: _endpoint_block(config.plan, config.master_seed, start, count)


def run_trial(config: SimulationConfig, trial_index: int) -> TrialOutcome:
    if not 0 <= trial_index < config.trials:
        raise IndexError(f"trial {trial_index} outside [0, {config.trials})")
    if config.record_traces:
        trace = trace_walk(config, trial_index)
        peak = int((trace.positions**2).sum(axis=1).max())
        final = trace.final_position
        caged = config.inside(sum(v * v for v in final))
        return TrialOutcome(final, caged, config.inside(peak), math.sqrt(peak), trace)
    final_arr, peak_arr = _block_fn(config)(trial_index, 1)
    final = tuple(int(v) for v in final_arr[0])
    caged = config.inside(sum(v * v for v in final))
    if peak_arr is None:
        return TrialOutcome(final, caged, None, None)
    peak = int(peak_arr[0])
    return TrialOutcome(final, caged, config.inside(peak), math.sqrt(peak))


def run_simulation(config: SimulationConfig, threads: int | None = None) -> SimulationReport:
    """Run every trial of ``config`` and count the successes.

    Trials are cut into fixed blocks that may run on ``threads`` worker
    threads; the counts are identical for any thread count.
    """
    plan = config.plan
    fn = _block_fn(config)

    def count_block(start, count):
        final, peak = fn(start, count)
        caged = int(np.count_nonzero(config.inside((final * final).sum(axis=1))))
        never = None if peak is None else int(np.count_nonzero(config.inside(peak)))
        return caged, never

    t0 = time.perf_counter()
    parts = _map_blocks(count_block, _blocks(config.trials), threads)
    elapsed = time.perf_counter() - t0
    caged = sum(p[0] for p in parts)
    never = None if config.sampler != "walk" else sum(p[1] for p in parts)
    log.debug(
        "simulated n=%d c=%d k=%d N=%d trials=%d in %.2fs",
        plan.dim, plan.power, plan.inner_k, plan.turns, config.trials, elapsed,
    )
    return SimulationReport(config, caged, never, elapsed)


def trace_walk(config: SimulationConfig, trial_index: int) -> Trace:
    """Full path of trial ``trial_index``; its last row is that trial's end point."""
    if config.sampler != "walk":
        raise ValueError("traces need the walk sampler")
    if not 0 <= trial_index < config.trials:
        raise IndexError(f"trial {trial_index} outside [0, {config.trials})")
    plan = config.plan
    positions = _kernels.walk_trace(
        plan.dim, plan.power, plan.turns, _u64(config.master_seed), trial_index
    )
    return Trace(positions)


def avg_distance_curve(
    n: int, c: int, steps: int, trials: int, master_seed: int, threads: int | None = None
) -> np.ndarray:
    """Mean Euclidean distance from the origin after each of 0..steps moves."""
    if steps < 1 or trials < 1:
        raise ValueError("steps and trials must be >= 1")
    if n < 1 or c < 0:
        raise ValueError(f"invalid dimension/power {n}, {c}")
    block = 256

    def one(start, count):
        return _kernels.distance_sums(n, c, steps, _u64(master_seed), start, count)

    parts = _map_blocks(one, _blocks(trials, block), threads)
    total = np.zeros(steps + 1)
    for part in parts:
        total += part
    return total / trials


def sweep_seed(master_seed: int, k: int) -> int:
    """Seed for one row of a sweep, so rows are independent of the k range."""
    return int(np.random.SeedSequence([master_seed, k]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepRow:
    k: int
    turns: int
    caged_rate: float
    never_left_rate: float | None


def sweep_k(
    n: int,
    c: int,
    k_min: int,
    k_max: int,
    trials_per_k: int,
    master_seed: int,
    threads: int | None = None,
    sampler: str = "walk",
    strict_boundary: bool = False,
) -> list[SweepRow]:
    if not 1 <= k_min <= k_max:
        raise ValueError(f"need 1 <= k_min <= k_max, got {k_min}, {k_max}")
    rows = []
    for k in range(k_min, k_max + 1):
        plan = make_plan(n, c, k)
        config = SimulationConfig(
            plan, trials_per_k, sweep_seed(master_seed, k),
            sampler=sampler, strict_boundary=strict_boundary,
        )
        report = run_simulation(config, threads)
        rows.append(SweepRow(k, plan.turns, report.caged_rate, report.never_left_rate))
    return rows
