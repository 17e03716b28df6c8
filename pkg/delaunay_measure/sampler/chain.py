"""
Metropolis–Hastings over point configurations
=============================================
The target density is 𝒟_T(z) from the Kähler route. A step moves one free
vertex by an isotropic Gaussian, rebuilds the Delaunay triangulation and
accepts with min(1, 𝒟_new/𝒟_old). Proposals that coincide with another
point, are degenerate, or leave the optional bounds window are rejected.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np

from common.settings import get_sampler_settings
from common.utils.logging_setup import setup_logger
from common.utils.timer import BlockTimer

from ..errors import MeasureDriftError, MeasureError
from ..measure import check_separation, measure_kahler
from ..mesh import PointConfig, Triangulation, delaunay_build
from ..operators import kahler_assemble
from .stream import SampleStream

logger = setup_logger(__name__)

TARGET_KAHLER = "kahler"
TARGET_UNIT = "unit"  # constant density, for checking the plumbing

AUDIT_TOLERANCE = 1e-9

Bounds = tuple[float, float, float, float]  # (x_min, x_max, y_min, y_max)
Seed = Union[int, np.random.SeedSequence]


def log_target(t: Triangulation, target: str = TARGET_KAHLER) -> float:
    if target == TARGET_UNIT:
        return 0.0
    if target != TARGET_KAHLER:
        raise ValueError(f"unknown target {target!r}")
    return measure_kahler(kahler_assemble(t), t.config.fixed).log_magnitude


def acceptance_probability(log_old: float, log_new: float) -> float:
    if log_new >= log_old:
        return 1.0
    return math.exp(log_new - log_old)


def detailed_balance_gap(log_a: float, log_b: float) -> float:
    """log π(a)α(a→b) − log π(b)α(b→a); zero for the Metropolis rule."""
    forward = log_a + min(0.0, log_b - log_a)
    backward = log_b + min(0.0, log_a - log_b)
    return forward - backward


def in_bounds(z: complex, bounds: Optional[Bounds]) -> bool:
    if bounds is None:
        return True
    x_min, x_max, y_min, y_max = bounds
    return x_min <= z.real <= x_max and y_min <= z.imag <= y_max


@dataclass(frozen=True)
class ChainState:
    config: PointConfig
    log_measure: float
    step: int = 0
    accepted: int = 0
    rejected_invalid: int = 0  # coinciding, degenerate or out of bounds
    seed: Optional[int] = None

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.step if self.step else 0.0


@dataclass(frozen=True)
class Sample:
    step: int
    config: PointConfig
    log_measure: float

    def to_dict(self) -> dict:
        record = self.config.to_dict()
        record.update({"step": self.step, "log_measure": self.log_measure})
        return record


@dataclass(frozen=True)
class ChainResult:
    state: ChainState
    samples: list[Sample] = field(default_factory=list)

    @property
    def acceptance_rate(self) -> float:
        return self.state.acceptance_rate


def initial_state(config: PointConfig, target: str = TARGET_KAHLER, seed: Optional[int] = None) -> ChainState:
    check_separation(config)
    t = delaunay_build(config)
    return ChainState(config=config, log_measure=log_target(t, target), seed=seed)


def mh_step(
    state: ChainState,
    proposal_sigma: float,
    rng: np.random.Generator,
    target: str = TARGET_KAHLER,
    bounds: Optional[Bounds] = None,
) -> ChainState:
    """One Metropolis–Hastings step. Never raises on a bad proposal."""
    if proposal_sigma <= 0:
        raise ValueError("proposal sigma must be positive")
    config = state.config
    free = config.free
    v = free[int(rng.integers(len(free)))]
    dx, dy = rng.normal(0.0, proposal_sigma, size=2)
    u = rng.random()  # drawn every step so the stream does not depend on rejections
    proposal = config.points[v] + complex(dx, dy)

    advanced = replace(state, step=state.step + 1)
    if not in_bounds(proposal, bounds):
        return replace(advanced, rejected_invalid=state.rejected_invalid + 1)

    moved = config.moved(v, proposal)
    try:
        check_separation(moved)
        log_new = log_target(delaunay_build(moved), target)
    except MeasureError as exc:
        logger.warning("Rejected degenerate proposal for vertex %d: %s", v, exc.message)
        return replace(advanced, rejected_invalid=state.rejected_invalid + 1)

    alpha = acceptance_probability(state.log_measure, log_new)
    logger.debug("step %d: vertex %d, log ratio %.4f", advanced.step, v, log_new - state.log_measure)
    if u < alpha:
        return replace(advanced, config=moved, log_measure=log_new, accepted=state.accepted + 1)
    return advanced


def audit(state: ChainState, target: str = TARGET_KAHLER, tolerance: float = AUDIT_TOLERANCE) -> float:
    """Recompute the stored log-measure from scratch; raise on drift."""
    recomputed = log_target(delaunay_build(state.config), target)
    drift = abs(recomputed - state.log_measure)
    if drift >= tolerance:
        raise MeasureDriftError(
            f"stored log-measure drifted by {drift:.3e} at step {state.step}",
            step=state.step,
            stored=state.log_measure,
            recomputed=recomputed,
        )
    return drift


def run_chain(
    config0: PointConfig,
    steps: int,
    sigma: float,
    seed: Optional[Seed] = None,
    thin: Optional[int] = None,
    target: str = TARGET_KAHLER,
    bounds: Optional[Bounds] = None,
    audit_interval: Optional[int] = None,
    stream: Optional[SampleStream] = None,
    on_sample: Optional[Callable[[Sample], None]] = None,
) -> ChainResult:
    """
    Run one chain. The same seed gives the same samples. Every `thin`-th
    state is kept (and appended to `stream` when given).
    """
    settings = get_sampler_settings()
    seed = settings.seed if seed is None else seed
    thin = settings.thin if thin is None else max(1, thin)
    audit_interval = settings.audit_interval if audit_interval is None else max(1, audit_interval)

    rng = np.random.default_rng(seed)
    state = initial_state(config0, target, seed if isinstance(seed, int) else None)
    samples: list[Sample] = []

    for _ in range(steps):
        state = mh_step(state, sigma, rng, target, bounds)
        if state.step % audit_interval == 0:
            audit(state, target)
        if state.step % thin == 0:
            sample = Sample(state.step, state.config, state.log_measure)
            samples.append(sample)
            if stream is not None:
                stream.append(sample.to_dict())
            if on_sample is not None:
                on_sample(sample)

    logger.info(
        "Chain finished: %d steps, acceptance %.3f, %d invalid proposals, %d samples",
        state.step,
        state.acceptance_rate,
        state.rejected_invalid,
        len(samples),
    )
    return ChainResult(state=state, samples=samples)


def run_chains(
    config0: PointConfig,
    chains: int,
    steps: int,
    sigma: float,
    seed: Optional[int] = None,
    thin: Optional[int] = None,
    workers: Optional[int] = None,
    target: str = TARGET_KAHLER,
    bounds: Optional[Bounds] = None,
    streams: Optional[Sequence[SampleStream]] = None,
) -> list[ChainResult]:
    """Independent chains on worker threads, seeded from SeedSequence(seed).spawn(chains)."""
    settings = get_sampler_settings()
    root = np.random.SeedSequence(settings.seed if seed is None else seed)
    children = root.spawn(chains)
    workers = settings.workers if workers is None else max(1, workers)
    if streams is not None and len(streams) != chains:
        raise ValueError("need one stream per chain")

    with BlockTimer(f"{chains} chains x {steps} steps"):
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    run_chain,
                    config0,
                    steps,
                    sigma,
                    child,
                    thin,
                    target,
                    bounds,
                    None,
                    streams[k] if streams is not None else None,
                )
                for k, child in enumerate(children)
            ]
            return [f.result() for f in futures]
