import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.stats import chisquare

from delaunay_measure.errors import CoincidingPoints, MeasureDriftError
from delaunay_measure.mesh import PointConfig, delaunay_build
from delaunay_measure.sampler import (
    TARGET_KAHLER,
    TARGET_UNIT,
    SampleStream,
    acceptance_probability,
    audit,
    detailed_balance_gap,
    in_bounds,
    initial_state,
    log_target,
    mh_step,
    run_chain,
    run_chains,
)

SIGMA = 0.05


def test_acceptance_rule():
    assert acceptance_probability(0.0, 1.0) == 1.0
    assert acceptance_probability(1.0, 0.0) == pytest.approx(math.exp(-1.0))
    for a, b in [(0.0, 3.0), (2.5, -1.0), (-4.0, -4.0)]:
        assert detailed_balance_gap(a, b) == pytest.approx(0.0)


def test_bounds():
    box = (0.0, 1.0, -1.0, 1.0)
    assert in_bounds(0.5 + 0.5j, box)
    assert not in_bounds(1.5, box)
    assert in_bounds(100j, None)


def test_unknown_target(tetra_mesh):
    with pytest.raises(ValueError):
        log_target(tetra_mesh, "uniform")


def test_initial_state_rejects_coinciding_points():
    config = PointConfig.create([0, 1, 1j, 0.25 + 0.25j, 0.25 + 0.25j + 1e-13], fixed=(0, 1, 2))
    with pytest.raises(CoincidingPoints):
        initial_state(config)


def test_sigma_must_be_positive(tetra, rng):
    with pytest.raises(ValueError):
        mh_step(initial_state(tetra), 0.0, rng)


def test_unit_target_accepts_every_valid_move(tetra):
    result = run_chain(tetra, steps=50, sigma=SIGMA, seed=3, target=TARGET_UNIT, audit_interval=1000)
    state = result.state
    assert state.step == 50
    assert state.accepted + state.rejected_invalid == 50
    assert state.accepted > 40


@pytest.mark.parametrize("seed", range(20))
def test_step_follows_the_metropolis_rule(tetra, seed):
    state = initial_state(tetra)
    new = mh_step(state, SIGMA, np.random.default_rng(seed))

    # replay the same draws
    replay = np.random.default_rng(seed)
    v = tetra.free[int(replay.integers(len(tetra.free)))]
    dx, dy = replay.normal(0.0, SIGMA, size=2)
    u = replay.random()
    moved = tetra.moved(v, tetra.points[v] + complex(dx, dy))
    log_new = log_target(delaunay_build(moved))
    alpha = acceptance_probability(state.log_measure, log_new)

    assert new.step == 1
    if u < alpha:
        assert new.accepted == 1
        assert new.config.points[v] == moved.points[v]
        assert new.log_measure == pytest.approx(log_new)
    else:
        assert new.accepted == 0
        assert new.config is tetra


def test_same_seed_same_samples(tetra):
    first = run_chain(tetra, steps=30, sigma=SIGMA, seed=11, thin=3)
    second = run_chain(tetra, steps=30, sigma=SIGMA, seed=11, thin=3)
    assert [s.config.points for s in first.samples] == [s.config.points for s in second.samples]
    assert [s.step for s in first.samples] == list(range(3, 31, 3))


def test_bounds_keep_the_chain_inside(tetra):
    box = (0.2, 0.3, 0.2, 0.3)
    result = run_chain(tetra, steps=40, sigma=0.2, seed=5, bounds=box)
    assert result.state.rejected_invalid > 0
    assert all(in_bounds(s.config.points[3], box) for s in result.samples)


def test_audit_detects_drift(tetra):
    state = initial_state(tetra, TARGET_KAHLER)
    assert audit(state) < 1e-12
    with pytest.raises(MeasureDriftError) as info:
        audit(replace(state, log_measure=state.log_measure + 1e-6))
    assert info.value.details["step"] == 0


def test_chain_writes_its_stream(tetra, tmp_path):
    stream = SampleStream(tmp_path / "chain.jsonl")
    result = run_chain(tetra, steps=20, sigma=SIGMA, seed=1, thin=1, stream=stream)
    records = stream.read()
    assert len(records) == len(result.samples) == 20
    assert records[-1]["step"] == 20
    assert records[-1]["log_measure"] == pytest.approx(result.state.log_measure)
    assert len(records[0]["points"]) == 4


def test_parallel_chains(tetra, tmp_path):
    streams = [SampleStream(tmp_path / f"chain-{k}.jsonl") for k in range(2)]
    results = run_chains(tetra, chains=2, steps=10, sigma=SIGMA, seed=4, thin=5, workers=2, streams=streams)
    again = run_chains(tetra, chains=2, steps=10, sigma=SIGMA, seed=4, thin=5, workers=1)
    assert [r.state.config.points for r in results] == [r.state.config.points for r in again]
    assert results[0].state.config.points != results[1].state.config.points
    assert [len(s.read()) for s in streams] == [2, 2]
    with pytest.raises(ValueError):
        run_chains(tetra, chains=3, steps=1, sigma=SIGMA, streams=streams)


# ── Stream ───────────────────────────────────────────────────────────────────

def test_stream_round_trip(tmp_path):
    stream = SampleStream(tmp_path / "nested" / "samples.jsonl")
    assert stream.read() == []
    for step in (1, 2, 3):
        stream.append({"step": step})
    assert [r["step"] for r in stream] == [1, 2, 3]


def test_stream_skips_malformed_lines(tmp_path):
    path = tmp_path / "samples.jsonl"
    path.write_text('{"step": 1}\nnot json\n\n{"step": 2}\n', encoding="utf-8")
    assert [r["step"] for r in SampleStream(path).read()] == [1, 2]


def test_stream_reset(tmp_path):
    stream = SampleStream(tmp_path / "runs" / "samples.jsonl")
    stream.reset()
    assert stream.path.exists()
    assert stream.read() == []
    stream.append({"step": 0})
    stream.reset()
    assert stream.read() == []


def test_stream_skips_a_torn_last_line(tmp_path):
    stream = SampleStream(tmp_path / "samples.jsonl")
    stream.append({"step": 0})
    with stream.path.open("a", encoding="utf-8") as handle:
        handle.write('{"step": 1, "poi')
    assert [r["step"] for r in stream] == [0]


# ── Distribution ─────────────────────────────────────────────────────────────

@pytest.mark.slow
def test_one_point_histogram_matches_the_density(tetra):
    box = (0.05, 0.45, 0.05, 0.45)
    bins, per_cell = 20, 5
    # thin 50: nearly independent counts
    result = run_chain(tetra, steps=10**6, sigma=0.1, seed=2024, thin=50, bounds=box)
    xs = np.array([s.config.points[3].real for s in result.samples])
    ys = np.array([s.config.points[3].imag for s in result.samples])
    edges = np.linspace(0.05, 0.45, bins + 1)
    counts, _, _ = np.histogram2d(xs, ys, bins=[edges, edges])

    fine = bins * per_cell
    centres = 0.05 + (np.arange(fine) + 0.5) * 0.4 / fine
    weights = np.array([
        [math.exp(log_target(delaunay_build(tetra.moved(3, complex(x, y))))) for y in centres]
        for x in centres
    ])
    expected = weights.reshape(bins, per_cell, bins, per_cell).sum(axis=(1, 3))
    expected *= counts.sum() / expected.sum()

    dof = bins * bins - 1
    statistic = chisquare(counts.ravel(), expected.ravel()).statistic
    assert statistic < dof + 3 * math.sqrt(2 * dof)
