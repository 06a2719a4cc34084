import math

import numpy as np
import pytest
from scipy import stats

from bridgefill.errors import InvalidSpecError
from bridgefill.generators import (
    AngularWalk,
    DiscreteBrownian,
    FixedVelocity,
    InternalStateTable,
    InternalStateWalk,
    RunTumble,
    default_internal_state_table,
    effective_state_probs,
    generate,
    spec_from_dict,
    spec_to_dict,
)
from bridgefill.metrics import path_length
from bridgefill.seeding import child_seed

ALL_SPECS = [
    DiscreteBrownian(sigma=0.5),
    DiscreteBrownian(sigma=1.0, target=(10.0, 0.0)),
    FixedVelocity(v=2.0),
    AngularWalk(sigma=0.3, v=1.0),
    InternalStateWalk(uniformity=0.4, step=0.5),
    RunTumble(rate=1.0, v=1.0),
]


class TestGenerateBasics:
    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: type(s).__name__)
    def test_shape_times_origin(self, spec):
        traj = generate(spec, 37, 123)
        assert len(traj) == 38
        assert np.array_equal(traj.times, np.arange(38.0))
        assert np.array_equal(traj.coords[0], [0.0, 0.0])

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: type(s).__name__)
    def test_deterministic(self, spec):
        a = generate(spec, 50, 99)
        b = generate(spec, 50, 99)
        c = generate(spec, 50, 100)
        assert np.array_equal(a.coords, b.coords)
        assert not np.array_equal(a.coords, c.coords)

    def test_steps_validation(self):
        with pytest.raises(InvalidSpecError):
            generate(FixedVelocity(), 0, 1)


class TestFixedVelocity:
    def test_step_norms_are_exactly_v(self):
        traj = generate(FixedVelocity(v=1.5), 200, 5)
        norms = np.hypot(*np.diff(traj.coords, axis=0).T)
        assert norms == pytest.approx(np.full(200, 1.5), rel=1e-12)


class TestAngularWalk:
    def test_zero_noise_is_straight(self):
        traj = generate(AngularWalk(sigma=0.0, v=1.0), 10, 3)
        assert len(traj) == 11
        assert path_length(traj) == pytest.approx(10.0, rel=1e-12)
        chord = np.hypot(*(traj.coords[-1] - traj.coords[0]))
        assert chord == pytest.approx(10.0, rel=1e-12)

    def test_large_noise_approaches_fixed_velocity(self):
        # net displacements over 1000 steps should be statistically
        # indistinguishable between a very noisy angular walk and the
        # fixed-velocity walk
        n_walks = 250
        wild = [
            np.hypot(*generate(AngularWalk(sigma=50.0), 1000,
                               child_seed(1, i)).coords[-1])
            for i in range(n_walks)
        ]
        fixed = [
            np.hypot(*generate(FixedVelocity(), 1000,
                               child_seed(2, i)).coords[-1])
            for i in range(n_walks)
        ]
        assert stats.ks_2samp(wild, fixed).pvalue > 1e-3


class TestRunTumble:
    @staticmethod
    def _change_frequency(traj):
        # reconstructing headings from positions picks up last-ulp noise, so
        # only angle jumps above a tolerance count as tumbles
        steps = np.diff(traj.coords, axis=0)
        angles = np.arctan2(steps[:, 1], steps[:, 0])
        return np.mean(np.abs(np.diff(angles)) > 1e-9)

    def test_direction_change_frequency(self):
        traj = generate(RunTumble(rate=1.0), 100_000, 42)
        assert self._change_frequency(traj) == pytest.approx(
            1.0 - math.exp(-1.0), abs=0.01
        )

    def test_small_rate_rarely_turns(self):
        traj = generate(RunTumble(rate=0.01), 10_000, 7)
        assert self._change_frequency(traj) == pytest.approx(
            1.0 - math.exp(-0.01), abs=0.005
        )

    def test_rate_must_be_positive(self):
        with pytest.raises(InvalidSpecError):
            RunTumble(rate=0.0)


class TestDiscreteBrownian:
    def test_pinned_target_is_exact(self):
        spec = DiscreteBrownian(sigma=1.0, target=(10.0, 0.0))
        for seed in range(5):
            traj = generate(spec, 200, seed)
            assert np.array_equal(traj.coords[-1], [10.0, 0.0])

    def test_increments_around_trend(self):
        # per-step increments about the linear trend are Gaussian with the
        # requested scale (up to the 1/n bridge correction)
        sigma, steps = 0.7, 10_000
        traj = generate(DiscreteBrownian(sigma=sigma, target=(10.0, 0.0)), steps, 11)
        trend = np.array([10.0, 0.0]) / steps
        residuals = np.diff(traj.coords, axis=0) - trend
        pooled = residuals.ravel()
        assert pooled.std(ddof=1) == pytest.approx(sigma, rel=0.03)
        assert stats.kstest(pooled / sigma, "norm").pvalue > 1e-3

    def test_free_walk_increment_scale(self):
        traj = generate(DiscreteBrownian(sigma=2.0), 10_000, 3)
        incr = np.diff(traj.coords, axis=0).ravel()
        assert incr.std(ddof=1) == pytest.approx(2.0, rel=0.03)


class TestInternalState:
    def test_positions_stay_on_grid(self):
        for step in [1.0, 0.5, 0.3]:
            traj = generate(InternalStateWalk(uniformity=0.2, step=step), 500, 9)
            cells = traj.coords / step
            assert np.allclose(cells, np.round(cells), atol=1e-9)

    def test_includes_pauses_and_moves(self):
        traj = generate(InternalStateWalk(), 2000, 21)
        steps = np.hypot(*np.diff(traj.coords, axis=0).T)
        assert (steps == 0).any()
        assert (steps > 0).any()

    def test_default_table(self):
        table = default_internal_state_table()
        moving_sum = (table.keep_heading + table.turn_left + table.turn_right
                      + table.reverse + table.stop)
        assert moving_sum == 1.0
        assert table.stay_stopped + table.start_moving == 1.0
        assert table.reverse < table.turn_left == table.turn_right < table.keep_heading

    def test_uniform_blend_extremes(self):
        table = default_internal_state_table()
        moving, stationary = effective_state_probs(table, 1.0)
        assert moving == pytest.approx(np.full(5, 0.2))
        assert stationary == pytest.approx(np.full(2, 0.5))
        moving0, stationary0 = effective_state_probs(table, 0.0)
        assert moving0 == pytest.approx([0.85, 0.06, 0.06, 0.01, 0.02])
        assert stationary0 == pytest.approx([0.95, 0.05])

    def test_table_validation(self):
        with pytest.raises(InvalidSpecError):
            InternalStateTable(0.9, 0.06, 0.05, 0.01, -0.02, 0.95, 0.05)
        with pytest.raises(InvalidSpecError):
            InternalStateTable(0.85, 0.07, 0.05, 0.01, 0.02, 0.95, 0.05)
        with pytest.raises(InvalidSpecError):
            InternalStateTable(0.05, 0.06, 0.06, 0.01, 0.82, 0.95, 0.05)
        with pytest.raises(InvalidSpecError):
            InternalStateWalk(uniformity=1.5)


class TestSerialisation:
    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: type(s).__name__)
    def test_round_trip(self, spec):
        assert spec_from_dict(spec_to_dict(spec)) == spec

    def test_unknown_model(self):
        with pytest.raises(InvalidSpecError):
            spec_from_dict({"model": "levy-flight"})

    def test_unknown_parameter(self):
        with pytest.raises(InvalidSpecError):
            spec_from_dict({"model": "fixed-velocity", "speed": 1.0})

    def test_aliases(self):
        assert spec_from_dict({"model": "run-tumble", "l": 2.0}) == RunTumble(rate=2.0)
        assert spec_from_dict(
            {"model": "internal-state", "s": 0.5}
        ) == InternalStateWalk(uniformity=0.5)

    def test_half_target_rejected(self):
        with pytest.raises(InvalidSpecError):
            spec_from_dict({"model": "discrete-brownian", "sigma": 1.0,
                            "target_x": 10.0})

    def test_run_tumble_requires_rate(self):
        with pytest.raises(InvalidSpecError):
            spec_from_dict({"model": "run-tumble"})
