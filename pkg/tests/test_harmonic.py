import numpy as np
import pytest

from bayespitch import (
    DegenerateFrameError,
    build_basis,
    coefficient_estimate,
    fit_ratio,
    fit_ratio_grid,
    frame_signal,
    make_pitch_grid,
)
from bayespitch.harmonic import R2_CLAMP

from .conftest import make_frame
from .oracles import oracle_projection_ratio


class TestFrameSignal:
    def test_paper_frame_and_hop(self):
        audio = np.random.default_rng(0).standard_normal(16000)
        frames = frame_signal(audio, 16000.0, 25.0, 10.0)
        assert frames[0].size == 400
        assert frames[1].start_time * 16000.0 == 160

    def test_exactly_one_frame(self):
        audio = np.ones(400)
        frames = frame_signal(audio, 16000.0, 25.0, 10.0)
        assert len(frames) == 1

    def test_slice_positions(self):
        audio = np.arange(1000.0)
        frames = frame_signal(audio, 16000.0, 25.0, 10.0)
        assert len(frames) == 4
        starts = [int(f.start_time * 16000) for f in frames]
        assert starts == [0, 160, 320, 480]
        for f, start in zip(frames, starts):
            np.testing.assert_array_equal(f.samples, audio[start : start + 400])

    def test_indices_one_based(self):
        frames = frame_signal(np.ones(1000), 16000.0, 25.0, 10.0)
        assert [f.index for f in frames] == [1, 2, 3, 4]

    def test_too_short_raises(self):
        with pytest.raises(ValueError, match="shorter than one"):
            frame_signal(np.ones(100), 16000.0, 25.0, 10.0)


class TestPitchGrid:
    def test_paper_default_range(self):
        grid = make_pitch_grid(70.0, 400.0, 16000.0, 16384, 10)
        assert grid.bin_lo == 72
        assert grid.bin_hi == 409
        assert grid.size == 338

    def test_omegas_increasing(self, default_grid):
        assert np.all(np.diff(default_grid.omegas) > 0)

    def test_nyquist_forces_order_one(self):
        grid = make_pitch_grid(4000.0, 4100.0, 16000.0, 16384, 10)
        assert grid.valid_orders[0] == 1

    def test_every_bin_supports_an_order(self, default_grid):
        assert np.all(default_grid.valid_orders >= 1)

    def test_empty_range_raises(self):
        with pytest.raises(ValueError, match="empty pitch grid"):
            make_pitch_grid(100.0, 100.5, 16000.0, 64, 10)

    def test_bad_range_raises(self):
        with pytest.raises(ValueError, match="Nyquist"):
            make_pitch_grid(70.0, 9000.0, 16000.0, 16384, 10)


class TestBuildBasis:
    def test_exact_trig_values(self):
        basis = build_basis(np.pi / 2, 1, 4)
        np.testing.assert_allclose(basis.matrix[:, 0], [0, -1, 0, 1], atol=1e-12)
        np.testing.assert_allclose(basis.matrix[:, 1], [1, 0, -1, 0], atol=1e-12)

    def test_shape(self):
        basis = build_basis(0.1, 4, 64)
        assert basis.matrix.shape == (64, 8)

    def test_near_orthogonal_gram(self):
        basis = build_basis(2 * np.pi * 200 / 16000, 3, 400)
        gram = basis.matrix.T @ basis.matrix
        np.testing.assert_allclose(gram, 200.0 * np.eye(6), atol=0.02 * 200.0)

    def test_nyquist_violation(self):
        with pytest.raises(ValueError, match="Nyquist"):
            build_basis(1.0, 4, 64)

    def test_underdetermined(self):
        with pytest.raises(ValueError, match="underdetermined"):
            build_basis(0.1, 5, 8)


class TestCoefficientEstimate:
    def test_recovers_in_span_weights(self, rng):
        basis = build_basis(0.3, 3, 64)
        weights = rng.standard_normal(6)
        frame = make_frame(basis.matrix @ weights)
        np.testing.assert_allclose(coefficient_estimate(frame, basis), weights, rtol=1e-8)

    def test_orthogonal_signal_gives_zero(self):
        basis = build_basis(np.pi / 2, 1, 4)
        frame = make_frame([1.0, 0.0, 1.0, 0.0])  # orthogonal to both columns
        np.testing.assert_allclose(coefficient_estimate(frame, basis), 0.0, atol=1e-12)

    def test_matches_normal_equation_solve(self, rng):
        basis = build_basis(2 * np.pi * 300 / 8000, 2, 64)
        y = rng.standard_normal(64)
        direct = np.linalg.solve(basis.matrix.T @ basis.matrix, basis.matrix.T @ y)
        np.testing.assert_allclose(
            coefficient_estimate(make_frame(y), basis), direct, atol=1e-10
        )


class TestFitRatio:
    def test_in_span_signal_hits_clamp(self, rng):
        basis = build_basis(0.3, 3, 64)
        y = basis.matrix @ rng.standard_normal(6)
        assert fit_ratio(make_frame(y - y.mean() + 0.0), 0.3, 3) == pytest.approx(
            R2_CLAMP, abs=1e-12
        )

    def test_orthogonal_signal_gives_zero(self):
        frame = make_frame([1.0, 0.0, 1.0, 0.0])
        assert fit_ratio(frame, np.pi / 2, 1) == pytest.approx(0.0, abs=1e-12)

    def test_matches_projection_oracle(self, rng):
        omega = 2 * np.pi * 100 / 8000
        y = rng.standard_normal(64)
        y -= y.mean()
        basis = build_basis(omega, 3, 64)
        expected = oracle_projection_ratio(y, basis.matrix)
        assert fit_ratio(make_frame(y), omega, 3) == pytest.approx(expected, abs=1e-10)

    def test_zero_energy_raises(self):
        with pytest.raises(DegenerateFrameError):
            fit_ratio(make_frame(np.zeros(64)), 0.3, 2)

    def test_scale_invariance(self, rng):
        y = rng.standard_normal(128)
        a = fit_ratio(make_frame(y), 0.25, 4)
        b = fit_ratio(make_frame(1234.5 * y), 0.25, 4)
        assert a == pytest.approx(b, abs=1e-12)

    def test_projection_identity(self, rng):
        omega, order = 0.21, 3
        y = rng.standard_normal(96)
        y -= y.mean()
        basis = build_basis(omega, order, 96)
        weights = coefficient_estimate(make_frame(y), basis)
        residual = y - basis.matrix @ weights
        r2 = fit_ratio(make_frame(y), omega, order)
        energy = y @ y
        assert r2 * energy + residual @ residual == pytest.approx(energy, rel=1e-8)


class TestFitRatioGrid:
    def test_matches_scalar_fit_ratio(self, rng, small_grid):
        frame = make_frame(rng.standard_normal(256), sample_rate=8000.0)
        r2 = fit_ratio_grid(frame, small_grid)
        for i, omega in enumerate(small_grid.omegas):
            for k in range(1, small_grid.valid_orders[i] + 1):
                assert r2[i, k - 1] == pytest.approx(
                    fit_ratio(frame, omega, k), abs=1e-10
                )

    def test_synthetic_argmax(self, default_grid):
        from bayespitch import synth_signal

        y = synth_signal(200.0, 3, 16000.0, 0.025)
        r2 = fit_ratio_grid(make_frame(y[:400]), default_grid)
        flat = np.nanargmax(r2)
        bin_idx, k_idx = divmod(flat, default_grid.k_max)
        f_hat = (default_grid.bin_lo + bin_idx) * 16000.0 / 16384
        assert abs(f_hat - 200.0) <= 16000.0 / 16384
        # nested orders >= 3 all capture the full signal
        assert k_idx + 1 >= 3
        assert r2[bin_idx, 2] > 0.999

    def test_white_noise_stays_low(self, default_grid):
        rng = np.random.default_rng(7)
        count_high = 0
        for _ in range(100):
            frame = make_frame(rng.standard_normal(400))
            r2 = fit_ratio_grid(frame, default_grid)
            if np.nanmax(r2) >= 0.5:
                count_high += 1
        assert count_high == 0

    def test_values_in_unit_interval(self, rng, default_grid):
        frame = make_frame(rng.standard_normal(400))
        r2 = fit_ratio_grid(frame, default_grid)
        valid = r2[~np.isnan(r2)]
        assert np.all(valid >= 0.0)
        assert np.all(valid <= 1.0)

    def test_monotone_in_order(self, rng, default_grid):
        frame = make_frame(rng.standard_normal(400))
        r2 = fit_ratio_grid(frame, default_grid)
        diffs = np.diff(r2, axis=1)
        assert np.nanmin(diffs) >= -1e-12

    def test_masked_states_are_nan(self):
        grid = make_pitch_grid(1500.0, 3900.0, 16000.0, 16384, 10)
        assert np.any(~grid.valid)
        frame = make_frame(np.random.default_rng(0).standard_normal(400))
        r2 = fit_ratio_grid(frame, grid)
        assert np.all(np.isnan(r2[~grid.valid]))
        assert not np.any(np.isnan(r2[grid.valid]))

    def test_deterministic(self, rng, default_grid):
        frame = make_frame(rng.standard_normal(400))
        first = fit_ratio_grid(frame, default_grid)
        second = fit_ratio_grid(frame, default_grid)
        np.testing.assert_array_equal(first, second)

    def test_zero_energy_raises(self, default_grid):
        with pytest.raises(DegenerateFrameError):
            fit_ratio_grid(make_frame(np.full(400, 3.7)), default_grid)
