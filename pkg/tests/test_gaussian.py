"""Structured-matrix sampling and the |det| Monte Carlo estimator."""

import math

import numpy as np
import pytest

from mhroots import rng
from mhroots.corpus import random_variance_profile
from mhroots.gaussian import (
    abs_det_closed_standard,
    mc_abs_det,
    minor_expansion_bounds,
    permanent_sandwich,
    sample_matrix,
    variance_profile,
)
from mhroots.shape import validate


class TestSampling:
    def test_zero_variances_give_zero_matrix(self):
        mat = sample_matrix(np.zeros((3, 3)), seed=1)
        assert (mat == 0).all()

    def test_scalar_profile(self):
        mat = sample_matrix(np.ones((1, 1)), seed=1)
        assert mat.shape == (1, 1) and math.isfinite(mat[0, 0])

    def test_entrywise_variances(self):
        var = np.array([[1.0, 2.0], [4.0, 1.0]])
        draws = rng.normals(77, 0, 100_000, 4) * np.sqrt(var).ravel()[None, :]
        sample_var = draws.var(axis=0, ddof=1).reshape(2, 2)
        assert np.all(np.abs(sample_var - var) <= 0.05 * var)

    def test_profile_from_shape(self):
        spec = validate((1, 1), [[1, 2], [2, 1]])
        assert variance_profile(spec).tolist() == [[1.0, 2.0], [2.0, 1.0]]

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            mc_abs_det(np.array([[1.0, -1.0], [0.0, 1.0]]), 100, seed=0)


class TestClosedStandard:
    def test_small_dimensions(self):
        assert abs_det_closed_standard(1) == pytest.approx(math.sqrt(2 / math.pi))
        assert abs_det_closed_standard(2) == pytest.approx(1.0)
        assert abs_det_closed_standard(3) == pytest.approx(2 * math.sqrt(2 / math.pi))
        assert abs_det_closed_standard(4) == pytest.approx(3.0)


class TestMonteCarlo:
    def test_scalar_standard_gaussian(self):
        est = mc_abs_det(np.ones((1, 1)), 200_000, seed=5)
        assert abs(est.mean - math.sqrt(2 / math.pi)) <= 4 * est.stderr

    def test_two_by_two_standard(self):
        est = mc_abs_det(np.ones((2, 2)), 200_000, seed=6)
        assert abs(est.mean - 1.0) <= 4 * est.stderr

    def test_three_by_three_standard(self):
        est = mc_abs_det(np.ones((3, 3)), 100_000, seed=7)
        assert abs(est.mean - abs_det_closed_standard(3)) <= 4 * est.stderr

    def test_zero_column_exact_zero(self):
        var = np.ones((3, 3))
        var[:, 1] = 0.0
        est = mc_abs_det(var, 10_000, seed=8)
        assert est.mean == 0.0 and est.stderr == 0.0

    def test_bitwise_determinism_across_workers(self):
        var = variance_profile(validate((1, 1), [[1, 2], [2, 1]]))
        runs = [mc_abs_det(var, 200_000, seed=9, workers=w) for w in (1, 2, 8)]
        assert runs[0].mean == runs[1].mean == runs[2].mean
        assert runs[0].stderr == runs[1].stderr == runs[2].stderr

    def test_row_scale_equivariance(self):
        base = mc_abs_det(np.ones((2, 2)), 200_000, seed=10)
        scaled_var = np.array([[4.0, 4.0], [1.0, 1.0]])
        scaled = mc_abs_det(scaled_var, 200_000, seed=11)
        joint = math.hypot(2 * base.stderr, scaled.stderr)
        assert abs(scaled.mean - 2 * base.mean) <= 4 * joint

    def test_minimum_samples(self):
        with pytest.raises(ValueError):
            mc_abs_det(np.ones((2, 2)), 1, seed=0)

    def test_log_domain_path_matches_direct_computation(self, monkeypatch):
        # above dimension 40 moments accumulate in the log domain; force
        # several batches so the streaming merge is exercised too
        import mhroots.gaussian as gaussian_mod

        monkeypatch.setattr(gaussian_mod, "BATCH", 1024)
        n = 41
        est = mc_abs_det(np.ones((n, n)), 4000, seed=55)
        direct = np.abs(np.linalg.det(rng.normals(55, 0, 4000, n * n).reshape(-1, n, n)))
        assert est.mean == pytest.approx(direct.mean(), rel=1e-10)
        assert est.stderr == pytest.approx(direct.std(ddof=1) / math.sqrt(4000), rel=1e-8)


class TestOrthogonalInvariance:
    def test_block_rotation_leaves_mean_unchanged(self):
        # one block of two variables: rotate both columns by a random angle
        spec = validate((2,), [[1], [2]])
        var = variance_profile(spec)
        n = 2
        draws = rng.normals(13, 0, 50_000, n * n) * np.sqrt(var).ravel()[None, :]
        mats = draws.reshape(-1, n, n)
        plain = np.abs(np.linalg.det(mats))
        angles = rng.uniforms(14, 0, mats.shape[0], 1)[:, 0] * 2 * np.pi
        cos, sin = np.cos(angles), np.sin(angles)
        rot = np.zeros((mats.shape[0], 2, 2))
        rot[:, 0, 0] = cos
        rot[:, 0, 1] = -sin
        rot[:, 1, 0] = sin
        rot[:, 1, 1] = cos
        rotated = np.abs(np.linalg.det(mats @ rot))
        se = math.hypot(
            plain.std(ddof=1) / math.sqrt(plain.size),
            rotated.std(ddof=1) / math.sqrt(rotated.size),
        )
        assert abs(plain.mean() - rotated.mean()) <= 4 * se


class TestMinorExpansion:
    def test_base_case_collapses(self):
        upper, lower = minor_expansion_bounds(np.array([[4.0]]), 1, [1.0])
        expected = math.sqrt(2 / math.pi) * 2.0
        assert upper == pytest.approx(expected)
        assert lower == pytest.approx(expected)

    def test_all_ones_two_by_two(self):
        minor = math.sqrt(2 / math.pi)  # mean |N(0,1)|
        upper, lower = minor_expansion_bounds(np.ones((2, 2)), 1, [minor, minor])
        assert upper == pytest.approx(4 / math.pi)
        assert lower == pytest.approx((2 / math.pi) * math.sqrt(2))
        assert upper >= 1.0 >= lower  # true mean is 1

    def test_single_nonzero_per_row_is_tight(self):
        var = np.array([[2.0, 0.0], [0.0, 3.0]])
        upper, lower = minor_expansion_bounds(var, 1, [math.sqrt(2 / math.pi), 0.0])
        assert upper == pytest.approx(lower)

    def test_permanent_sandwich_values(self):
        upper, lower = permanent_sandwich(np.ones((2, 2)))
        assert upper == pytest.approx(4 / math.pi)
        assert lower == pytest.approx((2 / math.pi) * math.sqrt(2))

    def test_permanent_sandwich_on_random_profiles(self):
        for t in range(50):
            var = random_variance_profile(5005, t, max_n=5)
            est = mc_abs_det(var, 20_000, seed=600 + t)
            upper, lower = permanent_sandwich(var)
            slack = 4 * est.stderr + 1e-9
            assert upper + slack >= est.mean >= lower - slack, (t, var)
