import numpy as np
import pytest

from hdmi import (DataFormatError, DegenerateInputError, Kernel,
                  bandwidth_isj, bandwidth_silverman, kde_1d, kde_2d,
                  linear_binning)
from hdmi.fourier import Grid1D

from helpers import naive_kde


def silverman_reference(x):
    sd = np.std(x, ddof=1)
    iqr = np.percentile(x, 75) - np.percentile(x, 25)
    return 0.9 * min(sd, iqr / 1.34) * len(x) ** (-0.2)


class TestSilverman:
    def test_matches_formula_on_normal_sample(self):
        x = np.random.default_rng(42).standard_normal(1000)
        bw = bandwidth_silverman(x)
        assert bw.value == pytest.approx(silverman_reference(x), rel=1e-12)
        assert bw.method == "silverman"

    def test_two_point_hand_value(self):
        x = np.array([0.0, 1.0])
        want = 0.9 * min(np.std(x, ddof=1), 0.5 / 1.34) * 2 ** (-0.2)
        assert bandwidth_silverman(x).value == pytest.approx(want, rel=1e-12)

    def test_constant_input_errors(self):
        with pytest.raises(DegenerateInputError):
            bandwidth_silverman(np.full(100, 3.0))


class TestIsj:
    def test_close_to_silverman_on_normal_sample(self):
        x = np.random.default_rng(7).standard_normal(5000)
        isj = bandwidth_isj(x).value
        silv = bandwidth_silverman(x).value
        assert abs(isj - silv) / silv < 0.30

    def test_bimodal_smaller_than_silverman(self):
        rng = np.random.default_rng(8)
        x = np.concatenate([rng.normal(-3, 1, 2500), rng.normal(3, 1, 2500)])
        assert bandwidth_isj(x).value < bandwidth_silverman(x).value

    def test_constant_input_errors(self):
        with pytest.raises(DegenerateInputError):
            bandwidth_isj(np.zeros(100))

    def test_grid_size_validation(self):
        x = np.random.default_rng(9).standard_normal(100)
        with pytest.raises(DataFormatError):
            bandwidth_isj(x, grid_size=100)
        with pytest.raises(DataFormatError):
            bandwidth_isj(x, grid_size=300)

    def test_deterministic(self):
        x = np.random.default_rng(10).standard_normal(500)
        assert bandwidth_isj(x).value == bandwidth_isj(x).value


class TestLinearBinning:
    def test_point_on_node_gets_full_mass(self):
        grid = Grid1D(0.0, 1.0, 5)
        out = linear_binning(np.array([2.0]), grid)
        assert out[2] == 1.0
        assert out.sum() == 1.0

    def test_midpoint_splits_evenly(self):
        grid = Grid1D(0.0, 1.0, 5)
        out = linear_binning(np.array([2.5]), grid)
        assert out[2] == pytest.approx(0.5)
        assert out[3] == pytest.approx(0.5)

    def test_mass_conservation(self):
        rng = np.random.default_rng(11)
        x = rng.uniform(-3, 3, 1000)
        grid = Grid1D(-3.0, 6.0 / 1023, 1024)
        out = linear_binning(x, grid)
        assert abs(out.sum() - 1.0) < 1e-12

    def test_rejects_data_outside_grid(self):
        grid = Grid1D(0.0, 1.0, 5)
        with pytest.raises(DataFormatError):
            linear_binning(np.array([5.5]), grid)

    def test_custom_weights(self):
        grid = Grid1D(0.0, 1.0, 3)
        out = linear_binning(np.array([0.0, 2.0]), grid,
                             weights=np.array([0.25, 0.75]))
        assert out[0] == 0.25 and out[2] == 0.75


class TestKde1d:
    def test_standard_normal_peak(self):
        x = np.random.default_rng(12).standard_normal(10000)
        est = kde_1d(x)
        at_zero = est.density[np.argmin(np.abs(est.grid.points()))]
        assert abs(at_zero - 1 / np.sqrt(2 * np.pi)) < 0.05

    def test_unit_mass(self):
        rng = np.random.default_rng(13)
        for data in (rng.standard_normal(50), rng.uniform(0, 1, 400),
                     rng.exponential(2.0, 1000)):
            for kernel in Kernel:
                est = kde_1d(data, kernel=kernel)
                assert 0.99 <= est.mass() <= 1.01
                assert est.density.min() >= 0.0

    def test_uniform_interior(self):
        x = np.random.default_rng(14).uniform(0, 1, 256)
        est = kde_1d(x)
        pts = est.grid.points()
        interior = (pts >= 0.2) & (pts <= 0.8)
        assert np.abs(est.density[interior] - 1.0).max() < 0.15

    def test_matches_naive_kde_epanechnikov(self):
        x = np.random.default_rng(15).standard_normal(500)
        est = kde_1d(x, bandwidth=0.35, grid_size=1024)
        want = naive_kde(x, est.grid.points(), 0.35, "epanechnikov")
        assert np.abs(est.density - want).max() < 2e-3

    def test_matches_naive_kde_gaussian(self):
        x = np.random.default_rng(16).standard_normal(300)
        est = kde_1d(x, kernel=Kernel.GAUSSIAN, bandwidth=0.3, grid_size=1024)
        want = naive_kde(x, est.grid.points(), 0.3, "gaussian")
        assert np.abs(est.density - want).max() < 2e-3

    def test_shift_equivariance(self):
        x = np.random.default_rng(17).standard_normal(400)
        shift = 37.25
        a = kde_1d(x, bandwidth=0.4)
        b = kde_1d(x + shift, bandwidth=0.4)
        assert b.grid.origin == pytest.approx(a.grid.origin + shift, abs=1e-9)
        assert np.abs(a.density - b.density).max() < 1e-9

    def test_grid_size_must_be_power_of_two(self):
        x = np.random.default_rng(18).standard_normal(100)
        with pytest.raises(DataFormatError):
            kde_1d(x, grid_size=1000)

    def test_propagates_constant_error(self):
        with pytest.raises(DegenerateInputError):
            kde_1d(np.full(50, 2.0))


class TestKde2d:
    def test_independent_normals_center_value(self):
        rng = np.random.default_rng(19)
        y = rng.standard_normal(10000)
        x = rng.standard_normal(10000)
        est = kde_2d(y, x)
        iy = np.argmin(np.abs(est.grid.axis_y.points()))
        ix = np.argmin(np.abs(est.grid.axis_x.points()))
        assert abs(est.density[iy, ix] - 1 / (2 * np.pi)) < 0.05

    def test_unit_mass(self):
        rng = np.random.default_rng(20)
        y = rng.uniform(0, 2, 500)
        x = rng.exponential(1.0, 500)
        for kernel in Kernel:
            est = kde_2d(y, x, kernel=kernel)
            assert 0.98 <= est.mass() <= 1.02
            assert est.density.min() >= 0.0

    def test_perfect_correlation_concentrates_on_diagonal(self):
        x = np.random.default_rng(21).standard_normal(2000)
        est = kde_2d(x, x)
        h = max(est.grid.axis_y.spacing, est.grid.axis_x.spacing)
        gy = est.grid.axis_y.points()
        gx = est.grid.axis_x.points()
        bw = bandwidth_isj(x).value
        off_band = np.abs(gy[:, None] - gx[None, :]) > 4 * bw
        off_mass = est.density[off_band].sum() \
            * est.grid.axis_y.spacing * est.grid.axis_x.spacing
        assert off_mass < 0.1
        assert h > 0

    def test_marginal_consistency(self):
        rng = np.random.default_rng(22)
        y = rng.standard_normal(2000)
        x = rng.uniform(-1, 1, 2000)
        est = kde_2d(y, x)
        dy = est.grid.axis_y.spacing
        dx = est.grid.axis_x.spacing
        marg_y = est.density.sum(axis=1) * dx
        marg_x = est.density.sum(axis=0) * dy
        assert abs(marg_y.sum() * dy - 1.0) < 0.02
        assert abs(marg_x.sum() * dx - 1.0) < 0.02

    def test_length_mismatch(self):
        with pytest.raises(DataFormatError):
            kde_2d(np.zeros(10), np.zeros(11))

    def test_degenerate_axis(self):
        x = np.random.default_rng(23).standard_normal(100)
        with pytest.raises(DegenerateInputError):
            kde_2d(np.full(100, 1.0), x)
