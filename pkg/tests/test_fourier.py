import numpy as np
import pytest

from hdmi import DataFormatError, convolve_grid, dft_direct, fft_1d, fft_2d
from hdmi.fourier import Grid1D

from helpers import naive_convolve_same, naive_convolve_same_2d


def random_complex(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


class TestFft1d:
    def test_unit_impulse_flat_spectrum(self):
        out = fft_1d([1, 0, 0, 0])
        assert np.allclose(out, np.ones(4), atol=1e-12)

    def test_constant_is_dc_only(self):
        out = fft_1d([1, 1, 1, 1])
        assert np.allclose(out, [4, 0, 0, 0], atol=1e-12)

    def test_matches_direct_dft_length_64(self):
        rng = np.random.default_rng(64)
        x = random_complex(rng, 64)
        assert np.abs(fft_1d(x) - dft_direct(x)).max() < 1e-10

    @pytest.mark.parametrize("n", list(range(1, 65)))
    def test_oracle_equivalence_all_lengths(self, n):
        rng = np.random.default_rng(n)
        x = random_complex(rng, n)
        for inverse in (False, True):
            got = fft_1d(x, inverse=inverse)
            want = dft_direct(x, inverse=inverse)
            assert np.abs(got - want).max() < 1e-10

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 17, 64, 100, 256):
            x = random_complex(rng, n)
            back = fft_1d(fft_1d(x), inverse=True)
            assert np.abs(back - x).max() < 1e-10

    def test_linearity(self):
        rng = np.random.default_rng(1)
        x = random_complex(rng, 128)
        y = random_complex(rng, 128)
        a, b = 2.5, -1.25
        lhs = fft_1d(a * x + b * y)
        rhs = a * fft_1d(x) + b * fft_1d(y)
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_parseval(self):
        rng = np.random.default_rng(2)
        for n in (64, 96):
            x = random_complex(rng, n)
            spec = fft_1d(x)
            time_energy = np.sum(np.abs(x) ** 2)
            freq_energy = np.sum(np.abs(spec) ** 2) / n
            assert abs(time_energy - freq_energy) / time_energy < 1e-9

    def test_rejects_empty(self):
        with pytest.raises(DataFormatError):
            fft_1d([])

    def test_rejects_non_finite(self):
        with pytest.raises(DataFormatError):
            fft_1d([1.0, np.nan, 0.0])
        with pytest.raises(DataFormatError):
            fft_1d([1.0, np.inf])

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        x = random_complex(rng, 300)
        assert np.array_equal(fft_1d(x), fft_1d(x))


class TestDftDirect:
    def test_two_point(self):
        assert np.allclose(dft_direct([1, 0]), [1, 1], atol=1e-14)

    def test_two_point_alternating(self):
        assert np.allclose(dft_direct([1, -1]), [0, 2], atol=1e-14)

    def test_length_17_matches_fft(self):
        rng = np.random.default_rng(17)
        x = random_complex(rng, 17)
        assert np.abs(dft_direct(x) - fft_1d(x)).max() < 1e-10

    def test_guard_rejects_oversize(self):
        with pytest.raises(DataFormatError):
            dft_direct(np.zeros(4097))


class TestFft2d:
    def test_all_ones_dc_only(self):
        out = fft_2d(np.ones((2, 2)))
        want = np.zeros((2, 2), complex)
        want[0, 0] = 4
        assert np.allclose(out, want, atol=1e-12)

    def test_impulse_flat(self):
        a = np.zeros((4, 4))
        a[0, 0] = 1
        assert np.allclose(fft_2d(a), np.ones((4, 4)), atol=1e-12)

    def test_matches_nested_direct(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((8, 8))
        rows = np.array([dft_direct(r) for r in a])
        want = np.array([dft_direct(c) for c in rows.T]).T
        assert np.abs(fft_2d(a) - want).max() < 1e-9

    def test_round_trip(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((12, 20)) + 1j * rng.standard_normal((12, 20))
        back = fft_2d(fft_2d(a), inverse=True)
        assert np.abs(back - a).max() < 1e-9

    def test_rejects_bad_shapes(self):
        with pytest.raises(DataFormatError):
            fft_2d(np.ones(4))
        with pytest.raises(DataFormatError):
            fft_2d(np.ones((1, 5)))
        with pytest.raises(DataFormatError):
            fft_2d([[1.0, 2.0], [3.0]])
        with pytest.raises(DataFormatError):
            fft_2d(np.array([[1.0, np.nan], [0.0, 1.0]]))


class TestConvolveGrid:
    def test_delta_kernel_identity(self):
        out = convolve_grid([0.0, 1.0, 0.0], [1.0], spacing=1.0)
        assert np.allclose(out, [0, 1, 0], atol=1e-12)

    def test_two_tap_kernel(self):
        out = convolve_grid([1.0, 0.0, 0.0, 0.0], [0.5, 0.5], spacing=1.0)
        assert np.allclose(out, [0.5, 0.5, 0, 0], atol=1e-12)

    def test_matches_naive_1d(self):
        rng = np.random.default_rng(10)
        v = rng.standard_normal(100)
        k = rng.standard_normal(25)
        want = naive_convolve_same(v, k) * 0.25
        got = convolve_grid(v, k, spacing=0.25)
        assert np.abs(got - want).max() < 1e-9

    def test_matches_naive_2d(self):
        rng = np.random.default_rng(11)
        v = rng.standard_normal((20, 30))
        k = rng.standard_normal((7, 5))
        want = naive_convolve_same_2d(v, k) * (0.5 * 0.25)
        got = convolve_grid(v, k, spacing=(0.5, 0.25))
        assert np.abs(got - want).max() < 1e-9

    def test_scaling_by_spacing(self):
        v = np.array([0.0, 2.0, 0.0])
        out = convolve_grid(v, [1.0], spacing=0.1)
        assert np.allclose(out, [0, 0.2, 0], atol=1e-13)

    def test_rejects_mismatched_spacing(self):
        with pytest.raises(DataFormatError):
            convolve_grid([1.0, 2.0], [1.0], spacing=0.1, kernel_spacing=0.2)


class TestGrid1d:
    def test_points(self):
        g = Grid1D(-1.0, 0.5, 5)
        assert np.allclose(g.points(), [-1, -0.5, 0, 0.5, 1])

    def test_rejects_bad_grids(self):
        with pytest.raises(DataFormatError):
            Grid1D(0.0, 0.0, 4)
        with pytest.raises(DataFormatError):
            Grid1D(0.0, 1.0, 1)
