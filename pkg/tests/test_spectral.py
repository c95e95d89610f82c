import numpy as np
import pytest

from gyrator.core import ComplexField, centered_indices, nrmse
from gyrator.errors import ShapeError, SingularParameterError
from gyrator.spectral import (
    central_block,
    centered_dft2,
    chirp_grid,
    fourier_upsample,
    linear_convolve2,
    zero_pad_center,
)

from conftest import random_field


def brute_force_centered_dft2(field, sign):
    n1, n2 = field.shape
    mc, nc = centered_indices(n1), centered_indices(n2)
    out = np.zeros((n1, n2), dtype=complex)
    for pi, p in enumerate(mc):
        for qi, q in enumerate(nc):
            kern = np.exp(sign * 2j * np.pi * (np.add.outer(p * mc / n1, q * nc / n2)))
            out[pi, qi] = np.sum(kern * field.data)
    return out


class TestCenteredDft2:
    def test_constant_ones_gives_centered_delta(self):
        f = ComplexField(np.ones((7, 5)))
        out = centered_dft2(f, -1)
        expected = np.zeros((7, 5), dtype=complex)
        expected[3, 2] = 35.0
        assert np.abs(out.data - expected).max() <= 1e-12

    def test_delta_gives_ones(self):
        data = np.zeros((7, 5), dtype=complex)
        data[3, 2] = 1.0
        out = centered_dft2(ComplexField(data), -1)
        assert np.abs(out.data - 1.0).max() <= 1e-12

    @pytest.mark.parametrize("shape", [(7, 5), (6, 4), (5, 8)])
    @pytest.mark.parametrize("sign", [-1, 1])
    def test_matches_brute_force(self, rng, shape, sign):
        g = random_field(rng, *shape)
        out = centered_dft2(g, sign)
        ref = brute_force_centered_dft2(g, sign)
        assert nrmse(ref, out.data) <= 1e-10

    def test_parseval(self, rng):
        g = random_field(rng, 9, 6)
        out = centered_dft2(g, -1)
        lhs = np.sum(np.abs(out.data) ** 2)
        rhs = 9 * 6 * np.sum(np.abs(g.data) ** 2)
        assert abs(lhs - rhs) <= 1e-9 * rhs

    def test_round_trip_scales_by_grid_size(self, rng):
        g = random_field(rng, 8, 5)
        back = centered_dft2(centered_dft2(g, -1), +1)
        assert nrmse(40.0 * g.data, back.data) <= 1e-9

    def test_output_intervals_are_frequency_spacings(self, rng):
        g = random_field(rng, 8, 5, dx=0.25, dy=0.5)
        out = centered_dft2(g, -1)
        assert out.dx == pytest.approx(2 * np.pi / (8 * 0.25))
        assert out.dy == pytest.approx(2 * np.pi / (5 * 0.5))


class TestChirpGrid:
    def test_zero_coefficients_give_ones(self):
        assert np.array_equal(chirp_grid(0, 0, 0, 4, 3).data, np.ones((4, 3)))

    def test_alternating_square_phase(self):
        out = chirp_grid(np.pi, 0.0, 0.0, 3, 1)
        assert np.allclose(out.data.ravel(), [-1.0, 1.0, -1.0], atol=1e-12)

    def test_unit_modulus(self, rng):
        a, b, c = rng.uniform(-2, 2, 3)
        out = chirp_grid(a, b, c, 6, 7)
        assert np.abs(np.abs(out.data) - 1.0).max() <= 1e-14

    def test_non_finite_coefficient_rejected(self):
        with pytest.raises(SingularParameterError):
            chirp_grid(np.inf, 0.0, 0.0, 3, 3)


class TestLinearConvolve2:
    def brute(self, g, k):
        n1, n2 = g.shape
        out = np.zeros((3 * n1 - 2, 3 * n2 - 2), dtype=complex)
        for a in range(n1):
            for b in range(n2):
                out[a:a + 2 * n1 - 1, b:b + 2 * n2 - 1] += g[a, b] * k
        return out

    def test_delta_kernel_central_block_is_input(self, rng):
        g = random_field(rng, 5, 4)
        kern = np.zeros((9, 7), dtype=complex)
        kern[4, 3] = 1.0
        out = linear_convolve2(g, ComplexField(kern))
        assert nrmse(g.data, central_block(out, 5, 4).data) <= 1e-12

    def test_scalar_times_scalar(self):
        out = linear_convolve2(ComplexField([[2.0 + 1j]]), ComplexField([[3.0 - 1j]]))
        assert out.shape == (1, 1)
        assert out.data[0, 0] == pytest.approx((2 + 1j) * (3 - 1j))

    def test_matches_spatial_convolution(self, rng):
        g = random_field(rng, 4, 3)
        kern = random_field(rng, 7, 5)
        out = linear_convolve2(g, kern)
        assert nrmse(self.brute(g.data, kern.data), out.data) <= 1e-10

    @pytest.mark.parametrize("n1", range(1, 9))
    def test_central_block_matches_brute_force_all_small_sizes(self, rng, n1):
        for n2 in range(1, 9):
            g = random_field(rng, n1, n2)
            kern = random_field(rng, 2 * n1 - 1, 2 * n2 - 1)
            full = linear_convolve2(g, kern)
            ref = self.brute(g.data, kern.data)
            assert full.shape == (3 * n1 - 2, 3 * n2 - 2)
            assert nrmse(central_block(ComplexField(ref), n1, n2).data,
                         central_block(full, n1, n2).data) <= 1e-10

    def test_wrong_kernel_size_rejected(self, rng):
        with pytest.raises(ShapeError):
            linear_convolve2(random_field(rng, 4), random_field(rng, 5, 7))


class TestPaddingHelpers:
    def test_pad_then_crop_is_identity(self, rng):
        g = random_field(rng, 5, 6)
        padded = zero_pad_center(g, 11, 9)
        assert np.array_equal(central_block(padded, 5, 6).data, g.data)

    def test_fourier_upsample_preserves_coincident_samples(self, rng):
        # doubling an even grid: original samples reappear at every other point
        g = random_field(rng, 8, 8)
        up = fourier_upsample(g, 16, 16)
        assert up.dx == pytest.approx(g.dx / 2)
        assert np.abs(up.data[::2, ::2] - g.data).max() <= 1e-12 * np.abs(g.data).max()
