"""Fourier operators against dense-matrix and quadrature oracles."""

import numpy as np
import pytest

from regspec.fourier import (
    SpectrumDF,
    TimeSeries,
    adjoint_synthesis_cf,
    adjoint_synthesis_df,
    dft,
    idft,
    synthesis_df,
    uniform_grid,
    zero_pad,
)


def dft_matrix(p: int) -> np.ndarray:
    """Direct O(P^2) construction, the oracle for the transform."""
    idx = np.arange(p)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / p) / np.sqrt(p)


def synthesis_matrix(n: int, p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(p)) / p) / np.sqrt(p)


class TestDft:
    def test_impulse_is_constant(self):
        np.testing.assert_allclose(dft([1, 0, 0, 0]), 0.5 * np.ones(4), atol=1e-15)

    def test_constant_is_impulse(self):
        np.testing.assert_allclose(dft([1, 1, 1, 1]), [2, 0, 0, 0], atol=1e-14)

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        np.testing.assert_allclose(idft(dft(v)), v, atol=1e-12)

    def test_matches_dense_matrix(self):
        rng = np.random.default_rng(2)
        for p in (1, 2, 5, 16):
            v = rng.standard_normal(p) + 1j * rng.standard_normal(p)
            np.testing.assert_allclose(dft(v), dft_matrix(p) @ v, atol=1e-12)

    def test_unitary_norm(self):
        rng = np.random.default_rng(3)
        v = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        assert abs(np.linalg.norm(dft(v)) - np.linalg.norm(v)) < 1e-12

    def test_symmetric_matrix(self):
        m = dft_matrix(7)
        np.testing.assert_allclose(m, m.T, atol=1e-15)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            dft([])


class TestIdft:
    def test_inverse_of_dft(self):
        rng = np.random.default_rng(4)
        v = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(idft(dft(v)), v, atol=1e-12)

    def test_scaled_impulse_gives_ones(self):
        p = 5
        v = np.zeros(p, dtype=complex)
        v[0] = np.sqrt(p)
        np.testing.assert_allclose(idft(v), np.ones(p), atol=1e-14)

    def test_two_point(self):
        v = np.array([1j, -1j])
        np.testing.assert_allclose(idft(dft(v)), v, atol=1e-14)


class TestZeroPad:
    def test_basic(self):
        np.testing.assert_array_equal(zero_pad([1, 2], 4), [1, 2, 0, 0])

    def test_identity_when_equal(self):
        np.testing.assert_array_equal(zero_pad([1, 2], 2), [1, 2])

    def test_single(self):
        np.testing.assert_array_equal(zero_pad([1], 3), [1, 0, 0])

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            zero_pad([1, 2, 3], 2)


class TestSynthesisDf:
    def test_impulse_amplitude(self):
        a = np.zeros(4, dtype=complex)
        a[0] = 1.0
        np.testing.assert_allclose(synthesis_df(a, 2).samples, [0.5, 0.5], atol=1e-15)

    def test_all_ones_by_direct_summation(self):
        # Oracle: sum the four exponentials by hand at n = 0, 1.
        a = np.ones(4, dtype=complex)
        expected = np.array(
            [sum(np.exp(2j * np.pi * p * n / 4) for p in range(4)) / 2.0 for n in (0, 1)]
        )
        np.testing.assert_allclose(expected, [2, 0], atol=1e-15)
        np.testing.assert_allclose(synthesis_df(a, 2).samples, expected, atol=1e-14)

    def test_equals_head_of_idft(self):
        rng = np.random.default_rng(5)
        a = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        np.testing.assert_allclose(synthesis_df(a, 5).samples, idft(a)[:5], atol=1e-13)

    def test_matches_dense_matrix(self):
        rng = np.random.default_rng(6)
        a = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        np.testing.assert_allclose(
            synthesis_df(a, 3).samples, synthesis_matrix(3, 8) @ a, atol=1e-13
        )

    def test_too_many_samples_rejected(self):
        with pytest.raises(ValueError):
            synthesis_df(np.ones(4), 5)


class TestAdjointSynthesisDf:
    def test_padded_impulse(self):
        np.testing.assert_allclose(
            adjoint_synthesis_df([1, 0], 4).amps, [0.5, 0.5, 0.5, 0.5], atol=1e-15
        )

    def test_adjoint_identity(self):
        rng = np.random.default_rng(7)
        n, p = 3, 8
        a = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lhs = np.vdot(y, synthesis_df(a, n).samples)
        rhs = np.vdot(adjoint_synthesis_df(y, p).amps, a)
        assert abs(lhs - rhs) < 1e-12

    def test_all_ones_square(self):
        np.testing.assert_allclose(
            adjoint_synthesis_df(np.ones(4), 4).amps, [2, 0, 0, 0], atol=1e-14
        )

    def test_pad_too_small_rejected(self):
        with pytest.raises(ValueError):
            adjoint_synthesis_df(np.ones(4), 3)


class TestAdjointSynthesisCf:
    def test_impulse_gives_constant(self):
        grid = np.linspace(0, 0.99, 13)
        out = adjoint_synthesis_cf([1, 0, 0], grid)
        np.testing.assert_allclose(out.values, np.ones(13), atol=1e-15)

    def test_half_frequency_sign(self):
        out = adjoint_synthesis_cf([0, 1], [0.5])
        np.testing.assert_allclose(out.values, [-1.0], atol=1e-15)

    def test_grid_identity_with_df(self):
        rng = np.random.default_rng(8)
        z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        p = 16
        cf = adjoint_synthesis_cf(z, uniform_grid(p))
        df = adjoint_synthesis_df(z, p)
        np.testing.assert_allclose(cf.values, np.sqrt(p) * df.amps, atol=1e-12)

    def test_bad_grid_rejected(self):
        with pytest.raises(ValueError):
            adjoint_synthesis_cf([1, 2], [0.2, 1.0])
        with pytest.raises(ValueError):
            adjoint_synthesis_cf([1, 2], [0.5, 0.2])


class TestOperatorStructure:
    def test_product_identity(self):
        # W @ F == [I_N 0] entrywise.
        for n, p in ((1, 1), (2, 4), (3, 8), (5, 5), (7, 12)):
            prod = synthesis_matrix(n, p) @ dft_matrix(p)
            expected = np.hstack([np.eye(n), np.zeros((n, p - n))])
            assert np.max(np.abs(prod - expected)) <= 1e-12

    def test_gram_eigenvalues_zero_one(self):
        for n, p in ((2, 4), (3, 8), (6, 16)):
            w = synthesis_matrix(n, p)
            evals = np.sort(np.linalg.eigvalsh(w.conj().T @ w))
            expected = np.concatenate([np.zeros(p - n), np.ones(n)])
            assert np.max(np.abs(evals - expected)) <= 1e-9

    def test_cf_synthesis_adjoint_is_identity(self):
        # Rectangle quadrature of a(nu) e^{2 pi i nu n} recovers z exactly:
        # the integrand is a trigonometric polynomial, so the rule is exact
        # once the grid has more points than twice the degree.
        rng = np.random.default_rng(9)
        n = 6
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        m = 4 * n
        grid = uniform_grid(m)
        a = adjoint_synthesis_cf(z, grid).values
        recovered = np.array(
            [np.mean(a * np.exp(2j * np.pi * grid * k)) for k in range(n)]
        )
        np.testing.assert_allclose(recovered, z, atol=1e-12)


class TestTypes:
    def test_time_series_validation(self):
        with pytest.raises(ValueError):
            TimeSeries(np.array([]))
        with pytest.raises(ValueError):
            TimeSeries(np.array([1.0, np.nan]))
        with pytest.raises(ValueError):
            TimeSeries(np.array([1.0, np.inf]))
        assert len(TimeSeries(np.array([1.0, 2.0]))) == 2

    def test_spectrum_df_grid(self):
        s = SpectrumDF(np.ones(4))
        assert s.grid_size == 4
        np.testing.assert_allclose(s.grid, [0, 0.25, 0.5, 0.75])
