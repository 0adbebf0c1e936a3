import math

import numpy as np
import pytest

from povmdecomp import (
    IterationLimitExceeded,
    eigendecompose,
    hermitize,
    is_psd,
    matrix_rank,
)

from conftest import KET0, KET1, PAULI_X, PLUS


def random_hermitian(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (g + g.conj().T)


class TestHermitize:
    def test_symmetrizes(self):
        m = np.array([[1.0, 2.0 + 1e-13j], [2.0 - 3e-13j, 4.0]])
        h = hermitize(m)
        assert np.array_equal(h, h.conj().T)
        assert np.all(h.diagonal().imag == 0.0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            hermitize(np.array([[np.nan, 0.0], [0.0, 1.0]]))
        with pytest.raises(ValueError):
            hermitize(np.array([[1.0, np.inf * 1j], [0.0, 1.0]]))

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            hermitize(np.zeros((2, 3)))

    def test_result_read_only(self):
        h = hermitize(np.eye(2))
        with pytest.raises(ValueError):
            h[0, 0] = 5.0


class TestEigendecompose:
    def test_diagonal_matrix(self):
        values, vectors = eigendecompose(np.diag([1.0, 2.0]))
        assert np.allclose(values, [1.0, 2.0])
        assert np.allclose(vectors, np.eye(2))

    def test_pauli_x(self):
        values, vectors = eigendecompose(PAULI_X)
        assert np.allclose(values, [-1.0, 1.0])
        s = 1.0 / math.sqrt(2.0)
        assert np.allclose(vectors[:, 0], [s, -s])
        assert np.allclose(vectors[:, 1], [s, s])

    def test_hand_checked_complex_2x2(self):
        # [[1, 1-i], [1+i, -1]] has trace 0 and determinant -3, so
        # eigenvalues are exactly +-sqrt(3).
        m = np.array([[1.0, 1.0 - 1.0j], [1.0 + 1.0j, -1.0]])
        values, _ = eigendecompose(m)
        root3 = math.sqrt(3.0)
        assert values == pytest.approx([-root3, root3], abs=1e-12)

    def test_random_4x4_residual_and_det_oracle(self):
        m = random_hermitian(4, seed=20240)
        values, vectors = eigendecompose(m)
        scale = 1.0 + float(np.max(np.abs(m)))
        residual = np.max(np.abs(m @ vectors - vectors * values))
        assert residual <= 1e-9 * scale
        # independent oracle: each eigenvalue is a root of the characteristic
        # polynomial, checked through an LU-based determinant
        for lam in values:
            assert abs(np.linalg.det(m - lam * np.eye(4))) < 1e-9

    def test_reconstruction_and_trace(self):
        for seed in range(5):
            d = 3 + seed % 3
            m = random_hermitian(d, seed=seed)
            values, vectors = eigendecompose(m)
            rebuilt = (vectors * values) @ vectors.conj().T
            assert np.max(np.abs(rebuilt - m)) <= 1e-9
            assert abs(np.sum(values) - m.trace().real) <= 1e-10

    def test_gram_identity(self):
        m = random_hermitian(5, seed=99)
        _, vectors = eigendecompose(m)
        gram = vectors.conj().T @ vectors
        assert np.max(np.abs(gram - np.eye(5))) <= 1e-9

    def test_eigenvalues_ascending(self):
        m = random_hermitian(6, seed=7)
        values, _ = eigendecompose(m)
        assert np.all(np.diff(values) >= 0.0)

    def test_phase_convention(self):
        m = random_hermitian(4, seed=3)
        _, vectors = eigendecompose(m)
        for j in range(4):
            col = vectors[:, j]
            k = int(np.flatnonzero(np.abs(col) > 1e-12)[0])
            assert col[k].imag == 0.0
            assert col[k].real > 0.0

    def test_deterministic(self):
        m = random_hermitian(5, seed=11)
        a = eigendecompose(m)
        b = eigendecompose(m)
        assert np.array_equal(a.eigenvalues, b.eigenvalues)
        assert np.array_equal(a.eigenvectors, b.eigenvectors)

    def test_degenerate_spectrum(self):
        # identity plus a rank-1 bump: eigenvalues (1, 1, 1, 2)
        rng = np.random.default_rng(5)
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        m = np.eye(4) + np.outer(v, v.conj())
        values, vectors = eigendecompose(m)
        assert values == pytest.approx([1.0, 1.0, 1.0, 2.0], abs=1e-12)
        assert np.max(np.abs(m @ vectors - vectors * values)) <= 1e-10

    def test_sweep_budget_exhaustion(self):
        m = random_hermitian(4, seed=1)
        with pytest.raises(IterationLimitExceeded):
            eigendecompose(m, max_sweeps=0)


class TestPsdAndRank:
    def test_identity_psd_zero_tol(self):
        assert is_psd(np.eye(3), 0.0)

    def test_negative_direction(self):
        assert not is_psd(np.diag([1.0, -0.5]), 1e-9)

    def test_plus_projector(self):
        # eigenvalues of |+><+| are 0 and 1 by direct diagonalization
        assert is_psd(PLUS, 1e-9)
        assert eigendecompose(PLUS).eigenvalues == pytest.approx([0.0, 1.0], abs=1e-12)

    def test_rejects_negative_tol(self):
        with pytest.raises(ValueError):
            is_psd(np.eye(2), -1.0)

    def test_rank_zero_matrix(self):
        assert matrix_rank(np.zeros((3, 3)), 1e-9) == 0

    def test_rank_projector(self):
        assert matrix_rank(KET0, 1e-9) == 1

    def test_rank_mixed_element(self):
        assert matrix_rank(0.5 * KET0 + KET1, 1e-9) == 2

    def test_rank_requires_positive_tol(self):
        with pytest.raises(ValueError):
            matrix_rank(np.eye(2), 0.0)
