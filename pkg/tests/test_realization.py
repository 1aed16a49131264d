import numpy as np
import pytest
from scipy.linalg import expm

from takagi.krein import SignatureMatrix
from takagi.linalg import hermitian_inertia
from takagi.polynomials import Poly
from takagi.realization import (
    Realization,
    ResolventSingularity,
    eval_realization,
    faddeev_leverrier,
    kernel_gamma,
    realization_to_rational,
    state_vector,
)


def random_j_unitary_colligation(n_pos: int, n_neg: int, rng, scale: float = 0.8):
    """Random J-unitary (1 + n_pos-1 + n_neg) colligation and its state signature."""
    signs = np.concatenate([np.ones(n_pos), -np.ones(n_neg)])
    A = rng.normal(size=signs.shape * 2 if False else (signs.size, signs.size))
    A = A + 1j * rng.normal(size=A.shape)
    S = scale * (A - A.conj().T) / 2
    V = expm(np.diag(signs).astype(complex) @ S)
    J1 = SignatureMatrix(signs[1:])
    return Realization.from_colligation(V, J1)


class TestEval:
    def test_d_zero(self):
        r = Realization(A=0.5, B=np.array([1.0]), C=np.array([2.0]), D=np.zeros((1, 1)),
                        J1=SignatureMatrix(np.array([1.0])))
        assert eval_realization(r, 0.3) == pytest.approx(0.5 + 0.3 * 2.0)

    def test_at_origin_returns_a(self):
        rng = np.random.default_rng(0)
        r = random_j_unitary_colligation(3, 2, rng)
        assert eval_realization(r, 0.0) == pytest.approx(complex(r.A))

    def test_unimodular_on_circle(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            r = random_j_unitary_colligation(3, 2, rng)
            z = np.exp(2j * np.pi * rng.uniform())
            try:
                val = eval_realization(r, z)
            except ResolventSingularity:
                continue
            assert abs(abs(val) - 1.0) < 1e-9

    def test_singularity_detected(self):
        # D with eigenvalue 2 makes I - 0.5 D singular.
        r = Realization(A=0.0, B=np.array([1.0]), C=np.array([1.0]), D=np.array([[2.0]]),
                        J1=SignatureMatrix(np.array([1.0])))
        with pytest.raises(ResolventSingularity):
            eval_realization(r, 0.5)


class TestFaddeevLeVerrier:
    def test_matches_determinant_pointwise(self):
        rng = np.random.default_rng(2)
        D = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        p, Ms = faddeev_leverrier(D)
        den = Poly(p)
        for lam in (0.3, -0.7j, 1.1 + 0.2j):
            direct = np.linalg.det(np.eye(4) - lam * D)
            assert den(lam) == pytest.approx(direct, rel=1e-9)

    def test_adjugate_identity(self):
        rng = np.random.default_rng(3)
        D = rng.normal(size=(3, 3))
        p, Ms = faddeev_leverrier(D)
        lam = 0.4 - 0.1j
        M = np.eye(3) - lam * D
        adj = sum(lam**m * Ms[m] for m in range(len(Ms)))
        assert np.allclose(adj @ M, np.linalg.det(M) * np.eye(3))


class TestToRational:
    def test_d_zero(self):
        r = Realization(A=0.5, B=np.array([1.0]), C=np.array([2.0]), D=np.zeros((1, 1)),
                        J1=SignatureMatrix(np.array([1.0])))
        num, den = realization_to_rational(r)
        assert np.allclose(den.coeffs, [1.0])
        assert np.allclose(num.coeffs, [0.5, 2.0])

    def test_scalar_d(self):
        r = Realization(A=1.0, B=np.array([2.0]), C=np.array([3.0]), D=np.array([[0.5]]),
                        J1=SignatureMatrix(np.array([1.0])))
        num, den = realization_to_rational(r)
        assert np.allclose(den.coeffs, [1.0, -0.5])
        assert np.allclose(num.coeffs, [1.0, 6.0 - 0.5])

    def test_agrees_with_direct_evaluation(self):
        rng = np.random.default_rng(4)
        r = random_j_unitary_colligation(3, 3, rng)
        num, den = realization_to_rational(r)
        for _ in range(64):
            z = (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) * 0.9
            try:
                direct = eval_realization(r, z)
            except ResolventSingularity:
                continue
            if abs(den(z)) < 1e-9 * den.norm():
                continue
            assert abs(num(z) / den(z) - direct) <= 1e-8 * (1.0 + abs(direct))

    def test_denominator_degree_bounded(self):
        rng = np.random.default_rng(5)
        r = random_j_unitary_colligation(4, 2, rng)
        num, den = realization_to_rational(r)
        assert den.degree <= r.kappa
        assert num.degree <= r.kappa


class TestKernel:
    def test_origin_identity(self):
        rng = np.random.default_rng(6)
        r = random_j_unitary_colligation(3, 2, rng)
        lhs = kernel_gamma(r, 0.0, 0.0)
        assert lhs == pytest.approx(1.0 - abs(r.A) ** 2, abs=1e-10)

    def test_diagonal_real(self):
        rng = np.random.default_rng(7)
        r = random_j_unitary_colligation(2, 3, rng)
        val = kernel_gamma(r, 0.3 + 0.1j, 0.3 + 0.1j)
        assert abs(val.imag) < 1e-10 * (1.0 + abs(val))

    def test_matches_quotient(self):
        rng = np.random.default_rng(8)
        r = random_j_unitary_colligation(3, 2, rng)
        lam, mu = 0.4 - 0.2j, -0.1 + 0.3j
        lhs = kernel_gamma(r, lam, mu)
        quotient = (1.0 - eval_realization(r, lam) * np.conj(eval_realization(r, mu))) / (
            1.0 - lam * np.conj(mu)
        )
        assert lhs == pytest.approx(quotient, abs=1e-8 * (1 + abs(quotient)))

    def test_sampled_kernel_inertia_bounded(self):
        rng = np.random.default_rng(9)
        n_pos, n_neg = 3, 2  # state signature (2, 2) plus scalar channel
        r = random_j_unitary_colligation(n_pos, n_neg, rng)
        pts = (rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5)) * 0.6
        K = np.array([[kernel_gamma(r, li, lj) for li in pts] for lj in pts])
        inertia, _, _ = hermitian_inertia(0.5 * (K + K.conj().T), 1e-8)
        assert inertia.positive <= n_pos - 1 + 1  # at most state positives
        assert inertia.negative <= n_neg


class TestStateVector:
    def test_matches_resolvent(self):
        rng = np.random.default_rng(10)
        r = random_j_unitary_colligation(2, 2, rng)
        lam = 0.2 + 0.1j
        x = state_vector(r, lam)
        assert np.allclose((np.eye(r.kappa) - lam * r.D) @ x, r.C)
