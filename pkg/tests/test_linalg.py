import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from takagi.linalg import (
    Inertia,
    NotHermitianError,
    check_hermitian,
    hermitian_inertia,
    hermitize,
    rank_with_tol,
)
from takagi.pick import DiskProblem, pick_matrix


def test_identity_inertia():
    inertia, evals, _ = hermitian_inertia(np.eye(3), 1e-10)
    assert inertia.as_tuple() == (3, 0, 0)
    assert np.allclose(evals, 1.0)


def test_diagonal_mixed_inertia():
    inertia, _, _ = hermitian_inertia(np.diag([1.0, -1.0, 0.0]))
    assert inertia.as_tuple() == (1, 1, 1)


def test_degenerate_interpolation_matrix_inertia():
    problem = DiskProblem(
        nodes=np.array([0.0, 0.5, -0.5, 0.5j]),
        values=np.array([0.0, 1.0, 1.0, 1.0]),
    )
    G = pick_matrix(problem)
    inertia, _, _ = hermitian_inertia(G, 1e-9)
    assert inertia.as_tuple() == (1, 1, 2)


def test_non_hermitian_rejected():
    M = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotHermitianError) as err:
        hermitian_inertia(M)
    assert err.value.asymmetry > 0


def test_eigenvalues_ascending():
    M = np.diag([3.0, -5.0, 1.0])
    _, evals, _ = hermitian_inertia(M)
    assert np.all(np.diff(evals) >= 0)


def test_inertia_dimension():
    inertia = Inertia(2, 1, 3)
    assert inertia.dimension == 6
    assert inertia.as_tuple() == (2, 1, 3)


def test_sylvester_stability():
    """Congruence by a random invertible matrix preserves inertia."""
    rng = np.random.default_rng(42)
    for _ in range(100):
        M = hermitize(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
        inertia, _, _ = hermitian_inertia(M)
        while True:
            S = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            if np.linalg.cond(S) < 1e4:
                break
        congruent = hermitize(S.conj().T @ M @ S)
        inertia2, _, _ = hermitian_inertia(congruent)
        assert inertia2.as_tuple() == inertia.as_tuple()


def test_rank_with_tol():
    M = np.diag([1.0, 1e-14, 0.0])
    assert rank_with_tol(M, 1e-9) == 1
    assert rank_with_tol(np.zeros((3, 3))) == 0


def test_check_hermitian_accepts_roundoff():
    M = np.array([[1.0, 0.5 + 1e-15j], [0.5, 1.0]])
    check_hermitian(M)


@given(
    st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=8)
)
@settings(max_examples=60, deadline=None)
def test_diagonal_inertia_matches_sign_counts(diag):
    d = np.array(diag)
    inertia, _, _ = hermitian_inertia(np.diag(d), 1e-9)
    cutoff = 1e-9 * max(1.0, float(np.max(np.abs(d))))
    assert inertia.positive == int(np.sum(d > cutoff))
    assert inertia.negative == int(np.sum(d < -cutoff))
