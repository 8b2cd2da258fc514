import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lagspec.errors import DimensionMismatch, NotHermitian, RankDeficientFrame
from lagspec.linalg import (
    DEFAULT_TOL,
    Inertia,
    ToleranceConfig,
    hermitian_inertia,
    nullspace,
    rank_with_tol,
    subspace_intersection_dim,
)
from lagspec.models.interval import bc_catalog
from lagspec.symplectic import LagrangianPlane, random_hermitian


def test_inertia_examples():
    assert hermitian_inertia(np.diag([1.0, -2.0, 0.0])) == Inertia(1, 1, 1)
    assert hermitian_inertia(np.zeros((3, 3))) == Inertia(0, 3, 0)
    assert hermitian_inertia([[0, 1], [1, 0]]) == Inertia(1, 0, 1)


def test_inertia_rejects_bad_input():
    with pytest.raises(DimensionMismatch):
        hermitian_inertia(np.zeros((2, 3)))
    with pytest.raises(NotHermitian):
        hermitian_inertia([[0, 1], [0, 0]])


def test_inertia_zero_threshold_scales_with_norm():
    big = np.diag([1e6, 1e-4])
    assert hermitian_inertia(big) == Inertia(0, 1, 1)
    assert hermitian_inertia(np.diag([1.0, 1e-4])) == Inertia(0, 0, 2)


def test_tolerance_config_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(rank_rel_tol=0.0)
    assert DEFAULT_TOL.with_(root_tol=1e-8).root_tol == 1e-8


def test_sylvester_congruence(rng):
    for _ in range(500):
        n = int(rng.integers(1, 9))
        r = int(rng.integers(0, n + 1))
        V = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))[0]
        d = np.zeros(n)
        d[:r] = rng.uniform(0.5, 2, r) * rng.choice([-1, 1], r)
        A = (V * d) @ V.conj().T
        C = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) + 3 * np.eye(n)
        assert hermitian_inertia(C.conj().T @ A @ C) == hermitian_inertia(A)


def test_rank_examples():
    assert rank_with_tol(np.eye(4)) == 4
    assert rank_with_tol([[1, 1], [1, 1]]) == 1
    assert rank_with_tol(np.zeros((3, 2))) == 0
    for name in ("periodic", "antiperiodic", "delta", "delta_prime", "dirichlet", "neumann"):
        L = bc_catalog(name, 1.5)
        assert rank_with_tol(np.vstack([L.X, L.Y])) == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2 ** 31))
def test_rank_of_adjoint(m, n, seed):
    r = np.random.default_rng(seed)
    k = int(r.integers(0, min(m, n) + 1))
    A = (r.standard_normal((m, k)) + 1j * r.standard_normal((m, k))) @ r.standard_normal((k, n))
    assert rank_with_tol(A) == rank_with_tol(A.conj().T) == k


def test_nullspace_examples():
    N = nullspace([[1, 0], [0, 0]])
    assert N.shape == (2, 1) and abs(abs(N[1, 0]) - 1) < 1e-12
    assert nullspace(np.array([[2.0, 1.0], [1.0, 3.0]])).shape == (2, 0)
    N = nullspace([[1, 1], [1, 1]])
    assert N.shape == (2, 1)
    assert np.allclose(abs(N[:, 0]), [2 ** -0.5, 2 ** -0.5])


def test_nullspace_contract(rng):
    for _ in range(50):
        A = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 5))
        N = nullspace(A)
        assert N.shape == (5, 3)
        smax = np.linalg.norm(A, 2)
        assert np.linalg.norm(A @ N, axis=0).max() <= 10 * DEFAULT_TOL.rank_rel_tol * smax
        assert np.allclose(N.conj().T @ N, np.eye(3))


def test_intersection_dim_examples():
    H, V = LagrangianPlane.horizontal(2), LagrangianPlane.vertical(2)
    assert subspace_intersection_dim(H.Z, H.Z) == 2
    assert subspace_intersection_dim(H.Z, V.Z) == 0
    per = bc_catalog("periodic")
    for s in (-2.0, 0.5, 3.0):
        assert subspace_intersection_dim(per.Z, bc_catalog("delta", s).Z) == 1


def test_intersection_dim_symmetric_and_rank_checked(rng):
    for _ in range(50):
        A = rng.standard_normal((6, 3))
        B = np.hstack([A[:, :1], rng.standard_normal((6, 2))])
        assert subspace_intersection_dim(A, B) == subspace_intersection_dim(B, A) == 1
    with pytest.raises(RankDeficientFrame):
        subspace_intersection_dim(np.ones((4, 2)), np.eye(4)[:, :2])


def test_inertia_sums_to_dimension(rng):
    for n in range(1, 7):
        A = random_hermitian(n, rng)
        assert hermitian_inertia(A).dim == n
