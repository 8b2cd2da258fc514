import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lagspec.duistermaat import (
    EPSILON_LADDER,
    admissible_epsilons,
    bl_index,
    choose_epsilon,
    delta_relation,
    dn_index_check,
    duistermaat_index,
    duistermaat_index_via_Q,
    q_form,
    robin_map,
)
from lagspec.errors import (
    DimensionMismatch,
    EpsilonInExceptionSet,
    NotTransversal,
    TransversalityViolated,
)
from lagspec.linalg import hermitian_inertia, n_minus
from lagspec.models.interval import bc_catalog
from lagspec.symplectic import (
    LagrangianPlane,
    ProjectorTheta,
    random_hermitian,
    random_lagrangian,
)


def line(theta):
    return LagrangianPlane(np.array([[1.0]]), np.array([[theta]]))


def cyclic_sign(thetas):
    # 1 when θ1, θ2, θ3 are met in decreasing cyclic order
    order = tuple(np.argsort(thetas))
    return 0 if order in ((0, 1, 2), (1, 2, 0), (2, 0, 1)) else 1


def test_line_table():
    triples = [(0.0, 1.0, 2.0), (-3.0, 0.5, 7.0), (-1.0, -0.25, 0.0)]
    for base in triples:
        for perm in itertools.permutations(range(3)):
            thetas = [base[i] for i in perm]
            assert duistermaat_index(*map(line, thetas)) == cyclic_sign(thetas)
    assert duistermaat_index(line(0), line(1), line(2)) == 0
    assert duistermaat_index(line(0), line(2), line(1)) == 1
    assert duistermaat_index(line(1), line(0), line(2)) == 1


def test_choose_epsilon_examples(rng):
    assert choose_epsilon([LagrangianPlane.horizontal(2), LagrangianPlane.vertical(2)]).epsilon == 1 / 8
    w = choose_epsilon([LagrangianPlane.vertical(3)])
    assert w.epsilon == EPSILON_LADDER[0]
    w = choose_epsilon([random_lagrangian(3, rng) for _ in range(3)])
    assert w.epsilon in EPSILON_LADDER and w.min_sigma > 0
    ws = admissible_epsilons([random_lagrangian(4, rng) for _ in range(3)], 2)
    assert ws[0].epsilon > ws[1].epsilon


def test_robin_map_catalog():
    for eps in (0.25, 1 / 16, 1e-3):
        R = robin_map(bc_catalog("periodic"), eps).R
        assert np.allclose(R, np.array([[1, -1], [-1, 1]]) / (2 * eps), atol=1e-12, rtol=0)
        R = robin_map(bc_catalog("antiperiodic"), eps).R
        assert np.allclose(R, np.array([[1, 1], [1, 1]]) / (2 * eps), atol=1e-12, rtol=0)


def test_robin_map_of_graph(rng):
    H = random_hermitian(4, rng)
    assert np.allclose(robin_map(LagrangianPlane.graph(H), 0.0).R, H)
    with pytest.raises(EpsilonInExceptionSet):
        robin_map(LagrangianPlane.vertical(2), 0.0)
    # the exceptional ε for graph(H) are -1/eigenvalues
    with pytest.raises(EpsilonInExceptionSet):
        robin_map(LagrangianPlane.graph(np.diag([-4.0])), 0.25)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_robin_map_hermitian(n, seed):
    L = random_lagrangian(n, seed)
    R = robin_map(L, choose_epsilon([L]).epsilon).R
    assert np.allclose(R, R.conj().T)


def test_special_cases(rng):
    for n in range(1, 6):
        L, L2, L3 = (random_lagrangian(n, rng) for _ in range(3))
        assert duistermaat_index(L, L, L3) == 0
        assert duistermaat_index(L2, L, L) == 0
        assert duistermaat_index(L, L2, L) == n - L.intersection_dim(L2)
    H = LagrangianPlane.horizontal(3)
    assert duistermaat_index(H, LagrangianPlane.vertical(3), H) == 3


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        duistermaat_index(line(0), line(1), LagrangianPlane.horizontal(2))


def test_q_oracle_agrees(rng):
    for t in range(60):
        n = 1 + t % 6
        planes = [random_lagrangian(n, rng) for _ in range(3)]
        assert duistermaat_index(*planes) == duistermaat_index_via_Q(*planes, seed=t)
    assert duistermaat_index_via_Q(line(0), line(2), line(1), seed=0) == 1


def test_q_form_examples(rng):
    H = random_hermitian(3, rng)
    hor, ver = LagrangianPlane.horizontal(3), LagrangianPlane.vertical(3)
    assert hermitian_inertia(q_form(hor, ver, LagrangianPlane.graph(H))) == hermitian_inertia(H)
    assert np.allclose(q_form(hor, ver, hor), 0)
    with pytest.raises(NotTransversal):
        q_form(hor, hor, ver)


def test_special_case_through_q(rng):
    for n in range(1, 6):
        L1, L2, L3 = (random_lagrangian(n, rng) for _ in range(3))
        assert duistermaat_index(L1, L2, L3) == n_minus(q_form(L1, L3, L2))


def test_bl_index_examples(rng):
    assert bl_index(np.diag([1.0, -1.0]), ProjectorTheta(np.eye(2), np.zeros((2, 2)))) == 1
    assert bl_index(np.diag([1.0, -1.0]), ProjectorTheta(np.zeros((2, 2)), np.zeros((2, 2)))) == 0
    with pytest.raises(DimensionMismatch):
        bl_index(np.eye(3), ProjectorTheta(np.eye(2), np.zeros((2, 2))))


def test_dn_index_check_examples(rng):
    assert dn_index_check(np.zeros((3, 3))) == 3
    assert dn_index_check(-np.eye(3)) == 0
    assert dn_index_check(np.diag([2.0, -3.0]), n=3) == 1
    for _ in range(20):
        n = int(rng.integers(1, 6))
        k = int(rng.integers(0, n + 1))
        V = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))[0][:, :k]
        theta = random_hermitian(k, rng) if k else np.zeros((0, 0))
        inertia = hermitian_inertia(theta) if k else None
        expected = inertia.n_zero + inertia.n_plus if k else 0
        assert dn_index_check(theta, V) == expected


def test_delta_relation(rng):
    for n in range(1, 6):
        L1, L2, L3 = (random_lagrangian(n, rng) for _ in range(3))
        rep = delta_relation(L1, L2, L3)
        assert rep.n_zero == L1.intersection_dim(L2)
        assert rep.n_minus == duistermaat_index(L1, L2, L3)
        assert rep.rank == n - L1.intersection_dim(L2)
    L = random_lagrangian(3, rng)
    rep = delta_relation(L, L, random_lagrangian(3, rng))
    assert rep.n_zero == 3 and np.allclose(rep.operator, 0)
    with pytest.raises(TransversalityViolated):
        delta_relation(L, random_lagrangian(3, rng), L)
