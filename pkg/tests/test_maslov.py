import numpy as np
import pytest

from lagspec.errors import DegenerateCrossing, MonotonicityViolated, NonIsolatedCrossing
from lagspec.maslov import (
    PlanePath,
    crossing_form,
    crossings_csv,
    endpoint_dims,
    find_crossings,
    hormander_check,
    maslov_increasing,
    maslov_reference_first,
    maslov_regular,
    maslov_regular_reference_first,
    restricted_crossing_form,
)
from lagspec.models.interval import IntervalProblem, bc_catalog
from lagspec.models.spectra import cauchy_path, lam_of_u, u_of_lam
from lagspec.symplectic import LagrangianPlane, random_hermitian, random_lagrangian

HOR = LagrangianPlane.horizontal(1)


def rotating(a=-0.5, b=3.5, sign=1.0):
    return PlanePath(a, b, lambda t: (np.array([[np.cos(t)]]), np.array([[sign * np.sin(t)]])),
                     lambda t: (np.array([[-np.sin(t)]]), np.array([[sign * np.cos(t)]])),
                     "increasing" if sign > 0 else "unknown")


def graph_path(M0, D, a=-1.0, b=1.0):
    n = M0.shape[0]
    return PlanePath(a, b, lambda t: (np.eye(n), M0 + t * D), lambda t: (np.zeros((n, n)), D))


def test_rotating_line_form():
    p = rotating()
    for t in (0.0, 0.3, 2.0):
        assert np.allclose(crossing_form(p, t), [[1.0]])
    assert np.allclose(restricted_crossing_form(p, HOR, 0.0), [[1.0]])


def test_finite_difference_derivative():
    p = PlanePath(0.0, 1.0, lambda t: (np.array([[np.cos(t)]]), np.array([[np.sin(t)]])))
    assert np.allclose(crossing_form(p, 0.4), [[1.0]], atol=1e-8)


def test_constant_path_form_is_zero():
    L = random_lagrangian(2, 0)
    p = PlanePath(0.0, 1.0, lambda t: (L.X, L.Y), lambda t: (0 * L.X, 0 * L.Y))
    assert np.allclose(crossing_form(p, 0.5), 0)
    with pytest.raises(NonIsolatedCrossing):
        find_crossings(p, L)


def test_rotating_line_crossings():
    reports = find_crossings(rotating(), HOR)
    assert [r.intersection_dim for r in reports] == [1, 1]
    assert np.allclose([r.t for r in reports], [0.0, np.pi], atol=1e-9)
    assert maslov_increasing(rotating(), HOR) == 2
    assert maslov_regular(rotating(), HOR) == 2
    assert maslov_reference_first(rotating(), HOR) == -2
    assert maslov_regular(rotating(sign=-1.0), HOR) == -2
    assert maslov_increasing(rotating(0.5, 2.5), HOR) == 0
    with pytest.raises(MonotonicityViolated):
        maslov_increasing(rotating(sign=-1.0), HOR)


def test_endpoint_conventions():
    # crossings at both ends of [0, π]
    p = rotating(0.0, np.pi)
    assert endpoint_dims(p, HOR) == (1, 1)
    assert maslov_increasing(p, HOR) == 1           # counts [a, b)
    assert maslov_reference_first(p, HOR) == -1     # counts (a, b]
    assert maslov_regular(p, HOR) == 1
    assert maslov_regular_reference_first(p, HOR) == -1


def test_indefinite_crossing_forms():
    M0 = random_hermitian(2, np.random.default_rng(4))
    D = np.diag([1.0, -1.0])
    ref = LagrangianPlane.graph(M0)
    assert maslov_regular(graph_path(M0, D), ref) == 0
    assert maslov_regular(graph_path(M0, D, 0.0, 1.0), ref) == 1
    assert maslov_regular(graph_path(M0, D, -1.0, 0.0), ref) == -1
    tangent = PlanePath(-1.0, 1.0, lambda t: (np.eye(2), M0 + np.diag([t, 1e3 * t ** 2])),
                        lambda t: (np.zeros((2, 2)), np.diag([1.0, 2e3 * t])))
    with pytest.raises(DegenerateCrossing):
        maslov_regular(tangent, ref)
    with pytest.raises(NonIsolatedCrossing):
        maslov_regular(graph_path(M0, np.diag([1.0, 0.0])), ref)


def test_dirichlet_crossings_of_cauchy_path():
    p = IntervalProblem(1.0)
    path = cauchy_path(p, u_of_lam(1.0), u_of_lam(50.0))
    reports = find_crossings(path, bc_catalog("dirichlet"))
    lams = [lam_of_u(r.t) for r in reports]
    assert np.allclose(lams, [np.pi ** 2, 4 * np.pi ** 2], rtol=1e-9)
    assert all(r.intersection_dim == 1 for r in reports)


def test_close_crossings_are_separated():
    # two crossings 1e-3 apart, one much faster than the other
    M0 = np.zeros((2, 2))
    p = PlanePath(-1.0, 1.0, lambda t: (np.eye(2), np.diag([t, 50.0 * (t - 1e-3)])),
                  lambda t: (np.zeros((2, 2)), np.diag([1.0, 50.0])))
    reports = find_crossings(p, LagrangianPlane.graph(M0))
    assert np.allclose([r.t for r in reports], [0.0, 1e-3], atol=1e-9)


def test_hormander_examples():
    rng = np.random.default_rng(9)
    n = 3
    M0, K = random_hermitian(n, rng), np.eye(n)
    path = graph_path(M0, K)
    L = random_lagrangian(n, rng)
    r = hormander_check(path, L, L)
    assert r.lhs == r.rhs == 0
    for _ in range(10):
        L1, L2 = random_lagrangian(n, rng), random_lagrangian(n, rng)
        assert hormander_check(path, L1, L2).holds
    p = IntervalProblem(1.0)
    model = cauchy_path(p, u_of_lam(-30.5), u_of_lam(120.5))
    assert hormander_check(model, bc_catalog("dirichlet"), bc_catalog("neumann")).holds


def test_crossings_csv():
    text = crossings_csv(find_crossings(rotating(), HOR))
    lines = text.strip().splitlines()
    assert lines[0] == "t,intersection_dim,n_minus,n_zero,n_plus"
    assert len(lines) == 3 and lines[1].endswith(",1,0,0,1")


def test_bad_interval():
    with pytest.raises(ValueError):
        PlanePath(1.0, 0.0, lambda t: (np.eye(1), np.eye(1)))
