import numpy as np
import pytest

from lagspec.errors import DimensionMismatch
from lagspec.models.checks import crossing_positivity, greens_identity_check, wronskian_drift
from lagspec.models.interval import (
    BC_NAMES,
    IntervalProblem,
    Potential,
    bc_catalog,
    cauchy_data_frame,
    cauchy_data_plane,
    dirichlet_to_neumann,
    fundamental_solutions,
)
from lagspec.models.spectra import (
    Extension,
    count_below,
    count_difference_predicted,
    counting_function,
    eigenvalue_derivative_check,
    eigenvalues,
    interlacing_check,
    lam_of_u,
    lowest_eigenvalues,
    m_at_zero,
    morse_index,
    sharpness_demo,
    shift_bounds,
    shift_profile,
    spectral_shift_direct,
    spectral_shift_predicted,
    spectrum_csv,
    sweep_csv,
    sweep_table,
    u_of_lam,
)
from lagspec.models.verify import verify_models
from lagspec.identities import total_failures
from lagspec.symplectic import LagrangianPlane, is_lagrangian, random_lagrangian

PI2 = np.pi ** 2
UNIT = IntervalProblem(1.0)
HALF = IntervalProblem(np.pi)


def sampled_problem(seed=11):
    rng = np.random.default_rng(seed)
    xs = np.linspace(0, 1, 11)
    return IntervalProblem(1.0, Potential.sampled(xs, rng.uniform(-3, 3, 11)))


def ext(p, name, s=0.0):
    return Extension.from_catalog(p, name, s)


def test_scan_variable_round_trip():
    for lam in (-1e4, -3.0, 0.0, 0.7, 1e3):
        assert np.isclose(lam_of_u(u_of_lam(lam)), lam)
    u = np.linspace(-5, 5, 11)
    assert np.all(np.diff(lam_of_u(u)) > 0)


def test_fundamental_solutions_closed_form():
    fs = fundamental_solutions(UNIT, np.array([PI2, 0.0, -1.0]))
    assert np.allclose(fs.c_l, [-1, 1, np.cosh(1)], atol=1e-12)
    assert np.allclose(fs.cp_l, [0, 0, np.sinh(1)], atol=1e-12)
    assert np.allclose(fs.s_l, [0, 1, np.sinh(1)], atol=1e-12)
    assert np.allclose(fs.sp_l, [-1, 1, np.cosh(1)], atol=1e-12)
    assert fundamental_solutions(IntervalProblem(2.5), np.array([0.0])).s_l[0] == pytest.approx(2.5)


def test_ode_agrees_with_closed_form():
    lams = np.array([-40.0, -1.0, 0.0, 3.0, 90.0])
    fs0 = fundamental_solutions(IntervalProblem(1.0, Potential.constant(2.0)), lams)
    xs = np.linspace(0, 1, 5)
    fs1 = fundamental_solutions(IntervalProblem(1.0, Potential.sampled(xs, np.full(5, 2.0))), lams)
    for a in ("c", "cp", "s", "sp"):
        assert np.allclose(getattr(fs0, a + "_l"), getattr(fs1, a + "_l"), rtol=1e-8, atol=1e-9)


def test_wronskian_and_greens_identity():
    lams = np.linspace(-50, 200, 26)
    assert wronskian_drift(UNIT, lams) <= 1e-8
    assert wronskian_drift(sampled_problem(), lams) <= 1e-8
    assert greens_identity_check(UNIT, 1.0, 4.0) <= 1e-8
    assert greens_identity_check(UNIT, 2.0, 2.0) <= 1e-12
    for seed in range(3):
        assert greens_identity_check(sampled_problem(seed), -3.0, 17.0) <= 1e-6


def test_cauchy_data_is_lagrangian():
    for lam in np.linspace(-200, 400, 100):
        assert is_lagrangian(cauchy_data_frame(UNIT, lam))
    F = LagrangianPlane.vertical(2)
    assert cauchy_data_plane(UNIT, -1e6).gap(F) <= 1e-2
    assert cauchy_data_plane(sampled_problem(), -1e6).gap(F) <= 1e-2


def test_dirichlet_to_neumann_at_zero():
    assert np.allclose(dirichlet_to_neumann(UNIT, -1e-9)[0], [[-1, 1], [1, -1]], atol=1e-6)
    assert np.allclose(m_at_zero(UNIT), [[-1, 1], [1, -1]], atol=1e-6)
    assert m_at_zero(IntervalProblem(np.pi, Potential.constant(-1.0))) is None


def test_catalog_frames():
    per, d = bc_catalog("periodic"), bc_catalog("delta", 2.5)
    assert per.same_as(LagrangianPlane(np.array([[1, 0], [1, 0]]), np.array([[0, 1], [0, -1]])))
    assert d.same_as(LagrangianPlane(np.array([[1, 0], [1, 0]]), np.array([[2.5, 1], [0, -1]])))
    assert bc_catalog("delta", 0.0).same_as(per)
    assert bc_catalog("delta_prime", 0.0).same_as(bc_catalog("antiperiodic"))
    assert bc_catalog("dirichlet").same_as(LagrangianPlane.vertical(2))
    assert bc_catalog("neumann").same_as(LagrangianPlane.horizontal(2))
    with pytest.raises(ValueError):
        bc_catalog("robin")
    assert set(BC_NAMES) == {"periodic", "delta", "antiperiodic", "delta_prime", "dirichlet", "neumann"}


def test_half_interval_spectra():
    d = eigenvalues(ext(HALF, "dirichlet"), (0.5, 10))
    n = eigenvalues(ext(HALF, "neumann"), (-0.5, 10))
    assert np.allclose(d.expanded(), [1, 4, 9], atol=1e-8)
    assert np.allclose(n.expanded(), [0, 1, 4, 9], atol=1e-8)
    assert counting_function(ext(HALF, "dirichlet"), (0.5, 9.5)) == 3
    assert counting_function(ext(HALF, "dirichlet"), (3.0, 3.0)) == 0
    assert "lambda,multiplicity" in spectrum_csv(d)


def test_periodic_double_eigenvalue():
    sl = eigenvalues(ext(UNIT, "periodic"), (1, 50))
    assert len(sl.eigenvalues) == 1
    lam, m = sl.eigenvalues[0]
    assert m == 2 and abs(lam - 4 * PI2) <= 1e-8


def test_eigenvalues_rejects_bad_window():
    with pytest.raises(ValueError):
        eigenvalues(ext(UNIT, "periodic"), (2.0, 1.0))


def test_lower_bound_is_below_spectrum():
    for name, s in [("delta", -10.0), ("delta_prime", -0.2), ("periodic", 0.0)]:
        e = ext(UNIT, name, s)
        assert e.lower_bound() < lowest_eigenvalues(e, 1)[0]


def test_neumann_dirichlet_shift():
    N, D = ext(HALF, "neumann"), ext(HALF, "dirichlet")
    assert spectral_shift_direct(N, D, 0.5) == 1
    assert spectral_shift_direct(N, D, 2.5) == 1
    lams = np.linspace(-0.5, 20, 83)
    values = {d for d, p in shift_profile(N, D, lams)}
    assert values <= {0, 1}
    assert all(d == p for d, p in shift_profile(N, D, lams))
    assert shift_bounds(N, D) == (0, 2)
    assert spectral_shift_direct(N, N, 3.3) == spectral_shift_predicted(N, N, 3.3) == 0


def test_friedlander_formula():
    N, D = ext(HALF, "neumann"), ext(HALF, "dirichlet")
    from lagspec.symplectic import graph_operator
    from lagspec.linalg import hermitian_inertia
    for lam in (-0.3, 0.5, 2.5, 7.0, 15.0):
        inert = hermitian_inertia(graph_operator(cauchy_data_plane(HALF, lam)))
        assert spectral_shift_predicted(N, D, lam) == inert.n_zero + inert.n_plus


def test_interval_count_formula():
    e1, e2 = ext(UNIT, "periodic"), ext(UNIT, "delta_prime", 0.5)
    for a, b in [(-20.0, 5.0), (5.0, 100.0), (-5.0, 60.0)]:
        direct = counting_function(e1, (a, b)) - counting_function(e2, (a, b))
        assert direct == count_difference_predicted(e1, e2, a, b)


@pytest.mark.parametrize("s,bounds", [(0.5, (0, 1)), (3.0, (0, 1)), (-0.5, (1, 0)), (-3.0, (1, 0))])
def test_periodic_vs_delta(s, bounds):
    r = interlacing_check(ext(UNIT, "periodic"), ext(UNIT, "delta", s), 8)
    assert (r.sigma_minus, r.sigma_plus) == bounds and r.ok


def test_periodic_vs_antiperiodic():
    r = interlacing_check(ext(UNIT, "periodic"), ext(UNIT, "antiperiodic"), 10)
    assert (r.sigma_minus, r.sigma_plus) == (1, 1) and r.ok


@pytest.mark.parametrize("s", [0.5, -0.5, 2.0, -2.0])
def test_antiperiodic_vs_delta_prime(s):
    r = interlacing_check(ext(UNIT, "antiperiodic"), ext(UNIT, "delta_prime", s), 8)
    assert (r.sigma_minus, r.sigma_plus) == (1, 0) and r.ok


def test_interlacing_validates_k():
    with pytest.raises(ValueError):
        interlacing_check(ext(UNIT, "periodic"), ext(UNIT, "antiperiodic"), 0)


def test_morse_index():
    assert morse_index(ext(UNIT, "dirichlet")).route_a == 0
    for s, expected in [(-10.0, 1), (-1.0, 1), (-0.1, 1), (1.0, 0)]:
        r = morse_index(ext(UNIT, "delta", s))
        assert r.route_a == r.route_b == expected
    r = morse_index(ext(UNIT, "periodic"))
    assert r.route_a == r.route_b == 0
    assert count_below(ext(UNIT, "delta", -10.0), 0.0) == 1


@pytest.mark.parametrize("target", [(0, 1), (1, 0), (1, 1), (2, 0), (0, 2)])
def test_sharpness(target):
    r = sharpness_demo(UNIT, *target)
    assert r.bounds == target and r.attained


def test_sharpness_trivial_and_invalid():
    r = sharpness_demo(UNIT, 0, 0)
    assert r.shift_below == r.shift_above == (0, 0)
    with pytest.raises(ValueError):
        sharpness_demo(UNIT, 2, 1)


def test_derivative_check():
    rows = eigenvalue_derivative_check(UNIT, np.linspace(0.2, 2.0, 10), 1)
    assert all(r.error <= 1e-3 for r in rows)
    # the second branch is pinned, so f'(0) = 0 and the derivative vanishes
    rows = eigenvalue_derivative_check(UNIT, [1.0], 2)
    assert abs(rows[0].formula) < 1e-8 and abs(rows[0].finite_difference) < 1e-6
    rows = eigenvalue_derivative_check(sampled_problem(), [0.7, -1.3], 3)
    assert all(r.error <= 1e-3 for r in rows)


def test_sweep():
    rows = sweep_table(UNIT, "delta_prime", [-3.0, -0.05, 0.0, 1.0], 5)
    aper = lowest_eigenvalues(ext(UNIT, "antiperiodic"), 5)
    assert rows[1][1] < -1e3
    assert np.allclose(rows[2][1:], aper, rtol=1e-8)
    assert abs(rows[3][2] - PI2) <= 1e-6
    for row in rows:
        assert abs(row[2] - PI2) <= 1e-6 and abs(row[4] - 9 * PI2) <= 1e-6 * 9 * PI2
    text = sweep_csv(UNIT, "delta", [1.0], 3)
    assert text.splitlines()[0] == "s,lambda_1,lambda_2,lambda_3"
    with pytest.raises(ValueError):
        sweep_table(UNIT, "periodic", [0.0], 2)


def test_crossing_positivity():
    for p in (UNIT, sampled_problem()):
        for name, s in [("periodic", 0), ("delta", -2.0), ("delta_prime", 0.4), ("neumann", 0)]:
            assert crossing_positivity(ext(p, name, s), (-30, 200)).ok


def test_potential_from_csv(tmp_path):
    path = tmp_path / "q.csv"
    path.write_text("x,q\n0,1.5\n0.5,1.5\n1,1.5\n")
    p = IntervalProblem(1.0, Potential.from_csv(str(path)))
    got = eigenvalues(Extension.from_catalog(p, "dirichlet"), (0, 50)).expanded()
    assert np.allclose(got, [PI2 + 1.5, 4 * PI2 + 1.5], rtol=1e-8)


def test_potential_validation():
    with pytest.raises(ValueError):
        Potential.sampled([0, 1], [1.0])
    with pytest.raises(ValueError):
        IntervalProblem(-1.0)


def test_shift_theorem_random_pairs():
    rng = np.random.default_rng(3)
    for p in (UNIT, sampled_problem(5)):
        for _ in range(3):
            e1, e2 = Extension(p, random_lagrangian(2, rng)), Extension(p, random_lagrangian(2, rng))
            lams = rng.uniform(-20, 150, 20)
            assert all(d == q for d, q in shift_profile(e1, e2, lams))


def test_verify_models():
    report = verify_models(seed=0, k_max=6, samples=8)
    assert total_failures(report) == 0, report
