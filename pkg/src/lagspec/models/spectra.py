"""Spectra of self-adjoint extensions of the interval operator.

Eigenvalues are the crossings of the Cauchy data path ``λ ↦ M(λ)`` with the
boundary plane; the multiplicity is the intersection dimension.  Scans run
in the variable ``u`` with ``λ = u|u| + u``, which keeps the grid density in
step with the quadratic growth of the eigenvalues and is regular at ``u = 0``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..duistermaat import bl_index, duistermaat_index
from ..errors import InternalInconsistency, LagspecError, MultivaluedRelation
from ..linalg import DEFAULT_TOL, ToleranceConfig, spectral_norm
from ..maslov import CrossingReport, PlanePath, _intersection_coords, find_crossings
from ..symplectic import (
    Frame,
    LagrangianPlane,
    ProjectorTheta,
    graph_operator,
    projector_theta_from_plane,
)
from .interval import IntervalProblem, _integrate, bc_catalog, cauchy_data_plane, cauchy_frames


def lam_of_u(u):
    return u * np.abs(u) + u


def u_of_lam(lam):
    lam = np.asarray(lam, dtype=float)
    out = np.where(lam >= 0, (-1.0 + np.sqrt(1.0 + 4.0 * np.abs(lam))) / 2.0,
                   (1.0 - np.sqrt(1.0 + 4.0 * np.abs(lam))) / 2.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Extension:
    problem: IntervalProblem
    plane: LagrangianPlane
    label: str = ""

    @classmethod
    def from_catalog(cls, problem: IntervalProblem, name: str, s: float = 0.0) -> "Extension":
        return cls(problem, bc_catalog(name, s), name if name not in ("delta", "delta_prime") else f"{name}({s:g})")

    def projector_theta(self, tol: ToleranceConfig = DEFAULT_TOL) -> ProjectorTheta:
        return projector_theta_from_plane(self.plane, tol)

    def lower_bound(self, tol: ToleranceConfig = DEFAULT_TOL) -> float:
        """A value below the whole spectrum: ``q_min - 4(||Θ|| + 1/ℓ)² - 1``.

        Follows from the trace estimate ``|f(0)|² ≤ δ||f'||² + (1/δ + 1/ℓ)||f||²``.
        """
        theta = spectral_norm(self.projector_theta(tol).Theta)
        p = self.problem
        return p.potential.q_min - 4.0 * (theta + 1.0 / p.length) ** 2 - 1.0


@dataclass(frozen=True)
class SpectrumSlice:
    eigenvalues: List[Tuple[float, int]]
    window: Tuple[float, float]
    resolved_to: float
    crossings: List[CrossingReport] = field(default_factory=list, repr=False)

    @property
    def count(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def expanded(self) -> List[float]:
        return [lam for lam, m in self.eigenvalues for _ in range(m)]


def cauchy_path(problem: IntervalProblem, u_lo: float, u_hi: float) -> PlanePath:
    """The increasing path ``u ↦ M(λ(u))``."""

    def frames_at(us):
        return cauchy_frames(problem, lam_of_u(np.asarray(us, float)))

    def frame_at(u):
        X, Y = frames_at(np.array([u]))
        return Frame(X[0], Y[0])

    def derivative_at(u):
        # keep the basis of the evaluation point on both sides of the difference
        lam0 = lam_of_u(u)
        basis = "dirichlet" if lam0 < problem.dirichlet_switch - 0.5 else "cs"
        h = 1e-6 * (1.0 + abs(u))
        X, Y = cauchy_frames(problem, lam_of_u(np.array([u - h, u + h])), basis=basis)
        return (X[1] - X[0]) / (2 * h), (Y[1] - Y[0]) / (2 * h)

    return PlanePath(u_lo, u_hi, frame_at, derivative_at, "increasing", frames_at)


def _scan(problem: IntervalProblem, plane: LagrangianPlane, lo: float, hi: float,
          tol: ToleranceConfig) -> List[Tuple[float, CrossingReport]]:
    u_lo, u_hi = u_of_lam(lo), u_of_lam(hi)
    steps = int(max(2000, 60 * (u_hi - u_lo)))
    path = cauchy_path(problem, u_lo, u_hi)
    xtol = lambda u: tol.root_tol / (2.0 * abs(u) + 1.0)
    reports = find_crossings(path, plane, tol, steps=steps, xtol=xtol)
    return [(float(lam_of_u(r.t)), r) for r in reports]


def eigenvalues(e: Extension, window: Tuple[float, float], tol: ToleranceConfig = DEFAULT_TOL) -> SpectrumSlice:
    """Eigenvalues in the closed window ``[a, b]``."""
    a, b = map(float, window)
    if not (np.isfinite(a) and np.isfinite(b) and a <= b):
        raise ValueError("window must be a bounded interval [a, b]")
    pad = 1e-3 * (1.0 + max(abs(a), abs(b)))
    found = _scan(e.problem, e.plane, a - pad, b + pad, tol)
    edge = lambda lam: 1e3 * tol.root_tol * max(1.0, abs(lam))
    keep = [(lam, r) for lam, r in found if a - edge(a) <= lam <= b + edge(b)]
    return SpectrumSlice([(lam, r.intersection_dim) for lam, r in keep], (a, b), tol.root_tol,
                         [r for _, r in keep])


def counting_function(e: Extension, interval: Tuple[float, float], tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``N(H; (a, b])``."""
    a, b = map(float, interval)
    if a >= b:
        return 0
    sl = eigenvalues(e, (a, b), tol)
    edge = 1e3 * tol.root_tol * max(1.0, abs(a))
    return sum(m for lam, m in sl.eigenvalues if lam > a + edge)


def spectrum_below(e: Extension, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> List[float]:
    """All eigenvalues in ``(-∞, λ]`` with multiplicity.

    The window starts at :meth:`Extension.lower_bound` and is doubled
    downwards twice; any eigenvalue found there extends the list, and a
    third empty doubling certifies that nothing lies further down.
    """
    lo = min(e.lower_bound(tol), lam - 1.0)
    vals = eigenvalues(e, (lo, lam), tol).expanded()
    vals = [v for v in vals if v > lo + 1e3 * tol.root_tol * max(1.0, abs(lo))]
    for _ in range(2):
        lower = lo - (abs(lo) + 1.0)
        # an eigenvalue here means the window was too short; keep going down
        vals = eigenvalues(e, (lower, lo), tol).expanded() + vals
        lo = lower
    if counting_function(e, (lo - (abs(lo) + 1.0), lo), tol):
        raise InternalInconsistency("eigenvalue count did not stabilize under downward doubling")
    return sorted(vals)


def count_below(e: Extension, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``N(H; (-∞, λ])``."""
    return len(spectrum_below(e, lam, tol))


def lowest_eigenvalues(e: Extension, count: int, tol: ToleranceConfig = DEFAULT_TOL) -> List[float]:
    """The first ``count`` eigenvalues, repeated according to multiplicity."""
    lo = e.lower_bound(tol)
    p = e.problem
    hi = max(p.potential.q_max, 0.0) + ((count + 2) * np.pi / p.length) ** 2
    while True:
        vals = eigenvalues(e, (lo, hi), tol).expanded()
        if len(vals) >= count:
            return vals[:count]
        hi = hi + abs(hi) + 1.0


# --- spectral shift -------------------------------------------------------------------------

def spectral_shift_direct(e1: Extension, e2: Extension, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``N(H1; (-∞, λ]) - N(H2; (-∞, λ])`` from eigenvalue scans."""
    if e1.plane.same_as(e2.plane, tol):
        return 0
    return count_below(e1, lam, tol) - count_below(e2, lam, tol)


def spectral_shift_predicted(e1: Extension, e2: Extension, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``iD(L1, L2, M(λ)) - iD(L1, L2, F)`` with ``F`` the vertical plane."""
    M = cauchy_data_plane(e1.problem, lam, tol)
    F = LagrangianPlane.vertical(2)
    return duistermaat_index(e1.plane, e2.plane, M, tol) - duistermaat_index(e1.plane, e2.plane, F, tol)


def shift_profile(e1: Extension, e2: Extension, lams: Sequence[float],
                  tol: ToleranceConfig = DEFAULT_TOL) -> List[Tuple[int, int]]:
    """``(direct, predicted)`` spectral shift at each ``λ``, scanning each spectrum once."""
    top = float(max(lams))
    s1, s2 = np.array(spectrum_below(e1, top, tol)), np.array(spectrum_below(e2, top, tol))
    out = []
    for lam in lams:
        top_lam = lam + 1e3 * tol.root_tol * max(1.0, abs(lam))
        direct = int(np.sum(s1 <= top_lam)) - int(np.sum(s2 <= top_lam))
        out.append((direct, spectral_shift_predicted(e1, e2, lam, tol)))
    return out


def count_difference_predicted(e1: Extension, e2: Extension, a: float, b: float,
                               tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``N1 - N2`` on ``(a, b]`` as ``iD(L1, L2, M(b)) - iD(L1, L2, M(a))``."""
    p = e1.problem
    Ma, Mb = cauchy_data_plane(p, a, tol), cauchy_data_plane(p, b, tol)
    return duistermaat_index(e1.plane, e2.plane, Mb, tol) - duistermaat_index(e1.plane, e2.plane, Ma, tol)


def shift_bounds(e1: Extension, e2: Extension, tol: ToleranceConfig = DEFAULT_TOL) -> Tuple[int, int]:
    """``(σ₋, σ₊) = (iD(L1, L2, F), iD(L2, L1, F))``."""
    F = LagrangianPlane.vertical(2)
    return duistermaat_index(e1.plane, e2.plane, F, tol), duistermaat_index(e2.plane, e1.plane, F, tol)


@dataclass
class InterlacingReport:
    sigma_minus: int
    sigma_plus: int
    intersection_dim: int
    eigs1: List[float]
    eigs2: List[float]
    violations: List[Tuple[int, str]]

    @property
    def rank_ok(self) -> bool:
        return self.sigma_minus + self.sigma_plus == 2 - self.intersection_dim

    @property
    def ok(self) -> bool:
        return self.rank_ok and not self.violations


def interlacing_check(e1: Extension, e2: Extension, k_max: int, tol: ToleranceConfig = DEFAULT_TOL,
                      slack: float = 1e-7) -> InterlacingReport:
    """Check ``λ_{k-σ₋}(H1) ≤ λ_k(H2) ≤ λ_{k+σ₊}(H1)`` for ``k ≤ k_max``."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    sm, sp = shift_bounds(e1, e2, tol)
    dim12 = e1.plane.intersection_dim(e2.plane, tol)
    eigs1 = lowest_eigenvalues(e1, k_max + sp, tol)
    eigs2 = lowest_eigenvalues(e2, k_max, tol)
    bad = []
    for k in range(1, k_max + 1):
        lk = eigs2[k - 1]
        eps = slack * max(1.0, abs(lk))
        if k - sm >= 1 and eigs1[k - sm - 1] > lk + eps:
            bad.append((k, "lower"))
        if eigs1[k + sp - 1] < lk - eps:
            bad.append((k, "upper"))
    return InterlacingReport(sm, sp, dim12, eigs1, eigs2, bad)


# --- Morse index ----------------------------------------------------------------------------

MORSE_DELTAS = (1e-4, 1e-6)


def m_at_zero(problem: IntervalProblem, tol: ToleranceConfig = DEFAULT_TOL) -> Optional[np.ndarray]:
    """``M(0-)`` by linear extrapolation from ``λ = -δ``; ``None`` when the limit is multivalued."""
    try:
        Ms = [graph_operator(cauchy_data_plane(problem, -d, tol), tol) for d in MORSE_DELTAS]
    except (MultivaluedRelation, LagspecError):
        return None
    d1, d2 = MORSE_DELTAS
    slope = (Ms[1] - Ms[0]) / (d1 - d2)
    M0 = Ms[1] + d2 * slope
    scale = 1.0 + spectral_norm(Ms[0])
    if spectral_norm(Ms[1] - Ms[0]) > 1e-2 * scale or spectral_norm(M0 - Ms[1]) > 1e-4 * scale:
        return None
    return 0.5 * (M0 + M0.conj().T)


@dataclass(frozen=True)
class MorseReport:
    route_a: int
    route_b: Optional[int]

    @property
    def agree(self) -> bool:
        return self.route_b is None or self.route_a == self.route_b


def morse_index(e: Extension, tol: ToleranceConfig = DEFAULT_TOL) -> MorseReport:
    """Negative eigenvalues by scanning (A) and by ``n₊(P M(0-) P - Θ)`` (B)."""
    cut = 1e3 * tol.root_tol
    route_a = sum(1 for v in spectrum_below(e, 0.0, tol) if v < -cut)
    M0 = m_at_zero(e.problem, tol)
    route_b = None if M0 is None else bl_index(M0, e.projector_theta(tol), tol)
    return MorseReport(route_a, route_b)


# --- sharpness ------------------------------------------------------------------------------

@dataclass
class SharpnessReport:
    lambda0: float
    target: Tuple[int, int]
    bounds: Tuple[int, int]
    shift_below: Tuple[int, int]   # (direct, predicted) at λ0 - η
    shift_above: Tuple[int, int]   # (direct, predicted) at λ0 + η

    @property
    def attained(self) -> bool:
        sm, sp = self.target
        return (self.bounds == (sm, sp)
                and self.shift_below == (-sm, -sm)
                and self.shift_above == (sp, sp))


def sharpness_demo(p: IntervalProblem, sigma_minus: int, sigma_plus: int,
                   tol: ToleranceConfig = DEFAULT_TOL, eta: float = 1e-3) -> SharpnessReport:
    """Extensions for which both one-sided shifts at ``λ0`` hit the bounds.

    ``L1 = M(λ0) = graph(M0)`` and ``L2 = graph(M0 - P₋ + P₊)`` with
    orthogonal projectors of ranks ``σ₋`` and ``σ₊`` onto orthogonal subspaces.
    """
    if min(sigma_minus, sigma_plus) < 0 or sigma_minus + sigma_plus > 2:
        raise ValueError("need non-negative ranks with sum at most 2")
    F = LagrangianPlane.vertical(2)
    for shift in (0.0, -0.5, -1.5, -3.0):
        lam0 = p.dirichlet_switch + shift
        M = cauchy_data_plane(p, lam0, tol)
        if M.intersection_dim(F, tol) == 0:
            break
    else:
        raise LagspecError("could not find λ0 with M(λ0) transversal to the vertical plane")
    M0 = graph_operator(M, tol)
    d = np.zeros(2)
    d[:sigma_minus] = -1.0
    d[sigma_minus:sigma_minus + sigma_plus] = 1.0
    e1 = Extension(p, LagrangianPlane.graph(M0), "L1")
    e2 = Extension(p, LagrangianPlane.graph(M0 + np.diag(d)), "L2")
    bounds = shift_bounds(e1, e2, tol)
    below = (spectral_shift_direct(e1, e2, lam0 - eta, tol), spectral_shift_predicted(e1, e2, lam0 - eta, tol))
    above = (spectral_shift_direct(e1, e2, lam0 + eta, tol), spectral_shift_predicted(e1, e2, lam0 + eta, tol))
    return SharpnessReport(lam0, (sigma_minus, sigma_plus), bounds, below, above)


# --- eigenfunctions -------------------------------------------------------------------------

def solution_gram(p: IntervalProblem, lam1: float, lam2: float) -> np.ndarray:
    """``G[i, j] = ∫ conj(f_i) g_j`` for ``f = (c, s)`` at ``λ1`` and ``g = (c, s)`` at ``λ2``."""
    q = p.potential

    def rhs(x, y):
        c1, c1p, s1, s1p, c2, c2p, s2, s2p = y[:8]
        w1, w2 = q(x) - lam1, q(x) - lam2
        f, g = (c1, s1), (c2, s2)
        grams = [np.conj(fi) * gj for fi in f for gj in g]
        return np.array([c1p, w1 * c1, s1p, w1 * s1, c2p, w2 * c2, s2p, w2 * s2, *grams])

    y0 = np.array([1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 0, 0], dtype=complex)
    return _integrate(p, rhs, y0)[8:].reshape(2, 2)


def eigenfunction_coefficients(e: Extension, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Coefficients ``(a, b)`` of eigenfunctions ``a c + b s`` (columns), unnormalized."""
    X, Y = cauchy_frames(e.problem, np.array([lam]), basis="cs")
    return _intersection_coords(Frame(X[0], Y[0]), e.plane, tol)


@dataclass
class DerivativeRow:
    s: float
    k: int
    lam: float
    finite_difference: float
    formula: float
    skipped: bool = False

    @property
    def error(self) -> float:
        if self.skipped:
            return 0.0
        return abs(self.finite_difference - self.formula) / max(abs(self.formula), 1.0)


def eigenvalue_derivative_check(p: IntervalProblem, s_values: Sequence[float], k: int,
                                tol: ToleranceConfig = DEFAULT_TOL, h: float = 1e-4) -> List[DerivativeRow]:
    """Compare ``dλ_k/ds`` for the δ'-family with ``-|f'(0)|²`` (normalized ``f``)."""
    rows = []
    for s in s_values:
        vals = {}
        for ds in (-h, 0.0, h):
            vals[ds] = lowest_eigenvalues(Extension.from_catalog(p, "delta_prime", s + ds), k + 1, tol)
        lam = vals[0.0][k - 1]
        neighbours = [vals[0.0][j] for j in (k - 2, k) if 0 <= j < len(vals[0.0])]
        if any(abs(lam - nb) <= 1e-6 * max(1.0, abs(lam)) for nb in neighbours):
            rows.append(DerivativeRow(s, k, lam, np.nan, np.nan, skipped=True))
            continue
        fd = (vals[h][k - 1] - vals[-h][k - 1]) / (2 * h)
        e = Extension.from_catalog(p, "delta_prime", s)
        kappa = eigenfunction_coefficients(e, lam, tol)[:, 0]
        norm2 = float(np.real(kappa.conj() @ solution_gram(p, lam, lam) @ kappa))
        formula = -abs(kappa[1]) ** 2 / norm2
        rows.append(DerivativeRow(s, k, lam, fd, formula))
    return rows


# --- sweeps ---------------------------------------------------------------------------------

def sweep_table(p: IntervalProblem, family: str, s_grid: Sequence[float], k_max: int,
                tol: ToleranceConfig = DEFAULT_TOL) -> List[List[float]]:
    if family not in ("delta", "delta_prime"):
        raise ValueError("family must be 'delta' or 'delta_prime'")
    rows = [[float(s)] + lowest_eigenvalues(Extension.from_catalog(p, family, s), k_max, tol) for s in s_grid]
    if family == "delta_prime":
        aper = lowest_eigenvalues(Extension.from_catalog(p, "antiperiodic"), k_max + 1, tol)
        for row in rows:
            for j in range(2, k_max + 1, 2):
                if abs(aper[j - 2] - aper[j - 1]) <= 1e-8 * max(1.0, abs(aper[j - 1])):
                    if abs(row[j] - aper[j - 1]) > 1e-6 * max(1.0, abs(aper[j - 1])):
                        raise InternalInconsistency(
                            f"lambda_{j} = {row[j]!r} at s = {row[0]!r} is not pinned at {aper[j - 1]!r}")
    return rows


def sweep_csv(p: IntervalProblem, family: str, s_grid: Sequence[float], k_max: int,
              tol: ToleranceConfig = DEFAULT_TOL) -> str:
    rows = sweep_table(p, family, s_grid, k_max, tol)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s"] + [f"lambda_{k}" for k in range(1, k_max + 1)])
    for row in rows:
        w.writerow([repr(v) for v in row])
    return buf.getvalue()


def spectrum_csv(sl: SpectrumSlice) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "multiplicity"])
    for lam, m in sl.eigenvalues:
        w.writerow([repr(lam), m])
    return buf.getvalue()
