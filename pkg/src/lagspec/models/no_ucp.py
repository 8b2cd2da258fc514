"""Two intervals ``(-π, 0) ∪ (0, π)`` glued at ``0``: a model with inner solutions.

``S = -d²/dx²`` with Dirichlet conditions at ``±π`` and continuity at ``0``;
the boundary space is one dimensional with

    Γ0 f = (f1(0) + f2(0)) / 2,    Γ1 f = f2'(0) - f1'(0).

For ``z = k²`` the function ``(sin k(π+x), -sin k(π-x))`` has vanishing traces,
so the Cauchy data path cannot see it and crossing counts miss one
eigenvalue per ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from ..duistermaat import duistermaat_index
from ..linalg import DEFAULT_TOL, ToleranceConfig
from ..maslov import PlanePath, find_crossings
from ..symplectic import Frame, LagrangianPlane
from .interval import _entire_cs
from .spectra import lam_of_u, u_of_lam

HALF_LENGTH = np.pi


@dataclass(frozen=True)
class NoUCPData:
    cauchy_frame: Frame
    inner_solution_dim: int


def _sc(lam):
    """``sin(π√λ)/√λ`` and ``cos(π√λ)``, entire in ``λ``."""
    C, S = _entire_cs(np.asarray(lam, dtype=float), HALF_LENGTH)
    return S, C


def inner_solution_dim(lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    if lam <= 0:
        return 0
    k = round(np.sqrt(lam))
    return int(k >= 1 and abs(lam - k * k) <= tol.root_tol * max(1.0, lam))


def no_ucp_model(lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> NoUCPData:
    if not np.isfinite(lam):
        raise ValueError("lambda must be finite")
    S, C = _sc(lam)
    frame = Frame(np.array([[float(S)]]), np.array([[-2.0 * float(C)]]))
    return NoUCPData(frame, inner_solution_dim(lam, tol))


def no_ucp_path(u_lo: float, u_hi: float) -> PlanePath:
    """``u ↦ M(λ(u))`` with ``λ = u|u| + u``."""

    def frames_at(us):
        S, C = _sc(lam_of_u(np.asarray(us, float)))
        return S.reshape(-1, 1, 1).astype(complex), (-2.0 * C).reshape(-1, 1, 1).astype(complex)

    def frame_at(u):
        X, Y = frames_at(np.array([u]))
        return Frame(X[0], Y[0])

    return PlanePath(u_lo, u_hi, frame_at, None, "increasing", frames_at)


def _eigen_matrix(plane: LagrangianPlane, lam: float) -> np.ndarray:
    """Conditions on ``(a, b)`` for ``f = (a sin√λ(π+x), b sin√λ(π-x)) / √λ`` to lie in the domain."""
    x0, y0 = plane.X[0, 0], plane.Y[0, 0]
    S, C = (float(v) for v in _sc(lam))
    # continuity at 0, then ω((x0, y0), Γf) = 0 with Γ0 f = (a + b) S / 2, Γ1 f = -(a + b) C
    row = np.conj(x0) * (-(C)) - np.conj(y0) * (S / 2.0)
    return np.array([[S, -S], [row, row]])


def no_ucp_spectrum(plane: LagrangianPlane, window: Tuple[float, float],
                    tol: ToleranceConfig = DEFAULT_TOL, steps: int = 4000) -> List[Tuple[float, int]]:
    """Eigenvalues in ``[a, b]`` from the two-interval secular system, with multiplicities.

    Candidates are the inner-solution points ``k²`` and the real zeros of the
    crossing determinant; each multiplicity is the nullity of the 2×2 system.
    """
    a, b = map(float, window)
    x0, y0 = plane.X[0, 0], plane.Y[0, 0]

    def h(lam):
        S, C = (float(v) for v in _sc(lam))
        val = np.conj(x0) * (-2.0 * C) - np.conj(y0) * S
        return float(np.real(val)) / np.hypot(S, 2.0 * C)

    us = np.linspace(u_of_lam(a), u_of_lam(b), steps + 1)
    lams = lam_of_u(us)
    hv = np.array([h(l) for l in lams])
    cands = [lam for lam, v in zip(lams, hv) if v == 0.0]
    for i in np.nonzero(np.sign(hv[:-1]) * np.sign(hv[1:]) < 0)[0]:
        cands.append(brentq(h, lams[i], lams[i + 1], xtol=tol.root_tol * max(1.0, abs(lams[i])), rtol=1e-15))
    k = 1
    while k * k <= b:
        if k * k >= a:
            cands.append(float(k * k))
        k += 1
    out: List[Tuple[float, int]] = []
    for lam in sorted(cands):
        if out and abs(lam - out[-1][0]) <= 1e3 * tol.root_tol * max(1.0, abs(lam)):
            continue
        s = np.linalg.svd(_eigen_matrix(plane, lam), compute_uv=False)
        scale = max(1.0, float(np.max(np.abs(_sc(lam)))))
        nullity = int(np.sum(s <= 1e3 * tol.root_tol * scale))
        if nullity:
            out.append((float(lam), nullity))
    return out


def no_ucp_count(plane: LagrangianPlane, interval: Tuple[float, float], tol: ToleranceConfig = DEFAULT_TOL) -> int:
    a, b = interval
    edge = 1e3 * tol.root_tol * max(1.0, abs(a))
    return sum(m for lam, m in no_ucp_spectrum(plane, interval, tol) if lam > a + edge)


def no_ucp_crossing_count(plane: LagrangianPlane, interval: Tuple[float, float],
                          tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Eigenvalue count in ``(a, b]`` as seen by crossings of ``M(λ)`` with ``plane``."""
    a, b = interval
    path = no_ucp_path(u_of_lam(a), u_of_lam(b))
    reports = find_crossings(path, plane, tol, steps=4000)
    return sum(r.intersection_dim for r in reports if r.t > path.a)


def inner_solution_count(interval: Tuple[float, float], tol: ToleranceConfig = DEFAULT_TOL) -> int:
    a, b = interval
    k_lo, k_hi = int(np.floor(np.sqrt(max(a, 0.0)))), int(np.floor(np.sqrt(max(b, 0.0))))
    return sum(inner_solution_dim(float(k * k), tol) for k in range(max(k_lo, 1), k_hi + 1) if a < k * k <= b)


@dataclass(frozen=True)
class NoUCPReport:
    interval: Tuple[float, float]
    true_count: int
    crossing_count: int
    inner_solutions: int
    count_difference: int
    predicted_difference: int

    @property
    def undercount_explained(self) -> bool:
        return self.true_count - self.crossing_count == self.inner_solutions

    @property
    def interval_formula_exact(self) -> bool:
        return self.count_difference == self.predicted_difference


def no_ucp_report(interval: Tuple[float, float] = (0.1, 9.5), tol: ToleranceConfig = DEFAULT_TOL) -> NoUCPReport:
    """Crossing undercount of ``H_F`` and the endpoint formula for ``N(H1) - N(H_F)``."""
    a, b = interval
    F, L1 = LagrangianPlane.vertical(1), LagrangianPlane.horizontal(1)
    nF = no_ucp_count(F, interval, tol)
    n1 = no_ucp_count(L1, interval, tol)
    Ma = LagrangianPlane.from_frame(no_ucp_model(a, tol).cauchy_frame)
    Mb = LagrangianPlane.from_frame(no_ucp_model(b, tol).cauchy_frame)
    predicted = duistermaat_index(L1, F, Mb, tol) - duistermaat_index(L1, F, Ma, tol)
    return NoUCPReport((a, b), nF, no_ucp_crossing_count(F, interval, tol), inner_solution_count(interval, tol),
                       n1 - nF, predicted)
