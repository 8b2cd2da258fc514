"""Numerical guards for the interval model."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..linalg import DEFAULT_TOL, ToleranceConfig
from ..symplectic import J_matrix
from .interval import IntervalProblem, cauchy_frames, fundamental_solutions
from .spectra import Extension, eigenvalues, solution_gram


def greens_identity_check(p: IntervalProblem, lam1: float, lam2: float,
                          tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest entry of ``⟨f, S*g⟩ - ⟨S*f, g⟩ - ω(Γf, Γg)`` over the bases ``{c, s}``.

    With ``S*f = λ1 f`` and ``S*g = λ2 g`` the left side is ``(λ2 - λ1)∫ conj(f) g``,
    integrated alongside the solutions.
    """
    G = solution_gram(p, lam1, lam2)
    X1, Y1 = cauchy_frames(p, np.array([lam1]), basis="cs")
    X2, Y2 = cauchy_frames(p, np.array([lam2]), basis="cs")
    Z1 = np.vstack([X1[0], Y1[0]])
    Z2 = np.vstack([X2[0], Y2[0]])
    omega = Z1.conj().T @ J_matrix(2) @ Z2
    return float(np.max(np.abs((lam2 - lam1) * G - omega)))


def wronskian_drift(p: IntervalProblem, lams: Sequence[float], relative: bool = False) -> float:
    """``max |c s' - c' s - 1|`` at ``x = ℓ`` over ``lams``.

    Far below the spectrum both products grow like ``e^{2ℓ√-λ}`` and their
    difference loses digits to cancellation; ``relative=True`` divides by
    ``max(1, |c s'| + |c' s|)`` to measure the integration error alone.
    """
    fs = fundamental_solutions(p, np.asarray(lams, dtype=float))
    drift = np.abs(fs.wronskian - 1.0)
    if relative:
        drift = drift / np.maximum(1.0, np.abs(fs.c_l * fs.sp_l) + np.abs(fs.cp_l * fs.s_l))
    return float(np.max(drift))


@dataclass(frozen=True)
class PositivityReport:
    crossings: int
    violations: List[Tuple[float, int, int]]   # (λ, intersection dim, n_plus)

    @property
    def ok(self) -> bool:
        return not self.violations


def crossing_positivity(e: Extension, window: Tuple[float, float],
                        tol: ToleranceConfig = DEFAULT_TOL) -> PositivityReport:
    """Every located crossing of ``M(λ)`` with the plane has a positive definite form."""
    sl = eigenvalues(e, window, tol)
    bad = [(lam, r.intersection_dim, r.form_inertia.n_plus)
           for (lam, _), r in zip(sl.eigenvalues, sl.crossings)
           if r.form_inertia.n_plus != r.intersection_dim]
    return PositivityReport(len(sl.crossings), bad)
