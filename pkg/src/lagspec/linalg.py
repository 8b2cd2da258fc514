"""Dense complex linear algebra with an explicit tolerance policy.

Every matrix is carried as a ``numpy.ndarray`` of dtype ``complex128``.
All thresholds come from a single :class:`ToleranceConfig`.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, RankDeficientFrame


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used throughout the package.

    ``rank_rel_tol``
        singular values below ``rank_rel_tol * sigma_max`` are treated as zero.
    ``inertia_zero_tol``
        eigenvalues within ``tau = inertia_zero_tol * max(1, ||A||)`` of zero
        are counted as zero.
    ``root_tol``
        target accuracy for located crossings / eigenvalues.
    ``lagrangian_tol``
        relative residual allowed in ``X*Y - Y*X`` for a frame to be Lagrangian.
    ``epsilon_sigma_tol``
        acceptance threshold (relative) for ``sigma_min(X + eps Y)``.
    ``crossing_tol``
        singular-value threshold below which two orthonormal frames are
        considered to intersect.
    """

    rank_rel_tol: float = 1e-10
    inertia_zero_tol: float = 1e-9
    root_tol: float = 1e-10
    lagrangian_tol: float = 1e-8
    epsilon_sigma_tol: float = 1e-6
    crossing_tol: float = 1e-6

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{f.name} must be strictly positive, got {value!r}")

    def with_(self, **changes) -> "ToleranceConfig":
        return replace(self, **changes)


DEFAULT_TOL = ToleranceConfig()


class Inertia(NamedTuple):
    n_minus: int
    n_zero: int
    n_plus: int

    @property
    def dim(self) -> int:
        return self.n_minus + self.n_zero + self.n_plus


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a 2-D complex array, validating finiteness."""
    m = np.asarray(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitian_part(a) -> np.ndarray:
    m = as_matrix(a)
    return 0.5 * (m + m.conj().T)


def spectral_norm(a) -> float:
    m = np.asarray(a)
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def hermitian_inertia(a, tol: ToleranceConfig = DEFAULT_TOL) -> Inertia:
    """Count negative, zero and positive eigenvalues of a Hermitian matrix.

    The matrix is symmetrized before the eigenvalue decomposition; an
    eigenvalue is "zero" when it lies within ``inertia_zero_tol * max(1, ||A||)``.
    """
    m = as_matrix(a) if np.asarray(a).size else np.zeros((0, 0), dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"inertia needs a square matrix, got {m.shape}")
    if m.shape[0] == 0:
        return Inertia(0, 0, 0)
    skew = m - m.conj().T
    evals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    norm = float(np.max(np.abs(evals)))
    if np.any(skew):
        norm = spectral_norm(m)
        asym = spectral_norm(skew)
        if asym > tol.inertia_zero_tol * norm:
            raise NotHermitian(f"||A - A*|| = {asym:.3e} exceeds tolerance for ||A|| = {norm:.3e}")
    tau = tol.inertia_zero_tol * max(1.0, norm)
    n_minus = int(np.sum(evals < -tau))
    n_plus = int(np.sum(evals > tau))
    return Inertia(n_minus, len(evals) - n_minus - n_plus, n_plus)


def n_minus(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    return hermitian_inertia(a, tol).n_minus


def n_plus(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    return hermitian_inertia(a, tol).n_plus


def _singular_values(m: np.ndarray) -> np.ndarray:
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def rank_with_tol(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above ``rank_rel_tol * sigma_max``."""
    m = np.asarray(a, dtype=complex)
    s = _singular_values(m)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_rel_tol * s[0]))


def nullspace(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of ``a``."""
    m = as_matrix(a)
    ncols = m.shape[1]
    if m.shape[0] == 0 or not np.any(m):
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    r = int(np.sum(s > tol.rank_rel_tol * s[0]))
    return vh[r:].conj().T.copy()


def orthonormal_range(a, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``a``."""
    m = np.asarray(a, dtype=complex)
    if m.size == 0 or not np.any(m):
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    r = int(np.sum(s > tol.rank_rel_tol * s[0]))
    return u[:, :r].copy()


def orthogonal_complement(basis, ambient_dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    b = np.asarray(basis, dtype=complex).reshape(ambient_dim, -1)
    if b.shape[1] == 0:
        return np.eye(ambient_dim, dtype=complex)
    return nullspace(b.conj().T, tol)


def subspace_intersection_dim(za, zb, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``dim range(za) ∩ range(zb)`` for two full-column-rank matrices."""
    a = as_matrix(za)
    b = as_matrix(zb)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch("frames live in different ambient spaces")
    for name, z in (("first", a), ("second", b)):
        if rank_with_tol(z, tol) != z.shape[1]:
            raise RankDeficientFrame(f"{name} frame does not have full column rank")
    return a.shape[1] + b.shape[1] - rank_with_tol(np.hstack([a, b]), tol)


def subspace_intersection(za, zb, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``range(za) ∩ range(zb)``."""
    a = as_matrix(za)
    b = as_matrix(zb)
    coeffs = nullspace(np.hstack([a, -b]), tol)
    return orthonormal_range(a @ coeffs[: a.shape[1]], tol)
