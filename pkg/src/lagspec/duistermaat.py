"""The Duistermaat triple index of Lagrangian planes.

The working formula uses ε-Robin maps ``R_j = Y_j (X_j + ε Y_j)⁻¹``:

    iD(L1, L2, L3) = n₋(R2 - R1) + n₋(R3 - R2) - n₋(R3 - R1)

for any ε outside the finite exceptional set.  An independent route through
the quadratic forms ``Q(α, β; γ)`` serves as an oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EpsilonInExceptionSet,
    InternalInconsistency,
    NoAdmissibleEpsilon,
    NotTransversal,
    TransversalityViolated,
    TransversalSearchFailed,
)
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    hermitian_inertia,
    n_minus,
    spectral_norm,
)
from .symplectic import (
    J_matrix,
    LagrangianPlane,
    LinearRelation,
    ProjectorTheta,
    graph_operator,
    plane_from_projector_theta,
    random_lagrangian,
    relation_difference,
    relation_inverse,
)

EPSILON_LADDER = tuple(2.0 ** -k for k in range(3, 41))


@dataclass(frozen=True)
class RobinMap:
    epsilon: float
    R: np.ndarray


@dataclass(frozen=True)
class EpsilonWitness:
    epsilon: float
    min_sigma: float


def _common_n(planes: Sequence[LagrangianPlane]) -> int:
    if not planes:
        raise ValueError("need at least one plane")
    n = planes[0].n
    if any(p.n != n for p in planes):
        raise DimensionMismatch("planes have different dimensions")
    return n


def _sigma_min(m: np.ndarray) -> float:
    return float(np.linalg.svd(m, compute_uv=False)[-1])


def _admissible(planes: Sequence[LagrangianPlane], eps: float, tol: ToleranceConfig) -> Optional[float]:
    sig = min(_sigma_min(p.X + eps * p.Y) for p in planes)
    scale = max(spectral_norm(p.X) + eps * spectral_norm(p.Y) for p in planes)
    return sig if sig > tol.epsilon_sigma_tol * scale else None


def admissible_epsilons(planes: Sequence[LagrangianPlane], count: int = 2,
                        tol: ToleranceConfig = DEFAULT_TOL) -> List[EpsilonWitness]:
    """The first ``count`` ladder values at which every ``X_j + εY_j`` is well conditioned."""
    _common_n(planes)
    found = []
    for eps in EPSILON_LADDER:
        sig = _admissible(planes, eps, tol)
        if sig is not None:
            found.append(EpsilonWitness(eps, sig))
            if len(found) == count:
                return found
    raise NoAdmissibleEpsilon(f"found {len(found)} of {count} admissible epsilon values on the ladder")


def choose_epsilon(planes: Sequence[LagrangianPlane], tol: ToleranceConfig = DEFAULT_TOL) -> EpsilonWitness:
    return admissible_epsilons(planes, 1, tol)[0]


def robin_map(L: LagrangianPlane, epsilon: float, tol: ToleranceConfig = DEFAULT_TOL) -> RobinMap:
    if _admissible([L], epsilon, tol) is None:
        raise EpsilonInExceptionSet(f"X + {epsilon:g} Y is numerically singular")
    R = np.linalg.solve((L.X + epsilon * L.Y).T, L.Y.T).T
    return RobinMap(epsilon, 0.5 * (R + R.conj().T))


def _index_at(planes: Sequence[LagrangianPlane], eps: float, tol: ToleranceConfig) -> int:
    R1, R2, R3 = (robin_map(p, eps, tol).R for p in planes)
    return n_minus(R2 - R1, tol) + n_minus(R3 - R2, tol) - n_minus(R3 - R1, tol)


def duistermaat_index(L1: LagrangianPlane, L2: LagrangianPlane, L3: LagrangianPlane,
                      tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``iD(L1, L2, L3)``, evaluated at two admissible ε and cross-checked."""
    planes = (L1, L2, L3)
    _common_n(planes)
    w1, w2 = admissible_epsilons(planes, 2, tol)
    a = _index_at(planes, w1.epsilon, tol)
    b = _index_at(planes, w2.epsilon, tol)
    if a != b:
        raise InternalInconsistency(f"index differs between eps={w1.epsilon:g} ({a}) and eps={w2.epsilon:g} ({b})")
    return a


def q_form(alpha: LagrangianPlane, beta: LagrangianPlane, gamma: LagrangianPlane,
           tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Matrix of ``(u1, u2) ↦ ω(u1, T u2)`` on ``alpha`` where ``gamma = graph(T: alpha → beta)``.

    Coordinates are those of the orthonormal frame of ``alpha``.
    """
    _common_n((alpha, beta, gamma))
    n = alpha.n
    if alpha.intersection_dim(beta, tol) or beta.intersection_dim(gamma, tol):
        raise NotTransversal("q_form needs alpha ∩ beta = 0 and beta ∩ gamma = 0")
    coeffs = np.linalg.solve(np.hstack([alpha.Z, beta.Z]), gamma.Z)
    A, B = coeffs[:n], coeffs[n:]
    T = np.linalg.solve(A.T, B.T).T
    Q = alpha.Z.conj().T @ J_matrix(n) @ beta.Z @ T
    return 0.5 * (Q + Q.conj().T)


def _transversal_plane(planes: Sequence[LagrangianPlane], rng: np.random.Generator,
                       tol: ToleranceConfig, attempts: int = 64) -> LagrangianPlane:
    n = planes[0].n
    for _ in range(attempts):
        cand = random_lagrangian(n, rng)
        if all(cand.intersection_dim(p, tol) == 0 for p in planes):
            return cand
    raise TransversalSearchFailed(f"no plane transversal to all inputs after {attempts} attempts")


def duistermaat_index_via_Q(L1: LagrangianPlane, L2: LagrangianPlane, L3: LagrangianPlane,
                            tol: ToleranceConfig = DEFAULT_TOL, seed=None) -> int:
    planes = (L1, L2, L3)
    _common_n(planes)
    Lh = _transversal_plane(planes, np.random.default_rng(seed), tol)
    return (n_minus(q_form(L2, Lh, L3, tol), tol)
            - n_minus(q_form(L1, Lh, L3, tol), tol)
            + n_minus(q_form(L1, Lh, L2, tol), tol))


def bl_index(M, pt: ProjectorTheta, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``n₋(Θ - PMP)`` on ``range P``."""
    M = as_matrix(M)
    if M.shape != pt.P.shape:
        raise DimensionMismatch("M and P must have the same shape")
    U = pt.range_basis
    if U.shape[1] == 0:
        return 0
    form = U.conj().T @ (pt.Theta - M) @ U
    return n_minus(0.5 * (form + form.conj().T), tol)


def dn_index_check(theta, basis=None, n: Optional[int] = None,
                   tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """``iD(K⊕0, 0⊕K, L_Θ)`` for ``Θ`` acting on the span of ``basis``.

    ``basis`` holds orthonormal columns spanning the subspace; it defaults to
    the first ``dim Θ`` coordinate vectors of ``K = ℂⁿ``.  Raises if the
    index differs from the number of non-negative eigenvalues of ``Θ``.
    """
    theta = as_matrix(theta)
    k = theta.shape[0]
    if basis is None:
        n = k if n is None else n
        if k > n:
            raise DimensionMismatch("subspace larger than the ambient space")
        basis = np.eye(n, k, dtype=complex)
    basis = as_matrix(basis)
    if basis.shape[1] != k:
        raise DimensionMismatch("basis and Theta disagree on the subspace dimension")
    n = basis.shape[0]
    P = basis @ basis.conj().T
    pt = ProjectorTheta(P, basis @ theta @ basis.conj().T)
    L = plane_from_projector_theta(pt, tol)
    value = duistermaat_index(LagrangianPlane.horizontal(n), LagrangianPlane.vertical(n), L, tol)
    inertia = hermitian_inertia(theta, tol)
    expected = inertia.n_zero + inertia.n_plus
    if value != expected:
        raise InternalInconsistency(f"iD = {value} but n_0+(Theta) = {expected}")
    return value


@dataclass(frozen=True)
class DeltaReport:
    relation: LinearRelation
    operator: np.ndarray
    n_minus: int
    n_zero: int
    rank: int


def delta_relation(L1: LagrangianPlane, L2: LagrangianPlane, L3: LagrangianPlane,
                   tol: ToleranceConfig = DEFAULT_TOL) -> DeltaReport:
    """``Δ = (L1 - L3)⁻¹ - (L2 - L3)⁻¹`` together with its inertia and rank."""
    n = _common_n((L1, L2, L3))
    vertical = LagrangianPlane.vertical(n)
    for name, other in (("L1", L1), ("L2", L2), ("vertical", vertical)):
        if L3.intersection_dim(other, tol):
            raise TransversalityViolated(f"L3 must be transversal to {name}")
    inv1 = relation_inverse(relation_difference(L1, L3, tol))
    inv2 = relation_inverse(relation_difference(L2, L3, tol))
    delta = relation_difference(inv1, inv2, tol)
    D = graph_operator(delta, tol)
    inertia = hermitian_inertia(D, tol)
    return DeltaReport(delta, D, inertia.n_minus, inertia.n_zero, inertia.n_minus + inertia.n_plus)
