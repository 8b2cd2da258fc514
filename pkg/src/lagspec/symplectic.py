"""The symplectic space (K ⊕ K, ω), Lagrangian planes and linear relations.

Vectors of K ⊕ K are stacked as ``(u0; u1)`` of length ``2n``.  The form is
``ω(u, v) = <u0, v1> - <u1, v0> = <u, J v>`` with ``J = [[0, I], [-I, 0]]`` and
inner products linear in the second argument.

A plane is stored through an orthonormal ``2n × n`` frame; two planes are
equal when their intersection has dimension ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidProjector,
    MultivaluedRelation,
    NotHermitian,
    NotLagrangian,
    NotSymplectic,
    RankDeficientFrame,
)
from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    nullspace,
    orthogonal_complement,
    orthonormal_range,
    rank_with_tol,
    spectral_norm,
    subspace_intersection,
    subspace_intersection_dim,
)


def J_matrix(n: int) -> np.ndarray:
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, eye], [-eye, zero]])


def omega(u, v) -> complex:
    """The symplectic form on stacked vectors ``u = (u0; u1)``, ``v = (v0; v1)``."""
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    if u.shape != v.shape or u.size % 2:
        raise DimensionMismatch(f"omega needs two vectors of equal even length, got {u.size} and {v.size}")
    n = u.size // 2
    return complex(np.vdot(u[:n], v[n:]) - np.vdot(u[n:], v[:n]))


@dataclass(frozen=True, eq=False)
class Frame:
    """A pair ``(X, Y)`` whose stacked columns span an ``n``-dimensional subspace."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = as_matrix(self.X)
        Y = as_matrix(self.Y)
        if X.shape != Y.shape or X.shape[0] != X.shape[1]:
            raise DimensionMismatch(f"frame blocks must be equal square matrices, got {X.shape} and {Y.shape}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def Z(self) -> np.ndarray:
        return np.vstack([self.X, self.Y])

    def check_rank(self, tol: ToleranceConfig = DEFAULT_TOL) -> "Frame":
        if rank_with_tol(self.Z, tol) != self.n:
            raise RankDeficientFrame("stacked frame (X; Y) is not of full column rank")
        return self


def lagrangian_residual(X: np.ndarray, Y: np.ndarray) -> float:
    """``||X*Y - Y*X|| / (||X|| ||Y|| + 1)``."""
    return spectral_norm(X.conj().T @ Y - Y.conj().T @ X) / (spectral_norm(X) * spectral_norm(Y) + 1.0)


def is_lagrangian(frame: Frame, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    frame.check_rank(tol)
    return lagrangian_residual(frame.X, frame.Y) <= tol.lagrangian_tol


def _canonical(Z: np.ndarray) -> np.ndarray:
    u, _, _ = np.linalg.svd(Z, full_matrices=False)
    return u


class LagrangianPlane:
    """A Lagrangian subspace of K ⊕ K stored by an orthonormal frame."""

    __slots__ = ("_Z", "_n")

    def __init__(self, X, Y=None, *, tol: ToleranceConfig = DEFAULT_TOL, check: bool = True):
        if Y is None:
            Z = as_matrix(X)
            if Z.shape[0] != 2 * Z.shape[1]:
                raise DimensionMismatch(f"stacked frame must be 2n x n, got {Z.shape}")
        else:
            Z = Frame(X, Y).Z
        n = Z.shape[1]
        if rank_with_tol(Z, tol) != n:
            raise RankDeficientFrame("stacked frame (X; Y) is not of full column rank")
        Zc = _canonical(Z)
        if check and lagrangian_residual(Zc[:n], Zc[n:]) > tol.lagrangian_tol:
            raise NotLagrangian("frame does not satisfy X*Y = Y*X")
        self._Z = Zc
        self._n = n

    @classmethod
    def from_frame(cls, frame: Frame, tol: ToleranceConfig = DEFAULT_TOL) -> "LagrangianPlane":
        return cls(frame.X, frame.Y, tol=tol)

    @classmethod
    def horizontal(cls, n: int) -> "LagrangianPlane":
        return cls(np.eye(n), np.zeros((n, n)))

    @classmethod
    def vertical(cls, n: int) -> "LagrangianPlane":
        return cls(np.zeros((n, n)), np.eye(n))

    @classmethod
    def graph(cls, H) -> "LagrangianPlane":
        H = as_matrix(H)
        return cls(np.eye(H.shape[0]), H)

    @property
    def n(self) -> int:
        return self._n

    @property
    def Z(self) -> np.ndarray:
        return self._Z

    @property
    def X(self) -> np.ndarray:
        return self._Z[: self._n]

    @property
    def Y(self) -> np.ndarray:
        return self._Z[self._n:]

    @property
    def frame(self) -> Frame:
        return Frame(self.X, self.Y)

    def projector(self) -> np.ndarray:
        return self._Z @ self._Z.conj().T

    def intersection_dim(self, other: "LagrangianPlane", tol: ToleranceConfig = DEFAULT_TOL) -> int:
        return subspace_intersection_dim(self._Z, other.Z, tol)

    def intersection(self, other: "LagrangianPlane", tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
        return subspace_intersection(self._Z, other.Z, tol)

    def same_as(self, other: "LagrangianPlane", tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return self._n == other.n and self.intersection_dim(other, tol) == self._n

    def gap(self, other: "LagrangianPlane") -> float:
        """Gap distance ``||P_self - P_other||``."""
        return spectral_norm(self.projector() - other.projector())

    def as_relation(self) -> "LinearRelation":
        return LinearRelation(self._Z, orthonormal=True)

    def __repr__(self) -> str:
        return f"LagrangianPlane(n={self._n})"


@dataclass(frozen=True, eq=False)
class CoFrame:
    """Kernel description ``L = ker (A | B)`` with ``A B* = B A*``."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A)
        B = as_matrix(self.B)
        if A.shape != B.shape or A.shape[0] != A.shape[1]:
            raise DimensionMismatch("co-frame blocks must be equal square matrices")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    def to_plane(self, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
        if rank_with_tol(np.hstack([self.A, self.B]), tol) != self.A.shape[0]:
            raise RankDeficientFrame("co-frame (A | B) is not of full row rank")
        return LagrangianPlane(self.B.conj().T, -self.A.conj().T, tol=tol)


def coframe_of(L: LagrangianPlane) -> CoFrame:
    """Co-frame ``(Y*, -X*)`` whose kernel is ``L``."""
    return CoFrame(L.Y.conj().T, -L.X.conj().T)


@dataclass(frozen=True, eq=False)
class ProjectorTheta:
    """Boundary-condition data ``(I-P)Γ0 f = 0``, ``P Γ1 f = Θ P Γ0 f``."""

    P: np.ndarray
    Theta: np.ndarray

    def __post_init__(self):
        P = as_matrix(self.P)
        T = as_matrix(self.Theta)
        if P.shape != T.shape or P.shape[0] != P.shape[1]:
            raise DimensionMismatch("P and Theta must be square of the same size")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Theta", T)

    def validate(self, tol: ToleranceConfig = DEFAULT_TOL) -> "ProjectorTheta":
        P, T = self.P, self.Theta
        scale = max(1.0, spectral_norm(T))
        if spectral_norm(P @ P - P) > tol.lagrangian_tol or spectral_norm(P - P.conj().T) > tol.lagrangian_tol:
            raise InvalidProjector("P is not an orthogonal projector")
        if spectral_norm(T - T.conj().T) > tol.lagrangian_tol * scale:
            raise NotHermitian("Theta is not Hermitian")
        if spectral_norm(P @ T @ P - T) > tol.lagrangian_tol * scale:
            raise InvalidProjector("Theta does not act on range(P)")
        return self

    @property
    def range_basis(self) -> np.ndarray:
        return orthonormal_range(self.P)

    @property
    def rank(self) -> int:
        return self.range_basis.shape[1]


def plane_from_projector_theta(pt: ProjectorTheta, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    pt.validate(tol)
    P, T = pt.P, pt.Theta
    eye = np.eye(P.shape[0])
    return LagrangianPlane(P, P @ T @ P + P - eye, tol=tol)


def projector_theta_from_plane(L: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL) -> ProjectorTheta:
    """Recover ``(P, Θ)``; ``range P`` is the column space of the X-block.

    Vectors ``(0, v)`` of ``L`` satisfy ``v ⊥ range X``, so
    ``Θ = P Y X⁺ P`` restricted to ``range P``.
    """
    X, Y = L.X, L.Y
    U = orthonormal_range(X, tol)
    P = U @ U.conj().T
    if U.shape[1] == 0:
        return ProjectorTheta(P, np.zeros_like(P))
    Xpinv = np.linalg.pinv(X, rcond=tol.rank_rel_tol)
    theta_r = U.conj().T @ Y @ Xpinv @ U
    theta_r = 0.5 * (theta_r + theta_r.conj().T)
    return ProjectorTheta(P, U @ theta_r @ U.conj().T)


class LinearRelation:
    """A subspace of K ⊕ K, viewed as a multivalued operator on K."""

    __slots__ = ("_B", "_n")

    def __init__(self, basis, *, orthonormal: bool = False, tol: ToleranceConfig = DEFAULT_TOL):
        B = np.asarray(basis, dtype=complex)
        if B.ndim == 1:
            B = B.reshape(-1, 1)
        if B.shape[0] % 2:
            raise DimensionMismatch("relation basis must have an even number of rows")
        self._n = B.shape[0] // 2
        self._B = B if orthonormal else orthonormal_range(B, tol)

    @property
    def n(self) -> int:
        return self._n

    @property
    def basis(self) -> np.ndarray:
        return self._B

    @property
    def dim(self) -> int:
        return self._B.shape[1]

    @property
    def top(self) -> np.ndarray:
        return self._B[: self._n]

    @property
    def bottom(self) -> np.ndarray:
        return self._B[self._n:]

    def is_lagrangian(self, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        if self.dim != self._n:
            return False
        return lagrangian_residual(self.top, self.bottom) <= tol.lagrangian_tol

    def to_plane(self, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
        if self.dim != self._n:
            raise NotLagrangian(f"relation has dimension {self.dim}, expected {self._n}")
        return LagrangianPlane(self._B, tol=tol)

    def same_as(self, other: "LinearRelation", tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        return rank_with_tol(np.hstack([self._B, other.basis]), tol) == self.dim

    def __repr__(self) -> str:
        return f"LinearRelation(n={self._n}, dim={self.dim})"


Relational = Union[LinearRelation, LagrangianPlane]


def _as_relation(r: Relational) -> LinearRelation:
    return r.as_relation() if isinstance(r, LagrangianPlane) else r


def symplectic_complement(W: Relational, tol: ToleranceConfig = DEFAULT_TOL) -> LinearRelation:
    """``W^ω = (J W)^⊥``."""
    W = _as_relation(W)
    JW = J_matrix(W.n) @ W.basis
    return LinearRelation(orthogonal_complement(JW, 2 * W.n, tol), orthonormal=True)


def relation_difference(L: Relational, M: Relational, tol: ToleranceConfig = DEFAULT_TOL) -> LinearRelation:
    """``L - M = {(u, v_L - v_M) : (u, v_L) ∈ L, (u, v_M) ∈ M}``."""
    L = _as_relation(L)
    M = _as_relation(M)
    if L.n != M.n:
        raise DimensionMismatch("relations act on spaces of different dimension")
    k = L.dim
    coeffs = nullspace(np.hstack([L.top, -M.top]), tol)
    a, b = coeffs[:k], coeffs[k:]
    vectors = np.vstack([L.top @ a, L.bottom @ a - M.bottom @ b])
    return LinearRelation(vectors, tol=tol)


def relation_inverse(L: Relational) -> LinearRelation:
    L = _as_relation(L)
    return LinearRelation(np.vstack([L.bottom, L.top]), orthonormal=True)


def relation_kernel(L: Relational, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``{u : (u, 0) ∈ L}``."""
    L = _as_relation(L)
    c = nullspace(L.bottom, tol) if L.dim else np.zeros((0, 0), dtype=complex)
    return orthonormal_range(L.top @ c, tol) if c.size else np.zeros((L.n, 0), dtype=complex)


def relation_mul(L: Relational, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of ``{v : (0, v) ∈ L}``."""
    L = _as_relation(L)
    c = nullspace(L.top, tol) if L.dim else np.zeros((0, 0), dtype=complex)
    return orthonormal_range(L.bottom @ c, tol) if c.size else np.zeros((L.n, 0), dtype=complex)


def graph_operator(L: Relational, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """The operator ``T = Y X⁻¹`` whose graph is ``L`` (Hermitian for Lagrangian ``L``)."""
    R = _as_relation(L)
    if R.dim != R.n or relation_mul(R, tol).shape[1] > 0:
        raise MultivaluedRelation("relation has a nontrivial multivalued part")
    X, Y = R.top, R.bottom
    if rank_with_tol(X, tol) < R.n:
        raise MultivaluedRelation("X-block is singular")
    T = np.linalg.solve(X.T, Y.T).T
    if R.is_lagrangian(tol):
        T = 0.5 * (T + T.conj().T)
    return T


def unitary_param(L: LagrangianPlane) -> np.ndarray:
    """``U = (X + iY)(X - iY)⁻¹``."""
    X, Y = L.X, L.Y
    return np.linalg.solve((X - 1j * Y).T, (X + 1j * Y).T).T


def plane_from_unitary(U, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    """Inverse of :func:`unitary_param`: frame ``(U + I, -i(U - I))``."""
    U = as_matrix(U)
    eye = np.eye(U.shape[0])
    return LagrangianPlane(U + eye, -1j * (U - eye), tol=tol)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_lagrangian(n: int, seed=None) -> LagrangianPlane:
    """Plane with frame ``(U + I, i(U - I))`` for a Haar-random unitary ``U``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    U = haar_unitary(n, _rng(seed))
    eye = np.eye(n)
    return LagrangianPlane(U + eye, 1j * (U - eye))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (a + a.conj().T) / np.sqrt(n)


def random_symplectic(n: int, seed=None, strength: float = 1.0) -> np.ndarray:
    """A random element of the symplectic group, built from shears and ``diag(A, A^{-*})``."""
    rng = _rng(seed)
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    upper = np.block([[eye, random_hermitian(n, rng, strength)], [zero, eye]])
    lower = np.block([[eye, zero], [random_hermitian(n, rng, strength), eye]])
    A = eye + 0.3 * strength * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
    diag = np.block([[A, zero], [zero, np.linalg.inv(A).conj().T]])
    G = upper @ diag @ lower
    if rng.random() < 0.5:
        G = J_matrix(n) @ G
    return G


def is_symplectic(G, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    G = as_matrix(G)
    if G.shape[0] != G.shape[1] or G.shape[0] % 2:
        return False
    J = J_matrix(G.shape[0] // 2)
    return spectral_norm(G.conj().T @ J @ G - J) <= tol.lagrangian_tol * max(1.0, spectral_norm(G)) ** 2


def symplectic_apply(G, L: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    G = as_matrix(G)
    if G.shape != (2 * L.n, 2 * L.n):
        raise DimensionMismatch(f"G must be {2 * L.n}x{2 * L.n}")
    if not is_symplectic(G, tol):
        raise NotSymplectic("G*JG != J")
    return LagrangianPlane(G @ L.Z, tol=tol)


def small_rotation(n: int, eps: float) -> np.ndarray:
    """The shear ``[[I, eps I], [0, I]]``."""
    eye = np.eye(n, dtype=complex)
    return np.block([[eye, eps * eye], [np.zeros((n, n)), eye]])


def plane_with_intersection(base: LagrangianPlane, k: int, rng: np.random.Generator,
                            tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    """A random plane meeting ``base`` in exactly ``k`` dimensions.

    Works in coordinates where ``base`` is horizontal: a plane ``graph(B)``
    meets the horizontal one in ``ker B``.
    """
    n = base.n
    # G maps the horizontal plane onto base and is symplectic: G = [[X, -Y], [Y, X]]
    # is symplectic for an orthonormal Lagrangian frame.
    G = np.block([[base.X, -base.Y], [base.Y, base.X]])
    V = haar_unitary(n, rng)
    d = rng.uniform(0.3, 2.0, size=n) * rng.choice([-1.0, 1.0], size=n)
    d[:k] = 0.0
    B = (V * d) @ V.conj().T
    return LagrangianPlane(G @ np.vstack([np.eye(n), B]), tol=tol)
