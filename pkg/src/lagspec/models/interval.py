"""Schrödinger operator ``-f'' + q f`` on ``[0, ℓ]`` and its Cauchy data planes.

Traces are ``Γ0 f = (f(0), f(ℓ))`` and ``Γ1 f = (f'(0), -f'(ℓ))``; the
Friedrichs extension is the Dirichlet one and corresponds to the vertical plane.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import IntegrationError
from ..linalg import DEFAULT_TOL, ToleranceConfig
from ..symplectic import Frame, LagrangianPlane

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
ODE_METHOD = "DOP853"


@dataclass(frozen=True)
class Potential:
    """``q`` on ``[0, ℓ]``: zero, a constant, or samples joined linearly."""

    kind: str = "zero"
    value: float = 0.0
    xs: Tuple[float, ...] = ()
    qs: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "sampled"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "sampled":
            xs, qs = np.asarray(self.xs, float), np.asarray(self.qs, float)
            if xs.size < 2 or xs.shape != qs.shape:
                raise ValueError("sampled potential needs at least two (x, q) pairs")
            if np.any(np.diff(xs) <= 0):
                raise ValueError("sample abscissae must be strictly increasing")
            if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(qs))):
                raise ValueError("potential samples must be finite")
        elif not np.isfinite(self.value):
            raise ValueError("potential value must be finite")

    @classmethod
    def zero(cls) -> "Potential":
        return cls("zero")

    @classmethod
    def constant(cls, c: float) -> "Potential":
        return cls("constant", float(c))

    @classmethod
    def sampled(cls, xs: Sequence[float], qs: Sequence[float]) -> "Potential":
        return cls("sampled", 0.0, tuple(float(x) for x in xs), tuple(float(q) for q in qs))

    @classmethod
    def from_csv(cls, path: str) -> "Potential":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or set(rows[0]) != {"x", "q"}:
            raise ValueError("potential CSV must have the header 'x,q'")
        return cls.sampled([float(r["x"]) for r in rows], [float(r["q"]) for r in rows])

    @property
    def closed_form(self) -> bool:
        return self.kind != "sampled"

    @property
    def level(self) -> float:
        return 0.0 if self.kind == "zero" else self.value

    def __call__(self, x):
        if self.kind == "sampled":
            return np.interp(x, self.xs, self.qs)
        return np.full_like(np.asarray(x, dtype=float), self.level)

    def reflected(self, length: float) -> "Potential":
        if self.kind != "sampled":
            return self
        xs = np.asarray(self.xs)
        return Potential.sampled((length - xs)[::-1], np.asarray(self.qs)[::-1])

    @property
    def q_min(self) -> float:
        return float(min(self.qs)) if self.kind == "sampled" else self.level

    @property
    def q_max(self) -> float:
        return float(max(self.qs)) if self.kind == "sampled" else self.level


@dataclass(frozen=True)
class IntervalProblem:
    length: float = 1.0
    potential: Potential = field(default_factory=Potential.zero)

    def __post_init__(self):
        if not (np.isfinite(self.length) and self.length > 0):
            raise ValueError("interval length must be positive")
        p = self.potential
        if p.kind == "sampled" and (p.xs[0] > 0 or p.xs[-1] < self.length):
            raise ValueError("potential samples must span [0, length]")

    @property
    def n(self) -> int:
        return 2

    @property
    def dirichlet_switch(self) -> float:
        """Below this λ the Dirichlet problem has no spectrum and M(λ) is a graph."""
        return self.potential.q_min - 1.0


@dataclass(frozen=True)
class FundamentalSolutions:
    """Values at ``x = ℓ`` of ``c`` (c(0)=1, c'(0)=0) and ``s`` (s(0)=0, s'(0)=1)."""

    c_l: np.ndarray
    cp_l: np.ndarray
    s_l: np.ndarray
    sp_l: np.ndarray

    @property
    def wronskian(self) -> np.ndarray:
        return self.c_l * self.sp_l - self.cp_l * self.s_l


def _entire_cs(mu, length: float):
    """``cos(√μ ℓ)`` and ``sin(√μ ℓ)/√μ`` evaluated without branch issues."""
    mu = np.asarray(mu)
    if np.iscomplexobj(mu) and np.any(mu.imag != 0):
        k = np.sqrt(mu.astype(complex))
        safe = np.where(np.abs(k) < 1e-8, 1.0, k)
        S = np.where(np.abs(k) < 1e-8, length * (1 - mu * length ** 2 / 6), np.sin(k * length) / safe)
        return np.cos(k * length), S
    mu = mu.real.astype(float)
    pos = np.sqrt(np.maximum(mu, 0.0))
    neg = np.sqrt(np.maximum(-mu, 0.0))
    C = np.where(mu >= 0, np.cos(pos * length), np.cosh(neg * length))
    safe = np.where(neg * length < 1e-8, 1.0, neg)
    S_neg = np.where(neg * length < 1e-8, length, np.sinh(neg * length) / safe)
    S = np.where(mu >= 0, length * np.sinc(pos * length / np.pi), S_neg)
    return C, S


def _integrate(p: IntervalProblem, rhs, y0: np.ndarray) -> np.ndarray:
    """Solution at ``x = ℓ``, restarting at every kink of the potential."""
    knots = [0.0, p.length]
    if p.potential.kind == "sampled":
        inner = [x for x in p.potential.xs if 0.0 < x < p.length]
        knots = [0.0, *inner, p.length]
    y = y0
    for a, b in zip(knots[:-1], knots[1:]):
        sol = solve_ivp(rhs, (a, b), y, method=ODE_METHOD, rtol=ODE_RTOL, atol=ODE_ATOL)
        if not sol.success:
            raise IntegrationError(sol.message)
        y = sol.y[:, -1]
    return y


def _ode_cs(p: IntervalProblem, lam: np.ndarray) -> FundamentalSolutions:
    lam = np.atleast_1d(lam)
    N = lam.size
    q = p.potential
    cplx = np.iscomplexobj(lam)

    def rhs(x, y):
        y = y.reshape(4, N)
        w = q(x) - lam
        return np.concatenate([y[1], w * y[0], y[3], w * y[2]])

    y0 = np.concatenate([np.ones(N), np.zeros(N), np.zeros(N), np.ones(N)]).astype(complex if cplx else float)
    y = _integrate(p, rhs, y0).reshape(4, N)
    return FundamentalSolutions(y[0], y[1], y[2], y[3])


def fundamental_solutions(p: IntervalProblem, lam) -> FundamentalSolutions:
    lam_arr = np.asarray(lam)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    if not np.all(np.isfinite(lam_arr)):
        raise ValueError("lambda must be finite")
    if p.potential.closed_form:
        mu = lam_arr - p.potential.level
        C, S = _entire_cs(mu, p.length)
        out = FundamentalSolutions(C, -mu * S, S, C)
    else:
        out = _ode_cs(p, lam_arr)
    if scalar:
        return FundamentalSolutions(*(np.asarray(v)[0] for v in (out.c_l, out.cp_l, out.s_l, out.sp_l)))
    return out


def _riccati_ends(p: IntervalProblem, lam: np.ndarray):
    """``v(ℓ) = s/s'`` and ``ln s'(ℓ)`` for real ``λ`` below ``q_min``, both orientations."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    N = lam.size
    q, qr = p.potential, p.potential.reflected(p.length)

    def rhs(x, y):
        y = y.reshape(4, N)
        w, wr = q(x) - lam, qr(x) - lam
        return np.concatenate([1.0 - w * y[0] ** 2, w * y[0], 1.0 - wr * y[2] ** 2, wr * y[2]])

    v, logsp, vr, _ = _integrate(p, rhs, np.zeros(4 * N)).reshape(4, N)
    return v, logsp, vr


def dirichlet_to_neumann(p: IntervalProblem, lam) -> np.ndarray:
    """``M(λ)`` as a Hermitian 2×2 matrix (stacked for array input), valid below the Dirichlet spectrum."""
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(lam >= p.potential.q_min):
        raise ValueError("dirichlet_to_neumann is used only below min q")
    if p.potential.closed_form:
        kappa = np.sqrt(p.potential.level - lam)
        kl = kappa * p.length
        diag = -kappa / np.tanh(kl)
        off = np.where(kl > 700, 0.0, kappa / np.sinh(np.minimum(kl, 700)))
        diag_r = diag
    else:
        v, logsp, vr = _riccati_ends(p, lam)
        diag, diag_r = -1.0 / v, -1.0 / vr
        off = np.exp(-logsp) / v
    M = np.empty((lam.size, 2, 2))
    M[:, 0, 0], M[:, 1, 1] = diag_r, diag
    M[:, 0, 1] = M[:, 1, 0] = off
    return M


def cauchy_frames(p: IntervalProblem, lam, basis: Optional[str] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Stacked frames ``(X, Y)`` of ``M(λ)`` for an array of real ``λ``.

    ``basis='cs'`` uses the traces of ``{c, s}``; ``basis='dirichlet'`` uses
    ``(I, M(λ))``.  By default each ``λ`` picks the basis that stays well
    conditioned.
    """
    lam = np.atleast_1d(np.asarray(lam))
    N = lam.size
    X = np.zeros((N, 2, 2), dtype=complex)
    Y = np.zeros((N, 2, 2), dtype=complex)
    if basis is None:
        low = np.real(lam) < p.dirichlet_switch
    else:
        low = np.full(N, basis == "dirichlet")
    hi = ~low
    if np.any(hi):
        fs = fundamental_solutions(p, lam[hi])
        X[hi, 0, 0] = 1.0
        X[hi, 1, 0], X[hi, 1, 1] = fs.c_l, fs.s_l
        Y[hi, 0, 1] = 1.0
        Y[hi, 1, 0], Y[hi, 1, 1] = -fs.cp_l, -fs.sp_l
    if np.any(low):
        X[low] = np.eye(2)
        Y[low] = dirichlet_to_neumann(p, np.real(lam[low]))
    return X, Y


def cauchy_data_frame(p: IntervalProblem, lam) -> Frame:
    """Traces of the basis ``{c, s}`` of ``ker(S* - λ)``."""
    fs = fundamental_solutions(p, lam)
    X = np.array([[1.0, 0.0], [fs.c_l, fs.s_l]])
    Y = np.array([[0.0, 1.0], [-fs.cp_l, -fs.sp_l]])
    return Frame(X, Y)


def cauchy_data_plane(p: IntervalProblem, lam: float, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
    X, Y = cauchy_frames(p, np.array([lam]))
    return LagrangianPlane(X[0], Y[0], tol=tol)


# --- boundary conditions --------------------------------------------------------------------

BC_NAMES = ("periodic", "delta", "antiperiodic", "delta_prime", "dirichlet", "neumann")


def bc_catalog(name: str, s: float = 0.0) -> LagrangianPlane:
    if not np.isfinite(s):
        raise ValueError("s must be finite")
    if name == "periodic":
        X, Y = [[1, 0], [1, 0]], [[0, 1], [0, -1]]
    elif name == "delta":
        X, Y = [[1, 0], [1, 0]], [[s, 1], [0, -1]]
    elif name == "antiperiodic":
        X, Y = [[1, 0], [-1, 0]], [[0, 1], [0, 1]]
    elif name == "delta_prime":
        X, Y = [[1, s], [-1, 0]], [[0, 1], [0, 1]]
    elif name == "dirichlet":
        return LagrangianPlane.vertical(2)
    elif name == "neumann":
        return LagrangianPlane.horizontal(2)
    else:
        raise ValueError(f"unknown boundary condition {name!r}; expected one of {', '.join(BC_NAMES)}")
    return LagrangianPlane(np.array(X, float), np.array(Y, float))
