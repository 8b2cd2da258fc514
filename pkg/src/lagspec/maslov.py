"""Crossing forms and Maslov indices of paths of Lagrangian planes.

Crossings with a fixed reference plane are located by scanning
``g(t) = σ_min([Z(t) | Z_ref])`` over a uniform grid, with orthonormal
frames on both sides, then refining each small local minimum.  The number
of singular values below ``crossing_tol`` gives the intersection dimension.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .duistermaat import duistermaat_index
from .errors import (
    DegenerateCrossing,
    EmptyIntersection,
    MonotonicityViolated,
    NonIsolatedCrossing,
    UnresolvedCrossing,
)
from .linalg import DEFAULT_TOL, Inertia, ToleranceConfig, hermitian_inertia
from .symplectic import Frame, LagrangianPlane

FrameFn = Callable[[float], Frame]
BatchFn = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class PlanePath:
    """A path ``t ↦ (X(t), Y(t))`` on ``[a, b]``.

    ``frames_at`` optionally evaluates many parameters at once and returns
    stacked ``(N, n, n)`` arrays; it is only used to speed up grid scans.
    """

    a: float
    b: float
    frame_at: FrameFn
    derivative_at: Optional[Callable[[float], Tuple[np.ndarray, np.ndarray]]] = None
    monotone_hint: str = "unknown"
    frames_at: Optional[BatchFn] = None

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("path interval must satisfy a < b")
        if self.monotone_hint not in ("increasing", "unknown"):
            raise ValueError("monotone_hint must be 'increasing' or 'unknown'")

    def frame(self, t: float) -> Frame:
        f = self.frame_at(t)
        return f if isinstance(f, Frame) else Frame(*f)

    def derivative(self, t: float) -> Tuple[np.ndarray, np.ndarray]:
        if self.derivative_at is not None:
            dX, dY = self.derivative_at(t)
        else:
            h = 1e-6 * (1.0 + abs(t))
            fp, fm = self.frame(t + h), self.frame(t - h)
            dX, dY = (fp.X - fm.X) / (2 * h), (fp.Y - fm.Y) / (2 * h)
        dX, dY = np.asarray(dX, dtype=complex), np.asarray(dY, dtype=complex)
        if not (np.all(np.isfinite(dX)) and np.all(np.isfinite(dY))):
            raise ValueError(f"non-finite frame derivative at t={t}")
        return dX, dY

    def plane(self, t: float, tol: ToleranceConfig = DEFAULT_TOL) -> LagrangianPlane:
        f = self.frame(t)
        return LagrangianPlane(f.X, f.Y, tol=tol)

    def stacked(self, ts: np.ndarray) -> np.ndarray:
        """Orthonormalized frames on the grid ``ts`` as an ``(N, 2n, n)`` array."""
        if self.frames_at is not None:
            X, Y = self.frames_at(np.asarray(ts, dtype=float))
            Z = np.concatenate([np.asarray(X, dtype=complex), np.asarray(Y, dtype=complex)], axis=1)
        else:
            Z = np.stack([self.frame(t).Z for t in ts])
        q, _ = np.linalg.qr(Z)
        return q


@dataclass(frozen=True)
class CrossingReport:
    t: float
    intersection_dim: int
    form_inertia: Inertia


def crossing_form(path: PlanePath, t0: float, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``X* Y' - Y* X'`` at ``t0``, in the coordinates of the supplied frame."""
    f = path.frame(t0)
    dX, dY = path.derivative(t0)
    q = f.X.conj().T @ dY - f.Y.conj().T @ dX
    return 0.5 * (q + q.conj().T)


def _intersection_coords(f: Frame, ref: LagrangianPlane, tol: ToleranceConfig) -> np.ndarray:
    """Coordinates ``κ`` (w.r.t. the raw frame) of an orthonormal basis of ``M(t0) ∩ L``."""
    n = f.n
    Qz, Rz = np.linalg.qr(f.Z)
    _, s, vh = np.linalg.svd(np.hstack([Qz, ref.Z]))
    k = int(np.sum(s <= tol.crossing_tol))
    if k == 0:
        return np.zeros((n, 0), dtype=complex)
    a = vh[-k:].conj().T[:n]
    # columns Qz a are orthogonal with norm 1/√2 each; rescale to unit length
    a = a * np.sqrt(2.0)
    return np.linalg.solve(Rz, a)


def restricted_crossing_form(path: PlanePath, reference: LagrangianPlane, t0: float,
                             tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    kappa = _intersection_coords(path.frame(t0), reference, tol)
    if kappa.shape[1] == 0:
        raise EmptyIntersection(f"no intersection with the reference plane at t={t0}")
    q = kappa.conj().T @ crossing_form(path, t0, tol) @ kappa
    return 0.5 * (q + q.conj().T)


def _gap_values(Z: np.ndarray, ref: LagrangianPlane) -> np.ndarray:
    """All singular values of ``[Z_i | Z_ref]`` for a stack of orthonormal frames (ascending)."""
    R = np.broadcast_to(ref.Z, Z.shape)
    s = np.linalg.svd(np.concatenate([Z, R], axis=2), compute_uv=False)
    return s[:, ::-1]


def _log_det(sv: np.ndarray) -> np.ndarray:
    return np.sum(np.log(np.maximum(sv, 1e-300)), axis=1)


def _local_minima(f: np.ndarray) -> List[int]:
    padded = np.concatenate([[np.inf], f, [np.inf]])
    return [i for i in range(len(f)) if padded[i + 1] <= padded[i] and padded[i + 1] < padded[i + 2]]


def find_crossings(path: PlanePath, reference: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL,
                   steps: int = 2000, xtol: Optional[Callable[[float], float]] = None) -> List[CrossingReport]:
    """All ``t`` in ``[a, b]`` where the path meets ``reference``.

    ``xtol(t)`` overrides the default location accuracy ``root_tol * max(1, |t|)``.
    """
    tau = tol.crossing_tol
    if xtol is None:
        xtol = lambda t: tol.root_tol * max(1.0, abs(t))
    ts = np.linspace(path.a, path.b, steps + 1)
    sv = _gap_values(path.stacked(ts), reference)
    g = sv[:, 0]

    def gap(t: float) -> float:
        return float(_gap_values(path.stacked(np.array([t])), reference)[0, 0])

    def logdet(t: float) -> float:
        return float(_log_det(_gap_values(path.stacked(np.array([t])), reference))[0])

    def det2(t: float) -> float:
        # |det|² is smooth through a crossing, so parabolic steps converge fast
        return float(np.prod(_gap_values(path.stacked(np.array([t])), reference)[0] ** 2))

    # on a shared sub-interval σ_min sits at round-off level; a slow but
    # isolated crossing can stay below 10τ for several grid points
    small = g <= 1e-3 * tau
    run = longest = 0
    for flag in small:
        run = run + 1 if flag else 0
        longest = max(longest, run)
    if longest >= 4:
        raise NonIsolatedCrossing("reference plane meets the path on a whole sub-interval")

    # log|det[Z | Z_ref]| has a logarithmic dip at every crossing, even when a
    # fast crossing sits next to a slow one and the smallest singular value
    # alone would show only a narrow notch between grid points
    phi = _log_det(sv)
    h = ts[1] - ts[0]
    brackets = []
    for i in _local_minima(phi):
        # two crossings a cell or two apart can share one coarse minimum, so
        # rescan two cells on either side finely
        lo, hi = ts[max(i - 2, 0)], ts[min(i + 2, steps)]
        fine = np.linspace(lo, hi, 129)
        sf = _gap_values(path.stacked(fine), reference)
        pf, gf = _log_det(sf), sf[:, 0]
        last = len(fine) - 1
        for j in _local_minima(pf):
            if j in (0, last):
                # at the edge of the bracket: σ_min is resolved on this fine
                # grid, so a crossing within one cell keeps it below the local slope
                near = gf[:4] if j == 0 else gf[-4:]
                if gf[j] > 10 * tau and gf[j] > 1.5 * float(np.max(np.abs(np.diff(near)))):
                    continue
            # step one fine cell past the bracket edge, staying inside [a, b]
            df = fine[1] - fine[0]
            brackets.append((max(fine[j] - df, path.a), min(fine[j] + df, path.b), fine[j]))

    found: List[float] = []
    for lo, hi, t_grid in brackets:
        t_star = _brent_min(det2, lo, t_grid, hi)
        if t_star is None or not path.a <= t_star <= path.b:
            t_star, _ = _golden_min(logdet, lo, hi, xtol(t_grid))
        val = gap(t_star)
        g_grid = gap(t_grid)
        if g_grid < val:
            t_star, val = float(t_grid), g_grid
        for end in (path.a, path.b):
            if abs(t_star - end) <= h and t_star != end:
                g_end = gap(end)
                if g_end <= tau:
                    t_star, val = end, g_end
        if val > 10 * tau:
            continue
        if val > tau:
            raise UnresolvedCrossing(f"ambiguous minimum {val:.3e} of the gap function near t={t_star:.12g}")
        if any(abs(t_star - t) <= 1e-3 * h for t in found):
            continue
        found.append(t_star)

    reports = []
    for t in sorted(found):
        f = path.frame(t)
        kappa = _intersection_coords(f, reference, tol)
        form = kappa.conj().T @ crossing_form(path, t, tol) @ kappa
        form = 0.5 * (form + form.conj().T)
        reports.append(CrossingReport(t, kappa.shape[1], hermitian_inertia(form, tol)))
    return reports


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> Tuple[float, float]:
    """Golden-section search; unlike Brent's bounded method it has no relative floor on the step."""
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _brent_min(f: Callable[[float], float], lo: float, mid: float, hi: float) -> Optional[float]:
    """Brent's method in local coordinates scaled to the bracket.

    scipy's stopping rule has an absolute floor of about 1e-11; measuring
    the offset from ``mid`` in units of the bracket width pushes that floor
    far below the bracket size.  When ``f(mid)`` is not below both ends the
    bracket is first expanded downhill.  Returns ``None`` if that fails.
    """
    scale = hi - lo
    if not (lo <= mid <= hi) or scale <= 0:
        return None
    g = lambda s: f(mid + s * scale)
    s_lo, s_hi = (lo - mid) / scale, (hi - mid) / scale
    f_lo, f_mid, f_hi = g(s_lo), g(0.0), g(s_hi)
    if s_lo < 0.0 < s_hi and f_mid < f_lo and f_mid < f_hi:
        bracket = (s_lo, 0.0, s_hi)
    else:
        bracket = (s_lo, s_hi)
    try:
        res = minimize_scalar(g, bracket=bracket, method="brent", options={"xtol": 1e-12})
    except (ValueError, RuntimeError):
        return None
    if not np.isfinite(res.x):
        return None
    return mid + float(res.x) * scale


def _is_endpoint(t: float, end: float) -> bool:
    return t == end


def _check_increasing(reports: Sequence[CrossingReport]) -> None:
    for r in reports:
        if r.form_inertia.n_plus != r.intersection_dim:
            raise MonotonicityViolated(f"crossing form at t={r.t:.12g} is not positive definite: {r.form_inertia}")


def maslov_increasing(path: PlanePath, reference: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL,
                      crossings: Optional[Sequence[CrossingReport]] = None) -> int:
    """``Mas(M(·), L) = Σ_{t ∈ [a, b)} dim(M(t) ∩ L)`` for an increasing path."""
    reports = find_crossings(path, reference, tol) if crossings is None else crossings
    _check_increasing(reports)
    return sum(r.intersection_dim for r in reports if not _is_endpoint(r.t, path.b))


def maslov_reference_first(path: PlanePath, reference: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL,
                           crossings: Optional[Sequence[CrossingReport]] = None) -> int:
    """``Mas(L, M(·)) = -Σ_{t ∈ (a, b]} dim(M(t) ∩ L)`` for an increasing path."""
    reports = find_crossings(path, reference, tol) if crossings is None else crossings
    _check_increasing(reports)
    return -sum(r.intersection_dim for r in reports if not _is_endpoint(r.t, path.a))


def maslov_regular(path: PlanePath, reference: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL,
                   crossings: Optional[Sequence[CrossingReport]] = None) -> int:
    """Signed crossing count ``n₊(m_a) + Σ_{(a,b)} (n₊ - n₋) - n₋(m_b)``."""
    reports = find_crossings(path, reference, tol) if crossings is None else crossings
    total = 0
    for r in reports:
        if r.form_inertia.n_zero:
            raise DegenerateCrossing(f"crossing at t={r.t:.12g} has a degenerate form {r.form_inertia}")
        if _is_endpoint(r.t, path.a):
            total += r.form_inertia.n_plus
        elif _is_endpoint(r.t, path.b):
            total -= r.form_inertia.n_minus
        else:
            total += r.form_inertia.n_plus - r.form_inertia.n_minus
    return total


def endpoint_dims(path: PlanePath, reference: LagrangianPlane, tol: ToleranceConfig = DEFAULT_TOL) -> Tuple[int, int]:
    """``h(a), h(b)`` with ``h(t) = dim(M(t) ∩ L)``."""
    return tuple(reference.intersection_dim(path.plane(t, tol), tol.with_(rank_rel_tol=tol.crossing_tol))
                 for t in (path.a, path.b))


def maslov_regular_reference_first(path: PlanePath, reference: LagrangianPlane,
                                   tol: ToleranceConfig = DEFAULT_TOL,
                                   crossings: Optional[Sequence[CrossingReport]] = None) -> int:
    """``Mas(L, M(·)) = -Mas(M(·), L) + h(a) - h(b)``."""
    reports = find_crossings(path, reference, tol) if crossings is None else crossings
    h = {path.a: 0, path.b: 0}
    for r in reports:
        if r.t in h:
            h[r.t] = r.intersection_dim
    return -maslov_regular(path, reference, tol, reports) + h[path.a] - h[path.b]


@dataclass(frozen=True)
class HormanderReport:
    maslov_L1: int
    maslov_L2: int
    iD_a: int
    iD_b: int

    @property
    def lhs(self) -> int:
        return self.maslov_L2 - self.maslov_L1

    @property
    def rhs(self) -> int:
        return self.iD_b - self.iD_a

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def hormander_check(path: PlanePath, L1: LagrangianPlane, L2: LagrangianPlane,
                    tol: ToleranceConfig = DEFAULT_TOL) -> HormanderReport:
    """Both sides of ``Mas(L2, M) - Mas(L1, M) = iD(L1, L2, M(b)) - iD(L1, L2, M(a))``."""
    m1 = maslov_regular_reference_first(path, L1, tol)
    m2 = maslov_regular_reference_first(path, L2, tol)
    Ma, Mb = path.plane(path.a, tol), path.plane(path.b, tol)
    return HormanderReport(m1, m2, duistermaat_index(L1, L2, Ma, tol), duistermaat_index(L1, L2, Mb, tol))


def crossings_csv(reports: Sequence[CrossingReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "intersection_dim", "n_minus", "n_zero", "n_plus"])
    for r in reports:
        w.writerow([repr(float(r.t)), r.intersection_dim, *r.form_inertia])
    return buf.getvalue()
