"""Randomized verification of the algebraic properties of the Duistermaat index.

Every suite returns a report ``{identity: {"trials": int, "failures": [seed, ...]}}``.
A trial is reproducible from its seed alone: ``np.random.default_rng(seed)``
feeds the configuration generator.  Failures are adjudicated a second time at
a tenfold smaller zero threshold before being recorded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .duistermaat import (
    admissible_epsilons,
    delta_relation,
    duistermaat_index,
    duistermaat_index_via_Q,
)
from .errors import InternalInconsistency, LagspecError
from .linalg import DEFAULT_TOL, ToleranceConfig, n_minus, rank_with_tol
from .maslov import PlanePath, hormander_check
from .symplectic import (
    LagrangianPlane,
    haar_unitary,
    random_hermitian,
    random_lagrangian,
    random_symplectic,
)

Report = Dict[str, Dict[str, object]]


class IndexEvaluator:
    """Duistermaat indices of triples drawn from a fixed list of planes.

    One pair of ε values admissible for all planes is chosen up front, so the
    Robin maps are computed once per plane.
    """

    def __init__(self, planes: Sequence[LagrangianPlane], tol: ToleranceConfig = DEFAULT_TOL):
        self.planes = list(planes)
        self.tol = tol
        self.n = self.planes[0].n
        self._eps = [w.epsilon for w in admissible_epsilons(self.planes, 2, tol)]
        self._R = []
        for eps in self._eps:
            maps = []
            for p in self.planes:
                R = np.linalg.solve((p.X + eps * p.Y).T, p.Y.T).T
                maps.append(0.5 * (R + R.conj().T))
            self._R.append(maps)
        self._nm: Dict[tuple, int] = {}
        self._dims: Dict[tuple, int] = {}

    def _n_minus(self, e: int, i: int, j: int) -> int:
        key = (e, i, j)
        if key not in self._nm:
            self._nm[key] = n_minus(self._R[e][j] - self._R[e][i], self.tol)
        return self._nm[key]

    def iD(self, i: int, j: int, k: int) -> int:
        vals = [self._n_minus(e, i, j) + self._n_minus(e, j, k) - self._n_minus(e, i, k) for e in (0, 1)]
        if vals[0] != vals[1]:
            raise InternalInconsistency(f"epsilon dependence in iD({i},{j},{k}): {vals}")
        return vals[0]

    def dim(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._dims:
            self._dims[key] = self.planes[i].intersection_dim(self.planes[j], self.tol)
        return self._dims[key]

    def sum_dim(self, pairs) -> int:
        """Dimension of the sum of the pairwise intersections in ``pairs``."""
        bases = [self.planes[i].intersection(self.planes[j], self.tol) for i, j in pairs]
        stacked = np.hstack(bases)
        return rank_with_tol(stacked, self.tol) if stacked.shape[1] else 0


def _hermitian_with_rank(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    V = haar_unitary(n, rng)
    d = np.zeros(n)
    d[:rank] = rng.uniform(0.3, 2.0, size=rank) * rng.choice([-1.0, 1.0], size=rank)
    return (V * d) @ V.conj().T


def random_configuration(n: int, count: int, rng: np.random.Generator) -> List[LagrangianPlane]:
    """``count`` planes; about half the draws have nontrivial mutual intersections."""
    if rng.random() < 0.35:
        return [random_lagrangian(n, rng) for _ in range(count)]
    G = random_symplectic(n, rng)
    A = random_hermitian(n, rng)
    planes: List[LagrangianPlane] = []
    for _ in range(count):
        u = rng.random()
        if planes and u < 0.15:
            planes.append(planes[rng.integers(len(planes))])
        elif u < 0.27:
            planes.append(LagrangianPlane(G @ LagrangianPlane.vertical(n).Z))
        elif u < 0.37:
            planes.append(random_lagrangian(n, rng))
        else:
            B = _hermitian_with_rank(n, int(rng.integers(0, n + 1)), rng)
            planes.append(LagrangianPlane(G @ np.vstack([np.eye(n), A + B])))
    return planes


def trial_seeds(seed: int, trials: int) -> List[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint64)]



def _run(checks: Dict[str, Callable], build: Callable[[np.random.Generator], object], trials: int,
         seed: int, tol: ToleranceConfig) -> Report:
    """Run every check on ``trials`` seeded configurations with one retry at τ/10."""
    report: Report = {name: {"trials": trials, "failures": []} for name in checks}
    fine = tol.with_(inertia_zero_tol=tol.inertia_zero_tol / 10)
    for s in trial_seeds(seed, trials):
        config = build(np.random.default_rng(s))
        for name, check in checks.items():
            if _passes(check, config, tol) or _passes(check, config, fine):
                continue
            report[name]["failures"].append(s)
    return report


def _passes(check, config, tol) -> bool:
    try:
        return bool(check(config, tol))
    except LagspecError:
        return False


def total_failures(report: Report) -> int:
    return sum(len(v["failures"]) for v in report.values())


# --- identities ---------------------------------------------------------------------------

@dataclass
class _IdentityConfig:
    planes: List[LagrangianPlane]
    G: np.ndarray
    _cache: Optional[dict] = None

    def evaluator(self, tol: ToleranceConfig) -> IndexEvaluator:
        if self._cache is None:
            self._cache = {}
        key = ("base", tol)
        if key not in self._cache:
            n = self.planes[0].n
            self._cache[key] = IndexEvaluator(self.planes + [LagrangianPlane.vertical(n)], tol)
        return self._cache[key]

    def moved(self, tol: ToleranceConfig) -> IndexEvaluator:
        key = ("moved", tol)
        self.evaluator(tol)
        if key not in self._cache:
            self._cache[key] = IndexEvaluator([LagrangianPlane(self.G @ p.Z) for p in self.planes[:3]], tol)
        return self._cache[key]


def _identity_checks() -> Dict[str, Callable]:
    def cocycle(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 1, 2) - e.iD(0, 1, 3) + e.iD(0, 2, 3) - e.iD(1, 2, 3) == 0

    def swap12(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 1, 2) + e.iD(1, 0, 2) == e.n - e.dim(0, 1)

    def cyclic(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 1, 2) - e.dim(0, 2) == e.iD(2, 0, 1) - e.dim(1, 2)

    def swap23(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 1, 2) + e.iD(0, 2, 1) == e.n - e.dim(1, 2)

    def swap13(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 1, 2) + e.iD(2, 1, 0) == e.n - e.dim(0, 1) - e.dim(1, 2) + e.dim(0, 2)

    def special_cases(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 0, 2) == 0 and e.iD(0, 1, 1) == 0 and e.iD(0, 1, 0) == e.n - e.dim(0, 1)

    def bound(c, tol):
        e = c.evaluator(tol)
        v = e.iD(0, 1, 2)
        upper = e.n - e.sum_dim([(0, 1), (1, 2)])
        return 0 <= v <= upper <= e.n - e.dim(0, 1)

    def symplectic_invariance(c, tol):
        e, g = c.evaluator(tol), c.moved(tol)
        return all(e.iD(*t) == g.iD(*t) for t in ((0, 1, 2), (1, 0, 2), (2, 0, 1)))

    def rank_relation(c, tol):
        e = c.evaluator(tol)
        return e.iD(0, 1, 4) + e.iD(1, 0, 4) == e.n - e.dim(0, 1)

    return {f.__name__: f for f in (cocycle, swap12, cyclic, swap23, swap13, special_cases,
                                      bound, symplectic_invariance, rank_relation)}


def verify_identities(n: int, trials: int, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    if n < 1:
        raise ValueError("n must be at least 1")

    def build(rng):
        return _IdentityConfig(random_configuration(n, 4, rng), random_symplectic(n, rng))

    return _run(_identity_checks(), build, trials, seed, tol)


# --- one-sided limits ---------------------------------------------------------------------

LIMIT_STEPS = (1e-3, 1e-4)


@dataclass
class _LimitConfig:
    G: np.ndarray
    M0: np.ndarray
    others: List[LagrangianPlane]   # L1, L2, L3

    def path(self, t: float) -> LagrangianPlane:
        n = self.M0.shape[0]
        return LagrangianPlane(self.G @ np.vstack([np.eye(n), self.M0 + t * np.eye(n)]))

    _cache: Dict[tuple, IndexEvaluator] = field(default_factory=dict, repr=False)

    def evaluator(self, t: float, tol: ToleranceConfig) -> IndexEvaluator:
        # index layout: 0 -> L(t), 1..3 -> L1..L3, 4 -> L0
        key = (t, tol)
        if key not in self._cache:
            self._cache[key] = IndexEvaluator([self.path(t)] + self.others + [self.path(0.0)], tol)
        return self._cache[key]


def _limit_configuration(n: int, rng: np.random.Generator) -> _LimitConfig:
    G = random_symplectic(n, rng)
    M0 = random_hermitian(n, rng)
    others = []
    for _ in range(3):
        u = rng.random()
        if u < 0.15:
            others.append(LagrangianPlane(G @ LagrangianPlane.vertical(n).Z))
        elif u < 0.3:
            others.append(random_lagrangian(n, rng))
        else:
            D = _hermitian_with_rank(n, int(rng.integers(0, n + 1)), rng)
            others.append(LagrangianPlane(G @ np.vstack([np.eye(n), M0 + D])))
    return _LimitConfig(G, M0, others)


def _limit_checks() -> Dict[str, Callable]:
    def at_steps(c, tol, rule):
        for delta in LIMIT_STEPS:
            for t in (-delta, delta):
                if not rule(c.evaluator(t, tol), t):
                    return False
        return True

    def limit1(c, tol):
        return at_steps(c, tol, lambda e, t: e.iD(0, 2, 3) == e.iD(4, 2, 3)
                        + (0 if t < 0 else e.dim(2, 4) - e.dim(3, 4)))

    def limit1alt(c, tol):
        return at_steps(c, tol, lambda e, t: e.iD(0, 2, 3) == (e.iD(4, 2, 3) if t < 0 else e.iD(2, 3, 4)))

    def limit2(c, tol):
        return at_steps(c, tol, lambda e, t: e.iD(1, 0, 3) == e.iD(1, 4, 3)
                        + (e.dim(1, 4) if t < 0 else e.dim(3, 4)))

    def limit3(c, tol):
        return at_steps(c, tol, lambda e, t: e.iD(1, 2, 0) == e.iD(1, 2, 4)
                        + (e.dim(2, 4) - e.dim(1, 4) if t < 0 else 0))

    def limit3alt(c, tol):
        return at_steps(c, tol, lambda e, t: e.iD(1, 2, 0) == (e.iD(4, 1, 2) if t < 0 else e.iD(1, 2, 4)))

    return {f.__name__: f for f in (limit1, limit1alt, limit2, limit3, limit3alt)}


def verify_one_sided_limits(n: int, trials: int, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    if n < 1:
        raise ValueError("n must be at least 1")
    return _run(_limit_checks(), lambda rng: _limit_configuration(n, rng), trials, seed, tol)


# --- oracle agreement and the Krein relation ----------------------------------------------

def verify_q_oracle(n: int, trials: int, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    def agree(c, tol):
        planes, qseed = c
        return duistermaat_index(*planes, tol) == duistermaat_index_via_Q(*planes, tol, seed=qseed)

    def build(rng):
        return random_configuration(n, 3, rng), int(rng.integers(2 ** 32))

    return _run({"q_oracle": agree}, build, trials, seed, tol)


def _krein_configuration(n: int, rng: np.random.Generator):
    """L1, L2 with a random intersection; L3 = graph(H) transversal to both."""
    L1, L2 = random_configuration(n, 2, rng)
    for _ in range(64):
        L3 = LagrangianPlane.graph(random_hermitian(n, rng, 2.0))
        if L3.intersection_dim(L1) == 0 and L3.intersection_dim(L2) == 0:
            return L1, L2, L3
    raise LagspecError("could not draw a transversal third plane")


def verify_krein(n: int, trials: int, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    def nullity(c, tol):
        return delta_relation(*c, tol).n_zero == c[0].intersection_dim(c[1], tol)

    def index(c, tol):
        return delta_relation(*c, tol).n_minus == duistermaat_index(*c, tol)

    def rank(c, tol):
        return delta_relation(*c, tol).rank == n - c[0].intersection_dim(c[1], tol)

    return _run({"nullity": nullity, "index": index, "rank": rank},
                lambda rng: _krein_configuration(n, rng), trials, seed, tol)


# --- ZWZ / Hörmander identity on increasing paths -----------------------------------------

def _increasing_path(n: int, rng: np.random.Generator):
    """``t ↦ G graph(M0 + tK)`` on ``[-1, 1]`` with ``K > 0``; returns the path and a plane factory."""
    G = random_symplectic(n, rng)
    M0 = random_hermitian(n, rng)
    W = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    K = W @ W.conj().T / n + 0.2 * np.eye(n)

    def frames_at(ts):
        ts = np.asarray(ts, dtype=float)
        H = M0[None] + ts[:, None, None] * K[None]
        Z = np.einsum("ij,tjk->tik", G, np.concatenate([np.broadcast_to(np.eye(n), H.shape), H], axis=1))
        return Z[:, :n], Z[:, n:]

    def frame_at(t):
        X, Y = frames_at(np.array([t]))
        return X[0], Y[0]

    dZ = G @ np.vstack([np.zeros((n, n)), K])

    def derivative_at(t):
        return dZ[:n], dZ[n:]

    path = PlanePath(-1.0, 1.0, frame_at, derivative_at, "increasing", frames_at)

    def through(t: float, rank: int) -> LagrangianPlane:
        """A plane meeting the path at ``t`` in dimension ``n - rank``."""
        B = _hermitian_with_rank(n, rank, rng)
        return LagrangianPlane(G @ np.vstack([np.eye(n), M0 + t * K + B]))

    return path, through


def _hormander_configuration(n_max: int, rng: np.random.Generator):
    n = int(rng.integers(1, n_max + 1))
    path, through = _increasing_path(n, rng)
    planes = []
    for _ in range(2):
        u = rng.random()
        if u < 0.4:
            planes.append(random_lagrangian(n, rng))
        else:
            t = float(rng.choice([-1.0, 1.0])) if u < 0.6 else float(rng.uniform(-0.9, 0.9))
            planes.append(through(t, int(rng.integers(0, n))))
    return path, planes[0], planes[1]


def verify_hormander(trials: int, seed: int = 0, n_max: int = 4, tol: ToleranceConfig = DEFAULT_TOL) -> Report:
    """``Mas(L2, M) - Mas(L1, M) = iD(L1, L2, M(b)) - iD(L1, L2, M(a))`` on random increasing paths."""
    def zwz(c, tol):
        return hormander_check(*c, tol).holds

    return _run({"zwz": zwz}, lambda rng: _hormander_configuration(n_max, rng), trials, seed, tol)
