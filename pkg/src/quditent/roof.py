"""Convex-roof extensions of concurrence and negativity.

Every decomposition of a rank-r density matrix ``rho = sum_i lam_i |e_i><e_i|``
into L pure members comes from an L x r isometry U through the unnormalized
members ``w_j = sum_i conj(U_ji) sqrt(lam_i) |e_i>``. The search starts from
seeded random isometries and applies pairwise Givens rotations between
members, refining each rotation's two angles by compass moves. The
member-wise measure is smoothed as ``sqrt(x + eps^2) - eps`` and ``eps`` is
driven to zero over a fixed schedule, which keeps the coordinate search from
stalling on the cusp of the measure at separable members.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels, linalg
from .errors import ArgumentError, DimensionError, UndefinedMeasureError
from .measures import SIGMA_Y, concurrence_pure, negativity_schmidt
from .states import PureState, make_rng, random_unitary, schmidt_decompose

RANK_TOL = 1e-10
ISOMETRY_TOL = 1e-9
SMOOTHING_SCHEDULE = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-10, 0.0)
# a smoothing stage ends once a full sweep lowers the total by less than this
SWEEP_TOL = 1e-10
SWEEP_TOL_PER_EPS = 1e-6


class Measure(str, enum.Enum):
    CONCURRENCE = "concurrence"
    NEGATIVITY = "negativity"

    @property
    def kernel_code(self):
        return _kernels.CONCURRENCE if self is Measure.CONCURRENCE else _kernels.NEGATIVITY

    def pure(self, psi):
        if self is Measure.CONCURRENCE:
            return concurrence_pure(psi)
        return negativity_schmidt(schmidt_decompose(psi))


@dataclass(frozen=True)
class Ensemble:
    members: tuple  # of (probability, PureState)

    @property
    def probabilities(self):
        return np.array([p for p, _ in self.members])

    def density(self):
        """``sum_j p_j |psi_j><psi_j|``."""
        first = self.members[0][1]
        rho = np.zeros((first.dims.total, first.dims.total), dtype=np.complex128)
        for p, psi in self.members:
            a = psi.amplitudes
            rho += p * np.outer(a, a.conj())
        return rho

    def average(self, measure):
        measure = Measure(measure)
        return float(sum(p * measure.pure(psi) for p, psi in self.members))


@dataclass(frozen=True)
class RoofResult:
    value: float
    ensemble: Ensemble
    restarts_used: int
    converged: bool
    measure: Measure


@dataclass(frozen=True)
class OptimizerConfig:
    ensemble_size: Optional[int] = None  # None -> 2 * rank
    restarts: int = 16
    max_iterations: int = 500
    step_tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ArgumentError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iterations < 1:
            raise ArgumentError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise ArgumentError(f"ensemble_size must be positive, got {self.ensemble_size}")


def _eigen_rows(rho):
    """Rows ``sqrt(lam_i) e_i^T`` for the eigenvalues above RANK_TOL, and those eigenvalues."""
    lam, vec = linalg.hermitian_eigensystem(rho.matrix)
    keep = lam > RANK_TOL
    lam = lam[keep]
    return np.ascontiguousarray((vec[:, keep] * np.sqrt(lam)).T), lam


def _ensemble_from_rows(dims, rows):
    members = []
    for w in rows:
        p = float(np.vdot(w, w).real)
        if p > 1e-15:
            members.append((p, PureState(dims, w / math.sqrt(p))))
    return Ensemble(tuple(members))


def ensemble_from_isometry(rho, isometry):
    """The decomposition of ``rho`` selected by an L x r isometry (r = rank of rho)."""
    rows, _ = _eigen_rows(rho)
    u = linalg.as_matrix(isometry)
    r = rows.shape[0]
    if u.shape[1] != r or u.shape[0] < r:
        raise ArgumentError(f"isometry must be L x {r} with L >= {r}, got {u.shape}")
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(r))))
    if defect > ISOMETRY_TOL:
        raise ArgumentError(f"columns are not orthonormal (defect {defect:.2e})")
    return _ensemble_from_rows(rho.dims, u.conj() @ rows)


def _run_restart(rows, dims, measure, config, size, index):
    rng = make_rng(config.seed, index)
    u = random_unitary(size, rng)[:, : rows.shape[0]]
    w = np.ascontiguousarray(u.conj() @ rows)
    converged = False
    for eps in SMOOTHING_SCHEDULE:
        _, converged = _kernels.roof_descent(
            w,
            dims.m,
            dims.n,
            measure.kernel_code,
            eps,
            config.max_iterations,
            max(SWEEP_TOL, SWEEP_TOL_PER_EPS * eps),
            config.step_tolerance,
        )
    value = float(np.sum(_kernels.member_values(w, dims.m, dims.n, measure.kernel_code, 0.0)))
    return value, w, converged


def convex_roof(rho, measure, config=None, workers=1):
    """Minimize ``sum_j p_j M(psi_j)`` over decompositions of ``rho``.

    Restarts are independent and seeded by ``(config.seed, restart index)``;
    with ``workers > 1`` they run on a thread pool and the result does not
    depend on scheduling. The eigen-decomposition ensemble is always a
    candidate, so the returned value never exceeds its average.
    """
    measure = Measure(measure)
    config = config or OptimizerConfig()
    if rho.dims.d < 2:
        raise UndefinedMeasureError("convex roof needs d >= 2")
    rows, _ = _eigen_rows(rho)
    r = rows.shape[0]
    eigen_ensemble = _ensemble_from_rows(rho.dims, rows)
    baseline = eigen_ensemble.average(measure)
    if r == 1:
        return RoofResult(baseline, eigen_ensemble, 0, True, measure)

    size = config.ensemble_size or 2 * r
    if size < r:
        raise ArgumentError(f"ensemble_size {size} is below the rank {r}")
    job = lambda i: _run_restart(rows, rho.dims, measure, config, size, i)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(job, range(config.restarts)))
    else:
        runs = [job(i) for i in range(config.restarts)]

    best = min(range(len(runs)), key=lambda i: (runs[i][0], i))
    _, w, converged = runs[best]
    ensemble = _ensemble_from_rows(rho.dims, w)
    value = ensemble.average(measure)
    if baseline <= value:
        ensemble, value = eigen_ensemble, baseline
        converged = any(run[2] for run in runs)
    return RoofResult(value, ensemble, config.restarts, converged, measure)


def wootters_concurrence_mixed(rho):
    """Closed-form two-qubit concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (sy x sy) rho* (sy x sy)``, obtained here from the Hermitian matrix
    ``sqrt(rho) rho~ sqrt(rho)`` that shares its spectrum.
    """
    if (rho.dims.m, rho.dims.n) != (2, 2):
        raise DimensionError(f"closed-form concurrence needs a 2x2 state, got {rho.dims}")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    lam, vec = linalg.hermitian_eigensystem(rho.matrix)
    root = (vec * np.sqrt(np.clip(lam, 0.0, None))) @ vec.conj().T
    flipped = yy @ rho.matrix.conj() @ yy
    inner = root @ flipped @ root
    mu = linalg.hermitian_eigenvalues(0.5 * (inner + inner.conj().T), tol=np.inf)
    l1, l2, l3, l4 = np.sqrt(np.clip(mu, 0.0, None))
    return float(max(0.0, l1 - l2 - l3 - l4))
