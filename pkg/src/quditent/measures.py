"""Entanglement measures, symmetric invariants and identity residuals.

Negativity is rescaled so its maximum is one in every dimension:
``N = (||rho^T_A||_1 - 1) / (d - 1)``, which for a pure state with Schmidt
coefficients ``k`` equals ``2/(d-1) * sum_{i<j} k_i k_j``. Concurrence of a
pure state is ``sqrt(2 (1 - Tr rho_A^2))``, with maximum ``sqrt(2 (1 - 1/d))``.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import linalg
from .errors import ArgumentError, DimensionError, UndefinedMeasureError
from .states import (
    DensityMatrix,
    PureState,
    SchmidtForm,
    coefficient_matrix,
    partial_transpose,
    projector,
    schmidt_decompose,
)

NPT_THRESHOLD = -1e-9

SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


class PeresClass(str, enum.Enum):
    PPT = "PPT"
    NPT = "NPT"


def _as_schmidt(k):
    return k if isinstance(k, SchmidtForm) else SchmidtForm(k)


def _elementary(values):
    """Elementary symmetric polynomials e_1..e_d via the product of (1 + x_i t)."""
    coeffs = [1.0] + [0.0] * len(values)
    for i, x in enumerate(values, start=1):
        for j in range(i, 0, -1):
            coeffs[j] += x * coeffs[j - 1]
    return coeffs[1:]


def _e2_of_squares(k):
    if len(k) < 2:
        return 0.0
    return _elementary([x * x for x in k])[1]


def concurrence_pure(psi):
    """``sqrt(2 (1 - Tr rho_A^2))`` of a pure state.

    Evaluated as ``2 sqrt(sum |2x2 minors|^2)`` of the coefficient matrix,
    which is the same quantity without the cancellation in ``1 - Tr rho_A^2``.
    """
    mat = coefficient_matrix(psi)
    minors = np.einsum("ij,kl->ikjl", mat, mat) - np.einsum("il,kj->ikjl", mat, mat)
    return math.sqrt(float(np.sum(minors.real**2 + minors.imag**2)))


def concurrence_schmidt(k):
    """``sqrt(4 sum_{i<j} k_i^2 k_j^2)``."""
    k = _as_schmidt(k).k.tolist()
    return math.sqrt(4.0 * _e2_of_squares(k))


def concurrence_spin_flip_2q(psi):
    """Two-qubit concurrence ``|<psi| sigma_y (x) sigma_y |psi*>|``."""
    if (psi.dims.m, psi.dims.n) != (2, 2):
        raise DimensionError(f"spin-flip concurrence needs a 2x2 state, got {psi.dims}")
    a = psi.amplitudes
    return float(abs(a @ np.kron(SIGMA_Y, SIGMA_Y) @ a))


def _require_entanglement_dim(d):
    if d < 2:
        raise UndefinedMeasureError("negativity is undefined for d = 1")


def negativity(rho, tol=linalg.DEFAULT_TOL):
    """``(||rho^T_A||_1 - 1) / (d - 1)`` for a density matrix."""
    d = rho.dims.d
    _require_entanglement_dim(d)
    return (linalg.trace_norm(partial_transpose(rho), tol) - 1.0) / (d - 1)


def negativity_schmidt(k):
    """Rescaled negativity ``2/(d-1) sum_{i<j} k_i k_j`` from Schmidt coefficients."""
    k = _as_schmidt(k)
    _require_entanglement_dim(k.d)
    return 2.0 * _elementary(k.k.tolist())[1] / (k.d - 1)


def build_shift_operator(d):
    """Cyclic shift ``X|i> = |i+1 mod d>`` as a d x d permutation matrix."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 2:
        raise DimensionError(f"shift operator needs d >= 2, got {d!r}")
    x = np.zeros((d, d), dtype=np.complex128)
    x[(np.arange(d) + 1) % d, np.arange(d)] = 1.0
    return x


def x_shift_expectation(k, power):
    """``<psi| (X (x) X)^power |psi>`` for ``psi = sum k_i |i,i>``: ``sum_i k_i k_{i+power}``."""
    k = _as_schmidt(k)
    if isinstance(power, bool) or not isinstance(power, (int, np.integer)) or not 1 <= power <= k.d - 1:
        raise ArgumentError(f"power must be in [1, {k.d - 1}], got {power!r}")
    return float(np.dot(k.k, np.roll(k.k, -int(power))))


def negativity_operator(k):
    """Negativity as the averaged expectation of the shift powers X^1 .. X^(d-1).

    A single shift only pairs cyclically adjacent levels once ``d >= 4``, so
    all powers are summed: each unordered pair appears exactly twice.
    """
    k = _as_schmidt(k)
    _require_entanglement_dim(k.d)
    total = sum(x_shift_expectation(k, p) for p in range(1, k.d))
    return total / (k.d - 1)


@dataclass(frozen=True, eq=False)
class InvariantSet:
    """Elementary symmetric polynomials of the Schmidt coefficients.

    ``e[j - 1]`` holds the degree-j polynomial; for d = 4 these are s1..s4.
    """

    d: int
    e: np.ndarray

    def s(self, j):
        """Degree-j invariant, 1-based; zero beyond d."""
        if j < 1:
            raise ArgumentError(f"degree must be >= 1, got {j}")
        return float(self.e[j - 1]) if j <= self.d else 0.0


def symmetric_invariants(k):
    k = _as_schmidt(k)
    e = np.array(_elementary(k.k.tolist()))
    e.setflags(write=False)
    return InvariantSet(k.d, e)


def chen_gap(k):
    """``C^2 - (d-1)/(2d) N^2``; non-negative for every Schmidt vector."""
    k = _as_schmidt(k)
    d = k.d
    if d < 2:
        raise DimensionError("Chen gap needs d >= 2")
    c2 = 4.0 * _e2_of_squares(k.k.tolist())
    n = negativity_schmidt(k)
    return c2 - (d - 1) / (2.0 * d) * n * n


def qutrit_residual(k):
    """``N^2 - C^2/4 - 2 k1 k2 k3 sqrt(1 + 2N)`` for d = 3 (zero identically)."""
    k = _as_schmidt(k)
    if k.d != 3:
        raise DimensionError(f"qutrit relation needs d = 3, got {k.d}")
    n = negativity_schmidt(k)
    c2 = 4.0 * _e2_of_squares(k.k.tolist())
    k1, k2, k3 = k.k.tolist()
    return n * n - c2 / 4.0 - 2.0 * k1 * k2 * k3 * math.sqrt(1.0 + 2.0 * n)


class QuadritResiduals(NamedTuple):
    corrected: float
    paper_printed: float


def quadrit_residuals(k):
    """Residuals of ``C^2 = 4 s2^2 + c (s4 - s1 s3)`` for c = 8 and c = 2.

    The coefficient 8 follows from ``e2(k^2) = e2^2 - 2 e1 e3 + 2 e4`` and
    vanishes identically; the coefficient-2 form is kept for comparison.
    """
    k = _as_schmidt(k)
    if k.d != 4:
        raise DimensionError(f"quadrit relation needs d = 4, got {k.d}")
    s1, s2, s3, s4 = _elementary(k.k.tolist())
    c2 = 4.0 * _e2_of_squares(k.k.tolist())
    base = c2 - 4.0 * s2 * s2
    mixed = s4 - s1 * s3
    return QuadritResiduals(float(base - 8.0 * mixed), float(base - 2.0 * mixed))


class PeresResult(NamedTuple):
    ppt_class: PeresClass
    negative_eigenvalues: list


def peres_classify(rho, tol=linalg.DEFAULT_TOL):
    """PPT/NPT label and the eigenvalues of ``rho^T_A`` below -1e-9."""
    lam = linalg.hermitian_eigenvalues(partial_transpose(rho), tol)
    neg = [float(x) for x in lam if x < NPT_THRESHOLD]
    return PeresResult(PeresClass.NPT if neg else PeresClass.PPT, neg)


@dataclass(frozen=True)
class MeasureReport:
    dims: tuple
    kind: str
    negativity_trace_norm: float
    ppt_class: PeresClass
    negative_eigenvalues: list
    schmidt: Optional[list] = None
    concurrence: Optional[float] = None
    negativity_rescaled: Optional[float] = None
    x_expectations: Optional[list] = None
    invariants: Optional[list] = None
    chen_gap: Optional[float] = None
    qutrit_residual: Optional[float] = None
    quadrit_residual_corrected: Optional[float] = None
    quadrit_residual_printed: Optional[float] = None

    @property
    def negativity(self):
        return self.negativity_trace_norm

    def to_dict(self):
        return {
            "kind": self.kind,
            "dims": list(self.dims),
            "concurrence": self.concurrence,
            "negativity": self.negativity_trace_norm,
            "negativity_trace_norm": self.negativity_trace_norm,
            "negativity_rescaled": self.negativity_rescaled,
            "schmidt": self.schmidt,
            "x_expectations": self.x_expectations,
            "invariants": self.invariants,
            "chen_gap": self.chen_gap,
            "qutrit_residual": self.qutrit_residual,
            "quadrit_residual_corrected": self.quadrit_residual_corrected,
            "quadrit_residual_printed": self.quadrit_residual_printed,
            "ppt_class": self.ppt_class.value,
            "negative_eigenvalues": self.negative_eigenvalues,
        }


def measure_report(state):
    """Every applicable measure for a pure state or density matrix."""
    if isinstance(state, PureState):
        rho = projector(state)
    elif isinstance(state, DensityMatrix):
        rho = state
    else:
        raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")
    dims = rho.dims
    _require_entanglement_dim(dims.d)
    peres = peres_classify(rho)
    common = dict(
        dims=(dims.m, dims.n),
        negativity_trace_norm=negativity(rho),
        ppt_class=peres.ppt_class,
        negative_eigenvalues=peres.negative_eigenvalues,
    )
    if isinstance(state, DensityMatrix):
        return MeasureReport(kind="mixed", **common)

    k = schmidt_decompose(state)
    extra = {}
    if k.d == 3:
        extra["qutrit_residual"] = qutrit_residual(k)
    if k.d == 4:
        res = quadrit_residuals(k)
        extra["quadrit_residual_corrected"] = res.corrected
        extra["quadrit_residual_printed"] = res.paper_printed
    return MeasureReport(
        kind="pure",
        schmidt=k.k.tolist(),
        concurrence=concurrence_pure(state),
        negativity_rescaled=negativity_schmidt(k),
        x_expectations=[x_shift_expectation(k, p) for p in range(1, k.d)],
        invariants=symmetric_invariants(k).e.tolist(),
        chen_gap=chen_gap(k),
        **common,
        **extra,
    )
