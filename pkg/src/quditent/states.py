"""Bipartite state types, Schmidt decomposition, partial transpose and seeded sampling.

Basis convention: the amplitude of ``|i, j>`` lives at flat index ``i * n + j``
(subsystem A index major). All types are immutable; their arrays are marked
read-only.
"""

from dataclasses import InitVar, dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, InvariantError

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9

_MASK64 = (1 << 64) - 1


def _frozen(a):
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def make_rng(seed, *keys):
    """Generator for sub-stream ``keys`` of master ``seed``.

    Sample ``j`` of a campaign uses ``make_rng(seed, j)``, so draws do not
    depend on how samples are scheduled across workers.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    ss = np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(int(k) & _MASK64 for k in keys))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class BipartiteDims:
    m: int
    n: int

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise DimensionError(f"subsystem dimension {name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def d(self):
        return min(self.m, self.n)

    @property
    def total(self):
        return self.m * self.n

    def __str__(self):
        return f"{self.m}x{self.n}"


def _dims(dims):
    if isinstance(dims, BipartiteDims):
        return dims
    if isinstance(dims, (int, np.integer)):
        return BipartiteDims(int(dims), int(dims))
    m, n = dims
    return BipartiteDims(m, n)


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Non-negative, descending Schmidt coefficients with unit 2-norm."""

    k: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=np.float64, copy=True).reshape(-1)
        if k.size == 0:
            raise DimensionError("Schmidt vector must have at least one coefficient")
        if not np.all(np.isfinite(k)):
            raise InvariantError("Schmidt coefficients must be finite")
        if np.any(k < 0):
            raise InvariantError("Schmidt coefficients must be non-negative")
        if np.any(np.diff(k) > 0):
            raise InvariantError("Schmidt coefficients must be sorted in descending order")
        if abs(float(np.sum(k * k)) - 1.0) > NORM_TOL:
            raise InvariantError(f"Schmidt coefficients violate sum k_i^2 = 1 (got {np.sum(k * k)!r})")
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_values(cls, values):
        """Sort by magnitude and normalize arbitrary real coefficients."""
        k = np.sort(np.abs(np.asarray(values, dtype=np.float64)))[::-1]
        norm = np.linalg.norm(k)
        if norm == 0:
            raise InvariantError("cannot normalize an all-zero Schmidt vector")
        return cls(k / norm)

    @property
    def d(self):
        return self.k.size

    def __len__(self):
        return self.k.size

    def __repr__(self):
        return f"SchmidtForm(k={self.k.tolist()!r})"


@dataclass(frozen=True, eq=False)
class PureState:
    dims: BipartiteDims
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != dims.total:
            raise DimensionError(f"expected {dims.total} amplitudes for {dims}, got {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise InvariantError("amplitudes must be finite")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvariantError(f"state is not normalized: sum |a|^2 = {norm2!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def normalized(cls, dims, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0 or not np.isfinite(norm):
            raise InvariantError("cannot normalize a zero or non-finite vector")
        return cls(dims, amps / norm)

    @classmethod
    def basis(cls, dims, i, j):
        """Product basis state ``|i, j>`` (0-based indices)."""
        dims = _dims(dims)
        amps = np.zeros(dims.total, dtype=np.complex128)
        amps[i * dims.n + j] = 1.0
        return cls(dims, amps)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator on an m x n space.

    Construction validates every invariant; pass ``validate=False`` only for
    matrices that hold them by construction.
    """

    dims: BipartiteDims
    matrix: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        dims = _dims(self.dims)
        mat = linalg.as_matrix(self.matrix)
        if mat.shape != (dims.total, dims.total):
            raise DimensionError(f"expected a {dims.total}x{dims.total} matrix for {dims}, got {mat.shape}")
        if validate:
            defect = linalg.hermiticity_defect(mat)
            if defect > HERMITIAN_TOL:
                raise InvariantError(f"density matrix is not Hermitian (defect {defect:.3e})")
            tr = np.trace(mat)
            if abs(tr - 1.0) > TRACE_TOL:
                raise InvariantError(f"density matrix trace is {tr.real!r}, expected 1")
            lam_min = float(linalg.hermitian_eigenvalues(mat, tol=HERMITIAN_TOL)[-1])
            if lam_min < -PSD_TOL:
                raise InvariantError(f"density matrix has eigenvalue {lam_min:.3e} < -{PSD_TOL:g}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", _frozen(mat))

    @classmethod
    def from_matrix(cls, dims, matrix, *, trace_tol=1e-6):
        """Accept a slightly perturbed density matrix and repair it.

        The matrix is Hermitized, eigenvalues in ``[-1e-9, 0)`` are clamped to
        zero and the trace is renormalized to one. Larger defects are errors.
        """
        dims = _dims(dims)
        mat = linalg.as_matrix(matrix)
        if mat.shape != (dims.total, dims.total):
            raise DimensionError(f"expected a {dims.total}x{dims.total} matrix for {dims}, got {mat.shape}")
        defect = linalg.hermiticity_defect(mat)
        if defect > HERMITIAN_TOL:
            raise InvariantError(f"density matrix is not Hermitian (defect {defect:.3e})")
        tr = np.trace(mat).real
        if abs(tr - 1.0) > trace_tol:
            raise InvariantError(f"density matrix trace is {tr!r}, expected 1")
        lam, vec = linalg.hermitian_eigensystem(mat, tol=HERMITIAN_TOL)
        if lam[-1] < -PSD_TOL * tr:
            raise InvariantError(f"density matrix has eigenvalue {lam[-1]:.3e} < -{PSD_TOL:g}")
        if lam[-1] < 0:
            lam = np.clip(lam, 0.0, None)
            mat = (vec * lam) @ vec.conj().T
        mat = 0.5 * (mat + mat.conj().T)
        return cls(dims, mat / np.trace(mat).real)

    @classmethod
    def maximally_mixed(cls, dims):
        dims = _dims(dims)
        return cls(dims, np.eye(dims.total) / dims.total, validate=False)


def projector(psi):
    """``|psi><psi|`` as a density matrix."""
    a = psi.amplitudes
    return DensityMatrix(psi.dims, np.outer(a, a.conj()), validate=False)


def coefficient_matrix(psi):
    """The m x n matrix whose (i, j) entry is the amplitude of ``|i, j>``."""
    return psi.amplitudes.reshape(psi.dims.m, psi.dims.n).copy()


def schmidt_decompose(psi):
    """Schmidt coefficients of a pure state: singular values of its coefficient matrix."""
    _, sigma, _ = linalg.singular_value_decomposition(coefficient_matrix(psi))
    return SchmidtForm(sigma)


def from_schmidt(k, dims):
    """The state ``sum_i k_i |i, i>``."""
    dims = _dims(dims)
    if not isinstance(k, SchmidtForm):
        k = SchmidtForm(k)
    if k.d > dims.d:
        raise DimensionError(f"{k.d} Schmidt coefficients do not fit in {dims} (d = {dims.d})")
    amps = np.zeros(dims.total, dtype=np.complex128)
    for i, ki in enumerate(k.k):
        amps[i * dims.n + i] = ki
    return PureState(dims, amps)


def reduced_density(psi, which="A"):
    """Reduced density matrix on subsystem A (``M M^dagger``) or B."""
    mat = coefficient_matrix(psi)
    if which == "A":
        rho = mat @ mat.conj().T
    elif which == "B":
        rho = mat.T @ mat.conj()
    else:
        raise ValueError(f"which must be 'A' or 'B', got {which!r}")
    size = rho.shape[0]
    return DensityMatrix(BipartiteDims(size, 1), rho, validate=False)


def purity(rho):
    """``Tr rho^2``."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.sum(np.abs(mat) ** 2))


def partial_transpose(rho):
    """Transpose on subsystem A: ``<i,j|rho^T_A|k,l> = <k,j|rho|i,l>``."""
    m, n = rho.dims.m, rho.dims.n
    return rho.matrix.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n).copy()


def apply_local_unitaries(psi, u, v):
    """``(U (x) V) |psi>`` computed as ``U M V^T`` on the coefficient matrix."""
    mat = u @ coefficient_matrix(psi) @ v.T
    return PureState(psi.dims, mat.reshape(-1))


def _complex_normal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(n, seed):
    """Haar-random n x n unitary from Gram-Schmidt of a complex Gaussian matrix."""
    rng = make_rng(seed)
    return linalg.orthonormalize(_complex_normal(rng, (n, n)))


def random_schmidt_vector(d, seed):
    """``k_i = |g_i| / ||g||`` for standard normal ``g``, sorted descending."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 1:
        raise DimensionError(f"d must be a positive integer, got {d!r}")
    rng = make_rng(seed)
    g = np.abs(rng.standard_normal(int(d)))
    return SchmidtForm(np.sort(g / np.linalg.norm(g))[::-1])


def random_pure_state(dims, seed):
    dims = _dims(dims)
    rng = make_rng(seed)
    z = _complex_normal(rng, dims.total)
    return PureState(dims, z / np.linalg.norm(z))


def random_mixed_state(dims, rank, seed):
    """``G G^dagger / Tr(G G^dagger)`` with G an (mn) x rank complex Gaussian matrix."""
    dims = _dims(dims)
    if isinstance(rank, bool) or not isinstance(rank, (int, np.integer)) or not 1 <= rank <= dims.total:
        raise DimensionError(f"rank must be in [1, {dims.total}], got {rank!r}")
    rng = make_rng(seed)
    g = _complex_normal(rng, (dims.total, int(rank)))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(dims, rho / np.trace(rho).real, validate=False)


def werner_state(p):
    """Two-qubit ``p |Phi+><Phi+| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Werner weight must lie in [0, 1], got {p!r}")
    phi = np.zeros(4, dtype=np.complex128)
    phi[0] = phi[3] = 1.0 / np.sqrt(2.0)
    rho = p * np.outer(phi, phi.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return DensityMatrix(BipartiteDims(2, 2), rho)
