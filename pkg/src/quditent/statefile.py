"""JSON serialization of states.

A state file is an object ``{"kind": ..., "dims": [m, n], "data": ...}``:

``pure``
    ``data`` is a list of ``m*n`` ``[re, im]`` pairs, basis order ``|i, j>``
    with the A index major.
``mixed``
    ``data`` is an ``(m*n) x (m*n)`` nested list of ``[re, im]`` pairs.
``schmidt``
    ``data`` is a list of real Schmidt coefficients, at most ``min(m, n)`` long.

Loading tolerates rounding: a pure state or Schmidt vector whose squared norm
is within ``LOAD_NORM_TOL`` of one is renormalized, and a density matrix goes
through :meth:`DensityMatrix.from_matrix` with the same trace tolerance.
"""

import json
import math

import numpy as np

from .errors import DimensionError, InvariantError, QuditentError
from .states import BipartiteDims, DensityMatrix, PureState, SchmidtForm

LOAD_NORM_TOL = 1e-6
KINDS = ("pure", "mixed", "schmidt")


class StateFileError(QuditentError, ValueError):
    """The document is not a well-formed state file."""


def _complex_list(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def _dims_of(obj):
    dims = obj.get("dims")
    if not isinstance(dims, list) or len(dims) != 2:
        raise StateFileError(f"'dims' must be a two-element list, got {dims!r}")
    for v in dims:
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise StateFileError(f"'dims' entries must be positive integers, got {dims!r}")
    return BipartiteDims(*dims)


def _parse_complex(pair, where):
    if (
        not isinstance(pair, list)
        or len(pair) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
    ):
        raise StateFileError(f"{where}: expected an [re, im] pair of numbers, got {pair!r}")
    z = complex(pair[0], pair[1])
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise StateFileError(f"{where}: non-finite entry {pair!r}")
    return z


def _pure(dims, data):
    if not isinstance(data, list) or len(data) != dims.total:
        raise StateFileError(f"pure state for {dims} needs {dims.total} amplitudes")
    amps = np.array([_parse_complex(p, f"data[{i}]") for i, p in enumerate(data)])
    norm2 = float(np.vdot(amps, amps).real)
    if abs(norm2 - 1.0) > LOAD_NORM_TOL:
        raise InvariantError(f"pure state is not normalized: sum |a|^2 = {norm2!r}")
    return PureState(dims, amps / math.sqrt(norm2))


def _mixed(dims, data):
    size = dims.total
    if not isinstance(data, list) or len(data) != size:
        raise StateFileError(f"density matrix for {dims} needs {size} rows")
    mat = np.empty((size, size), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != size:
            raise StateFileError(f"data[{i}] must hold {size} entries")
        for j, p in enumerate(row):
            mat[i, j] = _parse_complex(p, f"data[{i}][{j}]")
    return DensityMatrix.from_matrix(dims, mat, trace_tol=LOAD_NORM_TOL)


def _schmidt(dims, data):
    if not isinstance(data, list) or not data:
        raise StateFileError("schmidt data must be a non-empty list of numbers")
    for x in data:
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise StateFileError(f"Schmidt coefficients must be finite numbers, got {x!r}")
    if len(data) > dims.d:
        raise DimensionError(f"{len(data)} Schmidt coefficients do not fit in {dims}")
    k = np.array(data, dtype=np.float64)
    norm2 = float(np.sum(k * k))
    if abs(norm2 - 1.0) > LOAD_NORM_TOL:
        raise InvariantError(f"Schmidt vector is not normalized: sum k^2 = {norm2!r}")
    return SchmidtForm(k / math.sqrt(norm2))


def from_dict(obj):
    """Validate a parsed state file.

    Returns
    -------
    kind : str
    dims : BipartiteDims
    state : PureState, DensityMatrix or SchmidtForm
    """
    if not isinstance(obj, dict):
        raise StateFileError("state file must be a JSON object")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise StateFileError(f"'kind' must be one of {KINDS}, got {kind!r}")
    dims = _dims_of(obj)
    if "data" not in obj:
        raise StateFileError("missing 'data'")
    parse = {"pure": _pure, "mixed": _mixed, "schmidt": _schmidt}[kind]
    return kind, dims, parse(dims, obj["data"])


def loads(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from None
    return from_dict(obj)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def to_dict(state, dims=None):
    """Serializable form of a PureState, DensityMatrix or SchmidtForm."""
    if isinstance(state, PureState):
        return {"kind": "pure", "dims": [state.dims.m, state.dims.n], "data": _complex_list(state.amplitudes)}
    if isinstance(state, DensityMatrix):
        rows = [_complex_list(row) for row in state.matrix]
        return {"kind": "mixed", "dims": [state.dims.m, state.dims.n], "data": rows}
    if isinstance(state, SchmidtForm):
        m, n = (dims.m, dims.n) if dims is not None else (state.d, state.d)
        return {"kind": "schmidt", "dims": [m, n], "data": [float(x) for x in state.k]}
    raise TypeError(f"cannot serialize {type(state).__name__}")


def dumps(obj):
    """Deterministic JSON text: fixed key order, shortest round-trip floats."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"
