"""Randomized verification campaigns over the identities and bounds between measures.

Each check runs over ``samples`` seeded inputs per dimension plus a few fixed
witnesses (anchors). Samples are drawn in blocks of ``BLOCK`` from a generator
keyed by ``(seed, check, dims, block index)``, so a block is the unit of work
and the report does not depend on how blocks are spread over threads.

Identity checks score ``|residual|``. Bound checks track the signed margin
(non-negative when the bound holds) and score ``max(0, -margin)``.
"""

import csv
import hashlib
import io
import json
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import measures as ms
from . import statefile
from .errors import ArgumentError
from .states import (
    BipartiteDims,
    SchmidtForm,
    apply_local_unitaries,
    from_schmidt,
    make_rng,
    projector,
    random_mixed_state,
    random_pure_state,
    random_schmidt_vector,
    random_unitary,
    schmidt_decompose,
)

BLOCK = 256
THREADS_ENV = "QUDITENT_THREADS"
NPT_NEGATIVITY = 1e-8
MISCLASSIFIED = 1.0

_H = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Check:
    name: str
    bound: bool
    tolerance: float
    default_dims: str
    schmidt_input: bool
    anchors: tuple = ()


def _uniform(d):
    return SchmidtForm(np.full(d, 1.0 / math.sqrt(d)))


def _padded(values, d):
    return SchmidtForm(list(values) + [0.0] * (d - len(values)))


CHECKS = {
    c.name: c
    for c in (
        Check("qubit-equality", False, 1e-10, "2", False, (("uniform", lambda d: _uniform(2)),)),
        Check("tracenorm-vs-schmidt", False, 1e-8, "2..6", False, (("uniform", _uniform),)),
        Check("operator-vs-schmidt", False, 1e-12, "2..10", True, (("uniform", _uniform),)),
        Check("chen", True, 1e-12, "2..8", True, (("uniform", _uniform),)),
        Check(
            "qutrit-identity",
            False,
            1e-10,
            "3",
            True,
            (
                ("uniform", _uniform),
                ("two-level", lambda d: _padded([_H, _H], d)),
                ("product", lambda d: _padded([1.0], d)),
            ),
        ),
        Check(
            "quadrit-corrected",
            False,
            1e-10,
            "4",
            True,
            (("uniform", _uniform), ("two-level", lambda d: _padded([_H, _H], d))),
        ),
        Check(
            "quadrit-paper-printed",
            False,
            1e-10,
            "4",
            True,
            (("uniform", _uniform), ("two-level", lambda d: _padded([_H, _H], d))),
        ),
        Check("lu-invariance", False, 1e-9, "2..6", False),
        Check("max-values", True, 1e-12, "2..10", True, (("uniform", _uniform),)),
        Check("peres-consistency", False, 1e-8, "2,2x3", False),
    )
}


def parse_dims(spec):
    """``"3"``, ``"2x3"``, ``"2..6"`` or comma-separated mixtures, to a list of BipartiteDims."""
    out = []
    for part in str(spec).split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                if lo > hi:
                    raise ValueError
                out.extend(BipartiteDims(d, d) for d in range(lo, hi + 1))
            elif "x" in part:
                m, n = (int(x) for x in part.split("x"))
                out.append(BipartiteDims(m, n))
            else:
                d = int(part)
                out.append(BipartiteDims(d, d))
        except ValueError:
            raise ArgumentError(f"cannot parse dimension spec {part!r} in {spec!r}") from None
    return out


def _dims_label(dims):
    return str(dims.m) if dims.m == dims.n else str(dims)


def _stream_key(check, dims):
    return zlib.crc32(f"{check}:{_dims_label(dims)}".encode())


# -- evaluators: input -> signed value ----------------------------------------------


def _qubit_equality(psi):
    k = schmidt_decompose(psi).k
    c = ms.concurrence_pure(psi)
    n = ms.negativity_schmidt(k)
    ref = 2.0 * k[0] * k[1]
    flip = ms.concurrence_spin_flip_2q(psi)
    return max((n - c, c - ref, n - ref, flip - c), key=abs)


def _tracenorm(psi):
    return ms.negativity(projector(psi)) - ms.negativity_schmidt(schmidt_decompose(psi))


def _operator(k):
    return ms.negativity_operator(k) - ms.negativity_schmidt(k)


def _chen(k):
    return ms.chen_gap(k)


def _qutrit(k):
    return ms.qutrit_residual(k)


def _quadrit_corrected(k):
    return ms.quadrit_residuals(k).corrected


def _quadrit_printed(k):
    return ms.quadrit_residuals(k).paper_printed


def _lu(sample):
    psi, u, v = sample
    k0 = schmidt_decompose(psi)
    moved = apply_local_unitaries(psi, u, v)
    k1 = schmidt_decompose(moved)
    deltas = [ms.concurrence_pure(moved) - ms.concurrence_pure(psi)]
    if psi.dims.d >= 2:
        deltas.append(ms.negativity_schmidt(k1) - ms.negativity_schmidt(k0))
    deltas.extend(ms.symmetric_invariants(k1).e - ms.symmetric_invariants(k0).e)
    return float(max(deltas, key=abs))


def _max_values(k, anchor=None):
    """Margin to the range limits; at the uniform anchor, minus the distance to the maxima."""
    d = k.d
    c_max = math.sqrt(2.0 * (1.0 - 1.0 / d))
    c = ms.concurrence_schmidt(k)
    n = ms.negativity_schmidt(k)
    if anchor == "uniform":
        return -max(abs(c - c_max), abs(n - 1.0))
    margins = [n, 1.0 - n, c, c_max - c]
    if np.count_nonzero(k.k) == 2:
        margins.append(1.0 - c)
    return min(margins)


def _max_values_sample(sample):
    k, pair = sample
    return min(_max_values(k), _max_values(pair))


def _peres(rho):
    n = ms.negativity(rho)
    result = ms.peres_classify(rho)
    npt = result.ppt_class is ms.PeresClass.NPT
    if npt != (n > NPT_NEGATIVITY):
        return MISCLASSIFIED
    return n - 2.0 / (rho.dims.d - 1) * abs(sum(result.negative_eigenvalues))


_EVALUATORS = {
    "qubit-equality": _qubit_equality,
    "tracenorm-vs-schmidt": _tracenorm,
    "operator-vs-schmidt": _operator,
    "chen": _chen,
    "qutrit-identity": _qutrit,
    "quadrit-corrected": _quadrit_corrected,
    "quadrit-paper-printed": _quadrit_printed,
    "lu-invariance": _lu,
    "max-values": _max_values_sample,
    "peres-consistency": _peres,
}


# -- sample generation ----------------------------------------------------------------


def _draw(check, dims, rng):
    if check in ("qubit-equality", "tracenorm-vs-schmidt"):
        return random_pure_state(dims, rng)
    if check == "lu-invariance":
        return random_pure_state(dims, rng), random_unitary(dims.m, rng), random_unitary(dims.n, rng)
    if check == "peres-consistency":
        rank = int(rng.integers(1, dims.total + 1))
        return random_mixed_state(dims, rank, rng)
    if check == "max-values":
        k = random_schmidt_vector(dims.d, rng)
        pair = random_schmidt_vector(2, rng) if dims.d >= 2 else k
        return k, _padded(pair.k, dims.d)
    return random_schmidt_vector(dims.d, rng)


def _block_samples(check, dims, seed, block, count):
    rng = make_rng(seed, _stream_key(check, dims), block)
    return [_draw(check, dims, rng) for _ in range(count)]


def sample_input(check, dims, seed, index):
    """Regenerate sample ``index`` of a campaign (replays its block up to it)."""
    dims = dims if isinstance(dims, BipartiteDims) else parse_dims(dims)[0]
    block, offset = divmod(int(index), BLOCK)
    return _block_samples(check, dims, seed, block, offset + 1)[offset]


def _validate_dims(check, dims):
    if check == "qubit-equality" and (dims.m, dims.n) != (2, 2):
        raise ArgumentError("qubit-equality is defined only for 2x2")
    if check == "qutrit-identity" and dims.d != 3:
        raise ArgumentError("qutrit-identity needs d = 3")
    if check.startswith("quadrit") and dims.d != 4:
        raise ArgumentError(f"{check} needs d = 4")
    if dims.d < 2:
        raise ArgumentError(f"{check} needs d >= 2, got {dims}")
    if CHECKS[check].schmidt_input and dims.m != dims.n:
        raise ArgumentError(f"{check} works on Schmidt vectors; give a single d, got {dims}")


# -- scoring and reporting -----------------------------------------------------------


def score(check, signed):
    """Non-negative residual for a signed value."""
    return max(0.0, -signed) if CHECKS[check].bound else abs(signed)


def _severity(check, signed):
    return -signed if CHECKS[check].bound else abs(signed)


def _serialize_input(check, item):
    if check == "lu-invariance":
        psi, u, v = item
        return {
            "state": statefile.to_dict(psi),
            "u": statefile._complex_list(u),
            "v": statefile._complex_list(v),
        }
    if check == "max-values" and not isinstance(item, SchmidtForm):
        k, pair = item
        return {"schmidt": [float(x) for x in k.k], "pair": [float(x) for x in pair.k]}
    if isinstance(item, SchmidtForm):
        return {"schmidt": [float(x) for x in item.k]}
    return statefile.to_dict(item)


def deserialize_input(check, obj):
    """Inverse of the worst-case serialization, for re-evaluation."""
    if check == "lu-invariance":
        _, _, psi = statefile.from_dict(obj["state"])
        n_m, n_n = psi.dims.m, psi.dims.n
        u = np.array([complex(*p) for p in obj["u"]]).reshape(n_m, n_m)
        v = np.array([complex(*p) for p in obj["v"]]).reshape(n_n, n_n)
        return psi, u, v
    if check == "max-values" and "pair" in obj:
        return SchmidtForm(obj["schmidt"]), SchmidtForm(obj["pair"])
    if "schmidt" in obj:
        return SchmidtForm(obj["schmidt"])
    return statefile.from_dict(obj)[2]


def evaluate(check, item, anchor=None):
    """Signed value of ``check`` on one input."""
    if check == "max-values" and anchor is not None:
        return _max_values(item, anchor)
    return float(_EVALUATORS[check](item))


@dataclass
class CheckResult:
    check: str
    dims: BipartiteDims
    samples: int
    tolerance: float
    max_residual: float = 0.0
    worst_value: float = 0.0
    worst_case: object = None  # sample index or anchor name
    worst_input: dict = None
    anchors: list = field(default_factory=list)

    @property
    def passed(self):
        return self.max_residual <= self.tolerance

    def to_dict(self):
        return {
            "check": self.check,
            "dims": _dims_label(self.dims),
            "samples": self.samples,
            "max_residual": self.max_residual,
            "worst_value": self.worst_value,
            "worst_case": self.worst_case,
            "worst_input": self.worst_input,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "anchors": self.anchors,
        }


def _run_block(check, dims, seed, block, count):
    items = _block_samples(check, dims, seed, block, count)
    best = None
    for offset, item in enumerate(items):
        signed = evaluate(check, item)
        sev = _severity(check, signed)
        if best is None or sev > best[0]:
            best = (sev, signed, offset, item)
    sev, signed, offset, item = best
    return sev, signed, block * BLOCK + offset, item


def default_workers():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        workers = int(value)
    except ValueError:
        raise ArgumentError(f"{THREADS_ENV} must be a positive integer, got {value!r}") from None
    if workers < 1:
        raise ArgumentError(f"{THREADS_ENV} must be a positive integer, got {value!r}")
    return workers


def run_check(check, dims, samples, seed, tolerance=None, workers=1, pool=None):
    """One check at one dimension.

    Anchors are evaluated first and count toward the worst case; ties go to
    the earliest candidate, so the outcome does not depend on ``workers``.
    """
    if check not in CHECKS:
        raise ArgumentError(f"unknown check {check!r}; known: {', '.join(CHECKS)}")
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 1:
        raise ArgumentError(f"samples must be a positive integer, got {samples!r}")
    _validate_dims(check, dims)
    spec = CHECKS[check]
    tol = spec.tolerance if tolerance is None else float(tolerance)
    result = CheckResult(check, dims, samples, tol)

    candidates = []
    for name, make in spec.anchors:
        k = make(dims.d)
        item = k if spec.schmidt_input else from_schmidt(k, dims)
        signed = evaluate(check, item, anchor=name)
        result.anchors.append(
            {"name": name, "schmidt": [float(x) for x in k.k], "value": signed, "residual": score(check, signed)}
        )
        candidates.append((_severity(check, signed), signed, f"anchor:{name}", item))

    blocks = [(b, min(BLOCK, samples - b * BLOCK)) for b in range(math.ceil(samples / BLOCK))]
    job = lambda bc: _run_block(check, dims, seed, *bc)  # noqa: E731
    if pool is not None:
        outcomes = list(pool.map(job, blocks))
    elif workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(job, blocks))
    else:
        outcomes = [job(bc) for bc in blocks]
    for sev, signed, index, item in outcomes:
        candidates.append((sev, signed, index, item))

    worst = candidates[0]
    for cand in candidates[1:]:
        if cand[0] > worst[0]:
            worst = cand
    sev, signed, where, item = worst
    result.worst_value = signed
    result.max_residual = score(check, signed)
    result.worst_case = where
    result.worst_input = _serialize_input(check, item)
    return result


def reevaluate(check, entry):
    """Recompute the signed worst value recorded in a report entry from its stored input."""
    item = deserialize_input(check, entry["worst_input"])
    where = entry["worst_case"]
    anchor = where.split(":", 1)[1] if isinstance(where, str) else None
    return evaluate(check, item, anchor=anchor)


def campaign_id(checks, dims_spec, samples, seed, tolerance):
    key = json.dumps(
        {"checks": list(checks), "dims": dims_spec, "samples": samples, "seed": seed, "tol": tolerance},
        sort_keys=True,
    )
    return hashlib.sha256(key.encode()).hexdigest()[:16]


@dataclass
class VerifyReport:
    campaign_id: str
    seed: int
    results: list

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def to_dict(self):
        return {
            "campaign_id": self.campaign_id,
            "seed": self.seed,
            "pass": self.passed,
            "checks": [r.to_dict() for r in self.results],
        }

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check", "d", "samples", "max_residual", "tolerance", "pass"])
        for r in self.results:
            writer.writerow(
                [r.check, _dims_label(r.dims), r.samples, repr(r.max_residual), repr(r.tolerance), str(r.passed).lower()]
            )
        return buf.getvalue()


def run_campaign(checks, dims_spec=None, samples=1000, seed=0, tolerance=None, workers=None):
    """Run every named check over its dimensions.

    Parameters
    ----------
    checks : sequence of str
        Names from :data:`CHECKS`.
    dims_spec : str, optional
        Dimension spec applied to every check; each check's default otherwise.
    samples : int
        Random inputs per (check, dimension), in addition to the anchors.
    seed : int
        Master seed.
    tolerance : float, optional
        Overrides every check's default tolerance.
    workers : int, optional
        Thread count; defaults to ``$QUDITENT_THREADS`` or 1.
    """
    checks = list(checks)
    for c in checks:
        if c not in CHECKS:
            raise ArgumentError(f"unknown check {c!r}; known: {', '.join(CHECKS)}")
    if workers is None:
        workers = default_workers()
    plan = [(c, d) for c in checks for d in parse_dims(dims_spec or CHECKS[c].default_dims)]
    for c, d in plan:
        _validate_dims(c, d)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        results = [run_check(c, d, samples, seed, tolerance, pool=pool) for c, d in plan]
    finally:
        if pool is not None:
            pool.shutdown()
    return VerifyReport(campaign_id(checks, dims_spec, samples, seed, tolerance), int(seed), results)
