import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quditent import measures as ms
from quditent.errors import ArgumentError, DimensionError, UndefinedMeasureError
from quditent.states import (
    BipartiteDims,
    DensityMatrix,
    PureState,
    SchmidtForm,
    apply_local_unitaries,
    coefficient_matrix,
    from_schmidt,
    make_rng,
    partial_transpose,
    projector,
    random_mixed_state,
    random_pure_state,
    random_schmidt_vector,
    random_unitary,
    schmidt_decompose,
)

H = 1 / math.sqrt(2)


def uniform(d):
    return SchmidtForm(np.full(d, 1 / math.sqrt(d)))


def e_oracle(k, j):
    """Elementary symmetric polynomial by explicit enumeration of index subsets."""
    return sum(math.prod(c) for c in itertools.combinations(k, j))


def negativity_oracle(rho):
    pt = rho.matrix.reshape(rho.dims.m, rho.dims.n, rho.dims.m, rho.dims.n)
    pt = pt.transpose(2, 1, 0, 3).reshape(rho.dims.total, rho.dims.total)
    return (np.sum(np.abs(np.linalg.eigvalsh(pt))) - 1) / (rho.dims.d - 1)


# -- concurrence ------------------------------------------------------------------


def test_concurrence_examples():
    bell = from_schmidt([H, H], (2, 2))
    assert ms.concurrence_pure(bell) == pytest.approx(1.0, abs=1e-12)
    assert ms.concurrence_pure(from_schmidt(uniform(3), (3, 3))) == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    assert ms.concurrence_pure(from_schmidt(uniform(4), (4, 4))) == pytest.approx(math.sqrt(1.5), abs=1e-12)
    assert ms.concurrence_pure(from_schmidt([1, 0, 0], (3, 3))) == 0.0


def test_concurrence_equals_purity_form():
    for dims in [(2, 2), (3, 3), (2, 5), (4, 6)]:
        psi = random_pure_state(dims, 21)
        m = coefficient_matrix(psi)
        rho_a = m @ m.conj().T
        purity_form = math.sqrt(2 * (1 - np.trace(rho_a @ rho_a).real))
        assert ms.concurrence_pure(psi) == pytest.approx(purity_form, abs=1e-10)
        assert ms.concurrence_pure(psi) == pytest.approx(ms.concurrence_schmidt(schmidt_decompose(psi)), abs=1e-10)


def test_spin_flip_examples():
    assert ms.concurrence_spin_flip_2q(from_schmidt([H, H], (2, 2))) == pytest.approx(1.0, abs=1e-14)
    assert ms.concurrence_spin_flip_2q(PureState.basis((2, 2), 1, 0)) == 0.0
    psi = from_schmidt([0.8, 0.6], (2, 2))
    assert ms.concurrence_spin_flip_2q(psi) == pytest.approx(2 * 0.8 * 0.6, abs=1e-14)
    with pytest.raises(DimensionError):
        ms.concurrence_spin_flip_2q(random_pure_state((2, 3), 1))


# -- negativity --------------------------------------------------------------------


def test_negativity_examples():
    bell = projector(from_schmidt([H, H], (2, 2)))
    assert ms.negativity(bell) == pytest.approx(negativity_oracle(bell), abs=1e-12)
    assert ms.negativity(bell) == pytest.approx(1.0, abs=1e-12)
    assert ms.negativity(DensityMatrix.maximally_mixed((2, 3))) == pytest.approx(0.0, abs=1e-14)
    uq = projector(from_schmidt(uniform(3), (3, 3)))
    assert ms.negativity(uq) == pytest.approx(negativity_oracle(uq), abs=1e-12)
    assert ms.negativity(uq) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(UndefinedMeasureError):
        ms.negativity(DensityMatrix.maximally_mixed((1, 3)))


def test_negativity_matches_oracle_on_mixed_states():
    rng = make_rng(4)
    for dims in [(2, 2), (2, 3), (3, 3)]:
        for rank in (1, 2, dims[0] * dims[1]):
            rho = random_mixed_state(dims, rank, rng)
            assert ms.negativity(rho) == pytest.approx(negativity_oracle(rho), abs=1e-10)


def test_negativity_schmidt_examples():
    assert ms.negativity_schmidt([H, H]) == pytest.approx(1.0, abs=1e-14)
    assert ms.negativity_schmidt([H, H, 0]) == pytest.approx(0.5, abs=1e-14)
    for d in range(2, 11):
        assert ms.negativity_schmidt(uniform(d)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(UndefinedMeasureError):
        ms.negativity_schmidt([1.0])


# -- shift operator ----------------------------------------------------------------


def test_shift_operator():
    assert np.array_equal(ms.build_shift_operator(2), [[0, 1], [1, 0]])
    x3 = ms.build_shift_operator(3)
    assert np.array_equal(np.linalg.matrix_power(x3, 3), np.eye(3))
    for d in range(2, 9):
        x = ms.build_shift_operator(d)
        assert np.array_equal(x.conj().T @ x, np.eye(d))
        e = np.eye(d)
        for i in range(d):
            assert np.array_equal(x @ e[:, i], e[:, (i + 1) % d])
    # X (x) X maps |11> to |22> (0-based |0,0> -> |1,1>)
    xx = np.kron(ms.build_shift_operator(2), ms.build_shift_operator(2))
    assert np.array_equal(xx @ np.eye(4)[:, 0], np.eye(4)[:, 3])
    for bad in (1, 0, 2.0, True):
        with pytest.raises(DimensionError):
            ms.build_shift_operator(bad)


def matrix_expectation(k, p):
    d = k.d
    psi = from_schmidt(k, (d, d)).amplitudes
    x = np.linalg.matrix_power(ms.build_shift_operator(d), p)
    return (psi.conj() @ np.kron(x, x) @ psi).real


def test_x_expectation_examples():
    assert ms.x_shift_expectation(uniform(2), 1) == pytest.approx(1.0, abs=1e-14)
    assert ms.x_shift_expectation(uniform(3), 1) == pytest.approx(1.0, abs=1e-14)
    assert ms.x_shift_expectation(uniform(4), 2) == pytest.approx(1.0, abs=1e-14)
    for bad in (0, 4, 1.0, True):
        with pytest.raises(ArgumentError):
            ms.x_shift_expectation(uniform(4), bad)


def test_x_expectation_matches_matrix_form():
    for d in range(2, 8):
        k = random_schmidt_vector(d, d)
        for p in range(1, d):
            assert ms.x_shift_expectation(k, p) == pytest.approx(matrix_expectation(k, p), abs=1e-12)


def test_single_shift_misses_pairs_from_d4():
    k = random_schmidt_vector(4, 3)
    pair_sum = e_oracle(k.k, 2)
    # for d <= 3 a single shift covers every pair; at d = 4 k1 k3 and k2 k4 are missing
    assert ms.x_shift_expectation(k, 1) < pair_sum - 1e-3
    k3 = random_schmidt_vector(3, 3)
    assert ms.x_shift_expectation(k3, 1) == pytest.approx(e_oracle(k3.k, 2), abs=1e-14)


def test_negativity_operator_examples():
    assert ms.negativity_operator(uniform(2)) == pytest.approx(1.0, abs=1e-14)
    assert ms.negativity_operator(uniform(4)) == pytest.approx(1.0, abs=1e-14)
    k = random_schmidt_vector(3, 8)
    pairs = k.k[0] * k.k[1] + k.k[0] * k.k[2] + k.k[1] * k.k[2]
    assert ms.negativity_operator(k) == pytest.approx(pairs, abs=1e-14)
    with pytest.raises(UndefinedMeasureError):
        ms.negativity_operator([1.0])


# -- invariants and residuals --------------------------------------------------------


def test_symmetric_invariants_examples():
    inv = ms.symmetric_invariants(uniform(4))
    assert np.allclose(inv.e, [2, 1.5, 0.5, 1 / 16], atol=1e-14)
    assert (inv.s(1), inv.s(4), inv.s(5)) == (pytest.approx(2), pytest.approx(1 / 16), 0.0)
    assert np.array_equal(ms.symmetric_invariants([1, 0, 0, 0]).e, [1, 0, 0, 0])
    assert np.allclose(ms.symmetric_invariants([H, H]).e, [math.sqrt(2), 0.5], atol=1e-14)
    with pytest.raises(ArgumentError):
        inv.s(0)


def test_chen_gap_examples():
    assert ms.chen_gap([1, 0, 0]) == 0.0
    assert ms.chen_gap(uniform(2)) == pytest.approx(0.75, abs=1e-14)
    assert ms.chen_gap(uniform(3)) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DimensionError):
        ms.chen_gap([1.0])


def test_qutrit_residual_examples():
    k1k2k3 = (1 / math.sqrt(3)) ** 3
    # exact check of the uniform anchor: 1 = 1/3 + 2 k1k2k3 sqrt(3)
    assert 1 / 3 + 2 * k1k2k3 * math.sqrt(3) == pytest.approx(1.0, abs=1e-15)
    for k in (uniform(3), [H, H, 0], [1, 0, 0]):
        assert abs(ms.qutrit_residual(k)) <= 1e-14
    k = SchmidtForm([H, H, 0])
    assert ms.negativity_schmidt(k) == pytest.approx(ms.concurrence_schmidt(k) / 2, abs=1e-15)
    with pytest.raises(DimensionError):
        ms.qutrit_residual(uniform(4))


def quadrit_exact(k):
    """Both quadrit residuals in rational arithmetic from the enumerated invariants."""
    k = [Fraction(x) for x in k]
    s = [e_oracle(k, j) for j in range(1, 5)]
    c2 = 4 * e_oracle([x * x for x in k], 2)
    base = c2 - 4 * s[1] ** 2
    return base - 8 * (s[3] - s[0] * s[2]), base - 2 * (s[3] - s[0] * s[2])


def test_quadrit_residual_examples():
    u = [Fraction(1, 2)] * 4
    assert quadrit_exact(u) == (0, Fraction(-45, 8))
    res = ms.quadrit_residuals(uniform(4))
    assert abs(res.corrected) <= 1e-14
    assert res.paper_printed == pytest.approx(-45 / 8, abs=1e-13)
    res = ms.quadrit_residuals([H, H, 0, 0])
    assert abs(res.corrected) <= 1e-14
    with pytest.raises(DimensionError):
        ms.quadrit_residuals(uniform(3))


def test_quadrit_residuals_match_rational_oracle():
    rng = make_rng(31)
    for _ in range(50):
        k = random_schmidt_vector(4, rng)
        corrected, printed = quadrit_exact(k.k.tolist())
        res = ms.quadrit_residuals(k)
        assert abs(res.corrected - float(corrected)) <= 1e-13
        assert abs(res.paper_printed - float(printed)) <= 1e-13
        assert abs(float(corrected)) <= 1e-15


def test_peres_examples():
    bell = projector(from_schmidt([H, H], (2, 2)))
    res = ms.peres_classify(bell)
    assert res.ppt_class is ms.PeresClass.NPT
    assert np.allclose(res.negative_eigenvalues, [-0.5], atol=1e-12)
    assert ms.peres_classify(DensityMatrix.maximally_mixed((2, 3))) == (ms.PeresClass.PPT, [])
    assert ms.peres_classify(projector(PureState.basis((3, 2), 2, 1))).ppt_class is ms.PeresClass.PPT


def test_measure_report_pure_and_mixed():
    rep = ms.measure_report(from_schmidt([H, H], (2, 2)))
    assert rep.concurrence == pytest.approx(1.0, abs=1e-12)
    assert rep.negativity == pytest.approx(1.0, abs=1e-12)
    assert rep.ppt_class is ms.PeresClass.NPT
    assert rep.qutrit_residual is None and rep.quadrit_residual_corrected is None

    rep = ms.measure_report(from_schmidt(uniform(3), (3, 3)))
    assert rep.concurrence == pytest.approx(2 / math.sqrt(3), abs=1e-12)
    assert rep.negativity == pytest.approx(1.0, abs=1e-12)
    assert abs(rep.qutrit_residual) <= 1e-12

    rep = ms.measure_report(from_schmidt(uniform(4), (4, 5)))
    assert rep.quadrit_residual_printed == pytest.approx(-45 / 8, abs=1e-10)
    assert len(rep.x_expectations) == 3 and len(rep.invariants) == 4

    rep = ms.measure_report(DensityMatrix.maximally_mixed((2, 2)))
    d = rep.to_dict()
    assert d["negativity"] == pytest.approx(0.0, abs=1e-14) and d["ppt_class"] == "PPT"
    assert d["concurrence"] is None and d["schmidt"] is None
    with pytest.raises(TypeError):
        ms.measure_report(np.eye(4))


# -- properties ----------------------------------------------------------------------

seeds = st.integers(0, 2**63 - 1)


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_two_qubit_equality(seed):
    psi = random_pure_state((2, 2), seed)
    k = schmidt_decompose(psi).k
    c, n = ms.concurrence_pure(psi), ms.negativity_schmidt(k)
    assert abs(n - c) <= 1e-10
    assert abs(c - 2 * k[0] * k[1]) <= 1e-10
    assert abs(ms.concurrence_spin_flip_2q(psi) - c) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(m=st.integers(2, 4), n=st.integers(2, 4), seed=seeds)
def test_trace_norm_negativity_matches_schmidt(m, n, seed):
    psi = random_pure_state((m, n), seed)
    assert abs(ms.negativity(projector(psi)) - ms.negativity_schmidt(schmidt_decompose(psi))) <= 1e-8


@settings(max_examples=100, deadline=None)
@given(d=st.integers(2, 10), seed=seeds)
def test_operator_form_matches_schmidt(d, seed):
    k = random_schmidt_vector(d, seed)
    assert abs(ms.negativity_operator(k) - ms.negativity_schmidt(k)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(d=st.integers(2, 8), seed=seeds, zeros=st.integers(0, 7))
def test_chen_bound(d, seed, zeros):
    k = random_schmidt_vector(d, seed).k.copy()
    k[max(1, d - zeros) :] = 0.0
    assert ms.chen_gap(SchmidtForm.from_values(k)) >= -1e-12


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_qutrit_identity(seed):
    assert abs(ms.qutrit_residual(random_schmidt_vector(3, seed))) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_quadrit_corrected_identity(seed):
    assert abs(ms.quadrit_residuals(random_schmidt_vector(4, seed)).corrected) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(d=st.integers(1, 8), seed=seeds)
def test_invariant_set_properties(d, seed):
    k = random_schmidt_vector(d, seed)
    inv = ms.symmetric_invariants(k)
    for j in range(1, d + 1):
        assert inv.e[j - 1] == pytest.approx(e_oracle(k.k, j), abs=1e-12)
    assert inv.e[0] >= 0
    if d >= 2:
        assert abs(inv.e[0] ** 2 - (1 + 2 * inv.e[1])) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(d=st.integers(2, 5), nz=st.integers(1, 5), seed=seeds)
def test_invariants_vanish_beyond_support(d, nz, seed):
    nz = min(nz, d)
    k = random_schmidt_vector(nz, seed).k.tolist() + [0.0] * (d - nz)
    inv = ms.symmetric_invariants(k)
    assert all(inv.e[j] == 0.0 for j in range(nz, d))


@settings(max_examples=60, deadline=None)
@given(m=st.integers(2, 4), n=st.integers(2, 4), seed=seeds)
def test_local_unitary_invariance_of_measures(m, n, seed):
    rng = make_rng(seed)
    psi = random_pure_state((m, n), rng)
    moved = apply_local_unitaries(psi, random_unitary(m, rng), random_unitary(n, rng))
    k0, k1 = schmidt_decompose(psi), schmidt_decompose(moved)
    assert abs(ms.concurrence_pure(psi) - ms.concurrence_pure(moved)) <= 1e-9
    assert abs(ms.negativity_schmidt(k0) - ms.negativity_schmidt(k1)) <= 1e-9
    assert np.max(np.abs(ms.symmetric_invariants(k0).e - ms.symmetric_invariants(k1).e)) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_determinant_relation_qutrit(seed):
    rng = make_rng(seed)
    k = random_schmidt_vector(3, rng)
    psi = apply_local_unitaries(from_schmidt(k, (3, 3)), random_unitary(3, rng), random_unitary(3, rng))
    assert abs(math.prod(k.k) - abs(np.linalg.det(coefficient_matrix(psi)))) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(d=st.integers(2, 10), seed=seeds)
def test_ranges(d, seed):
    k = random_schmidt_vector(d, seed)
    n, c = ms.negativity_schmidt(k), ms.concurrence_schmidt(k)
    assert 0 <= n <= 1 + 1e-12
    assert 0 <= c <= math.sqrt(2 * (1 - 1 / d)) + 1e-12


@settings(max_examples=100, deadline=None)
@given(d=st.integers(2, 10), seed=seeds)
def test_two_coefficient_concurrence_at_most_one(d, seed):
    pair = random_schmidt_vector(2, seed).k.tolist()
    assume(pair[1] > 0)
    k = SchmidtForm(pair + [0.0] * (d - 2))
    assert ms.concurrence_schmidt(k) <= 1 + 1e-12


@settings(max_examples=60, deadline=None)
@given(dims=st.sampled_from([(2, 2), (2, 3), (3, 3)]), rank=st.integers(1, 9), seed=seeds)
def test_peres_negative_sum(dims, rank, seed):
    rank = min(rank, dims[0] * dims[1])
    rho = random_mixed_state(dims, rank, seed)
    n = ms.negativity(rho)
    res = ms.peres_classify(rho)
    d = BipartiteDims(*dims).d
    assert abs(n - 2 / (d - 1) * abs(sum(res.negative_eigenvalues))) <= 1e-8
    assert (res.ppt_class is ms.PeresClass.NPT) == (n > 1e-8)
    lam = np.linalg.eigvalsh(partial_transpose(rho))
    assert (lam[0] < ms.NPT_THRESHOLD) == (res.ppt_class is ms.PeresClass.NPT)
