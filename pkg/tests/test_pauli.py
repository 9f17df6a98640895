import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsciband.errors import ConfigError
from qsciband.hamiltonian import KPoint, SpinOrbital, build_hamiltonian
from qsciband.pauli import (
    PauliTerm,
    QubitHamiltonian,
    apply_pauli_term,
    build_cost_operator,
    compile_operator,
    default_qubit_order,
    hf_determinant,
    jordan_wigner,
    number_operator,
    sz_operator,
)

from oracles import fermionic_fock_matrix, pauli_dense_matrix, random_fermion_hamiltonian


def _term_map(qham):
    return {term.axes: term.coefficient for term in qham.terms}


def _single_orbital_ham(one_body):
    orbitals = [SpinOrbital(0, 0, "a", True), SpinOrbital(1, 0, "b", False)]
    return build_hamiltonian(
        2, 1, KPoint("G", (0.0, 0.0, 0.0)), 0.0, one_body, {}, orbitals
    )


def test_jw_number_operator_identity():
    ham = _single_orbital_ham({(0, 0): 1.0})
    qham = jordan_wigner(ham, order=[0, 1])
    terms = _term_map(qham)
    assert terms[()] == pytest.approx(0.5)
    assert terms[((0, "Z"),)] == pytest.approx(-0.5)
    assert len(terms) == 2


def test_jw_hopping_identity():
    ham = _single_orbital_ham({(0, 1): 1.0, (1, 0): 1.0})
    qham = jordan_wigner(ham, order=[0, 1])
    terms = _term_map(qham)
    assert terms[((0, "X"), (1, "X"))] == pytest.approx(0.5)
    assert terms[((0, "Y"), (1, "Y"))] == pytest.approx(0.5)
    assert len(terms) == 2


def test_jw_hubbard_matches_dense_oracle(hubbard):
    order = default_qubit_order(hubbard.orbitals)
    qham = jordan_wigner(hubbard, order)
    fock = fermionic_fock_matrix(hubbard, order)
    assert np.max(np.abs(pauli_dense_matrix(qham) - fock)) < 1e-12
    # compiled mask route agrees with the kron route
    assert np.max(np.abs(compile_operator(qham).dense() - fock)) < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_jw_operator_equivalence_random(seed):
    rng = np.random.default_rng(1234 + seed)
    ham = random_fermion_hamiltonian(rng, n_spatial=3, n_occupied=1)
    order = default_qubit_order(ham.orbitals)
    qham = jordan_wigner(ham, order)
    fock = fermionic_fock_matrix(ham, order)
    assert np.max(np.abs(pauli_dense_matrix(qham) - fock)) < 1e-12
    assert np.max(np.abs(compile_operator(qham).dense() - fock)) < 1e-12


def test_jw_rejects_bad_ordering(hubbard):
    with pytest.raises(ConfigError, match="bijection"):
        jordan_wigner(hubbard, order=[0, 0, 1, 2])


def test_apply_pauli_examples():
    z0 = PauliTerm(1.0, ((0, "Z"),))
    det, phase = apply_pauli_term(z0, 0b1)
    assert (det, phase) == (0b1, -1.0)

    x0 = PauliTerm(1.0, ((0, "X"),))
    det, phase = apply_pauli_term(x0, 0b0)
    assert (det, phase) == (0b1, 1.0)

    y0 = PauliTerm(1.0, ((0, "Y"),))
    det, phase = apply_pauli_term(y0, 0b0)
    assert det == 0b1
    assert phase == pytest.approx(1j)


@settings(max_examples=200, deadline=None)
@given(
    det=st.integers(min_value=0, max_value=255),
    axes=st.dictionaries(st.integers(0, 7), st.sampled_from("XYZ"), max_size=6),
    re=st.floats(-2, 2, allow_nan=False),
    im=st.floats(-2, 2, allow_nan=False),
)
def test_apply_pauli_dagger_action(det, axes, re, im):
    coeff = complex(re, im)
    if abs(coeff) < 1e-9:
        coeff = 1.0 + 0j
    term = PauliTerm(coeff, tuple(sorted(axes.items())))
    out, phase = apply_pauli_term(term, det)
    assert abs(phase) == pytest.approx(abs(coeff))
    dagger = PauliTerm(coeff.conjugate(), term.axes)
    back, phase_back = apply_pauli_term(dagger, out)
    assert back == det
    # P+ P = |c|^2 * I, so the round-trip phase is the conjugate pair product
    assert phase_back * phase == pytest.approx(abs(coeff) ** 2)


def test_number_operator_eigenvalues():
    nop = compile_operator(number_operator(10))
    state = np.zeros(1 << 10, dtype=complex)
    det = 0b1111111100
    state[det] = 1.0
    assert nop.expectation(state) == pytest.approx(8.0)


def _spin_orbitals_interleaved(n_spatial, n_occ_spatial):
    return [
        SpinOrbital(2 * sp + si, sp, "ab"[si], hf_occupied=sp < n_occ_spatial)
        for sp in range(n_spatial)
        for si in range(2)
    ]


def test_sz_operator_eigenvalues():
    orbitals = _spin_orbitals_interleaved(8, 4)
    order = list(range(16))  # orbital i on qubit i: alpha on even qubits
    szop = compile_operator(sz_operator(orbitals, order))

    def sz_of(det):
        state = np.zeros(1 << 16, dtype=complex)
        state[det] = 1.0
        return szop.expectation(state)

    hf = sum(1 << q for q in range(8))  # 4 alpha + 4 beta occupied
    assert sz_of(hf) == pytest.approx(0.0)
    det_5a_3b = sum(1 << (2 * i) for i in range(5)) + sum(1 << (2 * i + 1) for i in range(3))
    assert sz_of(det_5a_3b) == pytest.approx(1.0)


def test_cost_operator_zero_penalties_is_identity_map(hubbard):
    qham = jordan_wigner(hubbard)
    cost = build_cost_operator(qham, 0.0, 2, 0.0, hubbard.orbitals)
    assert _term_map(cost) == _term_map(qham)


def test_cost_operator_penalty_vanishes_in_sector(hubbard):
    order = default_qubit_order(hubbard.orbitals)
    qham = jordan_wigner(hubbard, order)
    cost = build_cost_operator(qham, 0.5, 2, 0.2, hubbard.orbitals, order)
    hf = hf_determinant(hubbard.orbitals, order)
    state = np.zeros(1 << 4, dtype=complex)
    state[hf] = 1.0
    bare = compile_operator(qham).expectation(state)
    penalized = compile_operator(cost).expectation(state)
    assert penalized == pytest.approx(bare, abs=1e-12)


def test_cost_operator_paper_coefficients():
    # 0.5 (N - 8)^2 + 0.2 Sz^2 on 16 qubits: check spectrum action on two dets
    orbitals = _spin_orbitals_interleaved(8, 4)
    order = list(range(16))
    zero = QubitHamiltonian(n_qubits=16, terms=())
    cost = build_cost_operator(zero, 0.5, 8, 0.2, orbitals, order)
    compiled = compile_operator(cost)

    def val(det):
        state = np.zeros(1 << 16, dtype=complex)
        state[det] = 1.0
        return compiled.expectation(state)

    det_7e = sum(1 << q for q in range(7))  # N=7 (4 alpha, 3 beta), Sz=+1/2
    assert val(det_7e) == pytest.approx(0.5 * 1 + 0.2 * 0.25)
    det_hf = sum(1 << q for q in range(8))
    assert val(det_hf) == pytest.approx(0.0, abs=1e-12)


def test_symmetry_commutators_on_conserving_hamiltonian():
    rng = np.random.default_rng(7)
    ham = random_fermion_hamiltonian(rng, n_spatial=3, n_occupied=1, conserving=True)
    order = default_qubit_order(ham.orbitals)
    h = pauli_dense_matrix(jordan_wigner(ham, order))
    n_op = pauli_dense_matrix(
        QubitHamiltonian(6, number_operator(6).terms)
    )
    sz_op_mat = pauli_dense_matrix(
        QubitHamiltonian(6, sz_operator(ham.orbitals, order).terms)
    )
    assert np.max(np.abs(h @ n_op - n_op @ h)) < 1e-12
    assert np.max(np.abs(h @ sz_op_mat - sz_op_mat @ h)) < 1e-12


def test_term_dedup_and_cutoff():
    masks = {(0, 0): 1.0 + 0j, (0, 1): 1e-13 + 0j}
    qham = QubitHamiltonian.from_mask_dict(2, masks)
    assert len(qham.terms) == 1


def test_debug_dump_sorted():
    qham = QubitHamiltonian.from_mask_dict(4, {(0, 1): 0.5 + 0j, (0, 0): 1.0 + 0j})
    dump = qham.debug_dump().splitlines()
    assert dump[0].endswith(": I")
    assert dump[1].endswith(": Z0")


def test_hermiticity_residual_detects_non_hermitian():
    qham = QubitHamiltonian(1, (PauliTerm(1j, ((0, "Z"),)),))
    assert qham.hermiticity_residual() == pytest.approx(1.0)
