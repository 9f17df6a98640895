import numpy as np
import pytest

from qsciband.errors import CapacityError, SelectionError
from qsciband.hamiltonian import build_hamiltonian, constant_only
from qsciband.pauli import compile_operator, default_qubit_order, hf_determinant, hf_sector, jordan_wigner
from qsciband.qsci import (
    SubspaceSelection,
    SubspaceWavefunction,
    diagonalize_subspace,
    fci_ground,
    ideal_selection,
    post_select,
    select_subspace,
    solve_subspace,
    subspace_hamiltonian,
)
from qsciband.statevector import SampleDistribution

from oracles import fermionic_fock_matrix, random_fermion_hamiltonian

HUBBARD_E0 = 2 - 2 * np.sqrt(2)


def _dist(counts, n_qubits=4, seed=0):
    return SampleDistribution(
        counts=counts, total_shots=sum(counts.values()), seed=seed, n_qubits=n_qubits
    )


def test_post_select_keeps_sector(hubbard):
    sector = hf_sector(hubbard)
    hf = hf_determinant(hubbard.orbitals)
    good = hf  # 2 electrons, Sz=0
    bad = hf | (1 << 1)  # 3 electrons
    dist = _dist({good: 7, bad: 3})
    kept = post_select(dist, sector)
    assert kept.counts == {good: 7}
    assert kept.total_shots == 7


def test_post_select_wrong_count_discarded():
    sector = hf_sector(constant_only(0.0, n_spin_orbitals=16, n_electrons=8))
    det_7 = sum(1 << q for q in range(7))
    dist = _dist({det_7: 5}, n_qubits=16)
    assert post_select(dist, sector).counts == {}


def test_select_subspace_ranking():
    sel = select_subspace(_dist({3: 60, 5: 30, 9: 10}), r=2)
    assert sel.determinants == (3, 5)
    assert not sel.support_limited


def test_select_subspace_tie_break_ascending():
    sel = select_subspace(_dist({9: 10, 3: 10, 5: 10}), r=2)
    assert sel.determinants == (3, 5)


def test_select_subspace_support_limited():
    sel = select_subspace(_dist({3: 6}), r=5)
    assert sel.determinants == (3,)
    assert sel.support_limited


def test_select_subspace_empty_raises():
    with pytest.raises(SelectionError):
        select_subspace(_dist({}), r=2)


def test_subspace_single_hf_det_is_hf_energy(free_fermion):
    from qsciband.hamiltonian import hf_reference_energy

    order = default_qubit_order(free_fermion.orbitals)
    qham = jordan_wigner(free_fermion, order)
    hf = hf_determinant(free_fermion.orbitals, order)
    sel = SubspaceSelection((hf,), 1, True, "ideal")
    mat = subspace_hamiltonian(sel, qham)
    assert mat.shape == (1, 1)
    assert mat[0, 0].real == pytest.approx(hf_reference_energy(free_fermion), abs=1e-12)


def test_subspace_matches_dense_restriction(hubbard):
    order = default_qubit_order(hubbard.orbitals)
    qham = jordan_wigner(hubbard, order)
    sector = hf_sector(hubbard)
    dets = sector.enumerate()
    mat = subspace_hamiltonian(dets, qham)
    fock = fermionic_fock_matrix(hubbard, order)
    expected = fock[np.ix_(dets.astype(int), dets.astype(int))]
    assert np.max(np.abs(mat - expected)) < 1e-12


def test_two_body_cannot_couple_triple_excitations(hubbard):
    two_body_only = build_hamiltonian(
        hubbard.n_spin_orbitals,
        hubbard.n_electrons,
        hubbard.k_point,
        0.0,
        {},
        hubbard.two_body,
        hubbard.orbitals,
    )
    qham = jordan_wigner(two_body_only)
    # determinants differing in three occupied positions
    mat = subspace_hamiltonian(np.array([0b000111, 0b111000], dtype=np.uint64), qham)
    assert abs(mat[0, 1]) < 1e-14


def test_diagonalize_trivial():
    wf = diagonalize_subspace(np.array([[2.5]]))
    assert wf.energy == pytest.approx(2.5)
    assert np.allclose(wf.coefficients, [1.0])


def test_hubbard_ground_analytic(hubbard):
    sector = hf_sector(hubbard)
    sel = SubspaceSelection(
        tuple(int(d) for d in sector.enumerate()), sector.dimension(), True, "sector"
    )
    wf = solve_subspace(sel, jordan_wigner(hubbard))
    assert wf.energy == pytest.approx(HUBBARD_E0, abs=1e-12)


def test_fci_ground_examples(hubbard, free_fermion):
    assert fci_ground(hubbard).energy == pytest.approx(HUBBARD_E0, abs=1e-12)
    assert fci_ground(free_fermion).energy == pytest.approx(-3.7, abs=1e-12)
    const = constant_only(-3.5, n_spin_orbitals=4, n_electrons=2)
    wf = fci_ground(const)
    assert wf.energy == pytest.approx(-3.5, abs=1e-12)


def test_fci_capacity_error(hubbard):
    with pytest.raises(CapacityError, match="4"):
        fci_ground(hubbard, max_dimension=3)


def test_variational_bound_and_monotonicity():
    rng = np.random.default_rng(21)
    for _ in range(5):
        ham = random_fermion_hamiltonian(rng, n_spatial=3, n_occupied=1, conserving=True)
        qham = jordan_wigner(ham)
        compiled = compile_operator(qham)
        exact = fci_ground(ham, qubit_ham=compiled)
        state = np.zeros(1 << ham.n_spin_orbitals, dtype=complex)
        for det, coeff in exact.as_dict().items():
            state[det] = coeff
        sector = hf_sector(ham)
        previous = np.inf
        for r in (2, 4, 9):
            sel = ideal_selection(state, r, sector=sector)
            wf = solve_subspace(sel, compiled)
            assert wf.energy >= exact.energy - 1e-12
            assert wf.energy <= previous + 1e-12
            previous = wf.energy


def test_reproducible_wavefunction(hubbard):
    qham = jordan_wigner(hubbard)
    dist = _dist({5: 50, 10: 30, 6: 10, 9: 10})
    wf1 = solve_subspace(select_subspace(dist, 3), qham)
    wf2 = solve_subspace(select_subspace(dist, 3), qham)
    assert wf1.energy == wf2.energy
    assert np.array_equal(wf1.coefficients, wf2.coefficients)


def test_sector_closure(hubbard):
    qham = jordan_wigner(hubbard)
    sector = hf_sector(hubbard)
    dets = [int(d) for d in sector.enumerate()]
    outside = [d for d in range(16) if not sector.contains(d)]
    mat = subspace_hamiltonian(np.array(dets + outside, dtype=np.uint64), qham)
    n_in = len(dets)
    assert np.max(np.abs(mat[n_in:, :n_in])) < 1e-14


def test_wavefunction_serialization(hubbard):
    wf = fci_ground(hubbard)
    text = wf.to_json(hubbard.n_spin_orbitals)
    again = SubspaceWavefunction.from_json(text)
    assert again.energy == wf.energy
    assert again.selection.determinants == wf.selection.determinants
    assert np.array_equal(again.coefficients, wf.coefficients)


def test_sparse_path_matches_dense():
    rng = np.random.default_rng(4)
    ham = random_fermion_hamiltonian(rng, n_spatial=4, n_occupied=2, conserving=True)
    qham = jordan_wigner(ham)
    sector = hf_sector(ham)
    sel = SubspaceSelection(
        tuple(int(d) for d in sector.enumerate()), sector.dimension(), True, "sector"
    )
    dense_wf = solve_subspace(sel, qham, dense_limit=10_000)
    sparse_wf = solve_subspace(sel, qham, dense_limit=2)
    assert sparse_wf.energy == pytest.approx(dense_wf.energy, abs=1e-10)
