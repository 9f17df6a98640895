import numpy as np
import pytest

from qsciband.errors import ConfigError, OverlapTruncationError
from qsciband.hamiltonian import KPoint, constant_only, hf_reference_energy
from qsciband.pauli import default_qubit_order, hf_determinant, jordan_wigner
from qsciband.qsci import SubspaceSelection, SubspaceWavefunction, fci_ground
from qsciband.qse import (
    ExcitationOperator,
    QseMatrices,
    apply_excitation,
    assemble_band_structure,
    band_energies,
    conduction_operators,
    qse_matrices,
    solve_gevp,
    valence_operators,
)

from oracles import fermionic_fock_matrix, ladder_dense


def _hf_wavefunction(ham):
    order = default_qubit_order(ham.orbitals)
    hf = hf_determinant(ham.orbitals, order)
    sel = SubspaceSelection((hf,), 1, True, "ideal")
    return SubspaceWavefunction(
        selection=sel,
        coefficients=np.array([1.0 + 0j]),
        energy=hf_reference_energy(ham),
    )


def _statevector_of(wf, n_qubits):
    state = np.zeros(1 << n_qubits, dtype=complex)
    for det, coeff in wf.as_dict().items():
        state[det] = coeff
    return state


def test_apply_excitation_signs(free_fermion):
    order = default_qubit_order(free_fermion.orbitals)
    hf = hf_determinant(free_fermion.orbitals, order)
    wf = _hf_wavefunction(free_fermion)
    for op in valence_operators(free_fermion, order):
        expansion = apply_excitation(op, wf)
        assert len(expansion) == 1
        ((det, coeff),) = expansion.items()
        assert det == hf ^ (1 << op.qubit)
        parity = (-1) ** bin(hf & ((1 << op.qubit) - 1)).count("1")
        assert coeff == pytest.approx(parity)


def test_apply_excitation_annihilates_empty(free_fermion):
    wf = _hf_wavefunction(free_fermion)
    op = ExcitationOperator("annihilate", 0, qubit=1)  # qubit 1 is a virtual slot
    assert apply_excitation(op, wf) == {}


def test_create_then_annihilate_matches_dense(hubbard):
    # c+_l c_l |psi> is the occupation-number weighting of |psi>
    qham = jordan_wigner(hubbard)
    wf = fci_ground(hubbard, qubit_ham=qham)
    state = _statevector_of(wf, 4)
    for qubit in range(4):
        ann = ExcitationOperator("annihilate", 0, qubit=qubit)
        cre = ExcitationOperator("create", 0, qubit=qubit)
        expansion = apply_excitation(cre, apply_excitation(ann, wf))
        dense = ladder_dense(qubit, True, 4) @ ladder_dense(qubit, False, 4) @ state
        rebuilt = np.zeros_like(dense)
        for det, coeff in expansion.items():
            rebuilt[det] = coeff
        assert np.allclose(rebuilt, dense, atol=1e-13)


def test_overlap_identity_on_hf(free_fermion):
    qham = jordan_wigner(free_fermion)
    wf = _hf_wavefunction(free_fermion)
    ops = valence_operators(free_fermion)
    mats = qse_matrices(wf, qham, ops)
    assert np.allclose(mats.s_sub, np.eye(len(ops)), atol=1e-13)


def test_koopmans_diagonal_on_hf(free_fermion):
    qham = jordan_wigner(free_fermion)
    wf = _hf_wavefunction(free_fermion)
    ops = valence_operators(free_fermion)
    mats = qse_matrices(wf, qham, ops)
    e_hf = hf_reference_energy(free_fermion)
    expected = np.diag(
        [e_hf - free_fermion.one_body[(op.spin_orbital, op.spin_orbital)].real for op in ops]
    )
    assert np.allclose(mats.h_sub, expected, atol=1e-12)
    eigvals, discarded = solve_gevp(mats)
    assert discarded == 0
    assert np.allclose(
        np.sort(eigvals),
        np.sort([e_hf - free_fermion.one_body[(op.spin_orbital, op.spin_orbital)].real for op in ops]),
        atol=1e-12,
    )


def test_qse_matrices_match_dense_contractions(hubbard):
    order = default_qubit_order(hubbard.orbitals)
    qham = jordan_wigner(hubbard, order)
    wf = fci_ground(hubbard, qubit_ham=qham)
    psi = _statevector_of(wf, 4)
    h_dense = fermionic_fock_matrix(hubbard, order)
    for builder, create in ((valence_operators, False), (conduction_operators, True)):
        ops = builder(hubbard, order)
        mats = qse_matrices(wf, qham, ops)
        o_dense = [ladder_dense(op.qubit, create, 4) for op in ops]
        h_expected = np.array(
            [[psi.conj() @ oi.conj().T @ h_dense @ oj @ psi for oj in o_dense] for oi in o_dense]
        )
        s_expected = np.array(
            [[psi.conj() @ oi.conj().T @ oj @ psi for oj in o_dense] for oi in o_dense]
        )
        assert np.max(np.abs(mats.h_sub - h_expected)) < 1e-12
        assert np.max(np.abs(mats.s_sub - s_expected)) < 1e-12


def test_gevp_identity_overlap():
    rng = np.random.default_rng(2)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = 0.5 * (h + h.conj().T)
    mats = QseMatrices(h_sub=h, s_sub=np.eye(4, dtype=complex), operators=())
    eigvals, discarded = solve_gevp(mats)
    assert discarded == 0
    assert np.allclose(eigvals, np.linalg.eigvalsh(h), atol=1e-12)


def test_gevp_rank_deficient():
    # both expansions identical: one overlap mode vanishes
    h = np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
    s = np.array([[1.0, 1.0], [1.0, 1.0]], dtype=complex)
    eigvals, discarded = solve_gevp(QseMatrices(h, s, ()))
    assert discarded == 1
    assert len(eigvals) == 1
    assert eigvals[0] == pytest.approx(1.0)


def test_gevp_all_modes_discarded():
    zero = np.zeros((2, 2), dtype=complex)
    with pytest.raises(OverlapTruncationError):
        solve_gevp(QseMatrices(zero, zero, ()))


def test_gevp_invariant_under_operator_remixing(hubbard):
    qham = jordan_wigner(hubbard)
    wf = fci_ground(hubbard, qubit_ham=qham)
    mats = qse_matrices(wf, qham, valence_operators(hubbard))
    reference, _ = solve_gevp(mats)
    rng = np.random.default_rng(13)
    for _ in range(5):
        random = rng.standard_normal((2, 2, 2))
        unitary = np.linalg.qr(random[0] + 1j * random[1])[0]
        mixed = QseMatrices(
            h_sub=unitary.conj().T @ mats.h_sub @ unitary,
            s_sub=unitary.conj().T @ mats.s_sub @ unitary,
            operators=mats.operators,
        )
        remixed, _ = solve_gevp(mixed)
        assert np.allclose(np.sort(remixed), np.sort(reference), atol=1e-9)


def test_band_energies_koopmans(free_fermion):
    qham = jordan_wigner(free_fermion)
    wf = fci_ground(free_fermion, qubit_ham=qham)
    occupied_eps = sorted(
        free_fermion.one_body[(i, i)].real for i in free_fermion.occupied_indices()
    )
    virtual_eps = sorted(
        free_fermion.one_body[(i, i)].real for i in free_fermion.virtual_indices()
    )
    val_mats = qse_matrices(wf, qham, valence_operators(free_fermion))
    val_eigs, _ = solve_gevp(val_mats)
    valence = band_energies(wf.energy, val_eigs, "valence")
    assert np.allclose(valence, occupied_eps, atol=1e-10)

    cond_mats = qse_matrices(wf, qham, conduction_operators(free_fermion))
    cond_eigs, _ = solve_gevp(cond_mats)
    conduction = band_energies(wf.energy, cond_eigs, "conduction")
    assert np.allclose(conduction, virtual_eps, atol=1e-10)


def test_band_energies_constant_hamiltonian():
    ham = constant_only(1.25, n_spin_orbitals=4, n_electrons=2)
    qham = jordan_wigner(ham)
    wf = fci_ground(ham, qubit_ham=qham)
    for builder, kind in ((valence_operators, "valence"), (conduction_operators, "conduction")):
        mats = qse_matrices(wf, qham, builder(ham))
        eigvals, _ = solve_gevp(mats)
        assert np.allclose(band_energies(wf.energy, eigvals, kind), 0.0, atol=1e-12)


def test_band_kind_validation():
    with pytest.raises(ConfigError):
        band_energies(0.0, np.array([1.0]), "optical")


def test_mixed_operator_kinds_rejected(hubbard):
    qham = jordan_wigner(hubbard)
    wf = fci_ground(hubbard, qubit_ham=qham)
    ops = valence_operators(hubbard)[:1] + conduction_operators(hubbard)[:1]
    with pytest.raises(ConfigError, match="mix"):
        qse_matrices(wf, qham, ops)


def test_assemble_band_structure():
    k0 = KPoint("L", (0.5, 0.5, 0.5), 0.0)
    k1 = KPoint("Gamma", (0.0, 0.0, 0.0), 1.0)
    bands = assemble_band_structure(
        [
            (k1, [-0.4, -0.5], [0.3, 0.6]),
            (k0, [-0.3, -0.6], [0.2, 0.7]),
        ]
    )
    assert [p.k_point.label for p in bands.points] == ["L", "Gamma"]
    assert bands.points[0].valence == (-0.6, -0.3)
    assert bands.gap == pytest.approx(0.2 - (-0.3))
    assert bands.gap_valid


def test_band_csv_round_numbers(tmp_path):
    from qsciband.qse import write_band_csv

    k0 = KPoint("L", (0.5, 0.5, 0.5), 0.0)
    bands = assemble_band_structure([(k0, [-0.125], [0.25])])
    path = tmp_path / "bands.csv"
    write_band_csv(bands, path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "k_label,path_distance,band_type,band_index,energy_hartree"
    assert rows[1] == "L,0.0,valence,0,-0.125"
    assert rows[2] == "L,0.0,conduction,0,0.25"
