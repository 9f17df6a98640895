"""Checks tied to the committed 16-qubit crystal fixtures.

The slow sector-exact solves live in test_acceptance; these cover fixture
integrity and the frozen exact-reference band values.
"""
import json
from pathlib import Path

import numpy as np
import pytest

from qsciband.hamiltonian import check_momentum_conservation, hf_reference_energy
from qsciband.pauli import compile_operator, hf_determinant, hf_sector, jordan_wigner
from qsciband.qsci import fci_ground
from qsciband.qse import (
    band_energies,
    conduction_operators,
    qse_matrices,
    solve_gevp,
    valence_operators,
)

GOLDEN = Path(__file__).resolve().parent / "golden" / "si_bands_fci.json"


def test_fixture_shape_and_momentum(si_hamiltonians):
    for ham in si_hamiltonians:
        assert ham.n_spin_orbitals == 16
        assert ham.n_electrons == 8
        assert check_momentum_conservation(ham).ok
        sector = hf_sector(ham)
        assert sector.dimension() == 4900
        assert sector.contains(hf_determinant(ham.orbitals))


def test_hf_energy_via_pauli_action(si_hamiltonians):
    # cross-module consistency on the production fixtures
    import numpy as np

    for ham in si_hamiltonians:
        compiled = compile_operator(jordan_wigner(ham))
        state = np.zeros(1 << 16, dtype=complex)
        state[hf_determinant(ham.orbitals)] = 1.0
        assert compiled.expectation(state) == pytest.approx(
            hf_reference_energy(ham), abs=1e-10
        )


@pytest.mark.slow
def test_exact_reference_bands_match_golden(si_hamiltonians):
    golden = json.loads(GOLDEN.read_text())
    for ham in si_hamiltonians:
        label = ham.k_point.label
        compiled = compile_operator(jordan_wigner(ham))
        wavefunction = fci_ground(ham, qubit_ham=compiled)
        reference = golden[label]
        assert wavefunction.energy == pytest.approx(reference["fci_energy"], abs=1e-8)
        vm = qse_matrices(wavefunction, compiled, valence_operators(ham))
        cm = qse_matrices(wavefunction, compiled, conduction_operators(ham))
        ve, _ = solve_gevp(vm)
        ce, _ = solve_gevp(cm)
        assert np.allclose(
            band_energies(wavefunction.energy, ve, "valence"), reference["valence"], atol=1e-8
        )
        assert np.allclose(
            band_energies(wavefunction.energy, ce, "conduction"),
            reference["conduction"],
            atol=1e-8,
        )
