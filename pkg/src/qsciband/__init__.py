"""Sampling-selected CI ground states with subspace-expansion quasiparticle
bands, simulated exactly on a classical statevector engine."""

__version__ = "0.1.0"

from .hamiltonian import (
    FermionHamiltonian,
    KPoint,
    SpinOrbital,
    check_momentum_conservation,
    hf_reference_energy,
    load_hamiltonian,
    save_hamiltonian,
)
from .pauli import (
    PauliTerm,
    QubitHamiltonian,
    apply_pauli_term,
    build_cost_operator,
    compile_operator,
    default_qubit_order,
    hf_determinant,
    hf_sector,
    jordan_wigner,
    number_operator,
    sz_operator,
)
from .statevector import (
    AnsatzCircuit,
    AnsatzSpec,
    SampleDistribution,
    build_ansatz,
    expectation,
    sample,
    simulate,
    top_r_amplitudes,
)
from .qsci import (
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
from .qse import (
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
from .vqe import OptimizationTrace, VqeConfig, VqeProblem, optimize
from .diagnostics import (
    DivergenceReport,
    ExcitationHistogram,
    excitation_level,
    histogram,
    js_divergence,
    kl_divergence,
)
