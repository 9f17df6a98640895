#!/usr/bin/env python3
"""Write the small bundled Hamiltonian fixtures (Hubbard dimer, free fermions).

The Si fixtures are produced by the exporter package; these two are hand
constructed so the core test suite has analytic references.
"""
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from qsciband.hamiltonian import KPoint, SpinOrbital, build_hamiltonian, save_hamiltonian

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def hubbard_dimer(t: float = 1.0, u: float = 4.0):
    """Two-site Hubbard model at half filling, in the bonding/antibonding
    (mean-field orbital) basis.

    Spatial orbital 0 = bonding (energy -t, HF occupied), 1 = antibonding
    (+t).  The on-site repulsion U sum_i n_i_up n_i_down transforms to
    monomials c+_{Pa} c+_{Qb} c_{Rb} c_{Sa} with coefficient U/2 whenever
    P+Q+R+S is even; exact singlet ground energy is U/2 - sqrt(U^2/4 + 4t^2).
    """
    orbitals = [
        SpinOrbital(0, 0, "a", True),
        SpinOrbital(1, 0, "b", True),
        SpinOrbital(2, 1, "a", False),
        SpinOrbital(3, 1, "b", False),
    ]
    one_body = {(0, 0): -t, (1, 1): -t, (2, 2): t, (3, 3): t}
    two_body = {}
    for p in range(2):
        for q in range(2):
            for r in range(2):
                for s in range(2):
                    if (p + q + r + s) % 2 == 0:
                        two_body[(2 * p, 2 * q + 1, 2 * r + 1, 2 * s)] = u / 2
    return build_hamiltonian(
        n_spin_orbitals=4,
        n_electrons=2,
        k_point=KPoint("Gamma", (0.0, 0.0, 0.0), 0.0),
        constant=0.0,
        one_body=one_body,
        two_body=two_body,
        orbitals=orbitals,
    )


def free_fermions(energies=(-1.5, -0.5, 0.7, 1.3), constant: float = 0.3, n_occupied: int = 2):
    """Diagonal one-body Hamiltonian; Koopmans identities are exact."""
    orbitals = []
    one_body = {}
    for spatial, eps in enumerate(energies):
        for spin_idx, spin in enumerate("ab"):
            idx = 2 * spatial + spin_idx
            orbitals.append(SpinOrbital(idx, spatial, spin, hf_occupied=spatial < n_occupied))
            one_body[(idx, idx)] = eps
    return build_hamiltonian(
        n_spin_orbitals=2 * len(energies),
        n_electrons=2 * n_occupied,
        k_point=KPoint("Gamma", (0.0, 0.0, 0.0), 0.0),
        constant=constant,
        one_body=one_body,
        two_body={},
        orbitals=orbitals,
    )


def main():
    FIXTURES.mkdir(exist_ok=True)
    save_hamiltonian(hubbard_dimer(), FIXTURES / "hubbard_dimer.json")
    save_hamiltonian(free_fermions(), FIXTURES / "free_fermion.json")
    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
