#!/usr/bin/env python3
"""Optimization-history experiment at one k-point (default L).

Tracks the selected-CI energy against the optimizer iteration for an
R-ladder, with and without post-selection, reported as differences from
the exact sector energy.  Writes a CSV; ~10 minutes on one core.
"""
import argparse
import csv
import pathlib
import sys

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from qsciband import load_hamiltonian, jordan_wigner, compile_operator, hf_reference_energy
from qsciband.pauli import hf_determinant, hf_sector
from qsciband.qsci import fci_ground, ideal_selection, solve_subspace
from qsciband.statevector import AnsatzSpec, build_ansatz, simulate
from qsciband.vqe import VqeConfig, VqeProblem, optimize


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ham", default=str(ROOT / "fixtures" / "si_L.json"))
    parser.add_argument("--out", default="runs/optimization_history.csv")
    parser.add_argument("--iterations", type=int, default=400)
    parser.add_argument("--stride", type=int, default=50)
    parser.add_argument("--r-ladder", type=int, nargs="+", default=[10, 30, 50])
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    ham = load_hamiltonian(args.ham)
    qham = jordan_wigner(ham)
    compiled = compile_operator(qham)
    sector = hf_sector(ham)
    e_hf = hf_reference_energy(ham)
    e_fci = fci_ground(ham, qubit_ham=compiled).energy
    print(f"HF {e_hf:.8f}  exact {e_fci:.8f}")

    spec = AnsatzSpec(n_qubits=ham.n_spin_orbitals, depth=3)
    circuit = build_ansatz(spec, reference=hf_determinant(ham.orbitals))
    problem = VqeProblem(
        circuit, qham, penalty_number=0.5, number_target=ham.n_electrons,
        penalty_spin=0.2, orbitals=ham.orbitals,
    )
    snapshots = tuple(range(0, args.iterations + 1, args.stride))
    config = VqeConfig(
        ansatz=spec, penalty_number=0.5, number_target=ham.n_electrons, penalty_spin=0.2,
        max_iterations=args.iterations, snapshot_iterations=snapshots, seed=args.seed,
    )
    print("optimizing ...")
    trace = optimize(problem, config)

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "vqe_bare_minus_exact", "post_selected", "r", "ci_minus_exact"])
        for iteration in snapshots:
            state = simulate(circuit, trace.snapshot(iteration))
            bare = trace.bare_energies[min(iteration, trace.n_iterations)]
            for post_selected in (False, True):
                for r in args.r_ladder:
                    selection = ideal_selection(state, r, sector=sector if post_selected else None)
                    wf = solve_subspace(selection, compiled)
                    writer.writerow(
                        [iteration, repr(bare - e_fci), post_selected, r, repr(wf.energy - e_fci)]
                    )
            print(f"iteration {iteration}: done")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
