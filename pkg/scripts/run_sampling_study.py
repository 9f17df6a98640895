#!/usr/bin/env python3
"""Excitation-level distributions and divergences under synthetic noise.

Samples a moderately optimized ansatz state at several depolarizing
strengths, buckets the outcomes by excitation level, and reports JS
divergences against the noiseless distribution, the exact-state
distribution and the uniform (fully depolarized) limit; ~10 minutes.
"""
import argparse
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from qsciband import load_hamiltonian, jordan_wigner, compile_operator
from qsciband.diagnostics import (
    amplitude_weights,
    bucket_distribution,
    histogram,
    js_divergence,
    uniform_weights,
)
from qsciband.pauli import hf_determinant, hf_sector
from qsciband.qsci import fci_ground
from qsciband.statevector import AnsatzSpec, build_ansatz, sample, simulate
from qsciband.vqe import VqeConfig, VqeProblem, optimize


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ham", default=str(ROOT / "fixtures" / "si_L.json"))
    parser.add_argument("--out", default="runs/sampling_study.json")
    parser.add_argument("--iterations", type=int, default=400)
    parser.add_argument("--n-shots", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--noise", type=float, nargs="+", default=[0.0, 0.1, 0.5, 1.0])
    args = parser.parse_args()

    ham = load_hamiltonian(args.ham)
    qham = jordan_wigner(ham)
    compiled = compile_operator(qham)
    sector = hf_sector(ham)
    hf_det = hf_determinant(ham.orbitals)
    n_qubits = ham.n_spin_orbitals

    spec = AnsatzSpec(n_qubits=n_qubits, depth=3)
    circuit = build_ansatz(spec, reference=hf_det)
    problem = VqeProblem(
        circuit, qham, penalty_number=0.5, number_target=ham.n_electrons,
        penalty_spin=0.2, orbitals=ham.orbitals,
    )
    config = VqeConfig(
        ansatz=spec, penalty_number=0.5, number_target=ham.n_electrons, penalty_spin=0.2,
        max_iterations=args.iterations, snapshot_iterations=(args.iterations,), seed=args.seed,
    )
    print("optimizing ...")
    trace = optimize(problem, config)
    state = simulate(circuit, trace.snapshot(args.iterations))

    noiseless = amplitude_weights(state)
    exact = fci_ground(ham, qubit_ham=compiled)
    exact_weights = {d: abs(c) ** 2 for d, c in exact.as_dict().items()}
    uniform = uniform_weights(n_qubits)

    doc = {
        "reference_histograms": {
            "noiseless_state": json.loads(histogram(noiseless, hf_det, sector).to_json()),
            "exact_state": json.loads(histogram(exact_weights, hf_det, sector).to_json()),
            "uniform": json.loads(histogram(uniform, hf_det, sector).to_json()),
        },
        "sampling": {},
    }
    buckets_noiseless = bucket_distribution(histogram(noiseless, hf_det, sector))
    for p in args.noise:
        dist = sample(state, args.n_shots, seed=args.seed, depolarize_p=p)
        hist = histogram(dist, hf_det, sector)
        entry = {
            "histogram": json.loads(hist.to_json()),
            "js_raw_vs_noiseless": js_divergence(dist.frequencies(), noiseless),
            "js_raw_vs_exact": js_divergence(dist.frequencies(), exact_weights),
            "js_raw_vs_uniform": js_divergence(dist.frequencies(), uniform),
            "js_bucketed_vs_noiseless": js_divergence(
                bucket_distribution(hist), buckets_noiseless
            ),
        }
        doc["sampling"][str(p)] = entry
        print(
            f"p={p}: JS(raw || noiseless) = {entry['js_raw_vs_noiseless']:.4f}, "
            f"JS(raw || uniform) = {entry['js_raw_vs_uniform']:.4f}"
        )
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=1, sort_keys=True))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
