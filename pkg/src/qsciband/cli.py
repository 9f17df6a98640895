"""End-to-end pipeline driver.

One declarative JSON config describes a run; every k-point flows through
load -> (VQE -> sampling -> subspace CI | exact sector solve) -> subspace
expansion -> bands -> diagnostics, with all seeds and thresholds recorded
in a manifest.  k-points are mutually independent; a failure in one is
recorded and the others proceed.  Outputs are deterministic byte-for-byte
given the same config (no timestamps, sorted keys).
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import (
    amplitude_weights,
    bucket_distribution,
    histogram,
    js_divergence,
    uniform_weights,
)
from .errors import ConfigError
from .hamiltonian import check_momentum_conservation, hf_reference_energy, load_hamiltonian
from .pauli import compile_operator, default_qubit_order, hf_determinant, hf_sector, jordan_wigner
from .qsci import (
    SubspaceWavefunction,
    fci_ground,
    ideal_selection,
    post_select,
    select_subspace,
    solve_subspace,
)
from .qse import (
    assemble_band_structure,
    band_energies,
    conduction_operators,
    qse_matrices,
    solve_gevp,
    valence_operators,
    write_band_csv,
    write_band_json,
)
from .statevector import AnsatzSpec, SampleDistribution, build_ansatz, sample, simulate
from .vqe import VqeConfig, VqeProblem, optimize

BAND_AGREEMENT_TOLERANCE = 0.010  # Hartree; declared proxy for "good agreement"


@dataclass(frozen=True)
class SamplingConfig:
    kind: str = "ideal"  # "ideal" | "shots"
    n_shots: int = 10_000
    seed: int = 0
    depolarize_p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("ideal", "shots"):
            raise ConfigError(f"sampling.kind must be 'ideal' or 'shots', not {self.kind!r}")
        if self.n_shots <= 0:
            raise ConfigError("sampling.n_shots must be positive")
        if not 0.0 <= self.depolarize_p <= 1.0:
            raise ConfigError("sampling.depolarize_p must lie in [0, 1]")


@dataclass(frozen=True)
class VqeSettings:
    depth: int = 3
    penalty_number: float = 0.5
    penalty_spin: float = 0.2
    max_iterations: int = 400
    snapshot_iteration: int = 400
    seed: int = 0
    gradient_tolerance: float = 1e-8

    def __post_init__(self):
        if self.snapshot_iteration > self.max_iterations:
            raise ConfigError("vqe.snapshot_iteration must not exceed vqe.max_iterations")


@dataclass(frozen=True)
class RunConfig:
    hamiltonians: tuple[str, ...]
    mode: str = "qsci"  # "qsci" | "fci-reference"
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    post_select: bool = True
    r: int = 50
    vqe: VqeSettings = field(default_factory=VqeSettings)
    qse_epsilon: float = 1e-8
    fci_dense_cutoff: int = 10_000
    fci_max_dimension: int = 2_000_000
    diagnostics_fci_reference: bool = False
    output_dir: str = "run"

    def __post_init__(self):
        if self.mode not in ("qsci", "fci-reference"):
            raise ConfigError(f"mode must be 'qsci' or 'fci-reference', not {self.mode!r}")
        if not self.hamiltonians:
            raise ConfigError("config needs at least one Hamiltonian file")
        if self.r < 1:
            raise ConfigError("r must be >= 1")
        missing = [p for p in self.hamiltonians if not Path(p).is_file()]
        if missing:
            raise ConfigError(f"missing Hamiltonian files: {missing}")

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        known = {
            "hamiltonians",
            "mode",
            "sampling",
            "post_select",
            "r",
            "vqe",
            "qse_epsilon",
            "fci_dense_cutoff",
            "fci_max_dimension",
            "diagnostics_fci_reference",
            "output_dir",
        }
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        doc = dict(doc)
        try:
            if "sampling" in doc:
                doc["sampling"] = SamplingConfig(**doc["sampling"])
            if "vqe" in doc:
                doc["vqe"] = VqeSettings(**doc["vqe"])
            doc["hamiltonians"] = tuple(doc.get("hamiltonians", ()))
            return cls(**doc)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(doc)


def _write_text(path: Path, text: str) -> None:
    """Atomic write: files appear complete or not at all."""
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _sha256(path) -> str:
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


def _qse_block(wavefunction, compiled, operators, kind, epsilon):
    mats = qse_matrices(wavefunction, compiled, operators)
    eigvals, n_discarded = solve_gevp(mats, epsilon)
    energies = band_energies(wavefunction.energy, eigvals, kind)
    return {
        "kind": kind,
        "eigenvalues": [float(e) for e in eigvals],
        "band_energies": energies,
        "n_discarded_overlap_modes": n_discarded,
    }


def _diagnostics_doc(weights, hf_det, sector, n_qubits, fci_weights=None):
    empirical = histogram(weights, hf_det, sector)
    uniform = histogram(uniform_weights(n_qubits), hf_det, sector)
    doc = {
        "histogram": json.loads(empirical.to_json()),
        "uniform_histogram": json.loads(uniform.to_json()),
        "js_raw_vs_uniform": js_divergence(
            weights if not isinstance(weights, SampleDistribution) else weights.frequencies(),
            uniform_weights(n_qubits),
        ),
        "js_bucketed_vs_uniform": js_divergence(
            bucket_distribution(empirical), bucket_distribution(uniform)
        ),
    }
    if fci_weights is not None:
        fci_hist = histogram(fci_weights, hf_det, sector)
        raw = weights.frequencies() if isinstance(weights, SampleDistribution) else weights
        doc["fci_histogram"] = json.loads(fci_hist.to_json())
        doc["js_raw_vs_fci"] = js_divergence(raw, fci_weights)
        doc["js_bucketed_vs_fci"] = js_divergence(
            bucket_distribution(empirical), bucket_distribution(fci_hist)
        )
    return doc


def _run_one_k(config: RunConfig, ham_path: str, k_dir: Path) -> dict:
    """Full pipeline for one Hamiltonian file; returns the manifest entry."""
    ham = load_hamiltonian(ham_path)
    momentum = check_momentum_conservation(ham)
    order = default_qubit_order(ham.orbitals)
    qham = jordan_wigner(ham, order)
    compiled = compile_operator(qham)
    sector = hf_sector(ham, order)
    hf_det = hf_determinant(ham.orbitals, order)
    hf_energy = hf_reference_energy(ham)
    n_qubits = ham.n_spin_orbitals

    entry: dict = {
        "k_label": ham.k_point.label,
        "hf_energy": hf_energy,
        "momentum_ok": momentum.ok,
        "n_pauli_terms": len(qham.terms),
    }

    if config.mode == "fci-reference":
        wavefunction = fci_ground(
            ham,
            qubit_ham=compiled,
            order=order,
            dense_cutoff=config.fci_dense_cutoff,
            max_dimension=config.fci_max_dimension,
        )
        diag_weights = {d: abs(c) ** 2 for d, c in wavefunction.as_dict().items()}
        entry["sector_dimension"] = wavefunction.selection.size
    else:
        spec = AnsatzSpec(n_qubits=n_qubits, depth=config.vqe.depth)
        circuit = build_ansatz(spec, reference=hf_det)
        problem = VqeProblem(
            circuit,
            qham,
            penalty_number=config.vqe.penalty_number,
            number_target=ham.n_electrons,
            penalty_spin=config.vqe.penalty_spin,
            orbitals=ham.orbitals,
            order=order,
        )
        vqe_config = VqeConfig(
            ansatz=spec,
            penalty_number=config.vqe.penalty_number,
            number_target=ham.n_electrons,
            penalty_spin=config.vqe.penalty_spin,
            max_iterations=config.vqe.max_iterations,
            snapshot_iterations=(0, config.vqe.snapshot_iteration),
            seed=config.vqe.seed,
            gradient_tolerance=config.vqe.gradient_tolerance,
        )
        trace = optimize(problem, vqe_config)
        trace.write_csv(k_dir / "vqe_trace.csv")
        trace.write_snapshots_json(k_dir / "vqe_snapshots.json")
        entry["vqe"] = {
            "iterations_run": trace.n_iterations,
            "converged": trace.converged,
            "final_cost": trace.costs[-1],
            "final_bare_energy": trace.bare_energies[-1],
        }
        params = trace.snapshot(config.vqe.snapshot_iteration)
        state = simulate(circuit, params)

        if config.sampling.kind == "shots":
            dist = sample(
                state,
                config.sampling.n_shots,
                seed=config.sampling.seed,
                depolarize_p=config.sampling.depolarize_p,
            )
            _write_text(k_dir / "samples.json", dist.to_json() + "\n")
            retained = dist
            if config.post_select:
                retained = post_select(dist, sector)
                entry["post_selection"] = {
                    "raw_shots": dist.total_shots,
                    "retained_shots": retained.total_shots,
                }
            selection = select_subspace(retained, config.r, post_selected=config.post_select)
            diag_weights = dist
        else:
            selection = ideal_selection(
                state, config.r, sector=sector if config.post_select else None
            )
            diag_weights = amplitude_weights(state)
        wavefunction = solve_subspace(selection, compiled)
        entry["selection"] = {
            "provenance": selection.provenance,
            "size": selection.size,
            "post_selected": selection.post_selected,
            "support_limited": selection.support_limited,
        }

    _write_text(k_dir / "qsci_state.json", wavefunction.to_json(n_qubits) + "\n")
    entry["ground_energy"] = wavefunction.energy

    valence = _qse_block(
        wavefunction, compiled, valence_operators(ham, order), "valence", config.qse_epsilon
    )
    conduction = _qse_block(
        wavefunction, compiled, conduction_operators(ham, order), "conduction", config.qse_epsilon
    )
    qse_doc = {
        "k_point": {
            "label": ham.k_point.label,
            "frac": list(ham.k_point.frac),
            "path_distance": ham.k_point.path_distance,
        },
        "reference_energy": wavefunction.energy,
        "epsilon": config.qse_epsilon,
        "valence": valence,
        "conduction": conduction,
    }
    _write_text(k_dir / "qse.json", _dump(qse_doc))
    entry["bands"] = {
        "valence": valence["band_energies"],
        "conduction": conduction["band_energies"],
    }

    fci_weights = None
    if config.diagnostics_fci_reference and config.mode != "fci-reference":
        reference = fci_ground(
            ham,
            qubit_ham=compiled,
            order=order,
            dense_cutoff=config.fci_dense_cutoff,
            max_dimension=config.fci_max_dimension,
        )
        fci_weights = {d: abs(c) ** 2 for d, c in reference.as_dict().items()}
        entry["fci_energy"] = reference.energy
    _write_text(
        k_dir / "diagnostics.json",
        _dump(_diagnostics_doc(diag_weights, hf_det, sector, n_qubits, fci_weights)),
    )
    return entry


def run_pipeline(config: RunConfig) -> int:
    """Execute every k-point; returns the process exit code (0/2)."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "package_version": __version__,
        "config": _config_doc(config),
        "inputs": {},
        "results": {},
        "thresholds": {
            "hermiticity_atol": 1e-10,
            "coefficient_cutoff": 1e-12,
            "qse_epsilon": config.qse_epsilon,
            "band_agreement_tolerance_hartree": BAND_AGREEMENT_TOLERANCE,
        },
    }
    per_k_bands = []
    any_failed = False
    for ham_path in config.hamiltonians:
        ham_label = None
        try:
            ham = load_hamiltonian(ham_path)
            ham_label = ham.k_point.label
        except Exception as exc:  # recorded, other k-points proceed
            manifest["results"][str(ham_path)] = {"status": f"error: {exc}"}
            any_failed = True
            continue
        manifest["inputs"][ham_label] = {
            "path": str(ham_path),
            "sha256": _sha256(ham_path),
        }
        k_dir = out / ham_label
        k_dir.mkdir(parents=True, exist_ok=True)
        try:
            entry = _run_one_k(config, ham_path, k_dir)
            entry["status"] = "ok"
            manifest["results"][ham_label] = entry
            per_k_bands.append(
                (ham.k_point, entry["bands"]["valence"], entry["bands"]["conduction"])
            )
        except Exception as exc:
            manifest["results"][ham_label] = {"status": f"error: {exc}"}
            any_failed = True
    if per_k_bands:
        bands = assemble_band_structure(per_k_bands)
        write_band_csv(bands, out / "bands.csv")
        write_band_json(bands, out / "bands.json")
        manifest["band_gap_hartree"] = bands.gap
    _write_text(out / "manifest.json", _dump(manifest))
    return 2 if any_failed else 0


def _config_doc(config: RunConfig) -> dict:
    doc = asdict(config)
    doc["hamiltonians"] = [str(p) for p in config.hamiltonians]
    return doc


def compare_runs(dir_a, dir_b) -> dict:
    """Per-k energy/band deltas and sampling divergences between two runs."""
    a, b = Path(dir_a), Path(dir_b)
    manifest_a = json.loads((a / "manifest.json").read_text())
    manifest_b = json.loads((b / "manifest.json").read_text())
    labels_a = {k for k, v in manifest_a["results"].items() if v.get("status") == "ok"}
    labels_b = {k for k, v in manifest_b["results"].items() if v.get("status") == "ok"}
    report: dict = {"per_k": {}, "warnings": []}
    for label in sorted(labels_a ^ labels_b):
        report["warnings"].append(f"k-point {label} present in only one run")
    for label in sorted(labels_a & labels_b):
        ra = manifest_a["results"][label]
        rb = manifest_b["results"][label]
        entry = {
            "energy_delta": ra["ground_energy"] - rb["ground_energy"],
        }
        for kind in ("valence", "conduction"):
            ea = ra["bands"][kind]
            eb = rb["bands"][kind]
            n = min(len(ea), len(eb))
            entry[f"{kind}_deltas"] = [ea[i] - eb[i] for i in range(n)]
        sample_a = a / label / "samples.json"
        sample_b = b / label / "samples.json"
        if sample_a.is_file() and sample_b.is_file():
            da = SampleDistribution.from_json(sample_a.read_text())
            db = SampleDistribution.from_json(sample_b.read_text())
            entry["js_raw"] = js_divergence(da.frequencies(), db.frequencies())
        report["per_k"][label] = entry
    return report


def _add_common_qsci_args(parser):
    parser.add_argument("--ham", required=True, help="Hamiltonian JSON file")
    parser.add_argument("--out", required=True, help="output file or directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsciband",
        description="selected-CI ground states and subspace-expansion quasiparticle bands",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load Hamiltonian files and print a validation report")
    p.add_argument("paths", nargs="+")

    p = sub.add_parser("run", help="run the full pipeline from a JSON config")
    p.add_argument("--config", required=True)

    p = sub.add_parser("compare", help="diff two pipeline runs")
    p.add_argument("--run-a", required=True)
    p.add_argument("--run-b", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("vqe", help="optimize the ansatz for one Hamiltonian")
    _add_common_qsci_args(p)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--iterations", type=int, default=400)
    p.add_argument("--snapshot", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--penalty-number", type=float, default=0.5)
    p.add_argument("--penalty-spin", type=float, default=0.2)

    p = sub.add_parser("sample", help="draw measurement samples from a VQE snapshot")
    _add_common_qsci_args(p)
    p.add_argument("--snapshots", required=True, help="vqe_snapshots.json")
    p.add_argument("--iteration", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--n-shots", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depolarize-p", type=float, default=0.0)

    p = sub.add_parser("qsci", help="selected-CI ground state from samples or a snapshot")
    _add_common_qsci_args(p)
    p.add_argument("--samples", default=None, help="samples.json (shot mode)")
    p.add_argument("--ideal", action="store_true", help="largest-amplitude selection")
    p.add_argument("--snapshots", default=None)
    p.add_argument("--iteration", type=int, default=None)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--r", type=int, default=50)
    p.add_argument("--no-post-select", action="store_true")

    p = sub.add_parser("qse", help="quasiparticle energies on a CI state")
    _add_common_qsci_args(p)
    p.add_argument("--state", required=True, help="qsci_state.json")
    p.add_argument("--epsilon", type=float, default=1e-8)

    p = sub.add_parser("band", help="assemble a band structure from qse.json files")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-json", required=True)

    p = sub.add_parser("diag", help="excitation histogram and divergences for samples")
    _add_common_qsci_args(p)
    p.add_argument("--samples", required=True)
    p.add_argument("--state", default=None, help="optional reference qsci_state.json")

    p = sub.add_parser("fci", help="exact sector ground state (reference oracle)")
    _add_common_qsci_args(p)
    p.add_argument("--dense-cutoff", type=int, default=10_000)
    p.add_argument("--max-dimension", type=int, default=2_000_000)

    return parser


def _load_snapshot_state(ham, snapshots_path, iteration, depth):
    order = default_qubit_order(ham.orbitals)
    doc = json.loads(Path(snapshots_path).read_text())
    snaps = {int(k): np.asarray(v, dtype=np.float64) for k, v in doc["snapshots"].items()}
    if iteration in snaps:
        params = snaps[iteration]
    else:
        last = max(snaps)
        if iteration >= doc.get("n_iterations", last):
            params = snaps[last]
        else:
            raise ConfigError(f"no snapshot at iteration {iteration} in {snapshots_path}")
    spec = AnsatzSpec(n_qubits=ham.n_spin_orbitals, depth=depth)
    circuit = build_ansatz(spec, reference=hf_determinant(ham.orbitals, order))
    return simulate(circuit, params)


def _cmd_validate(args) -> int:
    reports = {}
    failed = False
    for path in args.paths:
        try:
            ham = load_hamiltonian(path)
            momentum = check_momentum_conservation(ham)
            reports[str(path)] = {
                "valid": True,
                "k_label": ham.k_point.label,
                "n_spin_orbitals": ham.n_spin_orbitals,
                "n_electrons": ham.n_electrons,
                "n_one_body": len(ham.one_body),
                "n_two_body": len(ham.two_body),
                "hf_energy": hf_reference_energy(ham),
                "momentum_ok": momentum.ok,
                "momentum_violations": len(momentum.violations),
            }
        except Exception as exc:
            reports[str(path)] = {"valid": False, "error": str(exc)}
            failed = True
    print(json.dumps(reports, indent=1, sort_keys=True))
    return 1 if failed else 0


def _cmd_run(args) -> int:
    config = RunConfig.from_json_file(args.config)
    return run_pipeline(config)


def _cmd_compare(args) -> int:
    report = compare_runs(args.run_a, args.run_b)
    text = _dump(report)
    if args.out:
        _write_text(Path(args.out), text)
    else:
        print(text, end="")
    return 0


def _cmd_vqe(args) -> int:
    ham = load_hamiltonian(args.ham)
    order = default_qubit_order(ham.orbitals)
    spec = AnsatzSpec(n_qubits=ham.n_spin_orbitals, depth=args.depth)
    circuit = build_ansatz(spec, reference=hf_determinant(ham.orbitals, order))
    problem = VqeProblem(
        circuit,
        jordan_wigner(ham, order),
        penalty_number=args.penalty_number,
        number_target=ham.n_electrons,
        penalty_spin=args.penalty_spin,
        orbitals=ham.orbitals,
        order=order,
    )
    snapshot = args.snapshot if args.snapshot is not None else args.iterations
    config = VqeConfig(
        ansatz=spec,
        penalty_number=args.penalty_number,
        number_target=ham.n_electrons,
        penalty_spin=args.penalty_spin,
        max_iterations=args.iterations,
        snapshot_iterations=(0, snapshot),
        seed=args.seed,
    )
    trace = optimize(problem, config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace.write_csv(out / "vqe_trace.csv")
    trace.write_snapshots_json(out / "vqe_snapshots.json")
    print(f"iterations={trace.n_iterations} final_bare={trace.bare_energies[-1]:.10f}")
    return 0


def _cmd_sample(args) -> int:
    ham = load_hamiltonian(args.ham)
    state = _load_snapshot_state(ham, args.snapshots, args.iteration, args.depth)
    dist = sample(state, args.n_shots, seed=args.seed, depolarize_p=args.depolarize_p)
    _write_text(Path(args.out), dist.to_json() + "\n")
    return 0


def _cmd_qsci(args) -> int:
    ham = load_hamiltonian(args.ham)
    order = default_qubit_order(ham.orbitals)
    compiled = compile_operator(jordan_wigner(ham, order))
    sector = hf_sector(ham, order)
    do_post_select = not args.no_post_select
    if args.ideal:
        if args.snapshots is None or args.iteration is None:
            raise ConfigError("--ideal requires --snapshots and --iteration")
        state = _load_snapshot_state(ham, args.snapshots, args.iteration, args.depth)
        selection = ideal_selection(state, args.r, sector=sector if do_post_select else None)
    else:
        if args.samples is None:
            raise ConfigError("qsci needs --samples or --ideal")
        dist = SampleDistribution.from_json(Path(args.samples).read_text())
        if do_post_select:
            dist = post_select(dist, sector)
        selection = select_subspace(dist, args.r, post_selected=do_post_select)
    wavefunction = solve_subspace(selection, compiled)
    _write_text(Path(args.out), wavefunction.to_json(ham.n_spin_orbitals) + "\n")
    print(f"selection_size={selection.size} energy={wavefunction.energy:.10f}")
    return 0


def _cmd_qse(args) -> int:
    ham = load_hamiltonian(args.ham)
    order = default_qubit_order(ham.orbitals)
    compiled = compile_operator(jordan_wigner(ham, order))
    wavefunction = SubspaceWavefunction.from_json(Path(args.state).read_text())
    doc = {
        "k_point": {
            "label": ham.k_point.label,
            "frac": list(ham.k_point.frac),
            "path_distance": ham.k_point.path_distance,
        },
        "reference_energy": wavefunction.energy,
        "epsilon": args.epsilon,
        "valence": _qse_block(
            wavefunction, compiled, valence_operators(ham, order), "valence", args.epsilon
        ),
        "conduction": _qse_block(
            wavefunction, compiled, conduction_operators(ham, order), "conduction", args.epsilon
        ),
    }
    _write_text(Path(args.out), _dump(doc))
    return 0


def _cmd_band(args) -> int:
    from .hamiltonian import KPoint

    per_k = []
    for path in args.inputs:
        doc = json.loads(Path(path).read_text())
        kp = KPoint(
            label=doc["k_point"]["label"],
            frac=tuple(doc["k_point"]["frac"]),
            path_distance=doc["k_point"]["path_distance"],
        )
        per_k.append((kp, doc["valence"]["band_energies"], doc["conduction"]["band_energies"]))
    bands = assemble_band_structure(per_k)
    write_band_csv(bands, args.out_csv)
    write_band_json(bands, args.out_json)
    print(f"gap={bands.gap:.10f} valid={bands.gap_valid}")
    return 0


def _cmd_diag(args) -> int:
    ham = load_hamiltonian(args.ham)
    order = default_qubit_order(ham.orbitals)
    sector = hf_sector(ham, order)
    hf_det = hf_determinant(ham.orbitals, order)
    dist = SampleDistribution.from_json(Path(args.samples).read_text())
    fci_weights = None
    if args.state:
        reference = SubspaceWavefunction.from_json(Path(args.state).read_text())
        fci_weights = {d: abs(c) ** 2 for d, c in reference.as_dict().items()}
    doc = _diagnostics_doc(dist, hf_det, sector, ham.n_spin_orbitals, fci_weights)
    _write_text(Path(args.out), _dump(doc))
    return 0


def _cmd_fci(args) -> int:
    ham = load_hamiltonian(args.ham)
    wavefunction = fci_ground(
        ham, dense_cutoff=args.dense_cutoff, max_dimension=args.max_dimension
    )
    _write_text(Path(args.out), wavefunction.to_json(ham.n_spin_orbitals) + "\n")
    print(f"energy={wavefunction.energy:.10f} dim={wavefunction.selection.size}")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "run": _cmd_run,
    "compare": _cmd_compare,
    "vqe": _cmd_vqe,
    "sample": _cmd_sample,
    "qsci": _cmd_qsci,
    "qse": _cmd_qse,
    "band": _cmd_band,
    "diag": _cmd_diag,
    "fci": _cmd_fci,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
