"""Per-k-point Hamiltonian JSON export.

The emitted files follow the consumer's documented schema exactly:

    { "n_spin_orbitals": int, "n_electrons": int,
      "k_point": {"label": str, "frac": [r,r,r], "path_distance": r},
      "constant": r,
      "orbitals": [{"index": int, "spatial": int, "spin": "a"|"b",
                    "hf_occupied": bool}],
      "one_body":  [[p, q, re, im]],
      "two_body":  [[p, q, r, s, re, im]] }

with energies in Hartree, integrals in the physicist c+_p c+_q c_r c_s
operator order, arrays sorted by index tuple, and |coefficient| < 1e-12
dropped.  Spin orbital index = 2 * spatial + (0 for alpha, 1 for beta).
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .basis import BASIS_SETS
from .lattice import ewald_energy, fcc_si_cell, kpath
from .pseudo import SI_GTH_PADE_Q4
from .scf import (
    ExportError,
    build_integrals,
    electronic_energy_from_mo,
    mo_integrals,
    rhf,
)

COEFF_CUTOFF = 1e-12
HF_CROSS_CHECK_ATOL = 1e-8


@dataclass(frozen=True)
class ExportSpec:
    lattice_constant_angstrom: float = 5.43
    k_labels: tuple[str, ...] = ("L", "Gamma", "X")
    basis: str = "szv1-bundled"
    pseudo: str = "gth-pade-q4-bundled"
    ke_cutoff: float = 60.0  # Hartree
    n_electrons: int = 8
    output_dir: str = "fixtures"

    def __post_init__(self):
        if self.lattice_constant_angstrom <= 0:
            raise ExportError("lattice constant must be positive")
        if not self.k_labels:
            raise ExportError("k-path must be non-empty")
        if self.basis not in BASIS_SETS:
            raise ExportError(f"unknown basis {self.basis!r}")

    def canonical_json(self) -> str:
        return json.dumps(
            {
                "lattice_constant_angstrom": self.lattice_constant_angstrom,
                "k_labels": list(self.k_labels),
                "basis": self.basis,
                "pseudo": self.pseudo,
                "ke_cutoff": self.ke_cutoff,
                "n_electrons": self.n_electrons,
            },
            sort_keys=True,
        )


def spin_orbital_tables(h_mo: np.ndarray, eri_mo: np.ndarray, n_occ_spatial: int):
    """Expand spatial MO integrals into spin-orbital monomial tables.

    one_body[(2P+s, 2Q+s)] = h_mo[P, Q]
    two_body[(2P+s, 2R+t, 2S+t, 2Q+s)] = (PQ|RS) / 2   (physicist order)
    """
    n_spatial = h_mo.shape[0]
    one_body = {}
    for p in range(n_spatial):
        for q in range(n_spatial):
            for spin in (0, 1):
                value = complex(h_mo[p, q])
                if abs(value) >= COEFF_CUTOFF:
                    one_body[(2 * p + spin, 2 * q + spin)] = value
    two_body = {}
    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s in range(n_spatial):
                    value = 0.5 * complex(eri_mo[p, q, r, s])
                    if abs(value) < COEFF_CUTOFF:
                        continue
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            create_1 = 2 * p + sigma
                            create_2 = 2 * r + tau
                            destroy_1 = 2 * s + tau
                            destroy_2 = 2 * q + sigma
                            if create_1 == create_2 or destroy_1 == destroy_2:
                                continue  # zero operator
                            two_body[(create_1, create_2, destroy_1, destroy_2)] = value
    orbitals = [
        {
            "index": 2 * p + spin,
            "spatial": p,
            "spin": "ab"[spin],
            "hf_occupied": p < n_occ_spatial,
        }
        for p in range(n_spatial)
        for spin in (0, 1)
    ]
    return one_body, two_body, orbitals


def hf_energy_from_tables(constant, one_body, two_body, occupied) -> float:
    """Slater-Condon <HF|H|HF> over the exported tables (cross-check mirror)."""
    energy = complex(constant)
    for p in occupied:
        energy += one_body.get((p, p), 0j)
    for p in occupied:
        for q in occupied:
            if p != q:
                energy += two_body.get((p, q, q, p), 0j)
                energy -= two_body.get((p, q, p, q), 0j)
    if abs(energy.imag) > 1e-10:
        raise ExportError(f"HF cross-check energy has imaginary part {energy.imag:.2e}")
    return energy.real


def hamiltonian_document(
    n_spin_orbitals, n_electrons, k_label, k_frac, path_distance, constant, one_body, two_body, orbitals
) -> dict:
    return {
        "n_spin_orbitals": n_spin_orbitals,
        "n_electrons": n_electrons,
        "k_point": {
            "label": k_label,
            "frac": [float(x) for x in k_frac],
            "path_distance": float(path_distance),
        },
        "constant": float(constant),
        "orbitals": orbitals,
        "one_body": [
            [p, q, c.real + 0.0, c.imag + 0.0] for (p, q), c in sorted(one_body.items())
        ],
        "two_body": [
            [p, q, r, s, c.real + 0.0, c.imag + 0.0]
            for (p, q, r, s), c in sorted(two_body.items())
        ],
    }


def write_document(doc: dict, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


@dataclass
class ExportedForK:
    label: str
    path: Path
    hf_energy: float
    mo_energies: list[float]
    mesh: tuple[int, int, int]
    scf_iterations: int


def export(spec: ExportSpec) -> dict:
    """Run HF per k-point and write one schema file each, plus a manifest."""
    cell = fcc_si_cell(spec.lattice_constant_angstrom)
    shells = BASIS_SETS[spec.basis]
    shells_per_atom = [(pos, shell) for pos in cell.positions for shell in shells]
    pseudo_atoms = [(pos, SI_GTH_PADE_Q4) for pos in cell.positions]
    e_nuc = ewald_energy(cell)
    n_occ = spec.n_electrons // 2

    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results: list[ExportedForK] = []
    for label, frac, distance in kpath(cell, spec.k_labels):
        try:
            integrals = build_integrals(cell, shells_per_atom, pseudo_atoms, frac, spec.ke_cutoff)
            scf = rhf(integrals, n_occ)
        except ExportError as exc:
            raise ExportError(f"k-point {label}: {exc}") from exc
        h_mo, eri_mo = mo_integrals(scf, integrals)
        cross = electronic_energy_from_mo(h_mo, eri_mo, n_occ)
        if abs(cross - scf.e_elec) > 1e-8:
            raise ExportError(
                f"k-point {label}: MO-basis energy {cross:.10f} disagrees with SCF {scf.e_elec:.10f}"
            )
        e_total = scf.e_elec + e_nuc

        one_body, two_body, orbitals = spin_orbital_tables(h_mo, eri_mo, n_occ)
        occupied = [o["index"] for o in orbitals if o["hf_occupied"]]
        check = hf_energy_from_tables(e_nuc, one_body, two_body, occupied)
        if abs(check - e_total) > HF_CROSS_CHECK_ATOL:
            raise ExportError(
                f"k-point {label}: exported tables give HF {check:.10f}, SCF total {e_total:.10f}"
            )

        doc = hamiltonian_document(
            n_spin_orbitals=2 * h_mo.shape[0],
            n_electrons=spec.n_electrons,
            k_label=label,
            k_frac=frac,
            path_distance=distance,
            constant=e_nuc,
            one_body=one_body,
            two_body=two_body,
            orbitals=orbitals,
        )
        path = out / f"si_{label}.json"
        write_document(doc, path)
        results.append(
            ExportedForK(
                label=label,
                path=path,
                hf_energy=e_total,
                mo_energies=[float(e) for e in scf.mo_energy],
                mesh=integrals.mesh,
                scf_iterations=scf.n_iterations,
            )
        )

    manifest = {
        "backend": {"name": "siexport", "version": __version__},
        "spec": json.loads(spec.canonical_json()),
        "spec_sha256": hashlib.sha256(spec.canonical_json().encode()).hexdigest(),
        "ewald_energy": e_nuc,
        "k_points": {
            r.label: {
                "file": r.path.name,
                "sha256": hashlib.sha256(r.path.read_bytes()).hexdigest(),
                "hf_energy": r.hf_energy,
                "mo_energies": r.mo_energies,
                "mesh": list(r.mesh),
                "scf_iterations": r.scf_iterations,
            }
            for r in results
        },
    }
    manifest_path = out / "exporter_manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return manifest


def hubbard_dimer_document(t: float = 1.0, u: float = 4.0) -> dict:
    """Backend-bypass fixture generator: the two-site Hubbard model at half
    filling in its bonding/antibonding basis, identical to the consumer's
    bundled reference file."""
    one_body = {(0, 0): complex(-t), (1, 1): complex(-t), (2, 2): complex(t), (3, 3): complex(t)}
    two_body = {}
    for p in range(2):
        for q in range(2):
            for r in range(2):
                for s in range(2):
                    if (p + q + r + s) % 2 == 0:
                        two_body[(2 * p, 2 * q + 1, 2 * r + 1, 2 * s)] = complex(u / 2)
    orbitals = [
        {"index": 0, "spatial": 0, "spin": "a", "hf_occupied": True},
        {"index": 1, "spatial": 0, "spin": "b", "hf_occupied": True},
        {"index": 2, "spatial": 1, "spin": "a", "hf_occupied": False},
        {"index": 3, "spatial": 1, "spin": "b", "hf_occupied": False},
    ]
    return hamiltonian_document(
        n_spin_orbitals=4,
        n_electrons=2,
        k_label="Gamma",
        k_frac=(0.0, 0.0, 0.0),
        path_distance=0.0,
        constant=0.0,
        one_body=one_body,
        two_body=two_body,
        orbitals=orbitals,
    )

