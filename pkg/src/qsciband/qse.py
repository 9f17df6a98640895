"""Subspace expansion for quasiparticle bands.

Single-ladder excitation operators act on the compact CI ground state;
the resulting H^sub / S^sub generalized eigenvalue problem yields
electron-removal (valence) and electron-addition (conduction) energies.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .dets import parity_below
from .errors import ConfigError, ConsistencyError, OverlapTruncationError
from .hamiltonian import FermionHamiltonian, KPoint
from .pauli import CompiledPauliOp, QubitHamiltonian, compile_operator, default_qubit_order
from .qsci import SubspaceWavefunction

HERMITICITY_ATOL = 1e-10
PSD_ATOL = 1e-8
DEFAULT_EPSILON = 1e-8
DENSE_SUPPORT_LIMIT = 2000


@dataclass(frozen=True)
class ExcitationOperator:
    """A single ladder operator on one spin orbital (JW qubit attached)."""

    kind: str  # "annihilate" (valence) | "create" (conduction)
    spin_orbital: int
    qubit: int
    k_point: KPoint | None = None

    def __post_init__(self):
        if self.kind not in ("annihilate", "create"):
            raise ConfigError(f"unknown excitation kind {self.kind!r}")


def valence_operators(ham: FermionHamiltonian, order=None) -> list[ExcitationOperator]:
    """Annihilation on every HF-occupied spin orbital."""
    order = order if order is not None else default_qubit_order(ham.orbitals)
    return [
        ExcitationOperator("annihilate", o.index, order[o.index], ham.k_point)
        for o in ham.orbitals
        if o.hf_occupied
    ]


def conduction_operators(ham: FermionHamiltonian, order=None) -> list[ExcitationOperator]:
    """Creation on every HF-virtual spin orbital."""
    order = order if order is not None else default_qubit_order(ham.orbitals)
    return [
        ExcitationOperator("create", o.index, order[o.index], ham.k_point)
        for o in ham.orbitals
        if not o.hf_occupied
    ]


def apply_excitation(
    op: ExcitationOperator, wavefunction: SubspaceWavefunction | dict
) -> dict[int, complex]:
    """O|psi> as a determinant -> coefficient expansion.

    The fermionic sign is the parity of occupied qubits below the target,
    matching the JW string convention; annihilated components drop out.
    """
    amplitudes = (
        wavefunction.as_dict() if isinstance(wavefunction, SubspaceWavefunction) else wavefunction
    )
    bit = 1 << op.qubit
    out: dict[int, complex] = {}
    for det, coeff in amplitudes.items():
        occupied = bool(det & bit)
        if op.kind == "annihilate" and not occupied:
            continue
        if op.kind == "create" and occupied:
            continue
        out[det ^ bit] = coeff * parity_below(det, op.qubit)
    return out


@dataclass(frozen=True)
class QseMatrices:
    h_sub: np.ndarray  # <psi|Oi+ H Oj|psi>
    s_sub: np.ndarray  # <psi|Oi+ Oj|psi>
    operators: tuple[ExcitationOperator, ...]


def qse_matrices(
    wavefunction: SubspaceWavefunction,
    ham_q: QubitHamiltonian | CompiledPauliOp,
    operators: list[ExcitationOperator],
) -> QseMatrices:
    """Build H^sub and S^sub over the exactly materialized excited support.

    All operators must be of one kind; valence and conduction blocks are
    solved separately.
    """
    kinds = {op.kind for op in operators}
    if len(kinds) != 1:
        raise ConfigError("mix of annihilation and creation operators in one block")
    compiled = ham_q if isinstance(ham_q, CompiledPauliOp) else compile_operator(ham_q)

    expansions = [apply_excitation(op, wavefunction) for op in operators]
    support = sorted(set().union(*[set(e) for e in expansions]) or {0})
    index = {det: i for i, det in enumerate(support)}
    vecs = np.zeros((len(support), len(operators)), dtype=np.complex128)
    for j, expansion in enumerate(expansions):
        for det, coeff in expansion.items():
            vecs[index[det], j] = coeff

    s_sub = vecs.conj().T @ vecs
    dets = np.asarray(support, dtype=np.uint64)
    if len(support) <= DENSE_SUPPORT_LIMIT:
        h_support = compiled.matrix_over(dets)
        h_sub = vecs.conj().T @ h_support @ vecs
    else:
        h_support = compiled.sparse_over(dets)
        h_sub = vecs.conj().T @ (h_support @ vecs)

    for name, mat in (("H_sub", h_sub), ("S_sub", s_sub)):
        residual = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if residual > HERMITICITY_ATOL:
            raise ConsistencyError(f"{name} hermiticity residual {residual:.3e}")
    h_sub = 0.5 * (h_sub + h_sub.conj().T)
    s_sub = 0.5 * (s_sub + s_sub.conj().T)
    min_overlap = float(np.min(sla.eigvalsh(s_sub))) if s_sub.size else 0.0
    if min_overlap < -PSD_ATOL:
        raise ConsistencyError(f"S_sub has negative eigenvalue {min_overlap:.3e}")
    return QseMatrices(h_sub=h_sub, s_sub=s_sub, operators=tuple(operators))


def solve_gevp(
    matrices: QseMatrices, epsilon: float = DEFAULT_EPSILON
) -> tuple[np.ndarray, int]:
    """Canonical orthogonalization: drop overlap modes below epsilon, solve
    the ordinary Hermitian problem in the retained basis.

    Returns (ascending real eigenvalues, number of discarded modes).
    """
    overlap_vals, overlap_vecs = sla.eigh(matrices.s_sub)
    keep = overlap_vals >= epsilon
    n_discarded = int(np.sum(~keep))
    if not np.any(keep):
        raise OverlapTruncationError(
            f"all {len(overlap_vals)} overlap modes below epsilon = {epsilon}"
        )
    transform = overlap_vecs[:, keep] / np.sqrt(overlap_vals[keep])
    reduced = transform.conj().T @ matrices.h_sub @ transform
    residual = np.max(np.abs(reduced - reduced.conj().T))
    if residual > HERMITICITY_ATOL:
        raise ConsistencyError(f"reduced GEVP matrix residual {residual:.3e}")
    eigvals = sla.eigvalsh(0.5 * (reduced + reduced.conj().T))
    return np.sort(eigvals), n_discarded


def band_energies(e_ref: float, eigvals: np.ndarray, kind: str) -> list[float]:
    """Quasiparticle energies in the photoemission convention.

    valence:    eps = E_ref - E(N-1)   (sits below the gap)
    conduction: eps = E(N+1) - E_ref
    """
    if kind == "valence":
        values = [e_ref - float(e) for e in eigvals]
    elif kind == "conduction":
        values = [float(e) - e_ref for e in eigvals]
    else:
        raise ConfigError(f"unknown band kind {kind!r}")
    return sorted(values)


@dataclass(frozen=True)
class BandPoint:
    k_point: KPoint
    valence: tuple[float, ...]
    conduction: tuple[float, ...]


@dataclass(frozen=True)
class BandStructure:
    points: tuple[BandPoint, ...]
    gap: float
    gap_valid: bool

    def to_json_dict(self) -> dict:
        return {
            "gap_hartree": self.gap,
            "gap_valid": self.gap_valid,
            "points": [
                {
                    "k_label": p.k_point.label,
                    "frac": list(p.k_point.frac),
                    "path_distance": p.k_point.path_distance,
                    "valence": list(p.valence),
                    "conduction": list(p.conduction),
                }
                for p in self.points
            ],
        }


def assemble_band_structure(
    per_k: list[tuple[KPoint, list[float], list[float]]],
) -> BandStructure:
    """Order by path distance and compute the (indirect) gap."""
    if not per_k:
        raise ConfigError("band structure needs at least one k-point")
    points = tuple(
        BandPoint(
            k_point=kp,
            valence=tuple(sorted(valence)),
            conduction=tuple(sorted(conduction)),
        )
        for kp, valence, conduction in sorted(per_k, key=lambda item: item[0].path_distance)
    )
    vbm = max(max(p.valence) for p in points if p.valence)
    cbm = min(min(p.conduction) for p in points if p.conduction)
    gap = cbm - vbm
    return BandStructure(points=points, gap=gap, gap_valid=gap >= 0)


def write_band_csv(bands: BandStructure, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k_label", "path_distance", "band_type", "band_index", "energy_hartree"])
        for p in bands.points:
            for i, e in enumerate(p.valence):
                writer.writerow([p.k_point.label, repr(p.k_point.path_distance), "valence", i, repr(e)])
            for i, e in enumerate(p.conduction):
                writer.writerow([p.k_point.label, repr(p.k_point.path_distance), "conduction", i, repr(e)])


def write_band_json(bands: BandStructure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(bands.to_json_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")
