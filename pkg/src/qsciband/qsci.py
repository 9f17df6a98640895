"""Sampling-selected CI: subspace selection, diagonalization and the exact
full-sector solver used as the validation oracle and band-reference input.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sps
import scipy.sparse.linalg as spsla

from .dets import Sector, det_to_bitstring, bitstring_to_det
from .errors import CapacityError, ConfigError, ConsistencyError, SelectionError
from .pauli import CompiledPauliOp, QubitHamiltonian, compile_operator, hf_sector, jordan_wigner
from .statevector import SampleDistribution, StateVector, top_r_amplitudes

HERMITICITY_ATOL = 1e-10
DENSE_LIMIT = 2000
DEGENERACY_ATOL = 1e-10


@dataclass(frozen=True)
class SubspaceSelection:
    """The ordered determinant set spanning the CI subspace."""

    determinants: tuple[int, ...]
    r_requested: int
    post_selected: bool
    provenance: str  # "shots" | "ideal" | "sector"

    def __post_init__(self):
        if len(set(self.determinants)) != len(self.determinants):
            raise SelectionError("selection contains duplicate determinants")
        if len(self.determinants) > self.r_requested:
            raise SelectionError("selection larger than requested R")

    @property
    def support_limited(self) -> bool:
        return len(self.determinants) < self.r_requested

    @property
    def size(self) -> int:
        return len(self.determinants)


@dataclass(frozen=True)
class SubspaceWavefunction:
    """Ground state of the subspace Hamiltonian (normalized)."""

    selection: SubspaceSelection
    coefficients: np.ndarray
    energy: float
    degenerate: bool = False

    def __post_init__(self):
        norm = np.linalg.norm(self.coefficients)
        if abs(norm - 1.0) > 1e-12:
            raise ConsistencyError(f"wavefunction norm deviates by {abs(norm-1):.2e}")

    def as_dict(self) -> dict[int, complex]:
        return {
            int(det): complex(c)
            for det, c in zip(self.selection.determinants, self.coefficients)
        }

    def to_json(self, n_qubits: int) -> str:
        doc = {
            "energy": self.energy,
            "dets": [det_to_bitstring(d, n_qubits) for d in self.selection.determinants],
            "coeffs": [[c.real, c.imag] for c in self.coefficients],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str, provenance: str = "shots") -> "SubspaceWavefunction":
        doc = json.loads(text)
        dets = tuple(bitstring_to_det(b) for b in doc["dets"])
        coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]], dtype=np.complex128)
        selection = SubspaceSelection(
            determinants=dets,
            r_requested=len(dets),
            post_selected=False,
            provenance=provenance,
        )
        return cls(selection=selection, coefficients=coeffs, energy=float(doc["energy"]))


def post_select(dist: SampleDistribution, sector: Sector) -> SampleDistribution:
    """Drop sampled determinants outside the conserved (N_e, Sz) sector."""
    kept = {det: c for det, c in dist.counts.items() if sector.contains(det)}
    return SampleDistribution(
        counts=kept,
        total_shots=sum(kept.values()),
        seed=dist.seed,
        n_qubits=dist.n_qubits,
    )


def select_subspace(
    dist: SampleDistribution, r: int, post_selected: bool = False
) -> SubspaceSelection:
    """R most frequent determinants; frequency ties broken by ascending bit value."""
    if r < 1:
        raise ConfigError("R must be >= 1")
    if not dist.counts:
        raise SelectionError("cannot select a subspace from an empty distribution")
    ranked = sorted(dist.counts.items(), key=lambda item: (-item[1], item[0]))
    dets = tuple(det for det, _ in ranked[:r])
    return SubspaceSelection(
        determinants=dets,
        r_requested=r,
        post_selected=post_selected,
        provenance="shots",
    )


def ideal_selection(
    state: StateVector, r: int, sector: Sector | None = None
) -> SubspaceSelection:
    """Largest-|amplitude| selection (noiseless stand-in for sampling)."""
    dets = top_r_amplitudes(state, r, sector=sector)
    if not dets:
        raise SelectionError("state has no support in the requested sector")
    return SubspaceSelection(
        determinants=tuple(dets),
        r_requested=r,
        post_selected=sector is not None,
        provenance="ideal",
    )


def _compiled(ham_q) -> CompiledPauliOp:
    return ham_q if isinstance(ham_q, CompiledPauliOp) else compile_operator(ham_q)


def subspace_hamiltonian(
    selection: SubspaceSelection | np.ndarray,
    ham_q: QubitHamiltonian | CompiledPauliOp,
) -> np.ndarray:
    """Dense <x|H|y> over the selection, hermiticity-checked and symmetrized."""
    dets = (
        np.asarray(selection.determinants, dtype=np.uint64)
        if isinstance(selection, SubspaceSelection)
        else np.asarray(selection, dtype=np.uint64)
    )
    mat = _compiled(ham_q).matrix_over(dets)
    residual = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if residual > HERMITICITY_ATOL:
        raise ConsistencyError(f"subspace Hamiltonian hermiticity residual {residual:.3e}")
    return 0.5 * (mat + mat.conj().T)


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    pivot = int(np.argmax(np.abs(vec)))
    phase = vec[pivot] / abs(vec[pivot])
    return vec * phase.conjugate()


def _lowest_pair_dense(mat: np.ndarray) -> tuple[float, np.ndarray, bool]:
    k = min(2, mat.shape[0])
    vals, vecs = sla.eigh(mat, subset_by_index=(0, k - 1))
    degenerate = k == 2 and abs(vals[1] - vals[0]) < DEGENERACY_ATOL
    return float(vals[0]), vecs[:, 0], degenerate


def _lowest_pair_sparse(mat: sps.spmatrix) -> tuple[float, np.ndarray, bool]:
    n = mat.shape[0]
    v0 = np.full(n, 1.0 / np.sqrt(n))
    k = min(2, n - 1)
    vals, vecs = spsla.eigsh(mat, k=k, which="SA", v0=v0, tol=0)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    degenerate = k == 2 and abs(vals[1] - vals[0]) < DEGENERACY_ATOL
    return float(vals[0]), vecs[:, 0], degenerate


def diagonalize_subspace(
    h_r: np.ndarray | sps.spmatrix,
    selection: SubspaceSelection | None = None,
) -> SubspaceWavefunction:
    """Lowest eigenpair of the subspace Hamiltonian.

    Dense solves use a LAPACK subset driver; sparse input goes through
    Lanczos with a deterministic start vector.  A degenerate lowest
    eigenvalue is resolved by the solver's deterministic ordering and
    flagged on the result.
    """
    if sps.issparse(h_r):
        if not np.all(np.isfinite(h_r.data)):
            raise ValueError("subspace Hamiltonian contains non-finite entries")
        if h_r.shape[0] <= 4:
            energy, vec, degenerate = _lowest_pair_dense(h_r.toarray())
        else:
            energy, vec, degenerate = _lowest_pair_sparse(h_r)
    else:
        h_r = np.asarray(h_r)
        if not np.all(np.isfinite(h_r)):
            raise ValueError("subspace Hamiltonian contains non-finite entries")
        energy, vec, degenerate = _lowest_pair_dense(h_r)
    vec = _canonical_phase(vec)
    vec = vec / np.linalg.norm(vec)
    if selection is None:
        selection = SubspaceSelection(
            determinants=tuple(range(len(vec))),
            r_requested=len(vec),
            post_selected=False,
            provenance="ideal",
        )
    return SubspaceWavefunction(
        selection=selection,
        coefficients=vec.astype(np.complex128),
        energy=energy,
        degenerate=degenerate,
    )


def solve_subspace(
    selection: SubspaceSelection,
    ham_q: QubitHamiltonian | CompiledPauliOp,
    dense_limit: int = DENSE_LIMIT,
) -> SubspaceWavefunction:
    """Build and diagonalize in one step; switches to the sparse path for
    selections larger than `dense_limit`."""
    compiled = _compiled(ham_q)
    dets = np.asarray(selection.determinants, dtype=np.uint64)
    if selection.size <= dense_limit:
        mat = subspace_hamiltonian(selection, compiled)
        wf = diagonalize_subspace(mat, selection)
    else:
        mat = compiled.sparse_over(dets)
        residual = abs(mat - mat.conj().T).max() if mat.nnz else 0.0
        if residual > HERMITICITY_ATOL:
            raise ConsistencyError(f"subspace Hamiltonian hermiticity residual {residual:.3e}")
        mat = 0.5 * (mat + mat.conj().T.tocsr())
        wf = diagonalize_subspace(mat, selection)
    return wf


def fci_ground(
    ham,
    n_electrons: int | None = None,
    sz: float | None = None,
    qubit_ham: QubitHamiltonian | CompiledPauliOp | None = None,
    order=None,
    dense_cutoff: int = 10_000,
    max_dimension: int = 2_000_000,
) -> SubspaceWavefunction:
    """Exact ground state of the (N_e, Sz) sector.

    Acts both as the validation oracle and as the band-reference input
    ("replace QSCI by exact diagonalization").  Dense below `dense_cutoff`,
    Lanczos (tol at machine precision) above.
    """
    base = hf_sector(ham, order)
    sector = Sector(
        n_electrons=ham.n_electrons if n_electrons is None else n_electrons,
        sz=base.sz if sz is None else sz,
        alpha_mask=base.alpha_mask,
        beta_mask=base.beta_mask,
    )
    dim = sector.dimension()
    if dim > max_dimension:
        raise CapacityError(
            f"sector dimension {dim} exceeds the configured budget {max_dimension}"
        )
    dets = sector.enumerate()
    selection = SubspaceSelection(
        determinants=tuple(int(d) for d in dets),
        r_requested=dim,
        post_selected=True,
        provenance="sector",
    )
    compiled = _compiled(qubit_ham if qubit_ham is not None else jordan_wigner(ham, order))
    return solve_subspace(selection, compiled, dense_limit=dense_cutoff)
