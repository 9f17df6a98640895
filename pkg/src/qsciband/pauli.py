"""Jordan-Wigner mapping and Pauli-term algebra.

Internally every Pauli string is held in symplectic (mask) form

    coeff * X^x * Z^z        (X factors to the left of Z factors)

where x and z are qubit bitmasks.  Products then reduce to XORs plus a
(-1)^{popcount(z1 & x2)} phase, and the action on a computational basis
state |y> is

    coeff * (-1)^{popcount(z & y)} |y XOR x>.

The public `PauliTerm` uses the conventional X/Y/Z axis labels; a qubit
carrying both an X and a Z factor is a Y up to the phase X*Z = -iY.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps

from .dets import Sector
from .errors import ConfigError, ConsistencyError

TERM_CUTOFF = 1e-12


@dataclass(frozen=True)
class PauliTerm:
    """One Pauli string: complex coefficient and a sparse qubit->axis map."""

    coefficient: complex
    axes: tuple[tuple[int, str], ...]  # sorted by qubit index

    def __post_init__(self):
        seen = set()
        for qubit, axis in self.axes:
            if axis not in ("X", "Y", "Z"):
                raise ConfigError(f"unknown Pauli axis {axis!r}")
            if qubit in seen:
                raise ConfigError(f"qubit {qubit} appears twice in one term")
            seen.add(qubit)

    def masks(self) -> tuple[int, int, complex]:
        """(x_mask, z_mask, mask-form coefficient)."""
        x = z = 0
        n_y = 0
        for qubit, axis in self.axes:
            if axis in ("X", "Y"):
                x |= 1 << qubit
            if axis in ("Z", "Y"):
                z |= 1 << qubit
            n_y += axis == "Y"
        return x, z, self.coefficient * 1j**n_y


def _term_from_masks(x: int, z: int, coeff: complex) -> PauliTerm:
    axes = []
    n_y = 0
    for qubit in range(max(x, z).bit_length()):
        bit = 1 << qubit
        if x & bit and z & bit:
            axes.append((qubit, "Y"))
            n_y += 1
        elif x & bit:
            axes.append((qubit, "X"))
        elif z & bit:
            axes.append((qubit, "Z"))
    return PauliTerm(coefficient=coeff * (-1j) ** n_y, axes=tuple(axes))


@dataclass(frozen=True)
class QubitHamiltonian:
    n_qubits: int
    terms: tuple[PauliTerm, ...]

    @classmethod
    def from_mask_dict(cls, n_qubits: int, masks: dict, cutoff: float = TERM_CUTOFF):
        terms = [
            _term_from_masks(x, z, c)
            for (x, z), c in sorted(masks.items())
            if abs(c) >= cutoff
        ]
        return cls(n_qubits=n_qubits, terms=tuple(terms))

    def mask_dict(self) -> dict:
        out = {}
        for term in self.terms:
            x, z, c = term.masks()
            out[(x, z)] = out.get((x, z), 0j) + c
        return out

    def hermiticity_residual(self) -> float:
        """Max |Im coefficient|; Pauli strings are Hermitian, so a real
        coefficient set is exactly a Hermitian operator."""
        if not self.terms:
            return 0.0
        return max(abs(t.coefficient.imag) for t in self.terms)

    def debug_dump(self) -> str:
        lines = []
        for term in self.terms:
            label = " ".join(f"{axis}{qubit}" for qubit, axis in term.axes) or "I"
            lines.append(f"{term.coefficient.real:+.16e} {term.coefficient.imag:+.16e} : {label}")
        return "\n".join(lines)


def _mask_mul(d1: dict, d2: dict) -> dict:
    out = {}
    for (x1, z1), c1 in d1.items():
        for (x2, z2), c2 in d2.items():
            sign = -1.0 if (z1 & x2).bit_count() & 1 else 1.0
            key = (x1 ^ x2, z1 ^ z2)
            out[key] = out.get(key, 0j) + sign * c1 * c2
    return out


def _mask_add(target: dict, other: dict, scale: complex = 1.0) -> None:
    for key, c in other.items():
        target[key] = target.get(key, 0j) + scale * c


def _raising(qubit: int) -> dict:
    below = (1 << qubit) - 1
    return {(1 << qubit, below): 0.5, (1 << qubit, below | (1 << qubit)): 0.5}


def _lowering(qubit: int) -> dict:
    below = (1 << qubit) - 1
    return {(1 << qubit, below): 0.5, (1 << qubit, below | (1 << qubit)): -0.5}


def default_qubit_order(orbitals) -> list[int]:
    """Spin orbital -> qubit map making the HF determinant |...0101>.

    The m-th HF-occupied spin orbital (ascending index) sits on qubit 2m and
    the m-th virtual one on qubit 2m+1; if the counts differ, leftovers fill
    the remaining qubit indices in order.
    """
    occupied = sorted(o.index for o in orbitals if o.hf_occupied)
    virtual = sorted(o.index for o in orbitals if not o.hf_occupied)
    order = [0] * (len(occupied) + len(virtual))
    paired = min(len(occupied), len(virtual))
    for m in range(paired):
        order[occupied[m]] = 2 * m
        order[virtual[m]] = 2 * m + 1
    leftovers = occupied[paired:] + virtual[paired:]
    for offset, orb in enumerate(leftovers):
        order[orb] = 2 * paired + offset
    return order


def _check_order(order, n: int) -> list[int]:
    order = list(order)
    if sorted(order) != list(range(n)):
        raise ConfigError("qubit ordering is not a bijection onto [0, n)")
    return order


def jordan_wigner(ham, order=None) -> QubitHamiltonian:
    """Map a FermionHamiltonian onto qubits.

    `order[orbital_index]` is the target qubit; the default interleaves
    occupied and virtual orbitals.  JW strings put Z on every qubit below
    the target index.
    """
    if order is None:
        order = default_qubit_order(ham.orbitals)
    order = _check_order(order, ham.n_spin_orbitals)

    accum: dict = {}
    if ham.constant:
        accum[(0, 0)] = complex(ham.constant)
    for (p, q), t in ham.one_body.items():
        prod = _mask_mul(_raising(order[p]), _lowering(order[q]))
        _mask_add(accum, prod, t)
    for (p, q, r, s), v in ham.two_body.items():
        prod = _mask_mul(_raising(order[p]), _raising(order[q]))
        prod = _mask_mul(prod, _lowering(order[r]))
        prod = _mask_mul(prod, _lowering(order[s]))
        _mask_add(accum, prod, v)
    return QubitHamiltonian.from_mask_dict(ham.n_spin_orbitals, accum)


def apply_pauli_term(term: PauliTerm, det: int) -> tuple[int, complex]:
    """term|det> = phase |det'>; the phase carries the coefficient."""
    x, z, coeff = term.masks()
    sign = -1.0 if (z & int(det)).bit_count() & 1 else 1.0
    return int(det) ^ x, coeff * sign


def hf_determinant(orbitals, order=None) -> int:
    order = order if order is not None else default_qubit_order(orbitals)
    det = 0
    for o in orbitals:
        if o.hf_occupied:
            det |= 1 << order[o.index]
    return det


def hf_sector(ham, order=None) -> Sector:
    """Target (N_e, Sz) sector of the HF reference under a qubit ordering."""
    order = order if order is not None else default_qubit_order(ham.orbitals)
    alpha_mask = beta_mask = 0
    for o in ham.orbitals:
        if o.spin == "a":
            alpha_mask |= 1 << order[o.index]
        else:
            beta_mask |= 1 << order[o.index]
    return Sector(
        n_electrons=ham.n_electrons,
        sz=ham.hf_sz(),
        alpha_mask=alpha_mask,
        beta_mask=beta_mask,
    )


def number_operator(n_qubits: int) -> QubitHamiltonian:
    """N = sum_i (I - Z_i)/2."""
    masks = {(0, 0): n_qubits / 2 + 0j}
    for q in range(n_qubits):
        masks[(0, 1 << q)] = -0.5 + 0j
    return QubitHamiltonian.from_mask_dict(n_qubits, masks)


def sz_operator(orbitals, order=None) -> QubitHamiltonian:
    """Sz = (N_alpha - N_beta)/2 under the qubit ordering."""
    order = order if order is not None else default_qubit_order(orbitals)
    n_qubits = len(order)
    masks: dict = {}
    for o in orbitals:
        if o.spin not in ("a", "b"):
            raise ConfigError(f"orbital {o.index} lacks spin metadata")
        s = 0.5 if o.spin == "a" else -0.5
        _mask_add(masks, {(0, 0): s / 2, (0, 1 << order[o.index]): -s / 2})
    return QubitHamiltonian.from_mask_dict(n_qubits, masks)


def build_cost_operator(
    ham_q: QubitHamiltonian,
    penalty_number: float,
    number_target: int,
    penalty_spin: float,
    orbitals=None,
    order=None,
) -> QubitHamiltonian:
    """H + lamN (N - target)^2 + lamS Sz^2, expanded and deduplicated.

    Both penalties are Z-diagonal under JW, so the expansion is exact.
    `orbitals` may be omitted when penalty_spin == 0.
    """
    if penalty_number < 0 or penalty_spin < 0:
        raise ConfigError("penalty weights must be non-negative")
    masks = dict(ham_q.mask_dict())
    if penalty_number:
        shifted = number_operator(ham_q.n_qubits).mask_dict()
        shifted[(0, 0)] = shifted.get((0, 0), 0j) - number_target
        _mask_add(masks, _mask_mul(shifted, shifted), penalty_number)
    if penalty_spin:
        if orbitals is None:
            raise ConfigError("spin penalty requires orbital metadata")
        sz = sz_operator(orbitals, order).mask_dict()
        _mask_add(masks, _mask_mul(sz, sz), penalty_spin)
    return QubitHamiltonian.from_mask_dict(ham_q.n_qubits, masks)


def penalty_operator(
    n_qubits: int,
    penalty_number: float,
    number_target: int,
    penalty_spin: float,
    orbitals=None,
    order=None,
) -> QubitHamiltonian:
    """The penalty part alone; convenient for reporting bare vs. penalized energy."""
    zero = QubitHamiltonian(n_qubits=n_qubits, terms=())
    return build_cost_operator(zero, penalty_number, number_target, penalty_spin, orbitals, order)


class CompiledPauliOp:
    """Mask-array form of a QubitHamiltonian for fast numerics.

    Terms are grouped by x-mask: every term of a group scatters a basis
    state to the same partner, so per-group phase tables f_m(y) can be
    reused across statevector applications.  Tables are cached up to
    `cache_limit_bytes`.
    """

    def __init__(self, op: QubitHamiltonian, cache_limit_bytes: int = 1_400_000_000):
        self.n_qubits = op.n_qubits
        self.dim = 1 << op.n_qubits
        items = sorted(op.mask_dict().items())
        self.xs = np.array([x for (x, _), _ in items], dtype=np.uint64)
        self.zs = np.array([z for (_, z), _ in items], dtype=np.uint64)
        self.cs = np.array([c for _, c in items], dtype=np.complex128)
        self.group_x, self.group_start = np.unique(self.xs, return_index=True)
        self.group_end = np.append(self.group_start[1:], len(self.xs))
        self._cache_limit = cache_limit_bytes
        self._phase_cache: dict[int, np.ndarray] = {}
        self._cache_bytes = 0
        self._idx32 = np.arange(self.dim, dtype=np.int32)
        self._xor_buffer = np.empty(self.dim, dtype=np.int32)

    @property
    def n_terms(self) -> int:
        return len(self.xs)

    @property
    def n_groups(self) -> int:
        return len(self.group_x)

    def _signs(self, z: np.uint64, dets: np.ndarray) -> np.ndarray:
        return 1.0 - 2.0 * (np.bitwise_count(dets & z) & np.uint64(1)).astype(np.float64)

    def _phase_table(self, gi: int, idx: np.ndarray) -> np.ndarray:
        """f_m(y) = sum over the group's terms of coeff * (-1)^{popcount(z & y)}."""
        x = int(self.group_x[gi])
        cached = self._phase_cache.get(x)
        if cached is not None:
            return cached
        f = np.zeros(self.dim, dtype=np.complex128)
        for t in range(self.group_start[gi], self.group_end[gi]):
            f += self.cs[t] * self._signs(self.zs[t], idx)
        nbytes = f.nbytes
        if self._cache_bytes + nbytes <= self._cache_limit:
            self._phase_cache[x] = f
            self._cache_bytes += nbytes
        return f

    def _full_index(self) -> np.ndarray:
        return np.arange(self.dim, dtype=np.uint64)

    def _permuted(self, values: np.ndarray, x: int) -> np.ndarray:
        """values[y XOR x] for the full index range."""
        np.bitwise_xor(self._idx32, np.int32(x), out=self._xor_buffer)
        return values[self._xor_buffer]

    def expectation(self, amplitudes: np.ndarray, atol: float = 1e-10) -> float:
        """<psi|H|psi>; complains if the imaginary residual survives."""
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (self.dim,):
            raise ValueError(f"statevector has wrong length for {self.n_qubits} qubits")
        idx = self._full_index()
        value = 0j
        for gi in range(self.n_groups):
            f = self._phase_table(gi, idx)
            x = int(self.group_x[gi])
            bra = amplitudes if x == 0 else self._permuted(amplitudes, x)
            value += np.vdot(bra, f * amplitudes)
        if abs(value.imag) > atol:
            raise ConsistencyError(
                f"expectation has imaginary residual {value.imag:.3e} (operator not Hermitian?)"
            )
        return float(value.real)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """H|psi> as a dense vector."""
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        idx = self._full_index()
        out = np.zeros_like(amplitudes)
        for gi in range(self.n_groups):
            f = self._phase_table(gi, idx)
            g = f * amplitudes
            x = int(self.group_x[gi])
            out += g if x == 0 else self._permuted(g, x)
        return out

    def _matrix_entries(self, dets: np.ndarray):
        """Yield (rows, cols, values) blocks of <x|H|y> for x, y in dets."""
        dets = np.asarray(dets, dtype=np.uint64)
        order = np.argsort(dets, kind="stable")
        sorted_dets = dets[order]
        cols_all = np.arange(len(dets))
        for gi in range(self.n_groups):
            x = self.group_x[gi]
            partners = dets ^ x
            pos = np.searchsorted(sorted_dets, partners)
            pos_clipped = np.minimum(pos, len(dets) - 1)
            valid = sorted_dets[pos_clipped] == partners
            if not np.any(valid):
                continue
            cols = cols_all[valid]
            rows = order[pos_clipped[valid]]
            kets = dets[valid]
            vals = np.zeros(len(cols), dtype=np.complex128)
            for t in range(self.group_start[gi], self.group_end[gi]):
                vals += self.cs[t] * self._signs(self.zs[t], kets)
            yield rows, cols, vals

    def matrix_over(self, dets: np.ndarray) -> np.ndarray:
        """Dense R x R matrix of <x|H|y> over a determinant list."""
        r = len(dets)
        mat = np.zeros((r, r), dtype=np.complex128)
        for rows, cols, vals in self._matrix_entries(dets):
            mat[rows, cols] += vals
        return mat

    def sparse_over(self, dets: np.ndarray) -> sps.csr_matrix:
        rows, cols, vals = [], [], []
        for rr, cc, vv in self._matrix_entries(dets):
            rows.append(rr)
            cols.append(cc)
            vals.append(vv)
        r = len(dets)
        if not rows:
            return sps.csr_matrix((r, r), dtype=np.complex128)
        mat = sps.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(r, r),
        )
        return mat.tocsr()

    def dense(self) -> np.ndarray:
        if self.n_qubits > 12:
            raise ConsistencyError("dense matrix limited to 12 qubits")
        return self.matrix_over(self._full_index())


def compile_operator(op: QubitHamiltonian, **kwargs) -> CompiledPauliOp:
    return CompiledPauliOp(op, **kwargs)
