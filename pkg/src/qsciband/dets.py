"""Bit-level Slater determinant utilities.

A determinant is a plain Python int (or numpy integer); bit i holds the
occupation of the spin orbital assigned to qubit i.  Serialized bitstrings
are zero-padded with qubit 0 as the rightmost character.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


def det_to_bitstring(det: int, n_qubits: int) -> str:
    return format(int(det), f"0{n_qubits}b")


def bitstring_to_det(bits: str) -> int:
    return int(bits, 2)


def parity_below(det: int, qubit: int) -> int:
    """Fermionic sign (+1/-1) from occupied orbitals below `qubit`."""
    return -1 if (int(det) & ((1 << qubit) - 1)).bit_count() & 1 else 1


def popcount_array(dets: np.ndarray) -> np.ndarray:
    return np.bitwise_count(dets)


@dataclass(frozen=True)
class Sector:
    """Fixed particle-number / Sz block of Fock space.

    alpha_mask / beta_mask mark which qubits host alpha / beta spin
    orbitals under the qubit ordering in use.
    """

    n_electrons: int
    sz: float
    alpha_mask: int
    beta_mask: int

    def __post_init__(self):
        n_alpha = self.n_electrons / 2 + self.sz
        if abs(n_alpha - round(n_alpha)) > 1e-12:
            raise ValueError(
                f"sector (N_e={self.n_electrons}, Sz={self.sz}) has non-integer alpha count"
            )
        if self.alpha_mask & self.beta_mask:
            raise ValueError("alpha and beta qubit masks overlap")

    @property
    def n_alpha(self) -> int:
        return round(self.n_electrons / 2 + self.sz)

    @property
    def n_beta(self) -> int:
        return self.n_electrons - self.n_alpha

    def contains(self, det: int) -> bool:
        det = int(det)
        return (
            (det & self.alpha_mask).bit_count() == self.n_alpha
            and (det & self.beta_mask).bit_count() == self.n_beta
            and det & ~(self.alpha_mask | self.beta_mask) == 0
        )

    def mask_array(self, dets: np.ndarray) -> np.ndarray:
        """Vectorized membership test."""
        dets = np.asarray(dets, dtype=np.uint64)
        in_alpha = np.bitwise_count(dets & np.uint64(self.alpha_mask)) == self.n_alpha
        in_beta = np.bitwise_count(dets & np.uint64(self.beta_mask)) == self.n_beta
        full = np.uint64(self.alpha_mask | self.beta_mask)
        no_stray = (dets & ~full) == 0
        return in_alpha & in_beta & no_stray

    def dimension(self) -> int:
        from math import comb

        return comb(self.alpha_mask.bit_count(), self.n_alpha) * comb(
            self.beta_mask.bit_count(), self.n_beta
        )

    def enumerate(self) -> np.ndarray:
        """All determinants of the sector, ascending bit value."""
        alpha_bits = [q for q in range(self.alpha_mask.bit_length()) if self.alpha_mask >> q & 1]
        beta_bits = [q for q in range(self.beta_mask.bit_length()) if self.beta_mask >> q & 1]
        dets = []
        for occ_a in itertools.combinations(alpha_bits, self.n_alpha):
            base = sum(1 << q for q in occ_a)
            for occ_b in itertools.combinations(beta_bits, self.n_beta):
                dets.append(base + sum(1 << q for q in occ_b))
        return np.sort(np.asarray(dets, dtype=np.uint64))
