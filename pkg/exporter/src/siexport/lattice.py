"""Periodic cell geometry, reciprocal vectors and the Ewald ion energy.

All lengths in bohr, energies in Hartree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BOHR_PER_ANGSTROM = 1.0 / 0.529177210903

# high-symmetry points of the fcc Brillouin zone, primitive reciprocal units
FCC_POINTS = {
    "Gamma": (0.0, 0.0, 0.0),
    "X": (0.5, 0.0, 0.5),
    "L": (0.5, 0.5, 0.5),
    "W": (0.5, 0.25, 0.75),
    "K": (0.375, 0.375, 0.75),
    "U": (0.625, 0.25, 0.625),
}


@dataclass(frozen=True)
class Cell:
    """Lattice vectors as rows of `vectors`; cartesian atom positions."""

    vectors: np.ndarray  # (3, 3)
    positions: np.ndarray  # (n_atoms, 3)
    charges: np.ndarray  # (n_atoms,) ionic charges (pseudo Z_ion)

    @property
    def volume(self) -> float:
        return float(abs(np.linalg.det(self.vectors)))

    @property
    def reciprocal(self) -> np.ndarray:
        """Rows b_i with a_i . b_j = 2 pi delta_ij."""
        return 2.0 * np.pi * np.linalg.inv(self.vectors).T

    def cartesian_k(self, frac) -> np.ndarray:
        return np.asarray(frac, dtype=float) @ self.reciprocal


def fcc_si_cell(lattice_constant_angstrom: float = 5.43, z_ion: float = 4.0) -> Cell:
    """Diamond silicon: fcc lattice, two-atom basis at (0,0,0) and (1/4,1/4,1/4)."""
    a = lattice_constant_angstrom * BOHR_PER_ANGSTROM
    vectors = 0.5 * a * np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    frac = np.array([[0.0, 0.0, 0.0], [0.25, 0.25, 0.25]])
    return Cell(
        vectors=vectors,
        positions=frac @ vectors,
        charges=np.array([z_ion, z_ion]),
    )


def kpath(cell: Cell, labels, points=FCC_POINTS, scale_2pi_over_a: float | None = None):
    """Labeled k-points with cumulative cartesian path distance.

    Distances are reported in units of 2 pi / a (dimensionless along the
    path) where a is inferred from the cell unless given.
    """
    if scale_2pi_over_a is None:
        # fcc primitive vectors have |a_i| = a / sqrt(2)
        scale_2pi_over_a = 2.0 * np.pi / (np.linalg.norm(cell.vectors[0]) * math.sqrt(2.0))
    out = []
    previous_cart = None
    distance = 0.0
    for label in labels:
        frac = points[label]
        cart = cell.cartesian_k(frac)
        if previous_cart is not None:
            distance += float(np.linalg.norm(cart - previous_cart)) / scale_2pi_over_a
        out.append((label, tuple(float(x) for x in frac), distance))
        previous_cart = cart
    return out


def _image_ranges(vectors: np.ndarray, radius: float) -> list[range]:
    """Integer shift ranges covering a sphere of `radius` around the cell."""
    recip = 2.0 * np.pi * np.linalg.inv(vectors).T
    ranges = []
    for i in range(3):
        spacing = 2.0 * np.pi / np.linalg.norm(recip[i])  # distance between lattice planes
        n = int(math.ceil(radius / spacing)) + 1
        ranges.append(range(-n, n + 1))
    return ranges


def lattice_images(vectors: np.ndarray, radius: float) -> np.ndarray:
    """All lattice translations with |T| <= radius (plus a safety shell)."""
    shifts = []
    for n1 in _image_ranges(vectors, radius)[0]:
        for n2 in _image_ranges(vectors, radius)[1]:
            for n3 in _image_ranges(vectors, radius)[2]:
                t = n1 * vectors[0] + n2 * vectors[1] + n3 * vectors[2]
                if np.linalg.norm(t) <= radius + np.linalg.norm(vectors.sum(axis=0)):
                    shifts.append(t)
    return np.asarray(shifts)


def ewald_energy(cell: Cell, tol: float = 1e-12) -> float:
    """Point charges in a neutralizing background.

    E = 1/2 sum'_{ij,T} q_i q_j erfc(sqrt(eta) r)/r
        + (2 pi / V) sum_{G != 0} exp(-G^2/(4 eta))/G^2 |S(G)|^2
        - sqrt(eta/pi) sum_i q_i^2  -  pi/(2 V eta) (sum_i q_i)^2
    """
    volume = cell.volume
    charges = cell.charges
    eta = (np.pi / volume ** (2.0 / 3.0)) * 2.0  # balanced split for small cells

    cut = math.sqrt(-math.log(tol))
    r_max = cut / math.sqrt(eta)
    g_max = 2.0 * math.sqrt(eta) * cut

    real_part = 0.0
    images = lattice_images(cell.vectors, r_max + 1.0)
    for i, ri in enumerate(cell.positions):
        for j, rj in enumerate(cell.positions):
            d = ri - rj + images
            norms = np.linalg.norm(d, axis=1)
            mask = (norms > 1e-10) & (norms <= r_max)
            if np.any(mask):
                real_part += 0.5 * charges[i] * charges[j] * np.sum(
                    np.vectorize(math.erfc)(math.sqrt(eta) * norms[mask]) / norms[mask]
                )

    recip = cell.reciprocal
    recip_part = 0.0
    n_max = [int(math.ceil(g_max / np.linalg.norm(recip[i]))) + 1 for i in range(3)]
    for n1 in range(-n_max[0], n_max[0] + 1):
        for n2 in range(-n_max[1], n_max[1] + 1):
            for n3 in range(-n_max[2], n_max[2] + 1):
                if n1 == n2 == n3 == 0:
                    continue
                g = n1 * recip[0] + n2 * recip[1] + n3 * recip[2]
                g2 = float(g @ g)
                if g2 > g_max * g_max:
                    continue
                structure = np.sum(charges * np.exp(1j * cell.positions @ g))
                recip_part += (
                    (2.0 * np.pi / volume)
                    * math.exp(-g2 / (4.0 * eta))
                    / g2
                    * float(abs(structure) ** 2)
                )

    self_part = -math.sqrt(eta / np.pi) * float(np.sum(charges**2))
    background = -np.pi / (2.0 * volume * eta) * float(np.sum(charges)) ** 2
    return real_part + recip_part + self_part + background
