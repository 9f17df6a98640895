"""Separable dual-space (GTH-type) pseudopotentials.

Local part in reciprocal space (v(G) includes the 1/volume factor of the
Fourier series); the G = 0 coefficient is the finite remainder after the
-Z/r tail is cancelled against the compensating background:

    alpha = int d3r (v_loc(r) + Z/r) = 2 pi Z rloc^2
            + (2 pi)^(3/2) rloc^3 (c1 + 3 c2 + 15 c3 + 105 c4)

Nonlocal projectors are evaluated in real space,

    p_i^l(r) = sqrt(2) r^(l + 2(i-1)) exp(-r^2 / (2 rl^2))
               / ( rl^(l + (4i-1)/2) sqrt(Gamma(l + (4i-1)/2)) ),

normalized so that int p^2 r^2 dr = 1, combined with real spherical
harmonics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GthPseudo:
    symbol: str
    z_ion: float
    rloc: float
    cloc: tuple[float, ...]
    # l -> (r_l, h matrix rows)
    projectors: dict[int, tuple[float, tuple[tuple[float, ...], ...]]] = field(default_factory=dict)


# Bundled dataset (PADE / LDA-form parameters as distributed with common
# plane-wave codes).  Absolute fidelity of these numbers only affects how
# silicon-like the exported fixtures are; every consumer-side check is
# convention-free.
SI_GTH_PADE_Q4 = GthPseudo(
    symbol="Si",
    z_ion=4.0,
    rloc=0.44000000,
    cloc=(-7.33610297,),
    projectors={
        0: (0.42273813, ((5.90692831, -1.26189397), (-1.26189397, 3.25819622))),
        1: (0.48427842, ((2.72701346,),)),
    },
)

H_GTH_PADE_Q1 = GthPseudo(
    symbol="H",
    z_ion=1.0,
    rloc=0.20000000,
    cloc=(-4.18023680, 0.72507482),
    projectors={},
)


def vloc_recip(pseudo: GthPseudo, g2: np.ndarray, volume: float) -> np.ndarray:
    """Fourier coefficients v(G) of the local channel on |G|^2 values.

    Entries with g2 == 0 receive the finite alpha/volume remainder.
    """
    g2 = np.asarray(g2, dtype=float)
    out = np.zeros_like(g2)
    nonzero = g2 > 1e-12
    g2n = g2[nonzero]
    x2 = g2n * pseudo.rloc**2
    gauss = np.exp(-0.5 * x2)
    value = -4.0 * np.pi * pseudo.z_ion / (volume * g2n) * gauss
    poly = np.zeros_like(g2n)
    c = list(pseudo.cloc) + [0.0] * (4 - len(pseudo.cloc))
    poly += c[0]
    poly += c[1] * (3.0 - x2)
    poly += c[2] * (15.0 - 10.0 * x2 + x2**2)
    poly += c[3] * (105.0 - 105.0 * x2 + 21.0 * x2**2 - x2**3)
    value += math.sqrt(8.0 * np.pi**3) * pseudo.rloc**3 / volume * gauss * poly
    out[nonzero] = value

    c1, c2, c3, c4 = c
    alpha = 2.0 * np.pi * pseudo.z_ion * pseudo.rloc**2 + (2.0 * np.pi) ** 1.5 * pseudo.rloc**3 * (
        c1 + 3.0 * c2 + 15.0 * c3 + 105.0 * c4
    )
    out[~nonzero] = alpha / volume
    return out


def projector_radial_reduced(l: int, i: int, r_l: float, r: np.ndarray) -> np.ndarray:
    """p_i^l(r) / r^l, smooth at the origin; i counts from 1.

    Combined with a solid harmonic S_lm = r^l Y_lm this reproduces the
    normalized HGH projector p_i^l(r) Y_lm.
    """
    power = 2 * (i - 1)
    norm = math.sqrt(2.0) / (
        r_l ** (l + (4 * i - 1) / 2.0) * math.sqrt(math.gamma(l + (4 * i - 1) / 2.0))
    )
    radial = np.exp(-0.5 * (r / r_l) ** 2)
    if power:
        radial = radial * r**power
    return norm * radial


def solid_harmonics(l: int, vectors: np.ndarray) -> np.ndarray:
    """Real solid harmonics S_lm = r^l Y_lm on displacement vectors.

    Shape (n_points, 2l+1); m ordering for l=1 is (y, z, x).
    """
    n = vectors.shape[0]
    if l == 0:
        return np.full((n, 1), 0.5 / math.sqrt(np.pi))
    if l == 1:
        factor = math.sqrt(3.0 / (4.0 * np.pi))
        return factor * vectors[:, [1, 2, 0]]
    raise NotImplementedError(f"l = {l} not needed for the bundled basis sets")
