"""Bundled Gaussian valence basis sets.

A shell is S_lm(r) * sum_k c_k exp(-alpha_k r^2) with real solid harmonics;
single-zeta means one contracted function per valence channel.  The silicon
exponents below were fixed by scanning the crystal HF energy at the Gamma
point (see exporter/scripts/optimize_basis.py); they are part of this package's
"szv1-bundled" dataset, not a literature basis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Shell:
    l: int
    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]

    def cutoff_radius(self, tol: float = 1e-12) -> float:
        return max(
            math.sqrt(-math.log(tol) / alpha) for alpha in self.exponents
        )


# one s + one p contracted function per atom -> 4 AOs/atom, 8 COs for the
# two-atom diamond cell, matching the 16-qubit / 8-electron setup;
# exponents minimize the Gamma-point crystal HF energy (60 Ha cutoff)
SI_SZV_BUNDLED: tuple[Shell, ...] = (
    Shell(l=0, exponents=(0.125,), coefficients=(1.0,)),
    Shell(l=1, exponents=(0.225,), coefficients=(1.0,)),
)

BASIS_SETS = {"szv1-bundled": SI_SZV_BUNDLED}
