#!/usr/bin/env python3
"""Scan single-primitive valence exponents for the bundled silicon basis.

Minimizes the Gamma-point crystal HF energy on a coarse-to-fine grid; the
winning exponents are frozen into siexport.basis.SI_SZV_BUNDLED.
"""
import argparse
import itertools
import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from siexport.basis import Shell
from siexport.lattice import ewald_energy, fcc_si_cell
from siexport.pseudo import SI_GTH_PADE_Q4
from siexport.scf import ExportError, build_integrals, rhf


def crystal_energy(cell, pseudos, e_nuc, alpha_s, alpha_p, ecut):
    shells = [
        (pos, shell)
        for pos in cell.positions
        for shell in (Shell(0, (alpha_s,), (1.0,)), Shell(1, (alpha_p,), (1.0,)))
    ]
    try:
        integrals = build_integrals(cell, shells, pseudos, (0.0, 0.0, 0.0), ecut)
        return rhf(integrals, n_occ=4).e_elec + e_nuc
    except ExportError:
        return np.inf


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--ke-cutoff", type=float, default=60.0)
    parser.add_argument("--s-grid", type=float, nargs="+", default=[0.10, 0.125, 0.15, 0.18])
    parser.add_argument("--p-grid", type=float, nargs="+", default=[0.15, 0.19, 0.225, 0.26])
    args = parser.parse_args()

    cell = fcc_si_cell(5.43)
    pseudos = [(pos, SI_GTH_PADE_Q4) for pos in cell.positions]
    e_nuc = ewald_energy(cell)
    best = (None, np.inf)
    for alpha_s, alpha_p in itertools.product(args.s_grid, args.p_grid):
        energy = crystal_energy(cell, pseudos, e_nuc, alpha_s, alpha_p, args.ke_cutoff)
        print(f"alpha_s={alpha_s:6.3f} alpha_p={alpha_p:6.3f}  E = {energy:12.6f}")
        if energy < best[1]:
            best = ((alpha_s, alpha_p), energy)
    print(f"\nbest: alpha_s, alpha_p = {best[0]}  E = {best[1]:.6f}")


if __name__ == "__main__":
    main()
