"""Integral assembly and restricted Hartree-Fock at one k-point.

Two-electron integrals are chemist-notation (pq|rs) over Bloch AOs,
evaluated by plane-wave density fitting on the FFT mesh with the G = 0
Coulomb mode omitted (neutralizing background / exxdiv=None convention);
the matching finite remainder of the local pseudopotential lives in its
G = 0 Fourier coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .grid import (
    bloch_ao_values,
    bloch_projector_values,
    g_vectors,
    grid_points,
    mesh_for_cutoff,
)
from .lattice import Cell
from .pseudo import vloc_recip


class ExportError(RuntimeError):
    """Raised when integral assembly or the SCF cannot complete."""


@dataclass
class Integrals:
    overlap: np.ndarray
    hcore: np.ndarray
    eri: np.ndarray  # chemist (pq|rs)
    mesh: tuple[int, int, int]
    k_cart: np.ndarray


def build_integrals(cell: Cell, shells_per_atom, pseudo_atoms, k_frac, ecut: float) -> Integrals:
    k_cart = cell.cartesian_k(k_frac)
    mesh = mesh_for_cutoff(cell, ecut)
    points = grid_points(cell, mesh)
    gvecs = g_vectors(cell, mesh)
    n_points = points.shape[0]
    volume = cell.volume
    weight = volume / n_points

    phi = bloch_ao_values(cell, points, shells_per_atom, k_cart)
    overlap = weight * phi.conj().T @ phi
    norms = 1.0 / np.sqrt(np.real(np.diag(overlap)))
    phi = phi * norms[None, :]
    overlap = overlap * np.outer(norms, norms)

    # periodic parts and their plane-wave coefficients
    phase = np.exp(-1j * points @ k_cart)
    n_ao = phi.shape[1]
    coeff = np.empty((n_ao, n_points), dtype=np.complex128)
    for p in range(n_ao):
        coeff[p] = np.fft.fftn((phi[:, p] * phase).reshape(mesh)).ravel()

    # aliasing guard: a resolved AO carries no spectral weight near the
    # Nyquist edge of any mesh axis
    freq_fracs = np.meshgrid(
        *[np.abs(np.fft.fftfreq(n)) for n in mesh], indexing="ij"
    )
    near_edge = np.zeros(mesh, dtype=bool)
    for frac in freq_fracs:
        near_edge |= frac >= 0.45  # |m_i| >= 0.9 * (n_i / 2)
    near_edge = near_edge.ravel()
    spectral = np.abs(coeff) ** 2
    edge_fraction = spectral[:, near_edge].sum(axis=1) / spectral.sum(axis=1)
    if np.max(edge_fraction) > 1e-8:
        raise ExportError(
            "FFT mesh too coarse: basis function carries "
            f"{np.max(edge_fraction):.2e} of its weight at the Nyquist edge; raise ke_cutoff"
        )

    kin = 0.5 * np.sum((gvecs + k_cart) ** 2, axis=1)
    kinetic = volume / n_points**2 * ((coeff.conj() * kin) @ coeff.T)

    g2 = np.sum(gvecs**2, axis=1)
    vhat = np.zeros(n_points, dtype=np.complex128)
    for center, pseudo in pseudo_atoms:
        vhat += vloc_recip(pseudo, g2, volume) * np.exp(-1j * gvecs @ center)
    v_real = n_points * np.fft.ifftn(vhat.reshape(mesh)).ravel()
    if np.max(np.abs(v_real.imag)) > 1e-8:
        raise ExportError("local pseudopotential is not real on the mesh")
    v_real = v_real.real
    v_local = weight * (phi.conj().T * v_real) @ phi

    proj, blocks = bloch_projector_values(cell, points, pseudo_atoms, k_cart)
    v_nonlocal = np.zeros_like(v_local)
    if proj.shape[1]:
        prj = weight * (proj.conj().T @ phi)
        for h, cols in blocks:
            n_i = h.shape[0]
            for m in range(len(cols[0])):
                sub = np.stack([prj[cols[i][m]] for i in range(n_i)])
                v_nonlocal += sub.conj().T @ h @ sub

    hcore = kinetic + v_local + v_nonlocal
    residual = np.max(np.abs(hcore - hcore.conj().T))
    if residual > 1e-9:
        raise ExportError(f"core Hamiltonian hermiticity residual {residual:.2e}")
    hcore = 0.5 * (hcore + hcore.conj().T)

    # pair densities and Coulomb-weighted plane-wave contraction
    pair = np.empty((n_ao, n_ao, n_points), dtype=np.complex128)
    for p in range(n_ao):
        for q in range(n_ao):
            pair[p, q] = np.fft.fftn((phi[:, p].conj() * phi[:, q]).reshape(mesh)).ravel()
    coul = np.zeros(n_points)
    nonzero = g2 > 1e-12
    coul[nonzero] = 4.0 * np.pi / g2[nonzero]
    eri = volume / n_points**2 * np.einsum(
        "pqg,srg->pqrs", pair * coul[None, None, :], pair.conj(), optimize=True
    )

    # At time-reversal-invariant k (e.g. L, X, Gamma of the fcc lattice the
    # Bloch phases are +-1) the whole AO problem is real; adopting the real
    # gauge keeps MO integrals real instead of picking up arbitrary complex
    # phases from degenerate eigenblocks.
    imag_residual = max(
        np.max(np.abs(overlap.imag)), np.max(np.abs(hcore.imag)), np.max(np.abs(eri.imag))
    )
    if imag_residual < 1e-9:
        overlap = overlap.real.copy()
        hcore = hcore.real.copy()
        eri = eri.real.copy()
    return Integrals(overlap=overlap, hcore=hcore, eri=eri, mesh=mesh, k_cart=k_cart)


def fock_matrix(hcore, eri, dm):
    """F = h + J - K/2 built from the charge density matrix dm (Tr dm S = N_e)."""
    coulomb = np.einsum("pqrs,sr->pq", eri, dm, optimize=True)
    exchange = 0.5 * np.einsum("psrq,sr->pq", eri, dm, optimize=True)
    return hcore + coulomb - exchange


@dataclass
class ScfResult:
    mo_coeff: np.ndarray
    mo_energy: np.ndarray
    e_elec: float
    converged: bool
    n_iterations: int


def rhf(
    integrals: Integrals,
    n_occ: int,
    max_cycles: int = 200,
    e_tol: float = 1e-12,
    grad_tol: float = 1e-9,
) -> ScfResult:
    s, h, eri = integrals.overlap, integrals.hcore, integrals.eri
    svals, svecs = sla.eigh(s)
    keep = svals > 1e-10
    x = svecs[:, keep] / np.sqrt(svals[keep])

    def solve(f):
        fo = x.conj().T @ f @ x
        _, co = sla.eigh(0.5 * (fo + fo.conj().T))
        return x @ co

    mo = solve(h)
    dm = 2.0 * mo[:, :n_occ] @ mo[:, :n_occ].conj().T
    energy = np.inf
    diis_errors: list[np.ndarray] = []
    diis_focks: list[np.ndarray] = []
    converged = False
    cycle = 0
    for cycle in range(1, max_cycles + 1):
        f = fock_matrix(h, eri, dm)
        error = x.conj().T @ (f @ dm @ s - s @ dm @ f) @ x
        diis_errors.append(error.ravel())
        diis_focks.append(f)
        if len(diis_focks) > 8:
            diis_errors.pop(0)
            diis_focks.pop(0)
        if len(diis_focks) > 1:
            n = len(diis_focks)
            b = -np.ones((n + 1, n + 1), dtype=np.complex128)
            b[n, n] = 0.0
            for i in range(n):
                for j in range(n):
                    b[i, j] = np.vdot(diis_errors[i], diis_errors[j])
            rhs = np.zeros(n + 1)
            rhs[n] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:n]
                f = sum(w * fk for w, fk in zip(weights, diis_focks))
            except np.linalg.LinAlgError:
                pass
        mo = solve(f)
        dm = 2.0 * mo[:, :n_occ] @ mo[:, :n_occ].conj().T
        f_current = fock_matrix(h, eri, dm)
        e_new = 0.5 * np.trace((h + f_current) @ dm).real
        grad = np.max(np.abs(x.conj().T @ (f_current @ dm @ s - s @ dm @ f_current) @ x))
        if abs(e_new - energy) < e_tol and grad < grad_tol:
            energy = e_new
            converged = True
            break
        energy = e_new
    if not converged:
        raise ExportError(f"SCF did not converge in {max_cycles} cycles (|grad| = {grad:.2e})")

    f_final = fock_matrix(h, eri, dm)
    fo = x.conj().T @ f_final @ x
    mo_energy, co = sla.eigh(0.5 * (fo + fo.conj().T))
    mo = x @ co
    return ScfResult(
        mo_coeff=mo,
        mo_energy=mo_energy,
        e_elec=float(energy),
        converged=converged,
        n_iterations=cycle,
    )


def mo_integrals(result: ScfResult, integrals: Integrals):
    """(h_mo, eri_mo) in the canonical MO basis."""
    c = result.mo_coeff
    h_mo = c.conj().T @ integrals.hcore @ c
    eri_mo = np.einsum(
        "pqrs,pi,qj,rk,sl->ijkl",
        integrals.eri,
        c.conj(),
        c,
        c.conj(),
        c,
        optimize=True,
    )
    return h_mo, eri_mo


def electronic_energy_from_mo(h_mo, eri_mo, n_occ) -> float:
    """Independent RHF energy expression; guards the J/K index bookkeeping."""
    occ = range(n_occ)
    e1 = 2.0 * sum(h_mo[i, i].real for i in occ)
    e2 = sum(
        (2.0 * eri_mo[i, i, j, j] - eri_mo[i, j, j, i]).real for i in occ for j in occ
    )
    return e1 + e2
