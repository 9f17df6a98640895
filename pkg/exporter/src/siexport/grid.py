"""Uniform real-space mesh, FFT conventions and Bloch-sum evaluation.

Fourier bookkeeping used throughout (u periodic over the cell, N mesh
points, volume V):

    fftn(u)[m]  = sum_n u(r_n) exp(-i G_m . r_n)          (numpy C layout)
    u_hat(G)    = fftn(u)[m] / N        (series coefficient, u = sum u_hat e^{iGr})
    int_V conj(f) g dr = (V/N) sum_n conj(f) g  =  (V/N^2) sum_m conj(F) G
"""
from __future__ import annotations

import math

import numpy as np

from .basis import Shell
from .lattice import Cell
from .pseudo import GthPseudo, projector_radial_reduced, solid_harmonics


def mesh_for_cutoff(cell: Cell, ecut: float) -> tuple[int, int, int]:
    """Smallest odd mesh resolving plane waves with |G|^2/2 <= ecut."""
    gmax = math.sqrt(2.0 * ecut)
    mesh = []
    for i in range(3):
        n = int(math.ceil(gmax * np.linalg.norm(cell.vectors[i]) / (2.0 * np.pi)))
        mesh.append(2 * n + 1)
    return tuple(mesh)


def grid_points(cell: Cell, mesh) -> np.ndarray:
    """(N, 3) cartesian mesh points, C-ordered to match numpy FFT layout."""
    fracs = [np.arange(n) / n for n in mesh]
    f1, f2, f3 = np.meshgrid(*fracs, indexing="ij")
    frac = np.stack([f1.ravel(), f2.ravel(), f3.ravel()], axis=1)
    return frac @ cell.vectors


def g_vectors(cell: Cell, mesh) -> np.ndarray:
    """(N, 3) cartesian G vectors in numpy FFT frequency order."""
    freqs = [np.fft.fftfreq(n, d=1.0 / n) for n in mesh]
    m1, m2, m3 = np.meshgrid(*freqs, indexing="ij")
    m = np.stack([m1.ravel(), m2.ravel(), m3.ravel()], axis=1)
    return m @ cell.reciprocal


def _images_within(cell: Cell, radius: float) -> np.ndarray:
    recip = cell.reciprocal
    counts = []
    for i in range(3):
        spacing = 2.0 * np.pi / np.linalg.norm(recip[i])
        counts.append(int(math.ceil(radius / spacing)) + 1)
    shifts = []
    for n1 in range(-counts[0], counts[0] + 1):
        for n2 in range(-counts[1], counts[1] + 1):
            for n3 in range(-counts[2], counts[2] + 1):
                shifts.append(n1 * cell.vectors[0] + n2 * cell.vectors[1] + n3 * cell.vectors[2])
    return np.asarray(shifts)


def _bloch_sum(points, center, k_cart, images, radial_fn, l):
    """sum_T e^{i k.T} f(|r - c - T|) S_lm(r - c - T) on the mesh."""
    n_points = points.shape[0]
    values = np.zeros((n_points, 2 * l + 1), dtype=np.complex128)
    for shift in images:
        disp = points - center - shift
        r = np.linalg.norm(disp, axis=1)
        radial = radial_fn(r)
        if np.max(np.abs(radial)) < 1e-16:
            continue
        phase = np.exp(1j * float(k_cart @ shift))
        values += phase * radial[:, None] * solid_harmonics(l, disp)
    return values


def bloch_ao_values(
    cell: Cell,
    points: np.ndarray,
    shells_per_atom: list[tuple[np.ndarray, Shell]],
    k_cart: np.ndarray,
    tol: float = 1e-12,
) -> np.ndarray:
    """(N, n_ao) Bloch AO values; AO order = atoms, shells, m components."""
    columns = []
    for center, shell in shells_per_atom:
        radius = shell.cutoff_radius(tol) + float(np.max(np.linalg.norm(cell.vectors, axis=1)))
        images = _images_within(cell, radius)
        keep = np.linalg.norm(images, axis=1) <= radius
        images = images[keep]

        def radial(r, shell=shell):
            total = np.zeros_like(r)
            for alpha, coeff in zip(shell.exponents, shell.coefficients):
                total += coeff * np.exp(-alpha * r * r)
            return total

        block = _bloch_sum(points, center, k_cart, images, radial, shell.l)
        columns.extend(block[:, m] for m in range(2 * shell.l + 1))
    return np.stack(columns, axis=1)


def bloch_projector_values(
    cell: Cell,
    points: np.ndarray,
    atoms: list[tuple[np.ndarray, GthPseudo]],
    k_cart: np.ndarray,
):
    """Projector columns plus (h-matrix, column-index) blocks per atom and l.

    Returns (P, blocks): P is (N, n_proj); blocks is a list of
    (h_matrix, cols) with cols[i][m] giving the column of projector i,
    magnetic component m.
    """
    columns = []
    blocks = []
    for center, pseudo in atoms:
        for l, (r_l, h_rows) in sorted(pseudo.projectors.items()):
            h = np.asarray(h_rows, dtype=float)
            n_i = h.shape[0]
            # projectors are tightly localized; a one-cell halo suffices
            radius = 10.0 * r_l + float(np.max(np.linalg.norm(cell.vectors, axis=1)))
            images = _images_within(cell, radius)
            cols = []
            for i in range(1, n_i + 1):
                block = _bloch_sum(
                    points,
                    center,
                    k_cart,
                    images,
                    lambda r, i=i: projector_radial_reduced(l, i, r_l, r),
                    l,
                )
                start = len(columns)
                columns.extend(block[:, m] for m in range(2 * l + 1))
                cols.append(list(range(start, start + 2 * l + 1)))
            blocks.append((h, cols))
    if not columns:
        return np.zeros((points.shape[0], 0), dtype=np.complex128), []
    return np.stack(columns, axis=1), blocks
