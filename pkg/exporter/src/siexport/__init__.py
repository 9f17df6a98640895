"""Periodic RHF integral exporter emitting per-k-point Hamiltonian JSON."""

__version__ = "0.1.0"

from .export import ExportSpec, export, hubbard_dimer_document
from .scf import ExportError
