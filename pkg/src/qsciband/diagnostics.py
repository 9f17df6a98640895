"""Excitation-level bucketing of sampling outcomes and distribution distances.

KL divergence uses base-2 logarithms; the Jensen-Shannon divergence built
from it is symmetric and bounded by 1.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .dets import Sector
from .statevector import SampleDistribution, StateVector

WRONG_NE = "wrong_Ne"
WRONG_SZ = "wrong_Sz"


def excitation_level(det: int, hf_det: int, sector: Sector) -> int | str:
    """Excitation level relative to the HF determinant, or a wrong-sector tag.

    Particle number is checked first, then Sz; otherwise the level counts
    electrons promoted out of HF-occupied slots.
    """
    det = int(det)
    if (det & sector.alpha_mask).bit_count() + (det & sector.beta_mask).bit_count() != (
        sector.n_electrons
    ) or det & ~(sector.alpha_mask | sector.beta_mask):
        return WRONG_NE
    if (det & sector.alpha_mask).bit_count() != sector.n_alpha:
        return WRONG_SZ
    virtual_mask = ~hf_det
    return (det & virtual_mask).bit_count()


@dataclass(frozen=True)
class ExcitationHistogram:
    """Weights per excitation level plus the two wrong-sector buckets."""

    level_counts: dict[int, float]
    wrong_ne: float
    wrong_sz: float
    total: float

    def frequencies(self) -> dict[str, float]:
        if self.total == 0:
            return {}
        out = {str(level): w / self.total for level, w in sorted(self.level_counts.items())}
        out[WRONG_NE] = self.wrong_ne / self.total
        out[WRONG_SZ] = self.wrong_sz / self.total
        return out

    @property
    def wrong_sector(self) -> float:
        return self.wrong_ne + self.wrong_sz

    def to_json(self) -> str:
        return json.dumps({"buckets": self.frequencies(), "total": self.total}, indent=1, sort_keys=True)


def histogram(
    weights: SampleDistribution | Mapping[int, float],
    hf_det: int,
    sector: Sector,
) -> ExcitationHistogram:
    """Bucket a counts/weights map by excitation level.

    Accepts a SampleDistribution or any det -> weight mapping, so exact
    probability distributions (uniform, |FCI|^2) go through the same
    bucketing as finite-shot counts.
    """
    if isinstance(weights, SampleDistribution):
        weights = weights.counts
    levels: dict[int, float] = {}
    wrong_ne = wrong_sz = 0.0
    total = 0.0
    for det, weight in weights.items():
        total += weight
        tag = excitation_level(det, hf_det, sector)
        if tag == WRONG_NE:
            wrong_ne += weight
        elif tag == WRONG_SZ:
            wrong_sz += weight
        else:
            levels[tag] = levels.get(tag, 0.0) + weight
    return ExcitationHistogram(
        level_counts=levels, wrong_ne=wrong_ne, wrong_sz=wrong_sz, total=total
    )


def amplitude_weights(state: StateVector) -> dict[int, float]:
    """|amplitude|^2 map of a statevector (ideal-sampling distribution)."""
    probs = np.abs(np.asarray(state)) ** 2
    support = np.nonzero(probs)[0]
    return {int(det): float(probs[det]) for det in support}


def uniform_weights(n_qubits: int) -> dict[int, float]:
    dim = 1 << n_qubits
    w = 1.0 / dim
    return {det: w for det in range(dim)}


def _as_distribution(p) -> dict:
    if isinstance(p, SampleDistribution):
        return p.frequencies()
    if isinstance(p, Mapping):
        return dict(p)
    if isinstance(p, Sequence) or isinstance(p, np.ndarray):
        return {i: float(v) for i, v in enumerate(p)}
    raise TypeError(f"cannot interpret {type(p)} as a distribution")


def kl_divergence(p, q) -> float:
    """D_KL(P || Q) = sum_x P(x) log2(P(x)/Q(x)).

    Terms with P(x) = 0 contribute nothing; any x with P(x) > 0 but
    Q(x) = 0 makes the divergence +inf (returned, not raised).
    """
    pd, qd = _as_distribution(p), _as_distribution(q)
    total = 0.0
    for x, px in pd.items():
        if px <= 0.0:
            continue
        qx = qd.get(x, 0.0)
        if qx <= 0.0:
            return math.inf
        total += px * math.log2(px / qx)
    return total


def js_divergence(p, q) -> float:
    """Jensen-Shannon divergence (base 2): always finite, in [0, 1]."""
    pd, qd = _as_distribution(p), _as_distribution(q)
    mixture = {x: 0.5 * (pd.get(x, 0.0) + qd.get(x, 0.0)) for x in set(pd) | set(qd)}
    return 0.5 * kl_divergence(pd, mixture) + 0.5 * kl_divergence(qd, mixture)


@dataclass(frozen=True)
class DivergenceReport:
    d_kl_pq: float
    d_kl_qp: float
    d_js: float

    def to_json_dict(self) -> dict:
        def enc(v):
            return "inf" if math.isinf(v) else v

        return {"kl_pq": enc(self.d_kl_pq), "kl_qp": enc(self.d_kl_qp), "js": enc(self.d_js)}


def divergence_report(p, q) -> DivergenceReport:
    return DivergenceReport(
        d_kl_pq=kl_divergence(p, q),
        d_kl_qp=kl_divergence(q, p),
        d_js=js_divergence(p, q),
    )


def bucket_distribution(hist: ExcitationHistogram) -> dict[str, float]:
    """Histogram frequencies as a distribution over bucket labels."""
    return {label: f for label, f in hist.frequencies().items() if f > 0.0}
