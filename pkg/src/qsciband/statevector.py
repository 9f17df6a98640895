"""Exact statevector simulation of the occupied/virtual-paired Ry-CZ ansatz.

Conventions (fixed so every sign in the tests is unambiguous):
  - amplitudes[y] = <y|psi>, bit i of y = occupation of qubit i;
  - Ry(theta) = exp(-i theta Y / 2), so Ry(pi)|0> = |1>;
  - entanglers are CZ gates, so the all-zero parameter vector reproduces
    the reference determinant exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dets import Sector, det_to_bitstring, bitstring_to_det
from .errors import ConfigError
from .pauli import CompiledPauliOp, QubitHamiltonian, compile_operator

NORM_ATOL = 1e-12

StateVector = np.ndarray  # complex128, length 2**n_qubits, unit norm


def ladder_entangler_pattern(n_qubits: int, depth: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Layer l pairs (2m, 2m+1) for even l and (2m+1, 2m+2) for odd l."""
    layers = []
    for layer in range(depth):
        if layer % 2 == 0:
            pairs = tuple((q, q + 1) for q in range(0, n_qubits - 1, 2))
        else:
            pairs = tuple((q, q + 1) for q in range(1, n_qubits - 1, 2))
        layers.append(pairs)
    return tuple(layers)


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int
    depth: int
    entangler_pattern: tuple[tuple[tuple[int, int], ...], ...] | None = None

    def __post_init__(self):
        if self.n_qubits < 1 or self.depth < 0:
            raise ConfigError("ansatz needs n_qubits >= 1 and depth >= 0")
        if self.n_qubits > 24:
            raise ConfigError("dense statevector engine supports at most 24 qubits")
        pattern = self.entangler_pattern
        if pattern is None:
            pattern = ladder_entangler_pattern(self.n_qubits, self.depth)
            object.__setattr__(self, "entangler_pattern", pattern)
        if len(pattern) != self.depth:
            raise ConfigError("entangler pattern must have exactly `depth` layers")
        for pairs in pattern:
            for a, b in pairs:
                if not (0 <= a < self.n_qubits and 0 <= b < self.n_qubits) or a == b:
                    raise ConfigError(f"bad entangler pair ({a},{b})")
                if a % 2 == b % 2:
                    raise ConfigError(
                        f"entangler pair ({a},{b}) joins two "
                        f"{'occupied' if a % 2 == 0 else 'virtual'}-slot qubits"
                    )

    @property
    def n_params(self) -> int:
        return self.n_qubits * (self.depth + 1)


def half_filled_reference(n_qubits: int) -> int:
    """|...0101>: every even (occupied-slot) qubit set."""
    det = 0
    for q in range(0, n_qubits, 2):
        det |= 1 << q
    return det


@dataclass
class AnsatzCircuit:
    """X-prepared reference followed by d+1 Ry layers interleaved with CZ layers."""

    spec: AnsatzSpec
    reference: int
    _cz_signs: list[np.ndarray] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.reference >> self.spec.n_qubits:
            raise ConfigError("reference determinant wider than the qubit register")
        idx = np.arange(1 << self.spec.n_qubits, dtype=np.uint64)
        for pairs in self.spec.entangler_pattern:
            sign = np.ones(len(idx), dtype=np.int8)
            for a, b in pairs:
                both = ((idx >> np.uint64(a)) & (idx >> np.uint64(b)) & np.uint64(1)).astype(bool)
                sign[both] *= -1
            self._cz_signs.append(sign)

    @property
    def n_params(self) -> int:
        return self.spec.n_params

    def layer_params(self, params: np.ndarray) -> np.ndarray:
        params = np.asarray(params, dtype=np.float64)
        if params.shape != (self.n_params,):
            raise ConfigError(
                f"expected {self.n_params} parameters, got {params.shape}"
            )
        return params.reshape(self.spec.depth + 1, self.spec.n_qubits)

    def prepare_reference(self) -> StateVector:
        amps = np.zeros(1 << self.spec.n_qubits, dtype=np.complex128)
        amps[self.reference] = 1.0
        return amps

    def entangle(self, amps: StateVector, layer: int) -> StateVector:
        return amps * self._cz_signs[layer]


def build_ansatz(spec: AnsatzSpec, reference: int | None = None) -> AnsatzCircuit:
    if reference is None:
        reference = half_filled_reference(spec.n_qubits)
    return AnsatzCircuit(spec=spec, reference=reference)


def apply_ry(amps: StateVector, n_qubits: int, qubit: int, theta: float) -> StateVector:
    """Ry on one qubit; returns a new array."""
    half = 0.5 * theta
    c, s = math.cos(half), math.sin(half)
    block = amps.reshape(-1, 2, 1 << qubit)
    out = np.empty_like(block)
    out[:, 0, :] = c * block[:, 0, :] - s * block[:, 1, :]
    out[:, 1, :] = s * block[:, 0, :] + c * block[:, 1, :]
    return out.reshape(amps.shape)


def apply_y(amps: StateVector, n_qubits: int, qubit: int) -> StateVector:
    """Pauli Y on one qubit: |0> -> i|1>, |1> -> -i|0>."""
    block = amps.reshape(-1, 2, 1 << qubit)
    out = np.empty_like(block)
    out[:, 0, :] = -1j * block[:, 1, :]
    out[:, 1, :] = 1j * block[:, 0, :]
    return out.reshape(amps.shape)


def ry_layer(amps: StateVector, n_qubits: int, thetas: np.ndarray) -> StateVector:
    for qubit in range(n_qubits):
        theta = thetas[qubit]
        if theta != 0.0:
            amps = apply_ry(amps, n_qubits, qubit, theta)
    return amps


def simulate(circuit: AnsatzCircuit, params: np.ndarray) -> StateVector:
    """Exact statevector for the given parameters."""
    layers = circuit.layer_params(params)
    n = circuit.spec.n_qubits
    amps = circuit.prepare_reference()
    for layer in range(circuit.spec.depth + 1):
        amps = ry_layer(amps, n, layers[layer])
        if layer < circuit.spec.depth:
            amps = circuit.entangle(amps, layer)
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > NORM_ATOL:
        raise ConfigError(f"simulated state lost normalization: |norm - 1| = {abs(norm-1):.2e}")
    return amps


def expectation(state: StateVector, op: QubitHamiltonian | CompiledPauliOp) -> float:
    """<psi|op|psi> with the imaginary residual checked then discarded."""
    compiled = op if isinstance(op, CompiledPauliOp) else compile_operator(op)
    return compiled.expectation(state)


@dataclass(frozen=True)
class SampleDistribution:
    """Counts of measured determinants."""

    counts: dict[int, int]
    total_shots: int
    seed: int
    n_qubits: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total_shots:
            raise ConfigError("sample counts do not sum to total_shots")

    def frequencies(self) -> dict[int, float]:
        if self.total_shots == 0:
            return {}
        return {det: c / self.total_shots for det, c in self.counts.items()}

    def to_json(self) -> str:
        doc = {
            "n_qubits": self.n_qubits,
            "total_shots": self.total_shots,
            "seed": self.seed,
            "counts": {
                det_to_bitstring(det, self.n_qubits): count
                for det, count in sorted(self.counts.items())
            },
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SampleDistribution":
        doc = json.loads(text)
        counts = {bitstring_to_det(bits): int(c) for bits, c in doc["counts"].items()}
        return cls(
            counts=counts,
            total_shots=int(doc["total_shots"]),
            seed=int(doc["seed"]),
            n_qubits=int(doc["n_qubits"]),
        )


def sample(
    state: StateVector,
    n_shots: int,
    seed: int,
    depolarize_p: float = 0.0,
) -> SampleDistribution:
    """Multinomial sampling from (1-p)|amps|^2 + p * uniform.

    The depolarizing knob is a sampling-time classical mixture standing in
    for a fully general noise model; p=1 is the maximally mixed case.
    """
    if n_shots <= 0:
        raise ConfigError("n_shots must be positive")
    if not 0.0 <= depolarize_p <= 1.0:
        raise ConfigError("depolarize_p must lie in [0, 1]")
    probs = np.abs(np.asarray(state, dtype=np.complex128)) ** 2
    dim = len(probs)
    mixed = (1.0 - depolarize_p) * probs + depolarize_p / dim
    mixed /= mixed.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n_shots, mixed)
    nonzero = np.nonzero(counts)[0]
    n_qubits = dim.bit_length() - 1
    return SampleDistribution(
        counts={int(det): int(counts[det]) for det in nonzero},
        total_shots=n_shots,
        seed=seed,
        n_qubits=n_qubits,
    )


def top_r_amplitudes(
    state: StateVector, r: int, sector: Sector | None = None
) -> list[int]:
    """The r largest-|amplitude|^2 determinants, ties broken by ascending
    bit value; optionally restricted to a (N_e, Sz) sector.  Returns fewer
    than r when the (restricted) support is smaller."""
    if r < 1:
        raise ConfigError("r must be >= 1")
    probs = np.abs(np.asarray(state)) ** 2
    dets = np.arange(len(probs), dtype=np.uint64)
    keep = probs > 0.0
    if sector is not None:
        keep &= sector.mask_array(dets)
    dets = dets[keep]
    probs = probs[keep]
    order = np.lexsort((dets, -probs))
    return [int(d) for d in dets[order[:r]]]
