"""Partial variational optimization of the ansatz against the penalized cost.

The optimizer is quasi-Newton (scipy BFGS, strong-Wolfe line search) on the
exact statevector cost.  `gradient` implements the two-point parameter-shift
rule; the optimizer itself consumes the mathematically identical adjoint
gradient, which costs O(1) statevector sweeps instead of O(n_params).
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np
import scipy.optimize as sopt

from .errors import ConfigError
from .pauli import (
    CompiledPauliOp,
    QubitHamiltonian,
    compile_operator,
    number_operator,
    penalty_operator,
)
from .statevector import AnsatzCircuit, AnsatzSpec, apply_ry, apply_y, simulate

GRADIENT_TOLERANCE = 1e-8
NUMBER_VARIANCE_THRESHOLD = 0.05  # soft post-run penalty-effectiveness check


@dataclass(frozen=True)
class VqeConfig:
    ansatz: AnsatzSpec
    penalty_number: float = 0.5
    number_target: int = 0
    penalty_spin: float = 0.2
    max_iterations: int = 400
    snapshot_iterations: tuple[int, ...] = ()
    seed: int = 0
    initial_params: np.ndarray | None = None
    initial_scale: float = 0.1
    gradient_tolerance: float = GRADIENT_TOLERANCE
    number_variance_threshold: float = NUMBER_VARIANCE_THRESHOLD

    def __post_init__(self):
        if self.penalty_number < 0 or self.penalty_spin < 0:
            raise ConfigError("penalty weights must be non-negative")
        if any(it > self.max_iterations for it in self.snapshot_iterations):
            raise ConfigError("snapshot iterations must not exceed max_iterations")

    def initial_vector(self) -> np.ndarray:
        if self.initial_params is not None:
            params = np.asarray(self.initial_params, dtype=np.float64)
            if params.shape != (self.ansatz.n_params,):
                raise ConfigError("initial_params length does not match the ansatz")
            return params.copy()
        rng = np.random.default_rng(self.seed)
        return rng.uniform(-self.initial_scale, self.initial_scale, self.ansatz.n_params)


@dataclass
class OptimizationTrace:
    costs: list[float]
    bare_energies: list[float]
    snapshots: dict[int, np.ndarray]
    converged: bool
    n_iterations: int
    message: str = ""

    def snapshot(self, iteration: int) -> np.ndarray:
        """Parameters at `iteration`; once the run has stopped the iterate no
        longer changes, so later requests resolve to the final snapshot."""
        if iteration in self.snapshots:
            return self.snapshots[iteration]
        if iteration >= self.n_iterations and self.n_iterations in self.snapshots:
            return self.snapshots[self.n_iterations]
        raise KeyError(f"no snapshot recorded at iteration {iteration}")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "cost", "bare_energy"])
            for it, (cost, bare) in enumerate(zip(self.costs, self.bare_energies)):
                writer.writerow([it, repr(cost), repr(bare)])

    def write_snapshots_json(self, path) -> None:
        doc = {
            "converged": self.converged,
            "n_iterations": self.n_iterations,
            "message": self.message,
            "snapshots": {
                str(it): list(params) for it, params in sorted(self.snapshots.items())
            },
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")


class VqeProblem:
    """Ansatz + Hamiltonian + penalties, compiled once for many evaluations."""

    def __init__(
        self,
        circuit: AnsatzCircuit,
        hamiltonian: QubitHamiltonian,
        penalty_number: float = 0.0,
        number_target: int = 0,
        penalty_spin: float = 0.0,
        orbitals=None,
        order=None,
    ):
        self.circuit = circuit
        self.hamiltonian = compile_operator(hamiltonian)
        n = circuit.spec.n_qubits
        self.penalty: CompiledPauliOp | None = None
        if penalty_number or penalty_spin:
            pen = penalty_operator(n, penalty_number, number_target, penalty_spin, orbitals, order)
            self.penalty = compile_operator(pen)
        self.number_target = number_target
        self._number_sq: CompiledPauliOp | None = None
        self._orbitals = orbitals
        self._order = order

    def evaluate(self, params: np.ndarray) -> tuple[float, float]:
        """(penalized cost, bare energy) for one parameter vector."""
        state = simulate(self.circuit, params)
        bare = self.hamiltonian.expectation(state)
        cost = bare + (self.penalty.expectation(state) if self.penalty else 0.0)
        return cost, bare

    def cost(self, params: np.ndarray) -> float:
        return self.evaluate(params)[0]

    def bare_energy(self, params: np.ndarray) -> float:
        return self.evaluate(params)[1]

    def gradient(self, params: np.ndarray) -> np.ndarray:
        """Two-point parameter-shift gradient of the penalized cost:
        g_k = [cost(theta_k + pi/2) - cost(theta_k - pi/2)] / 2."""
        params = np.asarray(params, dtype=np.float64)
        grad = np.empty_like(params)
        for k in range(len(params)):
            shifted = params.copy()
            shifted[k] = params[k] + 0.5 * np.pi
            plus = self.cost(shifted)
            shifted[k] = params[k] - 0.5 * np.pi
            minus = self.cost(shifted)
            grad[k] = 0.5 * (plus - minus)
        return grad

    def cost_and_adjoint_gradient(self, params: np.ndarray) -> tuple[float, float, np.ndarray]:
        """(cost, bare, d cost / d params) via reverse-mode sweep.

        Exact for this circuit because every parametrized gate is an Ry and
        Y commutes with Ry on the same qubit, so a whole layer has the
        derivative (-i/2) Y_q * layer.
        """
        circuit = self.circuit
        n = circuit.spec.n_qubits
        depth = circuit.spec.depth
        layers = circuit.layer_params(params)

        psi = simulate(circuit, params)
        lam = self.hamiltonian.apply(psi)
        bare = np.vdot(psi, lam).real  # one apply serves the energy and the sweep
        cost = bare
        if self.penalty is not None:
            penalty_applied = self.penalty.apply(psi)
            cost = bare + np.vdot(psi, penalty_applied).real
            lam = lam + penalty_applied

        grad = np.zeros_like(layers)
        ket = psi
        for layer in range(depth, -1, -1):
            # d cost/d theta = 2 Re <lam|(-i/2) Y|ket> = Im <lam|Y|ket>
            for qubit in range(n):
                grad[layer, qubit] = np.vdot(lam, apply_y(ket, n, qubit)).imag
            if layer > 0:
                for qubit in range(n):
                    theta = layers[layer, qubit]
                    if theta != 0.0:
                        ket = apply_ry(ket, n, qubit, -theta)
                        lam = apply_ry(lam, n, qubit, -theta)
                ket = circuit.entangle(ket, layer - 1)
                lam = circuit.entangle(lam, layer - 1)
        return cost, bare, grad.reshape(-1)

    def number_variance(self, params: np.ndarray) -> float:
        """<(N - target)^2> on the simulated state (penalty-effectiveness probe)."""
        if self._number_sq is None:
            n = self.circuit.spec.n_qubits
            masks = number_operator(n).mask_dict()
            masks[(0, 0)] = masks.get((0, 0), 0j) - self.number_target
            from .pauli import _mask_mul  # local: internal mask algebra

            squared = QubitHamiltonian.from_mask_dict(n, _mask_mul(masks, masks))
            self._number_sq = compile_operator(squared)
        return self._number_sq.expectation(simulate(self.circuit, params))


def optimize(problem: VqeProblem, config: VqeConfig) -> OptimizationTrace:
    """BFGS up to max_iterations or gradient-norm tolerance.

    Deterministic given the initial parameters; line-search failures
    terminate gracefully with converged=False.
    """
    x0 = config.initial_vector()
    cache: dict[bytes, tuple[float, float]] = {}

    def fun(x):
        cost, bare, grad = problem.cost_and_adjoint_gradient(x)
        cache[x.tobytes()] = (cost, bare)
        if len(cache) > 64:
            cache.pop(next(iter(cache)))
        return cost, grad

    cost0, bare0 = problem.evaluate(x0)
    costs = [cost0]
    bares = [bare0]
    snapshots: dict[int, np.ndarray] = {}
    wanted = set(config.snapshot_iterations)
    if 0 in wanted or not config.max_iterations:
        snapshots[0] = x0.copy()

    if config.max_iterations == 0:
        return OptimizationTrace(
            costs=costs,
            bare_energies=bares,
            snapshots=snapshots,
            converged=False,
            n_iterations=0,
            message="no iterations requested",
        )

    iteration = 0

    def callback(xk):
        nonlocal iteration
        iteration += 1
        cached = cache.get(xk.tobytes())
        if cached is None:
            cached = problem.evaluate(xk)
        costs.append(cached[0])
        bares.append(cached[1])
        if iteration in wanted:
            snapshots[iteration] = xk.copy()

    result = sopt.minimize(
        fun,
        x0,
        jac=True,
        method="BFGS",
        callback=callback,
        options={
            "maxiter": config.max_iterations,
            "gtol": config.gradient_tolerance,
        },
    )
    snapshots.setdefault(iteration, np.asarray(result.x, dtype=np.float64).copy())
    return OptimizationTrace(
        costs=costs,
        bare_energies=bares,
        snapshots=snapshots,
        converged=bool(result.success),
        n_iterations=iteration,
        message=str(result.message),
    )
