"""SPSA, gradient descent with an adaptive learning rate, and circuit gradients."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import structlog

from nucleus_vqe import APP_NAME, GradientMode
from nucleus_vqe.circuits import Circuit, Gate, GateKind
from nucleus_vqe.errors import ConfigError

log = structlog.get_logger(APP_NAME)

Objective = Callable[[np.ndarray], float]
CircuitObjective = Callable[[Circuit, np.ndarray], float]

_C_PLUS = (math.sqrt(2) + 1) / (4 * math.sqrt(2))
_C_MINUS = (math.sqrt(2) - 1) / (4 * math.sqrt(2))

# gate kind -> (angle shift, weight) pairs whose weighted sum is dE/dφ
SHIFT_RULES: Dict[GateKind, Tuple[Tuple[float, float], ...]] = {
    GateKind.ry: ((math.pi / 2, 0.5), (-math.pi / 2, -0.5)),
    GateKind.cry: (
        (math.pi / 2, _C_PLUS),
        (-math.pi / 2, -_C_PLUS),
        (3 * math.pi / 2, -_C_MINUS),
        (-3 * math.pi / 2, _C_MINUS),
    ),
}


@dataclass(frozen=True)
class SPSAConfig:
    """SPSA gains a_k = a/(A+k+1)^α and c_k = c/(k+1)^γ.

    Leaving `a` unset calibrates it so the first step has magnitude
    `target_step`; leaving `A` unset uses 10% of the stage's iterations.
    """

    a: Optional[float] = None
    c: float = 0.1
    A: Optional[float] = None
    alpha: float = 0.602
    gamma: float = 0.101
    target_step: float = 0.1
    calibration_pairs: int = 25

    def __post_init__(self) -> None:
        if self.a is not None and self.a <= 0:
            raise ConfigError("SPSA gain a must be positive")
        if self.c <= 0 or self.target_step <= 0 or self.calibration_pairs < 1:
            raise ConfigError("SPSA c, target_step and calibration_pairs must be positive")
        if self.A is not None and self.A < 0:
            raise ConfigError("SPSA stability constant A must be >= 0")

    def gains(self, k: int) -> tuple[float, float]:
        """(a_k, c_k) for 0-based iteration k.

        Raises:
            ConfigError: `a` or `A` has not been resolved.
        """
        if self.a is None or self.A is None:
            raise ConfigError("SPSA gains need a and A; call resolve() first")
        return (
            self.a / (self.A + k + 1) ** self.alpha,
            self.c / (k + 1) ** self.gamma,
        )

    def resolve(
        self,
        iterations: int,
        objective: Objective,
        theta: np.ndarray,
        rng: np.random.Generator,
    ) -> SPSAConfig:
        """Fill in A and a for a stage of `iterations` steps."""
        stability = self.A if self.A is not None else 0.1 * iterations
        if self.a is not None:
            return replace(self, A=stability)
        a = calibrate_spsa(objective, theta, replace(self, A=stability), rng)
        return replace(self, a=a, A=stability)


@dataclass(frozen=True)
class GDConfig:
    """Gradient descent with a learning rate adapted to the energy trend."""

    lr_init: float = 0.005
    lr_min: float = 1e-5
    lr_max: float = 0.02
    window: int = 10
    up: float = 1.05
    down: float = 0.8
    gradient_mode: GradientMode = GradientMode.parameter_shift
    difference_step: float = 1e-3

    def __post_init__(self) -> None:
        if not 0 < self.lr_min <= self.lr_init <= self.lr_max:
            raise ConfigError("Learning rates must satisfy 0 < lr_min <= lr_init <= lr_max")
        if self.window < 2 or self.up <= 0 or self.down <= 0 or self.difference_step <= 0:
            raise ConfigError("window must be >= 2; up, down and difference_step positive")


def rademacher(size: int, rng: np.random.Generator) -> np.ndarray:
    """Random ±1 vector."""
    return rng.choice(np.array([-1.0, 1.0]), size=size)


def calibrate_spsa(
    objective: Objective,
    theta: np.ndarray,
    config: SPSAConfig,
    rng: np.random.Generator,
) -> float:
    """Gain `a` making the first SPSA step about `target_step` long.

    The gradient magnitude is averaged over `calibration_pairs` random
    perturbations at the starting point.
    """
    c = config.c
    stability = config.A or 0.0
    magnitude = 0.0
    for _ in range(config.calibration_pairs):
        delta = rademacher(theta.size, rng)
        magnitude += abs(objective(theta + c * delta) - objective(theta - c * delta)) / (2 * c)
    magnitude /= config.calibration_pairs
    if magnitude == 0:
        log.debug("SPSA calibration found a flat objective", theta_size=theta.size)
        return config.target_step
    a = config.target_step * (stability + 1) ** config.alpha / magnitude
    log.debug("Calibrated SPSA", a=a, gradient_magnitude=magnitude)
    return a


def spsa_step(
    theta: np.ndarray,
    objective: Objective,
    k: int,
    config: SPSAConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """One two-evaluation SPSA update with a Rademacher perturbation."""
    a_k, c_k = config.gains(k)
    delta = rademacher(theta.size, rng)
    difference = objective(theta + c_k * delta) - objective(theta - c_k * delta)
    return theta - a_k * difference / (2 * c_k) * delta


def gd_step(theta: np.ndarray, gradient: Callable[[np.ndarray], np.ndarray], lr: float) -> np.ndarray:
    """θ - lr·∇E(θ)."""
    if lr == 0:
        return np.array(theta, dtype=float)
    return theta - lr * gradient(theta)


def adaptive_lr(history: Sequence[float], lr: float, config: GDConfig) -> float:
    """Grow the rate while the fitted energy slope is negative, shrink it otherwise.

    A zero slope counts as no improvement.
    """
    window = np.asarray(history[-config.window :], dtype=float)
    slope = np.polyfit(np.arange(window.size), window, 1)[0]
    if slope < 0:
        return min(config.up * lr, config.lr_max)
    return max(config.down * lr, config.lr_min)


def shifted_circuit(circuit: Circuit, index: int, params: np.ndarray, shift: float) -> Circuit:
    """Circuit with gate `index` frozen at its current angle plus `shift`."""
    gate = circuit.gates[index]
    frozen = Gate(gate.kind, gate.qubits, angle=gate.resolved_angle(params) + shift)
    gates = circuit.gates[:index] + (frozen,) + circuit.gates[index + 1 :]
    return Circuit(circuit.n_qubits, gates, circuit.n_parameters)


def parameter_shift_gradient(
    circuit: Circuit, params: np.ndarray, objective: CircuitObjective
) -> np.ndarray:
    """Exact gradient from shifted evaluations of every parameterized gate.

    Ry uses the two-term rule, controlled Ry the four-term rule; the
    contributions of every gate fed by a parameter are summed, each times the
    gate's angle multiplier.
    """
    params = np.asarray(params, dtype=float)
    gradient = np.zeros(circuit.n_parameters)
    for index, gate in enumerate(circuit.gates):
        if gate.parameter is None:
            continue
        derivative = sum(
            weight * objective(shifted_circuit(circuit, index, params, shift), params)
            for shift, weight in SHIFT_RULES[gate.kind]
        )
        gradient[gate.parameter] += gate.scale * derivative
    return gradient


def central_difference_gradient(
    params: np.ndarray, objective: Objective, step: float = 1e-3
) -> np.ndarray:
    """(E(θ+h e_i) - E(θ-h e_i)) / 2h per parameter."""
    params = np.asarray(params, dtype=float)
    gradient = np.zeros(params.size)
    for i in range(params.size):
        offset = np.zeros(params.size)
        offset[i] = step
        gradient[i] = (objective(params + offset) - objective(params - offset)) / (2 * step)
    return gradient
