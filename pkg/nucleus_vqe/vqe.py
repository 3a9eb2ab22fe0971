"""Staged VQE schedules with warm starts across truncation orders."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from nucleus_vqe import (
    APP_NAME,
    EncodingKind,
    GradientMode,
    Method,
    Scheme,
    SimulationMode,
)
from nucleus_vqe.circuits import Circuit, layered_ansatz, onehot_ansatz
from nucleus_vqe.encodings import compact_qubits, encode
from nucleus_vqe.errors import ConfigError
from nucleus_vqe.grouping import CommutingGroup, group_terms
from nucleus_vqe.hamiltonian import HamiltonianSpec, assemble, lowest_eigenvalue
from nucleus_vqe.optimizers import (
    GDConfig,
    SPSAConfig,
    adaptive_lr,
    central_difference_gradient,
    gd_step,
    parameter_shift_gradient,
    spsa_step,
)
from nucleus_vqe.pauli import PauliSum, sparse_matrix
from nucleus_vqe.simulator import NoiseModel, Seed, expectation_shots, run, run_noisy

log = structlog.get_logger(APP_NAME)


@dataclass(frozen=True)
class StageConfig:
    """One optimization stage of a schedule."""

    truncation: int
    iterations: int
    method: Method = Method.spsa
    mode: SimulationMode = SimulationMode.exact
    shots_per_group: int = 1000
    scheme: Scheme = Scheme.dgc

    def __post_init__(self) -> None:
        if self.truncation < 0:
            raise ConfigError(f"Stage truncation must be >= 0, got {self.truncation}")
        if self.iterations < 1:
            raise ConfigError(f"Stage iterations must be >= 1, got {self.iterations}")
        if self.mode is not SimulationMode.exact and self.shots_per_group < 1:
            raise ConfigError("Sampled stages need shots_per_group >= 1")


@dataclass(frozen=True)
class IterationRecord:
    """Energy after one optimizer update."""

    stage: int
    iteration: int
    energy: float
    parameters: Tuple[float, ...]


@dataclass
class RunTrace:
    """Everything recorded while running a schedule."""

    records: List[IterationRecord] = field(default_factory=list)
    stage_boundaries: List[int] = field(default_factory=list)
    shots_per_evaluation: List[int] = field(default_factory=list)
    initial_parameters: Tuple[float, ...] = ()
    final_parameters: Tuple[float, ...] = ()
    exact_energy: float = float("nan")
    nr_value: float = float("nan")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def energies(self) -> np.ndarray:
        """Energy of every record."""
        # noqa: DAR201
        return np.array([record.energy for record in self.records])

    def stage_records(self, stage: int) -> List[IterationRecord]:
        """Records of one stage."""
        return [record for record in self.records if record.stage == stage]

    def summary(self, last: int = 100) -> tuple[float, float]:
        """Mean and sample standard deviation of the last records."""
        return summarize(self, last)

    def to_csv(self) -> str:
        """``stage,iteration,energy`` rows."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["stage", "iteration", "energy"])
        for record in self.records:
            writer.writerow([record.stage, record.iteration, repr(record.energy)])
        return buffer.getvalue()

    def to_json(self, last: int = 100) -> Dict[str, Any]:
        """Full record including summary and noise-resilient value."""
        last = min(last, len(self))
        mean, std = summarize(self, last) if last else (float("nan"), float("nan"))
        return {
            "records": [
                {
                    "stage": r.stage,
                    "iteration": r.iteration,
                    "energy": r.energy,
                    "parameters": list(r.parameters),
                }
                for r in self.records
            ],
            "stage_boundaries": self.stage_boundaries,
            "shots_per_evaluation": self.shots_per_evaluation,
            "final_parameters": list(self.final_parameters),
            "summary": {"last": last, "mean": mean, "std": std},
            "exact_energy": self.exact_energy,
            "nr_value": self.nr_value,
        }


def summarize(trace: RunTrace | Sequence[float], last: int = 100) -> tuple[float, float]:
    """Mean and standard deviation (denominator M-1) of the last M energies.

    Raises:
        ConfigError: The trace holds fewer than M records.
    """
    energies = trace.energies if isinstance(trace, RunTrace) else np.asarray(trace, dtype=float)
    if last < 1 or energies.size < last:
        raise ConfigError(f"Cannot summarize the last {last} of {energies.size} energies")
    window = energies[-last:]
    std = float(np.std(window, ddof=1)) if last > 1 else 0.0
    return float(np.mean(window)), std


def build_ansatz(encoding: EncodingKind, size: int, layers: int = 4) -> Circuit:
    """Recursive ansatz for one-hot, layered Ry/CNOT ansatz for compact codes."""
    if encoding is EncodingKind.one_hot:
        return onehot_ansatz(size)
    return layered_ansatz(compact_qubits(size), layers)


class EnergyEvaluator:
    """Energy of the ansatz state for one Hamiltonian and evaluation mode."""

    def __init__(
        self,
        hamiltonian: PauliSum,
        circuit: Circuit,
        mode: SimulationMode,
        groups: Sequence[CommutingGroup] = (),
        shots_per_group: int = 1000,
        noise: Optional[NoiseModel] = None,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        """Create an evaluator.

        Args:
            hamiltonian: Encoded Hamiltonian.
            circuit: Ansatz.
            mode: Exact, shot-sampled or noisy evaluation.
            groups: Commuting groups for sampled modes.
            shots_per_group: Samples per group and evaluation.
            noise: Noise model for the noisy mode.
            rng: Generator shared by all sampled evaluations.
        """
        self.hamiltonian = hamiltonian
        self.circuit = circuit
        self.mode = mode
        self.groups = list(groups)
        self.shots_per_group = shots_per_group
        self.noise = noise or NoiseModel()
        self.rng = rng if rng is not None else np.random.default_rng()
        self.calls = 0
        self._matrix = sparse_matrix(hamiltonian)

    @property
    def shots_per_evaluation(self) -> int:
        """Total samples per energy estimate."""
        # noqa: DAR201
        if self.mode is SimulationMode.exact:
            return 0
        return self.shots_per_group * len(self.groups)

    def exact(self, params: Sequence[float], circuit: Optional[Circuit] = None) -> float:
        """Noiseless expectation value."""
        state = run(circuit if circuit is not None else self.circuit, params)
        return float(np.real(np.vdot(state, self._matrix @ state)))

    def __call__(self, params: Sequence[float], circuit: Optional[Circuit] = None) -> float:
        self.calls += 1
        circuit = circuit if circuit is not None else self.circuit
        if self.mode is SimulationMode.exact:
            return self.exact(params, circuit)
        if self.mode is SimulationMode.shot:
            return expectation_shots(
                run(circuit, params), self.groups, self.shots_per_group, self.rng
            )
        return expectation_shots(
            run_noisy(circuit, params, self.noise),
            self.groups,
            self.shots_per_group,
            self.rng,
            noise=self.noise,
        )

    def gradient(self, params: np.ndarray, config: GDConfig) -> np.ndarray:
        """Gradient estimate in the configured mode."""
        if config.gradient_mode is GradientMode.parameter_shift:
            return parameter_shift_gradient(
                self.circuit, params, lambda circuit, p: self(p, circuit)
            )
        return central_difference_gradient(params, self, config.difference_step)


def encode_stage(
    spec: HamiltonianSpec, encoding: EncodingKind, truncation: int
) -> PauliSum:
    """Encoded H_{N,K} for a stage's K."""
    stage_spec = spec.with_truncation(truncation)
    return encode(assemble(stage_spec), encoding, truncation)


def _run_spsa(
    evaluator: EnergyEvaluator,
    theta: np.ndarray,
    stage: StageConfig,
    config: SPSAConfig,
    rng: np.random.Generator,
    record: Any,
) -> np.ndarray:
    config = config.resolve(stage.iterations, evaluator, theta, rng)
    for k in range(stage.iterations):
        theta = spsa_step(theta, evaluator, k, config, rng)
        record(k, evaluator(theta), theta)
    return theta


def _run_gd(
    evaluator: EnergyEvaluator,
    theta: np.ndarray,
    stage: StageConfig,
    config: GDConfig,
    record: Any,
) -> np.ndarray:
    lr = config.lr_init
    history: List[float] = []
    for k in range(stage.iterations):
        theta = gd_step(theta, lambda p: evaluator.gradient(p, config), lr)
        energy = evaluator(theta)
        history.append(energy)
        record(k, energy, theta)
        if len(history) % config.window == 0:
            lr = adaptive_lr(history, lr, config)
    return theta


def run_schedule(
    spec: HamiltonianSpec,
    encoding: EncodingKind,
    stages: Sequence[StageConfig],
    layers: int = 4,
    noise: Optional[NoiseModel] = None,
    seed: Seed = None,
    spsa: SPSAConfig = SPSAConfig(),
    gd: GDConfig = GDConfig(),
    initial_parameters: Optional[Sequence[float]] = None,
) -> RunTrace:
    """Optimize stage after stage, each starting where the previous one ended.

    Args:
        spec: Hamiltonian specification; its K is the final (full) truncation.
        encoding: Qubit encoding shared by all stages.
        stages: Stage configurations, run in order.
        layers: Layers of the compact-code ansatz.
        noise: Noise model for noisy stages.
        seed: Seed for perturbations and sampling.
        spsa: SPSA settings.
        gd: Gradient descent settings.
        initial_parameters: Starting angles; all zero when omitted.

    Returns:
        The run trace with the noise-resilient value of the final parameters.

    Raises:
        ConfigError: Empty schedule or wrong number of initial parameters.
    """
    if not stages:
        raise ConfigError("A schedule needs at least one stage")
    rng = np.random.default_rng(seed)
    circuit = build_ansatz(encoding, spec.basis_size, layers)
    if initial_parameters is None:
        theta = np.zeros(circuit.n_parameters)
    else:
        theta = circuit.check_parameters(initial_parameters).copy()
    trace = RunTrace(initial_parameters=tuple(theta))
    for index, stage in enumerate(stages):
        hamiltonian = encode_stage(spec, encoding, stage.truncation)
        groups = (
            group_terms(hamiltonian, stage.scheme, encoding)
            if stage.mode is not SimulationMode.exact
            else []
        )
        evaluator = EnergyEvaluator(
            hamiltonian,
            circuit,
            stage.mode,
            groups,
            stage.shots_per_group,
            noise,
            rng,
        )
        trace.stage_boundaries.append(len(trace))
        trace.shots_per_evaluation.append(evaluator.shots_per_evaluation)
        log.debug(
            "Starting stage",
            stage=index,
            truncation=stage.truncation,
            method=stage.method.value,
            mode=stage.mode.value,
            iterations=stage.iterations,
            groups=len(groups),
        )

        def record(k: int, energy: float, params: np.ndarray, stage_id: int = index) -> None:
            trace.records.append(IterationRecord(stage_id, k, energy, tuple(params)))

        if stage.method is Method.spsa:
            theta = _run_spsa(evaluator, theta, stage, spsa, rng, record)
        else:
            theta = _run_gd(evaluator, theta, stage, gd, record)
        log.debug(
            "Finished stage",
            stage=index,
            energy=trace.records[-1].energy,
            evaluations=evaluator.calls,
        )
    full = encode(assemble(spec), encoding, spec.truncation)
    trace.final_parameters = tuple(theta)
    trace.exact_energy = lowest_eigenvalue(assemble(spec))
    trace.nr_value = EnergyEvaluator(full, circuit, SimulationMode.exact).exact(theta)
    return trace
