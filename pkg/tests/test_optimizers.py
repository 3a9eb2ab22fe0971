from __future__ import annotations

import numpy as np
import pytest

from nucleus_vqe import EncodingKind, GradientMode, SimulationMode
from nucleus_vqe.circuits import layered_ansatz, onehot_ansatz
from nucleus_vqe.encodings import encode
from nucleus_vqe.errors import ConfigError
from nucleus_vqe.optimizers import (
    GDConfig,
    SPSAConfig,
    adaptive_lr,
    calibrate_spsa,
    central_difference_gradient,
    gd_step,
    parameter_shift_gradient,
    rademacher,
    spsa_step,
)
from nucleus_vqe.vqe import EnergyEvaluator


def quadratic(theta: np.ndarray) -> float:
    return float(np.sum((theta - np.array([1.0, -2.0])) ** 2))


class TestGradients:
    @pytest.mark.parametrize(
        ("encoding", "circuit"),
        (
            (EncodingKind.gray, layered_ansatz(2, 3)),
            (EncodingKind.one_hot, onehot_ansatz(4)),
        ),
    )
    def test_parameter_shift_matches_central_difference(
        self, rng: np.random.Generator, worked_hamiltonian: np.ndarray, encoding, circuit
    ):
        hamiltonian = encode(worked_hamiltonian, encoding, 2)
        evaluator = EnergyEvaluator(hamiltonian, circuit, SimulationMode.exact)
        params = rng.uniform(-np.pi, np.pi, circuit.n_parameters)
        shifted = parameter_shift_gradient(circuit, params, lambda c, p: evaluator.exact(p, c))
        numeric = central_difference_gradient(params, evaluator.exact, step=1e-4)
        np.testing.assert_allclose(shifted, numeric, atol=1e-4)

    def test_evaluator_gradient_modes_agree(
        self, rng: np.random.Generator, worked_hamiltonian: np.ndarray
    ):
        circuit = layered_ansatz(2, 2)
        evaluator = EnergyEvaluator(
            encode(worked_hamiltonian, EncodingKind.binary), circuit, SimulationMode.exact
        )
        params = rng.uniform(-np.pi, np.pi, circuit.n_parameters)
        shift = evaluator.gradient(params, GDConfig())
        difference = evaluator.gradient(
            params,
            GDConfig(gradient_mode=GradientMode.central_difference, difference_step=1e-4),
        )
        np.testing.assert_allclose(shift, difference, atol=1e-4)

    def test_central_difference_of_quadratic(self):
        gradient = central_difference_gradient(np.zeros(2), quadratic)
        np.testing.assert_allclose(gradient, [-2.0, 4.0], atol=1e-9)


class TestSPSA:
    def test_rademacher(self, rng: np.random.Generator):
        assert set(rademacher(100, rng)) == {-1.0, 1.0}

    def test_calibration_on_linear_objective(self, rng: np.random.Generator):
        config = SPSAConfig(A=0.0, target_step=0.1)
        a = calibrate_spsa(lambda theta: 2.0 * theta[0], np.zeros(1), config, rng)
        assert a == pytest.approx(0.05)
        step = spsa_step(np.zeros(1), lambda theta: 2.0 * theta[0], 0, SPSAConfig(a=a, A=0.0), rng)
        assert abs(step[0]) == pytest.approx(0.1)

    def test_flat_objective_calibration(self, rng: np.random.Generator):
        assert calibrate_spsa(lambda theta: 1.0, np.zeros(3), SPSAConfig(A=0.0), rng) == 0.1

    def test_gains(self):
        a_k, c_k = SPSAConfig(a=0.2, c=0.1, A=10.0).gains(0)
        assert a_k == pytest.approx(0.2 / 11**0.602)
        assert c_k == pytest.approx(0.1)

    def test_unresolved_gains(self):
        with pytest.raises(ConfigError):
            SPSAConfig().gains(0)

    def test_resolve_defaults_stability_to_tenth_of_iterations(self, rng: np.random.Generator):
        resolved = SPSAConfig(a=0.3).resolve(500, quadratic, np.zeros(2), rng)
        assert resolved.A == 50.0 and resolved.a == 0.3

    def test_resolve_calibrates(self, rng: np.random.Generator):
        resolved = SPSAConfig().resolve(100, quadratic, np.zeros(2), rng)
        assert resolved.a is not None and resolved.a > 0

    def test_converges_on_quadratic(self):
        rng = np.random.default_rng(4)
        config = SPSAConfig(a=0.2, c=0.1, A=10.0)
        theta = np.zeros(2)
        for k in range(500):
            theta = spsa_step(theta, quadratic, k, config, rng)
        np.testing.assert_allclose(theta, [1.0, -2.0], atol=0.05)

    @pytest.mark.parametrize(
        "kwargs",
        ({"a": 0.0}, {"c": -0.1}, {"A": -1.0}, {"target_step": 0.0}, {"calibration_pairs": 0}),
    )
    def test_invalid_settings(self, kwargs: dict):
        with pytest.raises(ConfigError):
            SPSAConfig(**kwargs)


class TestGradientDescent:
    def test_step(self):
        theta = gd_step(np.zeros(2), lambda t: np.array([1.0, -2.0]), 0.1)
        np.testing.assert_allclose(theta, [-0.1, 0.2])

    def test_zero_rate_skips_gradient(self):
        def fail(theta: np.ndarray) -> np.ndarray:
            raise AssertionError("gradient evaluated")

        np.testing.assert_array_equal(gd_step(np.ones(2), fail, 0.0), np.ones(2))

    def test_rate_grows_while_energy_falls(self):
        config = GDConfig()
        assert adaptive_lr(list(range(10, 0, -1)), 0.01, config) == pytest.approx(0.0105)

    def test_rate_shrinks_while_energy_rises(self):
        config = GDConfig()
        assert adaptive_lr(list(range(10)), 0.01, config) == pytest.approx(0.008)

    def test_rate_is_clamped(self):
        config = GDConfig()
        assert adaptive_lr(list(range(10, 0, -1)), config.lr_max, config) == config.lr_max
        assert adaptive_lr(list(range(10)), config.lr_min, config) == config.lr_min

    def test_only_last_window_counts(self):
        history = list(range(100, 0, -1)) + list(range(10))
        assert adaptive_lr(history, 0.01, GDConfig()) == pytest.approx(0.008)

    @pytest.mark.parametrize(
        "kwargs",
        (
            {"lr_init": 0.1},
            {"lr_min": 0.0},
            {"window": 1},
            {"down": 0.0},
            {"difference_step": 0.0},
        ),
    )
    def test_invalid_settings(self, kwargs: dict):
        with pytest.raises(ConfigError):
            GDConfig(**kwargs)
