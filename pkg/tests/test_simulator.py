import math

import numpy as np
import pytest

from qaoa_maxcut.graphs import Graph, gen_erdos_renyi, max_cut_brute_force
from qaoa_maxcut.optimize import Bounds, maximize_bounded
from qaoa_maxcut.simulator import (
    ExpectationEvaluator,
    Parameters,
    apply_mixer,
    apply_phase_separator,
    approximation_ratio,
    expectation,
    expectation_dense_oracle,
    gradient,
    initial_plus_state,
    prepare_ansatz,
)

K2 = Graph(n=2, edges=((0, 1),))
K3 = Graph(n=3, edges=((0, 1), (1, 2), (0, 2)))


def k2_closed_form(gamma: float, beta: float) -> float:
    # Single-edge depth-1 expectation, from a 2x2-kernel hand calculation.
    return 0.5 * (1.0 + math.sin(4.0 * beta) * math.sin(gamma))


def random_phi(rng, p, gamma_hi=2 * math.pi, beta_hi=math.pi) -> Parameters:
    return Parameters(
        gammas=tuple(rng.uniform(0, gamma_hi, p)),
        betas=tuple(rng.uniform(0, beta_hi, p)),
    )


class TestParameters:
    def test_round_trip_through_flat_array(self):
        phi = Parameters(gammas=(0.1, 0.2), betas=(0.3, 0.4))
        assert Parameters.from_array(phi.to_array()) == phi

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="equal length"):
            Parameters(gammas=(0.1,), betas=())

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="depth"):
            Parameters(gammas=(), betas=())


class TestInitialState:
    def test_single_qubit(self):
        np.testing.assert_allclose(initial_plus_state(1), [2**-0.5] * 2)

    def test_two_qubits(self):
        np.testing.assert_allclose(initial_plus_state(2), [0.5] * 4)

    def test_ten_qubits(self):
        state = initial_plus_state(10)
        np.testing.assert_allclose(state, 2.0**-5)
        assert abs(np.linalg.norm(state) - 1.0) < 1e-12

    def test_guard(self):
        with pytest.raises(ValueError, match="guard"):
            initial_plus_state(21)


class TestPhaseSeparator:
    def test_gamma_zero_is_identity(self):
        state = initial_plus_state(3)
        np.testing.assert_array_equal(apply_phase_separator(state, K3, 0.0), state)

    def test_gamma_two_pi_is_identity(self):
        state = initial_plus_state(3)
        out = apply_phase_separator(state, K3, 2.0 * math.pi)
        np.testing.assert_allclose(out, state, atol=1e-12)

    def test_k2_half_pi_phases_cut_states(self):
        out = apply_phase_separator(initial_plus_state(2), K2, math.pi / 2)
        # Basis order (vertex 0 = LSB): 00, 10, 01, 11; cut-1 states get -i/2.
        np.testing.assert_allclose(out, [0.5, -0.5j, -0.5j, 0.5], atol=1e-15)

    def test_qubit_count_mismatch(self):
        with pytest.raises(ValueError, match="qubits"):
            apply_phase_separator(initial_plus_state(2), K3, 0.1)


class TestMixer:
    def test_beta_zero_is_identity(self):
        state = initial_plus_state(3)
        np.testing.assert_array_equal(apply_mixer(state, 0.0), state)

    def test_beta_half_pi_flips_all_bits(self):
        n = 3
        for z in (0, 3, 5):
            state = np.zeros(2**n, dtype=complex)
            state[z] = 1.0
            out = apply_mixer(state, math.pi / 2)
            expected = np.zeros(2**n, dtype=complex)
            expected[z ^ (2**n - 1)] = (-1j) ** n
            np.testing.assert_allclose(out, expected, atol=1e-15)

    def test_single_qubit_quarter_pi(self):
        state = np.array([1.0, 0.0], dtype=complex)
        out = apply_mixer(state, math.pi / 4)
        kernel = np.array(
            [
                [math.cos(math.pi / 4), -1j * math.sin(math.pi / 4)],
                [-1j * math.sin(math.pi / 4), math.cos(math.pi / 4)],
            ]
        )
        np.testing.assert_allclose(out, kernel @ state, atol=1e-15)

    def test_matches_explicit_kron_oracle(self):
        rng = np.random.default_rng(4)
        beta = 0.7312
        n = 3
        state = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        state /= np.linalg.norm(state)
        kernel = np.array(
            [
                [math.cos(beta), -1j * math.sin(beta)],
                [-1j * math.sin(beta), math.cos(beta)],
            ]
        )
        mixer = np.kron(np.kron(kernel, kernel), kernel)
        np.testing.assert_allclose(apply_mixer(state, beta), mixer @ state, atol=1e-12)


class TestAnsatz:
    def test_zero_angles_stay_uniform(self):
        phi = Parameters(gammas=(0.0,), betas=(0.0,))
        np.testing.assert_allclose(prepare_ansatz(K3, phi), initial_plus_state(3))

    def test_k2_optimum_concentrates_on_cut_states(self):
        phi = Parameters(gammas=(math.pi / 2,), betas=(math.pi / 8,))
        probs = np.abs(prepare_ansatz(K2, phi)) ** 2
        np.testing.assert_allclose(probs, [0.0, 0.5, 0.5, 0.0], atol=1e-12)

    def test_two_pi_gamma_shift_gives_identical_state(self):
        rng = np.random.default_rng(9)
        phi = random_phi(rng, 2)
        shifted = Parameters(
            gammas=(phi.gammas[0] + 2 * math.pi, phi.gammas[1]), betas=phi.betas
        )
        np.testing.assert_allclose(
            prepare_ansatz(K3, phi), prepare_ansatz(K3, shifted), atol=1e-12
        )


class TestExpectation:
    def test_zero_angles_give_half_the_edges(self):
        for g in (K2, K3, gen_erdos_renyi(8, 0.6, 3)):
            phi = Parameters(gammas=(0.0, 0.0), betas=(0.0, 0.0))
            assert abs(expectation(g, phi) - g.m / 2) < 1e-12

    def test_k2_closed_form_on_grid(self):
        for gamma in np.linspace(0, 2 * math.pi, 5, endpoint=False):
            for beta in np.linspace(0, math.pi, 5, endpoint=False):
                phi = Parameters(gammas=(gamma,), betas=(beta,))
                assert abs(expectation(K2, phi) - k2_closed_form(gamma, beta)) < 1e-12

    def test_k2_exact_maximum(self):
        phi = Parameters(gammas=(math.pi / 2,), betas=(math.pi / 8,))
        assert abs(expectation(K2, phi) - 1.0) < 1e-12

    def test_bounded_by_max_cut(self):
        rng = np.random.default_rng(17)
        for seed in range(5):
            g = gen_erdos_renyi(7, 0.5, seed)
            if g.m == 0:
                continue
            c_max = max_cut_brute_force(g)[0]
            for p in (1, 2, 3):
                f = expectation(g, random_phi(rng, p))
                assert -1e-9 <= f <= c_max + 1e-9


class TestDenseOracle:
    def test_agrees_with_fast_kernel(self):
        rng = np.random.default_rng(23)
        worst = 0.0
        for seed in range(10):
            g = gen_erdos_renyi(5, 0.6, seed)
            for p in (1, 2, 3):
                phi = random_phi(rng, p)
                worst = max(
                    worst,
                    abs(expectation(g, phi) - expectation_dense_oracle(g, phi)),
                )
        assert worst <= 1e-10

    def test_agrees_on_triangle(self):
        rng = np.random.default_rng(29)
        for _ in range(5):
            phi = random_phi(rng, 2)
            diff = abs(expectation(K3, phi) - expectation_dense_oracle(K3, phi))
            assert diff <= 1e-10

    def test_zero_angles(self):
        phi = Parameters(gammas=(0.0,), betas=(0.0,))
        assert abs(expectation_dense_oracle(K3, phi) - 1.5) < 1e-12

    def test_k2_exact_maximum(self):
        phi = Parameters(gammas=(math.pi / 2,), betas=(math.pi / 8,))
        assert abs(expectation_dense_oracle(K2, phi) - 1.0) < 1e-12

    def test_size_guard(self):
        g = gen_erdos_renyi(9, 0.5, 1)
        with pytest.raises(ValueError, match="n <= 8"):
            expectation_dense_oracle(g, Parameters(gammas=(0.1,), betas=(0.2,)))


class TestApproximationRatio:
    def test_perfect(self):
        assert approximation_ratio(2.0, 2) == 1.0

    def test_zero(self):
        assert approximation_ratio(0.0, 2) == 0.0

    def test_fraction(self):
        assert approximation_ratio(1.5, 2) == 0.75

    def test_zero_max_cut_rejected(self):
        with pytest.raises(ValueError, match="C_max"):
            approximation_ratio(0.5, 0)


class TestGradient:
    def test_k2_stationary_at_origin(self):
        phi = Parameters(gammas=(0.0,), betas=(0.0,))
        np.testing.assert_allclose(gradient(K2, phi), [0.0, 0.0], atol=1e-6)

    def test_k2_beta_derivative_closed_form(self):
        # dF/dbeta = 2 cos(4 beta) sin(gamma) = sqrt(2) at (pi/2, pi/16).
        phi = Parameters(gammas=(math.pi / 2,), betas=(math.pi / 16,))
        grad = gradient(K2, phi)
        assert abs(grad[1] - math.sqrt(2)) < 1e-6
        assert abs(grad[0]) < 1e-6  # dF/dgamma = 0.5 cos(gamma) sin(4 beta)

    def test_vanishes_at_interior_optimum(self):
        g = gen_erdos_renyi(6, 0.7, 2)
        ev = ExpectationEvaluator(g)
        res = maximize_bounded(
            ev.expectation,
            Parameters(gammas=(0.4, 0.5), betas=(0.35, 0.2)),
            Bounds(0.0, math.pi, 0.0, math.pi / 2),
        )
        x = res.phi_star.to_array()
        interior = np.all(x > 1e-3) and np.all(
            x < np.array([math.pi] * 2 + [math.pi / 2] * 2) - 1e-3
        )
        if interior:
            assert np.linalg.norm(gradient(g, res.phi_star)) <= 1e-4

    def test_step_halving_is_second_order(self):
        g = K3
        phi = Parameters(gammas=(0.8, 0.3), betas=(0.5, 0.9))
        g1 = gradient(g, phi, step=0.2)
        g2 = gradient(g, phi, step=0.1)
        g3 = gradient(g, phi, step=0.05)
        for k in range(4):
            d12, d23 = abs(g1[k] - g2[k]), abs(g2[k] - g3[k])
            if d12 < 1e-9:
                continue
            ratio = d12 / d23
            assert 4.0 / 8.0 <= ratio <= 4.0 * 8.0

    def test_bad_step_rejected(self):
        with pytest.raises(ValueError, match="step"):
            gradient(K2, Parameters(gammas=(0.1,), betas=(0.1,)), step=0.0)


class TestInvariants:
    def test_norm_preserved_through_layers(self):
        rng = np.random.default_rng(31)
        g = gen_erdos_renyi(8, 0.5, 6)
        state = initial_plus_state(8)
        for _ in range(6):
            state = apply_phase_separator(state, g, rng.uniform(0, 2 * math.pi))
            state = apply_mixer(state, rng.uniform(0, math.pi))
            assert abs(np.linalg.norm(state) - 1.0) <= 1e-12

    def test_phase_separator_composes_additively(self):
        state = initial_plus_state(3)
        a = apply_phase_separator(apply_phase_separator(state, K3, 0.7), K3, 0.4)
        b = apply_phase_separator(state, K3, 1.1)
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_mixer_composes_additively(self):
        rng = np.random.default_rng(5)
        state = rng.normal(size=8) + 1j * rng.normal(size=8)
        state /= np.linalg.norm(state)
        a = apply_mixer(apply_mixer(state, 0.3), 0.9)
        b = apply_mixer(state, 1.2)
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_free_functions_do_not_mutate_input(self):
        state = initial_plus_state(3)
        before = state.copy()
        apply_phase_separator(state, K3, 1.0)
        apply_mixer(state, 0.5)
        np.testing.assert_array_equal(state, before)
