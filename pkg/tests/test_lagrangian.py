import numpy as np
import pytest

from oscillators.chain import (
    build_chain,
    build_uniform_chain,
    conserved_energy,
    energy_series,
    euler_lagrange_residual,
    eval_lagrangian,
    pencil_matrices,
)
from oscillators.errors import InvalidArgumentError, UnsupportedOperationError


def motion(spec, rng):
    C, K = pencil_matrices(spec)
    x, v = rng.normal(size=spec.size), rng.normal(size=spec.size)
    return x, v, -C @ v - K @ x


@pytest.mark.parametrize("N, gamma, epsilon", [(1, 0.1, 0.5), (2, 0.2, 0.45), (3, 0.05, 0.3)])
def test_euler_lagrange_equations_hold_on_the_motion(N, gamma, epsilon, rng):
    spec = build_uniform_chain(N, 1.0, gamma, epsilon)
    for _ in range(5):
        x, v, a = motion(spec, rng)
        assert np.max(np.abs(euler_lagrange_residual(spec, x, v, a))) < 1e-6


def test_euler_lagrange_detects_wrong_acceleration(rng):
    spec = build_uniform_chain(2, 1.0, 0.1, 0.45)
    x, v, a = motion(spec, rng)
    assert np.max(np.abs(euler_lagrange_residual(spec, x, v, a + 0.1))) > 1e-2


def test_single_pair_lagrangian():
    spec = build_uniform_chain(1, 1.0, 0.1, 0.5)
    x, v = np.array([1.0, 2.0]), np.array([3.0, -1.0])
    # gamma (x1 v2 - v1 x2) - omega^2 x1 x2 + v1 v2 - eps/2 (x1^2 + x2^2)
    expected = 0.1 * (1.0 * -1.0 - 3.0 * 2.0) - 2.0 + 3.0 * -1.0 - 0.25 * 5.0
    assert eval_lagrangian(spec, x, v) == pytest.approx(expected)


@pytest.mark.parametrize("N", [1, 2, 4])
def test_energy_is_constant_along_the_motion(N, rng):
    spec = build_uniform_chain(N, 1.0, 0.1, 0.4)
    h = 1e-5
    for _ in range(5):
        x, v, a = motion(spec, rng)
        rate = (conserved_energy(spec, x + h * v, v + h * a) - conserved_energy(spec, x - h * v, v - h * a)) / (2 * h)
        assert abs(rate) < 1e-6


def test_energy_does_not_depend_on_gamma(rng):
    x, v = rng.normal(size=4), rng.normal(size=4)
    low = conserved_energy(build_uniform_chain(2, 1.0, 0.0, 0.3), x, v)
    high = conserved_energy(build_uniform_chain(2, 1.0, 0.4, 0.3), x, v)
    assert low == pytest.approx(high)


def test_energy_series_matches_pointwise_values(rng):
    spec = build_uniform_chain(3, 1.2, 0.1, 0.2)
    X, V = rng.normal(size=(7, 6)), rng.normal(size=(7, 6))
    series = energy_series(spec, X, V)
    assert series.shape == (7,)
    for i in range(7):
        assert series[i] == pytest.approx(conserved_energy(spec, X[i], V[i]))


def test_lagrangian_needs_uniform_even_chain():
    with pytest.raises(UnsupportedOperationError):
        eval_lagrangian(build_chain(1, 1.0, 0.1, 0.3, parity="odd"), np.zeros(3), np.zeros(3))
    with pytest.raises(UnsupportedOperationError):
        conserved_energy(build_chain(2, 1.0, [0.1, 0.2], 0.3), np.zeros(4), np.zeros(4))


def test_vector_lengths_checked():
    with pytest.raises(InvalidArgumentError):
        eval_lagrangian(build_uniform_chain(1, 1.0, 0.1, 0.3), np.zeros(3), np.zeros(3))
