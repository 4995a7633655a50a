import numpy as np
import pytest

from oscillators.chain import (
    EVEN,
    ODD,
    PRODUCT,
    SUM,
    ChainSpec,
    HamiltonianRep,
    PhaseState,
    acceleration,
    apply_parity,
    apply_pt,
    apply_time_reversal,
    build_chain,
    build_uniform_chain,
    chain_from_json,
    chain_to_json,
    equations_of_motion,
    eval_hamiltonian,
    flow_matrix,
    gauge_state,
    odd_chain,
    pencil_matrices,
    random_gauge,
    second_order_residual,
    state_from_velocities,
)
from oscillators.errors import InvalidArgumentError, UnsupportedOperationError
from oscillators.spectral import pencil_eigenvalues, qep_spectrum, spectrum_distance


def random_state(rng, size):
    return PhaseState(rng.normal(size=size), rng.normal(size=size), 0.0)


def test_uniform_chain_layout():
    spec = build_uniform_chain(3, 1.0, 0.1, 0.4)
    assert spec.size == 6
    assert spec.parity == EVEN
    assert spec.uniform
    assert [spec.mirror(k) for k in range(6)] == [5, 4, 3, 2, 1, 0]


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(N=0, omegas=1.0, gammas=0.1, epsilons=0.5),
        dict(N=2, omegas=-1.0, gammas=0.1, epsilons=0.5),
        dict(N=2, omegas=1.0, gammas=-0.1, epsilons=0.5),
        dict(N=2, omegas=1.0, gammas=0.1, epsilons=[0.5, 0.5, 0.5]),
        dict(N=2, omegas=1.0, gammas=0.1, epsilons=0.5, parity="triangle"),
        dict(N=2, omegas=1.0, gammas=float("nan"), epsilons=0.5),
    ],
)
def test_invalid_chains_rejected(kwargs):
    with pytest.raises(InvalidArgumentError):
        build_chain(**kwargs)


def test_pencil_of_single_pair():
    C, K = pencil_matrices(build_uniform_chain(1, 1.0, 0.1, 0.5))
    np.testing.assert_allclose(C, np.diag([0.2, -0.2]))
    np.testing.assert_allclose(K, [[1.0, 0.5], [0.5, 1.0]])


def test_pencil_of_odd_chain():
    spec = build_chain(1, 2.0, 0.3, 0.7, parity=ODD, center_omega=1.5)
    C, K = pencil_matrices(spec)
    assert spec.size == 3
    np.testing.assert_allclose(np.diag(C), [0.6, 0.0, -0.6])
    np.testing.assert_allclose(K, [[4.0, 0.7, 0.0], [0.7, 2.25, 0.7], [0.0, 0.7, 4.0]])


def test_odd_chain_builder():
    spec = odd_chain(2, 1.0, 0.1, 0.4)
    assert spec == build_chain(2, 1.0, 0.1, 0.4, parity=ODD)
    assert spec.size == 5
    assert spec.center_omega == 1.0
    assert odd_chain(1, 2.0, 0.3, 0.7, center_omega=1.5) == build_chain(1, 2.0, 0.3, 0.7, parity=ODD, center_omega=1.5)


def test_pencil_is_pt_symmetric():
    spec = build_chain(3, [1.0, 1.2, 0.9], [0.1, 0.05, 0.2], [0.3, 0.4, 0.5])
    C, K = pencil_matrices(spec)
    P = np.fliplr(np.eye(spec.size))
    np.testing.assert_allclose(P @ C @ P, -C)
    np.testing.assert_allclose(P @ K @ P, K)


def test_chain_json_round_trip():
    spec = build_chain(2, [1.0, 1.1], 0.2, [0.3, 0.4], parity=ODD, center_omega=0.8)
    assert chain_from_json(chain_to_json(spec)) == spec


def test_chain_json_rejects_unknown_keys():
    with pytest.raises(InvalidArgumentError):
        chain_from_json('{"n_pairs": 1, "omega": 1, "gamma": 0, "epsilon": 0, "mass": 2}')
    with pytest.raises(InvalidArgumentError):
        chain_from_json('{"n_pairs": 1, "omega": 1')


CHAINS = [
    build_uniform_chain(1, 1.0, 0.1, 0.5),
    build_uniform_chain(2, 1.0, 0.1, 0.45),
    build_uniform_chain(3, 0.8, 0.3, 0.2),
    build_chain(2, [1.0, 1.3], [0.1, 0.2], [0.3, 0.6]),
    build_chain(1, 1.0, 0.1, 0.4, parity=ODD),
    build_chain(2, [1.0, 0.9], [0.2, 0.1], [0.5, 0.3], parity=ODD, center_omega=1.2),
]


@pytest.mark.parametrize("spec", CHAINS)
def test_hamilton_equations_reproduce_second_order_system(spec, rng):
    for _ in range(5):
        state = random_state(rng, spec.size)
        velocity = equations_of_motion(spec, SUM, state).coords
        accel = acceleration(spec, SUM, state)
        residual = second_order_residual(spec, state.coords, velocity, accel)
        assert np.max(np.abs(residual)) < 1e-12


@pytest.mark.parametrize("spec", CHAINS)
def test_flow_spectrum_matches_qep(spec):
    flow = flow_matrix(spec, SUM)
    frequencies = -1j * np.linalg.eigvals(flow)
    assert spectrum_distance(frequencies, qep_spectrum(spec).frequencies) < 1e-8


@pytest.mark.parametrize("N", [1, 2, 3])
def test_product_and_sum_give_identical_motion(N, rng):
    spec = build_uniform_chain(N, 1.0, 0.15, 0.4)
    for _ in range(5):
        x, v = rng.normal(size=spec.size), rng.normal(size=spec.size)
        a_sum = acceleration(spec, SUM, state_from_velocities(spec, SUM, x, v))
        a_product = acceleration(spec, PRODUCT, state_from_velocities(spec, PRODUCT, x, v))
        np.testing.assert_allclose(a_product, a_sum, atol=1e-12)


def test_product_needs_uniform_even_chain():
    with pytest.raises(UnsupportedOperationError):
        flow_matrix(build_chain(2, 1.0, [0.1, 0.2], 0.3), PRODUCT)
    with pytest.raises(UnsupportedOperationError):
        flow_matrix(build_chain(1, 1.0, 0.1, 0.3, parity=ODD), PRODUCT)


@pytest.mark.parametrize("N", [2, 3])
def test_gauge_leaves_coordinate_motion_unchanged(N, rng):
    spec = build_uniform_chain(N, 1.0, 0.1, 0.5)
    for _ in range(10):
        rep = random_gauge(spec, rng, scale=1.0)
        state = random_state(rng, spec.size)
        gauged = gauge_state(rep, state)
        np.testing.assert_allclose(
            equations_of_motion(spec, rep, gauged).coords, equations_of_motion(spec, SUM, state).coords, atol=1e-12
        )
        np.testing.assert_allclose(acceleration(spec, rep, gauged), acceleration(spec, SUM, state), atol=1e-12)
        assert eval_hamiltonian(spec, rep, gauged) == pytest.approx(eval_hamiltonian(spec, SUM, state), abs=1e-12)
        np.testing.assert_allclose(gauge_state(rep, gauged, inverse=True).momenta, state.momenta, atol=1e-14)


def test_gauge_spectrum_is_unchanged(rng):
    spec = build_uniform_chain(2, 1.0, 0.1, 0.45)
    rep = random_gauge(spec, rng, scale=2.0)
    reference = -1j * np.linalg.eigvals(flow_matrix(spec, SUM))
    gauged = -1j * np.linalg.eigvals(flow_matrix(spec, rep))
    assert spectrum_distance(reference, gauged) < 1e-8


def test_gauge_constants_validated():
    with pytest.raises(InvalidArgumentError):
        HamiltonianRep("gauge", {(2, 1): 0.5})
    with pytest.raises(InvalidArgumentError):
        HamiltonianRep("sum", {(1, 2): 0.5})
    with pytest.raises(InvalidArgumentError):
        HamiltonianRep("lagrange")


def test_pt_is_an_involution(rng):
    state = PhaseState(rng.normal(size=5), rng.normal(size=5), 1.5)
    twice = apply_pt(apply_pt(state))
    np.testing.assert_array_equal(twice.coords, state.coords)
    np.testing.assert_array_equal(twice.momenta, state.momenta)
    assert twice.time == state.time


def test_symmetry_components():
    state = PhaseState([1.0, 2.0, 3.0], [4.0, 5.0, 6.0], 2.0)
    parity = apply_parity(state)
    np.testing.assert_array_equal(parity.coords, [-3.0, -2.0, -1.0])
    np.testing.assert_array_equal(parity.momenta, [-6.0, -5.0, -4.0])
    reversed_state = apply_time_reversal(state)
    np.testing.assert_array_equal(reversed_state.momenta, [-4.0, -5.0, -6.0])
    assert reversed_state.time == 2.0
    assert apply_time_reversal(state, velocity_sense=True).time == -2.0


@pytest.mark.parametrize("spec", CHAINS)
def test_hamiltonian_is_pt_invariant(spec, rng):
    for _ in range(5):
        state = random_state(rng, spec.size)
        assert eval_hamiltonian(spec, SUM, apply_pt(state)) == pytest.approx(
            eval_hamiltonian(spec, SUM, state), abs=1e-12
        )


def test_state_size_checked():
    spec = build_uniform_chain(2, 1.0, 0.1, 0.4)
    with pytest.raises(InvalidArgumentError):
        eval_hamiltonian(spec, SUM, PhaseState.zeros(3))


def test_chain_spec_is_frozen():
    spec = build_uniform_chain(1, 1.0, 0.1, 0.5)
    with pytest.raises(Exception):
        spec.n_pairs = 2
    assert isinstance(spec, ChainSpec)
