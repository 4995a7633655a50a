"""Quadratic-form construction of the chain Hamiltonians.

Every Hamiltonian here is quadratic in the phase-space vector z = (x, p), so it is
stored as a symmetric matrix A with H = z.A.z / 2 and Hamilton's equations read
dz/dt = J A z with J = [[0, I], [-I, 0]].
"""
import numpy as np

from oscillators.chain.chain import EVEN, ChainSpec, HamiltonianRep, PhaseState
from oscillators.errors import InvalidArgumentError, UnsupportedOperationError


def _add_product(A: np.ndarray, i: int, j: int, c: float) -> None:
    # adds c * z_i * z_j to z.A.z / 2
    if i == j:
        A[i, i] += 2 * c
    else:
        A[i, j] += c
        A[j, i] += c


def alternating_pairing(size: int) -> np.ndarray:
    """Symmetric pattern of x_a x_b products with a odd, b even and sign (-1)^((b-a-1)/2).

    With 1-based indices this is the bracket multiplying (omega^2 - gamma^2) in the
    compact sum form, written as Q(x) = x.P.x / 2.
    """
    P = np.zeros((size, size))
    for a in range(0, size, 2):
        for b in range(a + 1, size, 2):
            P[a, b] = P[b, a] = (-1) ** ((b - a - 1) // 2)
    return P


def symplectic_unit(size: int) -> np.ndarray:
    eye = np.eye(size)
    zero = np.zeros((size, size))
    return np.block([[zero, eye], [-eye, zero]])


def _uniform_sum_matrix(spec: ChainSpec) -> np.ndarray:
    n = spec.size
    omega, gamma, epsilon = spec.omega, spec.gamma, spec.epsilon
    A = np.zeros((2 * n, 2 * n))
    for j in range(n - 1):
        _add_product(A, n + j, n + j + 1, 1.0)
    for j in range(n):
        _add_product(A, j, j, epsilon / 2)
        # (-1)^j with 1-based j
        _add_product(A, j, n + j, gamma * (-1) ** (j + 1))
    A[:n, :n] += (omega**2 - gamma**2) * alternating_pairing(n)
    return A


def _mirror_sum_matrix(spec: ChainSpec) -> np.ndarray:
    n = spec.size
    N = spec.n_pairs
    A = np.zeros((2 * n, 2 * n))
    for k in range(N):
        m = spec.mirror(k)
        sign = (-1) ** (k + 1)
        _add_product(A, k, n + k, sign * spec.gammas[k])
        _add_product(A, m, n + m, -sign * spec.gammas[k])
        _add_product(A, n + k, n + m, 1.0)
        _add_product(A, k, m, spec.omegas[k] ** 2 - spec.gammas[k] ** 2)
    if spec.parity == EVEN:
        for k in range(N - 1):
            _add_product(A, k, n - 2 - k, spec.epsilons[k])
            _add_product(A, k + 1, n - 1 - k, spec.epsilons[k])
        _add_product(A, N - 1, N - 1, spec.epsilons[N - 1] / 2)
        _add_product(A, N, N, spec.epsilons[N - 1] / 2)
    else:
        for k in range(N):
            _add_product(A, k, n - 2 - k, spec.epsilons[k])
            _add_product(A, k + 1, n - 1 - k, spec.epsilons[k])
        _add_product(A, N, N, spec.center_omega**2 / 2)
        _add_product(A, n + N, n + N, 0.5)
    return A


def product_factors(spec: ChainSpec) -> np.ndarray:
    """Rows F_k of the momentum factors p_k + gamma * (alternating coordinate sums).

    Odd k (1-based) picks up +gamma(x_{k+1} - x_{k+3} + ...), even k picks up
    -gamma(x_{k-1} - x_{k-3} + ...).
    """
    n = spec.size
    gamma = spec.gamma
    F = np.zeros((n, 2 * n))
    for k in range(n):
        F[k, n + k] = 1.0
        if k % 2 == 0:
            for j, b in enumerate(range(k + 1, n, 2)):
                F[k, b] = gamma * (-1) ** j
        else:
            for j, b in enumerate(range(k - 1, -1, -2)):
                F[k, b] = -gamma * (-1) ** j
    return F


def _product_matrix(spec: ChainSpec) -> np.ndarray:
    n = spec.size
    F = product_factors(spec)
    A = np.zeros((2 * n, 2 * n))
    for k in range(n - 1):
        A += np.outer(F[k], F[k + 1]) + np.outer(F[k + 1], F[k])
    A[:n, :n] += spec.omega**2 * alternating_pairing(n) + spec.epsilon * np.eye(n)
    return A


def gauge_matrix(size: int, gauge_constants: dict) -> np.ndarray:
    """Linear map G with G z = (x, p + S x), S symmetric with S_mn = a_mn."""
    S = np.zeros((size, size))
    for (m, n), a in gauge_constants.items():
        if n > size:
            raise InvalidArgumentError(f"gauge index ({m}, {n}) exceeds chain size {size}")
        S[m - 1, n - 1] = S[n - 1, m - 1] = a
    G = np.eye(2 * size)
    G[size:, :size] = S
    return G


def hamiltonian_matrix(spec: ChainSpec, rep: HamiltonianRep) -> np.ndarray:
    """Symmetric matrix A of H = z.A.z / 2 for the given representation.

    The sum representation is the compact nearest-neighbour momentum form for uniform
    even chains and the mirror-pairing form otherwise. The gauge representation is the
    sum representation with momenta shifted by the gauge constants.
    """
    if rep.tag == "product":
        if spec.parity != EVEN or not spec.uniform:
            raise UnsupportedOperationError("the product representation needs a uniform even chain")
        return _product_matrix(spec)
    if spec.parity == EVEN and spec.uniform:
        A = _uniform_sum_matrix(spec)
    else:
        A = _mirror_sum_matrix(spec)
    if rep.tag == "gauge":
        G = gauge_matrix(spec.size, rep.gauge_constants)
        A = G.T @ A @ G
    return A


def flow_matrix(spec: ChainSpec, rep: HamiltonianRep) -> np.ndarray:
    """Matrix J A of the linear Hamiltonian flow dz/dt = J A z."""
    return symplectic_unit(spec.size) @ hamiltonian_matrix(spec, rep)


def _check_state(spec: ChainSpec, state: PhaseState) -> None:
    if state.size != spec.size:
        raise InvalidArgumentError(
            f"state has {state.size} oscillators but the chain has {spec.size}"
        )


def eval_hamiltonian(spec: ChainSpec, rep: HamiltonianRep, state: PhaseState) -> float:
    _check_state(spec, state)
    z = state.as_vector()
    return 0.5 * float(z @ hamiltonian_matrix(spec, rep) @ z)


def equations_of_motion(spec: ChainSpec, rep: HamiltonianRep, state: PhaseState) -> PhaseState:
    """Hamilton's equations at a phase point.

    Returns:
        PhaseState: coords hold dx/dt and momenta hold dp/dt, time is carried over
    """
    _check_state(spec, state)
    dz = flow_matrix(spec, rep) @ state.as_vector()
    return PhaseState.from_vector(dz, state.time)


def acceleration(spec: ChainSpec, rep: HamiltonianRep, state: PhaseState) -> np.ndarray:
    """Second time derivative of the coordinates implied by Hamilton's equations."""
    _check_state(spec, state)
    M = flow_matrix(spec, rep)
    return (M @ (M @ state.as_vector()))[: spec.size]


def gauge_state(rep: HamiltonianRep, state: PhaseState, inverse: bool = False) -> PhaseState:
    """Map a sum-representation state to the gauge-representation momenta (p - S x).

    With inverse=True the map goes back (p + S x).
    """
    G = gauge_matrix(state.size, rep.gauge_constants)
    S = G[state.size :, : state.size]
    shift = S @ state.coords
    momenta = state.momenta + shift if inverse else state.momenta - shift
    return PhaseState(state.coords, momenta, state.time)


def random_gauge(spec: ChainSpec, rng: np.random.Generator, scale: float = 1.0) -> HamiltonianRep:
    """Gauge representation with every one of the n(n-1)/2 constants drawn from N(0, scale^2)."""
    n = spec.size
    constants = {
        (m, k): float(scale * rng.standard_normal())
        for m in range(1, n + 1)
        for k in range(m + 1, n + 1)
    }
    return HamiltonianRep("gauge", constants)


def state_from_velocities(spec: ChainSpec, rep: HamiltonianRep, coords, velocities, time: float = 0.0) -> PhaseState:
    """Phase point of a representation whose Hamilton equations give dx/dt = velocities at coords."""
    n = spec.size
    x = np.asarray(coords, dtype=float)
    v = np.asarray(velocities, dtype=float)
    if x.shape != (n,) or v.shape != (n,):
        raise InvalidArgumentError(f"expected vectors of length {n}")
    A = hamiltonian_matrix(spec, rep)
    # dx/dt = A_px x + A_pp p
    try:
        p = np.linalg.solve(A[n:, n:], v - A[n:, :n] @ x)
    except np.linalg.LinAlgError as e:
        raise InvalidArgumentError("the momentum block of this representation is singular") from e
    return PhaseState(x, p, time)
