import numpy as np

from oscillators.chain.chain import EVEN, ChainSpec
from oscillators.chain.hamiltonians import alternating_pairing
from oscillators.errors import InvalidArgumentError, UnsupportedOperationError


def _require_uniform_even(spec: ChainSpec, what: str) -> None:
    if spec.parity != EVEN or not spec.uniform:
        raise UnsupportedOperationError(f"{what} is only defined for uniform even chains")


def _vectors(spec: ChainSpec, *arrays):
    out = [np.asarray(a, dtype=float) for a in arrays]
    for a in out:
        if a.shape != (spec.size,):
            raise InvalidArgumentError(f"expected a vector of length {spec.size}, got shape {a.shape}")
    return out


def eval_lagrangian(spec: ChainSpec, coords, velocities) -> float:
    """Lagrangian of the uniform 2N chain.

    L = sum over odd a < even b of sign_ab [gamma (x_a v_b - v_a x_b) - omega^2 x_a x_b
    + v_a v_b] - epsilon/2 sum x^2, with sign_ab = (-1)^((b-a-1)/2) (1-based).
    """
    _require_uniform_even(spec, "the Lagrangian")
    x, v = _vectors(spec, coords, velocities)
    P = alternating_pairing(spec.size)
    # keep only the (odd a, even b) half of the pattern for the antisymmetric term
    upper = np.triu(P)
    drift = float(x @ upper @ v - v @ upper @ x)
    return (
        spec.gamma * drift
        - 0.5 * spec.omega**2 * float(x @ P @ x)
        + 0.5 * float(v @ P @ v)
        - 0.5 * spec.epsilon * float(x @ x)
    )


def _gradient(f, point: np.ndarray, h: float) -> np.ndarray:
    grad = np.zeros_like(point)
    for i in range(len(point)):
        step = np.zeros_like(point)
        step[i] = h
        grad[i] = (f(point + step) - f(point - step)) / (2 * h)
    return grad


def euler_lagrange_residual(spec: ChainSpec, coords, velocities, accelerations, h: float = 1e-4) -> np.ndarray:
    """d/dt (dL/dv) - dL/dx along the motion (x, v, a), by central finite differences."""
    x, v, a = _vectors(spec, coords, velocities, accelerations)

    def dl_dv(xx, vv):
        return _gradient(lambda w: eval_lagrangian(spec, xx, w), vv, h)

    ddt = (dl_dv(x + h * v, v + h * a) - dl_dv(x - h * v, v - h * a)) / (2 * h)
    dl_dx = _gradient(lambda w: eval_lagrangian(spec, w, v), x, h)
    return ddt - dl_dx


def energy_series(spec: ChainSpec, coords: np.ndarray, velocities: np.ndarray) -> np.ndarray:
    """Conserved energy E_2N for stacked samples, coordinates along the last axis."""
    _require_uniform_even(spec, "the conserved energy")
    x = np.asarray(coords, dtype=float)
    v = np.asarray(velocities, dtype=float)
    if x.shape != v.shape or x.shape[-1] != spec.size:
        raise InvalidArgumentError(f"expected arrays with last axis {spec.size}, got {x.shape} and {v.shape}")
    omega2, epsilon = spec.omega**2, spec.epsilon
    energy = np.sum(v[..., :-1] * v[..., 1:], axis=-1) + omega2 * np.sum(x[..., :-1] * x[..., 1:], axis=-1)
    energy = energy + 0.5 * epsilon * (x[..., 0] ** 2 + x[..., -1] ** 2)
    energy = energy + epsilon * np.sum(x[..., 1:-1] ** 2, axis=-1)
    energy = energy + epsilon * np.sum(x[..., :-2] * x[..., 2:], axis=-1)
    return energy


def conserved_energy(spec: ChainSpec, coords, velocities) -> float:
    """Conserved energy E_2N of the uniform chain; gamma does not enter."""
    x, v = _vectors(spec, coords, velocities)
    return float(energy_series(spec, x, v))
