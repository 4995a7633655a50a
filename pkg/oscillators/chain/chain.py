import json
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from oscillators.errors import InvalidArgumentError

EVEN = "even"
ODD = "odd"

Profile = Union[float, Sequence[float]]


@dataclass(frozen=True)
class ChainSpec:
    """Description of a PT-symmetric chain.

    Oscillators are numbered 1..2N (even parity) or 1..2N+1 (odd parity, neutral
    oscillator at N+1). Odd indices left of the centre are lossy, even indices gainy,
    and oscillator 2N+1-k (2N+2-k for odd chains) mirrors oscillator k with the
    opposite sign of loss-gain. omegas[k-1], gammas[k-1] belong to the mirror pair
    of oscillator k, and epsilons[k-1] couples oscillator k to k+1 (and the mirrored
    bond). For even chains epsilons[N-1] is the central bond.
    """

    n_pairs: int
    parity: str
    omegas: Tuple[float, ...]
    gammas: Tuple[float, ...]
    epsilons: Tuple[float, ...]
    center_omega: float = 1.0

    def __post_init__(self):
        if not isinstance(self.n_pairs, (int, np.integer)) or self.n_pairs < 1:
            raise InvalidArgumentError(f"n_pairs must be a positive integer, got {self.n_pairs!r}")
        if self.parity not in (EVEN, ODD):
            raise InvalidArgumentError(f"parity must be '{EVEN}' or '{ODD}', got {self.parity!r}")
        for name in ("omegas", "gammas", "epsilons"):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != self.n_pairs:
                raise InvalidArgumentError(
                    f"{name} must have length {self.n_pairs}, got {len(values)}"
                )
            if not all(np.isfinite(values)):
                raise InvalidArgumentError(f"{name} must be finite, got {values}")
            object.__setattr__(self, name, values)
        if min(self.omegas) <= 0:
            raise InvalidArgumentError(f"all omegas must be positive, got {self.omegas}")
        if min(self.gammas) < 0:
            raise InvalidArgumentError(f"all gammas must be non-negative, got {self.gammas}")
        if self.center_omega <= 0:
            raise InvalidArgumentError(f"center_omega must be positive, got {self.center_omega}")

    @property
    def size(self) -> int:
        """Number of oscillators."""
        return 2 * self.n_pairs + (1 if self.parity == ODD else 0)

    @property
    def uniform(self) -> bool:
        return (
            len(set(self.omegas)) == 1
            and len(set(self.gammas)) == 1
            and len(set(self.epsilons)) == 1
        )

    @property
    def omega(self) -> float:
        return self.omegas[0]

    @property
    def gamma(self) -> float:
        return self.gammas[0]

    @property
    def epsilon(self) -> float:
        return self.epsilons[0]

    def mirror(self, k: int) -> int:
        """0-based index of the oscillator mirroring 0-based index k."""
        return self.size - 1 - k


@dataclass
class PhaseState:
    coords: np.ndarray
    momenta: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float).copy()
        self.momenta = np.asarray(self.momenta, dtype=float).copy()
        if self.coords.ndim != 1 or self.coords.shape != self.momenta.shape:
            raise InvalidArgumentError(
                f"coords and momenta must be 1-d of equal length, got {self.coords.shape} and {self.momenta.shape}"
            )

    @property
    def size(self) -> int:
        return len(self.coords)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.coords, self.momenta])

    @classmethod
    def from_vector(cls, z: np.ndarray, time: float = 0.0) -> "PhaseState":
        z = np.asarray(z, dtype=float)
        n = len(z) // 2
        return cls(z[:n], z[n:], time)

    @classmethod
    def zeros(cls, size: int, time: float = 0.0) -> "PhaseState":
        return cls(np.zeros(size), np.zeros(size), time)


@dataclass(frozen=True)
class HamiltonianRep:
    """Representation of the chain Hamiltonian.

    tag is "sum", "product" or "gauge". gauge_constants maps 1-based pairs (m, n)
    with m < n to the constant a_mn and must be empty unless tag is "gauge".
    """

    tag: str = "sum"
    gauge_constants: dict = field(default_factory=dict)

    TAGS = ("sum", "product", "gauge")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise InvalidArgumentError(f"unknown representation {self.tag!r}, expected one of {self.TAGS}")
        if self.gauge_constants and self.tag != "gauge":
            raise InvalidArgumentError("gauge constants are only allowed for the gauge representation")
        for (m, n) in self.gauge_constants:
            if not (1 <= m < n):
                raise InvalidArgumentError(f"gauge constant index must satisfy 1 <= m < n, got ({m}, {n})")


SUM = HamiltonianRep("sum")
PRODUCT = HamiltonianRep("product")


def _broadcast(value: Profile, n: int, name: str) -> Tuple[float, ...]:
    if np.ndim(value) == 0:
        return (float(value),) * n
    values = tuple(float(v) for v in value)
    if len(values) != n:
        raise InvalidArgumentError(f"{name} must be a scalar or have length {n}, got {len(values)}")
    return values


def build_uniform_chain(N: int, omega: float, gamma: float, epsilon: float) -> ChainSpec:
    """Even chain of N identical loss-gain pairs.

    Args:
        N (int): number of pairs, the chain has 2N oscillators
        omega (float): natural frequency, > 0
        gamma (float): loss-gain rate, >= 0
        epsilon (float): nearest-neighbour coupling

    Returns:
        ChainSpec: uniform even chain
    """
    if N is None or N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    if omega <= 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")
    return ChainSpec(int(N), EVEN, (omega,) * N, (gamma,) * N, (epsilon,) * N)


def build_chain(
    N: int,
    omegas: Profile,
    gammas: Profile,
    epsilons: Profile,
    parity: str = EVEN,
    center_omega: float = 1.0,
) -> ChainSpec:
    """Chain with per-pair profiles; scalars are broadcast to all pairs."""
    return ChainSpec(
        int(N),
        parity,
        _broadcast(omegas, N, "omegas"),
        _broadcast(gammas, N, "gammas"),
        _broadcast(epsilons, N, "epsilons"),
        center_omega,
    )


def odd_chain(N: int, omega: float, gamma: float, epsilon: float, center_omega: float = 1.0) -> ChainSpec:
    """Uniform 2N+1 chain: N loss-gain pairs around a neutral centre oscillator."""
    return build_chain(N, omega, gamma, epsilon, ODD, center_omega)


def chain_from_dict(data: dict) -> ChainSpec:
    allowed = {"n_pairs", "parity", "omega", "gamma", "epsilon", "center_omega"}
    unknown = set(data) - allowed
    if unknown:
        raise InvalidArgumentError(f"unknown chain keys: {sorted(unknown)}")
    try:
        return build_chain(
            data["n_pairs"],
            data["omega"],
            data["gamma"],
            data["epsilon"],
            data.get("parity", EVEN),
            data.get("center_omega", 1.0),
        )
    except KeyError as e:
        raise InvalidArgumentError(f"chain document is missing key {e}") from e


def chain_to_dict(spec: ChainSpec) -> dict:
    def squeeze(values):
        return values[0] if len(set(values)) == 1 else list(values)

    data = {
        "n_pairs": spec.n_pairs,
        "parity": spec.parity,
        "omega": squeeze(spec.omegas),
        "gamma": squeeze(spec.gammas),
        "epsilon": squeeze(spec.epsilons),
    }
    if spec.parity == ODD:
        data["center_omega"] = spec.center_omega
    return data


def chain_from_json(text: str) -> ChainSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidArgumentError(f"malformed chain JSON: {e}") from e
    return chain_from_dict(data)


def chain_to_json(spec: ChainSpec) -> str:
    return json.dumps(chain_to_dict(spec), sort_keys=True)


def pencil_matrices(spec: ChainSpec) -> Tuple[np.ndarray, np.ndarray]:
    """Damping and stiffness matrices of the second-order system x'' + C x' + K x = 0.

    Returns:
        Tuple[np.ndarray, np.ndarray]: (C, K), both of shape (size, size)
    """
    n = spec.size
    N = spec.n_pairs
    C = np.zeros((n, n))
    K = np.zeros((n, n))
    for k in range(N):
        m = spec.mirror(k)
        # 0-based even k is a 1-based odd, lossy oscillator
        sign = 1.0 if k % 2 == 0 else -1.0
        C[k, k] = 2 * sign * spec.gammas[k]
        C[m, m] = -2 * sign * spec.gammas[k]
        K[k, k] = K[m, m] = spec.omegas[k] ** 2
    if spec.parity == ODD:
        K[N, N] = spec.center_omega ** 2
    bonds = N if spec.parity == ODD else N - 1
    for k in range(bonds):
        m = spec.mirror(k)
        K[k, k + 1] = K[k + 1, k] = spec.epsilons[k]
        K[m, m - 1] = K[m - 1, m] = spec.epsilons[k]
    if spec.parity == EVEN:
        K[N - 1, N] = K[N, N - 1] = spec.epsilons[N - 1]
    return C, K


def second_order_residual(spec: ChainSpec, coords, velocities, accelerations) -> np.ndarray:
    """Residual x'' + C x' + K x of the chain equations of motion."""
    C, K = pencil_matrices(spec)
    x = np.asarray(coords, dtype=float)
    v = np.asarray(velocities, dtype=float)
    a = np.asarray(accelerations, dtype=float)
    if not (x.shape == v.shape == a.shape == (spec.size,)):
        raise InvalidArgumentError(f"expected vectors of length {spec.size}")
    return a + C @ v + K @ x
