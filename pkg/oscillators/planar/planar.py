"""Three oscillators in a triangle: x lossy, y neutral, z gainy.

x and z are coupled directly (eps2) and through y (eps1). With mu = lambda^2 the
frequency condition is the cubic p(mu) = mu^3 - alpha mu^2 + beta mu - sigma.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from oscillators.errors import InvalidArgumentError
from oscillators.parallel import parallel_map
from oscillators.regions.regions import RegionReport, build_report
from oscillators.spectral.spectral import (
    BROKEN,
    DEFAULT_IMAG_TOL,
    UNBROKEN,
    Spectrum,
    make_spectrum,
    pencil_eigenvalues,
)
from utils.logger import get_reporter

logger = get_reporter(__name__, "planar")

# np.roots resolves a double root only to about sqrt(machine epsilon)
CUBIC_ROOT_TOL = 1e-7
DEFAULT_EPS2_REFINE_TOL = 1e-8


@dataclass(frozen=True)
class TrioParams:
    omega: float
    gamma: float
    eps1: float
    eps2: float
    omega2: float = 1.0

    def __post_init__(self):
        if self.omega <= 0 or self.omega2 <= 0:
            raise InvalidArgumentError(f"frequencies must be positive, got omega={self.omega}, omega2={self.omega2}")
        if self.gamma < 0:
            raise InvalidArgumentError(f"gamma must be non-negative, got {self.gamma}")


@dataclass(frozen=True)
class CubicCoeffs:
    alpha: float
    beta: float
    sigma: float

    def __call__(self, mu):
        return mu**3 - self.alpha * mu**2 + self.beta * mu - self.sigma


def cubic_coefficients(params: TrioParams) -> CubicCoeffs:
    w2, g2 = params.omega**2, params.gamma**2
    v2 = params.omega2**2
    e1, e2 = params.eps1, params.eps2
    alpha = v2 + 2 * w2 - 4 * g2
    beta = w2**2 + 2 * w2 * v2 - 4 * g2 * v2 - e2**2 - 2 * e1**2
    sigma = v2 * (w2**2 - e2**2) - 2 * e1**2 * (w2 + e2)
    return CubicCoeffs(alpha, beta, sigma)


def sextic_value(params: TrioParams, lam: complex) -> complex:
    return cubic_coefficients(params)(lam * lam)


def trio_pencil(params: TrioParams) -> Tuple[np.ndarray, np.ndarray]:
    """(C, K) of the trio equations of motion written as x'' + C x' + K x = 0."""
    g, e1, e2 = params.gamma, params.eps1, params.eps2
    C = np.diag([2 * g, 0.0, -2 * g])
    w2 = params.omega**2
    K = np.array([[w2, -e1, -e2], [-e1, params.omega2**2, -e1], [-e2, -e1, w2]])
    return C, K


def trio_hamiltonian_matrix(params: TrioParams) -> np.ndarray:
    """Symmetric A with H = z.A.z / 2 for z = (x, y, z, p, q, r).

    H = v^2 q^2 / 4 + v^2 p r / 2 + y^2 + 2 (w^2 - g^2) x z / v^2
        - 2 e1 (x y + y z) / v^2 - e2 (x^2 + z^2) / v^2 + g (z r - x p)
    with w = omega and v = omega2.
    """
    w2, g = params.omega**2, params.gamma
    v2 = params.omega2**2
    e1, e2 = params.eps1, params.eps2
    x, y, z, p, q, r = range(6)
    A = np.zeros((6, 6))

    def add(i, j, c):
        if i == j:
            A[i, i] += 2 * c
        else:
            A[i, j] += c
            A[j, i] += c

    add(q, q, v2 / 4)
    add(p, r, v2 / 2)
    add(y, y, 1.0)
    add(x, z, 2 * (w2 - g * g) / v2)
    add(x, y, -2 * e1 / v2)
    add(y, z, -2 * e1 / v2)
    add(x, x, -e2 / v2)
    add(z, z, -e2 / v2)
    add(z, r, g)
    add(x, p, -g)
    return A


def cubic_mu_roots(params: TrioParams) -> np.ndarray:
    """Roots mu of the cubic; imaginary parts within CUBIC_ROOT_TOL are rounded to zero."""
    cubic = cubic_coefficients(params)
    mu = np.roots([1.0, -cubic.alpha, cubic.beta, -cubic.sigma]).astype(complex)
    real = np.abs(mu.imag) <= CUBIC_ROOT_TOL * np.maximum(1.0, np.abs(mu))
    mu[real] = mu[real].real
    return mu


def trio_spectrum(params: TrioParams, tol: float = DEFAULT_IMAG_TOL) -> Spectrum:
    """Six frequencies lambda = +-sqrt(mu) from the cubic in mu = lambda^2."""
    roots = np.sqrt(cubic_mu_roots(params))
    return make_spectrum(np.concatenate([roots, -roots]), "analytic", tol)


def trio_qep_spectrum(params: TrioParams, tol: float = DEFAULT_IMAG_TOL) -> Spectrum:
    C, K = trio_pencil(params)
    return pencil_eigenvalues(C, K, tol)


def trio_classify(params: TrioParams) -> str:
    """unbroken iff the three mu roots are real and positive."""
    mu = cubic_mu_roots(params)
    ok = bool(np.all(mu.imag == 0) and np.all(mu.real > 0))
    return UNBROKEN if ok else BROKEN


def critical_point_criterion(params: TrioParams) -> bool:
    """All mu roots real and positive, from the critical points of p.

    The local maximum (alpha - sqrt(alpha^2 - 3 beta)) / 3 and local minimum
    (alpha + sqrt(alpha^2 - 3 beta)) / 3 must both be positive with p > 0 at the
    maximum and p < 0 at the minimum; sigma > 0 then excludes a root at or below zero.
    """
    cubic = cubic_coefficients(params)
    disc = cubic.alpha**2 - 3 * cubic.beta
    if disc <= 0:
        return False
    local_max = (cubic.alpha - np.sqrt(disc)) / 3
    local_min = (cubic.alpha + np.sqrt(disc)) / 3
    return bool(
        local_max > 0
        and local_min > 0
        and cubic(local_max) > 0
        and cubic(local_min) < 0
        and cubic.sigma > 0
    )


def scan_eps2(
    params: TrioParams,
    eps2_range: Tuple[float, float] = (0.0, 0.7),
    points: int = 701,
    refine_tol: float = DEFAULT_EPS2_REFINE_TOL,
) -> RegionReport:
    """Phase intervals along eps2 with the other parameters held fixed."""
    if points < 16:
        raise InvalidArgumentError(f"points must be >= 16, got {points}")

    def classify_point(eps2):
        at = TrioParams(params.omega, params.gamma, params.eps1, eps2, params.omega2)
        spectrum = trio_spectrum(at)
        return trio_classify(at) == UNBROKEN, spectrum.max_imag

    grid = np.linspace(eps2_range[0], eps2_range[1], points)
    report = build_report("eps2", grid, classify_point, refine_tol)
    logger.log(logging.INFO, f"omega={params.omega} gamma={params.gamma} eps1={params.eps1}: regions: {len(report.intervals)}")
    return report


@dataclass
class PhaseDiagram:
    omega: float
    gamma: float
    eps1: np.ndarray
    eps2: np.ndarray
    unbroken: np.ndarray  # shape (len(eps2), len(eps1))

    @property
    def unbroken_cells(self) -> int:
        return int(self.unbroken.sum())

    def to_frame(self) -> pd.DataFrame:
        e1, e2 = np.meshgrid(self.eps1, self.eps2)
        return pd.DataFrame(
            {"eps1": e1.ravel(), "eps2": e2.ravel(), "unbroken": self.unbroken.ravel().astype(int)}
        )

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "gamma": self.gamma,
            "eps1": self.eps1.tolist(),
            "eps2": self.eps2.tolist(),
            "unbroken": self.unbroken.astype(int).tolist(),
        }


def trio_phase_diagram(
    omega: float,
    gamma: float,
    eps1_range: Tuple[float, float] = (0.0, 1.0),
    eps2_range: Tuple[float, float] = (0.0, 1.0),
    resolution: int = 101,
    omega2: float = 1.0,
) -> PhaseDiagram:
    """Unbroken flag on a resolution x resolution grid of (eps1, eps2)."""
    if resolution < 32:
        raise InvalidArgumentError(f"resolution must be >= 32, got {resolution}")
    eps1 = np.linspace(eps1_range[0], eps1_range[1], resolution)
    eps2 = np.linspace(eps2_range[0], eps2_range[1], resolution)

    def row(e2):
        return [trio_classify(TrioParams(omega, gamma, e1, e2, omega2)) == UNBROKEN for e1 in eps1]

    unbroken = np.array(parallel_map(row, eps2), dtype=bool)
    diagram = PhaseDiagram(omega, gamma, eps1, eps2, unbroken)
    logger.log(logging.INFO, f"omega={omega} gamma={gamma}: {diagram.unbroken_cells} unbroken cells")
    return diagram


def trio_im_lambda_trace(
    omega: float,
    gamma: float,
    eps1: float,
    eps2_range: Tuple[float, float] = (0.0, 0.7),
    points: int = 701,
    omega2: float = 1.0,
) -> pd.DataFrame:
    """Sorted imaginary parts of the six frequencies along eps2."""
    if points < 64:
        raise InvalidArgumentError(f"points must be >= 64, got {points}")
    grid = np.linspace(eps2_range[0], eps2_range[1], points)
    rows = [np.sort(trio_spectrum(TrioParams(omega, gamma, eps1, e2, omega2)).frequencies.imag) for e2 in grid]
    frame = pd.DataFrame(np.array(rows), columns=[f"im_{j}" for j in range(6)])
    frame.insert(0, "eps2", grid)
    return frame
