import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.optimize import linear_sum_assignment

from oscillators.chain.chain import EVEN, ChainSpec, build_uniform_chain, pencil_matrices
from oscillators.errors import InvalidArgumentError, NumericalFailureError
from utils.logger import get_reporter

UNBROKEN = "unbroken"
BROKEN = "broken"
DEFAULT_IMAG_TOL = 1e-9

logger = get_reporter(__name__, "spectral")


@dataclass(frozen=True)
class Spectrum:
    """Classical frequencies lambda of solutions proportional to exp(i lambda t)."""

    frequencies: np.ndarray
    classification: str
    imag_tolerance: float
    method: str

    @property
    def max_imag(self) -> float:
        if len(self.frequencies) == 0:
            return 0.0
        return float(np.max(np.abs(self.frequencies.imag)))

    @property
    def unbroken(self) -> bool:
        return self.classification == UNBROKEN

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"re_lambda": self.frequencies.real, "im_lambda": self.frequencies.imag}
        )

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "classification": self.classification,
            "imag_tolerance": self.imag_tolerance,
            "frequencies": [[float(lam.real), float(lam.imag)] for lam in self.frequencies],
        }


def is_real_frequency(lam, tol: float = DEFAULT_IMAG_TOL):
    lam = np.asarray(lam)
    return np.abs(lam.imag) <= tol * np.maximum(1.0, np.abs(lam))


def make_spectrum(frequencies, method: str, tol: float = DEFAULT_IMAG_TOL) -> Spectrum:
    """Sorted Spectrum with its phase classification."""
    lam = np.asarray(frequencies, dtype=complex)
    lam = lam[np.lexsort((lam.imag, lam.real))]
    phase = UNBROKEN if bool(np.all(is_real_frequency(lam, tol))) else BROKEN
    return Spectrum(lam, phase, tol, method)


def classify(spectrum: Spectrum, tol: float = None) -> str:
    """unbroken iff every |Im lambda| <= tol * max(1, |lambda|)."""
    tol = spectrum.imag_tolerance if tol is None else tol
    return UNBROKEN if bool(np.all(is_real_frequency(spectrum.frequencies, tol))) else BROKEN


def spectrum_distance(a, b) -> float:
    """Largest pairwise gap after optimally matching two frequency multisets."""
    a = np.asarray(getattr(a, "frequencies", a), dtype=complex)
    b = np.asarray(getattr(b, "frequencies", b), dtype=complex)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"spectra differ in size: {a.shape} vs {b.shape}")
    if len(a) == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def quartic_frequencies_general(
    mu: float, nu: float, omega: float, epsilon: float, tol: float = DEFAULT_IMAG_TOL
) -> Spectrum:
    """Roots of the frequency quartic of a loss (mu) / gain (nu) pair, mu and nu unrelated."""
    if omega <= 0:
        raise InvalidArgumentError(f"omega must be positive, got {omega}")
    coefficients = [
        1.0,
        -1j * (mu - nu),
        -(2 * omega**2 - mu * nu),
        1j * omega**2 * (mu - nu),
        omega**4 - epsilon**2,
    ]
    return make_spectrum(np.roots(coefficients), "polynomial", tol)


def quartic_value(mu: float, nu: float, omega: float, epsilon: float, lam: complex) -> complex:
    return (
        lam**4
        - 1j * (mu - nu) * lam**3
        - (2 * omega**2 - mu * nu) * lam**2
        + 1j * omega**2 * (mu - nu) * lam
        + omega**4
        - epsilon**2
    )


@dataclass(frozen=True)
class ZRoots:
    candidates: np.ndarray
    genuine: np.ndarray
    z_min: float
    z_max: float

    @property
    def squares(self) -> np.ndarray:
        """The N distinct genuine z^2 values, ascending."""
        positive = self.genuine[self.genuine > 0]
        return np.sort(positive**2)


def analytic_z_roots(N: int) -> ZRoots:
    """z = sin(pi (2k+1) / (4N+2)) for k = 0..4N+1 with the spurious z = +-1 removed."""
    if N is None or N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    k = np.arange(4 * N + 2)
    candidates = np.sin(np.pi * (2 * k + 1) / (4 * N + 2))
    kept = candidates[np.abs(np.abs(candidates) - 1.0) > 1e-12]
    # sin(pi - t) = sin(t) doubles every genuine value
    genuine = np.unique(np.round(kept, 14))
    positive = genuine[genuine > 0]
    return ZRoots(candidates, genuine, float(positive.min()), float(positive.max()))


def chi_of_lambda(lam, omega: float, gamma: float):
    """chi = (lambda^2 - omega^2)^2 + 4 lambda^2 gamma^2."""
    lam = np.asarray(lam)
    return (lam**2 - omega**2) ** 2 + 4 * lam**2 * gamma**2


def analytic_spectrum(
    N: int, omega: float, gamma: float, epsilon: float, tol: float = DEFAULT_IMAG_TOL
) -> Spectrum:
    """4N frequencies of the uniform 2N chain, four per genuine z^2 (principal roots)."""
    build_uniform_chain(N, omega, gamma, epsilon)
    frequencies = []
    for z2 in analytic_z_roots(N).squares:
        inner = np.sqrt(complex(gamma**2 * (gamma**2 - omega**2) + epsilon**2 * z2))
        for mu in (omega**2 - 2 * gamma**2 + 2 * inner, omega**2 - 2 * gamma**2 - 2 * inner):
            root = np.sqrt(complex(mu))
            frequencies.extend([root, -root])
    return make_spectrum(frequencies, "analytic", tol)


def linearize(C: np.ndarray, K: np.ndarray) -> np.ndarray:
    """First companion matrix of s^2 + s C + K; its eigenvalues are the s roots."""
    n = len(K)
    return np.block([[np.zeros((n, n)), np.eye(n)], [-K, -C]])


def pencil_eigenvalues(C: np.ndarray, K: np.ndarray, tol: float = DEFAULT_IMAG_TOL, method: str = "qep") -> Spectrum:
    """Frequencies lambda = -i s of x'' + C x' + K x = 0."""
    companion = linearize(C, K)
    try:
        s = linalg.eigvals(companion)
    except linalg.LinAlgError as e:
        raise NumericalFailureError(
            f"eigenvalue iteration failed: {e}",
            {"size": len(K), "norm_C": float(np.linalg.norm(C)), "norm_K": float(np.linalg.norm(K))},
        ) from e
    if not np.all(np.isfinite(s)):
        raise NumericalFailureError(
            "eigenvalue solver returned non-finite values",
            {"size": len(K), "non_finite": int(np.sum(~np.isfinite(s)))},
        )
    return make_spectrum(-1j * s, method, tol)


def qep_spectrum(spec: ChainSpec, tol: float = DEFAULT_IMAG_TOL) -> Spectrum:
    C, K = pencil_matrices(spec)
    spectrum = pencil_eigenvalues(C, K, tol)
    logger.log(logging.DEBUG, f"{spec.size} oscillators: {spectrum.classification}, max|Im| {spectrum.max_imag:.3e}")
    return spectrum


def chain_spectrum(spec: ChainSpec, tol: float = DEFAULT_IMAG_TOL) -> Spectrum:
    """Analytic roots for uniform even chains, QEP eigenvalues otherwise."""
    if spec.parity == EVEN and spec.uniform:
        return analytic_spectrum(spec.n_pairs, spec.omega, spec.gamma, spec.epsilon, tol)
    return qep_spectrum(spec, tol)


def tridiagonal_determinant(diag, lower, upper) -> complex:
    """det of a tridiagonal matrix by f_k = d_k f_{k-1} - l_{k-1} u_{k-1} f_{k-2}."""
    diag = np.asarray(diag)
    previous, current = 1.0, diag[0]
    for k in range(1, len(diag)):
        previous, current = current, diag[k] * current - lower[k - 1] * upper[k - 1] * previous
    return current


def frequency_matrix(spec: ChainSpec, lam: complex) -> np.ndarray:
    """M(lambda) = lambda^2 I - i lambda C - K, singular exactly at the frequencies."""
    C, K = pencil_matrices(spec)
    return lam**2 * np.eye(spec.size) - 1j * lam * C - K


def determinant_check(spec: ChainSpec, lam: complex) -> Tuple[complex, float]:
    """det M(lambda) and the scale prod_i sum_j |M_ij| it should be compared with."""
    M = frequency_matrix(spec, lam)
    det = tridiagonal_determinant(np.diag(M), np.diag(M, -1), np.diag(M, 1))
    scale = float(np.prod(np.sum(np.abs(M), axis=1)))
    return det, scale


def m2n_determinant(N: int, omega: float, gamma: float, epsilon: float, lam: complex) -> complex:
    """det M_2N(lambda) of the uniform chain; equals P_N at chi(lambda)."""
    return determinant_check(build_uniform_chain(N, omega, gamma, epsilon), lam)[0]
