"""Characteristic polynomials P_N of the uniform chain.

P_N is the determinant of the tridiagonal frequency matrix of 2N oscillators written
in the spectral variable chi = (lambda^2 - omega^2)^2 + 4 lambda^2 gamma^2. The
coefficient of chi^k epsilon^(2(N-k)) is an integer, kept exact here.
"""
import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Tuple

from oscillators.errors import InvalidArgumentError

# coefficients are exported as signed 64-bit integers; the largest one first
# exceeds this bound in the high forties of N
MAX_EXACT_COEFFICIENT = 2**63 - 1

DEGENERATE_DELTA = 1e-8


@dataclass(frozen=True)
class CharPoly:
    """P_N = sum_k coefficients[k] chi^k epsilon^(2(N-k))."""

    degree: int
    coefficients: Tuple[int, ...]

    def evaluate(self, chi: complex, epsilon: float) -> complex:
        e2 = epsilon * epsilon
        value = 0
        for k, c in enumerate(self.coefficients):
            value += c * chi**k * e2 ** (self.degree - k)
        return value

    def format(self) -> str:
        """Polynomial string, e.g. "-e^6 + 6 x e^4 - 5 x^2 e^2 + x^3" for N = 3."""
        out = ""
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            parts = []
            if abs(c) != 1:
                parts.append(str(abs(c)))
            if k == 1:
                parts.append("x")
            elif k > 1:
                parts.append(f"x^{k}")
            power = 2 * (self.degree - k)
            if power:
                parts.append(f"e^{power}")
            term = " ".join(parts) if parts else "1"
            if not out:
                out = ("-" if c < 0 else "") + term
            else:
                out += (" - " if c < 0 else " + ") + term
        return out


def _check_degree(N: int) -> None:
    if N is None or N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")


def charpoly_recursive(N: int) -> CharPoly:
    """Exact coefficient table from P_N = (chi - 2 e^2) P_{N-1} - e^4 P_{N-2}, P_0 = 1.

    Raises:
        OverflowError: when a coefficient leaves the signed 64-bit range
    """
    _check_degree(N)
    previous, current = [1], [-1, 1]
    for _ in range(2, N + 1):
        nxt = []
        for k in range(len(current) + 1):
            shifted = current[k - 1] if k >= 1 else 0
            same = current[k] if k < len(current) else 0
            older = previous[k] if k < len(previous) else 0
            nxt.append(shifted - 2 * same - older)
        previous, current = current, nxt
    largest = max(abs(c) for c in current)
    if largest > MAX_EXACT_COEFFICIENT:
        raise OverflowError(
            f"P_{N} has a coefficient of {largest.bit_length()} bits, beyond the signed 64-bit range"
        )
    return CharPoly(N, tuple(current))


def binomial_coefficients(N: int) -> Tuple[int, ...]:
    """Coefficients in the binomial form c_k = (-1)^(N-k) C(N+k, 2k)."""
    _check_degree(N)
    return tuple((-1) ** (N - k) * comb(N + k, 2 * k) for k in range(N + 1))


def charpoly_value(N: int, chi: complex, epsilon: float) -> complex:
    """Floating-point value of P_N from the three-term recursion."""
    _check_degree(N)
    e2 = epsilon * epsilon
    previous, current = 1.0, chi - e2
    for _ in range(2, N + 1):
        previous, current = current, (chi - 2 * e2) * current - e2 * e2 * previous
    return current


def _gamma_half_over_sqrt_pi(m: int) -> Fraction:
    # Gamma(m + 1/2) / sqrt(pi) = (2m - 1)!! / 2^m
    double_factorial = 1
    for j in range(2 * m - 1, 0, -2):
        double_factorial *= j
    return Fraction(double_factorial, 2**m)


def _gamma_sum_coefficients(N: int):
    coefficients = []
    for k in range(N + 1):
        # the sqrt(pi) prefactor cancels the one in Gamma(N - k + 1/2)
        term = Fraction(4) ** (k - N) * factorial(2 * N - k)
        term /= factorial(N - k) * factorial(k) * _gamma_half_over_sqrt_pi(N - k)
        coefficients.append((-1) ** k * term)
    return coefficients


def charpoly_gamma_sum(N: int, chi: complex, epsilon: float) -> complex:
    """P_N from the explicit sum over k of chi^(N-k) epsilon^(2k) with Gamma-function weights."""
    _check_degree(N)
    e2 = epsilon * epsilon
    return sum(
        float(c) * chi ** (N - k) * e2**k for k, c in enumerate(_gamma_sum_coefficients(N))
    )


def charpoly_hyperbolic(N: int, chi: complex, epsilon: float) -> complex:
    """P_N in terms of y = -chi / (4 e^2) and Delta = sqrt(y (y + 1)).

    Falls back to the recursion where Delta vanishes (y = 0 or y = -1) and returns
    chi^N when epsilon is zero.
    """
    _check_degree(N)
    if epsilon == 0:
        return chi**N
    e2 = epsilon * epsilon
    y = -chi / (4 * e2)
    delta = cmath.sqrt(y * (y + 1))
    if abs(delta) < DEGENERATE_DELTA:
        return charpoly_value(N, chi, epsilon)
    bracket = (1 + 2 * y - 2 * delta) ** N * (delta - y) + (1 + 2 * y + 2 * delta) ** N * (delta + y)
    value = e2**N / (2 * delta) * (-1) ** N * bracket
    if isinstance(chi, complex):
        return value
    return value.real


def charpoly_closed_form(N: int, chi: complex, epsilon: float, form: str = "hyperbolic") -> complex:
    """Closed-form value of P_N.

    Args:
        N (int): number of pairs
        chi (complex): spectral variable
        epsilon (float): coupling
        form (str): "hyperbolic" (Delta form) or "gamma" (explicit Gamma-weighted sum)
    """
    if form == "hyperbolic":
        return charpoly_hyperbolic(N, chi, epsilon)
    if form == "gamma":
        return charpoly_gamma_sum(N, chi, epsilon)
    raise InvalidArgumentError(f"unknown closed form {form!r}")
