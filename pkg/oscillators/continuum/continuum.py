"""Continuum limit of the two-row chain and its point-like loss-gain impurity.

With S = u + v and D = u - v the wave equations read
    S_tt + omega^2 S - c^2 S_xx + epsilon S = -2 gamma(x) D_t
    D_tt + omega^2 D - c^2 D_xx - epsilon D = -2 gamma(x) S_t
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
import pandas as pd

from oscillators.errors import InvalidArgumentError, NoPseudoBoundStateError, StabilityError
from utils.logger import get_reporter

logger = get_reporter(__name__, "continuum")

CFL_LIMIT = 0.5
SPONGE_FRACTION = 0.1
IMPURITY_WIDTH_CELLS = 4


@dataclass(frozen=True)
class ContinuumParams:
    c: float
    omega: float
    epsilon: float
    gamma_strength: float = 0.0

    def __post_init__(self):
        if self.c <= 0 or self.omega <= 0:
            raise InvalidArgumentError(f"c and omega must be positive, got c={self.c}, omega={self.omega}")


def continuum_parameters(rho: float, k: float, Gamma: float, mu1: float, nu1: float, mu2: float, nu2: float) -> ContinuumParams:
    """Wave parameters of the mass-spring rows: c^2 = k / rho, gamma = Gamma / rho,
    omega^2 = (mu1 nu1^2 + mu2 nu2^2) / rho, epsilon = -mu2 nu2^2 / rho."""
    if rho <= 0 or k <= 0:
        raise InvalidArgumentError(f"rho and k must be positive, got rho={rho}, k={k}")
    omega2 = (mu1 * nu1**2 + mu2 * nu2**2) / rho
    if omega2 <= 0:
        raise InvalidArgumentError(f"spring constants give omega^2 = {omega2}, must be positive")
    return ContinuumParams(
        c=float(np.sqrt(k / rho)),
        omega=float(np.sqrt(omega2)),
        epsilon=-mu2 * nu2**2 / rho,
        gamma_strength=Gamma / rho,
    )


def symmetric_grid(half_width: float, points: int) -> np.ndarray:
    """Odd number of points on [-half_width, half_width], exactly mirror symmetric about 0."""
    if points < 3 or half_width <= 0:
        raise InvalidArgumentError(f"need half_width > 0 and points >= 3, got {half_width}, {points}")
    half = np.linspace(0.0, half_width, points // 2 + 1)
    return np.concatenate([-half[:0:-1], half])


@dataclass
class ImpuritySolution:
    """Pseudo-bound mode S = exp(i Omega t) s(x), D = exp(i Omega t) d(x) of a delta impurity.

    a^2 = omega^2 - Omega^2 + epsilon and b^2 = Omega^2 - omega^2 + epsilon, both positive.
    """

    params: ContinuumParams
    Omega: float
    a: float
    b: float
    x: np.ndarray
    s: np.ndarray = field(init=False)
    d: np.ndarray = field(init=False)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.s = self.s_at(self.x)
        self.d = self.d_at(self.x)

    @property
    def _d_even(self) -> complex:
        return 1j * self.a * self.params.c / (self.params.gamma_strength * self.Omega)

    @property
    def _d_odd(self) -> complex:
        return 1j * self.params.gamma_strength * self.Omega / (self.b * self.params.c)

    def s_at(self, x) -> np.ndarray:
        return np.exp(-self.a * np.abs(x) / self.params.c).astype(complex)

    def d_at(self, x) -> np.ndarray:
        k = self.b / self.params.c
        return self._d_even * np.cos(k * x) + self._d_odd * np.sin(k * np.abs(x))

    def ds_at(self, x, side: int = 1) -> np.ndarray:
        """s'(x); side picks the one-sided derivative at x = 0."""
        sign = np.where(np.asarray(x) == 0, side, np.sign(x))
        return -self.a / self.params.c * sign * self.s_at(x)

    def dd_at(self, x, side: int = 1) -> np.ndarray:
        k = self.b / self.params.c
        sign = np.where(np.asarray(x) == 0, side, np.sign(x))
        return -k * self._d_even * np.sin(k * x) + k * sign * self._d_odd * np.cos(k * x)

    def d2s_at(self, x) -> np.ndarray:
        return (self.a / self.params.c) ** 2 * self.s_at(x)

    def d2d_at(self, x) -> np.ndarray:
        return -((self.b / self.params.c) ** 2) * self.d_at(x)

    def verify(self) -> dict:
        """Bulk residuals away from the origin, jump-condition residuals, decay and oscillation checks."""
        c2 = self.params.c**2
        g_omega = 2j * self.params.gamma_strength * self.Omega
        bulk = self.x[self.x != 0]
        s_lhs, s_rhs = c2 * self.d2s_at(bulk), self.a**2 * self.s_at(bulk)
        d_lhs, d_rhs = c2 * self.d2d_at(bulk), self.b**2 * self.d_at(bulk)
        s_scale = max(np.max(np.abs(s_lhs)), np.max(np.abs(s_rhs)), np.finfo(float).tiny)
        d_scale = max(np.max(np.abs(d_lhs)), np.max(np.abs(d_rhs)), np.finfo(float).tiny)
        jump_s = c2 * (self.ds_at(0.0, 1) - self.ds_at(0.0, -1))
        jump_d = c2 * (self.dd_at(0.0, 1) - self.dd_at(0.0, -1))
        s0, d0 = complex(self.s_at(0.0)), complex(self.d_at(0.0))
        far = np.abs(self.x) >= 0.5 * np.max(np.abs(self.x))
        return {
            "bulk_s": float(np.max(np.abs(s_lhs - s_rhs)) / s_scale),
            "bulk_d": float(np.max(np.abs(d_lhs + d_rhs)) / d_scale),
            "jump_s": float(abs(jump_s - g_omega * d0) / max(abs(jump_s), abs(g_omega * d0))),
            "jump_d": float(abs(jump_d - g_omega * s0) / max(abs(jump_d), abs(g_omega * s0))),
            "s_decays": bool(np.max(np.abs(self.s[far])) < np.abs(s0)),
            "d_oscillates": bool(np.max(np.abs(self.d[far])) > 0.1 * np.hypot(abs(self._d_even), abs(self._d_odd))),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"x": self.x, "re_s": self.s.real, "im_s": self.s.imag, "re_d": self.d.real, "im_d": self.d.imag}
        )


def impurity_mode(params: ContinuumParams, Omega: float, x: Optional[np.ndarray] = None) -> ImpuritySolution:
    """Pseudo-bound state of the impurity gamma delta(x) at frequency Omega.

    Raises:
        NoPseudoBoundStateError: unless a^2 > 0 and b^2 > 0, i.e. omega^2 - eps < Omega^2 < omega^2 + eps
    """
    if Omega == 0 or params.gamma_strength == 0:
        raise InvalidArgumentError("Omega and the impurity strength must be non-zero")
    a2 = params.omega**2 - Omega**2 + params.epsilon
    b2 = Omega**2 - params.omega**2 + params.epsilon
    if a2 <= 0 or b2 <= 0:
        raise NoPseudoBoundStateError(
            f"no pseudo-bound state: need a^2 > 0 and b^2 > 0, got a^2={a2:.6g}, b^2={b2:.6g}"
        )
    if x is None:
        x = symmetric_grid(10 * params.c / np.sqrt(a2), 2001)
    return ImpuritySolution(params, float(Omega), float(np.sqrt(a2)), float(np.sqrt(b2)), x)


def apply_pt(solution: ImpuritySolution) -> tuple:
    """x -> -x with u <-> v (d -> -d) and complex conjugation, sampled on the same grid.

    Returns:
        tuple: (s, d) of the transformed mode; the grid must be mirror symmetric
    """
    return np.conj(solution.s[::-1]), -np.conj(solution.d[::-1])


def continuum_dispersion(params: ContinuumParams, k, branch: int = 1) -> np.ndarray:
    """Omega^2 = omega^2 + branch * epsilon + c^2 k^2 for gamma = 0; branch +1 is S, -1 is D."""
    k = np.asarray(k, dtype=float)
    return params.omega**2 + branch * params.epsilon + params.c**2 * k**2


def lattice_dispersion(params: ContinuumParams, k, spacing: float, branch: int = 1) -> np.ndarray:
    """Same for the discrete rows with spacing Delta: c^2 k^2 becomes (2c/Delta)^2 sin^2(k Delta / 2)."""
    k = np.asarray(k, dtype=float)
    return params.omega**2 + branch * params.epsilon + (2 * params.c / spacing) ** 2 * np.sin(k * spacing / 2) ** 2


def gaussian_impurity(x: np.ndarray, strength: float, width: float) -> np.ndarray:
    """Gaussian of the given width whose integral over the grid equals strength."""
    profile = np.exp(-0.5 * (x / width) ** 2)
    dx = x[1] - x[0]
    return strength * profile / (profile.sum() * dx)


def sponge_profile(x: np.ndarray, c: float, fraction: float = SPONGE_FRACTION) -> np.ndarray:
    """Quadratic damping ramp over the outer fraction of the grid."""
    lo, hi = x[0], x[-1]
    width = fraction * (hi - lo)
    depth = np.clip(np.maximum(lo + width - x, x - (hi - width)) / width, 0.0, 1.0)
    return 4 * c / width * depth**2


@dataclass
class FieldHistory:
    x: np.ndarray
    times: np.ndarray
    S: np.ndarray  # frames x points
    D: np.ndarray

    def to_frames(self) -> list:
        return [
            {"t": float(t), "S": s.tolist(), "D": d.tolist()}
            for t, s, d in zip(self.times, self.S, self.D)
        ]

    def snapshot_frame(self, i: int = -1) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "S": self.S[i], "D": self.D[i]})


def mode_initial_fields(solution: ImpuritySolution, x: np.ndarray):
    """Real fields of the mode at t = 0: (S, D, S_t, D_t)."""
    s, d = solution.s_at(x), solution.d_at(x)
    Omega = solution.Omega
    return s.real, d.real, (1j * Omega * s).real, (1j * Omega * d).real


def _laplacian(f: np.ndarray, dx: float, periodic: bool) -> np.ndarray:
    if periodic:
        return (np.roll(f, -1) - 2 * f + np.roll(f, 1)) / dx**2
    lap = np.zeros_like(f)
    lap[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / dx**2
    return lap


def fd_wave_solver(
    params: ContinuumParams,
    gamma_profile: Union[Callable[[np.ndarray], np.ndarray], np.ndarray, None],
    grid: np.ndarray,
    t_end: float,
    dt: float,
    initial=None,
    boundary: str = "sponge",
    save_every: int = 10,
) -> FieldHistory:
    """Leapfrog integration of the S/D wave equations.

    The gamma(x) and sponge terms are centred in time and solved point by point as a
    2x2 system for the new S and D.

    Args:
        params (ContinuumParams): c, omega, epsilon
        gamma_profile: gamma(x) as a callable or sampled array; None or 0 for no impurity
        grid (np.ndarray): uniform grid
        t_end (float): end time
        dt (float): step, c dt / dx <= 0.5
        initial: (S, D, S_t, D_t) arrays, or an ImpuritySolution to seed from; zero fields when None
        boundary (str): "sponge" (absorbing outer 10%, fixed ends) or "periodic"
        save_every (int): steps between saved frames

    Returns:
        FieldHistory: saved frames, the first at t = 0
    """
    x = np.asarray(grid, dtype=float)
    dx = float(x[1] - x[0])
    if t_end <= 0 or t_end < dt:
        raise InvalidArgumentError(f"need t_end >= dt > 0, got t_end={t_end}, dt={dt}")
    if params.c * dt / dx > CFL_LIMIT:
        raise StabilityError(
            f"CFL number c dt / dx = {params.c * dt / dx:.3g} exceeds {CFL_LIMIT}", CFL_LIMIT * dx / params.c
        )
    if boundary not in ("sponge", "periodic"):
        raise InvalidArgumentError(f"unknown boundary {boundary!r}")
    periodic = boundary == "periodic"

    if gamma_profile is None:
        g = np.zeros_like(x)
    elif callable(gamma_profile):
        g = np.asarray(gamma_profile(x), dtype=float)
    else:
        g = np.broadcast_to(np.asarray(gamma_profile, dtype=float), x.shape).copy()
    sigma = np.zeros_like(x) if periodic else sponge_profile(x, params.c)

    if initial is None:
        S, D, St, Dt = (np.zeros_like(x) for _ in range(4))
    elif isinstance(initial, ImpuritySolution):
        S, D, St, Dt = mode_initial_fields(initial, x)
    else:
        S, D, St, Dt = (np.asarray(f, dtype=float).copy() for f in initial)

    w_s = params.omega**2 + params.epsilon
    w_d = params.omega**2 - params.epsilon
    c2 = params.c**2

    def force(S_, D_):
        return -w_s * S_ + c2 * _laplacian(S_, dx, periodic), -w_d * D_ + c2 * _laplacian(D_, dx, periodic)

    fS, fD = force(S, D)
    S_next = S + dt * St + 0.5 * dt**2 * (fS - 2 * g * Dt - sigma * St)
    D_next = D + dt * Dt + 0.5 * dt**2 * (fD - 2 * g * St - sigma * Dt)
    if not periodic:
        for f in (S_next, D_next):
            f[0] = f[-1] = 0.0

    gk = g * dt
    h = 0.5 * sigma * dt
    det = (1 + h) ** 2 - gk**2

    steps = int(round(t_end / dt))
    times, S_frames, D_frames = [0.0], [S.copy()], [D.copy()]
    S_prev, D_prev, S, D = S, D, S_next, D_next
    for n in range(1, steps):
        if n % save_every == 0:
            times.append(n * dt)
            S_frames.append(S.copy())
            D_frames.append(D.copy())
        fS, fD = force(S, D)
        rS = 2 * S - S_prev + dt**2 * fS + gk * D_prev + h * S_prev
        rD = 2 * D - D_prev + dt**2 * fD + gk * S_prev + h * D_prev
        S_new = ((1 + h) * rS - gk * rD) / det
        D_new = ((1 + h) * rD - gk * rS) / det
        if not periodic:
            S_new[0] = S_new[-1] = D_new[0] = D_new[-1] = 0.0
        S_prev, D_prev, S, D = S, D, S_new, D_new
    if steps % save_every == 0 or steps == 1:
        times.append(steps * dt)
        S_frames.append(S.copy())
        D_frames.append(D.copy())
    logger.log(logging.INFO, f"{steps} leapfrog steps on {len(x)} points, {len(times)} frames saved")
    return FieldHistory(x, np.array(times), np.array(S_frames), np.array(D_frames))


def mode_frequency(history: FieldHistory, index: int, field: str = "S") -> float:
    """Angular frequency at one grid point from linearly interpolated zero crossings."""
    values = (history.S if field == "S" else history.D)[:, index]
    t = history.times
    sign = np.signbit(values)
    crossings = np.nonzero(sign[1:] != sign[:-1])[0]
    if len(crossings) < 3:
        raise InvalidArgumentError("fewer than three zero crossings, run longer")
    roots = t[crossings] - values[crossings] * (t[crossings + 1] - t[crossings]) / (
        values[crossings + 1] - values[crossings]
    )
    half_period = np.mean(np.diff(roots))
    return float(np.pi / half_period)
