import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
import pandas as pd
from scipy import signal

from oscillators.chain.chain import EVEN, SUM, ChainSpec, HamiltonianRep, PhaseState, pencil_matrices
from oscillators.chain.hamiltonians import flow_matrix, hamiltonian_matrix, symplectic_unit
from oscillators.chain.lagrangian import energy_series
from oscillators.chain.symmetry import apply_pt
from oscillators.errors import InvalidArgumentError, StabilityError
from oscillators.planar.planar import TrioParams, trio_hamiltonian_matrix
from utils.logger import get_reporter

logger = get_reporter(__name__, "dynamics")

STABILITY_LIMIT = 0.1
SUGGESTED_STEP = 0.05
GROWTH_FACTOR = 10.0
PEAK_THRESHOLD = 1e-2
MIN_PERIODS = 20

System = Union[ChainSpec, TrioParams]


@dataclass
class Trajectory:
    """Sampled solution on a uniform time grid.

    states holds one phase-space vector (x, p) per row. energy is E_2N for uniform
    even chains and NaN otherwise.
    """

    times: np.ndarray
    states: np.ndarray
    velocities: np.ndarray
    energy: np.ndarray
    hamiltonian: np.ndarray
    max_amplitude: np.ndarray
    slowest: float = float("nan")  # smallest nonzero |lambda| of the flow

    @property
    def size(self) -> int:
        return self.states.shape[1] // 2

    @property
    def coords(self) -> np.ndarray:
        return self.states[:, : self.size]

    @property
    def momenta(self) -> np.ndarray:
        return self.states[:, self.size :]

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def periods(self) -> float:
        """Periods of the slowest mode covered by the run, inf when unknown."""
        if not np.isfinite(self.slowest) or self.slowest <= 0:
            return float("inf")
        return self.duration * self.slowest / (2 * np.pi)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    def state(self, i: int) -> PhaseState:
        return PhaseState.from_vector(self.states[i], float(self.times[i]))


def system_matrices(system: System, rep: Optional[HamiltonianRep] = None):
    """Hamiltonian matrix A and flow matrix J A of a chain or the planar trio."""
    if isinstance(system, TrioParams):
        A = trio_hamiltonian_matrix(system)
        return A, symplectic_unit(3) @ A
    rep = SUM if rep is None else rep
    return hamiltonian_matrix(system, rep), flow_matrix(system, rep)


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + dt / 2, y + dt / 2 * k1)
    k3 = f(t + dt / 2, y + dt / 2 * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def check_step(flow: np.ndarray, dt: float) -> float:
    """Largest |lambda| of the flow; raises StabilityError if dt * max|lambda| >= 0.1."""
    fastest = float(np.max(np.abs(np.linalg.eigvals(flow)))) if flow.size else 0.0
    if dt * fastest >= STABILITY_LIMIT:
        suggested = SUGGESTED_STEP / fastest
        raise StabilityError(
            f"dt={dt} too large for max|lambda|={fastest:.4g}, use dt <= {suggested:.4g}", suggested
        )
    return fastest


def integrate(
    system: System,
    rep: Optional[HamiltonianRep],
    initial: PhaseState,
    t_end: float,
    dt: float,
) -> Trajectory:
    """Classical RK4 integration of Hamilton's equations from initial.time to initial.time + t_end.

    Args:
        system (System): chain or planar trio
        rep (HamiltonianRep): chain representation, ignored for the trio
        initial (PhaseState): starting point
        t_end (float): integration length, > 0
        dt (float): step, > 0 with dt * max|lambda| < 0.1

    Returns:
        Trajectory: states on the uniform grid with per-step diagnostics
    """
    if dt <= 0 or t_end <= 0:
        raise InvalidArgumentError(f"dt and t_end must be positive, got dt={dt}, t_end={t_end}")
    A, flow = system_matrices(system, rep)
    n = len(A) // 2
    if initial.size != n:
        raise InvalidArgumentError(f"initial state has {initial.size} oscillators, system has {n}")
    check_step(flow, dt)
    magnitudes = np.abs(np.linalg.eigvals(flow))
    magnitudes = magnitudes[magnitudes > 1e-12]
    slowest = float(np.min(magnitudes)) if magnitudes.size else float("nan")

    steps = int(round(t_end / dt))
    times = initial.time + dt * np.arange(steps + 1)
    states = np.empty((steps + 1, 2 * n))
    states[0] = initial.as_vector()

    def f(t, z):
        return flow @ z

    for i in range(steps):
        states[i + 1] = rk4_step(f, times[i], states[i], dt)

    velocities = states @ flow[:n].T
    hamiltonian = 0.5 * np.einsum("ti,ij,tj->t", states, A, states)
    if isinstance(system, ChainSpec) and system.parity == EVEN and system.uniform:
        energy = energy_series(system, states[:, :n], velocities)
    else:
        energy = np.full(steps + 1, np.nan)
    max_amplitude = np.max(np.abs(states[:, :n]), axis=1)
    logger.log(logging.INFO, f"integrated {steps} steps of dt={dt}, final amplitude {max_amplitude[-1]:.4g}")
    return Trajectory(times, states, velocities, energy, hamiltonian, max_amplitude, slowest)


def _relative_drift(values: np.ndarray) -> float:
    if len(values) == 0 or np.all(np.isnan(values)):
        return float("nan")
    deviation = float(np.max(np.abs(values - values[0])))
    reference = abs(float(values[0]))
    return deviation / reference if reference > 0 else deviation


def conservation_report(traj: Trajectory, spec: Optional[System] = None) -> dict:
    """Relative drifts max|Q(t) - Q(0)| / |Q(0)| of E_2N and of the Hamiltonian value.

    The absolute deviation is reported when Q(0) vanishes.
    """
    report = {
        "energy_drift": _relative_drift(traj.energy),
        "hamiltonian_drift": _relative_drift(traj.hamiltonian),
        "steps": len(traj.times) - 1,
        "dt": traj.dt,
    }
    if isinstance(spec, ChainSpec) and not (spec.parity == EVEN and spec.uniform):
        report["energy_drift"] = float("nan")
    return report


@dataclass
class FrequencyReport:
    peaks: np.ndarray
    bin_width: float
    growth: bool


def frequency_extract(
    traj: Trajectory,
    coordinate: Optional[int] = None,
    threshold: float = PEAK_THRESHOLD,
) -> FrequencyReport:
    """Angular frequencies of the spectral peaks of the coordinate signals.

    A Hann-windowed periodogram is taken of one coordinate or, by default, summed over
    all coordinates; peaks above threshold times the largest are reported. The bin width
    is 2 pi / T. Trajectories whose amplitude grows more than tenfold return the growth
    flag and no peaks; otherwise the run must cover MIN_PERIODS periods of the slowest mode.
    """
    duration = traj.duration
    bin_width = 2 * np.pi / duration
    start = traj.max_amplitude[0]
    if traj.max_amplitude[-1] > GROWTH_FACTOR * max(start, np.finfo(float).tiny):
        logger.log(logging.WARNING, "amplitude grows, trajectory is in the broken phase")
        return FrequencyReport(np.array([]), bin_width, True)
    if traj.periods < MIN_PERIODS:
        raise InvalidArgumentError(
            f"run of length {duration:.4g} covers {traj.periods:.3g} periods of the slowest mode, "
            f"{MIN_PERIODS} needed (t_end >= {MIN_PERIODS * 2 * np.pi / traj.slowest:.4g})"
        )
    columns = range(traj.size) if coordinate is None else [coordinate]
    power = 0
    for j in columns:
        freqs, p = signal.periodogram(traj.coords[:, j], fs=1.0 / traj.dt, window="hann")
        power = power + p
    if np.max(power) <= 0:
        return FrequencyReport(np.array([]), bin_width, False)
    index, _ = signal.find_peaks(power, height=threshold * np.max(power))
    return FrequencyReport(2 * np.pi * freqs[index], bin_width, False)


def growth_rate(traj: Trajectory, t_min: float, t_max: float, coordinate: Optional[int] = None) -> float:
    """Exponential rate from a line fit to the log of the oscillation peaks in [t_min, t_max]."""
    if coordinate is None:
        coordinate = int(np.argmax(np.abs(traj.coords[-1])))
    window = (traj.times >= t_min) & (traj.times <= t_max)
    values = np.abs(traj.coords[window, coordinate])
    index, _ = signal.find_peaks(values)
    if len(index) < 2:
        raise InvalidArgumentError(f"fewer than two peaks in [{t_min}, {t_max}]")
    slope, _ = np.polyfit(traj.times[window][index], np.log(values[index]), 1)
    return float(slope)


def power_envelopes(traj: Trajectory, spec: ChainSpec) -> np.ndarray:
    """Per-oscillator power v_j^2 + omega_j^2 x_j^2, one column per oscillator."""
    _, K = pencil_matrices(spec)
    return traj.velocities**2 + np.diag(K) * traj.coords**2


def pt_image(traj: Trajectory, spec: ChainSpec):
    """Samples of the PT-transformed solution y_k(t) = -x_{mirror(k)}(-t).

    Returns:
        tuple: (times, coords, velocities, accelerations), times ascending
    """
    _, flow = system_matrices(spec)
    n = spec.size
    accelerations = traj.states @ (flow @ flow)[:n].T
    times, coords, velocities, accels = [], [], [], []
    for i in range(len(traj.times) - 1, -1, -1):
        image = apply_pt(PhaseState(traj.coords[i], traj.velocities[i], float(traj.times[i])))
        times.append(image.time)
        coords.append(image.coords)
        velocities.append(image.momenta)
        accels.append(-accelerations[i][::-1])
    return np.array(times), np.array(coords), np.array(velocities), np.array(accels)


def pt_residual(traj: Trajectory, spec: ChainSpec) -> float:
    """Largest equation-of-motion residual of the PT image of a chain trajectory."""
    _, coords, velocities, accels = pt_image(traj, spec)
    C, K = pencil_matrices(spec)
    residual = accels + velocities @ C.T + coords @ K.T
    return float(np.max(np.abs(residual)))


def trajectory_frame(traj: Trajectory) -> pd.DataFrame:
    n = traj.size
    data = {"t": traj.times}
    for j in range(n):
        data[f"x_{j + 1}"] = traj.coords[:, j]
    for j in range(n):
        data[f"p_{j + 1}"] = traj.momenta[:, j]
    data["E"] = traj.energy
    data["H"] = traj.hamiltonian
    return pd.DataFrame(data)


def default_initial(size: int) -> PhaseState:
    """x_1 = 1, everything else at rest."""
    state = PhaseState.zeros(size)
    state.coords[0] = 1.0
    return state
