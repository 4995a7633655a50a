import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar

from oscillators.chain.chain import ChainSpec, build_chain, build_uniform_chain
from oscillators.errors import InvalidArgumentError, RangeTooSmallError
from oscillators.parallel import parallel_map
from oscillators.spectral.spectral import (
    BROKEN,
    DEFAULT_IMAG_TOL,
    UNBROKEN,
    analytic_z_roots,
    chain_spectrum,
)
from utils.logger import get_reporter
from utils.tables import frame_to_csv_text, write_text_atomic

logger = get_reporter(__name__, "regions")

DEFAULT_REFINE_TOL = 1e-10
MAX_BISECTIONS = 200
GAMMA_CRIT_EPS_POINTS = 400
GAMMA_CRIT_EPS_SPAN = 1.5
DEFAULT_SEARCH_TOL = 1e-4


@dataclass(frozen=True)
class GammaProfile:
    """Loss-gain amplitudes along the half chain.

    Pair n = 1..N counts from the outer end, so n = N is the innermost pair. The
    inverse kinds give gamma / (N - n + 1) and gamma / (N - n + 1)^2.
    """

    kind: str = "uniform"
    amplitude: float = 0.0
    custom: Tuple[float, ...] = ()

    KINDS = ("uniform", "inverse", "inverse_square", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise InvalidArgumentError(f"unknown gamma profile {self.kind!r}, expected one of {self.KINDS}")
        if self.amplitude < 0:
            raise InvalidArgumentError(f"gamma amplitude must be non-negative, got {self.amplitude}")
        object.__setattr__(self, "custom", tuple(float(g) for g in self.custom))

    def values(self, N: int) -> Tuple[float, ...]:
        if self.kind == "custom":
            if len(self.custom) != N:
                raise InvalidArgumentError(f"custom profile has {len(self.custom)} entries, chain needs {N}")
            return self.custom
        distance = np.arange(N, 0, -1, dtype=float)
        if self.kind == "uniform":
            return (float(self.amplitude),) * N
        power = 1 if self.kind == "inverse" else 2
        return tuple(float(g) for g in self.amplitude / distance**power)

    def with_amplitude(self, amplitude: float) -> "GammaProfile":
        return replace(self, amplitude=amplitude)


@dataclass(frozen=True)
class Interval:
    start: float
    end: float
    phase: str
    start_refined: bool = True
    end_refined: bool = True

    @property
    def width(self) -> float:
        return self.end - self.start


@dataclass
class RegionReport:
    parameter: str
    grid: np.ndarray
    max_imag: np.ndarray
    phases: List[str]
    intervals: List[Interval] = field(default_factory=list)
    refine_tol: float = DEFAULT_REFINE_TOL

    def unbroken_intervals(self) -> List[Interval]:
        return [i for i in self.intervals if i.phase == UNBROKEN]

    def boundaries(self) -> List[float]:
        return [i.end for i in self.intervals[:-1]]

    def unbroken_width(self) -> float:
        return sum(i.width for i in self.unbroken_intervals())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"param": self.grid, "max_im_lambda": self.max_imag, "phase": self.phases},
            columns=["param", "max_im_lambda", "phase"],
        )

    def interval_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(i.start, i.end, i.phase, int(i.start_refined and i.end_refined)) for i in self.intervals],
            columns=["start", "end", "phase", "refined"],
        )


def chain_at(template: ChainSpec, epsilon: float, gammas: Sequence[float]) -> ChainSpec:
    """Template chain with a uniform coupling and the given loss-gain profile."""
    return build_chain(
        template.n_pairs, template.omegas, gammas, epsilon, template.parity, template.center_omega
    )


def _bisect(predicate, lo: float, hi: float, tol: float) -> Tuple[float, bool]:
    """Boundary between predicate(lo) and predicate(hi) located to tol."""
    left = predicate(lo)
    if left == predicate(hi):
        return 0.5 * (lo + hi), False
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            return 0.5 * (lo + hi), True
        mid = 0.5 * (lo + hi)
        if predicate(mid) == left:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), False


def _runs(grid: np.ndarray, phases: List[str]) -> List[Tuple[int, int]]:
    runs, start = [], 0
    for i in range(1, len(phases)):
        if phases[i] != phases[i - 1]:
            runs.append((start, i - 1))
            start = i
    if len(phases):
        runs.append((start, len(phases) - 1))
    return runs


def build_report(parameter: str, grid, classify_point, refine_tol: float) -> RegionReport:
    """Classify every grid point, then bisect each phase change to refine_tol.

    Args:
        parameter (str): name of the swept parameter
        grid: ascending sweep values
        classify_point: callable value -> (is_unbroken, max_imag)
        refine_tol (float): bisection tolerance on the boundaries
    """
    grid = np.asarray(grid, dtype=float)
    results = parallel_map(classify_point, grid)
    phases = [UNBROKEN if ok else BROKEN for ok, _ in results]
    max_imag = np.array([m for _, m in results], dtype=float)

    def predicate(value):
        return classify_point(value)[0]

    intervals = []
    runs = _runs(grid, phases)
    edges = []
    for (_, end), (start, _) in zip(runs[:-1], runs[1:]):
        edges.append(_bisect(predicate, grid[end], grid[start], refine_tol))
    for n, (first, last) in enumerate(runs):
        lo, lo_ok = (grid[first], True) if n == 0 else edges[n - 1]
        hi, hi_ok = (grid[last], True) if n == len(runs) - 1 else edges[n]
        intervals.append(Interval(float(lo), float(hi), phases[first], lo_ok, hi_ok))
    unrefined = sum(1 for ok in edges if not ok[1])
    if unrefined:
        logger.log(logging.WARNING, f"{unrefined} {parameter} boundaries could not be refined")
    logger.log(
        logging.INFO,
        f"{parameter} sweep of {len(grid)} points: {len(intervals)} intervals, boundaries {[round(b, 8) for b, _ in edges]}",
    )
    return RegionReport(parameter, grid, max_imag, phases, intervals, refine_tol)


def scan_epsilon(
    template: ChainSpec,
    profile: Optional[GammaProfile] = None,
    eps_range: Tuple[float, float] = (0.0, 1.2),
    grid_points: int = 200,
    refine_tol: float = DEFAULT_REFINE_TOL,
    imag_tol: float = DEFAULT_IMAG_TOL,
) -> RegionReport:
    """Sweep a uniform coupling epsilon and locate the unbroken/broken intervals.

    Args:
        template (ChainSpec): size, parity and frequencies of the chain; its couplings are replaced
        profile (GammaProfile): loss-gain profile, the template's own gammas when None
        eps_range (Tuple[float, float]): closed sweep range
        grid_points (int): number of grid points, at least 16
        refine_tol (float): bisection tolerance on the boundaries
        imag_tol (float): relative reality tolerance of the frequencies

    Returns:
        RegionReport: classified grid and refined intervals
    """
    lo, hi = eps_range
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise InvalidArgumentError(f"eps_range must be a finite ascending pair, got {eps_range}")
    if grid_points < 16:
        raise InvalidArgumentError(f"grid_points must be >= 16, got {grid_points}")
    gammas = template.gammas if profile is None else profile.values(template.n_pairs)

    def classify_point(epsilon):
        spectrum = chain_spectrum(chain_at(template, epsilon, gammas), imag_tol)
        return spectrum.unbroken, spectrum.max_imag

    grid = np.linspace(lo, hi, grid_points)
    return build_report("epsilon", grid, classify_point, refine_tol)


def unbroken_condition_closed_form(N: int, omega: float, gamma: float) -> Optional[Tuple[float, float]]:
    """Unbroken epsilon interval of the uniform chain from the genuine z roots.

    Every frequency is real iff gamma sqrt(omega^2 - gamma^2) / z_min <= epsilon <= omega^2 / (2 z_max)
    and 2 gamma^2 < omega^2.

    Returns:
        Optional[Tuple[float, float]]: (eps_low, eps_high), or None when the interval is empty
    """
    build_uniform_chain(N, omega, gamma, 0.0)
    if 2 * gamma**2 >= omega**2:
        return None
    z = analytic_z_roots(N)
    low = gamma * np.sqrt(omega**2 - gamma**2) / z.z_min
    high = omega**2 / (2 * z.z_max)
    if low >= high:
        return None
    return float(low), float(high)


def gamma_crit_closed_form(N: int, omega: float) -> float:
    """gamma at which the closed-form unbroken interval of the uniform chain closes."""
    z = analytic_z_roots(N)
    r = omega**2 * z.z_min / (2 * z.z_max)
    return float(np.sqrt((omega**2 - np.sqrt(omega**4 - 4 * r**2)) / 2))


def has_unbroken_interval(
    N: int,
    omega: float,
    profile: GammaProfile,
    eps_points: int = GAMMA_CRIT_EPS_POINTS,
    imag_tol: float = DEFAULT_IMAG_TOL,
) -> bool:
    """Whether some epsilon in (0, 1.5 omega^2] makes every frequency real."""
    gammas = profile.values(N)
    template = build_chain(N, omega, gammas, 0.0)

    def max_imag(epsilon):
        spectrum = chain_spectrum(chain_at(template, epsilon, gammas), imag_tol)
        return spectrum.unbroken, spectrum.max_imag

    grid = np.linspace(0, GAMMA_CRIT_EPS_SPAN * omega**2, eps_points + 1)[1:]
    worst = []
    for epsilon in grid:
        ok, m = max_imag(epsilon)
        if ok:
            return True
        worst.append(m)
    # the unbroken window may be narrower than the grid spacing
    i = int(np.argmin(worst))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    best = minimize_scalar(lambda e: max_imag(e)[1], bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return bool(max_imag(best.x)[0])


def gamma_crit(
    N: int,
    omega: float = 1.0,
    profile_kind: Union[str, GammaProfile] = "uniform",
    search_tol: float = DEFAULT_SEARCH_TOL,
    eps_points: int = GAMMA_CRIT_EPS_POINTS,
    imag_tol: float = DEFAULT_IMAG_TOL,
) -> float:
    """Largest loss-gain amplitude that still leaves an unbroken epsilon interval.

    Bisection over the amplitude in [0, omega] with an inner epsilon scan of eps_points
    points over (0, 1.5 omega^2].

    Raises:
        RangeTooSmallError: if an unbroken interval still exists at amplitude omega
    """
    if N is None or N < 1:
        raise InvalidArgumentError(f"N must be >= 1, got {N}")
    base = profile_kind if isinstance(profile_kind, GammaProfile) else GammaProfile(profile_kind)

    def predicate(amplitude):
        return has_unbroken_interval(N, omega, base.with_amplitude(amplitude), eps_points, imag_tol)

    lo, hi = 0.0, float(omega)
    if predicate(hi):
        raise RangeTooSmallError(f"N={N}: unbroken interval still present at gamma={hi}")
    while hi - lo > search_tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
        logger.log(logging.DEBUG, f"N={N} {base.kind}: gamma_crit in [{lo:.6f}, {hi:.6f}]")
    value = 0.5 * (lo + hi)
    logger.log(logging.INFO, f"N={N} {base.kind}: gamma_crit = {value:.6f}")
    return value


def gamma_crit_table(
    Ns: Sequence[int],
    omega: float = 1.0,
    profile_kind: str = "uniform",
    search_tol: float = DEFAULT_SEARCH_TOL,
) -> pd.DataFrame:
    """gamma_crit for every N, with the closed form alongside for uniform profiles."""
    values = parallel_map(lambda N: gamma_crit(N, omega, profile_kind, search_tol), list(Ns))
    frame = pd.DataFrame({"N": list(Ns), "inv_N": [1.0 / N for N in Ns], "gamma_crit": values})
    if profile_kind == "uniform":
        frame["closed_form"] = [gamma_crit_closed_form(N, omega) for N in Ns]
    return frame


def epsilon_trace(
    template: ChainSpec,
    profile: Optional[GammaProfile] = None,
    eps_range: Tuple[float, float] = (0.0, 1.2),
    points: int = 241,
) -> pd.DataFrame:
    """Sorted imaginary parts of every frequency along an epsilon sweep."""
    gammas = template.gammas if profile is None else profile.values(template.n_pairs)
    grid = np.linspace(eps_range[0], eps_range[1], points)
    rows = parallel_map(
        lambda e: np.sort(chain_spectrum(chain_at(template, e, gammas)).frequencies.imag), grid
    )
    frame = pd.DataFrame(np.array(rows), columns=[f"im_{j}" for j in range(2 * template.size)])
    frame.insert(0, "epsilon", grid)
    return frame


def phase_table_text(report: RegionReport) -> str:
    """Phase table CSV followed by a '#'-commented interval summary block."""
    text = frame_to_csv_text(report.to_frame())
    if report.intervals:
        summary = frame_to_csv_text(report.interval_frame())
        text += "\n" + "".join(f"# {line}\n" for line in summary.splitlines())
    return text


def emit_phase_table(report: RegionReport, path: Union[str, Path]) -> Path:
    return write_text_atomic(path, phase_table_text(report))
