import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

from oscillators.chain import (
    EVEN,
    HamiltonianRep,
    build_chain,
    build_uniform_chain,
    gauge_state,
    random_gauge,
)
from oscillators.continuum import ContinuumParams, impurity_mode, symmetric_grid
from oscillators.dynamics import (
    FrequencyReport,
    conservation_report,
    default_initial,
    frequency_extract,
    integrate,
    trajectory_frame,
)
from oscillators.errors import InvalidArgumentError
from oscillators.planar import TrioParams, scan_eps2, trio_im_lambda_trace, trio_phase_diagram
from oscillators.regions import (
    GammaProfile,
    gamma_crit_table,
    phase_table_text,
    scan_epsilon,
    unbroken_condition_closed_form,
)
from oscillators.regions.regions import DEFAULT_REFINE_TOL, DEFAULT_SEARCH_TOL
from oscillators.spectral import DEFAULT_IMAG_TOL, chain_spectrum, charpoly_recursive
from utils.config import RunConfig
from utils.logger import get_reporter
from utils.tables import frame_to_csv_text

logger = get_reporter(__name__, "runners")


@dataclass
class RunResult:
    """Output of one command: a table for CSV, a document for JSON and summary lines for the console."""

    frame: pd.DataFrame
    data: dict
    summary: List[str] = field(default_factory=list)
    csv_text: Optional[str] = None

    def csv(self) -> str:
        return self.csv_text if self.csv_text is not None else frame_to_csv_text(self.frame)


def _report_document(report) -> dict:
    return {
        "parameter": report.parameter,
        "refine_tol": report.refine_tol,
        "grid": report.grid.tolist(),
        "max_im_lambda": report.max_imag.tolist(),
        "phase": list(report.phases),
        "intervals": [
            {"start": i.start, "end": i.end, "phase": i.phase, "refined": i.start_refined and i.end_refined}
            for i in report.intervals
        ],
    }


def _interval_lines(report) -> List[str]:
    return [f"{i.phase}: [{i.start:.10g}, {i.end:.10g}]" for i in report.intervals]


def run_spectrum(config: RunConfig) -> RunResult:
    p = config.params
    gammas = GammaProfile(p["profile"], p["gamma"]).values(p["n"])
    spec = build_chain(p["n"], p["omega"], gammas, p["epsilon"], p["parity"], p["center_omega"])
    spectrum = chain_spectrum(spec, config.tolerance("imag_tol", DEFAULT_IMAG_TOL))
    summary = [
        f"frequencies: {len(spectrum.frequencies)} ({spectrum.method})",
        f"max |Im lambda|: {spectrum.max_imag:.6g}",
        spectrum.classification,
    ]
    if spec.parity == EVEN and spec.uniform:
        interval = unbroken_condition_closed_form(spec.n_pairs, spec.omega, spec.gamma)
        if interval is None:
            summary.append("unbroken epsilon interval: empty")
        else:
            summary.append(f"unbroken epsilon interval: ({interval[0]:.10g}, {interval[1]:.10g})")
    return RunResult(spectrum.to_frame(), spectrum.to_dict(), summary)


def run_scan(config: RunConfig) -> RunResult:
    p = config.params
    template = build_chain(p["n"], p["omega"], 0.0, 0.0, p["parity"])
    report = scan_epsilon(
        template,
        GammaProfile(p["profile"], p["gamma"]),
        (p["eps_min"], p["eps_max"]),
        p["points"],
        config.tolerance("refine_tol", DEFAULT_REFINE_TOL),
        config.tolerance("imag_tol", DEFAULT_IMAG_TOL),
    )
    return RunResult(report.to_frame(), _report_document(report), _interval_lines(report), phase_table_text(report))


def run_gamma_crit(config: RunConfig) -> RunResult:
    p = config.params
    Ns = list(range(p["n_min"], p["n_max"] + 1))
    frame = gamma_crit_table(Ns, p["omega"], p["profile"], config.tolerance("search_tol", DEFAULT_SEARCH_TOL))
    summary = [f"N={int(N)}: gamma_crit={g:.6f}" for N, g in zip(frame["N"], frame["gamma_crit"])]
    return RunResult(frame, {"profile": p["profile"], "rows": frame.to_dict(orient="records")}, summary)


def run_planar(config: RunConfig) -> RunResult:
    p = config.params
    if p["mode"] == "scan":
        params = TrioParams(p["omega"], p["gamma"], p["eps1"], p["eps2_min"])
        report = scan_eps2(params, (p["eps2_min"], p["eps2_max"]), p["points"])
        summary = [f"regions: {len(report.intervals)}"] + _interval_lines(report)
        return RunResult(report.to_frame(), _report_document(report), summary)
    if p["mode"] == "diagram":
        diagram = trio_phase_diagram(
            p["omega"],
            p["gamma"],
            (p["eps1_min"], p["eps1_max"]),
            (p["eps2_min"], p["eps2_max"]),
            p["resolution"],
        )
        return RunResult(diagram.to_frame(), diagram.to_dict(), [f"unbroken cells: {diagram.unbroken_cells}"])
    if p["mode"] == "trace":
        frame = trio_im_lambda_trace(p["omega"], p["gamma"], p["eps1"], (p["eps2_min"], p["eps2_max"]), p["points"])
        return RunResult(frame, {"rows": frame.to_dict(orient="list")}, [f"rows: {len(frame)}"])
    raise InvalidArgumentError(f"unknown planar mode {p['mode']!r}")


def run_simulate(config: RunConfig) -> RunResult:
    p = config.params
    spec = build_uniform_chain(p["n"], p["omega"], p["gamma"], p["epsilon"])
    initial = default_initial(spec.size)
    if p["rep"] == "gauge":
        rep = random_gauge(spec, np.random.default_rng(config.seed), p["gauge_scale"])
        initial = gauge_state(rep, initial)
    else:
        rep = HamiltonianRep(p["rep"])
    traj = integrate(spec, rep, initial, p["t_end"], p["dt"])
    drift = conservation_report(traj, spec)
    summary = [
        f"energy drift: {drift['energy_drift']:.3e}",
        f"hamiltonian drift: {drift['hamiltonian_drift']:.3e}",
    ]
    try:
        peaks = frequency_extract(traj)
    except InvalidArgumentError as e:
        peaks = FrequencyReport(np.array([]), 2 * np.pi / traj.duration, False)
        summary.append(f"peaks: not extracted, {e}")
    else:
        if peaks.growth:
            summary.append("growth: amplitude grows, broken phase")
        else:
            summary.append(f"peaks: {', '.join(f'{w:.4f}' for w in peaks.peaks)} (bin width {peaks.bin_width:.4g})")
    frame = trajectory_frame(traj).iloc[:: p["save_every"]].reset_index(drop=True)
    data = {
        "drift": drift,
        "peaks": peaks.peaks.tolist(),
        "bin_width": peaks.bin_width,
        "growth": peaks.growth,
        "columns": list(frame.columns),
        "rows": frame.to_numpy().tolist(),
    }
    return RunResult(frame, data, summary)


def run_impurity(config: RunConfig) -> RunResult:
    p = config.params
    params = ContinuumParams(p["c"], p["omega"], p["epsilon"], p["gamma"])
    mode = impurity_mode(params, p["Omega"], symmetric_grid(p["half_width"], p["points"]))
    checks = mode.verify()
    summary = [f"a={mode.a:.10g} b={mode.b:.10g}"] + [f"{k}: {v}" for k, v in checks.items()]
    frame = mode.to_frame()
    return RunResult(frame, {"a": mode.a, "b": mode.b, "checks": checks, **frame.to_dict(orient="list")}, summary)


def run_poly(config: RunConfig) -> RunResult:
    poly = charpoly_recursive(config.params["n"])
    frame = pd.DataFrame({"k": range(poly.degree + 1), "coefficient": poly.coefficients})
    return RunResult(frame, {"N": poly.degree, "coefficients": list(poly.coefficients)}, [poly.format()])


RUNNERS = {
    "spectrum": run_spectrum,
    "scan": run_scan,
    "gamma-crit": run_gamma_crit,
    "planar": run_planar,
    "simulate": run_simulate,
    "impurity": run_impurity,
    "poly": run_poly,
}


def run_command(config: RunConfig) -> RunResult:
    logger.log(logging.INFO, f"running {config.command} with {config.params}")
    return RUNNERS[config.command](config)
