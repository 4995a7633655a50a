import time
from pathlib import Path

from oscillators.chain import build_uniform_chain, odd_chain
from oscillators.continuum import ContinuumParams, fd_wave_solver, gaussian_impurity, impurity_mode, symmetric_grid
from oscillators.planar import TrioParams, scan_eps2, trio_im_lambda_trace, trio_phase_diagram
from oscillators.regions import GammaProfile, emit_phase_table, epsilon_trace, gamma_crit_table, scan_epsilon
from utils.logger import configure_logging
from utils.tables import write_frame, write_json

RESULTS_DIR = Path("results", time.strftime('%Y%m%d-%H%M%S'))

# create results directory if it does not exist
if not RESULTS_DIR.exists():
    RESULTS_DIR.mkdir(parents=True)

# Settings of the figure tables:
#   "chains" lists the chain sizes of the epsilon sweeps at the given omega and gamma.
#   "gamma_crit" lists the N values per profile; N up to 40 for the inverse profiles takes several minutes.
#   "planar" holds the trio sweeps; a diagram is written for every (omega, gamma) pair.
#   "fd" runs the finite-difference solver seeded with the impurity mode; it stays bounded only
#   for small impurity gamma, around 0.2 and above the field grows at the origin.
#   Every table is plain CSV, plotting is left to external tools.
settings = {
    "chains": {"Ns": [1, 2, 3, 4], "omega": 1.0, "gamma": 0.1, "eps_range": (0.0, 1.2), "points": 241},
    "gamma_crit": {
        "uniform": list(range(1, 13)),
        "inverse": [5, 10, 20, 40],
        "inverse_square": [5, 10, 20, 40],
    },
    "planar": {
        "trace": {"omega": 0.8, "gamma": 0.1, "eps1": 0.1, "eps2_range": (0.0, 0.7)},
        "omegas": [0.8, 0.9, 1.0, 1.1],
        "gammas": [0.02, 0.06, 0.10, 0.20, 0.28, 0.34, 0.40, 0.50],
        "resolution": 101,
    },
    "impurity": {"c": 1.0, "omega": 1.0, "epsilon": 0.5, "gamma": 0.1, "Omega": 1.0},
    "fd": {"half_width": 40.0, "points": 1601, "t_end": 60.0, "save_every": 50},
}

configure_logging(verbose=False)

# epsilon sweeps and Im(lambda) traces of uniform chains
chains = settings["chains"]
for N in chains["Ns"]:
    template = build_uniform_chain(N, chains["omega"], chains["gamma"], 0.0)
    report = scan_epsilon(template, eps_range=chains["eps_range"], grid_points=chains["points"])
    emit_phase_table(report, RESULTS_DIR.joinpath(f"chain_N{N}_phases.csv"))
    trace = epsilon_trace(template, eps_range=chains["eps_range"], points=chains["points"])
    write_frame(trace, RESULTS_DIR.joinpath(f"chain_N{N}_im_lambda.csv"))

# the odd chain with the same pairs and a lossless centre
odd = odd_chain(2, chains["omega"], chains["gamma"], 0.0)
emit_phase_table(scan_epsilon(odd, eps_range=chains["eps_range"]), RESULTS_DIR.joinpath("odd_chain_N2_phases.csv"))

# gamma_crit against N, one table per profile
for kind, Ns in settings["gamma_crit"].items():
    table = gamma_crit_table(Ns, 1.0, kind)
    write_frame(table, RESULTS_DIR.joinpath(f"gamma_crit_{kind}.csv"))

# planar trio: the eps2 sweep with its Im(lambda) trace and the (eps1, eps2) diagrams
planar = settings["planar"]
trace = planar["trace"]
params = TrioParams(trace["omega"], trace["gamma"], trace["eps1"], trace["eps2_range"][0])
emit_phase_table(scan_eps2(params, trace["eps2_range"]), RESULTS_DIR.joinpath("planar_phases.csv"))
write_frame(
    trio_im_lambda_trace(trace["omega"], trace["gamma"], trace["eps1"], trace["eps2_range"]),
    RESULTS_DIR.joinpath("planar_im_lambda.csv"),
)
for omega in planar["omegas"]:
    for gamma in planar["gammas"]:
        diagram = trio_phase_diagram(omega, gamma, resolution=planar["resolution"])
        write_frame(diagram.to_frame(), RESULTS_DIR.joinpath(f"planar_diagram_w{omega}_g{gamma}.csv"))

# pseudo-bound mode of the continuum impurity
impurity = settings["impurity"]
mode = impurity_mode(
    ContinuumParams(impurity["c"], impurity["omega"], impurity["epsilon"], impurity["gamma"]), impurity["Omega"]
)
write_frame(mode.to_frame(), RESULTS_DIR.joinpath("impurity_mode.csv"))

# finite-difference run from the mode with a narrow Gaussian impurity
fd = settings["fd"]
x = symmetric_grid(fd["half_width"], fd["points"])
dx = x[1] - x[0]
history = fd_wave_solver(
    mode.params,
    gaussian_impurity(x, mode.params.gamma_strength, 4 * dx),
    x,
    fd["t_end"],
    0.4 * dx,
    mode,
    save_every=fd["save_every"],
)
write_frame(history.snapshot_frame(), RESULTS_DIR.joinpath("impurity_fd_final.csv"))
write_json(history.to_frames(), RESULTS_DIR.joinpath("impurity_fd_frames.json"))
write_json({"settings": settings, "a": mode.a, "b": mode.b, "checks": mode.verify()}, RESULTS_DIR.joinpath("summary.json"))
