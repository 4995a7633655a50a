import numpy as np
import pytest

from oscillators.chain.hamiltonians import symplectic_unit
from oscillators.errors import InvalidArgumentError
from oscillators.planar import (
    TrioParams,
    critical_point_criterion,
    cubic_coefficients,
    cubic_mu_roots,
    scan_eps2,
    sextic_value,
    trio_classify,
    trio_hamiltonian_matrix,
    trio_im_lambda_trace,
    trio_pencil,
    trio_phase_diagram,
    trio_qep_spectrum,
    trio_spectrum,
)
from oscillators.spectral import BROKEN, UNBROKEN, spectrum_distance


def random_params(rng, omega2=1.0):
    return TrioParams(
        omega=float(rng.uniform(0.6, 1.2)),
        gamma=float(rng.uniform(0.0, 0.4)),
        eps1=float(rng.uniform(0.0, 0.6)),
        eps2=float(rng.uniform(-0.3, 0.7)),
        omega2=omega2,
    )


def test_five_alternating_regions():
    report = scan_eps2(TrioParams(0.8, 0.1, 0.1, 0.0), (0.0, 0.7), 701)
    phases = [i.phase for i in report.intervals]
    assert len(phases) == 5
    assert all(a != b for a, b in zip(phases[:-1], phases[1:]))


@pytest.mark.parametrize("omega", [0.8, 0.9, 1.0, 1.1])
def test_unbroken_area_shrinks_with_gamma(omega):
    weak = trio_phase_diagram(omega, 0.02, resolution=41)
    strong = trio_phase_diagram(omega, 0.5, resolution=41)
    assert strong.unbroken_cells < weak.unbroken_cells


def test_strong_loss_gain_has_no_unbroken_region():
    assert trio_phase_diagram(1.0, 2.0, resolution=32).unbroken_cells == 0


@pytest.mark.parametrize("omega2", [1.0, 1.3])
def test_cubic_matches_qep(omega2, rng):
    for _ in range(100):
        params = random_params(rng, omega2)
        assert spectrum_distance(trio_spectrum(params), trio_qep_spectrum(params)) < 1e-6


@pytest.mark.parametrize("omega2", [1.0, 0.7])
def test_hamiltonian_generates_the_trio_equations(omega2, rng):
    for _ in range(20):
        params = random_params(rng, omega2)
        flow = symplectic_unit(3) @ trio_hamiltonian_matrix(params)
        frequencies = -1j * np.linalg.eigvals(flow)
        assert spectrum_distance(frequencies, trio_qep_spectrum(params).frequencies) < 1e-6


def test_cubic_is_the_pencil_determinant(rng):
    for _ in range(20):
        params = random_params(rng, 1.2)
        C, K = trio_pencil(params)
        lam = complex(rng.normal(), rng.normal(scale=0.3))
        det = np.linalg.det(lam**2 * np.eye(3) - 1j * lam * C - K)
        assert det == pytest.approx(sextic_value(params, lam), abs=1e-10)


def test_critical_point_criterion_agrees_with_roots(rng):
    checked = 0
    for _ in range(300):
        params = random_params(rng)
        mu = np.sort_complex(cubic_mu_roots(params))
        if np.min(np.abs(np.diff(mu))) < 1e-4 or np.min(np.abs(mu)) < 1e-4:
            continue
        checked += 1
        assert critical_point_criterion(params) == (trio_classify(params) == UNBROKEN)
    assert checked > 200


def test_coefficients_for_unit_centre():
    cubic = cubic_coefficients(TrioParams(1.0, 0.0, 0.0, 0.0))
    assert (cubic.alpha, cubic.beta, cubic.sigma) == (3.0, 3.0, 1.0)
    np.testing.assert_allclose(np.sort(cubic_mu_roots(TrioParams(1.0, 0.0, 0.0, 0.0)).real), [1.0, 1.0, 1.0], atol=1e-4)


def test_double_root_counts_as_real():
    # uncoupled and lossless: mu = omega^2 is a double root next to omega2^2
    assert trio_classify(TrioParams(1.0, 0.0, 0.0, 0.0, omega2=1.3)) == UNBROKEN
    assert trio_classify(TrioParams(1.0, 0.3, 0.0, 0.0, omega2=1.3)) == BROKEN


def test_diagram_tables():
    diagram = trio_phase_diagram(0.9, 0.1, resolution=32)
    frame = diagram.to_frame()
    assert list(frame.columns) == ["eps1", "eps2", "unbroken"]
    assert len(frame) == 32 * 32
    assert frame["unbroken"].sum() == diagram.unbroken_cells
    assert np.array(diagram.to_dict()["unbroken"]).shape == (32, 32)


def test_im_lambda_trace():
    trace = trio_im_lambda_trace(0.8, 0.1, 0.1, points=64)
    assert list(trace.columns) == ["eps2"] + [f"im_{j}" for j in range(6)]
    np.testing.assert_allclose(trace[[f"im_{j}" for j in range(6)]].sum(axis=1), 0.0, atol=1e-6)


def test_im_lambda_trace_vanishes_on_two_intervals():
    trace = trio_im_lambda_trace(0.8, 0.1, 0.1, (0.0, 0.7), 701)
    real = trace[[f"im_{j}" for j in range(6)]].abs().max(axis=1).to_numpy() < 1e-9
    starts = np.flatnonzero(real[1:] & ~real[:-1]) + 1
    ends = np.flatnonzero(real[:-1] & ~real[1:])
    assert not real[0] and not real[-1]
    assert len(starts) == len(ends) == 2
    report = scan_eps2(TrioParams(0.8, 0.1, 0.1, 0.0), (0.0, 0.7), 701)
    unbroken = [i for i in report.intervals if i.phase == UNBROKEN]
    assert len(unbroken) == 2
    step = 0.7 / 700
    eps2 = trace["eps2"].to_numpy()
    for start, end, interval in zip(starts, ends, unbroken):
        assert eps2[start] == pytest.approx(interval.start, abs=step)
        assert eps2[end] == pytest.approx(interval.end, abs=step)


def test_argument_checks():
    with pytest.raises(InvalidArgumentError):
        TrioParams(-1.0, 0.1, 0.1, 0.1)
    with pytest.raises(InvalidArgumentError):
        TrioParams(1.0, -0.1, 0.1, 0.1)
    with pytest.raises(InvalidArgumentError):
        trio_phase_diagram(1.0, 0.1, resolution=16)
    with pytest.raises(InvalidArgumentError):
        trio_im_lambda_trace(1.0, 0.1, 0.1, points=10)
