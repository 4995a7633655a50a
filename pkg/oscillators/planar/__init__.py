from oscillators.planar.planar import (
    CubicCoeffs,
    PhaseDiagram,
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
