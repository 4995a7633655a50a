from oscillators.continuum.continuum import (
    ContinuumParams,
    FieldHistory,
    ImpuritySolution,
    apply_pt,
    continuum_dispersion,
    continuum_parameters,
    fd_wave_solver,
    gaussian_impurity,
    impurity_mode,
    lattice_dispersion,
    mode_frequency,
    mode_initial_fields,
    sponge_profile,
    symmetric_grid,
)
