from oscillators.spectral.charpoly import (
    CharPoly,
    binomial_coefficients,
    charpoly_closed_form,
    charpoly_gamma_sum,
    charpoly_hyperbolic,
    charpoly_recursive,
    charpoly_value,
)
from oscillators.spectral.spectral import (
    BROKEN,
    DEFAULT_IMAG_TOL,
    UNBROKEN,
    Spectrum,
    ZRoots,
    analytic_spectrum,
    analytic_z_roots,
    chain_spectrum,
    chi_of_lambda,
    classify,
    determinant_check,
    frequency_matrix,
    is_real_frequency,
    m2n_determinant,
    make_spectrum,
    pencil_eigenvalues,
    qep_spectrum,
    quartic_frequencies_general,
    quartic_value,
    spectrum_distance,
    tridiagonal_determinant,
)
