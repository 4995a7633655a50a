from oscillators.dynamics.dynamics import (
    FrequencyReport,
    Trajectory,
    check_step,
    conservation_report,
    default_initial,
    frequency_extract,
    growth_rate,
    integrate,
    power_envelopes,
    pt_image,
    pt_residual,
    rk4_step,
    system_matrices,
    trajectory_frame,
)
