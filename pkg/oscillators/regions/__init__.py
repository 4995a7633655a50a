from oscillators.regions.regions import (
    GammaProfile,
    Interval,
    RegionReport,
    build_report,
    emit_phase_table,
    epsilon_trace,
    gamma_crit,
    gamma_crit_closed_form,
    gamma_crit_table,
    has_unbroken_interval,
    phase_table_text,
    scan_epsilon,
    unbroken_condition_closed_form,
)
