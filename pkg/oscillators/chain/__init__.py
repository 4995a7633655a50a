from oscillators.chain.chain import (
    EVEN,
    ODD,
    PRODUCT,
    SUM,
    ChainSpec,
    HamiltonianRep,
    PhaseState,
    build_chain,
    build_uniform_chain,
    chain_from_dict,
    chain_from_json,
    chain_to_dict,
    chain_to_json,
    odd_chain,
    pencil_matrices,
    second_order_residual,
)
from oscillators.chain.hamiltonians import (
    acceleration,
    equations_of_motion,
    eval_hamiltonian,
    flow_matrix,
    gauge_state,
    hamiltonian_matrix,
    random_gauge,
    state_from_velocities,
)
from oscillators.chain.lagrangian import conserved_energy, energy_series, euler_lagrange_residual, eval_lagrangian
from oscillators.chain.symmetry import apply_parity, apply_pt, apply_time_reversal
