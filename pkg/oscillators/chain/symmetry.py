from oscillators.chain.chain import PhaseState


def apply_parity(state: PhaseState) -> PhaseState:
    """Index reflection with sign flip: x_k -> -x_{n+1-k}, p_k -> -p_{n+1-k}.

    For an odd chain the neutral centre oscillator maps onto itself with a sign flip.
    """
    return PhaseState(-state.coords[::-1], -state.momenta[::-1], state.time)


def apply_time_reversal(state: PhaseState, velocity_sense: bool = False) -> PhaseState:
    """Momentum sign flip x -> x, p -> -p.

    Args:
        state (PhaseState): phase point
        velocity_sense (bool): treat the state as a point on a trajectory and reflect
            its time stamp as well, t -> -t

    Returns:
        PhaseState: time-reversed state
    """
    time = -state.time if velocity_sense else state.time
    return PhaseState(state.coords, -state.momenta, time)


def apply_pt(state: PhaseState) -> PhaseState:
    return apply_time_reversal(apply_parity(state), velocity_sense=True)
