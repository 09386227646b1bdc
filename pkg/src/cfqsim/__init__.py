"""Counterfactual quantum communication: exact simulation and resource analytics.

Modules
-------
states      sparse labeled-register pure states and their linear-map algebra
michelson   the single-round polarization-switched interferometer engine
zeno        chained unbalanced interferometers with a pass/block obstacle
star        cat-state distribution over a star of independent links
transfer    deterministic state transfer over the shared device pair
costs       quantum/classical resource costs and a seeded Monte Carlo
cli         deterministic command-line front end
"""

from .costs import (
    CostProfile,
    McReport,
    binary_entropy,
    cost_profile,
    golden_section_min,
    minimize_classical_cost,
    minimize_quantum_cost,
    monte_carlo,
    total_qst_cost,
)
from .michelson import (
    BeamSplitter,
    ClosedFormProbs,
    RoundConfig,
    RoundOutcome,
    closed_form_probs,
    d1_state_closed_form,
    forward_beamsplitter,
    return_beamsplitter,
    round_record,
    run_round,
    run_scqkd_round,
    switch_interaction,
)
from .star import CatResult, StarConfig, cat_fidelity, ideal_cat, partial_propagator, run_star
from .states import (
    PureState,
    Qubit,
    Register,
    apply_map,
    entanglement_entropy,
    fidelity_up_to_phase,
    postselect,
    product_state,
    sector,
    states_close,
)
from .transfer import (
    TransferTranscript,
    transfer_alice_to_bob,
    transfer_bob_to_alice,
    transfer_without_correction,
)
from .zeno import (
    ChainConfig,
    ChainResult,
    asymptotic_limit,
    chain_closed_form,
    chain_step,
    convergence_scan,
    obstacle_step,
    run_chain,
)

__version__ = "0.1.0"
