"""Discrete-event simulation of position-verification protocols on a line.

The package splits into five layers: `spacetime` (1+1D Minkowski geometry
and the geometric security predicates), `quantum` (state vectors, Bell
measurements, teleportation, and an independent density-matrix oracle),
`protocol` (the event scheduler and scheme choreographies), `adversary`
(colluding-prover strategies), and `harness` (scenario config, verdicts,
reports). `cli` exposes the same capabilities as the `qpv-sim` command.
"""
from .adversary import CommPattern, Strategy, classify_pattern, relabel_reply_bit
from .harness import (
    ConfigError,
    Reason,
    RoundVerdict,
    RunReport,
    Scenario,
    TheoremLayout,
    aggregate,
    parse_scenario,
    render_report,
    render_scenario,
    run_scenario,
    theorem_layout,
    verdict,
)
from .protocol import (
    ActorId,
    CausalityViolation,
    Message,
    RecordKind,
    Round,
    RoundTrace,
    Scheme,
    TraceRecord,
    run_round,
)
from .quantum import (
    BELL_OUTCOMES,
    Basis,
    BellOutcome,
    StateVector,
    apply_pauli,
    basis_state,
    bell_pair,
    bell_state,
    bell_vector,
    bsm,
    compose,
    correction_bit,
    fidelity,
    haar_random_qubit,
    measure,
    relabel_bsm,
    teleport,
    trace_distance,
)
from .spacetime import (
    TAU_GEO,
    Event,
    Geometry,
    Hypersurface,
    SeparationClass,
    TheoremPredicates,
    causally_precedes,
    classify,
    earliest_common_future,
    exchange_completion_times,
    squared_interval,
    theorem1_insecure,
    theorem234_predicates,
)

__version__ = "0.1.0"
