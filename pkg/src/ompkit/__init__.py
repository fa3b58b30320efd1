"""Optimal discrimination of qubit ensembles and the channels that preserve it.

The library answers three questions about a finite ensemble of qubit states
with prior probabilities:

* What is the minimum-error measurement and its guessing probability?
  (:func:`solve`, :func:`solve_general`, :func:`solve_two_state`)
* Does a given qubit channel leave that measurement optimal, and at what
  cost in guessing probability?  (:func:`check_omp` and its specializations)
* What is the full affine family of channels that do, and which members are
  physical?  (:func:`family_for`, :func:`sieve_admissible`)

Everything works in Bloch coordinates: states are 3-vectors in the unit
ball, channels are affine maps ``v -> D v + t``, and 2x2 Hermitian operators
are ``alpha I + beta . sigma`` pairs.
"""

from .bloch import (
    DEFAULT_TOL,
    Herm2,
    Tolerances,
    eigen2,
    herm2_from_state,
    matrix_rank,
    nullspace,
    pinv,
    trace_norm,
)
from .channels import (
    CanonicalForm,
    CptpVerdict,
    QubitChannel,
    canonical_form,
    choi_matrix,
    depolarizing_channel,
    identity_channel,
    is_cptp_choi,
    is_cptp_inequalities,
    unitary_channel,
)
from .discrimination import (
    CaseTag,
    DiscriminationSolution,
    oracle_random_search,
    povm_value,
    povm_weights,
    solve,
    solve_general,
    solve_two_state,
)
from .ensembles import (
    Ensemble,
    HelstromPair,
    helstrom,
    make_ensemble,
    reduce_unidentified,
)
from .errors import (
    BadParameter,
    BadPriors,
    BlochOutOfBall,
    ChannelNotCPTP,
    ConsistencyError,
    ConvergenceFailure,
    DeltaUnreachable,
    DominatedState,
    FormatError,
    IndexOutOfRange,
    InfeasibleCompleteness,
    MissingComplementaryState,
    NotEquiprobable,
    NotOmpInput,
    NotUnitary,
    OmpkitError,
    PairSetTooSmall,
    TooFewStates,
    WrongArity,
    WrongLength,
)
from .fileio import (
    BUNDLED_ENSEMBLES,
    bundled_ensemble,
    load_channel,
    load_ensemble,
    parse_channel,
    parse_ensemble,
)
from .omp_check import (
    EquiprobableReport,
    Mode,
    OmpReport,
    TwoStateReport,
    check_convex_mix,
    check_equiprobable,
    check_omp,
    check_pg_preserving,
    check_two_state,
    check_unitary,
)
from .omp_construct import (
    DELTA_COORD,
    N_UNKNOWNS,
    SHIFT_COORDS,
    OmpFamily,
    OmpSystem,
    SieveSample,
    build_system,
    delta_slice,
    family_for,
    fix_coordinates,
    pack,
    sieve_admissible,
    solve_family,
    unital_slice,
    unpack,
)

__version__ = "0.1.0"

__all__ = [
    "BUNDLED_ENSEMBLES",
    "BadParameter",
    "BadPriors",
    "BlochOutOfBall",
    "CanonicalForm",
    "CaseTag",
    "ChannelNotCPTP",
    "ConsistencyError",
    "ConvergenceFailure",
    "CptpVerdict",
    "DEFAULT_TOL",
    "DELTA_COORD",
    "DeltaUnreachable",
    "DiscriminationSolution",
    "DominatedState",
    "Ensemble",
    "EquiprobableReport",
    "FormatError",
    "HelstromPair",
    "Herm2",
    "IndexOutOfRange",
    "InfeasibleCompleteness",
    "MissingComplementaryState",
    "Mode",
    "N_UNKNOWNS",
    "NotEquiprobable",
    "NotOmpInput",
    "NotUnitary",
    "OmpFamily",
    "OmpReport",
    "OmpSystem",
    "OmpkitError",
    "PairSetTooSmall",
    "QubitChannel",
    "SHIFT_COORDS",
    "SieveSample",
    "Tolerances",
    "TooFewStates",
    "TwoStateReport",
    "WrongArity",
    "WrongLength",
    "build_system",
    "bundled_ensemble",
    "canonical_form",
    "check_convex_mix",
    "check_equiprobable",
    "check_omp",
    "check_pg_preserving",
    "check_two_state",
    "check_unitary",
    "choi_matrix",
    "delta_slice",
    "depolarizing_channel",
    "eigen2",
    "family_for",
    "fix_coordinates",
    "helstrom",
    "herm2_from_state",
    "identity_channel",
    "is_cptp_choi",
    "is_cptp_inequalities",
    "load_channel",
    "load_ensemble",
    "make_ensemble",
    "matrix_rank",
    "nullspace",
    "oracle_random_search",
    "pack",
    "parse_channel",
    "parse_ensemble",
    "pinv",
    "povm_value",
    "povm_weights",
    "reduce_unidentified",
    "sieve_admissible",
    "solve",
    "solve_family",
    "solve_general",
    "solve_two_state",
    "trace_norm",
    "unital_slice",
    "unitary_channel",
    "unpack",
]
