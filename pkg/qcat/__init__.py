from qcat.arith import (
    Branch,
    CatMap,
    Parity,
    PeriodCache,
    n_prime,
    order_mod,
    period_record,
    period_table,
    quantum_period,
    validate_catmap,
)
from qcat.evenperiod import (
    EvenCaseReport,
    half_period_check,
    quarter_turn_check,
    support_report,
    vanishing_scan,
)
from qcat.exceptions import (
    ArithmeticFailure,
    BranchMismatch,
    ConditionViolation,
    ConfigError,
    Degenerate,
    InvariantFailure,
    NoOrderFound,
    NotScalar,
    OracleMismatch,
    QCatError,
    StructureViolation,
    TooLarge,
    UnitarityFailure,
    VanishingState,
)
from qcat.heisenberg import (
    FourierMode,
    Propagator,
    QuantumState,
    build_propagator,
    translation,
)
from qcat.states import (
    ProjectorSpec,
    coordinate_profile,
    eigen_residual,
    normalize,
    projector_spec,
    projector_state,
)

__all__ = [
    "Branch",
    "CatMap",
    "Parity",
    "PeriodCache",
    "n_prime",
    "order_mod",
    "period_record",
    "period_table",
    "quantum_period",
    "validate_catmap",
    "EvenCaseReport",
    "half_period_check",
    "quarter_turn_check",
    "support_report",
    "vanishing_scan",
    "ArithmeticFailure",
    "BranchMismatch",
    "ConditionViolation",
    "ConfigError",
    "Degenerate",
    "InvariantFailure",
    "NoOrderFound",
    "NotScalar",
    "OracleMismatch",
    "QCatError",
    "StructureViolation",
    "TooLarge",
    "UnitarityFailure",
    "VanishingState",
    "FourierMode",
    "Propagator",
    "QuantumState",
    "build_propagator",
    "translation",
    "ProjectorSpec",
    "coordinate_profile",
    "eigen_residual",
    "normalize",
    "projector_spec",
    "projector_state",
]
