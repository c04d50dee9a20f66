from qcat.arith.cache import PeriodCache
from qcat.arith.catmap import (
    CONDITIONS,
    IDENTITY,
    CatMap,
    failed_conditions,
    lucas_form,
    lucas_values,
    mat_mul,
    matrix_power,
    p_seq,
    trace_power,
    validate_catmap,
)
from qcat.arith.identities import (
    GcdBound,
    GcdIdentity,
    OddityReport,
    ResonanceScan,
    even_branch,
    gcd_bound_check,
    gcd_identity,
    oddity_check,
    orbit_second_components,
    resonance_count,
    resonance_scan,
    resonance_set,
)
from qcat.arith.periods import (
    Branch,
    Parity,
    PeriodRecord,
    QuantumPeriod,
    n_prime,
    n_prime_oracle,
    order_mod,
    period_record,
    period_table,
    quantum_period,
)

__all__ = (
    "CONDITIONS",
    "IDENTITY",
    "Branch",
    "CatMap",
    "GcdBound",
    "GcdIdentity",
    "OddityReport",
    "Parity",
    "PeriodCache",
    "PeriodRecord",
    "QuantumPeriod",
    "ResonanceScan",
    "even_branch",
    "failed_conditions",
    "gcd_bound_check",
    "gcd_identity",
    "lucas_form",
    "lucas_values",
    "mat_mul",
    "matrix_power",
    "n_prime",
    "n_prime_oracle",
    "oddity_check",
    "order_mod",
    "orbit_second_components",
    "p_seq",
    "period_record",
    "period_table",
    "quantum_period",
    "resonance_count",
    "resonance_scan",
    "resonance_set",
    "trace_power",
    "validate_catmap",
)
