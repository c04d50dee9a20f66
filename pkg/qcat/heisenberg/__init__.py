from qcat.heisenberg.checks import (
    GaussBound,
    ScalarTest,
    dispersive_bound,
    egorov_defect,
    egorov_sweep,
    gauss_bound_report,
    gauss_bound_scan,
    numerical_period,
    sample_indices,
    scalar_test,
)
from qcat.heisenberg.export import MatrixFormat, export_matrix, read_binary_matrix
from qcat.heisenberg.propagator import DEFAULT_N_MAX, Propagator, build_propagator
from qcat.heisenberg.state import FourierMode, QuantumState
from qcat.heisenberg.translations import (
    Translation,
    TrigPolynomial,
    expectation,
    quantize_trig,
    translation,
    translation_cocycle,
)

__all__ = (
    "DEFAULT_N_MAX",
    "FourierMode",
    "GaussBound",
    "MatrixFormat",
    "Propagator",
    "QuantumState",
    "ScalarTest",
    "Translation",
    "TrigPolynomial",
    "build_propagator",
    "dispersive_bound",
    "egorov_defect",
    "egorov_sweep",
    "expectation",
    "export_matrix",
    "gauss_bound_report",
    "gauss_bound_scan",
    "numerical_period",
    "quantize_trig",
    "read_binary_matrix",
    "sample_indices",
    "scalar_test",
    "translation",
    "translation_cocycle",
)
