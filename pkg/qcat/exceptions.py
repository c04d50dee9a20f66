from __future__ import annotations

from typing import Any


class QCatError(Exception):
    pass


class ArithmeticFailure(QCatError):
    pass


class ConditionViolation(ArithmeticFailure):
    def __init__(
        self,
        condition: str,
        matrix: tuple[int, int, int, int] | None = None,
        failed: tuple[str, ...] = (),
    ) -> None:
        msg = f"Cat map condition violated: {condition}"
        if len(failed) > 1:
            msg += f" (all failed: {', '.join(failed)})"
        if matrix is not None:
            msg += f" for matrix {matrix}"
        super().__init__(msg)
        self.condition = condition
        self.matrix = matrix
        self.failed = failed or (condition,)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, type(self)) and self.condition == other.condition


class NoOrderFound(ArithmeticFailure):
    def __init__(self, modulus: int, ceiling: int) -> None:
        super().__init__(
            f"No t <= {ceiling} with A^t = I (mod {modulus}); "
            "either the ceiling is too small or the modulus is degenerate"
        )
        self.modulus = modulus
        self.ceiling = ceiling


class OracleMismatch(ArithmeticFailure):
    """
    Closed-form value of `N'_q` disagrees with the entry-gcd of `A^q - I`,
    the entry-gcd being authoritative.
    """

    def __init__(self, q: int, closed_form: int, oracle: int) -> None:
        super().__init__(f"N'_{q}: closed form gives {closed_form}, entry-gcd gives {oracle}")
        self.q = q
        self.closed_form = closed_form
        self.oracle = oracle


class QuantizationError(QCatError):
    pass


class TooLarge(QuantizationError):
    def __init__(self, n: int, n_max: int) -> None:
        super().__init__(f"Refusing to build dense {n}x{n} propagator, limit is N <= {n_max}")
        self.n = n
        self.n_max = n_max


class UnitarityFailure(QuantizationError):
    def __init__(self, defect: float, tolerance: float) -> None:
        super().__init__(
            f"Propagator is not unitary: max|M*M - I| = {defect:.3e} > {tolerance:.1e}, "
            "phase reduction is broken"
        )
        self.defect = defect
        self.tolerance = tolerance


class StateError(QCatError):
    pass


class NotScalar(StateError):
    def __init__(self, t: int, leakage: float, spread: float) -> None:
        super().__init__(
            f"M^{t} does not act as a scalar on the sample "
            f"(leakage {leakage:.3e}, phase spread {spread:.3e})"
        )
        self.t = t
        self.leakage = leakage
        self.spread = spread


class VanishingState(StateError):
    def __init__(self, norm: float, tolerance: float) -> None:
        super().__init__(f"Projector state vanishes: norm {norm:.3e} <= {tolerance:.3e}")
        self.norm = norm
        self.tolerance = tolerance


class StructureError(QCatError):
    pass


class StructureViolation(StructureError):
    def __init__(self, what: str, leakage: float) -> None:
        super().__init__(f"{what}: leakage {leakage:.3e} outside the predicted support")
        self.what = what
        self.leakage = leakage


class BranchMismatch(StructureError):
    def __init__(self, k: int, period: int, required: int) -> None:
        super().__init__(
            f"Quantum period at N'_{2 * k} is {period}, the check requires period {required}"
        )
        self.k = k
        self.period = period
        self.required = required


class FitError(QCatError):
    pass


class Degenerate(FitError):
    def __init__(self, smallest: float) -> None:
        super().__init__(f"Deviation {smallest:.3e} is at machine precision, nothing to fit")
        self.smallest = smallest


class ConfigError(QCatError):
    pass


class InvariantFailure(QCatError):
    def __init__(self, failed: list[str]) -> None:
        super().__init__(f"{len(failed)} invariant check(s) failed: {', '.join(failed)}")
        self.failed = failed
