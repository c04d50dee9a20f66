from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from qcat.arith import (
    Parity,
    gcd_bound_check,
    gcd_identity,
    lucas_form,
    matrix_power,
    n_prime,
    n_prime_oracle,
    oddity_check,
    orbit_second_components,
    order_mod,
    quantum_period,
    resonance_set,
)
from qcat.arith.catmap import CatMap
from qcat.components.executor import InlineExecutor
from qcat.diagnostics import diagonal_split, matrix_element, mode_bound, scar_contrast
from qcat.evenperiod import half_period_scan, quarter_turn_check, vanishing_scan
from qcat.heisenberg import (
    DEFAULT_N_MAX,
    FourierMode,
    Propagator,
    QuantumState,
    build_propagator,
    egorov_sweep,
    gauss_bound_scan,
    numerical_period,
    sample_indices,
)
from qcat.interfaces import SweepExecutor
from qcat.states import (
    coordinate_profile,
    eigen_residual,
    law_point,
    normalize,
    projector_block,
    projector_spec,
    projector_state,
    vanish_tolerance,
)
from qcat.types import Logger
from qcat.utils import get_logger

_Check = Callable[[], tuple[bool, dict[str, Any]]]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"check": self.name, "passed": self.passed, "detail": self.detail}


class VerifyContext:
    """Shared, lazily built propagators for the suites."""

    def __init__(
        self,
        catmap: CatMap,
        *,
        n_max: int = DEFAULT_N_MAX,
        logger: Logger | None = None,
    ) -> None:
        self.catmap = catmap
        self.n_max = n_max
        self._propagators: dict[int, Propagator] = {}
        self._lock = threading.Lock()
        self._logger = (logger or get_logger()).bind(component="cli")

    def propagator(self, N: int) -> Propagator:
        with self._lock:
            if N not in self._propagators:
                self._logger.debug("Building propagator for verification", N=N)
                self._propagators[N] = build_propagator(self.catmap, N, n_max=self.n_max)
            return self._propagators[N]

    def family(self, k: int, parity: Parity = Parity.ODD) -> Propagator:
        return self.propagator(n_prime(self.catmap, parity.q(k)))


def _arith(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    A = ctx.catmap

    def oracle() -> tuple[bool, dict[str, Any]]:
        bad = [q for q in range(1, 61) if n_prime(A, q, verify=False) != n_prime_oracle(A, q)]
        return not bad, {"mismatched_q": bad}

    def lucas() -> tuple[bool, dict[str, Any]]:
        bad = [r for r in range(1, 61) if matrix_power(A, r) != lucas_form(A, r)]
        return not bad, {"mismatched_r": bad}

    def orders() -> tuple[bool, dict[str, Any]]:
        bad = [q for q in range(1, 61) if order_mod(A, n_prime(A, q)) != q]
        return not bad, {"mismatched_q": bad}

    def periods() -> tuple[bool, dict[str, Any]]:
        odd = [k for k in range(16) if quantum_period(A, n_prime(A, 2 * k + 1)).n != 2 * k + 1]
        even = [
            k
            for k in range(1, 16)
            if quantum_period(A, n_prime(A, 2 * k)).n not in (2 * k, 4 * k)
        ]
        return not odd and not even, {"odd_failures": odd, "even_failures": even}

    def gcd_bound() -> tuple[bool, dict[str, Any]]:
        bad = []
        for T in range(2, 61):
            for r in range(1, T):
                report = gcd_bound_check(A, T, r)
                if not (report.holds and report.divides):
                    bad.append([T, r])
        return not bad, {"failures": bad}

    def identity() -> tuple[bool, dict[str, Any]]:
        bad = [k for k in range(1, 31) if not gcd_identity(A, k).holds]
        return not bad, {"failures": bad}

    def oddity() -> tuple[bool, dict[str, Any]]:
        reports = [oddity_check(A, k) for k in range(1, 31)]
        bad = [r.k for r in reports if not r.holds]
        return not bad, {"failures": bad, "four_k": [r.k for r in reports if r.applies]}

    def recurrence() -> tuple[bool, dict[str, Any]]:
        for m in [(1, 0), (0, 1), (3, -2), (7, 5)]:
            orbit_second_components(A, m, 40)
            orbit_second_components(A, m, 40, modulus=n_prime(A, 11))
        return True, {}

    return [
        ("n_prime equals entry-gcd, q <= 60", oracle),
        ("A^r = p_r A - p_{r-1} I, r <= 60", lucas),
        ("order of A mod N'_q is q, q <= 60", orders),
        ("quantum periods of N'_q, k <= 15", periods),
        ("gcd bound, 1 <= r < T <= 60", gcd_bound),
        ("gcd(a_k - 1, p_k) = N'_k, k <= 30", identity),
        ("oddity in the 4k branch, k <= 30", oddity),
        ("orbit recurrence", recurrence),
    ]


def _unitarity(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def check(N: int) -> _Check:
        def run() -> tuple[bool, dict[str, Any]]:
            defect = ctx.propagator(N).unitarity_defect()
            return defect <= 1e-8, {"N": N, "defect": defect}

        return run

    return [(f"unitary at N={N}", check(N)) for N in (1, 5, 19, 71, 265, 989)]


def _egorov(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def check(N: int) -> _Check:
        def run() -> tuple[bool, dict[str, Any]]:
            defect = egorov_sweep(ctx.propagator(N), radius=5)
            return defect <= 1e-8, {"N": N, "defect": defect}

        return run

    return [(f"exact Egorov at N={N}", check(N)) for N in (5, 19, 71, 265, 989)]


def _gauss(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def run() -> tuple[bool, dict[str, Any]]:
        reports = gauss_bound_scan(ctx.propagator(265), range(1, 9), [(0, 0), (1, 0)])
        worst = max(r.value - r.bound for r in reports)
        return all(r.holds for r in reports), {"N": 265, "worst_excess": worst}

    return [("dispersive bound at N=265", run)]


def _period(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def check(N: int) -> _Check:
        def run() -> tuple[bool, dict[str, Any]]:
            expected = quantum_period(ctx.catmap, N).n
            found = numerical_period(ctx.propagator(N), max_t=expected)
            return found == expected, {"N": N, "arithmetic": expected, "numerical": found}

        return run

    return [(f"numerical period at N={N}", check(N)) for N in (5, 19, 71, 265, 989, 1560)]


def _eigen(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    members = [(k, Parity.ODD) for k in range(1, 6)] + [(6, Parity.EVEN)]

    def check(k: int, parity: Parity) -> _Check:
        def run() -> tuple[bool, dict[str, Any]]:
            propagator = ctx.family(k, parity)
            residuals: dict[int, float | None] = {}
            for sigma in (0, 1):
                spec = projector_spec(propagator, k, parity, sigma=sigma)
                v, norm = projector_state(propagator, spec)
                if norm <= vanish_tolerance(propagator.N):
                    residuals[sigma] = None
                    continue
                residuals[sigma] = eigen_residual(propagator, normalize(v), spec.omega)
            ok = all(r is None or r <= 1e-7 for r in residuals.values())
            return ok, {"N": propagator.N, "residuals": residuals}

        return run

    return [(f"eigen-property k={k} {p.value}", check(k, p)) for k, p in members]


def _profile(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def instance() -> tuple[bool, dict[str, Any]]:
        propagator = ctx.family(5)
        spec = projector_spec(propagator, 5, Parity.ODD, j=57)
        v, _ = projector_state(propagator, spec)
        report = coordinate_profile(normalize(v), spec)
        return report.passed(0.1), {
            "peak_index": report.peak_index,
            "peak": abs(report.peak_value),
            "predicted": report.predicted_peak,
            "off_peak_max": report.off_peak_max,
        }

    def trend() -> tuple[bool, dict[str, Any]]:
        low = law_point(ctx.catmap, 3, n_max=ctx.n_max)
        high = law_point(ctx.catmap, 6, n_max=ctx.n_max)
        return high.peak_deviation < low.peak_deviation, {
            "k3": low.peak_deviation,
            "k6": high.peak_deviation,
        }

    return [("peak at N=989, j=57", instance), ("peak deviation shrinks k=3 -> 6", trend)]


def _worst_elements(
    ctx: VerifyContext, k: int, modes: Sequence[tuple[int, int]]
) -> tuple[int, dict[tuple[int, int], float]]:
    propagator = ctx.family(k)
    spec = projector_spec(propagator, k, Parity.ODD)
    js = sample_indices(propagator.N, 8)
    block = projector_block(propagator, spec, js, [0])[0]
    worst = {m: 0.0 for m in modes}
    for col in range(block.shape[1]):
        u = normalize(QuantumState(propagator.N, block[:, col]))
        for m in modes:
            worst[m] = max(worst[m], abs(matrix_element(u, m)))
    return spec.t, worst


def _equidist(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    modes = [(1, 0), (0, 1), (1, 1)]

    def bounded_and_decaying() -> tuple[bool, dict[str, Any]]:
        table = {k: _worst_elements(ctx, k, modes) for k in (3, 4, 5)}
        ok = True
        for t, worst in table.values():
            ok &= all(worst[m] <= 3 * mode_bound(FourierMode(*m), t) for m in modes)
        ok &= all(table[5][1][m] < table[3][1][m] for m in modes)
        detail = {f"k={k}": {str(m): v for m, v in w.items()} for k, (_, w) in table.items()}
        return ok, detail

    def split() -> tuple[bool, dict[str, Any]]:
        propagator = ctx.family(5)
        spec = projector_spec(propagator, 5, Parity.ODD)
        worst_mismatch = 0.0
        support_ok = True
        for m in modes + [(0, 0), (2, -1)]:
            result = diagonal_split(propagator, spec, m)
            worst_mismatch = max(worst_mismatch, result.mismatch)
            if m != (0, 0):
                expected = resonance_set(ctx.catmap, m, 0, spec.t, modulus=propagator.N)
                support_ok &= result.support == expected
        return worst_mismatch <= 1e-9 and support_ok, {
            "mismatch": worst_mismatch,
            "support_matches_resonances": support_ok,
        }

    return [("mode-wise bound and decay", bounded_and_decaying), ("diagonal split", split)]


def _wigner(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def run() -> tuple[bool, dict[str, Any]]:
        propagator = ctx.family(5)
        spec = projector_spec(propagator, 5, Parity.ODD)
        v, _ = projector_state(propagator, spec)
        contrast = scar_contrast(normalize(v))
        mean_defect = abs(contrast.state.mean() - 1)
        return contrast.flatter and mean_defect <= 1e-8, {
            "state": contrast.state.relative_sup_deviation(),
            "basis": contrast.basis.relative_sup_deviation(),
            "mean_defect": mean_defect,
        }

    return [("projector state flatter than basis state", run)]


def _even(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def half(k: int) -> _Check:
        def run() -> tuple[bool, dict[str, Any]]:
            propagator = ctx.family(k, Parity.EVEN)
            reports = half_period_scan(propagator, k, sample_indices(propagator.N, 64))
            worst = max(r.leakage for r in reports)
            return True, {"N": propagator.N, "leakage": worst, "sampled": len(reports)}

        return run

    def quarter() -> tuple[bool, dict[str, Any]]:
        propagator = ctx.family(6, Parity.EVEN)
        etas = quarter_turn_check(propagator, 6, sample=sample_indices(propagator.N, 16))
        return True, {"N": propagator.N, "sampled": len(etas)}

    checks: list[tuple[str, _Check]] = [(f"half-period k={k}", half(k)) for k in (4, 5, 6)]
    checks.append(("half-turn k=6", quarter))
    return checks


def _vanishing(ctx: VerifyContext) -> list[tuple[str, _Check]]:
    def run() -> tuple[bool, dict[str, Any]]:
        report = vanishing_scan(ctx.family(6, Parity.EVEN), 6)
        return not report.failures(), report.to_json()

    return [("vanishing dichotomy and rarity k=6", run)]


SUITES: dict[str, Callable[[VerifyContext], list[tuple[str, _Check]]]] = {
    "arith": _arith,
    "unitarity": _unitarity,
    "egorov": _egorov,
    "gauss": _gauss,
    "period": _period,
    "eigen": _eigen,
    "profile": _profile,
    "equidist": _equidist,
    "wigner": _wigner,
    "even": _even,
    "vanishing": _vanishing,
}


def _run_check(suite: str, name: str, check: _Check, logger: Logger) -> CheckResult:
    try:
        passed, detail = check()
    except Exception as exc:
        logger.opt(exception=exc).warning("Check raised", suite=suite, check=name)
        return CheckResult(suite, name, False, {"error": f"{type(exc).__name__}: {exc}"})
    logger.info("Check finished", suite=suite, check=name, passed=passed)
    return CheckResult(suite, name, bool(passed), _jsonable(detail))


def _jsonable(value: Any) -> Any:
    match value:
        case dict():
            return {str(k): _jsonable(v) for k, v in value.items()}
        case list() | tuple():
            return [_jsonable(v) for v in value]
        case np.generic():
            return value.item()
        case _:
            return value


def run_suites(
    ctx: VerifyContext,
    suites: Sequence[str],
    *,
    executor: SweepExecutor | None = None,
    logger: Logger | None = None,
) -> list[CheckResult]:
    logger = (logger or get_logger()).bind(component="cli")
    executor = executor or InlineExecutor()
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ValueError(f"Unknown suites: {', '.join(unknown)}")

    work = [(suite, name, check) for suite in suites for name, check in SUITES[suite](ctx)]
    return list(executor.map_ordered(lambda item: _run_check(*item, logger), work))


def summarize(results: Sequence[CheckResult]) -> dict[str, Any]:
    suites: dict[str, list[dict[str, Any]]] = {}
    for result in results:
        suites.setdefault(result.suite, []).append(result.to_json())
    failed = [f"{r.suite}: {r.name}" for r in results if not r.passed]
    return {"passed": not failed, "failed": failed, "suites": suites}
