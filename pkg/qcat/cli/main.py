from __future__ import annotations

import functools
import pathlib
import sys
from dataclasses import dataclass
from typing import Any, Callable, TypeVar

import click

from qcat.arith import (
    Branch,
    Parity,
    PeriodCache,
    n_prime,
    period_record,
)
from qcat.cli.config import (
    DEFAULT_MATRIX,
    RunConfig,
    load_config_file,
    parse_int_list,
    parse_matrix,
)
from qcat.cli.output import complex_columns, open_binary, open_text, write_csv, write_json
from qcat.cli.verify import SUITES, VerifyContext, run_suites, summarize
from qcat.components import MonotonicClock, sweep_executor
from qcat.diagnostics import equidist_report, smoothed_wigner
from qcat.evenperiod import vanishing_scan
from qcat.exceptions import (
    ArithmeticFailure,
    ConditionViolation,
    ConfigError,
    InvariantFailure,
    QCatError,
    VanishingState,
)
from qcat.heisenberg import (
    DEFAULT_N_MAX,
    MatrixFormat,
    Propagator,
    QuantumState,
    build_propagator,
    export_matrix,
)
from qcat.states import (
    ProjectorSpec,
    coordinate_profile,
    normalize,
    projector_spec,
    projector_state,
)
from qcat.types import Logger
from qcat.utils import MeasureElapsed, configure_logging, get_logger

F = TypeVar("F", bound=Callable[..., Any])

EXIT_OK = 0
EXIT_VANISHING = 2
EXIT_INVARIANT = 3
EXIT_CONFIG = 4


class QCatGroup(click.Group):
    """Maps library failures and usage errors onto the documented exit codes."""

    def main(self, *args: Any, **kwargs: Any) -> Any:
        standalone = kwargs.pop("standalone_mode", True)
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.UsageError as exc:
            exc.show()
            code = EXIT_CONFIG
        except click.ClickException as exc:
            exc.show()
            code = exc.exit_code
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = 1
        except VanishingState as exc:
            click.echo(f"Vanishing state: {exc}", err=True)
            code = EXIT_VANISHING
        except InvariantFailure as exc:
            click.echo(f"Invariant failure: {exc}", err=True)
            code = EXIT_INVARIANT
        except (ConfigError, ConditionViolation) as exc:
            click.echo(f"Configuration error: {exc}", err=True)
            code = EXIT_CONFIG
        except QCatError as exc:
            click.echo(f"Error: {exc}", err=True)
            code = 1
        else:
            code = rv if isinstance(rv, int) else EXIT_OK
        if not standalone:
            return code
        sys.exit(code)


@dataclass
class AppState:
    workers: int
    with_metadata: bool
    logger: Logger


def _load_config(ctx: click.Context, _: click.Parameter, value: str | None) -> None:
    if value is None:
        return
    ctx.default_map = {**(ctx.default_map or {}), **load_config_file(value)}


@click.group(cls=QCatGroup)
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config,
    is_eager=True,
    expose_value=False,
    help="TOML file with option defaults; flags win over it.",
)
@click.option("--log-level", default="WARNING", show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--with-metadata", is_flag=True, help="Add timing to output headers.")
@click.pass_context
def cli(ctx: click.Context, log_level: str, workers: int, with_metadata: bool) -> None:
    """Quantum cat maps: short-period eigenstates and their verification."""
    configure_logging(log_level)
    ctx.obj = AppState(
        workers=workers,
        with_metadata=with_metadata,
        logger=get_logger().bind(component="cli"),
    )


def _path_option(*names: str, **kwargs: Any) -> Callable[[F], F]:
    return click.option(*names, type=click.Path(path_type=pathlib.Path), **kwargs)


def matrix_option(fn: F) -> F:
    return click.option(
        "--matrix", default=DEFAULT_MATRIX, show_default=True, help="Entries a,b,c,d."
    )(fn)


def family_options(fn: F) -> F:
    for option in reversed(
        [
            click.option("--k", "k", type=click.IntRange(min=0), default=5, show_default=True),
            click.option(
                "--parity",
                type=click.Choice([p.value for p in Parity]),
                default=Parity.ODD.value,
                show_default=True,
            ),
            click.option("--j", "j", type=click.IntRange(min=0), default=0, show_default=True),
            click.option("--sigma", type=int, default=0, show_default=True),
            click.option("--n-max", type=click.IntRange(min=1), default=DEFAULT_N_MAX),
        ]
    ):
        fn = option(fn)
    return fn


def _timed(fn: F) -> F:
    """Runs the command under a stopwatch; `state.metadata` gets the elapsed time."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        state = click.get_current_context().find_object(AppState)
        assert state is not None
        with MeasureElapsed(MonotonicClock(), fn.__name__, logger=state.logger) as measure:
            kwargs["measure"] = measure
            return fn(*args, **kwargs)

    return wrapper  # type: ignore[return-value]


def _run_config(
    command: str, matrix: str, params: dict[str, Any], measure: MeasureElapsed
) -> RunConfig:
    state = click.get_current_context().find_object(AppState)
    assert state is not None
    metadata = {}
    if state.with_metadata:
        metadata["elapsed_sec"] = round(measure.get_elapsed_sec(), 6)
        metadata["workers"] = state.workers
    return RunConfig(command, parse_matrix(matrix), params, metadata)


def _family(
    matrix: str, k: int, parity: str, j: int, sigma: int, n_max: int
) -> tuple[Propagator, ProjectorSpec]:
    catmap = parse_matrix(matrix)
    family = Parity(parity)
    if family is Parity.EVEN and k < 1:
        raise ConfigError("The even family starts at k = 1")
    N = n_prime(catmap, family.q(k))
    if j >= N:
        raise ConfigError(f"j must lie in [0, {N}), got {j}")
    propagator = build_propagator(catmap, N, n_max=n_max)
    return propagator, projector_spec(propagator, k, family, j=j, sigma=sigma)


def _state_header(spec: ProjectorSpec) -> dict[str, Any]:
    return {
        "N": spec.N,
        "t": spec.t,
        "branch": spec.branch.value,
        "phi": repr(spec.phi),
        "omega": repr(spec.omega),
    }


@cli.command()
@matrix_option
@click.option("--q-max", type=click.IntRange(min=1), default=13, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@_path_option("--out", default=None)
@_path_option("--cache-path", envvar="QCAT_CACHE", default=None)
@click.option("--verify", is_flag=True, help="Cross-check against the integer oracles.")
@_timed
def periods(
    matrix: str,
    q_max: int,
    fmt: str,
    out: pathlib.Path | None,
    cache_path: pathlib.Path | None,
    verify: bool,
    measure: MeasureElapsed,
) -> None:
    """Lucas values, maximal moduli N'_q, orders and quantum periods."""
    catmap = parse_matrix(matrix)
    cache = PeriodCache(cache_path) if cache_path is not None else None

    records = []
    failed = []
    for q in range(1, q_max + 1):
        record = cache.record(catmap, q) if cache else period_record(catmap, q)
        records.append(record)
        if not verify:
            continue
        try:
            n_prime(catmap, q, verify=True)
        except ArithmeticFailure as exc:
            failed.append(f"q={q}: {exc}")
        if record.T != q:
            failed.append(f"q={q}: order {record.T}")
        if q % 2 == 1 and (record.n != q or record.branch is not Branch.ODD):
            failed.append(f"q={q}: period {record.n}")
        if q % 2 == 0 and record.n not in (q, 2 * q):
            failed.append(f"q={q}: period {record.n}")

    config = _run_config("periods", matrix, {"q_max": q_max, "verify": verify}, measure)
    columns = ["q", "k", "p_k", "n_prime", "T", "n", "branch"]
    rows = [
        [r.q, r.q // 2, r.p_values[r.q // 2], r.n_prime, r.T, r.n, r.branch.value]
        for r in records
    ]
    with open_text(out) as fp:
        if fmt == "csv":
            write_csv(fp, config.header(), columns, rows)
        else:
            payload = {"rows": [dict(zip(columns, map(str, row))) for row in rows]}
            write_json(fp, config.header(), payload)
    if failed:
        raise InvariantFailure(failed)


@cli.command()
@matrix_option
@click.option("--n", "N", type=click.IntRange(min=1), required=True)
@click.option("--n-max", type=click.IntRange(min=1), default=DEFAULT_N_MAX)
@click.option(
    "--format", "fmt", type=click.Choice([f.value for f in MatrixFormat]), default="binary"
)
@_path_option("--out", required=True)
@_timed
def propagator(
    matrix: str, N: int, n_max: int, fmt: str, out: pathlib.Path, measure: MeasureElapsed
) -> None:
    """Dense propagator export."""
    built = build_propagator(parse_matrix(matrix), N, n_max=n_max)
    params = {"N": N, "n_max": n_max, "format": fmt}
    config = _run_config("propagator", matrix, params, measure)
    with open_binary(out) as fp:
        export_matrix(built, fp, MatrixFormat(fmt), extra=config.header())


def _write_profile(fp: Any, config: RunConfig, spec: ProjectorSpec, u: QuantumState) -> None:
    report = coordinate_profile(u, spec)
    header = config.header(**_state_header(spec))
    header.update(
        peak_index=report.peak_index,
        predicted_peak=repr(report.predicted_peak),
        off_peak_max=repr(report.off_peak_max),
    )
    rows = ([i, *complex_columns(complex(x))] for i, x in enumerate(u.coords))
    write_csv(fp, header, ["index", "re", "im", "modulus"], rows)


def _write_equidist(
    fp: Any, config: RunConfig, spec: ProjectorSpec, u: QuantumState, cutoff: int
) -> None:
    report = equidist_report(u, spec, cutoff)
    header = config.header(**_state_header(spec))
    header["worst_deviation"] = repr(report.worst_deviation)
    rows = (
        [e.mode.m1, e.mode.m2, *complex_columns(e.value), e.bound] for e in report.modes
    )
    write_csv(fp, header, ["m1", "m2", "re", "im", "modulus", "bound"], rows)


def _normalized_state(propagator: Propagator, spec: ProjectorSpec) -> QuantumState:
    v, norm = projector_state(propagator, spec)
    get_logger().bind(component="cli").info("Projector state built", N=spec.N, norm=norm)
    return normalize(v)


def _family_params(**params: Any) -> dict[str, Any]:
    return {key: value for key, value in params.items() if key != "n_max"}


@cli.command()
@matrix_option
@family_options
@click.option("--cutoff", type=click.IntRange(min=0), default=5, show_default=True)
@click.option("--wigner", is_flag=True, help="Also write the smoothed Wigner grid.")
@click.option("--grid", type=click.IntRange(min=1), default=256, show_default=True)
@_path_option("--out", default=pathlib.Path("."), show_default=True)
@_timed
def eigenstate(
    matrix: str,
    k: int,
    parity: str,
    j: int,
    sigma: int,
    n_max: int,
    cutoff: int,
    wigner: bool,
    grid: int,
    out: pathlib.Path,
    measure: MeasureElapsed,
) -> None:
    """Projector eigenstate with its profile, equidistribution table and Wigner grid."""
    propagator, spec = _family(matrix, k, parity, j, sigma, n_max)
    u = _normalized_state(propagator, spec)
    params = _family_params(k=k, parity=parity, j=j, sigma=sigma, cutoff=cutoff)
    config = _run_config("eigenstate", matrix, params, measure)

    with open_text(out / "profile.csv") as fp:
        _write_profile(fp, config, spec, u)
    with open_text(out / "equidist.csv") as fp:
        _write_equidist(fp, config, spec, u, cutoff)
    if wigner:
        try:
            grid_values = smoothed_wigner(u, grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        comments = [f"{key}={value}" for key, value in config.header(N=spec.N).items()]
        with open_binary(out / "wigner.pgm") as bfp:
            grid_values.to_pgm(bfp, comments=comments)


@cli.command()
@matrix_option
@family_options
@_path_option("--out", default=None)
@_timed
def profile(
    matrix: str,
    k: int,
    parity: str,
    j: int,
    sigma: int,
    n_max: int,
    out: pathlib.Path | None,
    measure: MeasureElapsed,
) -> None:
    """Coordinate profile of a normalized projector state."""
    propagator, spec = _family(matrix, k, parity, j, sigma, n_max)
    u = _normalized_state(propagator, spec)
    params = _family_params(k=k, parity=parity, j=j, sigma=sigma)
    config = _run_config("profile", matrix, params, measure)
    with open_text(out) as fp:
        _write_profile(fp, config, spec, u)


@cli.command()
@matrix_option
@family_options
@click.option("--cutoff", type=click.IntRange(min=0), default=5, show_default=True)
@_path_option("--out", default=None)
@_timed
def equidist(
    matrix: str,
    k: int,
    parity: str,
    j: int,
    sigma: int,
    n_max: int,
    cutoff: int,
    out: pathlib.Path | None,
    measure: MeasureElapsed,
) -> None:
    """Matrix elements of quantum translations in a projector state."""
    propagator, spec = _family(matrix, k, parity, j, sigma, n_max)
    u = _normalized_state(propagator, spec)
    params = _family_params(k=k, parity=parity, j=j, sigma=sigma, cutoff=cutoff)
    config = _run_config("equidist", matrix, params, measure)
    with open_text(out) as fp:
        _write_equidist(fp, config, spec, u, cutoff)


@cli.command()
@matrix_option
@family_options
@click.option("--grid", type=click.IntRange(min=1), default=256, show_default=True)
@click.option("--smoothing", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--cutoff", type=click.IntRange(min=0), default=None)
@click.option("--format", "fmt", type=click.Choice(["pgm", "csv"]), default="pgm")
@click.option("--basis", is_flag=True, help="Render the basis state e_j instead.")
@_path_option("--out", default=None)
@_timed
def wigner(
    matrix: str,
    k: int,
    parity: str,
    j: int,
    sigma: int,
    n_max: int,
    grid: int,
    smoothing: float | None,
    cutoff: int | None,
    fmt: str,
    basis: bool,
    out: pathlib.Path | None,
    measure: MeasureElapsed,
) -> None:
    """Gaussian-smoothed Wigner grid of a projector state (or of e_j)."""
    propagator, spec = _family(matrix, k, parity, j, sigma, n_max)
    u = QuantumState.basis(spec.N, j) if basis else _normalized_state(propagator, spec)
    try:
        result = smoothed_wigner(u, grid, smoothing, cutoff)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    params = _family_params(k=k, parity=parity, j=j, sigma=sigma, basis=basis, grid=grid)
    config = _run_config("wigner", matrix, params, measure)
    header = config.header(
        N=spec.N, smoothing=repr(result.smoothing), cutoff=result.cutoff, mean=repr(result.mean())
    )
    if fmt == "pgm":
        with open_binary(out) as bfp:
            result.to_pgm(bfp, comments=[f"{key}={value}" for key, value in header.items()])
        return

    rows = (
        [a, b, float(result.values[a, b])]
        for a in range(result.resolution)
        for b in range(result.resolution)
    )
    with open_text(out) as fp:
        write_csv(fp, header, ["a", "b", "value"], rows)


@cli.command("even-scan")
@matrix_option
@click.option("--k", "k", type=click.IntRange(min=1), default=6, show_default=True)
@click.option("--sigmas", default="0,1,2,3", show_default=True)
@click.option("--threshold", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--n-max", type=click.IntRange(min=1), default=DEFAULT_N_MAX)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@_path_option("--out", default=None)
@_timed
def even_scan(
    matrix: str,
    k: int,
    sigmas: str,
    threshold: float | None,
    n_max: int,
    fmt: str,
    out: pathlib.Path | None,
    measure: MeasureElapsed,
) -> None:
    """Vanishing projector states and support sizes in the even 4k branch."""
    catmap = parse_matrix(matrix)
    state = click.get_current_context().find_object(AppState)
    assert state is not None

    built = build_propagator(catmap, n_prime(catmap, 2 * k), n_max=n_max)
    with sweep_executor(state.workers) as executor:
        report = vanishing_scan(
            built, k, sigmas=parse_int_list(sigmas), threshold=threshold, executor=executor
        )

    params = {"k": k, "sigmas": sigmas, "threshold": threshold}
    config = _run_config("even-scan", matrix, params, measure)
    with open_text(out) as fp:
        if fmt == "json":
            write_json(fp, config.header(N=report.N), report.to_json())
        else:
            columns = ["k", "N", "branch", "support_size", "vanishing", "gcd_identity"]
            row = [
                report.k,
                report.N,
                report.branch.value,
                len(report.support_set),
                len(report.vanishing_js),
                report.gcd_identity_holds,
            ]
            write_csv(fp, config.header(N=report.N), columns, [row])
    if report.failures():
        raise InvariantFailure(report.failures())


@cli.command()
@matrix_option
@click.option(
    "--suite",
    "suites",
    type=click.Choice(list(SUITES)),
    multiple=True,
    help="Suites to run, all by default.",
)
@click.option("--n-max", type=click.IntRange(min=1), default=DEFAULT_N_MAX)
@_path_option("--out", default=None)
@_timed
def verify(
    matrix: str,
    suites: tuple[str, ...],
    n_max: int,
    out: pathlib.Path | None,
    measure: MeasureElapsed,
) -> None:
    """Invariant suites with a JSON pass/fail summary."""
    catmap = parse_matrix(matrix)
    state = click.get_current_context().find_object(AppState)
    assert state is not None

    selected = list(suites) or list(SUITES)
    ctx = VerifyContext(catmap, n_max=n_max)
    with sweep_executor(state.workers) as executor:
        results = run_suites(ctx, selected, executor=executor)

    summary = summarize(results)
    config = _run_config("verify", matrix, {"suites": ",".join(selected)}, measure)
    with open_text(out) as fp:
        write_json(fp, config.header(), summary)
    if not summary["passed"]:
        raise InvariantFailure(summary["failed"])

