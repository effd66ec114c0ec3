import math
import sys
from pathlib import Path
from typing import List, Optional

import typer

try:  # typer >= 0.26 vendors click; its exceptions are distinct from the standalone package
    from typer import _click as click
except ImportError:
    import click
from pydantic import ValidationError
from returns.result import Failure

from src.domain.calculations.transformations import dataframe_to_csv_text
from src.domain.errors import DomainError, QuadratureError
from src.domain.models import ManakovCheckConfig, QuadratureConfig, SphereSet, SweepSpec
from src.domain.services.invariance_checker import InvarianceChecker
from src.domain.services.plot_script_generator import PlotScriptGenerator
from src.domain.services.rate_sweep_processor import RateSweepProcessor
from src.infra.adapters.csv_writer_adapter import CsvWriterAdapter
from src.infra.adapters.param_file_adapter import ParamFileAdapter

app = typer.Typer(
    no_args_is_help=True,
    help="Achievable rates of multisphere inputs over AWGN, Monte Carlo oracles and Manakov invariance checks. "
    "SNR in dB is 10*log10(A) with A = E[|X|^2]/N0.",
)

EXIT_USAGE = 1
EXIT_NONCONVERGED = 2
EXIT_INVARIANCE_FAILED = 3


def _fail(message: str, code: int = EXIT_USAGE) -> None:
    typer.secho(f"Error: {message}", fg=typer.colors.RED, err=True)
    raise typer.Exit(code=code)


def _parse_ints(text: str, name: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        _fail(f"{name} must be a comma-separated list of integers, got '{text}'")


def _parse_floats(text: str, name: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        _fail(f"{name} must be a comma-separated list of numbers, got '{text}'")
    if not all(math.isfinite(v) for v in values):
        _fail(f"{name} must be finite")
    return values


def _parse_snr_range(text: str) -> List[float]:
    """'start:stop:step', 'start:stop' (step 1) 또는 단일 값"""
    try:
        parts = [float(p) for p in text.split(":")]
    except ValueError:
        _fail(f"--snr-db must look like start:stop:step, got '{text}'")
    if len(parts) == 1:
        parts = [parts[0], parts[0], 1.0]
    elif len(parts) == 2:
        parts.append(1.0)
    elif len(parts) != 3:
        _fail(f"--snr-db must look like start:stop:step, got '{text}'")
    return parts


def _custom_set(radii: Optional[str], probs: Optional[str]) -> Optional[SphereSet]:
    if radii is None and probs is None:
        return None
    if radii is None or probs is None:
        _fail("--radii and --probs must be given together")
    try:
        return SphereSet(radii=tuple(_parse_floats(radii, "--radii")), probs=tuple(_parse_floats(probs, "--probs")))
    except ValidationError as e:
        _fail(f"invalid sphere set: {e.errors()[0]['msg']}")


def _quadrature(rel_tol: float) -> QuadratureConfig:
    try:
        return QuadratureConfig(rel_tol=rel_tol)
    except ValidationError as e:
        _fail(f"invalid --rel-tol: {e.errors()[0]['msg']}")


@app.command()
def rates(
    dims: str = typer.Option("2,4", "--dims", help="Comma-separated real dimensions N"),
    rings: str = typer.Option("1,2,4,8", "--rings", help="Comma-separated sphere counts K"),
    snr_db: str = typer.Option("0:40:1", "--snr-db", help="SNR range start:stop:step in dB (10*log10 A)"),
    normalize_4d: bool = typer.Option(False, "--normalize-4d", help="Scale rate and SNR axes by 4/N"),
    oracle_samples: int = typer.Option(0, "--oracle-samples", help="Vector Monte Carlo samples per row (0 = skip)"),
    seed: int = typer.Option(42, "--seed", help="64-bit seed for the Monte Carlo oracle"),
    rel_tol: float = typer.Option(1e-8, "--rel-tol", help="Relative tolerance of the MI quadrature"),
    out: str = typer.Option("reports/rates.csv", "--out", "-o", help="Output CSV path"),
    radii: Optional[str] = typer.Option(None, "--radii", help="Custom sphere radii shape, scaled to each SNR"),
    probs: Optional[str] = typer.Option(None, "--probs", help="Custom sphere probabilities"),
    workers: int = typer.Option(1, "--workers", help="Grid points evaluated concurrently"),
    plot: bool = typer.Option(True, "--plot/--no-plot", help="Write a gnuplot script next to the CSV"),
):
    """
    Sweep multisphere MI over an (N, K, SNR) grid and write a CSV.
    """
    start, stop, step = _parse_snr_range(snr_db)
    custom = _custom_set(radii, probs)
    try:
        spec = SweepSpec(
            dims_list=tuple(_parse_ints(dims, "--dims")),
            rings_list=tuple(_parse_ints(rings, "--rings")),
            snr_db_start=start,
            snr_db_stop=stop,
            snr_db_step=step,
            normalize_4d=normalize_4d,
            oracle_samples=oracle_samples,
            seed=seed,
            custom_set=custom,
        )
    except ValidationError as e:
        _fail(f"invalid sweep: {e.errors()[0]['msg']}")

    processor = RateSweepProcessor(_quadrature(rel_tol), workers=workers)
    rows = processor.run(spec)

    writer = CsvWriterAdapter()
    written = writer.write_text(processor.to_csv(rows, normalize_4d), out)
    typer.echo(f"Wrote {len(rows)} rows to {written}")

    if plot:
        rings_list = [custom.rings] if custom is not None else list(spec.rings_list)
        script = PlotScriptGenerator().generate(out, spec.dims_list, rings_list, normalize_4d)
        typer.echo(f"Plot script: {writer.write_text(script, str(Path(out).with_suffix('.gp')))}")

    failed = [r for r in rows if r.status != "ok"]
    if failed:
        typer.secho(f"{len(failed)} row(s) did not converge or failed", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=EXIT_NONCONVERGED)


@app.command()
def capacity(
    dims: str = typer.Option("2,4", "--dims", help="Comma-separated real dimensions N"),
    snr_db: str = typer.Option("0:40:1", "--snr-db", help="SNR range start:stop:step in dB"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Output CSV path (default: stdout)"),
):
    """
    AWGN capacity table (N/2)*log2(1 + 2A/N).
    """
    start, stop, step = _parse_snr_range(snr_db)
    try:
        spec = SweepSpec(dims_list=tuple(_parse_ints(dims, "--dims")), snr_db_start=start, snr_db_stop=stop, snr_db_step=step)
    except ValidationError as e:
        _fail(f"invalid grid: {e.errors()[0]['msg']}")

    processor = RateSweepProcessor(verbose=False)
    table = processor.capacity_table(spec.dims_list, spec.snr_db_values())
    if out is None:
        typer.echo(dataframe_to_csv_text(table), nl=False)
    else:
        written = CsvWriterAdapter(verbose=False).write_table_safe(table, out)
        if isinstance(written, Failure):
            _fail(f"cannot write {out}: {written.failure()}")
        typer.echo(f"Wrote capacity table to {written.unwrap()}")


@app.command()
def oracle(
    dims: int = typer.Option(2, "--dims", help="Real dimension N"),
    rings: int = typer.Option(1, "--rings", help="Sphere count K"),
    snr_db: float = typer.Option(10.0, "--snr-db", help="SNR in dB"),
    samples: int = typer.Option(1_000_000, "--samples", help="Monte Carlo samples per oracle"),
    seed: int = typer.Option(42, "--seed", help="64-bit seed"),
    rel_tol: float = typer.Option(1e-8, "--rel-tol", help="Relative tolerance of the MI quadrature"),
    radii: Optional[str] = typer.Option(None, "--radii", help="Custom sphere radii shape"),
    probs: Optional[str] = typer.Option(None, "--probs", help="Custom sphere probabilities"),
    workers: int = typer.Option(1, "--workers", help="Threads for Monte Carlo blocks"),
):
    """
    Cross-check one (N, K, SNR) point against both Monte Carlo oracles.
    """
    processor = RateSweepProcessor(_quadrature(rel_tol), workers=workers)
    try:
        report = processor.oracle_point(dims, rings, snr_db, samples, seed, _custom_set(radii, probs))
    except QuadratureError as e:
        _fail(str(e), EXIT_NONCONVERGED)
    except (DomainError, ValidationError) as e:
        _fail(str(e))

    typer.echo(f"quadrature   {report.mi_bits:.9f} bits (error {report.quad_error_bits:.1e})")
    typer.echo(f"vector MC    {report.vector.estimate:.9f} ± {report.vector.stderr:.2e} "
               f"[{'agree' if report.vector_agrees else 'DISAGREE'}]")
    typer.echo(f"radial MC    {report.radial.estimate:.9f} ± {report.radial.stderr:.2e} "
               f"[{'agree' if report.radial_agrees else 'DISAGREE'}]")
    typer.echo(f"oracles {'agree' if report.oracles_agree else 'DISAGREE'} with each other")


@app.command()
def crossover(
    snr4d_db: float = typer.Option(25.0, "--snr4d-db", help="4-D SNR in dB"),
    rings: int = typer.Option(8, "--rings", help="Sphere count K"),
    rel_tol: float = typer.Option(1e-8, "--rel-tol", help="Relative tolerance of the MI quadrature"),
):
    """
    Compare two independent 2-D multirings against one 4-D multisphere.
    """
    processor = RateSweepProcessor(_quadrature(rel_tol), verbose=False)
    try:
        report = processor.crossover(snr4d_db, rings)
    except QuadratureError as e:
        _fail(str(e), EXIT_NONCONVERGED)
    except DomainError as e:
        _fail(str(e))

    typer.echo(f"4-D SNR {report.snr4d_db:g} dB, K={report.rings}")
    typer.echo(f"two 2-D multirings : {report.rate_two_2d:.9f} bits per 4-D use")
    typer.echo(f"one 4-D multisphere: {report.rate_one_4d:.9f} bits per 4-D use")
    typer.echo(f"difference         : {report.difference:+.9f} (error bound {report.error_bound:.1e})")
    typer.echo("two 2-D better" if report.two_2d_better else "one 4-D better")


@app.command("manakov-check")
def manakov_check(
    params_file: str = typer.Argument(..., help="TOML parameter file"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the seed of the parameter file"),
    identity: bool = typer.Option(False, "--identity", help="Use the identity unitary instead of a Haar draw"),
    workers: int = typer.Option(1, "--workers", help="Threads for ensemble trials"),
):
    """
    Statistical rotational-invariance test of split-step Manakov propagation.
    """
    result = ParamFileAdapter().read(params_file)
    if isinstance(result, Failure):
        _fail(result.failure())
    config = result.unwrap()
    if seed is not None:
        try:
            config = ManakovCheckConfig(**{**config.model_dump(), "seed": seed})
        except ValidationError as e:
            _fail(f"invalid --seed: {e.errors()[0]['msg']}")

    checker = InvarianceChecker(workers=workers)
    report = checker.check(config, identity=identity)
    for line in checker.format_report(report):
        typer.echo(line)
    if not report.passed:
        raise typer.Exit(code=EXIT_INVARIANCE_FAILED)


def main(argv: Optional[List[str]] = None) -> int:
    """console script 진입점: usage 오류는 종료 코드 1"""
    try:
        code = app(args=argv, standalone_mode=False)
    except click.exceptions.UsageError as e:
        typer.secho(f"Error: {e.format_message()}", fg=typer.colors.RED, err=True)
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
