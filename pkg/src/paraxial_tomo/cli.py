"""CLI interface for the paraxial nonlinear-ultrasound tomography toolkit."""

from __future__ import annotations

from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Optional

import numpy as np
import typer
from dotenv import load_dotenv
from pydantic import ValidationError

from paraxial_tomo import __version__
from paraxial_tomo.beams import (
    CurvatureProfile,
    Line2D,
    c0_drift,
    flat_solution,
    solve_yz,
    unit_disk_chords,
    xray_transform,
)
from paraxial_tomo.config import ToolConfig, get_app_settings, parse_config
from paraxial_tomo.core import RealField
from paraxial_tomo.errors import InputError, UnsupportedFormat, ValueOutOfRange
from paraxial_tomo.formats import (
    read_rf64,
    read_wvsg,
    render_pgm,
    save_unit_pgm,
    write_report,
    write_rf64,
    write_wvsg,
)
from paraxial_tomo.inversion import adjoint_dot_test, reconstruct
from paraxial_tomo.inversion.metrics import metrics as score_image
from paraxial_tomo.paraxial import forward_map, march_envelope
from paraxial_tomo.phantom import load_raster, make_phantom
from paraxial_tomo.utils import bind_run_context, get_logger, resolve_workers, setup_logging
from paraxial_tomo.westervelt import (
    Westervelt1DConfig,
    fitted_order,
    identity_convergence,
    polarization_convergence,
)

# Load environment variables from .env file
load_dotenv()

logger = get_logger("cli")

app = typer.Typer(
    name="paraxial-tomo",
    help="Paraxial nonlinear-ultrasound tomography: forward data, reconstruction and certification checks.",
    add_completion=False,
)

EXIT_FAILURE = 1
EXIT_INVALID = 2

CONFIG_OPTION = typer.Option(None, "--config", "-c", help="key = value configuration file; flags win.")
THREADS_OPTION = typer.Option(
    None, "--threads", "-t", help="Worker threads (default: available parallelism)."
)


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        typer.echo(f"paraxial-tomo version {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(
        False,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        help="Show version and exit.",
    ),
) -> None:
    """Paraxial nonlinear-ultrasound tomography CLI."""
    pass


@contextmanager
def command_errors(command: str) -> Iterator[None]:
    """Map failures to exit codes: 2 for bad input, 1 for anything else."""
    try:
        yield
    except typer.Exit:
        raise
    except (InputError, ValidationError, FileNotFoundError, IsADirectoryError) as exc:
        message = " ".join(str(exc).split())
        logger.debug("command_rejected", command=command, error=message)
        typer.echo(f"error: {message}", err=True)
        raise typer.Exit(EXIT_INVALID)
    except Exception as exc:
        logger.error("command_failed", command=command, error=str(exc), error_type=type(exc).__name__)
        typer.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        raise typer.Exit(EXIT_FAILURE)


def _absolute(path: Optional[Path]) -> Optional[Path]:
    return path.resolve() if path is not None else None


def _prepare(
    command: str,
    config_path: Optional[Path],
    overrides: dict[str, Any],
    threads: Optional[int] = None,
) -> tuple[ToolConfig, int]:
    """Load settings, configure logging and merge the config file with flags."""
    # Load settings
    settings = get_app_settings()

    # Setup logging
    setup_logging(level=settings.log_level, log_file=settings.log_file, json_output=settings.json_logs)
    bind_run_context(command=command)

    # Config file first, then flags on top
    base = parse_config(config_path) if config_path is not None else ToolConfig()
    overrides = {
        key: _absolute(value) if isinstance(value, Path) else value
        for key, value in overrides.items()
    }
    config = base.merged(overrides)
    workers = resolve_workers(threads, settings.threads)
    logger.info(
        "command_started",
        version=__version__,
        config=str(config_path) if config_path else None,
        workers=workers,
    )
    return config, workers


def _required(config: ToolConfig, name: str, flag: str) -> Path:
    path = config.path(name)
    if path is None:
        raise ValueOutOfRange(f"paths.{name}", f"required: pass {flag} or set paths.{name}")
    return path


def _read_real(path: Path, what: str) -> RealField:
    field = read_rf64(path)
    if not isinstance(field, RealField):
        raise UnsupportedFormat(f"{path}: {what} must be a real RF64 field")
    return field


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


@app.command()
def phantom(
    kind: Optional[str] = typer.Option(
        None, "--kind", "-k", help="shepp-logan, disk, gaussian or raster."
    ),
    n: Optional[int] = typer.Option(None, "--n", help="Grid nodes per side."),
    length: Optional[float] = typer.Option(None, "--length", help="Domain side length L."),
    image: Optional[Path] = typer.Option(None, "--image", help="Raster to ingest (kind raster)."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output RF64 file."),
    pgm: Optional[Path] = typer.Option(None, "--pgm", help="Also write a 16-bit PGM rendering."),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Generate or ingest a nonlinearity phantom."""
    with command_errors("phantom"):
        cfg, _ = _prepare(
            "phantom",
            config,
            {
                "phantom.kind": kind,
                "grid.n": n,
                "grid.length": length,
                "paths.image": image,
                "paths.phantom": out,
                "paths.pgm": pgm,
            },
        )
        target = _required(cfg, "phantom", "--out")
        grid = cfg.grid()
        if cfg.phantom_kind == "raster":
            result = load_raster(_required(cfg, "image", "--image"), grid)
        else:
            result = make_phantom(cfg.phantom_kind, grid)

        write_rf64(target, result.field)
        logger.info("phantom_written", kind=cfg.phantom_kind, n=grid.n_x, path=str(target))
        typer.echo(f"wrote {target}")

        rendering = cfg.path("pgm")
        if rendering is not None:
            save_unit_pgm(rendering, result.field)
            typer.echo(f"wrote {rendering}")


@app.command()
def forward(
    phantom_path: Optional[Path] = typer.Option(None, "--phantom", "-p", help="RF64 phantom."),
    l_over_lambda: Optional[float] = typer.Option(None, "--l-over-lambda", help="Ratio L / wavelength."),
    angles: Optional[int] = typer.Option(None, "--angles", help="Number of view angles."),
    step_deg: Optional[float] = typer.Option(None, "--step-deg", help="Angular step in degrees."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output WVSG sinogram."),
    sino_pgm: Optional[Path] = typer.Option(
        None, "--sino-pgm", help="Also render the sinogram modulus as a windowed PGM."
    ),
    field_pgm: Optional[Path] = typer.Option(
        None, "--field-pgm", help="Render the envelope modulus |v| for the view at angle 0."
    ),
    no_diffusion: bool = typer.Option(
        False, "--no-diffusion", help="Drop the transverse diffusion term (Radon limit)."
    ),
    config: Optional[Path] = CONFIG_OPTION,
    threads: Optional[int] = THREADS_OPTION,
) -> None:
    """March the envelope equation for every view and write the sinogram."""
    with command_errors("forward"):
        cfg, workers = _prepare(
            "forward",
            config,
            {
                "paths.phantom": phantom_path,
                "wave.l_over_lambda": l_over_lambda,
                "angles.count": angles,
                "angles.step_deg": step_deg,
                "paths.sino": out,
                "paths.sino_pgm": sino_pgm,
                "paths.field_pgm": field_pgm,
            },
            threads,
        )
        # Load phantom
        beta = _read_real(_required(cfg, "phantom", "--phantom"), "phantom")
        target = _required(cfg, "sino", "--out")
        params = cfg.wave_params(beta.grid.length_L)

        # March every view
        sino = forward_map(beta, cfg.angles(), params, diffusion=not no_diffusion, workers=workers)
        write_wvsg(target, sino)
        typer.echo(f"wrote {target} ({sino.n_angles} angles x {sino.n_y} samples)")

        # Measurement panel
        sino_rendering = cfg.path("sino_pgm")
        if sino_rendering is not None:
            image, sidecar = render_pgm(sino_rendering, sino)
            typer.echo(f"wrote {image} and {sidecar}")

        # Envelope at angle 0, where the view frame is the grid itself
        field_rendering = cfg.path("field_pgm")
        if field_rendering is not None:
            envelope = march_envelope(beta, params, diffusion=not no_diffusion)
            image, sidecar = render_pgm(field_rendering, envelope)
            logger.info(
                "envelope_rendered", path=str(image), peak=float(np.abs(envelope.values).max())
            )
            typer.echo(f"wrote {image} and {sidecar}")


@app.command(name="reconstruct")
def reconstruct_command(
    sino_path: Optional[Path] = typer.Option(None, "--sino", "-s", help="WVSG sinogram."),
    truth: Optional[Path] = typer.Option(None, "--truth", help="RF64 ground truth for metrics."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output RF64 reconstruction."),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a key = value report."),
    pgm: Optional[Path] = typer.Option(None, "--pgm", help="Also write a windowed 16-bit PGM."),
    filter_kind: Optional[str] = typer.Option(None, "--filter", help="ramlak or ramlak_hann."),
    cutoff: Optional[float] = typer.Option(None, "--cutoff", help="Cutoff as a fraction of Nyquist."),
    part: Optional[str] = typer.Option(None, "--part", help="real or modulus of the back-projection."),
    scale: Optional[float] = typer.Option(None, "--scale", help="Calibration scale; skips calibration."),
    config: Optional[Path] = CONFIG_OPTION,
    threads: Optional[int] = THREADS_OPTION,
) -> None:
    """Filtered back-projection through the exact discrete adjoint."""
    with command_errors("reconstruct"):
        cfg, workers = _prepare(
            "reconstruct",
            config,
            {
                "paths.sino": sino_path,
                "paths.truth": truth,
                "paths.recon": out,
                "paths.report": report,
                "paths.pgm": pgm,
                "filter.kind": filter_kind,
                "filter.cutoff": cutoff,
                "recon.part": part,
                "recon.calibration_scale": scale,
            },
            threads,
        )
        # Load inputs
        sino = read_wvsg(_required(cfg, "sino", "--sino"))
        target = _required(cfg, "recon", "--out")
        truth_path = cfg.path("truth")
        truth_field = _read_real(truth_path, "truth") if truth_path is not None else None

        # Filter, back-project, calibrate
        result = reconstruct(
            sino,
            cfg.filter_spec(),
            truth=truth_field,
            part=cfg.recon_part,
            calibration_scale=cfg.recon_calibration_scale,
            workers=workers,
        )
        write_rf64(target, result.reconstruction)
        typer.echo(f"wrote {target}")

        # Optional report
        report_path = cfg.path("report")
        if report_path is not None:
            entries = {
                **result.as_entries(),
                "angles": sino.n_angles,
                "l_over_lambda": sino.params.l_over_lambda,
                "filter_kind": cfg.filter_kind,
                "filter_cutoff": cfg.filter_cutoff,
                "part": cfg.recon_part,
            }
            write_report(report_path, entries, title="reconstruction")
            typer.echo(f"wrote {report_path}")

        rendering = cfg.path("pgm")
        if rendering is not None:
            image, sidecar = render_pgm(rendering, result.reconstruction)
            typer.echo(f"wrote {image} and {sidecar}")

        if result.normalized_cross_correlation is not None:
            typer.echo(
                f"ncc={result.normalized_cross_correlation:.4f} "
                f"relative_l2={result.relative_l2_error:.4f} psnr_db={result.psnr_db:.2f}"
            )


@app.command(name="adjoint-test")
def adjoint_test(
    n: Optional[int] = typer.Option(None, "--n", help="Grid nodes per side."),
    angles: Optional[int] = typer.Option(None, "--angles", help="Number of view angles."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed (required)."),
    l_over_lambda: Optional[float] = typer.Option(None, "--l-over-lambda", help="Ratio L / wavelength."),
    tolerance: float = typer.Option(1e-10, "--tolerance", help="Largest accepted relative gap."),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a key = value report."),
    config: Optional[Path] = CONFIG_OPTION,
    threads: Optional[int] = THREADS_OPTION,
) -> None:
    """Dot test of the forward map against its discrete adjoint."""
    with command_errors("adjoint-test"):
        cfg, workers = _prepare(
            "adjoint-test",
            config,
            {
                "grid.n": n,
                "angles.count": angles,
                "seed": seed,
                "wave.l_over_lambda": l_over_lambda,
                "paths.report": report,
            },
            threads,
        )
        if cfg.seed is None:
            raise ValueOutOfRange("seed", "required: pass --seed or set seed")

        check = adjoint_dot_test(cfg.grid(), cfg.angles(), cfg.wave_params(), cfg.seed, workers)
        ok = check.relative_gap <= tolerance
        typer.echo(
            f"{_verdict(ok)} adjoint relative_gap={check.relative_gap:.3e} tolerance={tolerance:.1e}"
        )

        report_path = cfg.path("report")
        if report_path is not None:
            write_report(
                report_path,
                {
                    "n": cfg.grid_n,
                    "angles": cfg.angles_count,
                    "seed": cfg.seed,
                    "l_over_lambda": cfg.l_over_lambda,
                    "relative_gap": check.relative_gap,
                    "tolerance": tolerance,
                    "passed": ok,
                },
                title="adjoint dot test",
            )
        if not ok:
            raise typer.Exit(EXIT_FAILURE)


@app.command(name="riccati-check")
def riccati_check(
    profile: Optional[str] = typer.Option(
        None, "--profile", help="flat, constant:<kappa> or table:<rf64 path>."
    ),
    step: Optional[float] = typer.Option(None, "--step", help="Integration step."),
    tau_max: Optional[float] = typer.Option(None, "--tau-max", help="End of the interval [0, tau_max]."),
    tolerance: float = typer.Option(1e-6, "--tolerance", help="Largest accepted drift of det(Im H)|det Y|^2."),
    closed_form_tolerance: float = typer.Option(
        1e-8, "--closed-form-tolerance", help="Largest accepted error against the flat solution."
    ),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a key = value report."),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Integrate the beam Riccati system and check its conserved quantity."""
    with command_errors("riccati-check"):
        cfg, _ = _prepare(
            "riccati-check",
            config,
            {
                "riccati.profile": profile,
                "riccati.step": step,
                "riccati.tau_max": tau_max,
                "paths.report": report,
            },
        )
        curvature = CurvatureProfile.from_spec(
            cfg.riccati_profile, 0.0, cfg.riccati_tau_max, base_dir=cfg.base_dir
        )
        Y0 = np.eye(3, dtype=np.complex128)
        Y1 = 1j * np.eye(3)
        trajectory = solve_yz(curvature, Y0, Y1, cfg.riccati_step)

        drift = c0_drift(trajectory)
        passed = drift <= tolerance
        typer.echo(f"{_verdict(passed)} riccati c0_drift={drift:.3e} tolerance={tolerance:.1e}")
        entries: dict[str, Any] = {
            "profile": curvature.label,
            "step": cfg.riccati_step,
            "samples": len(trajectory),
            "c0_drift": drift,
        }

        if curvature.label == "flat":
            exact = flat_solution(Y0, Y1, trajectory.taus)
            error = float(np.max(np.abs(trajectory.Y - exact)) / np.max(np.abs(exact)))
            ok = error <= closed_form_tolerance
            passed = passed and ok
            typer.echo(
                f"{_verdict(ok)} riccati closed_form_error={error:.3e} "
                f"tolerance={closed_form_tolerance:.1e}"
            )
            entries["closed_form_error"] = error

        report_path = cfg.path("report")
        if report_path is not None:
            write_report(report_path, {**entries, "passed": passed}, title="riccati check")
        if not passed:
            raise typer.Exit(EXIT_FAILURE)


@app.command()
def xray(
    phantom_path: Optional[Path] = typer.Option(
        None, "--phantom", "-p", help="RF64 field to integrate; omit for the unit-disk check."
    ),
    offset: Optional[float] = typer.Option(None, "--offset", help="Signed distance of the line from the origin."),
    angle_deg: Optional[float] = typer.Option(None, "--angle-deg", help="Line direction in degrees."),
    n: int = typer.Option(1101, "--n", help="Grid nodes per side for the unit-disk check."),
    tolerance: float = typer.Option(1e-3, "--tolerance", help="Largest accepted chord error."),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a key = value report."),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Straight-line integrals: one line through a field, or the unit-disk chord check."""
    with command_errors("xray"):
        cfg, _ = _prepare(
            "xray",
            config,
            {
                "paths.phantom": phantom_path,
                "xray.offset": offset,
                "xray.angle_deg": angle_deg,
                "paths.report": report,
            },
        )
        source = cfg.path("phantom")
        report_path = cfg.path("report")

        if source is not None:
            field = _read_real(source, "field")
            result = xray_transform(field, Line2D(cfg.xray_offset, np.deg2rad(cfg.xray_angle_deg)))
            typer.echo(
                f"xray offset={cfg.xray_offset!r} angle_deg={cfg.xray_angle_deg!r} "
                f"value={result.value:.12g} intersects={str(result.intersects).lower()}"
            )
            if report_path is not None:
                write_report(
                    report_path,
                    {
                        "offset": cfg.xray_offset,
                        "angle_deg": cfg.xray_angle_deg,
                        "value": result.value,
                        "intersects": result.intersects,
                    },
                    title="x-ray transform",
                )
            return

        checks = unit_disk_chords(n)
        passed = True
        entries: dict[str, Any] = {"n": n, "tolerance": tolerance}
        for check in checks:
            ok = check.error <= tolerance
            passed = passed and ok
            typer.echo(
                f"{_verdict(ok)} xray d={check.offset:g} measured={check.measured:.6f} "
                f"exact={check.exact:.6f} error={check.error:.2e} tolerance={tolerance:.1e}"
            )
            entries[f"error_d{check.offset:g}"] = check.error

        if report_path is not None:
            write_report(report_path, {**entries, "passed": passed}, title="unit disk chords")
        if not passed:
            raise typer.Exit(EXIT_FAILURE)


@app.command(name="westervelt-check")
def westervelt_check(
    n_x: Optional[int] = typer.Option(None, "--n-x", help="Finest spatial grid; coarser runs use n_x/4 and n_x/2."),
    eps: Optional[float] = typer.Option(None, "--eps", help="Largest polarization amplitude."),
    gap_tolerance: float = typer.Option(0.05, "--gap-tolerance", help="Largest accepted identity gap on the finest grid."),
    min_identity_order: float = typer.Option(1.0, "--min-identity-order", help="Smallest accepted identity order."),
    min_polarization_order: float = typer.Option(
        0.9, "--min-polarization-order", help="Smallest accepted polarization order."
    ),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a key = value report."),
    config: Optional[Path] = CONFIG_OPTION,
    threads: Optional[int] = THREADS_OPTION,
) -> None:
    """Certify the second-order linearization identity of the 1D Westervelt model."""
    with command_errors("westervelt-check"):
        cfg, workers = _prepare(
            "westervelt-check",
            config,
            {"westervelt.n_x": n_x, "westervelt.eps": eps, "paths.report": report},
            threads,
        )
        base = Westervelt1DConfig(n_x=cfg.westervelt_n_x, eps1=cfg.westervelt_eps, eps2=cfg.westervelt_eps)
        finest = cfg.westervelt_n_x
        n_values = (finest // 4, finest // 2, finest)
        eps_values = (cfg.westervelt_eps, cfg.westervelt_eps / 2, cfg.westervelt_eps / 4)

        identity_rows = identity_convergence(base, n_values)
        identity_order = fitted_order([1.0 / n for n in n_values], [row.value for row in identity_rows])
        polarization_rows = polarization_convergence(base, eps_values, workers)
        polarization_order = fitted_order(eps_values, [row.value for row in polarization_rows])

        for row in identity_rows:
            typer.echo(f"identity n_x={int(row.parameter)} relative_gap={row.value:.4e}")
        for row in polarization_rows:
            typer.echo(f"polarization eps={row.parameter:g} relative_difference={row.value:.4e}")

        gap = identity_rows[-1].value
        checks = [
            (gap <= gap_tolerance, f"identity relative_gap={gap:.4e} tolerance={gap_tolerance:g}"),
            (
                identity_order is not None and identity_order >= min_identity_order,
                f"identity order={identity_order} minimum={min_identity_order:g}",
            ),
            (
                polarization_order is not None and polarization_order >= min_polarization_order,
                f"polarization order={polarization_order} minimum={min_polarization_order:g}",
            ),
        ]
        for ok, text in checks:
            typer.echo(f"{_verdict(ok)} {text}")
        passed = all(ok for ok, _ in checks)

        report_path = cfg.path("report")
        if report_path is not None:
            entries: dict[str, Any] = {
                "n_x_values": list(n_values),
                "identity_gaps": [row.value for row in identity_rows],
                "identity_order": identity_order,
                "eps_values": list(eps_values),
                "polarization_differences": [row.value for row in polarization_rows],
                "polarization_order": polarization_order,
                "passed": passed,
            }
            write_report(report_path, entries, title="westervelt identity")
        if not passed:
            raise typer.Exit(EXIT_FAILURE)


@app.command(name="metrics")
def metrics_command(
    recon: Optional[Path] = typer.Option(None, "--recon", help="RF64 reconstruction."),
    truth: Optional[Path] = typer.Option(None, "--truth", help="RF64 ground truth."),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Write a key = value report."),
    config: Optional[Path] = CONFIG_OPTION,
) -> None:
    """Score a reconstruction against its ground truth."""
    with command_errors("metrics"):
        cfg, _ = _prepare(
            "metrics",
            config,
            {"paths.recon": recon, "paths.truth": truth, "paths.report": report},
        )
        image = _read_real(_required(cfg, "recon", "--recon"), "reconstruction")
        reference = _read_real(_required(cfg, "truth", "--truth"), "truth")
        quality = score_image(image, reference)
        typer.echo(
            f"relative_l2={quality.relative_l2:.6f} ncc={quality.ncc:.6f} psnr_db={quality.psnr_db:.3f}"
        )

        report_path = cfg.path("report")
        if report_path is not None:
            write_report(report_path, quality._asdict(), title="image metrics")


if __name__ == "__main__":
    app()
