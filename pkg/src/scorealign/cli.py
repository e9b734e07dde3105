"""Scorealign CLI interface.

Commands:
- init: Write a default configuration file
- templates: Build a template bank from recordings or synthetic profiles
- patterns: Train unit patterns for a score
- align: Align a performance (WAV or stored spectrogram) to a score
- synth: Render ground-truthed synthetic performances
- eval: Score alignments against ground truth

Global options:
- --config: Path to configuration file
- --threads: Worker threads
- --seed: Default noise seed
- --verbose: Enable verbose output with timestamps
- --quiet: Suppress info messages
- --ci: JSON log lines
- --version: Show version and exit

Machine-readable results go to stdout as JSON; logs go to stderr.
Exit codes: 0 success, 2 invalid input or configuration, 1 I/O or internal error.
"""

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import TYPE_CHECKING, Annotated, Any

import typer

from scorealign import __version__
from scorealign.config import RunConfig, apply_overrides, load_config
from scorealign.errors import InternalError, ValidationError
from scorealign.utils.logging import configure_from_cli, get_logger

if TYPE_CHECKING:
    from scorealign.models.result import AlignmentResult
    from scorealign.pipeline import AlignmentPipeline

# Create Typer app
app = typer.Typer(
    name="scorealign",
    help="Audio-to-score alignment with unit patterns, subspace distortion and DTW",
    add_completion=False,
    no_args_is_help=True,
)

# Global state
_config: RunConfig | None = None
_show_tables = True
_logger = get_logger()


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        typer.echo(f"scorealign {__version__}")
        raise typer.Exit()


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library errors to CLI exit codes."""
    try:
        yield
    except ValidationError as e:
        _logger.error(str(e))
        raise typer.Exit(2) from e
    except InternalError as e:
        _logger.error(f"Internal error: {e}")
        raise typer.Exit(1) from e
    except OSError as e:
        _logger.error(str(e))
        raise typer.Exit(1) from e


def _run_config(overrides: dict[str, Any] | None = None) -> RunConfig:
    config = _config or RunConfig()
    return apply_overrides(config, overrides or {})


def _echo_json(data: Any) -> None:
    from scorealign.formats.documents import dumps

    typer.echo(dumps(data))


def _bank_path(bank: Path | None, config: RunConfig) -> Path:
    if bank is not None:
        return bank
    if config.paths.bank:
        return Path(config.paths.bank)
    raise ValidationError("no template bank given (--bank or paths.bank)")


@app.callback()
def main(
    config: Annotated[
        Path | None,
        typer.Option(
            "--config",
            "-c",
            help="Path to configuration file",
            dir_okay=False,
        ),
    ] = None,
    threads: Annotated[
        int | None,
        typer.Option("--threads", "-j", help="Worker threads (overrides runtime.threads)"),
    ] = None,
    seed: Annotated[
        int | None,
        typer.Option("--seed", help="Noise seed (overrides runtime.seed)"),
    ] = None,
    verbose: Annotated[
        bool,
        typer.Option(
            "--verbose",
            "-v",
            help="Enable verbose output with timestamps",
        ),
    ] = False,
    quiet: Annotated[
        bool,
        typer.Option(
            "--quiet",
            "-q",
            help="Suppress info messages (warnings and errors only)",
        ),
    ] = False,
    ci: Annotated[
        bool,
        typer.Option(
            "--ci",
            help="Enable CI mode with JSON log lines",
        ),
    ] = False,
    version: Annotated[
        bool,
        typer.Option(
            "--version",
            callback=version_callback,
            is_eager=True,
            help="Show version and exit",
        ),
    ] = False,
) -> None:
    """Scorealign - align music performances to their scores.

    Builds note templates, trains score-unit patterns, computes distortion
    matrices and finds unit onsets by dynamic time warping.
    """
    global _config, _show_tables

    configure_from_cli(verbose=verbose, quiet=quiet, ci=ci)
    _show_tables = not (quiet or ci)

    try:
        _config = apply_overrides(
            load_config(config_path=config),
            {"runtime.threads": threads, "runtime.seed": seed},
        )
        if _config.config_path:
            _logger.debug(f"Loaded config from: {_config.config_path}")
    except FileNotFoundError as e:
        _logger.error(str(e))
        raise typer.Exit(1) from e
    except ValidationError as e:
        _logger.error(f"Failed to load config: {e}")
        raise typer.Exit(2) from e


# =============================================================================
# init command
# =============================================================================


@app.command()
def init(
    force: Annotated[
        bool,
        typer.Option("--force", help="Overwrite existing config"),
    ] = False,
) -> None:
    """Write a default configuration to .scorealign/config.yaml."""
    from scorealign.config import create_default_config

    config_file = Path(".scorealign") / "config.yaml"
    if config_file.exists() and not force:
        _logger.error(f"Config already exists: {config_file}")
        _logger.info("Use --force to overwrite")
        raise typer.Exit(1)

    config_file.parent.mkdir(exist_ok=True)
    config_file.write_text(create_default_config())
    _logger.info(f"Created {config_file}")


# =============================================================================
# templates command
# =============================================================================


@app.command()
def templates(
    directory: Annotated[
        Path | None,
        typer.Argument(help="Directory of <instrument>_<pitch>.wav recordings"),
    ] = None,
    synthetic: Annotated[
        bool,
        typer.Option("--synthetic", help="Generate harmonic templates instead of learning them"),
    ] = False,
    pitches: Annotated[
        str,
        typer.Option("--pitches", help="MIDI pitches for --synthetic, e.g. 48-84 or 60,64,67"),
    ] = "48-84",
    instrument: Annotated[
        list[str] | None,
        typer.Option("--instrument", "-i", help="Instrument name for --synthetic (repeatable)"),
    ] = None,
    decay: Annotated[
        float,
        typer.Option("--decay", help="Partial amplitude decay exponent for --synthetic"),
    ] = 1.0,
    partials: Annotated[
        int,
        typer.Option("--partials", help="Maximum number of partials for --synthetic"),
    ] = 20,
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Bank JSON to write (default: paths.bank or bank.json)"),
    ] = None,
) -> None:
    """Build a template bank.

    Exit codes:
        0: Bank written
        1: I/O error
        2: Invalid recordings or options
    """
    from scorealign.analyzers.template_bank import (
        build_bank_from_directory,
        build_synthetic_bank,
        parse_pitch_range,
    )
    from scorealign.formats.documents import save_bank
    from scorealign.models.bank import InstrumentProfile

    config = _run_config()
    with _exit_codes():
        if synthetic == (directory is not None):
            raise ValidationError("give either a recordings directory or --synthetic")
        if synthetic:
            profile = InstrumentProfile(decay=decay, partials=partials)
            bank = build_synthetic_bank(
                parse_pitch_range(pitches), instrument or ["piano"], config.frontend, profile
            )
        else:
            assert directory is not None
            bank = build_bank_from_directory(directory, config.frontend)

        target = output or Path(config.paths.bank or "bank.json")
        save_bank(bank, target)
        _logger.info(f"Wrote {len(bank)} templates to {target}")
        _echo_json({"templates": len(bank), "output": str(target)})


# =============================================================================
# patterns command
# =============================================================================


@app.command()
def patterns(
    score: Annotated[Path, typer.Argument(help="Score JSON")],
    bank: Annotated[
        Path | None,
        typer.Option("--bank", "-b", help="Template bank JSON (default: paths.bank)"),
    ] = None,
    beta: Annotated[
        float | None,
        typer.Option("--beta", help="Training beta-divergence (overrides training.beta)"),
    ] = None,
    iterations: Annotated[
        int | None,
        typer.Option("--iterations", help="Maximum update rounds (overrides training.iterations)"),
    ] = None,
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Patterns JSON to write (default: paths.patterns or patterns.json)"),
    ] = None,
) -> None:
    """Train one spectral pattern per score unit."""
    from scorealign.analyzers.score_units import build_timeline, load_score
    from scorealign.formats.documents import load_bank, save_patterns
    from scorealign.pipeline import AlignmentPipeline

    with _exit_codes():
        config = _run_config({"training.beta": beta, "training.iterations": iterations})
        template_bank = load_bank(_bank_path(bank, config))
        timeline = build_timeline(load_score(score))
        trained = AlignmentPipeline(config).train_patterns(timeline, template_bank)

        target = output or Path(config.paths.patterns or "patterns.json")
        save_patterns(trained, target)
        degenerate = [p.unit_index for p in trained if p.degenerate]
        for k in degenerate:
            _logger.warning(f"Unit {k} has a degenerate pattern")
        _logger.info(f"Wrote {len(trained)} patterns to {target}")
        _echo_json({"units": len(trained), "degenerate": degenerate, "output": str(target)})


# =============================================================================
# align command
# =============================================================================


@app.command()
def align(
    score: Annotated[
        Path | None,
        typer.Argument(help="Score JSON"),
    ] = None,
    performance: Annotated[
        Path | None,
        typer.Argument(help="Performance: WAV file or SALSPEC1 spectrogram"),
    ] = None,
    bank: Annotated[
        Path | None,
        typer.Option("--bank", "-b", help="Template bank JSON (default: paths.bank)"),
    ] = None,
    patterns_file: Annotated[
        Path | None,
        typer.Option("--patterns", "-p", help="Patterns JSON (trained on the fly when omitted)"),
    ] = None,
    distortion: Annotated[
        str | None,
        typer.Option("--distortion", "-d", help="Distortion measure: novel or baseline"),
    ] = None,
    beta: Annotated[
        float | None,
        typer.Option("--beta", help="Baseline beta-divergence (2 = Euclidean, 1 = KL)"),
    ] = None,
    raw_alphas: Annotated[
        bool,
        typer.Option("--raw-alphas", help="Compare against unscaled pattern amplitudes"),
    ] = False,
    squared_distance: Annotated[
        bool,
        typer.Option("--squared-distance", help="Use the squared coefficient distance"),
    ] = False,
    unconstrained: Annotated[
        bool,
        typer.Option("--unconstrained", help="Allow negative decomposition coefficients"),
    ] = False,
    allow_skip: Annotated[
        bool,
        typer.Option("--allow-skip", help="Let the path skip one score unit per frame"),
    ] = False,
    band: Annotated[
        int | None,
        typer.Option("--band", help="Sakoe-Chiba half-width in frames"),
    ] = None,
    matrix_in: Annotated[
        Path | None,
        typer.Option("--matrix-in", help="Run DTW on a stored SALDIST1 matrix"),
    ] = None,
    dump_matrix: Annotated[
        Path | None,
        typer.Option("--dump-matrix", help="Write the distortion matrix as SALDIST1"),
    ] = None,
    dump_matrix_csv: Annotated[
        Path | None,
        typer.Option("--dump-matrix-csv", help="Write the distortion matrix as CSV k,t,value"),
    ] = None,
    path_csv: Annotated[
        Path | None,
        typer.Option("--path-csv", help="Write the full path as CSV k,t"),
    ] = None,
    coeffs_csv: Annotated[
        Path | None,
        typer.Option("--coeffs-csv", help="Write decomposition coefficients as CSV"),
    ] = None,
    output: Annotated[
        Path | None,
        typer.Option("--output", "-o", help="Also write the alignment JSON to this file"),
    ] = None,
) -> None:
    """Align a performance to a score and print the unit onsets as JSON.

    Exit codes:
        0: Alignment written
        1: I/O or internal error (e.g. missing bank file)
        2: Invalid input or configuration
    """
    from scorealign.formats import binary, documents
    from scorealign.pipeline import AlignmentPipeline

    with _exit_codes():
        config = _run_config(
            {
                "distortion.kind": distortion,
                "distortion.beta": beta,
                "distortion.alpha_scaling": "raw" if raw_alphas else None,
                "distortion.squared_distance": True if squared_distance else None,
                "decomposition.nonnegative": False if unconstrained else None,
                "dtw.allow_skip": True if allow_skip else None,
                "dtw.band": band,
            }
        )
        pipeline = AlignmentPipeline(config)

        if matrix_in is not None:
            result = pipeline.run_matrix(binary.read_matrix(matrix_in, config=config.frontend))
        else:
            if score is None or performance is None:
                raise ValidationError("align needs a score and a performance (or --matrix-in)")
            result = _align_performance(
                pipeline, config, score, performance, bank, patterns_file, coeffs_csv is not None
            )

        for issue in result.issues:
            if issue.recoverable:
                _logger.warning(f"[{issue.stage}] {issue.message}")
        result.raise_for_status()
        assert result.matrix is not None and result.path is not None

        if dump_matrix is not None:
            binary.write_matrix(result.matrix, dump_matrix)
        if dump_matrix_csv is not None:
            documents.write_matrix_csv(result.matrix, dump_matrix_csv)
        if path_csv is not None:
            documents.write_path_csv(result.path, path_csv)
        if coeffs_csv is not None and result.decomposition is not None:
            documents.write_coeffs_csv(result.decomposition, coeffs_csv)
        if output is not None:
            documents.save_alignment(result.path, output)
        _echo_json(result.to_dict())


def _align_performance(
    pipeline: "AlignmentPipeline",
    config: RunConfig,
    score: Path,
    performance: Path,
    bank: Path | None,
    patterns_file: Path | None,
    keep_decomposition: bool,
) -> "AlignmentResult":
    from scorealign.analyzers.frontend import load_audio_spectrogram
    from scorealign.formats import binary, documents
    from scorealign.pipeline import PipelineOptions
    from scorealign.utils.preflight import PreflightChecker

    template_bank = documents.load_bank(_bank_path(bank, config))
    patterns_path = patterns_file or (Path(config.paths.patterns) if config.paths.patterns else None)
    unit_patterns = (
        documents.load_patterns(patterns_path, template_bank) if patterns_path is not None else None
    )
    is_audio = performance.suffix.lower() == ".wav"

    preflight = PreflightChecker(config.frontend).run(
        score, template_bank, unit_patterns, audio=performance if is_audio else None
    )
    for warning in preflight.warnings:
        _logger.warning(warning)
    preflight.raise_on_failure()
    assert preflight.timeline is not None

    if is_audio:
        spectrogram = load_audio_spectrogram(performance, config.frontend)
    else:
        spectrogram = binary.read_spectrogram(performance, window=config.frontend.window)
    return pipeline.run(
        preflight.timeline,
        spectrogram,
        template_bank,
        patterns=unit_patterns,
        options=PipelineOptions(keep_decomposition=keep_decomposition),
    )


# =============================================================================
# synth command
# =============================================================================


def _parse_segments(text: str) -> tuple[list[float], list[float]]:
    durations: list[float] = []
    slopes: list[float] = []
    for part in text.split(","):
        duration, sep, slope = part.partition(":")
        if not sep:
            raise ValidationError(f"warp segment {part!r} is not duration:slope")
        try:
            durations.append(float(duration))
            slopes.append(float(slope))
        except ValueError as e:
            raise ValidationError(f"warp segment {part!r}: {e}") from e
    return durations, slopes


@app.command()
def synth(
    score: Annotated[
        Path | None,
        typer.Argument(help="Score JSON (single case; omit with --manifest)"),
    ] = None,
    manifest: Annotated[
        Path | None,
        typer.Option("--manifest", "-m", help="Corpus manifest JSON"),
    ] = None,
    bank: Annotated[
        Path | None,
        typer.Option("--bank", "-b", help="Template bank JSON (default: paths.bank)"),
    ] = None,
    patterns_file: Annotated[
        Path | None,
        typer.Option("--patterns", "-p", help="Unit amplitudes (every note alpha = 1 when omitted)"),
    ] = None,
    slope: Annotated[
        float,
        typer.Option("--slope", help="Uniform tempo factor of the single case"),
    ] = 1.0,
    segments: Annotated[
        str | None,
        typer.Option("--segments", help="Piecewise warp 'duration:slope,...' of the single case"),
    ] = None,
    noise: Annotated[
        float,
        typer.Option("--noise", help="Relative spectral noise level of the single case"),
    ] = 0.0,
    name: Annotated[
        str,
        typer.Option("--name", help="Case name of the single case"),
    ] = "case",
    out_dir: Annotated[
        Path | None,
        typer.Option("--out-dir", "-o", help="Output directory (default: paths.output)"),
    ] = None,
) -> None:
    """Render synthetic performances with exact ground truth.

    Writes per case <name>.salspec, <name>.truth.json and <name>.case.json.
    """
    from scorealign.analyzers.score_units import build_timeline, load_score
    from scorealign.evaluation.manifest import load_manifest
    from scorealign.evaluation.synthesis import synth_performance
    from scorealign.formats import binary, documents
    from scorealign.models.evaluation import CorpusCase, WarpMap

    with _exit_codes():
        config = _run_config()
        template_bank = documents.load_bank(_bank_path(bank, config))

        if (manifest is None) == (score is None):
            raise ValidationError("give either a score or --manifest")
        if manifest is not None:
            cases = load_manifest(manifest)
        else:
            assert score is not None
            warp = WarpMap.from_segments(*_parse_segments(segments)) if segments else WarpMap.constant(slope)
            cases = [
                CorpusCase(name=name, score=str(score), warp=warp, seed=config.runtime.seed, noise=noise)
            ]

        unit_patterns = (
            documents.load_patterns(patterns_file, template_bank) if patterns_file else None
        )
        target_dir = out_dir or Path(config.paths.output)
        written = []
        for case in cases:
            timeline = build_timeline(load_score(Path(case.score)))
            spectrogram, truth = synth_performance(
                timeline,
                template_bank,
                case.warp,
                case.noise,
                case.seed,
                config.frontend,
                patterns=unit_patterns,
            )
            spec_path = target_dir / f"{case.name}.salspec"
            truth_path = target_dir / f"{case.name}.truth.json"
            case_path = target_dir / f"{case.name}.case.json"
            binary.write_spectrogram(spectrogram, spec_path)
            documents.write_json(documents.onsets_document(truth), truth_path)
            documents.write_json(case.to_dict(), case_path)
            _logger.info(f"Case {case.name}: {spectrogram.n_frames} frames -> {spec_path}")
            written.append(
                {
                    "name": case.name,
                    "frames": spectrogram.n_frames,
                    "spectrogram": str(spec_path),
                    "truth": str(truth_path),
                }
            )
        _echo_json({"cases": written})


# =============================================================================
# eval command
# =============================================================================


def _print_table(rows: list[tuple[str, Any]]) -> None:
    from rich.console import Console
    from rich.table import Table

    from scorealign.renderers.filters import percent, seconds

    table = Table(title="Onset accuracy")
    table.add_column("Case")
    table.add_column("Mean", justify="right")
    table.add_column("Median", justify="right")
    table.add_column("Max", justify="right")
    thresholds: list[float] = []
    for _, report in rows:
        if report is not None:
            thresholds = sorted(report.fractions)
            break
    for threshold in thresholds:
        table.add_column(f"<= {threshold:.2f} s", justify="right")
    for case_name, report in rows:
        if report is None:
            table.add_row(case_name, "failed", "", "", *["" for _ in thresholds])
            continue
        table.add_row(
            case_name,
            seconds(report.mean),
            seconds(report.median),
            seconds(report.max),
            *[percent(report.fractions[t]) for t in thresholds],
        )
    Console(stderr=True).print(table)


@app.command(name="eval")
def eval_command(
    manifest: Annotated[
        Path | None,
        typer.Option("--manifest", "-m", help="Corpus manifest: synthesize, align and score every case"),
    ] = None,
    bank: Annotated[
        Path | None,
        typer.Option("--bank", "-b", help="Template bank JSON for --manifest (default: paths.bank)"),
    ] = None,
    alignment: Annotated[
        Path | None,
        typer.Option("--alignment", "-a", help="Alignment JSON to score"),
    ] = None,
    truth: Annotated[
        Path | None,
        typer.Option("--truth", "-t", help="Ground-truth JSON for --alignment"),
    ] = None,
    distortion: Annotated[
        str | None,
        typer.Option("--distortion", "-d", help="Distortion measure for --manifest: novel or baseline"),
    ] = None,
    beta: Annotated[
        float | None,
        typer.Option("--beta", help="Baseline beta-divergence for --manifest"),
    ] = None,
    report_md: Annotated[
        Path | None,
        typer.Option("--report-md", help="Also write a Markdown report"),
    ] = None,
) -> None:
    """Score onset accuracy and print the report as JSON.

    Exit codes:
        0: Report written
        1: I/O or internal error
        2: Bad manifest, mismatched unit sets or invalid options
    """
    from scorealign.evaluation.manifest import load_manifest
    from scorealign.evaluation.metrics import average_reports, evaluate
    from scorealign.formats import documents
    from scorealign.pipeline import AlignmentPipeline
    from scorealign.templates.renderer import ReportRenderer
    from scorealign.utils.preflight import PreflightChecker

    with _exit_codes():
        config = _run_config({"distortion.kind": distortion, "distortion.beta": beta})
        if (manifest is None) == (alignment is None):
            raise ValidationError("give either --manifest or --alignment with --truth")

        if alignment is not None:
            if truth is None:
                raise ValidationError("--alignment needs --truth")
            report = evaluate(documents.load_onsets(alignment), documents.load_onsets(truth))
            rendered_cases: list[tuple[str, Any, list[Any]]] = [(alignment.stem, report, [])]
            summary = None
            payload: dict[str, Any] = report.to_dict()
        else:
            assert manifest is not None
            cases = load_manifest(manifest)
            template_bank = documents.load_bank(_bank_path(bank, config))
            checker = PreflightChecker(config.frontend)
            for case in cases:
                preflight = checker.run(Path(case.score), template_bank)
                for warning in preflight.warnings:
                    _logger.warning(f"{case.name}: {warning}")
                preflight.raise_on_failure()
            pipeline = AlignmentPipeline(config)
            outcomes = [pipeline.run_case(case, template_bank) for case in cases]
            for outcome in outcomes:
                outcome.result.raise_for_status()
            reports = [o.report for o in outcomes if o.report is not None]
            summary = average_reports(reports)
            rendered_cases = [(o.case.name, o.report, o.result.issues) for o in outcomes]
            payload = {
                "distortion": config.distortion.kind,
                "cases": [
                    {"name": o.case.name, **(o.report.to_dict() if o.report else {})}
                    for o in outcomes
                ],
                "summary": summary,
            }

        if _show_tables:
            _print_table([(case_name, rep) for case_name, rep, _ in rendered_cases])
        if report_md is not None:
            markdown = ReportRenderer().render(
                rendered_cases, summary=summary, distortion=config.distortion.kind
            )
            report_md.parent.mkdir(parents=True, exist_ok=True)
            report_md.write_text(markdown)
            _logger.info(f"Wrote report to {report_md}")
        _echo_json(payload)


if __name__ == "__main__":
    app()
