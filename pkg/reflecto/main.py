import json
import logging
import sys
from functools import wraps
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console

from reflecto.environment_manager import get_settings
from reflecto.errors import InconsistencyError, InputError, ReflectoError
from reflecto.matrix_classes import classify
from reflecto.network import Discipline, reentrant_spec
from reflecto.rational import parse_csv_vector, rat_parse
from reflecto.report import (
    analysis_json,
    class_report_json,
    decision_json,
    print_analysis,
    print_class_report,
    print_decision,
    print_verdict,
    print_verification,
    run_analysis,
    verdict_json,
    verification_json,
)
from reflecto.spec_io import load_matrix_file, load_spec, load_witness, spec_to_json
from reflecto.tightness import build_system, check_tight_system, decide_tight_matrix, verify_assignment

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="reflecto",
    help="Reflection matrices of static-priority queueing networks, matrix classes and tightness.",
    no_args_is_help=True,
    add_completion=False,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONSISTENT = 2


def _fail(message: str, code: int):
    Console(stderr=True).print(f"[red]error:[/red] {message}", highlight=False)
    raise typer.Exit(code=code)


def handle_errors(command):
    """Map the exception hierarchy onto the exit-code contract"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except typer.Exit:
            raise
        except InconsistencyError as e:
            logger.error(f"internal inconsistency: {e}")
            _fail(f"internal inconsistency: {e}", EXIT_INCONSISTENT)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(p) for p in first["loc"]) or "document"
            _fail(f"{location}: {first['msg']}", EXIT_INPUT)
        except json.JSONDecodeError as e:
            _fail(f"malformed JSON: {e}", EXIT_INPUT)
        except (InputError, ReflectoError) as e:
            _fail(str(e), EXIT_INPUT)
        except OSError as e:
            _fail(f"{e.filename or 'file'}: {e.strerror}", EXIT_INPUT)

    return wrapper


def _emit_json(doc):
    typer.echo(json.dumps(doc, indent=2))


def _b_option(text: Optional[str]):
    return None if text is None else parse_csv_vector(text)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level (default from REFLECTO_LOG_LEVEL)"),
):
    if log_level is None:
        try:
            log_level = get_settings().log_level
        except ValidationError as e:
            first = e.errors()[0]
            _fail(f"settings: {'.'.join(str(p) for p in first['loc'])}: {first['msg']}", EXIT_INPUT)
    level = log_level.upper()
    if not isinstance(logging.getLevelName(level), int):
        _fail(f"unknown log level {log_level}", EXIT_INPUT)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        force=True,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    logging.getLogger("reflecto").setLevel(level)


@app.command()
@handle_errors
def analyze(
    spec_path: Path = typer.Argument(..., help="Network spec JSON"),
    json_output: bool = typer.Option(False, "--json", help="Print a single JSON document"),
    b: Optional[str] = typer.Option(None, "--b", help="Check the single system (R, b), e.g. 1,1/2,3"),
    samples: Optional[int] = typer.Option(None, "--samples", min=0),
    seed: Optional[int] = typer.Option(None, "--seed"),
    unbounded_aux: bool = typer.Option(False, "--unbounded-aux", help="Leave boundary variables unbounded"),
):
    """Derive W, B, F, A, Q and R for a network, then classify R and decide tightness."""
    settings = get_settings()
    spec = load_spec(spec_path)
    report = run_analysis(
        spec,
        b=_b_option(b),
        samples=settings.samples if samples is None else samples,
        seed=settings.seed if seed is None else seed,
        aux_bounded=settings.aux_bounded and not unbounded_aux,
        epsilon=settings.epsilon_value,
        dim_cap=settings.dim_cap,
    )
    if json_output:
        _emit_json(analysis_json(report, settings.dim_cap))
    else:
        print_analysis(Console(), report, settings.dim_cap)


@app.command("classify")
@handle_errors
def classify_command(
    matrix_path: Path = typer.Argument(..., help="Matrix JSON"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Completely-S, P, M and positive-definite tests plus the tightness sign patterns."""
    settings = get_settings()
    R = load_matrix_file(matrix_path).to_matrix()
    report = classify(R, settings.dim_cap)
    if json_output:
        _emit_json(class_report_json(R, report, settings.dim_cap))
    else:
        print_class_report(Console(), R, report, settings.dim_cap)


@app.command()
@handle_errors
def tight(
    matrix_path: Path = typer.Argument(..., help="Matrix JSON (an optional b in the file is used when --b is absent)"),
    b: Optional[str] = typer.Option(None, "--b"),
    samples: Optional[int] = typer.Option(None, "--samples", min=0),
    seed: Optional[int] = typer.Option(None, "--seed"),
    unbounded_aux: bool = typer.Option(False, "--unbounded-aux"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Decide the tight system (R, b), or whether R is a tight matrix when no b is given."""
    settings = get_settings()
    document = load_matrix_file(matrix_path)
    R = document.to_matrix()
    b_vector = _b_option(b) or document.b_vector()
    aux_bounded = settings.aux_bounded and not unbounded_aux

    if b_vector is not None:
        verdict = check_tight_system(R, b_vector, aux_bounded)
        if json_output:
            _emit_json(verdict_json(R, verdict))
        else:
            print_verdict(Console(), R, verdict)
        return

    decision = decide_tight_matrix(
        R,
        sample_count=settings.samples if samples is None else samples,
        seed=settings.seed if seed is None else seed,
        aux_bounded=aux_bounded,
        epsilon=settings.epsilon_value,
        dim_cap=settings.dim_cap,
    )
    if json_output:
        _emit_json(decision_json(R, decision))
    else:
        print_decision(Console(), R, decision)


@app.command()
@handle_errors
def reentrant(
    route: str = typer.Option(..., "--route", help="Station of each visit, e.g. 1,1,2,3,2,3,3"),
    means: str = typer.Option(..., "--means", help="Mean service time of each class"),
    arrival: str = typer.Option(..., "--arrival", help="External arrival rate into class 1"),
    discipline: Discipline = typer.Option(..., "--discipline", case_sensitive=False),
    output: Optional[Path] = typer.Option(None, "-o", "--output", help="Write here instead of stdout"),
):
    """Build the network spec of a reentrant line under FBFS or LBFS."""
    try:
        stations = [int(s) for s in route.split(",")]
    except ValueError:
        raise InputError(f"malformed route {route!r} (expected comma-separated station numbers)")
    spec = reentrant_spec(stations, parse_csv_vector(means), rat_parse(arrival), discipline)
    text = spec_to_json(spec)
    if output is None:
        typer.echo(text)
    else:
        output.write_text(text + "\n", encoding="utf-8")
        logger.info(f"wrote {output}")


@app.command()
@handle_errors
def witness(
    matrix_path: Path = typer.Argument(..., help="Matrix JSON"),
    witness_path: Path = typer.Argument(..., help="Witness JSON: {\"variables\": {key: value}}"),
    b: Optional[str] = typer.Option(None, "--b", help="Defaults to the file's b, then to all ones"),
    unbounded_aux: bool = typer.Option(False, "--unbounded-aux"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Check a non-tightness witness; exit 0 only for a valid non-all-ones solution."""
    settings = get_settings()
    document = load_matrix_file(matrix_path)
    R = document.to_matrix()
    b_vector = _b_option(b) or document.b_vector() or (1,) * R.rows
    system = build_system(R, b_vector, settings.aux_bounded and not unbounded_aux)
    assignment = load_witness(witness_path).to_assignment(R.rows)
    report = verify_assignment(system, assignment)
    if json_output:
        _emit_json(verification_json(report))
    else:
        print_verification(Console(), report)
    if not report.is_nontrivial_witness:
        raise typer.Exit(code=EXIT_INPUT)


if __name__ == "__main__":
    app()
