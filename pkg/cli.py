"""Command-line surface.

    python cli.py erdos -D -3 --digits 28
    python cli.py table shanks-schmid --format tsv
    python cli.py search --below 1

The same group is mounted on the Flask app, so `flask --app app lattice ...`
runs the same commands.
"""
import logging
import time
from functools import wraps

import click

from models.cache import ConstantStore
from models.constants import ERDOS_METHODS, SHANKS_SCHMID_N, ConstantKind, bernays_C, compute_constant, erdos_number
from models.errors import PrecisionError, ResourceLimitError
from models.extremal import search_below
from models.forms import QuadForm, population_count, reduced_forms
from models.genus import Discriminant, g_count, v_closed, v_series
from models.output import FORMATS, OutputRecord, decimal_record, exact, render, report_record

logger = logging.getLogger(__name__)

MAX_DIGITS = 100
EXIT_INVALID = 2
EXIT_PRECISION = 3
EXIT_RESOURCE = 4


def domain_errors(f):
    @wraps(f)
    def decorated(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except PrecisionError as e:
            _fail(e, EXIT_PRECISION)
        except ResourceLimitError as e:
            _fail(e, EXIT_RESOURCE)
        except ValueError as e:
            _fail(e, EXIT_INVALID)

    return decorated


def _fail(error, code):
    click.echo(f"Error: {error}", err=True)
    click.get_current_context().exit(code)


def output_options(f):
    f = click.option("--deterministic", is_flag=True, help="Report elapsed_ms as 0.")(f)
    f = click.option("--format", "fmt", type=click.Choice(FORMATS), default="human", show_default=True)(f)
    return f


discriminant_option = click.option("-D", "--discriminant", type=int, required=True, help="Negative discriminant D.")
digits_option = click.option(
    "--digits", type=click.IntRange(1, MAX_DIGITS), default=28, show_default=True, help="Certified decimal places."
)


def _elapsed(started):
    return int((time.perf_counter() - started) * 1000)


def _emit(records, fmt, deterministic):
    if deterministic:
        for record in records:
            record.elapsed_ms = 0
    click.echo(render(records, fmt))


def _cached(store, kind, D, digits, compute):
    if store is None:
        return compute()
    return store.cached_report(kind, D, digits, compute)


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging.")
@click.pass_context
def cli(ctx, verbose):
    """Erdős numbers and population constants of 2D arithmetic lattices."""
    level = logging.WARNING if not verbose else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    store = ConstantStore.from_env()
    if store is not None:
        ctx.call_on_close(store.close)
    ctx.obj = store


@cli.command()
@discriminant_option
@digits_option
@click.option("--method", type=click.Choice(ERDOS_METHODS), default="auto", show_default=True)
@output_options
@click.pass_obj
@domain_errors
def erdos(store, discriminant, digits, method, fmt, deterministic):
    """E(D), the normalised distance density of the lattice of discriminant D."""
    started = time.perf_counter()
    disc = Discriminant.of(discriminant)
    if method == "auto":
        report = _cached(store, ConstantKind.ERDOS, disc.D, digits, lambda: erdos_number(disc, digits))
    else:
        report = erdos_number(disc, digits, method)
    _emit([report_record("erdos", report, _elapsed(started))], fmt, deterministic)


def _constant_command(kind, summary):
    @discriminant_option
    @digits_option
    @output_options
    @click.pass_obj
    @domain_errors
    def command(store, discriminant, digits, fmt, deterministic):
        started = time.perf_counter()
        disc = Discriminant.of(discriminant)
        report = _cached(store, kind, disc.D, digits, lambda: compute_constant(kind, disc, digits))
        _emit([report_record(kind.value, report, _elapsed(started))], fmt, deterministic)

    command.__doc__ = summary
    return cli.command(kind.value)(command)


bernays = _constant_command(ConstantKind.BERNAYS, "C(D), the constant of B_f(x) ~ C x / sqrt(log x).")
james = _constant_command(ConstantKind.JAMES, "J(D), James' normalisation of the population constant.")
pall = _constant_command(ConstantKind.PALL, "P(D), Pall's constant (experimental for non-fundamental D).")


@cli.command()
@click.argument("name", type=click.Choice(["shanks-schmid"]))
@digits_option
@output_options
@click.pass_obj
@domain_errors
def table(store, name, digits, fmt, deterministic):
    """The b_n = C(X^2 + n Y^2) table."""
    records = []
    for n in SHANKS_SCHMID_N:
        started = time.perf_counter()
        report = _cached(store, ConstantKind.BERNAYS, -4 * n, digits, lambda n=n: bernays_C(-4 * n, digits))
        record = report_record("table", report, _elapsed(started))
        record.inputs = {"n": n, **record.inputs}
        records.append(record)
    _emit(records, fmt, deterministic)


@cli.command()
@click.option("--below", required=True, help="Threshold r in (0, 3/2], e.g. 1, 0.6 or 3/5.")
@digits_option
@click.option("--verify-cutoff", is_flag=True, help="Also rescan D0 <= |D| < 2 D0.")
@output_options
@click.pass_obj
@domain_errors
def search(store, below, digits, verify_cutoff, fmt, deterministic):
    """Every discriminant D with E(D) below the threshold."""
    started = time.perf_counter()
    result = search_below(below, digits, verify=verify_cutoff)
    elapsed = _elapsed(started)
    records = [
        decimal_record("search", {"D": s.D, "below": exact(result.r), "D0": result.cutoff_D0}, s.erdos, elapsed)
        for s in result.survivors
    ]
    _emit(records, fmt, deterministic)


@cli.command()
@discriminant_option
@click.option("--series-bound", type=click.IntRange(min=1), default=None, help="Also bracket the n | D^inf series.")
@output_options
@domain_errors
def vd(discriminant, series_bound, fmt, deterministic):
    """v(D) as an exact rational."""
    started = time.perf_counter()
    disc = Discriminant.of(discriminant)
    inputs = {"D": disc.D, "t": disc.t, "f": disc.f}
    records = [OutputRecord(command="vd", result=exact(v_closed(disc)), inputs=inputs, elapsed_ms=_elapsed(started))]
    if series_bound is not None:
        bracket = v_series(disc, series_bound)
        records.append(
            OutputRecord(
                command="vd-series",
                result=exact(bracket.lower),
                error_bound=exact(bracket.tail_bound),
                inputs={**inputs, "bound": series_bound},
                elapsed_ms=_elapsed(started),
            )
        )
    _emit(records, fmt, deterministic)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@discriminant_option
@output_options
@domain_errors
def genus(n, discriminant, fmt, deterministic):
    """g(n, D), the number of genera of discriminant D representing n."""
    started = time.perf_counter()
    disc = Discriminant.of(discriminant)
    count = g_count(n, disc)
    record = OutputRecord(command="genus", result=str(count), inputs={"n": n, "D": disc.D, "t": disc.t},
                          elapsed_ms=_elapsed(started))
    _emit([record], fmt, deterministic)


@cli.command()
@click.option("--form", "form_text", required=True, help="Coefficients a,b,c of a x^2 + b xy + c y^2.")
@click.option("--x", "x", type=int, required=True)
@output_options
@domain_errors
def population(form_text, x, fmt, deterministic):
    """B_f(x), the number of distinct n <= x represented by the form."""
    started = time.perf_counter()
    form = QuadForm.parse(form_text)
    count = population_count(form, x)
    record = OutputRecord(command="population", result=str(count), inputs={"form": str(form), "x": x},
                          elapsed_ms=_elapsed(started))
    _emit([record], fmt, deterministic)


@cli.command()
@discriminant_option
@output_options
@domain_errors
def forms(discriminant, fmt, deterministic):
    """The reduced primitive forms of discriminant D."""
    started = time.perf_counter()
    classes = reduced_forms(discriminant)
    record = OutputRecord(
        command="forms",
        result=" ".join(str(f) for f in classes),
        inputs={"D": discriminant, "h": classes.h},
        elapsed_ms=_elapsed(started),
    )
    _emit([record], fmt, deterministic)


if __name__ == "__main__":
    cli()
