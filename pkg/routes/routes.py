import time

from flask import Blueprint, current_app, jsonify, request

from extensions import SEARCH_LIMIT, limiter
from middleware.validation import discriminant_required, read_digits, read_positive_int
from models.cache import ConstantStore
from models.constants import ConstantKind, compute_constant, shanks_schmid_table
from models.errors import PrecisionError, ResourceLimitError
from models.extremal import search_below
from models.forms import QuadForm, population_count, reduced_forms
from models.genus import g_count, v_closed, v_series
from models.output import OutputRecord, decimal_record, exact, report_record

constants_bp = Blueprint("constants", __name__, url_prefix="/constants")
genus_bp = Blueprint("genus", __name__, url_prefix="/genus")
forms_bp = Blueprint("forms", __name__, url_prefix="/forms")
search_bp = Blueprint("search", __name__)


def _elapsed(started):
    return int((time.perf_counter() - started) * 1000)


def _error_response(e):
    if isinstance(e, PrecisionError):
        return jsonify({"error": str(e)}), 422
    if isinstance(e, ResourceLimitError):
        return jsonify({"error": str(e)}), 413
    if isinstance(e, ValueError):
        return jsonify({"error": str(e)}), 400
    current_app.logger.exception("Request failed")
    return jsonify({"error": "Something went wrong", "message": str(e)}), 500


@constants_bp.route("/table", methods=["GET"])
def constants_table():
    """
    Shanks-Schmid table
    ---
    description: b_n = C(X^2 + nY^2) for n in 1..14, 16, 20, 24, 27, 64, 96, 256.
    parameters:
      - name: digits
        in: query
        type: integer
        required: false
        description: Certified decimal places (1-100, default 28).
    responses:
      200:
        description: One OutputRecord per row.
        schema:
          type: array
          items:
            $ref: '#/definitions/OutputRecord'
      400:
        description: Invalid digits.
    """
    try:
        digits = read_digits()
        started = time.perf_counter()
        rows = []
        for n, report in shanks_schmid_table(digits):
            record = report_record("table", report, _elapsed(started))
            record.inputs = {"n": n, **record.inputs}
            rows.append(record.to_dict())
        return jsonify(rows), 200
    except Exception as e:
        return _error_response(e)


@constants_bp.route("/<kind>", methods=["GET"])
@discriminant_required
def constant(disc, kind):
    """
    Population constant of a discriminant
    ---
    description: E(D), C(D), J(D) or P(D) to a certified number of decimal places.
    parameters:
      - name: kind
        in: path
        type: string
        enum: [erdos, bernays, james, pall]
        required: true
      - name: D
        in: query
        type: integer
        required: true
        description: Negative discriminant, D = 0 or 1 mod 4.
      - name: digits
        in: query
        type: integer
        required: false
        description: Certified decimal places (1-100, default 28).
    definitions:
      OutputRecord:
        type: object
        properties:
          command:
            type: string
          inputs:
            type: object
          result:
            type: string
            description: Fixed-point decimal or exact rational p/q.
          error_bound:
            type: string
          elapsed_ms:
            type: integer
    responses:
      200:
        description: The constant.
        schema:
          $ref: '#/definitions/OutputRecord'
      400:
        description: D is not a negative discriminant, or kind/digits invalid.
      422:
        description: The value could not be certified.
      500:
        description: Internal Server Error if something goes wrong.
    """
    store = None
    try:
        kind = ConstantKind(kind)
        digits = read_digits()
        started = time.perf_counter()
        store = ConstantStore.from_env()
        if store is None:
            report = compute_constant(kind, disc, digits)
        else:
            report = store.cached_report(kind, disc.D, digits, lambda: compute_constant(kind, disc, digits))
        return jsonify(report_record(kind.value, report, _elapsed(started)).to_dict()), 200
    except Exception as e:
        return _error_response(e)
    finally:
        if store is not None:
            store.close()


@genus_bp.route("/v", methods=["GET"])
@discriminant_required
def genus_v(disc):
    """
    v(D)
    ---
    description: The exact rational v(D) = sum over n | D^inf of g(n, D)/n, optionally with a truncated-series bracket.
    parameters:
      - name: D
        in: query
        type: integer
        required: true
      - name: series_bound
        in: query
        type: integer
        required: false
        description: Also return the partial sum over n <= series_bound and its tail bound.
    responses:
      200:
        description: One or two OutputRecords.
      400:
        description: Invalid D or series_bound.
    """
    try:
        started = time.perf_counter()
        inputs = {"D": disc.D, "t": disc.t, "f": disc.f}
        records = [OutputRecord("vd", exact(v_closed(disc)), inputs=inputs, elapsed_ms=_elapsed(started))]
        if "series_bound" in request.args:
            bound = read_positive_int("series_bound")
            bracket = v_series(disc, bound)
            records.append(
                OutputRecord(
                    "vd-series",
                    exact(bracket.lower),
                    error_bound=exact(bracket.tail_bound),
                    inputs={**inputs, "bound": bound},
                    elapsed_ms=_elapsed(started),
                )
            )
        return jsonify([r.to_dict() for r in records]), 200
    except Exception as e:
        return _error_response(e)


@genus_bp.route("/count", methods=["GET"])
@discriminant_required
def genus_count(disc):
    """
    g(n, D)
    ---
    description: Number of genera of discriminant D that represent n.
    parameters:
      - name: n
        in: query
        type: integer
        required: true
      - name: D
        in: query
        type: integer
        required: true
    responses:
      200:
        description: The count.
      400:
        description: Invalid n or D.
    """
    try:
        n = read_positive_int("n")
        started = time.perf_counter()
        count = g_count(n, disc)
        record = OutputRecord("genus", str(count), inputs={"n": n, "D": disc.D, "t": disc.t},
                              elapsed_ms=_elapsed(started))
        return jsonify(record.to_dict()), 200
    except Exception as e:
        return _error_response(e)


@forms_bp.route("/reduced", methods=["GET"])
@discriminant_required
def forms_reduced(disc):
    """
    Reduced forms
    ---
    description: One reduced primitive form per class; their number is h(D).
    parameters:
      - name: D
        in: query
        type: integer
        required: true
    responses:
      200:
        description: One OutputRecord; the result lists the forms as [a,b,c], inputs carry h.
        schema:
          $ref: '#/definitions/OutputRecord'
      400:
        description: Invalid D.
    """
    try:
        started = time.perf_counter()
        classes = reduced_forms(disc)
        record = OutputRecord("forms", " ".join(str(f) for f in classes), inputs={"D": disc.D, "h": classes.h},
                              elapsed_ms=_elapsed(started))
        return jsonify(record.to_dict()), 200
    except Exception as e:
        return _error_response(e)


@forms_bp.route("/population", methods=["GET"])
def forms_population():
    """
    Population count B_f(x)
    ---
    description: Number of distinct integers 1..x represented by the form.
    parameters:
      - name: form
        in: query
        type: string
        required: true
        description: Coefficients "a,b,c".
      - name: x
        in: query
        type: integer
        required: true
    responses:
      200:
        description: The count.
      400:
        description: Invalid form or x.
      413:
        description: x is above the sieve limit.
    """
    try:
        form = QuadForm.parse(request.args.get("form", ""))
        x = read_positive_int("x")
        started = time.perf_counter()
        count = population_count(form, x)
        record = OutputRecord("population", str(count), inputs={"form": str(form), "x": x},
                              elapsed_ms=_elapsed(started))
        return jsonify(record.to_dict()), 200
    except Exception as e:
        return _error_response(e)


@search_bp.route("/search", methods=["GET"])
@limiter.limit(SEARCH_LIMIT)
def search():
    """
    Discriminants with small Erdős number
    ---
    description: Every D with E(D) < below, each value certified to `digits` places.
    parameters:
      - name: below
        in: query
        type: string
        required: true
        description: Threshold r in (0, 3/2], e.g. 1, 0.6 or 3/5.
      - name: digits
        in: query
        type: integer
        required: false
    responses:
      200:
        description: One OutputRecord per discriminant, ordered by E(D).
      400:
        description: Invalid threshold.
      422:
        description: A borderline value could not be decided.
      429:
        description: Rate limit exceeded.
    """
    try:
        below = request.args.get("below")
        if below is None:
            raise ValueError("Query parameter below is missing")
        digits = read_digits()
        started = time.perf_counter()
        result = search_below(below, digits)
        elapsed = _elapsed(started)
        rows = [
            decimal_record("search", {"D": s.D, "below": exact(result.r), "D0": result.cutoff_D0}, s.erdos, elapsed)
            .to_dict()
            for s in result.survivors
        ]
        return jsonify(rows), 200
    except Exception as e:
        return _error_response(e)
