from functools import wraps

from flask import jsonify, request

from models.genus import Discriminant

MAX_DIGITS = 100
DEFAULT_DIGITS = 28


def discriminant_required(f):
    @wraps(f)
    def decorated(*args, **kwargs):
        raw = request.args.get("D")
        if raw is None:
            return jsonify({"error": "Query parameter D is missing"}), 400
        try:
            value = int(raw)
        except ValueError:
            return jsonify({"error": f"D must be an integer, got {raw!r}"}), 400
        try:
            disc = Discriminant.of(value)
        except ValueError as e:
            return jsonify({"error": str(e)}), 400

        return f(disc, *args, **kwargs)

    return decorated


def read_digits():
    """`digits` query parameter, 1..MAX_DIGITS."""
    raw = request.args.get("digits", str(DEFAULT_DIGITS))
    try:
        digits = int(raw)
    except ValueError:
        raise ValueError(f"digits must be an integer, got {raw!r}") from None
    if not 1 <= digits <= MAX_DIGITS:
        raise ValueError(f"digits must lie in [1, {MAX_DIGITS}]")
    return digits


def read_positive_int(name):
    raw = request.args.get(name)
    if raw is None:
        raise ValueError(f"Query parameter {name} is missing")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{name} must be positive")
    return value
