"""OutputRecord: the one result shape shared by the CLI and the HTTP API."""
import json
from dataclasses import asdict, dataclass, field

FORMATS = ("human", "json", "tsv")
TSV_HEADER = ("command", "inputs", "result", "error_bound", "elapsed_ms")


@dataclass
class OutputRecord:
    command: str
    result: str
    error_bound: str = "0"
    inputs: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    def to_dict(self):
        return asdict(self)


def exact(q):
    """Exact rationals are always written p/q."""
    return f"{q.numerator}/{q.denominator}"


def decimal_record(command, inputs, value, elapsed_ms=0):
    return OutputRecord(
        command=command,
        result=value.to_decimal(),
        error_bound=value.certified_bound(),
        inputs={**inputs, "digits": value.digits},
        elapsed_ms=elapsed_ms,
    )


def report_record(command, report, elapsed_ms=0):
    inputs = {"D": report.D, **report.inputs, "terms_used": report.terms_used}
    return decimal_record(command, inputs, report.value, elapsed_ms)


def _inputs_text(inputs):
    return ",".join(f"{key}={inputs[key]}" for key in inputs)


def render(records, fmt="human"):
    if fmt == "json":
        return json.dumps([r.to_dict() for r in records], indent=2, sort_keys=True)
    if fmt == "tsv":
        lines = ["\t".join(TSV_HEADER)]
        for r in records:
            lines.append("\t".join([r.command, _inputs_text(r.inputs), r.result, r.error_bound, str(r.elapsed_ms)]))
        return "\n".join(lines)
    if fmt != "human":
        raise ValueError(f"Unknown format {fmt!r}; choose one of {', '.join(FORMATS)}.")
    if not records:
        return "(no results)"
    width = max(len(r.result) for r in records)
    lines = []
    for r in records:
        bound = f"  ± {r.error_bound}" if r.error_bound != "0" else ""
        lines.append(f"{r.command:<10} {r.result:>{width}}{bound}  [{_inputs_text(r.inputs)}]  {r.elapsed_ms} ms")
    return "\n".join(lines)
