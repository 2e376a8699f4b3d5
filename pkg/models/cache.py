"""SQLite cache of computed constants, keyed by (kind, D, digits)."""
import json
import logging

from mpmath import mp, mpf

from init_db import init_db
from models.constants import ConstantKind, ConstantReport
from models.db import cache_path, connect
from models.genus import Discriminant
from models.lfun import BigReal, serialized

logger = logging.getLogger(__name__)


def _encode(x):
    man, exp = x.man_exp
    return f"{man} {exp}"


@serialized
def _decode(text):
    man, exp = (int(part) for part in text.split())
    with mp.workprec(max(53, abs(man).bit_length() + 1)):
        return mpf((man, exp))


class ConstantStore:
    def __init__(self, db_name):
        self.connection = connect(db_name)
        init_db(self.connection)

    @classmethod
    def from_env(cls):
        path = cache_path()
        return cls(path) if path else None

    def get(self, kind, D, digits):
        kind = ConstantKind(kind)
        row = self.connection.execute(
            "SELECT * FROM constants WHERE kind = ? AND D = ? AND digits = ?",
            (kind.value, int(D), digits),
        ).fetchone()
        if row is None:
            return None
        value = BigReal(_decode(row["value"]), row["digits"], _decode(row["error_bound"]))
        return ConstantReport(
            discriminant=Discriminant.of(row["D"]),
            value=value,
            kind=kind,
            terms_used=row["terms_used"],
            inputs=json.loads(row["inputs"]),
        )

    def put(self, report):
        with self.connection:
            self.connection.execute(
                """
                INSERT INTO constants (kind, D, digits, value, error_bound, terms_used, inputs)
                VALUES (?, ?, ?, ?, ?, ?, ?)
                ON CONFLICT(kind, D, digits) DO UPDATE SET
                    value = excluded.value,
                    error_bound = excluded.error_bound,
                    terms_used = excluded.terms_used,
                    inputs = excluded.inputs
                """,
                (
                    report.kind.value,
                    report.D,
                    report.digits,
                    _encode(report.value.value),
                    _encode(report.value.error_bound),
                    report.terms_used,
                    json.dumps(report.inputs, sort_keys=True),
                ),
            )

    def cached_report(self, kind, D, digits, compute):
        report = self.get(kind, D, digits)
        if report is not None:
            logger.debug("Cache hit %s D=%s digits=%s", kind, D, digits)
            return report
        report = compute()
        self.put(report)
        return report

    def close(self):
        self.connection.close()
