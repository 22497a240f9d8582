"""Reader for the sweep CSV interface.

The schema is fixed by the producer: one header line, then one row per
(scenario, method) with 9-significant-digit floats and an empty
rate_analytical field for methods that have no closed form. All failures
raise SchemaError naming the offending line.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

CSV_HEADER = ("scenario_id,N,L,M,xi,method,rate_analytical,rate_mc,"
              "mc_std_error,trials,seed")
COLUMNS = tuple(CSV_HEADER.split(","))
METHODS = frozenset({"statistical", "random", "siso_optimal", "grid_oracle"})


class SchemaError(ValueError):
    """CSV does not conform to the sweep schema; message carries the line."""


@dataclass(frozen=True)
class RateRow:
    scenario_id: str
    N: int
    L: int
    M: int
    xi: float
    method: str
    rate_analytical: float | None  # absent for designs with no closed form
    rate_mc: float
    mc_std_error: float
    trials: int
    seed: int

    @property
    def total_elements(self) -> int:
        return self.N * self.L


def _int_field(raw: str, name: str, line: int, minimum: int) -> int:
    try:
        val = int(raw)
    except ValueError:
        raise SchemaError(f"line {line}: {name} must be an integer, "
                          f"got {raw!r}") from None
    if val < minimum:
        raise SchemaError(f"line {line}: {name} must be >= {minimum}, "
                          f"got {val}")
    return val


def _float_field(raw: str, name: str, line: int, minimum: float) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise SchemaError(f"line {line}: {name} must be a number, "
                          f"got {raw!r}") from None
    if not val >= minimum:  # also rejects nan
        raise SchemaError(f"line {line}: {name} must be >= {minimum}, "
                          f"got {raw}")
    return val


def _parse_row(fields: list[str], line: int) -> RateRow:
    if len(fields) != len(COLUMNS):
        raise SchemaError(f"line {line}: expected {len(COLUMNS)} fields, "
                          f"got {len(fields)}")
    (scenario_id, n_raw, l_raw, m_raw, xi_raw, method, ana_raw, mc_raw,
     se_raw, trials_raw, seed_raw) = fields
    if method not in METHODS:
        raise SchemaError(f"line {line}: unknown method {method!r}")
    analytic = None
    if ana_raw != "":
        analytic = _float_field(ana_raw, "rate_analytical", line, 0.0)
    return RateRow(
        scenario_id=scenario_id,
        N=_int_field(n_raw, "N", line, 1),
        L=_int_field(l_raw, "L", line, 1),
        M=_int_field(m_raw, "M", line, 1),
        xi=_float_field(xi_raw, "xi", line, 0.0),
        method=method,
        rate_analytical=analytic,
        rate_mc=_float_field(mc_raw, "rate_mc", line, 0.0),
        mc_std_error=_float_field(se_raw, "mc_std_error", line, 0.0),
        trials=_int_field(trials_raw, "trials", line, 1),
        seed=_int_field(seed_raw, "seed", line, 0),
    )


def parse_csv_text(text: str) -> list[RateRow]:
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("line 1: empty file, expected header "
                          f"{CSV_HEADER!r}") from None
    if header != list(COLUMNS):
        raise SchemaError(f"line 1: header mismatch, expected {CSV_HEADER!r}")
    rows = []
    for i, fields in enumerate(reader, start=2):
        if not fields:  # blank line (e.g. trailing newline artifacts)
            continue
        rows.append(_parse_row(fields, i))
    return rows


def load_rows(path) -> list[RateRow]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input CSV not found: {path}")
    return parse_csv_text(path.read_text(encoding="utf-8"))
