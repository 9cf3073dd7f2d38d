"""JSON (de)serialization of systems, spectra and matrices."""

import json
from fractions import Fraction
from importlib import resources

from magtor import exact
from magtor.core import MetricGram, SymplecticGram, TorusMagneticSystem, check_system
from magtor.errors import SchemaError
from magtor.spectra import LandauSpectrum


def load_json(path):
    """Read a JSON file; decode errors become SchemaError with line and column."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise SchemaError(f"{path}: {e.strerror}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: parse error at line {e.lineno} column {e.colno}: {e.msg}") from e


def _matrix(data, field, size, integer):
    if field not in data:
        raise SchemaError(f"missing field '{field}'")
    rows = data[field]
    if not isinstance(rows, list) or len(rows) != size:
        raise SchemaError(f"'{field}' must be a list of {size} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            raise SchemaError(f"'{field}[{i}]' must have {size} entries")
        parsed = []
        for j, v in enumerate(row):
            where = f"'{field}[{i}][{j}]'"
            if isinstance(v, bool):
                raise SchemaError(f"{where}: boolean is not a number")
            if integer:
                if not isinstance(v, int):
                    raise SchemaError(f"{where}: integer required, got {v!r}")
                parsed.append(v)
            else:
                if isinstance(v, float):
                    raise SchemaError(f"{where}: use an integer or a 'p/q' string, got {v!r}")
                try:
                    parsed.append(exact.parse_rational(v))
                except (TypeError, ValueError, ZeroDivisionError) as e:
                    raise SchemaError(f"{where}: not a rational: {v!r}") from e
        out.append(parsed)
    return out


def system_from_dict(data, validate=True):
    if not isinstance(data, dict):
        raise SchemaError("system must be a JSON object")
    if "m" not in data:
        raise SchemaError("missing field 'm'")
    m = data["m"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise SchemaError(f"'m' must be a positive integer, got {m!r}")
    metric = _matrix(data, "metric", 2 * m, integer=False)
    magnetic = _matrix(data, "magnetic", 2 * m, integer=True)
    sys = TorusMagneticSystem(m, MetricGram.from_rows(metric), SymplecticGram.from_rows(magnetic))
    return check_system(sys) if validate else sys


def system_to_dict(sys):
    return {
        "m": sys.m,
        "metric": [[exact.format_rational(x) for x in row] for row in sys.metric.entries],
        "magnetic": [list(row) for row in sys.magnetic.entries],
    }


def parse_system(path, validate=True):
    """Load and (by default) validate a system file."""
    return system_from_dict(load_json(path), validate=validate)


def parse_matrix(data, field="matrix"):
    """A rational matrix given either bare or as {"matrix": [[...]]}."""
    rows = data[field] if isinstance(data, dict) else data
    if not isinstance(rows, list) or not rows:
        raise SchemaError(f"'{field}' must be a non-empty list of rows")
    return _matrix({field: rows}, field, len(rows), integer=False)


def parse_spectrum(data):
    try:
        return LandauSpectrum.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"malformed spectrum: {e}") from e


def to_jsonable(x):
    if isinstance(x, Fraction):
        return exact.format_rational(x)
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def dumps(report):
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True)


def bundled(name):
    """Path-like handle of a bundled data file."""
    return resources.files("magtor") / "data" / name


def load_bundled_system(name):
    return system_from_dict(json.loads(bundled(name).read_text()))
