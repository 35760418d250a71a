"""JSON helpers shared by the domain, polynomial and report encoders."""

import json
import math

import numpy as np

from .errors import InputError


def complex_from_json(value):
    """Accept ``[re, im]``, ``{"re":..,"im":..}`` or a plain real number."""
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise InputError(f"cannot read a complex number from {value!r}")


def complex_to_json(z):
    z = complex(z)
    return [_clean(z.real), _clean(z.imag)]


def vector_from_json(values):
    return np.array([complex_from_json(v) for v in values], dtype=complex)


def vector_to_json(vec):
    return [complex_to_json(v) for v in np.asarray(vec).ravel()]


def matrix_from_json(rows):
    return np.array([[complex_from_json(v) for v in row] for row in rows], dtype=complex)


def matrix_to_json(mat):
    return [[complex_to_json(v) for v in row] for row in np.asarray(mat)]


def _clean(x):
    x = float(x)
    if x == 0.0:
        return 0.0  # drop negative zero so output is byte-stable
    if not math.isfinite(x):
        return repr(x)
    return x


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays and complex numbers."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _clean(obj)
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc
