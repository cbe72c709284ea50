"""JSON documents for instances, marginals, results and reports.

Instance documents carry ``candidates``, ``groups``, ``values`` (n rows of m
numbers) and ``k``; finite-instance documents carry ``solutions``, ``groups``
and ``utilities``.  ``serialize`` is canonical: sorted keys, two-space indent,
floats written with at most 12 significant digits.
"""

from __future__ import annotations

import json
import math
from numbers import Real

import numpy as np

from .errors import (
    CardinalityError,
    DimensionError,
    DocumentError,
    RangeError,
    SchemaError,
)
from .model import FiniteInstance, Instance, MarginalVector

SIG_DIGITS = 12


def _load(document):
    if isinstance(document, dict):
        return document
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SchemaError("top level must be an object")
    return data


def _ids(data: dict, key: str) -> list:
    if key not in data:
        raise SchemaError(f"missing field '{key}'")
    ids = data[key]
    if not isinstance(ids, list) or not all(isinstance(i, str) for i in ids):
        raise SchemaError(f"field '{key}' must be a list of strings")
    return ids


def _matrix(data: dict, key: str, rows: int, cols: int, row_name: str) -> np.ndarray:
    if key not in data:
        raise SchemaError(f"missing field '{key}'")
    mat = data[key]
    if not isinstance(mat, list):
        raise SchemaError(f"field '{key}' must be a list of rows")
    if len(mat) != rows:
        raise DimensionError(f"'{key}' has {len(mat)} rows but there are {rows} {row_name}")
    for r, row in enumerate(mat):
        if not isinstance(row, list):
            raise SchemaError(f"{key}[{r}] must be a list")
        if len(row) != cols:
            raise DimensionError(f"{key}[{r}] has {len(row)} entries, expected {cols}")
        for c, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, Real) or not math.isfinite(v):
                raise SchemaError(f"{key}[{r}][{c}] is not a finite number: {v!r}")
            if not 0.0 <= v <= 1.0:
                raise RangeError(f"{key}[{r}][{c}] = {v!r} outside [0, 1]")
    return np.array(mat, dtype=float).reshape(rows, cols)


def parse_instance(document) -> Instance | FiniteInstance:
    data = _load(document)
    if "utilities" in data or "solutions" in data:
        sols = _ids(data, "solutions")
        groups = _ids(data, "groups")
        util = _matrix(data, "utilities", len(sols), len(groups), "solutions")
        return FiniteInstance(sols, groups, util)
    cands = _ids(data, "candidates")
    groups = _ids(data, "groups")
    values = _matrix(data, "values", len(cands), len(groups), "candidates")
    if "k" not in data:
        raise SchemaError("missing field 'k'")
    k = data["k"]
    if isinstance(k, bool) or not isinstance(k, int):
        raise SchemaError(f"field 'k' must be an integer, got {k!r}")
    if not 1 <= k <= len(cands):
        raise CardinalityError(f"k = {k} outside [1, {len(cands)}]")
    return Instance(cands, groups, values, k)


def parse_marginals(document) -> MarginalVector:
    data = _load(document)
    if "x" not in data:
        raise SchemaError("missing field 'x'")
    x = data["x"]
    if not isinstance(x, list) or not all(
        isinstance(v, Real) and not isinstance(v, bool) for v in x
    ):
        raise SchemaError("field 'x' must be a list of numbers")
    for i, v in enumerate(x):
        if not 0.0 <= v <= 1.0:
            raise RangeError(f"x[{i}] = {v!r} outside [0, 1]")
    k = data.get("k", sum(x))
    return MarginalVector(np.array(x, dtype=float), k)


def _round(value):
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not math.isfinite(v):
            return None
        r = float(f"{v:.{SIG_DIGITS}g}")
        return 0.0 if r == 0 else r
    if isinstance(value, dict):
        return {str(k): _round(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_round(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(data: dict) -> str:
    return json.dumps(_round(data), sort_keys=True, indent=2) + "\n"


def to_document(obj) -> dict:
    if isinstance(obj, Instance):
        return {
            "candidates": list(obj.candidate_ids),
            "groups": list(obj.group_ids),
            "values": obj.values.tolist(),
            "k": obj.k,
        }
    if isinstance(obj, FiniteInstance):
        return {
            "solutions": list(obj.solution_ids),
            "groups": list(obj.group_ids),
            "utilities": obj.utilities.tolist(),
        }
    if isinstance(obj, MarginalVector):
        return {"x": obj.x.tolist(), "k": obj.k}
    raise TypeError(f"no document form for {type(obj).__name__}")


def serialize(obj) -> str:
    return dumps(to_document(obj))


def canonical(document) -> str:
    """Canonical text of a document, as ``serialize(parse_instance(document))`` would produce."""
    data = _load(document)
    if "utilities" in data or "solutions" in data:
        out = {key: data[key] for key in ("solutions", "groups")}
        out["utilities"] = [[float(v) for v in row] for row in data["utilities"]]
    else:
        out = {key: data[key] for key in ("candidates", "groups", "k")}
        out["values"] = [[float(v) for v in row] for row in data["values"]]
    return dumps(out)
