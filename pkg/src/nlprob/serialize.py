"""JSON documents for spaces, credal sets, variables and sequence models.

Schema::

    {
      "space": <outcome count>,
      "measures": [[w, ...], ...],
      "variables": {"name": [v, ...], ...},
      "joint": "rectangular" | "comonotone-pair"   # models only
    }

Field order is irrelevant on input and numbers are plain decimal literals;
variable listing order (JSON object order) is the coordinate order. The
round trip document -> objects -> document is the identity up to float
repr.
"""

from __future__ import annotations

import json
from typing import Any

from .core import CredalSet, OutcomeSpace, RandomVariable, credal_set_from_rows
from .errors import ConfigValidationError
from .models import COMONOTONE_PAIR, RECTANGULAR, SequenceModel


def credal_document(credal: CredalSet,
                    variables: dict[str, RandomVariable]) -> dict[str, Any]:
    return {
        "space": credal.size,
        "measures": [[float(w) for w in m.weights] for m in credal.measures],
        "variables": {name: [float(v) for v in var.values]
                      for name, var in variables.items()},
    }


def parse_document(doc: dict[str, Any]) -> tuple[OutcomeSpace, CredalSet,
                                                 dict[str, RandomVariable]]:
    if not isinstance(doc, dict):
        raise ConfigValidationError("document must be a JSON object")
    for field in ("space", "measures"):
        if field not in doc:
            raise ConfigValidationError(f"document misses field '{field}'")
    size = doc["space"]
    if not isinstance(size, int) or size < 1:
        raise ConfigValidationError(f"'space' must be a positive integer, got {size!r}")
    rows = doc["measures"]
    if not isinstance(rows, list) or not rows:
        raise ConfigValidationError("'measures' must be a nonempty list of rows")
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            raise ConfigValidationError(
                f"'measures[{k}]' must be a list of {size} weights")
    credal = credal_set_from_rows(rows)
    variables: dict[str, RandomVariable] = {}
    for name, values in (doc.get("variables") or {}).items():
        if not isinstance(values, list) or len(values) != size:
            raise ConfigValidationError(
                f"'variables[{name!r}]' must be a list of {size} values")
        variables[name] = RandomVariable(values)
    return credal.space, credal, variables


def sequence_model_document(model: SequenceModel,
                            names: list[str] | None = None) -> dict[str, Any]:
    if names is None:
        names = [f"X{i + 1}" for i in range(len(model.variables))]
    doc = credal_document(model.credal,
                          dict(zip(names, model.variables)))
    doc["joint"] = model.joint
    return doc


def sequence_model_from_document(doc: dict[str, Any]) -> SequenceModel:
    _, credal, variables = parse_document(doc)
    if not variables:
        raise ConfigValidationError("model document needs at least one variable")
    joint = doc.get("joint", RECTANGULAR)
    if joint not in (RECTANGULAR, COMONOTONE_PAIR):
        raise ConfigValidationError(f"unknown joint semantics {joint!r}")
    return SequenceModel(credal, tuple(variables.values()), joint)


def dumps_document(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)


def loads_document(text: str) -> dict[str, Any]:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigValidationError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
