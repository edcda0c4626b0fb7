"""Sequence models and exact joint upper/lower expectations.

A sequence model couples one credal set with a finite list of coordinate
variables and a joint semantics:

``rectangular``
    Coordinate i is sampled on a fresh copy of the space; an adversary picks
    one credal measure *per coordinate*. The joint upper expectation of
    F(X_1, ..., X_n) is the maximum over all |P|^n per-coordinate measure
    assignments of the product-measure expectation. The variable list cycles
    (coordinate i uses ``variables[(i-1) % len]``), so a single-variable model
    describes an identically-distributed sequence of any length.

``comonotone-pair``
    Exactly two variables read off the *same* outcome: the adversary picks
    one measure j and the joint expectation of F(X, Y) is
    E_j[F(X(w), Y(w))], maximized over j. This is the maximally coupled
    two-coordinate model; it is where dependence checkers find structure.

Everything is computed by exact enumeration, so the coordinate count is
capped (default 6) and exceeding it raises ``OracleTooLargeError`` instead of
silently grinding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import CredalSet, RandomVariable
from .errors import (
    DimensionMismatchError,
    EmptyVectorError,
    IndexOutOfRangeError,
    OracleTooLargeError,
)

RECTANGULAR = "rectangular"
COMONOTONE_PAIR = "comonotone-pair"
DEFAULT_ORACLE_CAP = 6

# hard ceiling on enumeration cells regardless of the caller-supplied cap
_MAX_CELLS = 4_000_000


@dataclass(frozen=True, eq=False)
class SequenceModel:
    credal: CredalSet
    variables: tuple[RandomVariable, ...]
    joint: str = RECTANGULAR

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if not variables:
            raise EmptyVectorError("sequence model needs at least one variable")
        for k, v in enumerate(variables):
            if v.size != self.credal.size:
                raise DimensionMismatchError(
                    f"variable {k} has size {v.size}, space has {self.credal.size}"
                )
        if self.joint not in (RECTANGULAR, COMONOTONE_PAIR):
            raise ValueError(f"unknown joint semantics {self.joint!r}")
        if self.joint == COMONOTONE_PAIR and len(variables) != 2:
            raise DimensionMismatchError(
                f"comonotone-pair model needs exactly 2 variables, got {len(variables)}"
            )

    def variable_at(self, i: int) -> RandomVariable:
        """Coordinate variable for 1-based index i (rectangular models cycle)."""
        if i < 1:
            raise IndexOutOfRangeError(f"coordinate index {i} must be >= 1")
        if self.joint == COMONOTONE_PAIR:
            if i > 2:
                raise IndexOutOfRangeError(
                    f"comonotone-pair model has 2 coordinates, asked for {i}")
            return self.variables[i - 1]
        return self.variables[(i - 1) % len(self.variables)]

    def coordinate_values(self, n: int) -> np.ndarray:
        """Value vectors for coordinates 1..n stacked as rows, shape (n, size)."""
        return np.vstack([self.variable_at(i).values for i in range(1, n + 1)])


def _check_cap(model: SequenceModel, n: int, cap: int) -> None:
    if n < 1:
        raise IndexOutOfRangeError(f"need n >= 1 coordinates, got {n}")
    if model.joint == COMONOTONE_PAIR and n > 2:
        raise IndexOutOfRangeError(
            f"comonotone-pair model has 2 coordinates, asked for {n}")
    if n > cap:
        raise OracleTooLargeError(
            f"{n} coordinates exceed the enumeration cap {cap}")
    if model.joint == RECTANGULAR:
        cells = (model.credal.size ** n) + (len(model.credal) ** n)
        if cells > _MAX_CELLS:
            raise OracleTooLargeError(
                f"enumeration needs ~{cells} cells (> {_MAX_CELLS})")


def _integrand_tensor(model: SequenceModel, F, n: int) -> np.ndarray:
    """F evaluated on the outcome grid: shape (size,)*n for rectangular,
    (size,) for comonotone-pair. Tries broadcasting, falls back pointwise."""
    if model.joint == COMONOTONE_PAIR:
        cols = [model.variable_at(i).values for i in range(1, n + 1)]
        try:
            out = np.asarray(F(*cols), dtype=float)
            if out.shape == cols[0].shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([float(F(*(c[w] for c in cols)))
                         for w in range(model.credal.size)])

    grids = np.meshgrid(*(model.variable_at(i).values for i in range(1, n + 1)),
                        indexing="ij")
    shape = grids[0].shape
    try:
        out = np.asarray(F(*grids), dtype=float)
        if out.shape == shape:
            return out
    except (TypeError, ValueError):
        pass
    out = np.empty(shape)
    for idx in np.ndindex(shape):
        out[idx] = float(F(*(g[idx] for g in grids)))
    return out


def joint_expectation_table(model: SequenceModel, F, n: int,
                            cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Expectation of F under every admissible measure assignment.

    Rectangular: shape ``(|P|,)*n``, entry [j_1, ..., j_n] is the
    product-measure expectation with measure j_i on coordinate i.
    Comonotone-pair: shape ``(|P|,)``, entry [j] is E_j.
    """
    _check_cap(model, n, cap)
    G = _integrand_tensor(model, F, n)
    W = model.credal.weight_matrix()
    if model.joint == COMONOTONE_PAIR:
        return W @ G
    # contract coordinate axes one at a time; each step consumes the current
    # leading outcome axis and appends that coordinate's measure axis at the
    # end, so the final axes read (j_1, ..., j_n)
    for _ in range(n):
        G = np.tensordot(G, W.T, axes=([0], [0]))
    return G


def joint_upper_expectation(model: SequenceModel, F, n: int,
                            cap: int = DEFAULT_ORACLE_CAP) -> float:
    """max over measure assignments of E[F(X_1, ..., X_n)], exact."""
    return float(joint_expectation_table(model, F, n, cap).max())


def joint_lower_expectation(model: SequenceModel, F, n: int,
                            cap: int = DEFAULT_ORACLE_CAP) -> float:
    return float(joint_expectation_table(model, F, n, cap).min())


def maximizing_assignment(model: SequenceModel, F, n: int,
                          cap: int = DEFAULT_ORACLE_CAP) -> tuple[int, ...]:
    """Lexicographically first measure assignment attaining the upper value."""
    table = joint_expectation_table(model, F, n, cap)
    flat = int(table.argmax())
    return tuple(int(k) for k in np.unravel_index(flat, table.shape))


def coordinate_expectation_matrix(model: SequenceModel,
                                  rows: np.ndarray) -> np.ndarray:
    """E_j[row_i] for factor-value rows over the space: shape (n, |P|).

    ``rows[i]`` holds the values of some per-coordinate factor f_i(X_i(w))
    over outcomes w. Used by dependence checkers and the product fast path.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[1] != model.credal.size:
        raise DimensionMismatchError(
            f"factor rows have length {rows.shape[1]}, space has {model.credal.size}")
    return rows @ model.credal.weight_matrix().T


def product_expectation_table(model: SequenceModel, rows,
                              cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Assignment table for the product integrand ``prod_i f_i(X_i)``.

    Same semantics as :func:`joint_expectation_table` with
    ``F = prod_i f_i``, but computed from precomputed per-coordinate factor
    value rows. For rectangular joints the product measure factorizes
    coordinate-wise, so entry [j_1, ..., j_n] is ``prod_i E_{j_i}[f_i(X_i)]``,
    materialized by exact outer products over all assignments.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    n = rows.shape[0]
    _check_cap(model, n, cap)
    W = model.credal.weight_matrix()
    if model.joint == COMONOTONE_PAIR:
        return W @ rows.prod(axis=0)
    E = coordinate_expectation_matrix(model, rows)
    return reduce(np.multiply.outer, E)


def product_upper_expectation(model: SequenceModel, rows,
                              cap: int = DEFAULT_ORACLE_CAP) -> float:
    return float(product_expectation_table(model, rows, cap).max())


def product_lower_expectation(model: SequenceModel, rows,
                              cap: int = DEFAULT_ORACLE_CAP) -> float:
    return float(product_expectation_table(model, rows, cap).min())
