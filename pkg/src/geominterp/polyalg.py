"""Polynomial algebra kernels: Vandermonde products, divided differences, Newton forms.

Everything here works on plain sequences of floats and is exact up to
floating-point rounding; no dense linear algebra is involved.  Node vectors
are expected to live in a bounded range (the rest of the package keeps them
in [0, 1]), which rules out overflow in the direct product formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite
from typing import Sequence

from .errors import RepeatedNodes

# Two nodes closer than this (relative to their magnitude, floored at 1) are
# treated as coincident by the operations that require distinct nodes.
COINCIDENCE_RTOL = 1e-13


def _check_nodes(nodes: Sequence[float]) -> None:
    if len(nodes) < 1:
        raise ValueError("node vector must hold at least one node")
    for t in nodes:
        if not isfinite(t):
            raise ValueError(f"node {t!r} is not finite")


def _require_distinct(nodes: Sequence[float]) -> None:
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            scale = max(1.0, abs(nodes[i]), abs(nodes[j]))
            if abs(nodes[i] - nodes[j]) < COINCIDENCE_RTOL * scale:
                raise RepeatedNodes(
                    f"nodes {i} and {j} coincide: {nodes[i]!r} ~ {nodes[j]!r}"
                )


@dataclass(frozen=True)
class Polynomial1D:
    """Univariate polynomial in Newton form.

    ``p(t) = sum_k coefficients[k] * prod_{i<k} (t - basis_nodes[i])``

    ``basis_nodes`` are the interpolation nodes used as Newton centers and
    ``coefficients`` are the divided-difference coefficients in ascending
    order; the two sequences always have equal length.
    """

    basis_nodes: tuple[float, ...]
    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.basis_nodes) != len(self.coefficients):
            raise ValueError("need one coefficient per basis node")
        _check_nodes(self.basis_nodes)

    @property
    def degree_bound(self) -> int:
        return len(self.coefficients) - 1


def vandermonde(nodes: Sequence[float]) -> float:
    """Vandermonde determinant of the given nodes via the product formula.

    Returns ``prod_{l} prod_{i<l} (nodes[l] - nodes[i])``.  A single node
    yields 1 (empty product); repeated nodes legitimately yield 0.
    """
    _check_nodes(nodes)
    v = 1.0
    for l in range(1, len(nodes)):
        for i in range(l):
            v *= nodes[l] - nodes[i]
    return v


def modified_vandermonde(nodes: Sequence[float], values: Sequence[float]) -> float:
    """Vandermonde determinant with its last row replaced by ``values``.

    Computed by cofactor expansion along the replaced row:
    ``sum_l (-1)**(r+l) * values[l] * vandermonde(nodes without l)``
    with 1-based ``l`` and ``r = len(nodes)``.  Coincident nodes are allowed;
    they simply annihilate cofactors.
    """
    _check_nodes(nodes)
    r = len(nodes)
    if len(values) != r:
        raise ValueError("need one value per node")
    total = 0.0
    for l in range(r):
        rest = tuple(nodes[:l]) + tuple(nodes[l + 1:])
        cofactor = vandermonde(rest) if rest else 1.0
        total += (-1.0) ** (r + l + 1) * values[l] * cofactor
    return total


def divided_difference(nodes: Sequence[float], values: Sequence[float]) -> float:
    """Leading divided difference of ``values`` over distinct ``nodes``.

    Uses the classical recursive table, which forms first differences of the
    data before any division and is therefore the cancellation-friendly path.
    ``divided_difference_quotient`` gives the same number as a determinant
    quotient and serves as an independent cross-check.

    Raises RepeatedNodes if two nodes coincide within COINCIDENCE_RTOL.
    """
    _check_nodes(nodes)
    if len(values) != len(nodes):
        raise ValueError("need one value per node")
    _require_distinct(nodes)
    col = [float(v) for v in values]
    n = len(nodes)
    for level in range(1, n):
        for i in range(n - level):
            col[i] = (col[i + 1] - col[i]) / (nodes[i + level] - nodes[i])
    return col[0]


def divided_difference_quotient(nodes: Sequence[float], values: Sequence[float]) -> float:
    """Divided difference as a quotient of Vandermonde determinants.

    Mathematically identical to ``divided_difference`` but computed as
    ``modified_vandermonde / vandermonde``; kept as the cross-check path.
    """
    _check_nodes(nodes)
    _require_distinct(nodes)
    return modified_vandermonde(nodes, values) / vandermonde(nodes)


def newton_interpolant(nodes: Sequence[float], values: Sequence[float]) -> Polynomial1D:
    """Interpolating polynomial through ``(nodes[k], values[k])`` in Newton form.

    Builds the divided-difference table once; the returned polynomial has
    degree at most ``len(nodes) - 1`` and reproduces every data pair.
    """
    _check_nodes(nodes)
    if len(values) != len(nodes):
        raise ValueError("need one value per node")
    _require_distinct(nodes)
    col = [float(v) for v in values]
    n = len(nodes)
    coeffs = [col[0]]
    for level in range(1, n):
        for i in range(n - level):
            col[i] = (col[i + 1] - col[i]) / (nodes[i + level] - nodes[i])
        coeffs.append(col[0])
    return Polynomial1D(tuple(float(t) for t in nodes), tuple(coeffs))


def eval_poly(p: Polynomial1D, t: float) -> float:
    """Evaluate a Newton-form polynomial by Horner-style nesting."""
    k = len(p.coefficients) - 1
    v = p.coefficients[k]
    for i in range(k - 1, -1, -1):
        v = p.coefficients[i] + (t - p.basis_nodes[i]) * v
    return v


def eval_poly_and_derivative(p: Polynomial1D, t: float) -> tuple[float, float]:
    """Evaluate value and first derivative in one Horner-style sweep."""
    k = len(p.coefficients) - 1
    v = p.coefficients[k]
    d = 0.0
    for i in range(k - 1, -1, -1):
        d = v + (t - p.basis_nodes[i]) * d
        v = p.coefficients[i] + (t - p.basis_nodes[i]) * v
    return v, d
