"""Construction and verification of the interpolating parametric curve."""

from __future__ import annotations

from dataclasses import dataclass

from . import polyalg
from .admissibility import PointSequence
from .errors import RepeatedNodes
from .polyalg import Polynomial1D
from .solver import ParameterVector


@dataclass(frozen=True)
class PolynomialCurve:
    """Planar parametric polynomial: two Newton-form components on [0, 1]."""

    x: Polynomial1D
    y: Polynomial1D
    degree_bound: int


def construct_curve(pts: PointSequence, t: ParameterVector) -> PolynomialCurve:
    """Degree-n curve through the first n+1 (parameter, point) pairs.

    A degree-n component is determined by n+1 conditions; the remaining n-1
    pairs are deliberately left out and become the verification surface, since
    a parameter vector solves the problem exactly when every choice of n+1
    pairs yields the same curve.
    """
    if len(t.interior) != 2 * pts.n - 2:
        raise ValueError("parameter count does not match the point sequence")
    if not t.strictly_increasing:
        raise RepeatedNodes("curve construction needs strictly increasing parameters")
    n = pts.n
    nodes = t.full[: n + 1]
    return PolynomialCurve(
        polyalg.newton_interpolant(nodes, pts.a[: n + 1]),
        polyalg.newton_interpolant(nodes, pts.b[: n + 1]),
        n,
    )


def eval_curve(curve: PolynomialCurve, t: float) -> tuple[float, float]:
    return polyalg.eval_poly(curve.x, t), polyalg.eval_poly(curve.y, t)


def curve_tangent(curve: PolynomialCurve, t: float) -> tuple[float, float]:
    return (
        polyalg.eval_poly_and_derivative(curve.x, t)[1],
        polyalg.eval_poly_and_derivative(curve.y, t)[1],
    )


def verify_interpolation(
    curve: PolynomialCurve, pts: PointSequence, t: ParameterVector
) -> float:
    """Worst max-norm deviation of the curve from the data over ALL 2n pairs.

    Includes the pairs not used during construction, so a small value
    certifies that the parameter vector truly solves the full system.
    """
    worst = 0.0
    for tl, (ax, bx) in zip(t.full, pts.points):
        cx, cy = eval_curve(curve, tl)
        worst = max(worst, abs(cx - ax), abs(cy - bx))
    return worst
