"""Discrete-convexity admissibility checks for planar point sequences.

A sequence of 2n points is "admissible" when its forward differences and the
2x2 determinants built from them satisfy strict sign conditions that are
sufficient for the geometric interpolation problem to have a solution.  Two
independent condition sets are checked:

* uniform difference signs plus one common sign for all consecutive
  difference determinants (optionally after a linear change of coordinates);
* one common sign for every difference determinant inside each sliding
  window of n+1 consecutive differences (an affinely invariant condition).

Near-zero quantities fail closed: a difference or determinant only counts as
strictly signed when it clears a tolerance proportional to the data scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isfinite
from typing import Sequence

from .errors import EpsilonTooLarge

# Strict-sign tolerances, relative to the largest absolute coordinate
# (differences scale linearly with the data, determinants quadratically).
SIGN_RTOL = 1e-12

Matrix2x2 = tuple[tuple[float, float], tuple[float, float]]

IDENTITY: Matrix2x2 = ((1.0, 0.0), (0.0, 1.0))


@dataclass(frozen=True)
class PointSequence:
    """2n planar data points with distinct consecutive entries."""

    points: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 4 or len(pts) % 2 != 0:
            raise ValueError("need an even number of points, at least 4")
        for x, y in pts:
            if not (isfinite(x) and isfinite(y)):
                raise ValueError("points must be finite")
        for i in range(len(pts) - 1):
            if pts[i] == pts[i + 1]:
                raise ValueError(f"consecutive points {i} and {i + 1} coincide")

    @property
    def n(self) -> int:
        """Degree bound of the interpolation problem (half the point count)."""
        return len(self.points) // 2

    @property
    def a(self) -> tuple[float, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def b(self) -> tuple[float, ...]:
        return tuple(p[1] for p in self.points)

    @property
    def coordinate_scale(self) -> float:
        return max(max(abs(x), abs(y)) for x, y in self.points)

    @property
    def data_scale(self) -> float:
        """Largest absolute forward difference over both components."""
        table = differences(self)
        return max(max(abs(d) for d in table.da), max(abs(d) for d in table.db))


@dataclass(frozen=True)
class DifferenceTable:
    """Forward differences of the two coordinate components."""

    da: tuple[float, ...]
    db: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.da) != len(self.db):
            raise ValueError("component difference lists must have equal length")

    def det(self, i: int, k: int) -> float:
        """det of the difference pair (i, k): da[i]*db[k] - da[k]*db[i]."""
        return self.da[i] * self.db[k] - self.da[k] * self.db[i]


@dataclass(frozen=True)
class Theorem1Check:
    passed: bool
    difference_sign: int
    determinant_sign: int


@dataclass(frozen=True)
class Theorem2Check:
    passed: bool
    determinant_sign: int


@dataclass(frozen=True)
class AdmissibilityReport:
    """Verdicts with the witness signs that justify them.

    The two checks are independent; neither verdict implies the other.
    ``transform`` is the 2x2 matrix under which the first check passed, when
    one was searched for and found.
    """

    theorem1: Theorem1Check | None = None
    theorem2: Theorem2Check | None = None
    transform: Matrix2x2 | None = None
    transform_searched: bool = False


def differences(pts: PointSequence) -> DifferenceTable:
    """Forward differences da[l] = a[l+1] - a[l], db likewise."""
    a, b = pts.a, pts.b
    return DifferenceTable(
        tuple(a[i + 1] - a[i] for i in range(len(a) - 1)),
        tuple(b[i + 1] - b[i] for i in range(len(b) - 1)),
    )


def _strict_sign(value: float, tol: float) -> int:
    if value > tol:
        return 1
    if value < -tol:
        return -1
    return 0


def _common_sign(values: Sequence[float], tol: float) -> int:
    """+1/-1 if every value clears tol with that sign, else 0."""
    signs = {_strict_sign(v, tol) for v in values}
    if signs == {1}:
        return 1
    if signs == {-1}:
        return -1
    return 0


def check_theorem1(pts: PointSequence) -> AdmissibilityReport:
    """Uniform-sign differences and same-sign consecutive determinants.

    Passes iff all of da and db are strictly positive (or all strictly
    negative), and the determinants det(dT[l-1], dT[l]) share one strict
    sign.  Zero or below-tolerance quantities fail.
    """
    table = differences(pts)
    scale = pts.coordinate_scale
    diff_tol = SIGN_RTOL * max(1.0, scale)
    det_tol = SIGN_RTOL * max(1.0, scale) ** 2
    diff_sign = _common_sign(table.da + table.db, diff_tol)
    dets = [table.det(l - 1, l) for l in range(1, len(table.da))]
    det_sign = _common_sign(dets, det_tol)
    verdict = diff_sign != 0 and det_sign != 0
    return AdmissibilityReport(theorem1=Theorem1Check(verdict, diff_sign, det_sign))


def _window_det_pairs(n: int) -> set[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()
    for j in range(1, n):
        for k in range(0, n + 1):
            for l in range(k + 1, n + 1):
                pairs.add((j - 1 + k, j - 1 + l))
    return pairs


def check_theorem2(pts: PointSequence) -> AdmissibilityReport:
    """Same-sign determinants inside every sliding window of n+1 differences.

    Passes iff det(dT[j-1+k], dT[j-1+l]) shares one strict sign over
    j = 1..n-1 and 0 <= k < l <= n.  The condition is invariant under
    nonsingular affine maps of the data.
    """
    table = differences(pts)
    det_tol = SIGN_RTOL * max(1.0, pts.coordinate_scale) ** 2
    dets = [table.det(i, k) for i, k in sorted(_window_det_pairs(pts.n))]
    det_sign = _common_sign(dets, det_tol)
    return AdmissibilityReport(theorem2=Theorem2Check(det_sign != 0, det_sign))


def apply_transform(pts: PointSequence, m: Matrix2x2) -> PointSequence:
    """Apply a 2x2 linear map to every point."""
    (m00, m01), (m10, m11) = m
    return PointSequence(
        tuple((m00 * x + m01 * y, m10 * x + m11 * y) for x, y in pts.points)
    )


def _transform_candidates() -> list[Matrix2x2]:
    swap: Matrix2x2 = ((0.0, 1.0), (1.0, 0.0))
    reflections: list[Matrix2x2] = [
        ((1.0, 0.0), (0.0, -1.0)),
        ((-1.0, 0.0), (0.0, 1.0)),
        ((-1.0, 0.0), (0.0, -1.0)),
        ((0.0, -1.0), (-1.0, 0.0)),
    ]
    rotations: list[Matrix2x2] = []
    for k in range(1, 16):
        c = math.cos(k * math.pi / 8.0)
        s = math.sin(k * math.pi / 8.0)
        rotations.append(((c, -s), (s, c)))
    return [IDENTITY, swap, *reflections, *rotations]


def search_admissible_transform(
    pts: PointSequence,
) -> tuple[Matrix2x2, AdmissibilityReport] | None:
    """Grid search for a linear map under which check_theorem1 passes.

    Tries the identity first (so already-admissible data report the identity),
    then the component swap, axis/diagonal reflections, and rotations by
    multiples of pi/8.  Returns the first hit, or None when no candidate
    works (e.g. collinear data, whose determinants stay zero under every
    linear map).
    """
    for m in _transform_candidates():
        candidate = apply_transform(pts, m)
        report = check_theorem1(candidate)
        if report.theorem1 is not None and report.theorem1.passed:
            return m, AdmissibilityReport(
                theorem1=report.theorem1,
                transform=m,
                transform_searched=True,
            )
    return None


def transform_window_differences(
    pts: PointSequence, j: int, eps: float
) -> DifferenceTable:
    """Raw window preconditioning: mix each difference in window j.

    For l = j-1 .. n+j-1 the transformed differences are

        da~[l] = det(dT[l], dT[n+j-1]) + eps * det(dT[j-1], dT[l])
        db~[l] = eps * det(dT[l], dT[n+j-1]) + det(dT[j-1], dT[l])

    which is the matrix product [[1, eps], [eps, 1]] times the rotation-like
    map built from the window's first and last difference.  Determinants of
    consecutive transformed pairs equal (1 - eps**2) * det(dT[j-1], dT[n+j-1])
    times the original determinants.  No sign validation happens here.
    """
    n = pts.n
    if not 1 <= j <= n - 1:
        raise ValueError(f"window index j={j} outside 1..{n - 1}")
    table = differences(pts)
    first = j - 1
    last = n + j - 1
    da_new = []
    db_new = []
    for l in range(first, last + 1):
        u = table.det(l, last)
        v = table.det(first, l)
        da_new.append(u + eps * v)
        db_new.append(eps * u + v)
    return DifferenceTable(tuple(da_new), tuple(db_new))


def theorem2_precondition(pts: PointSequence, j: int, eps: float) -> DifferenceTable:
    """Preconditioned differences for window j, validated for strict positivity.

    Requires data whose check_theorem2 verdict passes with positive sign.
    Raises EpsilonTooLarge when eps leaves the open interval (0, 1) or any
    transformed difference / consecutive determinant fails to be strictly
    positive at the package sign tolerance.
    """
    report = check_theorem2(pts)
    assert report.theorem2 is not None
    if not report.theorem2.passed or report.theorem2.determinant_sign <= 0:
        raise ValueError("preconditioning requires positively-signed window determinants")
    if not 0.0 < eps < 1.0:
        raise EpsilonTooLarge(f"eps={eps!r} outside the open interval (0, 1)")
    out = transform_window_differences(pts, j, eps)
    scale = max(max(abs(d) for d in out.da), max(abs(d) for d in out.db), 1e-300)
    diff_tol = SIGN_RTOL * max(1.0, scale)
    det_tol = SIGN_RTOL * max(1.0, scale) ** 2
    if any(d <= diff_tol for d in out.da + out.db):
        raise EpsilonTooLarge(f"eps={eps!r} leaves a non-positive transformed difference")
    for l in range(len(out.da) - 1):
        if out.det(l, l + 1) <= det_tol:
            raise EpsilonTooLarge(f"eps={eps!r} leaves a non-positive determinant")
    return out


def default_precondition_eps(pts: PointSequence, j: int) -> float:
    """Half the supremal eps for which theorem2_precondition succeeds.

    The feasible set is an interval; its upper boundary is located by
    bisection from a feasible seed, and half of it is returned as a value
    that keeps all conditions strict with margin.
    """
    def feasible(eps: float) -> bool:
        try:
            theorem2_precondition(pts, j, eps)
        except EpsilonTooLarge:
            return False
        return True

    seed = 0.5
    while seed > 1e-12 and not feasible(seed):
        seed /= 2.0
    if seed <= 1e-12:
        raise EpsilonTooLarge("no feasible preconditioning parameter found")
    lo, hi = seed, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * lo
