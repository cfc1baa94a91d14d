"""Nonlinear solve for the interior parameters of geometric interpolation.

For 2n data points and a degree-n parametric polynomial, the unknown interior
parameters t_1 < ... < t_{2n-2} (with t_0 = 0, t_{2n-1} = 1 fixed) satisfy
2n-2 equations: the divided differences of both data components over every
window of n+2 consecutive nodes must vanish.  Two equivalent residual forms
are provided:

* ``residual_closed``  - the divided differences themselves (cancellation
  friendly, requires distinct parameters);
* ``residual_polynomial`` - the same equations multiplied through by the
  window Vandermonde determinant (polynomial in t, well defined on the
  boundary faces where parameters coincide).

``newton_solve`` runs a damped Newton iteration on the closed form from an
equidistant start, and ``solve_quadratic`` evaluates the exact n=2 solution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import isfinite, sqrt

import numpy as np

from . import polyalg
from .admissibility import SIGN_RTOL, DifferenceTable, PointSequence, differences
from .errors import InadmissibleDeterminants, NotQuadratic, RepeatedNodes, SingularJacobian

log = logging.getLogger("geominterp.solver")

NEWTON_TOL_FACTOR = 1e-12   # residual max-norm tolerance, times the data scale
GAP_FLOOR = 1e-9            # smallest allowed gap between consecutive parameters
MAX_ITERATIONS = 100
MAX_HALVINGS = 30
MAX_RESTARTS = 5
JACOBIAN_REGULARIZATION = 1e-12


@dataclass(frozen=True)
class ParameterVector:
    """Interior parameters of an ordered vector on [0, 1].

    Holds the 2n-2 interior values; the endpoints 0 and 1 are implicit.
    Construction admits the closed simplex 0 <= t_1 <= ... <= t_{2n-2} <= 1,
    so boundary faces (coincident parameters) are representable; operations
    that need the open interior check ``strictly_increasing`` themselves.
    """

    interior: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.interior)
        object.__setattr__(self, "interior", vals)
        if len(vals) < 2 or len(vals) % 2 != 0:
            raise ValueError("interior parameter count must be even and >= 2")
        full = self.full
        for v in full:
            if not isfinite(v):
                raise ValueError("parameters must be finite")
        for i in range(len(full) - 1):
            if full[i] > full[i + 1]:
                raise ValueError("parameters must be non-decreasing within [0, 1]")

    @property
    def n(self) -> int:
        return len(self.interior) // 2 + 1

    @property
    def full(self) -> tuple[float, ...]:
        """All 2n parameters including the fixed endpoints 0 and 1."""
        return (0.0,) + self.interior + (1.0,)

    @property
    def strictly_increasing(self) -> bool:
        full = self.full
        return all(full[i] < full[i + 1] for i in range(len(full) - 1))

    @classmethod
    def equidistant(cls, n: int) -> "ParameterVector":
        """The standard initial guess t_l = l / (2n-1)."""
        m = 2 * n - 1
        return cls(tuple(l / m for l in range(1, m)))

    @classmethod
    def from_full(cls, values) -> "ParameterVector":
        vals = tuple(float(v) for v in values)
        if len(vals) < 4 or vals[0] != 0.0 or vals[-1] != 1.0:
            raise ValueError("full parameter vector must start at 0 and end at 1")
        return cls(vals[1:-1])


@dataclass(frozen=True)
class ResidualVector:
    """Residuals ordered (f_a_1, f_b_1, ..., f_a_{n-1}, f_b_{n-1})."""

    values: tuple[float, ...]
    form_tag: str  # "closed" or "polynomial"

    def component(self, j: int, comp: str) -> float:
        """Residual of window j (1-based) for component 'a' or 'b'."""
        if comp not in ("a", "b"):
            raise ValueError("component must be 'a' or 'b'")
        return self.values[2 * (j - 1) + (0 if comp == "a" else 1)]

    @property
    def max_norm(self) -> float:
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class SolveResult:
    t: ParameterVector
    residual_norm: float
    iterations: int
    converged: bool
    trace: tuple[tuple[ParameterVector, float], ...] = ()


def _check_shapes(pts: PointSequence, t: ParameterVector) -> None:
    if len(t.interior) != 2 * pts.n - 2:
        raise ValueError(
            f"parameter count {len(t.interior)} does not match 2n-2 = {2 * pts.n - 2}"
        )


def residual_closed(pts: PointSequence, t: ParameterVector) -> ResidualVector:
    """Divided differences of both components over every n+2 window.

    Component j (1-based) holds the leading divided difference of the data
    over nodes t_{j-1}, ..., t_{n+j}; all of them vanish exactly when t
    solves the interpolation problem.  Raises RepeatedNodes when parameters
    coincide (use residual_polynomial on boundary faces).
    """
    _check_shapes(pts, t)
    n = pts.n
    full = t.full
    a, b = pts.a, pts.b
    vals: list[float] = []
    for j in range(1, n):
        lo, hi = j - 1, n + j + 1
        window = full[lo:hi]
        vals.append(polyalg.divided_difference(window, a[lo:hi]))
        vals.append(polyalg.divided_difference(window, b[lo:hi]))
    return ResidualVector(tuple(vals), "closed")


def residual_polynomial(pts: PointSequence, t: ParameterVector) -> ResidualVector:
    """Polynomial form: window Vandermonde determinants with data last rows.

    Equals residual_closed times the window Vandermonde determinant whenever
    the parameters are distinct, and stays well defined (and meaningful) when
    they coincide, which is the whole point of this form.
    """
    _check_shapes(pts, t)
    n = pts.n
    full = t.full
    a, b = pts.a, pts.b
    vals: list[float] = []
    for j in range(1, n):
        lo, hi = j - 1, n + j + 1
        window = full[lo:hi]
        vals.append(polyalg.modified_vandermonde(window, a[lo:hi]))
        vals.append(polyalg.modified_vandermonde(window, b[lo:hi]))
    return ResidualVector(tuple(vals), "polynomial")


def _window_weights(window: tuple[float, ...]) -> list[float]:
    """w_l = 1 / prod_{m != l} (t_l - t_m) for the closed-form terms."""
    w = []
    for l, tl in enumerate(window):
        p = 1.0
        for m, tm in enumerate(window):
            if m != l:
                p *= tl - tm
        w.append(1.0 / p)
    return w


def jacobian(pts: PointSequence, t: ParameterVector) -> np.ndarray:
    """Analytic Jacobian of residual_closed with respect to the interior t.

    Row ordering matches ResidualVector; column k corresponds to t_k for
    k = 1..2n-2.  Entries outside a row's node window are exactly zero, so
    the matrix is banded.
    """
    _check_shapes(pts, t)
    if not t.strictly_increasing:
        raise RepeatedNodes("jacobian requires strictly increasing parameters")
    n = pts.n
    full = t.full
    a, b = pts.a, pts.b
    dim = 2 * n - 2
    jac = np.zeros((dim, dim))
    for j in range(1, n):
        lo, hi = j - 1, n + j + 1
        window = full[lo:hi]
        w = _window_weights(window)
        for comp, c in enumerate((a[lo:hi], b[lo:hi])):
            row = 2 * (j - 1) + comp
            for k_local, k_global in enumerate(range(lo, hi)):
                if not 1 <= k_global <= dim:
                    continue  # endpoints are fixed, not unknowns
                tk = window[k_local]
                s = sum(
                    1.0 / (tk - tm) for m, tm in enumerate(window) if m != k_local
                )
                entry = -c[k_local] * w[k_local] * s
                for l_local, tl in enumerate(window):
                    if l_local != k_local:
                        entry += c[l_local] * w[l_local] / (tl - tk)
                jac[row, k_global - 1] = entry
    return jac


def solve_quadratic(pts: PointSequence) -> SolveResult:
    """Exact interior parameters for the 4-point (n=2) problem.

    Requires the three difference determinants D01, D02, D12 to share a
    strict sign (a negative triple is negated, which corresponds to swapping
    the data components and leaves the parameters unchanged).  The result is
    evaluated directly from the closed-form expressions; its residual is
    reported but no iteration takes place.
    """
    if pts.n != 2:
        raise NotQuadratic(f"closed form needs exactly 4 points, got {len(pts.points)}")
    table = differences(pts)
    d01, d02, d12 = table.det(0, 1), table.det(0, 2), table.det(1, 2)
    tol = SIGN_RTOL * max(1.0, pts.coordinate_scale) ** 2
    if all(d > tol for d in (d01, d02, d12)):
        pass
    elif all(d < -tol for d in (d01, d02, d12)):
        d01, d02, d12 = -d01, -d02, -d12
    else:
        raise InadmissibleDeterminants(
            f"determinants ({d01:.3g}, {d02:.3g}, {d12:.3g}) do not share a strict sign"
        )
    root = sqrt(d01 * d12 * (d01 + d02) * (d12 + d02))
    t1 = d01 * d02 / (d01 * (d12 + d02) + root)
    t2 = (d01 * d12 + root) / (d12 * (d01 + d02) + root)
    t = ParameterVector((t1, t2))
    norm = residual_closed(pts, t).max_norm
    tol_norm = NEWTON_TOL_FACTOR * pts.data_scale
    return SolveResult(t, norm, 0, norm <= tol_norm, ())


def _residual_array(pts: PointSequence, full: np.ndarray) -> np.ndarray:
    n = pts.n
    a, b = pts.a, pts.b
    vals = np.empty(2 * n - 2)
    for j in range(1, n):
        lo, hi = j - 1, n + j + 1
        window = tuple(full[lo:hi])
        vals[2 * (j - 1)] = polyalg.divided_difference(window, a[lo:hi])
        vals[2 * (j - 1) + 1] = polyalg.divided_difference(window, b[lo:hi])
    return vals


def _row_scales(pts: PointSequence, full: np.ndarray) -> np.ndarray:
    """Max term magnitude per equation, used to equilibrate the Newton system."""
    n = pts.n
    a, b = pts.a, pts.b
    scales = np.empty(2 * n - 2)
    for j in range(1, n):
        lo, hi = j - 1, n + j + 1
        w = _window_weights(tuple(full[lo:hi]))
        scales[2 * (j - 1)] = max(abs(c * wl) for c, wl in zip(a[lo:hi], w))
        scales[2 * (j - 1) + 1] = max(abs(c * wl) for c, wl in zip(b[lo:hi], w))
    return np.maximum(scales, 1e-300)


def _max_feasible_step(full: np.ndarray, step_full: np.ndarray, gap_floor: float) -> float:
    """Largest step fraction keeping every consecutive gap above gap_floor."""
    gaps = np.diff(full)
    dgaps = np.diff(step_full)
    lam = 1.0
    for g, dg in zip(gaps, dgaps):
        if dg < 0.0:
            lam = min(lam, (gap_floor - g) / dg)
    return max(lam, 0.0)


def _random_interior(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Sorted uniform sample, nudged to equidistant-with-jitter if too clustered."""
    x = np.sort(rng.uniform(0.0, 1.0, dim))
    full = np.concatenate(([0.0], x, [1.0]))
    if np.min(np.diff(full)) < 100.0 * GAP_FLOOR:
        base = np.arange(1, dim + 1, dtype=float)
        x = np.sort((base + rng.uniform(-0.3, 0.3, dim)) / (dim + 1))
    return x


def newton_solve(
    pts: PointSequence,
    t0: ParameterVector | None = None,
    *,
    tol_factor: float = NEWTON_TOL_FACTOR,
    max_iter: int = MAX_ITERATIONS,
    gap_floor: float = GAP_FLOOR,
    max_halvings: int = MAX_HALVINGS,
    max_restarts: int = MAX_RESTARTS,
    seed: int = 0,
) -> SolveResult:
    """Damped Newton iteration on the closed-form residual.

    Starts from ``t0`` or the equidistant guess and iterates until the
    residual max-norm drops below ``tol_factor`` times the data scale
    (largest absolute difference).  Each step is shrunk so consecutive
    parameters keep a gap above ``gap_floor`` (the closed form is singular
    on the boundary faces), then halved Armijo-style until the residual
    norm decreases.  A singular Jacobian is regularized once and, failing
    that, the iteration restarts from a random ordered interior point; a
    stalled line search triggers the same restart.  When the iteration or
    restart budget runs out the best iterate is returned with
    ``converged=False``; SingularJacobian is raised only if every restart
    died on an unusable linear system.
    """
    n = pts.n
    dim = 2 * n - 2
    if t0 is not None:
        _check_shapes(pts, t0)
        if not t0.strictly_increasing:
            raise RepeatedNodes("initial guess must be strictly increasing")
    data_scale = pts.data_scale
    tol = tol_factor * data_scale
    rng = np.random.default_rng(seed)

    x = np.array((t0 or ParameterVector.equidistant(n)).interior)
    trace: list[tuple[ParameterVector, float]] = []
    best_x, best_norm = x.copy(), np.inf
    iterations = 0
    restarts = 0
    singular_exhausted = False

    def full_of(vec: np.ndarray) -> np.ndarray:
        return np.concatenate(([0.0], vec, [1.0]))

    f = _residual_array(pts, full_of(x))
    norm = float(np.max(np.abs(f)))
    while True:
        trace.append((ParameterVector(tuple(x)), norm))
        if norm < best_norm:
            best_x, best_norm = x.copy(), norm
        if norm < tol:
            return SolveResult(
                ParameterVector(tuple(x)), norm, iterations, True, tuple(trace)
            )
        if iterations >= max_iter:
            log.info("iteration budget exhausted at residual %.3e", best_norm)
            break

        full = full_of(x)
        jac = jacobian(pts, ParameterVector(tuple(x)))
        scales = _row_scales(pts, full)
        jac_scaled = jac / scales[:, None]
        f_scaled = f / scales
        step = None
        for attempt in range(2):
            try:
                cand = np.linalg.solve(jac_scaled, -f_scaled)
            except np.linalg.LinAlgError:
                cand = None
            if cand is not None and np.all(np.isfinite(cand)):
                step = cand
                break
            if attempt == 0:
                jac_scaled = jac_scaled + JACOBIAN_REGULARIZATION * np.eye(dim)
                log.debug("singular Jacobian, retrying with regularization")

        accepted = False
        if step is not None:
            step_full = np.concatenate(([0.0], step, [0.0]))
            lam = min(1.0, 0.999 * _max_feasible_step(full, step_full, gap_floor))
            for _ in range(max_halvings):
                if lam <= 0.0:
                    break
                x_new = x + lam * step
                f_new = _residual_array(pts, full_of(x_new))
                norm_new = float(np.max(np.abs(f_new)))
                if np.isfinite(norm_new) and norm_new <= (1.0 - 1e-4 * lam) * norm:
                    x, f, norm = x_new, f_new, norm_new
                    iterations += 1
                    accepted = True
                    break
                lam *= 0.5
            log.debug("iter %d: residual %.3e (step %s)", iterations, norm,
                      "accepted" if accepted else "stalled")

        if not accepted:
            if restarts >= max_restarts:
                if step is None:
                    singular_exhausted = True
                break
            restarts += 1
            x = _random_interior(rng, dim)
            f = _residual_array(pts, full_of(x))
            norm = float(np.max(np.abs(f)))
            log.info("restart %d from random interior point", restarts)

    if singular_exhausted:
        raise SingularJacobian("linear system unusable after regularization and restarts")
    return SolveResult(
        ParameterVector(tuple(best_x)), best_norm, iterations, False, tuple(trace)
    )
