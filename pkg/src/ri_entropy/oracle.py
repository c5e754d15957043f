"""Independent numerical verification of the closed forms.

Derivative-free minimization (golden section on the 2(x)N interval, a
coarse grid plus shrinking-box refinement on the 3(x)N polygon) of the
reduced KL objective, dense partial-transpose eigenvalue tests, and a
batch closed-form-vs-oracle comparison.  The objective is convex and the
feasible sets are convex, so the bracketing searches are globally
correct; infinite KL values act as sentinels that lose every comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angular import Spin, partial_time_reversal
from .closed_form import (
    e_gamma_3xn_even,
    ree_2xn,
    ree_3x3,
    ree_3xn_odd,
    separability_threshold,
)
from .geometry import ppt_polygon
from .states import NormalizedCoords, RIState, to_density

__all__ = [
    "MinimizationReport",
    "VerificationSummary",
    "minimize_kl_over_interval",
    "minimize_kl_over_polygon",
    "ppt_min_eigenvalue",
    "verify_closed_form",
]

DEFAULT_GRID = 200
DEFAULT_REFINE_ITERS = 40

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MinimizationReport:
    optimum_value: float
    optimum_point: tuple  # (p*,) for the interval, (x, y) barycentric for the polygon
    iterations: int
    final_box_size: float
    converged: bool


@dataclass(frozen=True)
class VerificationSummary:
    family: str
    param: float
    samples: int
    seed: int
    tol: float
    max_abs_diff: float
    worst_input: tuple
    passed: bool


def _kl2(p: float, q: float) -> float:
    """Two-outcome KL between (p, 1-p) and (q, 1-q)."""
    total = 0.0
    for pi, qi in ((p, q), (1.0 - p, 1.0 - q)):
        if pi > 0.0:
            if qi <= 0.0:
                return math.inf
            total += pi * math.log(pi / qi)
    return max(total, 0.0)


def minimize_kl_over_interval(j: Spin, p: float, tol: float = 1e-10) -> MinimizationReport:
    """Golden-section minimization of KL(p || q) over q in [0, 2j/(2j+1)]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    lo, hi = 0.0, separability_threshold(j)
    f = lambda q: _kl2(p, q)
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    iters = 0
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
        iters += 1
    # pick the best of the bracketing points and both interval endpoints
    candidates = [(f(lo), lo), (f1, x1), (f2, x2), (f(hi), hi)]
    best_val, best_q = min(candidates, key=lambda t: (t[0], t[1]))
    return MinimizationReport(optimum_value=best_val, optimum_point=(best_q,),
                              iterations=iters, final_box_size=hi - lo,
                              converged=hi - lo <= tol)


def _normalized_polygon(N: int, polygon) -> np.ndarray:
    """Raw Point2 polygon -> barycentric (n, 2) array."""
    bx = math.sqrt(3 * N / (N - 2))
    return np.array([(p.x / bx, p.y / math.sqrt(3.0)) for p in polygon])


def _inside_mask(poly: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                 tol: float = 1e-12) -> np.ndarray:
    """Vectorized membership in a counterclockwise convex polygon."""
    mask = np.ones_like(xs, dtype=bool)
    n = len(poly)
    for i in range(n):
        ox, oy = poly[i]
        qx, qy = poly[(i + 1) % n]
        mask &= (qx - ox) * (ys - oy) - (qy - oy) * (xs - ox) >= -tol
    return mask


def _kl3_vec(p, qx, qy):
    qz = 1.0 - qx - qy
    val = np.zeros_like(qx)
    for pi, q in ((p[0], qx), (p[1], qy), (p[2], qz)):
        if pi > 0.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                term = np.where(q > 0.0, pi * np.log(pi / np.where(q > 0.0, q, 1.0)), np.inf)
            val = val + term
    return val


def _lex_argmin(vals, xs, ys):
    """Index of the minimum value; ties broken by lexicographic (x, y)."""
    m = np.min(vals)
    ties = np.flatnonzero(vals == m)
    if len(ties) == 1:
        return ties[0]
    order = np.lexsort((ys[ties], xs[ties]))
    return ties[order[0]]


def minimize_kl_over_polygon(N: int, coords: NormalizedCoords, polygon=None,
                             grid: int = DEFAULT_GRID,
                             refine_iters: int = DEFAULT_REFINE_ITERS,
                             tol: float = 1e-9) -> MinimizationReport:
    """Two-stage grid search for min KL(rho || sigma) over a convex polygon.

    `polygon` is a counterclockwise list of raw Point2 vertices (default:
    the PPT polygon ADA'E); the search runs in barycentric coordinates.
    """
    if polygon is None:
        polygon = ppt_polygon(N)
    poly = _normalized_polygon(N, polygon)
    if len(poly) < 3:
        raise ValueError("degenerate polygon")
    p = (coords.ahat_lo, coords.ahat_mid, coords.ahat_hi)

    # stage 1: coarse grid over the bounding box, plus the polygon
    # vertices and (when feasible) the state itself
    lo = poly.min(axis=0)
    hi = poly.max(axis=0)
    gx, gy = np.meshgrid(np.linspace(lo[0], hi[0], grid),
                         np.linspace(lo[1], hi[1], grid))
    xs = np.concatenate([gx.ravel(), poly[:, 0], [p[0]]])
    ys = np.concatenate([gy.ravel(), poly[:, 1], [p[1]]])
    keep = _inside_mask(poly, xs, ys)
    xs, ys = xs[keep], ys[keep]
    if len(xs) == 0:
        raise ValueError("no feasible grid point inside the polygon")
    vals = _kl3_vec(p, xs, ys)
    best = _lex_argmin(vals, xs, ys)
    bx, by, bval = xs[best], ys[best], vals[best]

    # stage 2: shrinking-box refinement around the incumbent.  The box
    # re-centers without shrinking while the minimum keeps landing on
    # its rim (tracking a constrained optimum along a polygon edge) and
    # halves only on interior hits; refine_iters counts the halvings.
    extent = max(hi[0] - lo[0], hi[1] - lo[1])
    half = 8.0 * extent / grid
    half_max = extent
    offsets = np.linspace(-1.0, 1.0, 19)
    shrinks = 0
    passes = 0
    boundary_streak = 0
    while shrinks < refine_iters and passes < 40 * refine_iters:
        passes += 1
        rx, ry = np.meshgrid(bx + half * offsets, by + half * offsets)
        rx, ry = rx.ravel(), ry.ravel()
        keep = _inside_mask(poly, rx, ry)
        rx, ry = rx[keep], ry[keep]
        moved = False
        if len(rx):
            vals = _kl3_vec(p, rx, ry)
            i = _lex_argmin(vals, rx, ry)
            if vals[i] < bval or (vals[i] == bval and (rx[i], ry[i]) < (bx, by)):
                moved = max(abs(rx[i] - bx), abs(ry[i] - by)) >= half * (1.0 - 1e-9)
                bx, by, bval = rx[i], ry[i], vals[i]
        if moved:
            boundary_streak += 1
            if boundary_streak >= 2:
                half = min(2.0 * half, half_max)
        else:
            boundary_streak = 0
            half *= 0.5
            shrinks += 1
    box = 2.0 * half
    iters = passes

    # stage 3: by convexity the constrained optimum is either the state
    # itself or on the polygon boundary, so a golden-section pass along
    # each edge pins boundary optima to coordinate tolerance.
    for i in range(len(poly)):
        v0, v1 = poly[i], poly[(i + 1) % len(poly)]
        f = lambda s: float(_kl3_vec(p, np.array([(1 - s) * v0[0] + s * v1[0]]),
                                     np.array([(1 - s) * v0[1] + s * v1[1]]))[0])
        slo, shi = 0.0, 1.0
        s1 = shi - _INVPHI * (shi - slo)
        s2 = slo + _INVPHI * (shi - slo)
        f1, f2 = f(s1), f(s2)
        while shi - slo > tol:
            if f1 <= f2:
                shi, s2, f2 = s2, s1, f1
                s1 = shi - _INVPHI * (shi - slo)
                f1 = f(s1)
            else:
                slo, s1, f1 = s1, s2, f2
                s2 = slo + _INVPHI * (shi - slo)
                f2 = f(s2)
        for sc in (0.0, slo, s1, s2, shi, 1.0):
            cx = (1 - sc) * v0[0] + sc * v1[0]
            cy = (1 - sc) * v0[1] + sc * v1[1]
            cv = f(sc)
            if cv < bval or (cv == bval and (cx, cy) < (bx, by)):
                bx, by, bval = cx, cy, cv

    if not math.isfinite(bval):
        return MinimizationReport(optimum_value=math.inf, optimum_point=(bx, by),
                                  iterations=iters, final_box_size=box, converged=False)
    return MinimizationReport(optimum_value=float(bval), optimum_point=(float(bx), float(by)),
                              iterations=iters, final_box_size=box, converged=box <= tol)


def ppt_min_eigenvalue(state: RIState) -> float:
    """Smallest eigenvalue of the partial time-reversal of the dense state."""
    image = partial_time_reversal(to_density(state))
    return float(np.linalg.eigvalsh(image.mat)[0])


def _sample_simplex(rng: np.random.Generator):
    """Uniform barycentric sample via sorted uniform spacings."""
    u = np.sort(rng.random(2))
    return NormalizedCoords(u[0], u[1] - u[0])


def verify_closed_form(family: str, param, samples: int, seed: int, tol: float,
                       grid: int = DEFAULT_GRID,
                       refine_iters: int = DEFAULT_REFINE_ITERS) -> VerificationSummary:
    """Compare the closed form against the oracle on seeded uniform samples.

    Families: "2xN" (param = j), "3x3", "3xN-odd", "3xN-even" (param = N).
    """
    rng = np.random.default_rng(seed)
    max_diff = -1.0
    worst = ()

    if family == "2xN":
        j = param if isinstance(param, Spin) else Spin.of(param)
        jval = j.j
        for _ in range(samples):
            p = float(rng.random())
            closed = ree_2xn(j, p).value
            orac = minimize_kl_over_interval(j, p).optimum_value
            diff = abs(closed - orac)
            if diff > max_diff:
                max_diff, worst = diff, (p,)
        param_out = jval
    elif family in ("3x3", "3xN-odd", "3xN-even"):
        N = 3 if family == "3x3" else int(param)
        if family == "3x3" and param not in (None, 3):
            raise ValueError("family 3x3 fixes N = 3")
        if family == "3xN-odd" and (N % 2 == 0 or N < 5):
            raise ValueError("family 3xN-odd needs odd N >= 5")
        if family == "3xN-even" and (N % 2 or N < 4):
            raise ValueError("family 3xN-even needs even N >= 4")
        closed_fn = {"3x3": lambda c: ree_3x3(c),
                     "3xN-odd": lambda c: ree_3xn_odd(N, c),
                     "3xN-even": lambda c: e_gamma_3xn_even(N, c)}[family]
        polygon = ppt_polygon(N)
        for _ in range(samples):
            coords = _sample_simplex(rng)
            closed = closed_fn(coords).value
            orac = minimize_kl_over_polygon(N, coords, polygon,
                                            grid=grid, refine_iters=refine_iters).optimum_value
            diff = abs(closed - orac)
            if diff > max_diff:
                max_diff, worst = diff, (coords.ahat_lo, coords.ahat_mid)
        param_out = N
    else:
        raise ValueError(f"unknown family {family!r}")

    return VerificationSummary(family=family, param=float(param_out), samples=samples,
                               seed=seed, tol=tol, max_abs_diff=max_diff,
                               worst_input=worst, passed=max_diff <= tol)
