"""Convex geometry of the 3(x)N state simplex.

The alpha-vectors of 3(x)N RI states form a triangle with vertices A, B,
C; its image under partial time reversal is another triangle A', B', C',
and the intersection (the PPT region, which equals the separable region
for odd N) is the polygon A D A' E.  Everything here is charted on the
raw (alpha_{j-1}, alpha_j) plane; most internal work happens in
barycentric ("normalized") coordinates where the simplex is the standard
triangle {x, y >= 0, x + y <= 1}.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from .states import NormalizedCoords

__all__ = [
    "Point2",
    "Region",
    "simplex_vertices",
    "ppt_image_vertices",
    "ppt_polygon",
    "landmark_points",
    "classify_region",
    "polygon_area_ratio",
    "normalized_chart",
]

SNAP_TOL = 1e-12


class Point2(NamedTuple):
    x: float
    y: float


class Region(enum.Enum):
    """Region of the 3(x)N chart a state falls in (boundaries resolved by priority)."""

    SEPARABLE = "SEPARABLE_ADA'E"
    # odd/even N >= 4 entangled regions
    TRI_APRIME_DH = "TRI_A'DH"
    POLY_APRIME_HBF = "POLY_A'HBF"
    POLY_APRIME_FCE = "POLY_A'FCE"
    # N = 3 entangled regions (F -> C and H -> B degenerate)
    TRI_APRIME_BD = "TRI_A'BD"
    TRI_APRIME_BC = "TRI_A'BC"
    TRI_APRIME_CE = "TRI_A'CE"
    # 2(x)N family has a one-dimensional state space: entangled interval
    ENTANGLED_INTERVAL = "ENTANGLED_INTERVAL"

    def __str__(self):
        return self.value


def _check_n(N: int, minimum: int = 3):
    if not isinstance(N, (int, np.integer)) or N < minimum:
        raise ValueError(f"need integer N >= {minimum}, got {N!r}")


def simplex_vertices(N: int):
    """Raw alpha-vectors of the simplex vertices A, B, C."""
    _check_n(N)
    A = np.array([0.0, 0.0, math.sqrt(3 * N / (N + 2))])
    B = np.array([math.sqrt(3 * N / (N - 2)), 0.0, 0.0])
    C = np.array([0.0, math.sqrt(3.0), 0.0])
    return A, B, C


def ppt_image_vertices(N: int):
    """Raw alpha-vectors of the partial-time-reversal images A', B', C'."""
    _check_n(N)
    Ap = np.array([
        math.sqrt(3 * (N - 2) / N),
        2 * math.sqrt(3.0) / (N + 1),
        2 / (N + 1) * math.sqrt(3 / (N * (N + 2))),
    ])
    Bp = np.array([
        2 / (N - 1) * math.sqrt(3 / (N * (N - 2))),
        -2 * math.sqrt(3.0) / (N - 1),
        math.sqrt(3 * (N + 2) / N),
    ])
    Cp = np.array([
        -2 / (N - 1) * math.sqrt(3 * (N - 2) / N),
        math.sqrt(3.0) * (N * N - 5) / (N * N - 1),
        2 / (N + 1) * math.sqrt(3 * (N + 2) / N),
    ])
    return Ap, Bp, Cp


def ppt_polygon(N: int):
    """PPT polygon vertices (A, D, A', E) as raw Point2, counterclockwise."""
    _check_n(N)
    A = Point2(0.0, 0.0)
    D = Point2((N - 1) / 2 * math.sqrt(3 / (N * (N - 2))), 0.0)
    Ap = Point2(math.sqrt(3 * (N - 2) / N), 2 * math.sqrt(3.0) / (N + 1))
    E = Point2(0.0, math.sqrt(3.0) * (N - 1) / (N + 1))
    return A, D, Ap, E


def landmark_points(N: int):
    """Raw coordinates of F (on BC), G and H (on the alpha_j = 0 edge)."""
    _check_n(N, minimum=5)
    F = Point2((N - 3) / (N - 1) * math.sqrt(3 * N / (N - 2)),
               2 * math.sqrt(3.0) / (N - 1))
    G = Point2((N - 1) ** 2 * (N + 3) / (2 * (N * N - 5)) * math.sqrt(3 / (N * (N - 2))), 0.0)
    H = Point2((N + 3) * (N - 1) / (N * N - 5) * math.sqrt(3 * (N - 2) / N), 0.0)
    return F, G, H


class NormalizedChart(NamedTuple):
    """Landmark points of the 3(x)N chart in barycentric coordinates."""

    a: Point2
    b: Point2
    c: Point2
    d: Point2
    e: Point2
    a_prime: Point2
    f: Point2 | None
    g: Point2 | None
    h: Point2 | None


def normalized_chart(N: int) -> NormalizedChart:
    """All landmarks in barycentric coordinates (exact rational expressions)."""
    _check_n(N)
    a = Point2(0.0, 0.0)
    b = Point2(1.0, 0.0)
    c = Point2(0.0, 1.0)
    d = Point2((N - 1) / (2 * N), 0.0)
    e = Point2(0.0, (N - 1) / (N + 1))
    ap = Point2((N - 2) / N, 2 / (N + 1))
    if N == 3:
        f = g = h = None
    else:
        f = Point2((N - 3) / (N - 1), 2 / (N - 1))
        g = Point2((N - 1) ** 2 * (N + 3) / (2 * N * (N * N - 5)), 0.0)
        h = Point2((N + 3) * (N - 1) * (N - 2) / (N * (N * N - 5)), 0.0)
    return NormalizedChart(a, b, c, d, e, ap, f, g, h)


def _cross(o: Point2, p: Point2, q: Point2) -> float:
    """Cross product (p - o) x (q - o)."""
    return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x)


def _snap(v: float, tol: float = SNAP_TOL) -> float:
    return 0.0 if abs(v) <= tol else v


def _in_convex_polygon(pt: Point2, poly, tol: float = SNAP_TOL) -> bool:
    """Membership in a counterclockwise convex polygon, boundary included."""
    for i in range(len(poly)):
        if _snap(_cross(poly[i], poly[(i + 1) % len(poly)], pt), tol) < 0:
            return False
    return True


def region_polygons(N: int):
    """Counterclockwise vertex lists of each region in barycentric coordinates.

    Ordered by the boundary tie-break priority: SEPARABLE > A'FCE >
    A'HBF > A'DH (for N = 3: SEPARABLE > A'CE > A'BD > A'BC, which keeps
    the vertices B and C in the regions the state-space figures assign
    them to).
    """
    ch = normalized_chart(N)
    if N == 3:
        # degenerate landmarks: F = C, H = B
        return [
            (Region.SEPARABLE, (ch.a, ch.d, ch.a_prime, ch.e)),
            (Region.TRI_APRIME_CE, (ch.a_prime, ch.c, ch.e)),
            (Region.TRI_APRIME_BD, (ch.a_prime, ch.d, ch.b)),
            (Region.TRI_APRIME_BC, (ch.a_prime, ch.b, ch.c)),
        ]
    return [
        (Region.SEPARABLE, (ch.a, ch.d, ch.a_prime, ch.e)),
        (Region.POLY_APRIME_FCE, (ch.a_prime, ch.f, ch.c, ch.e)),
        (Region.POLY_APRIME_HBF, (ch.a_prime, ch.h, ch.b, ch.f)),
        (Region.TRI_APRIME_DH, (ch.a_prime, ch.d, ch.h)),
    ]


def classify_region(N: int, coords: NormalizedCoords) -> Region:
    """Region of the chart containing the state.

    Boundary points are assigned by the priority
    SEPARABLE > A'FCE > A'HBF > A'DH (for N = 3: SEPARABLE > A'CE >
    A'BD > A'BC); continuity of the closed forms across boundaries makes
    the choice value-neutral.
    """
    _check_n(N)
    pt = Point2(coords.ahat_lo, coords.ahat_mid)
    if pt.x < -SNAP_TOL or pt.y < -SNAP_TOL or pt.x + pt.y > 1.0 + SNAP_TOL:
        raise ValueError(f"point {pt} lies outside the state simplex")
    regions = region_polygons(N)
    for region, poly in regions:
        if _in_convex_polygon(pt, poly):
            return region
    # numerically squeezed between two region boundaries: retry with a
    # coarser snap (the adjacent closed forms agree there anyway)
    for region, poly in regions:
        if _in_convex_polygon(pt, poly, tol=1e-9):
            return region
    raise ValueError(f"point {pt} could not be classified")  # pragma: no cover


def _shoelace(points) -> float:
    area = 0.0
    for i in range(len(points)):
        p, q = points[i], points[(i + 1) % len(points)]
        area += p.x * q.y - q.x * p.y
    return abs(area) / 2.0


def polygon_area_ratio(N: int) -> float:
    """area(ADA'E) / area(ABC) in raw coordinates; tends to 1 as N grows."""
    _check_n(N)
    A, B3, C3 = simplex_vertices(N)
    triangle = [Point2(0.0, 0.0), Point2(B3[0], 0.0), Point2(0.0, C3[1])]
    return _shoelace(ppt_polygon(N)) / _shoelace(triangle)
