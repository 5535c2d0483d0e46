"""Exact convex lattice-polygon geometry.

Polygons are closed regions: boundary points count as contained.  All
predicates are computed in integer or rational arithmetic, never floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .core import AffineMap, Sublattice, Vec


class GeometryError(ValueError):
    """Raised for geometric input that violates a precondition."""


class DegenerateHullError(GeometryError):
    """Raised when a point set has no two-dimensional convex hull."""


class Segment(NamedTuple):
    a: Vec
    b: Vec


@dataclass(frozen=True)
class Line:
    """An oriented line through ``anchor`` with direction ``direction``."""

    anchor: Vec
    direction: Vec

    @classmethod
    def vertical(cls, c: int) -> "Line":
        return cls(Vec(c, 0), Vec(0, 1))

    @classmethod
    def horizontal(cls, c: int) -> "Line":
        return cls(Vec(0, c), Vec(1, 0))

    @classmethod
    def through(cls, p: Vec, q: Vec) -> "Line":
        if p == q:
            raise GeometryError("line needs two distinct points")
        return cls(p, q - p)

    def side(self, p: Vec) -> int:
        """Sign of the oriented position of p: +1 left, -1 right, 0 on the line."""
        c = self.direction.cross(p - self.anchor)
        return (c > 0) - (c < 0)


def _half(v: Vec) -> int:
    # 0 for directions with angle in [0, pi), 1 for [pi, 2*pi)
    return 0 if (v.x2 > 0 or (v.x2 == 0 and v.x1 > 0)) else 1


def _angle_less(a: Vec, b: Vec) -> bool:
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha < hb
    return a.cross(b) > 0


class Polygon:
    """A strictly convex lattice polygon, stored counter-clockwise.

    The vertex tuple is rotated so it starts at the lexicographically
    smallest vertex, which makes equality and serialisation canonical.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Iterable[Vec]):
        verts = tuple(Vec(int(v[0]), int(v[1])) for v in vertices)
        if len(verts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        m = len(verts)
        edges = [verts[(i + 1) % m] - verts[i] for i in range(m)]
        descents = 0
        for i in range(m):
            e, f = edges[i], edges[(i + 1) % m]
            if e.cross(f) <= 0:
                raise GeometryError("vertices are not strictly convex counter-clockwise")
            if not _angle_less(e, f):
                descents += 1
        if descents != 1:
            raise GeometryError("vertex cycle winds more than once")
        start = verts.index(min(verts))
        self.vertices = verts[start:] + verts[:start]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Polygon({list(self.vertices)!r})"

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[Vec, Vec]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def area2(self) -> int:
        """Doubled area (always a positive integer)."""
        total = 0
        for a, b in self.edges():
            total += a.cross(b)
        return total

    def contains(self, p: Vec) -> bool:
        return all((b - a).cross(p - a) >= 0 for a, b in self.edges())

    def contains_strictly(self, p: Vec) -> bool:
        return all((b - a).cross(p - a) > 0 for a, b in self.edges())

    def to_obj(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_obj(cls, obj: dict) -> "Polygon":
        pts = [Vec(int(x1), int(x2)) for x1, x2 in obj["vertices"]]
        return convex_hull(pts)


def convex_hull(points: Iterable[Vec]) -> Polygon:
    """Strict convex hull (monotone chain); collinear boundary points are dropped."""
    pts = sorted({Vec(int(p[0]), int(p[1])) for p in points})
    if len(pts) < 3:
        raise DegenerateHullError("degenerate hull: fewer than 3 distinct points")

    def build(seq: list[Vec]) -> list[Vec]:
        chain: list[Vec] = []
        for p in seq:
            while len(chain) >= 2 and (chain[-1] - chain[-2]).cross(p - chain[-2]) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHullError("degenerate hull: points are collinear")
    return Polygon(hull)


def lattice_points_in(poly: Polygon) -> list[Vec]:
    """All integer points inside or on the polygon, in lexicographic order.

    Each horizontal row is clipped exactly: the rational x-interval comes
    from edge intersections and is then rounded inward.
    """
    ys = [v.x2 for v in poly.vertices]
    points: list[Vec] = []
    for y in range(min(ys), max(ys) + 1):
        xs: list[Fraction] = []
        for a, b in poly.edges():
            lo, hi = min(a.x2, b.x2), max(a.x2, b.x2)
            if lo <= y <= hi:
                if a.x2 == b.x2:
                    xs.append(Fraction(a.x1))
                    xs.append(Fraction(b.x1))
                else:
                    t = Fraction(y - a.x2, b.x2 - a.x2)
                    xs.append(a.x1 + t * (b.x1 - a.x1))
        if not xs:
            continue
        for x in range(math.ceil(min(xs)), math.floor(max(xs)) + 1):
            points.append(Vec(x, y))
    points.sort()
    return points


class PickResult(NamedTuple):
    area2: int
    interior: int
    boundary: int
    holds: bool


def pick_identity(poly: Polygon) -> PickResult:
    """Doubled area versus lattice point counts: area2 = 2*interior + boundary - 2."""
    area2 = poly.area2()
    boundary = sum(math.gcd(b.x1 - a.x1, b.x2 - a.x2) for a, b in poly.edges())
    interior = len(lattice_points_in(poly)) - boundary
    return PickResult(area2, interior, boundary, area2 == 2 * interior + boundary - 2)


def polygon_free_of(poly: Polygon, lattice: Sublattice) -> bool:
    """True iff no lattice point lies inside or on the polygon."""
    return not any(lattice.contains(p) for p in lattice_points_in(poly))


class BoundingStats(NamedTuple):
    """Axis extrema of a polygon and their ranges along the touching faces."""

    north: int
    north_minus: int
    north_plus: int
    south: int
    south_minus: int
    south_plus: int
    west: int
    west_minus: int
    west_plus: int
    east: int
    east_minus: int
    east_plus: int


def bounding_stats(poly: Polygon) -> BoundingStats:
    vs = poly.vertices
    north = max(v.x2 for v in vs)
    south = min(v.x2 for v in vs)
    west = min(v.x1 for v in vs)
    east = max(v.x1 for v in vs)
    at_n = [v.x1 for v in vs if v.x2 == north]
    at_s = [v.x1 for v in vs if v.x2 == south]
    at_w = [v.x2 for v in vs if v.x1 == west]
    at_e = [v.x2 for v in vs if v.x1 == east]
    return BoundingStats(
        north, min(at_n), max(at_n),
        south, min(at_s), max(at_s),
        west, min(at_w), max(at_w),
        east, min(at_e), max(at_e),
    )


def line_splits(poly: Polygon, line: Line) -> bool:
    """True iff the polygon has vertices strictly on both sides of the line."""
    sides = [line.side(v) for v in poly.vertices]
    return any(s > 0 for s in sides) and any(s < 0 for s in sides)


def chord_interval(poly: Polygon, line: Line) -> Optional[tuple[Fraction, Fraction]]:
    """Parameter interval of ``poly`` on the line ``anchor + t*direction``.

    Returns None when the line misses the polygon.
    """
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for a, b in poly.edges():
        e = b - a
        beta = e.cross(line.direction)
        alpha = e.cross(line.anchor - a)
        if beta == 0:
            if alpha < 0:
                return None
            continue
        bound = Fraction(-alpha, beta)
        if beta > 0:
            if lo is None or bound > lo:
                lo = bound
        else:
            if hi is None or bound < hi:
                hi = bound
    assert lo is not None and hi is not None
    if lo > hi:
        return None
    return lo, hi


def segment_splits(poly: Polygon, seg: Segment) -> bool:
    """True iff the supporting line splits the polygon and the chord lies within the segment."""
    line = Line.through(seg.a, seg.b)
    if not line_splits(poly, line):
        return False
    chord = chord_interval(poly, line)
    assert chord is not None
    lo, hi = chord
    return lo >= 0 and hi <= 1


def ray_splits(poly: Polygon, origin: Vec, direction: Vec) -> bool:
    """True iff the supporting line splits the polygon and the chord lies on the ray."""
    line = Line(origin, direction)
    if not line_splits(poly, line):
        return False
    chord = chord_interval(poly, line)
    assert chord is not None
    return chord[0] >= 0


def apply_affine(poly: Polygon, m: AffineMap) -> Polygon:
    """Map the polygon by a unimodular affine map, renormalising orientation."""
    if not m.linear.is_unimodular():
        raise GeometryError("affine map must have a unimodular linear part")
    verts = [m(v) for v in poly.vertices]
    if m.linear.det() < 0:
        verts.reverse()
    return Polygon(verts)
