"""Lattice diameter, slab normalization, and the type I-VI classification
of polygons free of n*Z^2 points.

The classification works on a normalized image: the polygon is moved by an
affine automorphism of n*Z^2 into the slab -n+1 <= x1 <= 2n-1, with its
longest lattice string on a vertical line x1 = c, 0 <= c <= n-1, and with
its chords on the lines x1 = 0 and x1 = n confined to the unit-square
sides.  A decision table over which canonical segments split the image
then picks the type and the finishing automorphism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import E2, ORIGIN, AffineMap, Mat2, Sublattice, Vec, primitive_to
from .polygon import (
    Line,
    Polygon,
    Segment,
    apply_affine,
    bounding_stats,
    chord_interval,
    lattice_points_in,
    line_splits,
    polygon_free_of,
    segment_splits,
)


class NotLatticeFreeError(ValueError):
    """Raised when an operation requires an n*Z^2-free polygon."""


class ClassificationError(RuntimeError):
    """Raised when no classification row applies; must never fire."""


class DiameterWitness(NamedTuple):
    length: int
    segment: Segment


class TypeTag(NamedTuple):
    kind: str  # one of "I".."VI"
    n: int


@dataclass(frozen=True)
class NormalizationResult:
    map: AffineMap
    image: Polygon
    diameter_line_c: int


def lattice_diameter(poly: Polygon) -> DiameterWitness:
    """Longest string of collinear integer points in the polygon, minus one.

    Quadratic in the number of interior lattice points; ties are broken by
    the lexicographically smallest endpoint pair.
    """
    pts = lattice_points_in(poly)
    best = -1
    best_pair: Optional[tuple[Vec, Vec]] = None
    for i in range(len(pts)):
        p = pts[i]
        for j in range(i + 1, len(pts)):
            q = pts[j]
            g = math.gcd(q.x1 - p.x1, q.x2 - p.x2)
            if g > best:
                best = g
                best_pair = (p, q)
    assert best_pair is not None and best >= 1
    return DiameterWitness(best, Segment(*best_pair))


def _chord_cell_index(poly: Polygon, x1: int, n: int) -> int:
    """Index u with the vertical chord at x1 inside the open strip (u*n, (u+1)*n).

    Zero when the line misses the polygon.  The chord of an n*Z^2-free
    polygon cannot touch a multiple of n, which the caller relies on.
    """
    chord = chord_interval(poly, Line.vertical(x1))
    if chord is None:
        return 0
    lo, hi = chord
    u = math.floor(lo / n)
    assert u * n < lo and hi < (u + 1) * n, "chord touches a forbidden lattice point"
    return u


def _chord_shear(poly: Polygon, n: int) -> AffineMap:
    """The vertical shear fixing x1 that moves the chords at x1 = 0 and
    x1 = n into the segments [(0,0),(0,n)] and [(n,0),(n,n)]."""
    u1 = _chord_cell_index(poly, 0, n)
    u2 = _chord_cell_index(poly, n, n)
    return AffineMap(Mat2(1, 0, u1 - u2, 1), Vec(0, -u1 * n))


def slab_normalize(poly: Polygon, n: int) -> NormalizationResult:
    """Move an n*Z^2-free polygon into the slab -n+1 <= x1 <= 2n-1.

    The composed map is an affine automorphism of n*Z^2.  The image carries
    a longest lattice string on a line x1 = c with 0 <= c <= n-1, and its
    chords on x1 = 0 and x1 = n (when nonempty) lie on the unit-square
    sides [(0,0),(0,n)] and [(n,0),(n,n)].
    """
    if n < 2:
        raise ValueError("slab normalization needs n >= 2")
    lattice = Sublattice.rectangular(n, n)
    if not polygon_free_of(poly, lattice):
        raise NotLatticeFreeError("polygon not lattice-free")

    wit = lattice_diameter(poly)
    p, q = wit.segment
    d = q - p
    g = math.gcd(d.x1, d.x2)
    direction = Vec(d.x1 // g, d.x2 // g)
    rotate = AffineMap(primitive_to(direction, E2), ORIGIN)

    m_line = rotate(p).x1
    shift_count, c = divmod(m_line, n)
    move = AffineMap.translate(Vec(-shift_count * n, 0)).compose(rotate)
    image = apply_affine(poly, move)

    shear = _chord_shear(image, n)
    full = shear.compose(move)
    image = apply_affine(image, shear)

    stats = bounding_stats(image)
    assert -n + 1 <= stats.west and stats.east <= 2 * n - 1, "normalized image escapes the slab"
    assert full.is_automorphism_of(lattice)
    return NormalizationResult(full, image, c)


def check_diameter_slab_bound(poly: Polygon) -> bool:
    """Width bound from the lattice diameter, for a polygon containing
    (0,0) and (0, diameter).

    True iff the polygon lies in |x1| <= diameter + 2 and no integer point
    of the polygon sits on the lines x1 = +-(diameter + 1).
    """
    ell = lattice_diameter(poly).length
    if not (poly.contains(ORIGIN) and poly.contains(Vec(0, ell))):
        raise ValueError("polygon must contain (0,0) and (0, diameter)")
    stats = bounding_stats(poly)
    if stats.west < -(ell + 2) or stats.east > ell + 2:
        return False
    for x1 in (ell + 1, -(ell + 1)):
        chord = chord_interval(poly, Line.vertical(x1))
        if chord is not None and math.floor(chord[1]) >= math.ceil(chord[0]):
            return False
    return True


def check_split_exclusion(poly: Polygon, n: int) -> bool:
    """The two diagonal pairs of outer unit-square segments cannot both split.

    True iff neither {[(0,n),(-n,n)], [(n,0),(2n,0)]} nor
    {[(0,0),(-n,0)], [(n,n),(2n,n)]} is a pair of simultaneous splitters.
    """
    pair1 = segment_splits(poly, Segment(Vec(0, n), Vec(-n, n))) and segment_splits(
        poly, Segment(Vec(n, 0), Vec(2 * n, 0))
    )
    pair2 = segment_splits(poly, Segment(Vec(0, 0), Vec(-n, 0))) and segment_splits(
        poly, Segment(Vec(n, n), Vec(2 * n, n))
    )
    return not pair1 and not pair2


# --- type predicates -------------------------------------------------------


def _in_axis_slab(lo: int, hi: int, n: int) -> bool:
    return hi <= (lo // n + 1) * n


def satisfies_type(poly: Polygon, tag: TypeTag) -> bool:
    """Re-verify the defining split/containment clause of a type tag."""
    n = tag.n
    s = bounding_stats(poly)

    def seg(a: tuple[int, int], b: tuple[int, int]) -> bool:
        return segment_splits(poly, Segment(Vec(*a), Vec(*b)))

    left = seg((0, 0), (0, n))
    right = seg((n, 0), (n, n))
    bottom_mid = seg((0, 0), (n, 0))
    top_mid = seg((0, n), (n, n))

    if tag.kind == "I":
        return _in_axis_slab(s.west, s.east, n) or _in_axis_slab(s.south, s.north, n)
    if tag.kind == "II":
        return bottom_mid and right and top_mid and left
    if tag.kind == "III":
        return (
            bottom_mid
            and right
            and top_mid
            and not line_splits(poly, Line.vertical(0))
        )
    if tag.kind == "IV":
        away = not (s.west <= -n <= s.east) and not (s.west <= 2 * n <= s.east)
        return left and bottom_mid and right and seg((n, n), (2 * n, n)) and away
    if tag.kind == "V":
        return (
            seg((0, 0), (-n, 0))
            and left
            and not line_splits(poly, Line.vertical(-n))
            and not line_splits(poly, Line.horizontal(n))
        )
    if tag.kind == "VI":
        return (
            seg((0, 0), (-n, 0))
            and left
            and top_mid
            and not line_splits(poly, Line.vertical(n))
            and not line_splits(poly, Line.vertical(-n))
        )
    raise ValueError(f"unknown type tag {tag.kind!r}")


# --- classification --------------------------------------------------------


def _refl_x1_half(n: int) -> AffineMap:
    # x -> (n - x1, x2)
    return AffineMap(Mat2(-1, 0, 0, 1), Vec(n, 0))


def _refl_x2_half(n: int) -> AffineMap:
    # x -> (x1, n - x2)
    return AffineMap(Mat2(1, 0, 0, -1), Vec(0, n))


def _refl_x1_axis() -> AffineMap:
    # x -> (-x1, x2)
    return AffineMap(Mat2(-1, 0, 0, 1), ORIGIN)


def _rot90_shift(n: int) -> AffineMap:
    # x -> (n - x2, x1)
    return AffineMap(Mat2(0, -1, 1, 0), Vec(n, 0))


def _swap_axes() -> AffineMap:
    # x -> (x2, x1)
    return AffineMap(Mat2(0, 1, 1, 0), ORIGIN)


def _point_refl(n: int) -> AffineMap:
    # x -> (n - x1, n - x2)
    return AffineMap(Mat2(-1, 0, 0, -1), Vec(n, n))


def _split_index(poly: Polygon, y: int, n: int) -> int:
    """Which of the three unit segments on the line x2 = y splits the polygon.

    Returns 1, 2 or 3 for [(-n,y),(0,y)], [(0,y),(n,y)], [(n,y),(2n,y)],
    or 0 when none does.  Freeness makes the choice unique.
    """
    for idx, (a, b) in enumerate([(-n, 0), (0, n), (n, 2 * n)], start=1):
        if segment_splits(poly, Segment(Vec(a, y), Vec(b, y))):
            return idx
    return 0


# Decision rows: split profile -> (type kind, finishing maps applied in order).
# Case B is the one-vertical-line configuration (the line x1 = 0 splits after
# an optional reflection); case C has both x1 = 0 and x1 = n splitting.
_CASE_B_ROWS: dict[tuple[int, int], tuple[str, tuple[str, ...]]] = {
    (0, 0): ("I", ()),
    (1, 0): ("V", ()),
    (0, 1): ("V", ("refl_x2_half",)),
    (2, 0): ("V", ("refl_x1_axis",)),
    (0, 2): ("V", ("refl_x2_half", "refl_x1_axis")),
    (1, 1): ("III", ("shift_right",)),
    (2, 2): ("III", ("refl_x1_half",)),
    (1, 2): ("VI", ()),
    (2, 1): ("VI", ("refl_x2_half",)),
}

_CASE_C_ROWS: dict[tuple[int, int], tuple[str, tuple[str, ...]]] = {
    (0, 0): ("I", ()),
    (2, 2): ("II", ()),
    (2, 0): ("III", ("rot90_shift",)),
    (0, 2): ("III", ("swap_axes",)),
    (2, 3): ("IV", ()),
    (1, 2): ("IV", ("point_refl",)),
    (2, 1): ("IV", ("refl_x1_half",)),
    (3, 2): ("IV", ("refl_x2_half",)),
}

_FORBIDDEN_C = {(3, 1), (1, 3)}


def _named_map(name: str, n: int) -> AffineMap:
    if name == "refl_x1_half":
        return _refl_x1_half(n)
    if name == "refl_x2_half":
        return _refl_x2_half(n)
    if name == "refl_x1_axis":
        return _refl_x1_axis()
    if name == "rot90_shift":
        return _rot90_shift(n)
    if name == "swap_axes":
        return _swap_axes()
    if name == "point_refl":
        return _point_refl(n)
    if name == "shift_right":
        return AffineMap.translate(Vec(n, 0))
    raise ValueError(name)


def classify_type(poly: Polygon, n: int) -> tuple[AffineMap, TypeTag]:
    """Classify an n*Z^2-free polygon into one of the types I-VI.

    Returns an affine automorphism of n*Z^2 together with the tag; applying
    the map to the polygon yields an image that satisfies the tag's clause,
    which callers can re-verify with :func:`satisfies_type`.
    """
    norm = slab_normalize(poly, n)
    image, total = norm.image, norm.map

    left = line_splits(image, Line.vertical(0))
    right = line_splits(image, Line.vertical(n))

    if not left and not right:
        tag = TypeTag("I", n)
        if satisfies_type(image, tag):
            return total, tag
        return _search_classification(poly, image, total, n)

    if right and not left:
        refl = _refl_x1_half(n)
        image = apply_affine(image, refl)
        total = refl.compose(total)
        left, right = True, False

    i = _split_index(image, 0, n)
    j = _split_index(image, n, n)
    rows = _CASE_C_ROWS if right else _CASE_B_ROWS
    if right and (i, j) in _FORBIDDEN_C:
        raise ClassificationError("classification failure: excluded split pair occurred")

    row = rows.get((i, j))
    if row is not None:
        kind, map_names = row
        for name in map_names:
            step = _named_map(name, n)
            image = apply_affine(image, step)
            total = step.compose(total)
        tag = TypeTag(kind, n)
        if satisfies_type(image, tag):
            return total, tag

    return _search_classification(poly, image, total, n)


_DIHEDRAL = (
    Mat2(1, 0, 0, 1),
    Mat2(-1, 0, 0, 1),
    Mat2(1, 0, 0, -1),
    Mat2(-1, 0, 0, -1),
    Mat2(0, 1, 1, 0),
    Mat2(0, -1, 1, 0),
    Mat2(0, 1, -1, 0),
    Mat2(0, -1, -1, 0),
)

_KIND_ORDER = ("I", "II", "III", "IV", "V", "VI")


def _search_classification(
    original: Polygon, image: Polygon, total: AffineMap, n: int
) -> tuple[AffineMap, TypeTag]:
    """Fallback: search the automorphism family used by the table
    (axis symmetries, n-translations, chord shears) for a typed position."""
    for lin in _DIHEDRAL:
        base = AffineMap(lin, ORIGIN)
        cand = apply_affine(image, base)
        stats = bounding_stats(cand)
        for k in range(stats.west // n - 1, stats.east // n + 2):
            shifted_map = AffineMap.translate(Vec(-k * n, 0)).compose(base)
            shifted = apply_affine(image, shifted_map)
            shear = _chord_shear(shifted, n)
            for extra in (AffineMap.identity(), shear):
                m2 = extra.compose(shifted_map)
                p2 = apply_affine(image, m2)
                st2 = bounding_stats(p2)
                for t in range(st2.south // n - 1, st2.north // n + 2):
                    m3 = AffineMap.translate(Vec(0, -t * n)).compose(m2)
                    p3 = apply_affine(image, m3)
                    for kind in _KIND_ORDER:
                        tag = TypeTag(kind, n)
                        if satisfies_type(p3, tag):
                            return m3.compose(total), tag
    raise ClassificationError("classification failure")
