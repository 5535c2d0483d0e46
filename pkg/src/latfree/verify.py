"""Desk-scale verification of the vertex-count threshold.

The threshold nu(delta, n) = 2n + 2*min(delta, 3) - 3 is the number of
vertices that forces a convex integer polygon to contain a point of any
sublattice with invariant factors (delta, n).  This module builds the
extremal (nu - 1)-gons, exhaustively enumerates lattice-free polygons over
bounded boxes, and replays the type-II inequality pipeline as computation.

The enumeration is a DFS over convex chains: candidate points are scanned
in (x2, x1) order, each chain starts at the polygon's lowest vertex and
grows counter-clockwise with strictly increasing edge angles, and a branch
is pruned as soon as the fan triangle it adds covers a forbidden lattice
point (growing a convex polygon only ever adds covered points, so the
pruning is sound).  The worst case is exponential; boxes are meant to stay
around 9x9 candidate grids.
"""

from __future__ import annotations

import math
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .core import E1, E2, Sublattice, Vec, steps
from .polygon import Polygon, bounding_stats, lattice_points_in, polygon_free_of
from .reduction import TypeTag, satisfies_type
from .slopes import (
    CheckReport,
    Frame,
    _finish,
    check_projection_bound,
    check_step_bounds,
    check_sublattice_projection_bound,
    frame_splits_maximal,
    maximal_slopes,
    slope_profile,
)


def _pool(jobs: int) -> ProcessPoolExecutor:
    # spawned workers avoid fork-while-threaded deadlocks in host processes
    return ProcessPoolExecutor(
        max_workers=jobs, mp_context=multiprocessing.get_context("spawn")
    )


class SearchBox(NamedTuple):
    x1_min: int
    x1_max: int
    x2_min: int
    x2_max: int

    @classmethod
    def parse(cls, text: str) -> "SearchBox":
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("box must be x1min,x1max,x2min,x2max")
        box = cls(*parts)
        if box.x1_min > box.x1_max or box.x2_min > box.x2_max:
            raise ValueError("box must be nonempty")
        return box

    def to_obj(self) -> list[int]:
        return list(self)


def critical_vertex_count(delta: int, n: int) -> int:
    """The vertex count forcing a lattice point: 2n + 2*min(delta, 3) - 3."""
    if delta < 1 or n < 1 or n % delta != 0:
        raise ValueError("(delta, n) is not a valid invariant factor pair")
    if delta * n < 2:
        raise ValueError("the lattice must be a proper sublattice")
    return 2 * n + 2 * min(delta, 3) - 3


def construct_extremal(delta: int, n: int) -> Polygon:
    """A polygon with critical_vertex_count - 1 vertices avoiding delta*Z x n*Z.

    Two vertices sit on every usable horizontal row; the quadratic chains
    x1 = 1 - j(n - j) on the left and x1 = 2 + j(n - j) on the right keep
    the profile strictly convex.  For delta >= 3 the rows 0..n each carry
    two vertices; for delta = 2 the outer rows carry one vertex each; for
    delta = 1 only the interior rows 1..n-1 are used.
    """
    nu = critical_vertex_count(delta, n)
    if nu <= 3:
        raise ValueError("no extremal polygon exists")
    right: list[Vec] = []
    left: list[Vec] = []
    if delta >= 3:
        for j in range(n + 1):
            bulge = j * (n - j)
            right.append(Vec(2 + bulge, j))
            left.append(Vec(1 - bulge, j))
        verts = right + left[::-1]
    elif delta == 2:
        for j in range(1, n):
            bulge = j * (n - j)
            right.append(Vec(2 + bulge, j))
            left.append(Vec(1 - bulge, j))
        verts = [Vec(1, 0)] + right + [Vec(1, n)] + left[::-1]
    else:
        m = n - 2
        for j in range(1, n):
            bulge = (j - 1) * (m - (j - 1))
            right.append(Vec(2 + bulge, j))
            left.append(Vec(1 - bulge, j))
        verts = right + left[::-1]
    poly = Polygon(verts)
    assert len(poly) == nu - 1
    assert polygon_free_of(poly, Sublattice.rectangular(delta, n))
    return poly


# --- exhaustive enumeration --------------------------------------------------


def _prepare(lattice: Sublattice, box: SearchBox) -> tuple[list, list]:
    cand = []
    lpts = []
    for y in range(box.x2_min, box.x2_max + 1):
        for x in range(box.x1_min, box.x1_max + 1):
            if lattice.contains(Vec(x, y)):
                lpts.append((x, y))
            else:
                cand.append((x, y))
    return cand, lpts


def _chains(
    cand: list, lpts: list, i0: int, min_v: int, stats: list
) -> Iterator[tuple]:
    """All convex chains closing into strictly convex CCW polygons whose
    (x2, x1)-lowest vertex is cand[i0], pruned for lattice freeness."""
    p0x, p0y = cand[i0]
    tail = cand[i0 + 1 :]

    def seg_blocked(qx: int, qy: int) -> bool:
        dx, dy = qx - p0x, qy - p0y
        for lx, ly in lpts:
            ex, ey = lx - p0x, ly - p0y
            if dx * ey - dy * ex == 0:
                dot = ex * dx + ey * dy
                if 0 <= dot <= dx * dx + dy * dy:
                    return True
        return False

    def tri_blocked(ux: int, uy: int, vx: int, vy: int) -> bool:
        ax, ay, bx, by = ux, uy, vx, vy
        if (ax - p0x) * (by - p0y) - (ay - p0y) * (bx - p0x) < 0:
            ax, ay, bx, by = vx, vy, ux, uy
        for lx, ly in lpts:
            if (ax - p0x) * (ly - p0y) - (ay - p0y) * (lx - p0x) < 0:
                continue
            if (bx - ax) * (ly - ay) - (by - ay) * (lx - ax) < 0:
                continue
            if (p0x - bx) * (ly - by) - (p0y - by) * (lx - bx) < 0:
                continue
            return True
        return False

    chain = [(p0x, p0y)]

    def extend(udx: int, udy: int, fdx: int, fdy: int) -> Iterator[tuple]:
        stats[0] += 1
        ux, uy = chain[-1]
        if len(chain) >= min_v:
            cdx, cdy = p0x - ux, p0y - uy
            if udx * cdy - udy * cdx > 0 and cdx * fdy - cdy * fdx > 0:
                hu = 0 if (udy > 0 or (udy == 0 and udx > 0)) else 1
                hc = 0 if (cdy > 0 or (cdy == 0 and cdx > 0)) else 1
                if hu <= hc:
                    yield tuple(chain)
        for vx, vy in tail:
            dx, dy = vx - ux, vy - uy
            if udx * dy - udy * dx <= 0:
                continue
            hu = 0 if (udy > 0 or (udy == 0 and udx > 0)) else 1
            hd = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
            if hu > hd:
                continue
            if tri_blocked(ux, uy, vx, vy):
                continue
            chain.append((vx, vy))
            yield from extend(dx, dy, fdx, fdy)
            chain.pop()

    for vx, vy in tail:
        if seg_blocked(vx, vy):
            continue
        dx, dy = vx - p0x, vy - p0y
        chain.append((vx, vy))
        yield from extend(dx, dy, dx, dy)
        chain.pop()


def enumerate_free_polygons(
    lattice: Sublattice, box: SearchBox, min_vertices: int = 3
) -> Iterator[Polygon]:
    """Every strictly convex polygon with at least min_vertices vertices,
    vertices in the box but not on the lattice, and no lattice point
    inside or on it.  Deterministic order."""
    min_v = max(3, min_vertices)
    cand, lpts = _prepare(lattice, box)
    stats = [0]
    for i0 in range(len(cand)):
        for chain in _chains(cand, lpts, i0, min_v, stats):
            yield Polygon(chain)


def _scan_slice(args: tuple) -> tuple:
    lattice, box, lo, hi, step = args
    cand, lpts = _prepare(lattice, box)
    stats = [0]
    best_len = 0
    best_chain: Optional[tuple] = None
    found = 0
    for i0 in range(lo, hi, step):
        for chain in _chains(cand, lpts, i0, 3, stats):
            found += 1
            k = len(chain)
            if k > best_len or (k == best_len and (best_chain is None or chain < best_chain)):
                best_len, best_chain = k, chain
    return best_len, best_chain, found, stats[0]


def _collect_start(args: tuple) -> list[tuple]:
    lattice, box, i0, min_v = args
    cand, lpts = _prepare(lattice, box)
    return list(_chains(cand, lpts, i0, min_v, [0]))


def enumerate_free_polygons_parallel(
    lattice: Sublattice, box: SearchBox, min_vertices: int = 3, jobs: int = 1
) -> Iterator[Polygon]:
    """Same stream as :func:`enumerate_free_polygons`, same order, but the
    per-start-vertex searches run on a worker pool."""
    if jobs <= 1:
        yield from enumerate_free_polygons(lattice, box, min_vertices)
        return
    min_v = max(3, min_vertices)
    cand, _ = _prepare(lattice, box)
    tasks = [(lattice, box, i0, min_v) for i0 in range(len(cand))]
    with _pool(jobs) as pool:
        for chains in pool.map(_collect_start, tasks, chunksize=4):
            for chain in chains:
                yield Polygon(chain)


@dataclass(frozen=True)
class VerificationReport:
    lattice: Sublattice
    box: SearchBox
    max_vertices_found: int
    witness: Optional[Polygon]
    nu: int
    consistent: bool
    instances_checked: int
    chains_explored: int
    elapsed_seconds: float

    def to_obj(self) -> dict:
        return {
            "lattice": self.lattice.to_obj(),
            "box": self.box.to_obj(),
            "max_vertices_found": self.max_vertices_found,
            "witness": None if self.witness is None else self.witness.to_obj(),
            "nu": self.nu,
            "consistent": self.consistent,
            "instances_checked": self.instances_checked,
            "chains_explored": self.chains_explored,
            "elapsed_seconds": self.elapsed_seconds,
        }


def default_box(lattice: Sublattice) -> SearchBox:
    """The canonical slab-sized box: both coordinates in [-n+1, 2n-1]."""
    n = lattice.n
    return SearchBox(-n + 1, 2 * n - 1, -n + 1, 2 * n - 1)


def verify_vertex_threshold(
    lattice: Sublattice, box: Optional[SearchBox] = None, jobs: int = 1
) -> VerificationReport:
    """Exhaustively check that no lattice-free polygon in the box has more
    than nu - 1 vertices.  Results are independent of the job count."""
    if not lattice.is_proper():
        raise ValueError("the lattice must be a proper sublattice of Z^2")
    if box is None:
        box = default_box(lattice)
    nu = critical_vertex_count(lattice.delta, lattice.n)
    start = time.perf_counter()
    cand, _ = _prepare(lattice, box)

    slices: list[tuple] = []
    jobs = max(1, jobs)
    if jobs == 1:
        slices.append((lattice, box, 0, len(cand), 1))
        results = [_scan_slice(slices[0])]
    else:
        parts = min(jobs * 4, max(1, len(cand)))
        slices = [(lattice, box, r, len(cand), parts) for r in range(parts)]
        with _pool(jobs) as pool:
            results = list(pool.map(_scan_slice, slices))

    best_len = 0
    best_chain: Optional[tuple] = None
    found = 0
    nodes = 0
    for blen, bchain, f, nd in results:
        found += f
        nodes += nd
        if blen > best_len or (
            blen == best_len and bchain is not None and (best_chain is None or bchain < best_chain)
        ):
            best_len, best_chain = blen, bchain
    witness = Polygon(best_chain) if best_chain is not None else None
    elapsed = time.perf_counter() - start
    return VerificationReport(
        lattice, box, best_len, witness, nu, best_len <= nu - 1, found, nodes, elapsed
    )


# --- statement-level checks ---------------------------------------------------


def _b_parameter(vertex_lattice: Sublattice, n: int) -> int:
    factors = (vertex_lattice.delta, vertex_lattice.n)
    if factors == (1, 1):
        return 0
    if n % 2 == 0 and factors == (1, n // 2):
        return 1
    if factors == (1, n):
        return 2
    raise ValueError(
        "vertex lattice must be Z^2, a (1, n/2)-lattice, or a (1, n)-lattice"
    )


def check_type_vertex_bound(
    poly: Polygon, tag: TypeTag, vertex_lattice: Sublattice
) -> CheckReport:
    """Vertex bound for a typed polygon: 2n+2, 2n or 2n-2 according to
    whether the vertices lie in Z^2, a (1, n/2)- or a (1, n)-lattice."""
    n = tag.n
    if n < 3:
        raise ValueError("the vertex bound applies for n >= 3")
    if not all(vertex_lattice.contains(v) for v in poly.vertices):
        raise ValueError("polygon vertices must belong to the claimed lattice")
    b = _b_parameter(vertex_lattice, n)
    bound = 2 * n + 2 - 2 * b
    details = {"n": n, "b": b, "vertices": len(poly), "bound": bound}
    failures = [] if len(poly) <= bound else ["vertex_bound"]
    return _finish(
        "type_vertex_bound", details, failures,
        {"polygon": poly.to_obj(), "tag": tag.kind},
    )


def type_ii_bound_pipeline(
    poly: Polygon, n: int, vertex_lattice: Sublattice
) -> CheckReport:
    """Replay the inequality chain bounding the vertices of a type II polygon.

    Verifies the four corner frames split the four maximal slopes, bounds
    each doubled slope edge count by the projection inequalities (with the
    sublattice sharpening when b >= 1), bounds each axis face by the large
    steps, and sums the actual instances to 2N <= 4n + 4 - 4b, hence
    N <= 2n + 2 - 2b.
    """
    if not satisfies_type(poly, TypeTag("II", n)):
        raise ValueError("polygon is not in type II position")
    if not all(vertex_lattice.contains(v) for v in poly.vertices):
        raise ValueError("polygon vertices must belong to the claimed lattice")
    b = _b_parameter(vertex_lattice, n)
    failures: list[str] = []
    details: dict = {"n": n, "b": b, "vertices": len(poly)}

    frames = {
        1: Frame(Vec(n, 0), -E1, E2),
        2: Frame(Vec(n, n), -E1, -E2),
        3: Frame(Vec(0, n), E1, -E2),
        4: Frame(Vec(0, 0), E1, E2),
    }
    for k, frame in frames.items():
        if frame_splits_maximal(poly, frame) != k:
            failures.append(f"corner_frame_{k}")

    if b == 2:
        st = steps(vertex_lattice, E1, E2)
        details["large_steps"] = [st.large_f1, st.large_f2]
        if st.large_f1 < 2 or st.large_f2 < 2:
            failures.append("large_steps")

    ms = maximal_slopes(poly)
    stats = bounding_stats(poly)
    adj = (b * b - 3 * b) // 2  # 0 for b=0, -1 for b in {1, 2}
    sum_bounds = 0
    slope_rows = []
    for k, frame in frames.items():
        slope = ms.slope(k)
        prof = slope_profile(frame, slope)
        v, w = prof.coords[0], prof.coords[-1]
        bound = v.x2 + w.x1 + adj
        sum_bounds += bound
        if 2 * slope.n_edges > bound:
            failures.append(f"slope_bound_{k}")
        if b == 0:
            rep = check_projection_bound(frame, slope)
        else:
            rep = check_sublattice_projection_bound(frame, slope, vertex_lattice)
        if not rep.ok:
            failures.append(f"slope_check_{k}")
        slope_rows.append(
            {"k": k, "edges": slope.n_edges, "bound": bound, "check": rep.name}
        )
    details["slopes"] = slope_rows

    step_report = check_step_bounds(poly, vertex_lattice)
    if not step_report.ok:
        failures.append("step_bounds")
    beta = (b * b - b + 2) // 2  # 1 for b in {0, 1}, 2 for b=2
    m_vals = (ms.m1, ms.m2, ms.m3, ms.m4)
    gaps = (
        stats.south_plus - stats.south_minus,
        stats.east_plus - stats.east_minus,
        stats.north_plus - stats.north_minus,
        stats.west_plus - stats.west_minus,
    )
    for idx, (gap, m) in enumerate(zip(gaps, m_vals), start=1):
        if gap < beta * m:
            failures.append(f"face_gap_{idx}")

    n_vertices = len(poly)
    sum_m = sum(m_vals)
    if sum(ms.edge_counts) + sum_m != n_vertices:
        failures.append("boundary_decomposition")
    if sum_bounds != 4 * n + 2 * (b * b - 3 * b) - sum(gaps):
        failures.append("bound_sum_identity")
    two_n = 2 * n_vertices
    mid = sum_bounds + 2 * sum_m
    upper = 4 * n + 2 * b * b - 6 * b + (2 - beta) * sum_m
    final = 4 * n + 4 - 4 * b
    details.update(
        {"two_n": two_n, "sum_bounds": mid, "relaxed": upper, "final": final}
    )
    if not (two_n <= mid <= upper <= final):
        failures.append("summed_chain")
    if not n_vertices <= 2 * n + 2 - 2 * b:
        failures.append("vertex_bound")
    return _finish(
        "type_ii_bound_pipeline", details, failures,
        {"polygon": poly.to_obj(), "lattice": vertex_lattice.to_obj()},
    )


def check_pentagon_parity(poly: Polygon) -> CheckReport:
    """Every integer pentagon has two vertices congruent mod 2, and the
    segment between them holds at least three integer points."""
    if len(poly) != 5:
        raise ValueError("parity check applies to pentagons")
    classes: dict[tuple[int, int], list[Vec]] = {}
    for v in poly.vertices:
        classes.setdefault((v.x1 % 2, v.x2 % 2), []).append(v)
    pair = None
    for members in classes.values():
        if len(members) >= 2:
            cand = tuple(sorted(members)[:2])
            if pair is None or cand < pair:
                pair = cand
    failures = []
    details: dict = {}
    if pair is None:
        failures.append("pigeonhole")
    else:
        p, q = pair
        g = math.gcd(q.x1 - p.x1, q.x2 - p.x2)
        details = {"pair": [list(p), list(q)], "segment_points": g + 1}
        if g + 1 < 3:
            failures.append("segment_points")
    return _finish("pentagon_parity", details, failures, {"polygon": poly.to_obj()})


def contains_even_ordinate_point(poly: Polygon) -> bool:
    """True iff some integer point of the polygon has an even x2 coordinate."""
    return any(p.x2 % 2 == 0 for p in lattice_points_in(poly))
