"""Exact rational geometry: points, convex domains, classification, intersection.

Everything is built on `fractions.Fraction`. Predicates are decided exactly,
never by tolerance. All values are immutable and all functions are pure, so
concurrent use needs no synchronization.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Iterator, Optional, Union

from .errors import (
    CollinearOverlap,
    DegenerateDomain,
    DegenerateRay,
    DegenerateSimplex,
    DimensionMismatch,
    NotInAffineHull,
    ParameterOutOfRange,
    PointOutsideDomain,
)

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(value) -> Fraction:
    """Exact scalar from an int or Fraction; floats are refused outright."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact scalar expected, got {type(value).__name__}")


@dataclass(frozen=True)
class Point:
    """Immutable point (also used as a displacement) with exact coordinates."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_scalar(c) for c in self.coords))
        if not self.coords:
            raise DimensionMismatch("a point needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __getitem__(self, index: int) -> Fraction:
        return self.coords[index]

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: "Point") -> "Point":
        _same_dim(self, other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        _same_dim(self, other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, factor) -> "Point":
        k = as_scalar(factor)
        return Point(tuple(k * c for c in self.coords))

    def __repr__(self) -> str:
        return "point(" + ", ".join(str(c) for c in self.coords) + ")"


def point(*coords) -> Point:
    """Shorthand constructor: point(1, 0) or point(Fraction(1, 2), 2)."""
    return Point(tuple(coords))


def _same_dim(a: Point, b: Point) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension {a.dim} vs {b.dim}")


def dot(a: Point, b: Point) -> Fraction:
    _same_dim(a, b)
    return sum((x * y for x, y in zip(a, b)), ZERO)


def cross2(a: Point, b: Point) -> Fraction:
    if a.dim != 2 or b.dim != 2:
        raise DimensionMismatch("planar cross product needs dimension 2")
    return a[0] * b[1] - a[1] * b[0]


class PointClass(Enum):
    """Mutually exclusive classes of a (domain, point) pair."""

    EXTREME = "extreme"
    FLAT = "flat"
    INTRINSIC_CORE = "intrinsic-core"
    OUTSIDE = "outside"


# ---------------------------------------------------------------------------
# exact linear algebra


def _rank(rows: list[list[Fraction]]) -> int:
    """Rank over the rationals by Gaussian elimination (exact)."""
    if not rows:
        return 0
    m = [list(r) for r in rows]
    n_cols = len(m[0])
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        head = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                k = m[i][col] / head[col]
                m[i] = [m[i][j] - k * head[j] for j in range(n_cols)]
        rank += 1
        if rank == len(m):
            break
    return rank


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> Optional[list[Fraction]]:
    """Solve a full-column-rank rational system; None when inconsistent."""
    n = len(matrix[0])
    rows = [list(matrix[i]) + [rhs[i]] for i in range(len(matrix))]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            raise DegenerateSimplex("coefficient columns are linearly dependent")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        head = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                k = rows[i][col] / head[col]
                rows[i] = [rows[i][j] - k * head[j] for j in range(n + 1)]
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n] != 0:
            return None
    return [rows[i][n] / rows[i][pivots[i]] for i in range(n)]


def _fraction_sqrt(value: Fraction) -> Optional[Fraction]:
    """Exact rational square root, or None when the root is irrational."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Simplex:
    """Convex hull of affinely independent vertices (k+1 of them, k <= ambient dim)."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise DegenerateSimplex("a simplex needs at least one vertex")
        d = verts[0].dim
        for v in verts:
            if v.dim != d:
                raise DimensionMismatch("mixed vertex dimensions")
        if len(verts) > d + 1:
            raise DegenerateSimplex(
                f"{len(verts)} vertices cannot be affinely independent in dimension {d}"
            )
        if len(set(verts)) != len(verts):
            raise DegenerateSimplex("repeated vertex")
        diffs = [[v[i] - verts[0][i] for i in range(d)] for v in verts[1:]]
        if _rank(diffs) != len(verts) - 1:
            raise DegenerateSimplex("vertices are affinely dependent")

    @property
    def dim(self) -> int:
        return self.vertices[0].dim

    def vertex_list(self) -> tuple[Point, ...]:
        return self.vertices

    def contains(self, p: Point) -> bool:
        try:
            return all(b >= 0 for b in barycentric(self, p))
        except NotInAffineHull:
            return False


@dataclass(frozen=True)
class Segment:
    """Closed segment between two distinct points of any dimension."""

    a: Point
    b: Point

    def __post_init__(self):
        _same_dim(self.a, self.b)
        if self.a == self.b:
            raise DegenerateDomain("segment endpoints must differ")

    @property
    def dim(self) -> int:
        return self.a.dim

    def vertex_list(self) -> tuple[Point, ...]:
        return (self.a, self.b)

    def chord_param(self, p: Point) -> Optional[Fraction]:
        """Exact parameter with p = a + t*(b-a), or None when p is off the line."""
        _same_dim(self.a, p)
        direction = self.b - self.a
        rel = p - self.a
        i0 = next(i for i, c in enumerate(direction) if c != 0)
        t = rel[i0] / direction[i0]
        for rc, dc in zip(rel, direction):
            if rc != t * dc:
                return None
        return t

    def contains(self, p: Point) -> bool:
        t = self.chord_param(p)
        return t is not None and 0 <= t <= 1


@dataclass(frozen=True)
class ConvexPolygon2D:
    """Strictly convex polygon, vertices listed counterclockwise."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise DegenerateDomain("a polygon needs at least three vertices")
        for v in verts:
            if v.dim != 2:
                raise DimensionMismatch("polygon vertices must be planar")
        if len(set(verts)) != len(verts):
            raise DegenerateDomain("repeated polygon vertex")
        n = len(verts)
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            # strict convex position in counterclockwise order: no reflex or
            # collinear triple anywhere on the cycle
            if cross2(b - a, c - b) <= 0:
                raise DegenerateDomain("vertices must be in strictly convex ccw position")

    @property
    def dim(self) -> int:
        return 2

    def vertex_list(self) -> tuple[Point, ...]:
        return self.vertices

    def edge_values(self, p: Point) -> list[Fraction]:
        """Signed edge tests: all nonnegative iff p is inside, zero on an edge."""
        n = len(self.vertices)
        out = []
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            out.append(cross2(b - a, p - a))
        return out

    def contains(self, p: Point) -> bool:
        if p.dim != 2:
            raise DimensionMismatch("polygon membership needs a planar point")
        return all(h >= 0 for h in self.edge_values(p))


@dataclass(frozen=True)
class EuclideanBall:
    """Closed Euclidean ball; membership is exact via squared norms."""

    center: Point
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", as_scalar(self.radius))
        if self.radius <= 0:
            raise DegenerateDomain("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.dim

    def vertex_list(self) -> None:
        return None

    def contains(self, p: Point) -> bool:
        rel = p - self.center
        return dot(rel, rel) <= self.radius * self.radius


ConvexDomain = Union[Simplex, Segment, ConvexPolygon2D, EuclideanBall]


# ---------------------------------------------------------------------------
# operations


def barycentric(simplex: Simplex, p: Point) -> tuple[Fraction, ...]:
    """Affine coordinates of p over the simplex vertices, exactly.

    Coordinates sum to 1 and may be negative when p lies outside. For a
    lower-dimensional simplex a point off the affine hull has no coordinates
    at all, which raises NotInAffineHull.
    """
    if p.dim != simplex.dim:
        raise DimensionMismatch("point and simplex dimensions differ")
    verts = simplex.vertices
    matrix: list[list[Fraction]] = [[ONE] * len(verts)]
    rhs: list[Fraction] = [ONE]
    for i in range(simplex.dim):
        matrix.append([v[i] for v in verts])
        rhs.append(p[i])
    solution = _solve_exact(matrix, rhs)
    if solution is None:
        raise NotInAffineHull("point is outside the simplex's affine hull")
    return tuple(solution)


def classify_point(domain: ConvexDomain, p: Point) -> PointClass:
    """Exact classification of p relative to the domain.

    Extreme points are not interior to any domain chord; intrinsic-core points
    extend every incoming chord strictly past themselves; flat points are the
    remaining relative-boundary points. Segments and balls never produce FLAT.
    """
    if p.dim != domain.dim:
        raise DimensionMismatch("point and domain dimensions differ")
    if isinstance(domain, Simplex):
        try:
            coords = barycentric(domain, p)
        except NotInAffineHull:
            return PointClass.OUTSIDE
        if any(b < 0 for b in coords):
            return PointClass.OUTSIDE
        if any(b == 1 for b in coords):
            return PointClass.EXTREME
        if all(b > 0 for b in coords):
            return PointClass.INTRINSIC_CORE
        return PointClass.FLAT
    if isinstance(domain, Segment):
        t = domain.chord_param(p)
        if t is None or t < 0 or t > 1:
            return PointClass.OUTSIDE
        if t == 0 or t == 1:
            return PointClass.EXTREME
        return PointClass.INTRINSIC_CORE
    if isinstance(domain, ConvexPolygon2D):
        values = domain.edge_values(p)
        if any(h < 0 for h in values):
            return PointClass.OUTSIDE
        if p in domain.vertices:
            return PointClass.EXTREME
        if any(h == 0 for h in values):
            return PointClass.FLAT
        return PointClass.INTRINSIC_CORE
    if isinstance(domain, EuclideanBall):
        rel = p - domain.center
        gap = domain.radius * domain.radius - dot(rel, rel)
        if gap < 0:
            return PointClass.OUTSIDE
        return PointClass.EXTREME if gap == 0 else PointClass.INTRINSIC_CORE
    raise TypeError(f"unsupported domain {type(domain).__name__}")


def segment_point(v: Point, u: Point, t) -> Point:
    """The chord point v + t*(u - v) for t in [0, 1]."""
    t = as_scalar(t)
    _same_dim(v, u)
    if t < 0 or t > 1:
        raise ParameterOutOfRange(f"t={t} outside [0, 1]")
    return Point(tuple(vc + t * (uc - vc) for vc, uc in zip(v, u)))


def intersect_segments_2d(a: Point, b: Point, c: Point, d: Point) -> Optional[Point]:
    """Exact intersection of closed planar segments [a,b] and [c,d].

    Returns the single common point, or None when the segments are disjoint.
    Raises CollinearOverlap when the intersection is a nondegenerate segment.
    """
    for q in (a, b, c, d):
        if q.dim != 2:
            raise DimensionMismatch("segment intersection needs planar points")
    if a == b or c == d:
        raise DegenerateDomain("segments must have distinct endpoints")
    r = b - a
    s = d - c
    denom = cross2(r, s)
    qp = c - a
    if denom != 0:
        t = cross2(qp, s) / denom
        w = cross2(qp, r) / denom
        if 0 <= t <= 1 and 0 <= w <= 1:
            return a + r.scale(t)
        return None
    if cross2(qp, r) != 0:
        return None  # parallel, different supporting lines
    # collinear: compare parameter intervals along [a, b]
    rr = dot(r, r)
    t0 = dot(qp, r) / rr
    t1 = dot(d - a, r) / rr
    lo, hi = min(t0, t1), max(t0, t1)
    lo, hi = max(lo, ZERO), min(hi, ONE)
    if lo > hi:
        return None
    if lo == hi:
        return a + r.scale(lo)
    raise CollinearOverlap("segments overlap in a segment")


def t_param(t, s) -> Fraction:
    """Chord parameter after sliding the base point by s: t*(1-s)/(1-t*s).

    This is the parameter at which the chord from the slid base point to the
    target crosses the ray through the original chord point; it is validated
    against intersect_segments_2d. Satisfies 0 < result <= t, with equality
    exactly at s = 0.
    """
    t = as_scalar(t)
    s = as_scalar(s)
    if not 0 < t < 1:
        raise ParameterOutOfRange(f"t={t} outside ]0, 1[")
    if not 0 <= s < 1:
        raise ParameterOutOfRange(f"s={s} outside [0, 1[")
    return t * (1 - s) / (1 - t * s)


def ray_exit_point(domain: ConvexDomain, origin: Point, through: Point) -> Optional[Point]:
    """Last domain point on the ray leaving `origin` toward `through`.

    Both arguments must belong to the domain and differ. The exit parameter is
    at least 1, and strictly greater whenever `through` is in the intrinsic
    core, so `through` then lies strictly between `origin` and the result.
    Returns None only for balls whose exit parameter is irrational.
    """
    if origin == through:
        raise DegenerateRay("ray needs two distinct points")
    if not (domain.contains(origin) and domain.contains(through)):
        raise PointOutsideDomain("ray endpoints must lie in the domain")
    direction = through - origin
    if isinstance(domain, Simplex):
        b0 = barycentric(domain, origin)
        b1 = barycentric(domain, through)
        bound: Optional[Fraction] = None
        for c0, c1 in zip(b0, b1):
            step = c1 - c0
            if step < 0:
                cand = c0 / -step
                if bound is None or cand < bound:
                    bound = cand
        if bound is None:
            raise DegenerateDomain("ray does not leave the simplex")
        return origin + direction.scale(bound)
    if isinstance(domain, ConvexPolygon2D):
        h0 = domain.edge_values(origin)
        h1 = domain.edge_values(through)
        bound = None
        for v0, v1 in zip(h0, h1):
            if v1 < v0:
                cand = v0 / (v0 - v1)
                if bound is None or cand < bound:
                    bound = cand
        if bound is None:
            raise DegenerateDomain("ray does not leave the polygon")
        return origin + direction.scale(bound)
    if isinstance(domain, Segment):
        t0 = domain.chord_param(origin)
        t1 = domain.chord_param(through)
        assert t0 is not None and t1 is not None
        bound = (1 - t0) / (t1 - t0) if t1 > t0 else t0 / (t0 - t1)
        return origin + direction.scale(bound)
    if isinstance(domain, EuclideanBall):
        rel = origin - domain.center
        qa = dot(direction, direction)
        qb = 2 * dot(direction, rel)
        qc = dot(rel, rel) - domain.radius * domain.radius
        root = _fraction_sqrt(qb * qb - 4 * qa * qc)
        if root is None:
            return None
        return origin + direction.scale((-qb + root) / (2 * qa))
    raise TypeError(f"unsupported domain {type(domain).__name__}")


# ---------------------------------------------------------------------------
# deterministic sampling


class PointSource(Enum):
    """How a sampling plan draws domain points."""

    VERTEX_HULL_GRID = "vertex-hull-grid"
    SEEDED_RANDOM_BARYCENTRIC = "seeded-random-barycentric"


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _hull_combination(vertices: tuple[Point, ...], weights, denom: int) -> Point:
    coords = [ZERO] * vertices[0].dim
    for w, v in zip(weights, vertices):
        if w:
            f = Fraction(w, denom)
            coords = [c + f * vc for c, vc in zip(coords, v.coords)]
    return Point(tuple(coords))


def _iter_hull_grid(vertices: tuple[Point, ...]) -> Iterator[Point]:
    if len(vertices) == 1:
        yield vertices[0]
        return
    seen: set[Point] = set()
    level = 1
    while True:
        for weights in _compositions(level, len(vertices)):
            p = _hull_combination(vertices, weights, level)
            if p not in seen:
                seen.add(p)
                yield p
        level += 1


def _iter_hull_random(vertices: tuple[Point, ...], seed: int) -> Iterator[Point]:
    if len(vertices) == 1:
        yield vertices[0]
        return
    rng = random.Random(seed)
    while True:
        raw = [rng.getrandbits(16) for _ in vertices]
        total = sum(raw)
        if total == 0:
            continue
        yield _hull_combination(vertices, raw, total)


def _iter_ball_grid(ball: EuclideanBall) -> Iterator[Point]:
    seen: set[Point] = set()
    rsq = ball.radius * ball.radius
    level = 1
    while True:
        axes = [range(-level, level + 1)] * ball.dim
        for offsets in itertools.product(*axes):
            p = Point(
                tuple(c + ball.radius * Fraction(o, level) for c, o in zip(ball.center, offsets))
            )
            rel = p - ball.center
            if dot(rel, rel) < rsq and p not in seen:
                seen.add(p)
                yield p
        level += 1


def _iter_ball_random(ball: EuclideanBall, seed: int, granularity: int = 4096) -> Iterator[Point]:
    rng = random.Random(seed)
    rsq = ball.radius * ball.radius
    while True:
        offsets = [
            ball.radius * Fraction(rng.getrandbits(13) - granularity, granularity)
            for _ in range(ball.dim)
        ]
        p = Point(tuple(c + o for c, o in zip(ball.center, offsets)))
        rel = p - ball.center
        if dot(rel, rel) < rsq:
            yield p


def iter_sample_points(
    domain: ConvexDomain,
    source: PointSource = PointSource.VERTEX_HULL_GRID,
    seed: int = 0,
) -> Iterator[Point]:
    """Unbounded deterministic stream of rational domain points.

    The grid source enumerates convex vertex combinations with growing
    denominators (vertices first); the random source draws seeded rational
    combinations. Ball points always come from the rational interior.
    """
    if isinstance(domain, EuclideanBall):
        if source is PointSource.VERTEX_HULL_GRID:
            return _iter_ball_grid(domain)
        return _iter_ball_random(domain, seed)
    vertices = domain.vertex_list()
    if source is PointSource.VERTEX_HULL_GRID:
        return _iter_hull_grid(vertices)
    return _iter_hull_random(vertices, seed)


def sample_points(
    domain: ConvexDomain,
    count: int,
    source: PointSource = PointSource.VERTEX_HULL_GRID,
    seed: int = 0,
) -> list[Point]:
    """First `count` points of the deterministic sample stream.

    May return fewer only for a single-vertex simplex, which has exactly one
    rational point.
    """
    if count < 0:
        raise ParameterOutOfRange("sample count must be nonnegative")
    return list(itertools.islice(iter_sample_points(domain, source, seed), count))


def sample_flat_points(
    domain: ConvexDomain,
    count: int,
    scan_limit: int = 4000,
    source: PointSource = PointSource.VERTEX_HULL_GRID,
    seed: int = 0,
) -> list[Point]:
    """First `count` sampled points classified FLAT.

    Strictly convex domains produce none; the scan stops after `scan_limit`
    candidates so the search always terminates.
    """
    found: list[Point] = []
    stream = itertools.islice(iter_sample_points(domain, source, seed), scan_limit)
    for p in stream:
        if classify_point(domain, p) is PointClass.FLAT:
            found.append(p)
            if len(found) == count:
                break
    return found
