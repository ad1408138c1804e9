"""Linear functionals, exact function oracles, perturbed families, fixtures.

Fixture membership predicates are exact rational tests, never tolerances, so
the bundled counterexamples reproduce bit for bit. Oracles are total on the
ambient rational space but only meaningful on their stated domain; samplers
must go through the domain's `contains`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import DimensionMismatch, SinglePointDomain, UnknownFixture
from .geometry import (
    ONE,
    ZERO,
    ConvexDomain,
    EuclideanBall,
    Point,
    Simplex,
    as_scalar,
    point,
)


@dataclass(frozen=True)
class LinearFunctional:
    """Linear form evaluated by exact dot product with its coefficient vector."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_scalar(c) for c in self.coeffs))
        if not self.coeffs:
            raise DimensionMismatch("a functional needs at least one coefficient")

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: Point) -> Fraction:
        return pair(self, x)

    def __repr__(self) -> str:
        return "functional(" + ", ".join(str(c) for c in self.coeffs) + ")"


def functional(*coeffs) -> LinearFunctional:
    """Shorthand constructor: functional(1, 1)."""
    return LinearFunctional(tuple(coeffs))


def pair(c: LinearFunctional, x: Point) -> Fraction:
    """Exact pairing of a functional with a point."""
    if c.dim != x.dim:
        raise DimensionMismatch("functional and point dimensions differ")
    return sum((k * v for k, v in zip(c.coeffs, x.coords)), ZERO)


@dataclass(frozen=True)
class ConstancyCheck:
    """Outcome of is_constant_on: definite answer, or unknown with no witness."""

    constant: Optional[bool]
    witness: Optional[tuple[Point, Point]] = None
    pairings: Optional[tuple[Fraction, Fraction]] = None


def ball_probe_points(ball: EuclideanBall) -> list[Point]:
    """Interior probe points separating every nonzero functional on the ball."""
    half = ball.radius / 2
    probes = [ball.center]
    for i in range(ball.dim):
        for sign in (1, -1):
            coords = list(ball.center.coords)
            coords[i] = coords[i] + sign * half
            probes.append(Point(tuple(coords)))
    return probes


def is_constant_on(
    c: LinearFunctional,
    domain: ConvexDomain,
    witnesses: Optional[Iterable[Point]] = None,
) -> ConstancyCheck:
    """Decide whether the functional is constant on the domain.

    Exact for vertex-represented domains: a linear form is constant on a hull
    iff it is equal on all vertices. For balls the default probe points decide
    exactly as well (all probes agree only for the zero functional); with
    caller-supplied witnesses that cannot separate, the answer is unknown.
    """
    if c.dim != domain.dim:
        raise DimensionMismatch("functional and domain dimensions differ")
    if isinstance(domain, EuclideanBall):
        pts = list(witnesses) if witnesses is not None else ball_probe_points(domain)
        exact = witnesses is None
    else:
        pts = list(domain.vertex_list())
        exact = True
    if not pts:
        return ConstancyCheck(constant=None)
    base = pts[0]
    base_val = pair(c, base)
    for q in pts[1:]:
        val = pair(c, q)
        if val != base_val:
            return ConstancyCheck(constant=False, witness=(base, q), pairings=(base_val, val))
    return ConstancyCheck(constant=True) if exact else ConstancyCheck(constant=None)


def construct_nonconstant_functional(domain: ConvexDomain) -> LinearFunctional:
    """A functional guaranteed non-constant on the domain.

    Uses the difference of the first two distinct vertices (its pairing gap on
    them is the squared distance, hence nonzero); for balls, the difference of
    the two axis boundary points along the first coordinate.
    """
    if isinstance(domain, EuclideanBall):
        coeffs = [ZERO] * domain.dim
        coeffs[0] = 2 * domain.radius
        return LinearFunctional(tuple(coeffs))
    vertices = domain.vertex_list()
    if len(vertices) < 2:
        raise SinglePointDomain("domain has a single point; every functional is constant")
    a, b = vertices[0], vertices[1]
    return LinearFunctional(tuple(x - y for x, y in zip(a.coords, b.coords)))


# ---------------------------------------------------------------------------
# oracles

KNOWN_CONVEX = "known-convex"
KNOWN_QUASICONVEX_FAMILY = "known-quasiconvex-family"
KNOWN_STABLE = "known-stable"


@dataclass(frozen=True)
class FunctionOracle:
    """Deterministic, total evaluation map with exact scalar values."""

    name: str
    fn: Callable[[Point], Fraction] = field(compare=False)
    dim: int = 2
    flags: frozenset[str] = frozenset()

    def __call__(self, p: Point) -> Fraction:
        if p.dim != self.dim:
            raise DimensionMismatch("point dimension does not match the oracle")
        return as_scalar(self.fn(p))


def perturbed(f: FunctionOracle, lam, c: LinearFunctional) -> FunctionOracle:
    """Oracle for x -> f(x) + lam * <c, x>, exact."""
    lam = as_scalar(lam)
    if c.dim != f.dim:
        raise DimensionMismatch("functional dimension does not match the oracle")
    inner = f.fn
    coeffs = c.coeffs

    def shifted(p: Point) -> Fraction:
        acc = ZERO
        for k, v in zip(coeffs, p.coords):
            acc += k * v
        return as_scalar(inner(p)) + lam * acc

    label = f"{f.name}+({lam})*<{','.join(str(k) for k in coeffs)}>"
    return FunctionOracle(name=label, fn=shifted, dim=f.dim)


# ---------------------------------------------------------------------------
# fixture library


@dataclass(frozen=True)
class FixtureProfile:
    """Expected outcomes backing the fixture suite's exit-code contract."""

    convex: bool
    family_all_pass: bool
    falsifier_finds: bool
    stability_fails: bool


@dataclass(frozen=True)
class Fixture:
    name: str
    domain: ConvexDomain
    oracle: FunctionOracle
    functional: LinearFunctional
    profile: FixtureProfile


def _standard_triangle() -> Simplex:
    return Simplex((point(1, 0), point(0, 1), point(0, 0)))


def _jump_on_half_open_edge(p: Point) -> Fraction:
    # 1 exactly on the hypotenuse piece closed at (1,0) and open at (0,1)
    return ONE if p[0] + p[1] == 1 and p[0] > 0 else ZERO


def _drop_on_open_edge(p: Point) -> Fraction:
    # 0 exactly on the open hypotenuse, 1 everywhere else
    return ZERO if p[0] + p[1] == 1 and 0 < p[0] < 1 else ONE


def _sum_of_squares(p: Point) -> Fraction:
    return sum((c * c for c in p), ZERO)


def _coordinate_sum(p: Point) -> Fraction:
    return p[0] + p[1]


def _norm1(p: Point) -> Fraction:
    return abs(p[0]) + abs(p[1])


def _max_coordinate(p: Point) -> Fraction:
    return max(p[0], p[1])


def _abs_difference(p: Point) -> Fraction:
    return abs(p[0] - p[1])


def _affine_shift(p: Point) -> Fraction:
    return 2 * p[0] - 3 * p[1] + Fraction(1, 2)


def _step_above_half_sum(p: Point) -> Fraction:
    # lower semicontinuous step: positive exactly on an open half-plane cut
    return ONE if p[0] + p[1] > Fraction(1, 2) else ZERO


def _build_registry() -> dict[str, Fixture]:
    triangle = _standard_triangle()
    diagonal = functional(1, 1)
    convex_flags = frozenset({KNOWN_CONVEX, KNOWN_QUASICONVEX_FAMILY, KNOWN_STABLE})
    convex_profile = FixtureProfile(
        convex=True, family_all_pass=True, falsifier_finds=False, stability_fails=False
    )
    entries = [
        Fixture(
            "remark1",
            triangle,
            FunctionOracle("remark1", _jump_on_half_open_edge, 2, frozenset({KNOWN_QUASICONVEX_FAMILY})),
            diagonal,
            FixtureProfile(convex=False, family_all_pass=True, falsifier_finds=False, stability_fails=True),
        ),
        Fixture(
            "remark3",
            triangle,
            FunctionOracle("remark3", _drop_on_open_edge, 2, frozenset({KNOWN_STABLE})),
            diagonal,
            FixtureProfile(convex=False, family_all_pass=False, falsifier_finds=True, stability_fails=False),
        ),
        Fixture(
            "quadratic",
            triangle,
            FunctionOracle("quadratic", _sum_of_squares, 2, convex_flags),
            diagonal,
            convex_profile,
        ),
        Fixture(
            "linear",
            triangle,
            FunctionOracle("linear", _coordinate_sum, 2, convex_flags),
            diagonal,
            convex_profile,
        ),
        Fixture(
            "norm1",
            triangle,
            FunctionOracle("norm1", _norm1, 2, convex_flags),
            diagonal,
            convex_profile,
        ),
        Fixture(
            "max_coord",
            triangle,
            FunctionOracle("max_coord", _max_coordinate, 2, convex_flags),
            diagonal,
            convex_profile,
        ),
        Fixture(
            "abs_diff",
            triangle,
            FunctionOracle("abs_diff", _abs_difference, 2, convex_flags),
            diagonal,
            convex_profile,
        ),
        Fixture(
            "affine_shift",
            triangle,
            FunctionOracle("affine_shift", _affine_shift, 2, convex_flags),
            diagonal,
            convex_profile,
        ),
        Fixture(
            "indicator_like_stable",
            triangle,
            FunctionOracle("indicator_like_stable", _step_above_half_sum, 2, frozenset({KNOWN_STABLE})),
            diagonal,
            FixtureProfile(convex=False, family_all_pass=False, falsifier_finds=True, stability_fails=False),
        ),
    ]
    return {fx.name: fx for fx in entries}


_REGISTRY = _build_registry()


def fixture_names() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def fixture_record(name: str) -> Fixture:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(_REGISTRY)}") from None


def fixture(name: str) -> tuple[ConvexDomain, FunctionOracle, LinearFunctional]:
    """Registry lookup: (domain, oracle, functional) for a bundled fixture."""
    fx = fixture_record(name)
    return fx.domain, fx.oracle, fx.functional
