"""Sampled exact verdicts: quasiconvexity, convexity, stability, falsification.

Universal quantifiers over chord triples are approximated by deterministic
sampling plans: triples are visited in plan order, the first violating triple
is the verdict, and identical plans reproduce identical verdicts bit for bit.
Ties pass, because the inequalities under test are non-strict. Everything is
pure and immutable; parallel callers must reduce results back to plan order
to match the sequential contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    DegenerateRay,
    EmptyPlan,
    ParameterOutOfRange,
    PointOutsideDomain,
)
from .functionals import FunctionOracle, LinearFunctional, pair
from .geometry import (
    ConvexDomain,
    Point,
    PointSource,
    as_scalar,
    sample_points,
    segment_point,
)


@dataclass(frozen=True)
class Pass:
    checked: int


@dataclass(frozen=True)
class Violation:
    """Self-certifying counterexample: re-evaluating the oracle at u, v and
    the chord point reproduces lhs > rhs exactly."""

    u: Point
    v: Point
    t: Fraction
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class Inconclusive:
    reason: str


Verdict = Union[Pass, Violation, Inconclusive]


def default_t_grid(denominator: int = 16) -> tuple[Fraction, ...]:
    """Interior grid {k/denominator : 1 <= k <= denominator-1}."""
    return tuple(Fraction(k, denominator) for k in range(1, denominator))


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sampling plan: point pairs plus an interpolation grid.

    Explicit pairs are visited first, then pair_count generated pairs; the t
    grid is swept per pair in order. Equal fields (seed included) enumerate
    identical triples on every run.
    """

    pair_count: int = 80
    t_grid: tuple[Fraction, ...] = field(default_factory=default_t_grid)
    seed: int = 0
    point_source: PointSource = PointSource.VERTEX_HULL_GRID
    explicit_pairs: tuple[tuple[Point, Point], ...] = ()

    def __post_init__(self):
        grid = tuple(as_scalar(t) for t in self.t_grid)
        object.__setattr__(self, "t_grid", grid)
        for t in grid:
            if not 0 < t < 1:
                raise ParameterOutOfRange(f"t grid value {t} outside ]0, 1[")
        if self.pair_count < 0:
            raise ParameterOutOfRange("pair_count must be nonnegative")
        pairs = tuple(tuple(p) for p in self.explicit_pairs)
        for u, v in pairs:
            if u == v:
                raise ParameterOutOfRange("explicit pair with identical points")
            if u.dim != v.dim:
                raise ParameterOutOfRange("explicit pair with mixed dimensions")
        object.__setattr__(self, "explicit_pairs", pairs)


def plan_pairs(plan: SamplePlan, domain: ConvexDomain) -> list[tuple[Point, Point]]:
    """Materialize the plan's ordered (u, v) pairs for a domain."""
    pairs: list[tuple[Point, Point]] = list(plan.explicit_pairs)
    if plan.pair_count > 0:
        m = 2
        while m * (m - 1) < plan.pair_count:
            m += 1
        pts = sample_points(domain, m, plan.point_source, plan.seed)
        generated = [(a, b) for a in pts for b in pts if a != b]
        pairs.extend(generated[: plan.pair_count])
    return pairs


def _plan_or_raise(plan: SamplePlan, domain: ConvexDomain) -> list[tuple[Point, Point]]:
    pairs = plan_pairs(plan, domain)
    if not pairs or not plan.t_grid:
        raise EmptyPlan("plan yields no (u, v, t) triples")
    return pairs


def quasiconvex_check(f: FunctionOracle, domain: ConvexDomain, plan: SamplePlan) -> Verdict:
    """Exact sampled test of f(v + t*(u-v)) <= max(f(u), f(v))."""
    pairs = _plan_or_raise(plan, domain)
    checked = 0
    for u, v in pairs:
        bound = max(f(u), f(v))
        for t in plan.t_grid:
            value = f(segment_point(v, u, t))
            if value > bound:
                return Violation(u=u, v=v, t=t, lhs=value, rhs=bound)
            checked += 1
    return Pass(checked)


def convex_check(f: FunctionOracle, domain: ConvexDomain, plan: SamplePlan) -> Verdict:
    """Exact sampled test of f(v + t*(u-v)) <= f(v) + t*(f(u) - f(v))."""
    pairs = _plan_or_raise(plan, domain)
    checked = 0
    for u, v in pairs:
        f_u, f_v = f(u), f(v)
        for t in plan.t_grid:
            value = f(segment_point(v, u, t))
            bound = f_v + t * (f_u - f_v)
            if value > bound:
                return Violation(u=u, v=v, t=t, lhs=value, rhs=bound)
            checked += 1
    return Pass(checked)


def _family_table(f, c, domain, plan):
    """Per-triple oracle values and pairings, so each lambda costs O(1) per triple."""
    pairs = _plan_or_raise(plan, domain)
    table = []
    for u, v in pairs:
        f_u, f_v = f(u), f(v)
        p_u, p_v = pair(c, u), pair(c, v)
        for t in plan.t_grid:
            z = segment_point(v, u, t)
            table.append((u, v, t, f_u, f_v, f(z), p_u, p_v, pair(c, z)))
    return table


def family_quasiconvex_check(
    f: FunctionOracle,
    c: LinearFunctional,
    domain: ConvexDomain,
    lambdas,
    plan: SamplePlan,
) -> dict[Fraction, Verdict]:
    """Per-coefficient quasiconvexity verdicts for the perturbed family.

    Each value equals quasiconvex_check(perturbed(f, lam, c), domain, plan);
    the shared triple table only avoids re-evaluating f and the pairing.
    """
    grid = tuple(as_scalar(x) for x in lambdas)
    if not grid:
        raise EmptyPlan("empty lambda grid")
    table = _family_table(f, c, domain, plan)
    results: dict[Fraction, Verdict] = {}
    for lam in grid:
        results[lam] = _scan_family_table(table, lam)
    return results


def _scan_family_table(table, lam) -> Verdict:
    for u, v, t, f_u, f_v, f_z, p_u, p_v, p_z in table:
        g_u = f_u + lam * p_u
        g_v = f_v + lam * p_v
        bound = g_u if g_u >= g_v else g_v
        g_z = f_z + lam * p_z
        if g_z > bound:
            return Violation(u=u, v=v, t=t, lhs=g_z, rhs=bound)
    return Pass(len(table))


def default_lambda_grid() -> tuple[Fraction, ...]:
    """Symmetric geometric grid {+/- 2**k : k = -6..6} with 0, ascending."""
    magnitudes = [Fraction(2) ** k for k in range(-6, 7)]
    values = {Fraction(0)} | {m for m in magnitudes} | {-m for m in magnitudes}
    return tuple(sorted(values))


def lambda_range(lo, hi, step) -> tuple[Fraction, ...]:
    """Inclusive arithmetic grid of exact scalars."""
    lo, hi, step = as_scalar(lo), as_scalar(hi), as_scalar(step)
    if step <= 0:
        raise ParameterOutOfRange("step must be positive")
    out = []
    val = lo
    while val <= hi:
        out.append(val)
        val += step
    return tuple(out)


def falsify_quasiconvex(
    f: FunctionOracle,
    c: LinearFunctional,
    domain: ConvexDomain,
    lambda_grid=None,
    plan: SamplePlan = SamplePlan(),
) -> Optional[tuple[Fraction, Violation]]:
    """First (lambda, Violation) of the perturbed family in grid order, or None."""
    grid = tuple(as_scalar(x) for x in (lambda_grid if lambda_grid is not None else default_lambda_grid()))
    if not grid:
        return None
    table = _family_table(f, c, domain, plan)
    for lam in grid:
        verdict = _scan_family_table(table, lam)
        if isinstance(verdict, Violation):
            return lam, verdict
    return None


def stability_estimate(f: FunctionOracle, z: Point, w: Point, depth: int) -> Verdict:
    """Dyadic tail estimate used by radial_stability_check; no domain checks.

    Passes when the tail maximum reaches f(z), or when the tail gaps below
    f(z) are strictly shrinking with at least one halving overall, which is
    how a continuous approach from below looks on a dyadic grid. A persistent
    gap (constant shortfall) is a Violation carrying the tail maximum.
    """
    f_z = f(z)
    values = [f(segment_point(z, w, Fraction(1, 2**k))) for k in range(1, depth + 1)]
    tail = values[depth // 2 :]
    tail_max = max(tail)
    if tail_max >= f_z:
        return Pass(checked=depth)
    gaps = [f_z - v for v in tail]
    shrinking = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    if shrinking and 2 * gaps[-1] <= gaps[0]:
        return Pass(checked=depth)
    return Violation(u=z, v=w, t=Fraction(1, 2**depth), lhs=f_z, rhs=tail_max)


def radial_stability_check(
    f: FunctionOracle,
    domain: ConvexDomain,
    z: Point,
    w: Point,
    depth: int = 20,
) -> Verdict:
    """Estimate of the no-downward-gap property at z along the ray toward w.

    Samples the dyadic parameters 2**-k for k = 1..depth and passes when the
    maximum over the tail half (k > depth/2) is at least f(z). This is an
    estimate, not a certificate: an upper limit cannot be decided from
    finitely many samples, and reports label it accordingly. For the bundled
    piecewise-constant fixtures the default depth is exact.
    """
    if z == w:
        raise DegenerateRay("stability ray needs two distinct points")
    if depth < 1:
        raise ParameterOutOfRange("depth must be positive")
    if not (domain.contains(z) and domain.contains(w)):
        raise PointOutsideDomain("stability check needs z and w in the domain")
    return stability_estimate(f, z, w, depth)
