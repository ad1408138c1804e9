"""Constructive convexity certificates from quasiconvexity of a perturbed family.

Each certificate traces, at one chord triple (u, v, t), how the convexity
bound f(z_t) <= (1-t)f(v) + t f(u) follows from quasiconvexity of f + lam*c
for constructed coefficients lam. Two branches exist, dispatched exactly on
the pairing difference <c, u-v>:

* nonzero pairing: a single equalizing coefficient makes the perturbed
  endpoint values equal, and the quasiconvexity inequality at the chord point
  is algebraically identical to the convexity bound (case A);
* zero pairing: the base point v slides toward an auxiliary point w whose
  pairing differs, two case-A steps chain into a bound at the slid chord
  point, and the limit of vanishing slide is finitized: the residual slack is
  recorded per step, and the final bound is asserted by direct evaluation,
  flagged with the analytic step the derivation leans on (stability of f at a
  flat chord point, or continuity on an inner segment).

Certificates are immutable values; production for distinct triples is
independent and parallelizable as long as aggregation keeps plan order.
validate_certificate re-derives every recorded number from scratch and
rejects any single-field tampering.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .checkers import (
    SamplePlan,
    Verdict,
    plan_pairs,
    radial_stability_check,
    stability_estimate,
)
from .errors import (
    ConstantFunctional,
    ConstantFunctionalOnDomain,
    DegeneratePairing,
    EmptyPlan,
    MalformedCertificate,
    ParameterOutOfRange,
    PointOutsideDomain,
)
from .functionals import (
    FunctionOracle,
    LinearFunctional,
    ball_probe_points,
    is_constant_on,
    pair,
)
from .geometry import (
    ConvexDomain,
    EuclideanBall,
    Point,
    PointClass,
    as_scalar,
    classify_point,
    ray_exit_point,
    segment_point,
    t_param,
)

RADIAL_STABILITY_AT_FLAT_POINT = "radial-stability-at-flat-point"
CONTINUITY_ON_INNER_SEGMENT = "continuity-on-inner-segment"


class CertStatus(Enum):
    VERIFIED = "verified"
    CONDITIONALLY_VERIFIED = "conditionally-verified"
    REFUTED = "refuted"


@dataclass(frozen=True)
class CaseAStep:
    """One equalized-perturbation step.

    The coefficient lam satisfies lam * <c, u-v> = f(v) - f(u) exactly, which
    makes g = f + lam*c equal at u and v; then g(z) <= g(v) holds iff the
    convexity bound f(z) <= (1-t)f(v) + t f(u) holds, as identical rationals.
    """

    lam: Fraction
    u: Point
    v: Point
    t: Fraction
    z: Point
    f_u: Fraction
    f_v: Fraction
    f_z: Fraction
    g_u: Fraction
    g_v: Fraction
    g_z: Fraction

    @property
    def quasiconvexity_holds(self) -> bool:
        return self.g_z <= self.g_v

    @property
    def bound_rhs(self) -> Fraction:
        return (1 - self.t) * self.f_v + self.t * self.f_u

    @property
    def bound_holds(self) -> bool:
        return self.f_z <= self.bound_rhs


@dataclass(frozen=True)
class CaseA:
    lam: Fraction
    step: CaseAStep


@dataclass(frozen=True)
class CaseBStep:
    """One slide step: outer bound at the slid base point, inner bound at the
    slid chord point, chained into a single inequality with recorded slack."""

    s: Fraction
    t_s: Fraction
    v_s: Point
    z_ts: Point
    outer: CaseAStep  # chord from v toward w at parameter s
    inner: CaseAStep  # chord from v_s toward u at parameter t_s
    chained_lhs: Fraction
    chained_rhs: Fraction
    residual: Fraction


@dataclass(frozen=True)
class StabilityLimsup:
    depth: int
    estimate: Verdict


@dataclass(frozen=True)
class InnerContinuity:
    w_prime: Optional[Point]


@dataclass(frozen=True)
class LimitStep:
    z_t_class: PointClass
    mechanism: Union[StabilityLimsup, InnerContinuity]
    residual_bound: Fraction


@dataclass(frozen=True)
class CaseB:
    w: Point
    s_sequence: tuple[Fraction, ...]
    steps: tuple[CaseBStep, ...]
    limit: LimitStep


@dataclass(frozen=True)
class Conclusion:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class Refutation:
    """Concrete counterexample: a quasiconvexity violation of the perturbed
    family (kind 'quasiconvexity'), or a directly evaluated failure of the
    conclusion inequality (kind 'conclusion', lam is None)."""

    kind: str
    lam: Optional[Fraction]
    u: Point
    v: Point
    t: Fraction
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class Certificate:
    u: Point
    v: Point
    t: Fraction
    case: Union[CaseA, CaseB]
    conclusion: Conclusion
    assumptions: frozenset[str]
    status: CertStatus
    refutation: Optional[Refutation] = None


@dataclass(frozen=True)
class TheoremReport:
    """Aggregate over a plan: certificates in plan order, first refutation,
    stability estimates where they were assumed, and the count of conclusions
    disagreeing with direct evaluation (always zero for a correct build)."""

    overall: str  # all-verified | conditionally-verified | refuted
    certificates: tuple[Certificate, ...]
    stability_assumed: tuple[tuple[Point, Verdict], ...]
    first_refutation: Optional[Refutation]
    conclusion_mismatches: int


# ---------------------------------------------------------------------------
# construction


def select_lambda(f: FunctionOracle, c: LinearFunctional, u: Point, v: Point) -> Fraction:
    """The equalizing coefficient: (f(v) - f(u)) / <c, u-v>, exact."""
    gap = pair(c, u - v)
    if gap == 0:
        raise DegeneratePairing("pairing does not separate u and v")
    return (f(v) - f(u)) / gap


def _case_a_step(f, c, u, v, t) -> CaseAStep:
    t = as_scalar(t)
    if not 0 < t < 1:
        raise ParameterOutOfRange(f"t={t} outside ]0, 1[")
    lam = select_lambda(f, c, u, v)
    z = segment_point(v, u, t)
    f_u, f_v, f_z = f(u), f(v), f(z)
    g_u = f_u + lam * pair(c, u)
    g_v = f_v + lam * pair(c, v)
    g_z = f_z + lam * pair(c, z)
    return CaseAStep(lam=lam, u=u, v=v, t=t, z=z, f_u=f_u, f_v=f_v, f_z=f_z, g_u=g_u, g_v=g_v, g_z=g_z)


def case_a_bound(
    f: FunctionOracle, c: LinearFunctional, u: Point, v: Point, t
) -> Certificate:
    """Certificate for the separated-pairing branch.

    When the quasiconvexity inequality for the equalized perturbation holds
    at the chord point, the convexity bound follows identically: Verified.
    A failure is a concrete quasiconvexity violation of the family at the
    constructed coefficient: Refuted with that witness.
    """
    step = _case_a_step(f, c, u, v, t)
    conclusion = Conclusion(lhs=step.f_z, rhs=step.bound_rhs)
    if step.quasiconvexity_holds:
        status: CertStatus = CertStatus.VERIFIED
        refutation = None
        assert conclusion.holds  # algebraically forced
    else:
        status = CertStatus.REFUTED
        refutation = Refutation(
            kind="quasiconvexity", lam=step.lam, u=u, v=v, t=step.t, lhs=step.g_z, rhs=step.g_v
        )
        assert not conclusion.holds
    return Certificate(
        u=u,
        v=v,
        t=step.t,
        case=CaseA(lam=step.lam, step=step),
        conclusion=conclusion,
        assumptions=frozenset(),
        status=status,
        refutation=refutation,
    )


def choose_w(domain: ConvexDomain, c: LinearFunctional, u: Point) -> Point:
    """First candidate domain point whose pairing differs from u's.

    Vertex-represented domains scan vertices in index order; balls scan the
    center and the interior axis probes.
    """
    target = pair(c, u)
    candidates = (
        ball_probe_points(domain) if isinstance(domain, EuclideanBall) else domain.vertex_list()
    )
    for w in candidates:
        if pair(c, w) != target:
            return w
    raise ConstantFunctional("every candidate pairs like u; the functional is constant")


def default_s_sequence(depth: int = 12) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, 2**k) for k in range(1, depth + 1))


def case_b_bound(
    f: FunctionOracle,
    c: LinearFunctional,
    domain: ConvexDomain,
    u: Point,
    v: Point,
    t,
    s_sequence=None,
    stability_depth: int = 20,
) -> Certificate:
    """Certificate for the degenerate-pairing branch (slide the base point).

    For every s in the sequence the base point moves to v_s on the chord
    toward w, two case-A steps chain into
    f(z_ts) <= (1-t_s)[f(v) + s(f(w)-f(v))] + t_s f(u), and the recorded
    residual bounds that inequality's distance from the target bound. The
    target bound itself is then decided by direct evaluation, with the limit
    argument recorded: a stability estimate along the incoming ray when the
    chord point is flat, otherwise an inner-continuity record through an
    exactly constructed far point.
    """
    t = as_scalar(t)
    if not 0 < t < 1:
        raise ParameterOutOfRange(f"t={t} outside ]0, 1[")
    if u == v:
        raise ParameterOutOfRange("u and v must differ")
    if pair(c, u - v) != 0:
        raise DegeneratePairing("pairing separates u and v: use case_a_bound")
    if not (domain.contains(u) and domain.contains(v)):
        raise PointOutsideDomain("u and v must lie in the domain")
    seq = tuple(as_scalar(s) for s in (s_sequence if s_sequence is not None else default_s_sequence()))
    if not seq:
        raise ParameterOutOfRange("empty s sequence")
    for s in seq:
        if not 0 < s < 1:
            raise ParameterOutOfRange(f"s={s} outside ]0, 1[")
    w = choose_w(domain, c, u)
    f_u, f_v, f_w = f(u), f(v), f(w)

    steps: list[CaseBStep] = []
    refutation: Optional[Refutation] = None
    for s in seq:
        outer = _case_a_step(f, c, w, v, s)
        v_s = outer.z
        ts = t_param(t, s)
        inner = _case_a_step(f, c, u, v_s, ts)
        chained_rhs = (1 - ts) * (f_v + s * (f_w - f_v)) + ts * f_u
        residual = (1 - ts) * s * abs(f_w - f_v) + abs(ts - t) * (abs(f_u) + abs(f_v))
        steps.append(
            CaseBStep(
                s=s,
                t_s=ts,
                v_s=v_s,
                z_ts=inner.z,
                outer=outer,
                inner=inner,
                chained_lhs=inner.f_z,
                chained_rhs=chained_rhs,
                residual=residual,
            )
        )
        if refutation is None:
            if not outer.quasiconvexity_holds:
                refutation = Refutation(
                    kind="quasiconvexity", lam=outer.lam, u=w, v=v, t=s, lhs=outer.g_z, rhs=outer.g_v
                )
            elif not inner.quasiconvexity_holds:
                refutation = Refutation(
                    kind="quasiconvexity", lam=inner.lam, u=u, v=v_s, t=ts, lhs=inner.g_z, rhs=inner.g_v
                )

    z_t = segment_point(v, u, t)
    z_class = classify_point(domain, z_t)
    mechanism: Union[StabilityLimsup, InnerContinuity]
    if z_class is PointClass.FLAT:
        estimate = radial_stability_check(f, domain, z_t, w, depth=stability_depth)
        mechanism = StabilityLimsup(depth=stability_depth, estimate=estimate)
        flags = frozenset({RADIAL_STABILITY_AT_FLAT_POINT})
    else:
        # z_t is a strict combination of domain points, so only the intrinsic
        # core remains here; the exit point exists past it on the ray from w
        w_prime = ray_exit_point(domain, w, z_t)
        if w_prime is not None:
            # a positive multiple of z_t - w, which the choice of w separates
            assert pair(c, w_prime - w) != 0
        mechanism = InnerContinuity(w_prime=w_prime)
        flags = frozenset({CONTINUITY_ON_INNER_SEGMENT})

    limit = LimitStep(z_t_class=z_class, mechanism=mechanism, residual_bound=steps[-1].residual)
    conclusion = Conclusion(lhs=f(z_t), rhs=(1 - t) * f_v + t * f_u)
    if refutation is None and not conclusion.holds:
        refutation = Refutation(
            kind="conclusion", lam=None, u=u, v=v, t=t, lhs=conclusion.lhs, rhs=conclusion.rhs
        )
    status = CertStatus.REFUTED if refutation else CertStatus.CONDITIONALLY_VERIFIED
    return Certificate(
        u=u,
        v=v,
        t=t,
        case=CaseB(w=w, s_sequence=seq, steps=tuple(steps), limit=limit),
        conclusion=conclusion,
        assumptions=flags,
        status=status,
        refutation=refutation,
    )


def verify_convexity_via_theorem(
    f: FunctionOracle,
    c: LinearFunctional,
    domain: ConvexDomain,
    plan: SamplePlan,
    s_sequence=None,
    stability_depth: int = 20,
) -> TheoremReport:
    """Run the constructive reduction at every plan triple and aggregate.

    Dispatch is exact (<c, u-v> equal to zero or not). Certificates appear in
    plan order; the first refutation decides the overall verdict; every
    recorded conclusion is re-checked against a direct evaluation of the
    convexity inequality.
    """
    check = is_constant_on(c, domain)
    if check.constant is not False:
        raise ConstantFunctionalOnDomain("verification needs a functional that varies on the domain")
    pairs = plan_pairs(plan, domain)
    if not pairs or not plan.t_grid:
        raise EmptyPlan("plan yields no (u, v, t) triples")
    certificates: list[Certificate] = []
    for u, v in pairs:
        separated = pair(c, u - v) != 0
        for t in plan.t_grid:
            if separated:
                cert = case_a_bound(f, c, u, v, t)
            else:
                cert = case_b_bound(f, c, domain, u, v, t, s_sequence, stability_depth)
            certificates.append(cert)

    mismatches = 0
    for cert in certificates:
        z = segment_point(cert.v, cert.u, cert.t)
        direct = (f(z), (1 - cert.t) * f(cert.v) + cert.t * f(cert.u))
        if direct != (cert.conclusion.lhs, cert.conclusion.rhs):
            mismatches += 1

    first_refuted = next((x for x in certificates if x.status is CertStatus.REFUTED), None)
    if first_refuted is not None:
        overall = "refuted"
    elif any(x.status is CertStatus.CONDITIONALLY_VERIFIED for x in certificates):
        overall = "conditionally-verified"
    else:
        overall = "all-verified"

    stability: list[tuple[Point, Verdict]] = []
    seen: set[tuple[Point, Point]] = set()
    for cert in certificates:
        if isinstance(cert.case, CaseB) and isinstance(cert.case.limit.mechanism, StabilityLimsup):
            z = segment_point(cert.v, cert.u, cert.t)
            key = (z, cert.case.w)
            if key not in seen:
                seen.add(key)
                stability.append((z, cert.case.limit.mechanism.estimate))

    return TheoremReport(
        overall=overall,
        certificates=tuple(certificates),
        stability_assumed=tuple(stability),
        first_refutation=first_refuted.refutation if first_refuted else None,
        conclusion_mismatches=mismatches,
    )


# ---------------------------------------------------------------------------
# independent validation


def _require_shape(cert) -> None:
    if not isinstance(cert, Certificate):
        raise MalformedCertificate("not a Certificate")
    if not (isinstance(cert.u, Point) and isinstance(cert.v, Point)):
        raise MalformedCertificate("certificate triple points are not Points")
    if not isinstance(cert.t, Fraction):
        raise MalformedCertificate("certificate parameter is not an exact scalar")
    if not isinstance(cert.conclusion, Conclusion):
        raise MalformedCertificate("missing conclusion")
    if not isinstance(cert.status, CertStatus):
        raise MalformedCertificate("unknown status variant")
    if not isinstance(cert.assumptions, frozenset):
        raise MalformedCertificate("assumptions must be a frozenset")
    if isinstance(cert.case, CaseA):
        if not isinstance(cert.case.step, CaseAStep):
            raise MalformedCertificate("case A payload is not a step")
    elif isinstance(cert.case, CaseB):
        if not all(isinstance(s, CaseBStep) for s in cert.case.steps):
            raise MalformedCertificate("case B steps are malformed")
        if not isinstance(cert.case.limit, LimitStep):
            raise MalformedCertificate("case B limit step missing")
        if not isinstance(cert.case.limit.mechanism, (StabilityLimsup, InnerContinuity)):
            raise MalformedCertificate("unknown limit mechanism")
    else:
        raise MalformedCertificate("unknown case variant")


def _step_ok(step: CaseAStep, f, c) -> bool:
    if not 0 < step.t < 1:
        return False
    gap = pair(c, step.u - step.v)
    if gap == 0:
        return False
    if step.lam * gap != f(step.v) - f(step.u):
        return False
    if step.z != segment_point(step.v, step.u, step.t):
        return False
    if step.f_u != f(step.u) or step.f_v != f(step.v) or step.f_z != f(step.z):
        return False
    if step.g_u != step.f_u + step.lam * pair(c, step.u):
        return False
    if step.g_v != step.f_v + step.lam * pair(c, step.v):
        return False
    if step.g_z != step.f_z + step.lam * pair(c, step.z):
        return False
    if step.g_u != step.g_v:
        return False
    return True


def _conclusion_ok(cert: Certificate, f) -> bool:
    if not 0 < cert.t < 1:
        return False
    z = segment_point(cert.v, cert.u, cert.t)
    if cert.conclusion.lhs != f(z):
        return False
    return cert.conclusion.rhs == (1 - cert.t) * f(cert.v) + cert.t * f(cert.u)


def _quasi_refutation_matches(ref: Optional[Refutation], step: CaseAStep) -> bool:
    if ref is None or ref.kind != "quasiconvexity":
        return False
    return (
        ref.lam == step.lam
        and ref.u == step.u
        and ref.v == step.v
        and ref.t == step.t
        and ref.lhs == step.g_z
        and ref.rhs == step.g_v
        and ref.lhs > ref.rhs
    )


def _collinear(base: Point, tip: Point, probe: Point) -> bool:
    d1 = tip - base
    d2 = probe - base
    n = d1.dim
    for i in range(n):
        for j in range(i + 1, n):
            if d1[i] * d2[j] != d1[j] * d2[i]:
                return False
    return True


def _on_ray_beyond(base: Point, mid: Point, far: Point) -> bool:
    """far == base + tau*(mid - base) with tau > 1, componentwise exact."""
    direction = mid - base
    i0 = next((i for i, x in enumerate(direction) if x != 0), None)
    if i0 is None:
        return False
    tau = (far[i0] - base[i0]) / direction[i0]
    if tau <= 1:
        return False
    return far == base + direction.scale(tau)


def validate_certificate(cert: Certificate, f: FunctionOracle, c: LinearFunctional) -> bool:
    """Independently re-check every recorded number and the status logic.

    Re-evaluates the oracle and the pairings from scratch, recomputes the
    derived parameters (equalizing coefficients, slid chord parameters,
    residual slacks, stability estimates), verifies collinearity of the slid
    chord points, and accepts only when the recorded status is forced by the
    steps and flags.
    """
    _require_shape(cert)
    try:
        return _validate_body(cert, f, c)
    except MalformedCertificate:
        raise
    except Exception:
        return False


def _validate_body(cert: Certificate, f, c) -> bool:
    u, v, t = cert.u, cert.v, cert.t
    if not _conclusion_ok(cert, f):
        return False

    if isinstance(cert.case, CaseA):
        step = cert.case.step
        if cert.case.lam != step.lam:
            return False
        if (step.u, step.v, step.t) != (u, v, t):
            return False
        if not _step_ok(step, f, c):
            return False
        if cert.assumptions:
            return False
        if step.quasiconvexity_holds:
            return cert.status is CertStatus.VERIFIED and cert.refutation is None
        return cert.status is CertStatus.REFUTED and _quasi_refutation_matches(cert.refutation, step)

    case = cert.case
    if pair(c, u - v) != 0:
        return False
    if pair(c, case.w) == pair(c, u):
        return False
    if not case.steps or len(case.steps) != len(case.s_sequence):
        return False
    f_u, f_v, f_w = f(u), f(v), f(case.w)
    z_t = segment_point(v, u, t)
    previous_residual = None
    first_violated: Optional[CaseAStep] = None
    for s, step in zip(case.s_sequence, case.steps):
        if step.s != s or not 0 < s < 1:
            return False
        outer, inner = step.outer, step.inner
        if (outer.u, outer.v, outer.t) != (case.w, v, s):
            return False
        if not _step_ok(outer, f, c):
            return False
        if step.v_s != outer.z:
            return False
        if step.t_s != t_param(t, s):
            return False
        if (inner.u, inner.v, inner.t) != (u, step.v_s, step.t_s):
            return False
        if not _step_ok(inner, f, c):
            return False
        if step.z_ts != inner.z:
            return False
        if not _collinear(case.w, z_t, step.z_ts):
            return False
        if step.chained_lhs != inner.f_z:
            return False
        expected_rhs = (1 - step.t_s) * (f_v + s * (f_w - f_v)) + step.t_s * f_u
        if step.chained_rhs != expected_rhs:
            return False
        if outer.quasiconvexity_holds and inner.quasiconvexity_holds:
            if step.chained_lhs > step.chained_rhs:
                return False
        expected_residual = (1 - step.t_s) * s * abs(f_w - f_v) + abs(step.t_s - t) * (
            abs(f_u) + abs(f_v)
        )
        if step.residual != expected_residual:
            return False
        if previous_residual is not None and step.residual > previous_residual:
            return False
        previous_residual = step.residual
        if first_violated is None:
            if not outer.quasiconvexity_holds:
                first_violated = outer
            elif not inner.quasiconvexity_holds:
                first_violated = inner

    limit = case.limit
    if limit.residual_bound != case.steps[-1].residual:
        return False
    mechanism = limit.mechanism
    if isinstance(mechanism, StabilityLimsup):
        if limit.z_t_class is not PointClass.FLAT:
            return False
        if cert.assumptions != frozenset({RADIAL_STABILITY_AT_FLAT_POINT}):
            return False
        if mechanism.depth < 1:
            return False
        if mechanism.estimate != stability_estimate(f, z_t, case.w, mechanism.depth):
            return False
    else:
        if limit.z_t_class is not PointClass.INTRINSIC_CORE:
            return False
        if cert.assumptions != frozenset({CONTINUITY_ON_INNER_SEGMENT}):
            return False
        if mechanism.w_prime is not None:
            if not _on_ray_beyond(case.w, z_t, mechanism.w_prime):
                return False
            if pair(c, mechanism.w_prime - case.w) == 0:
                return False

    if first_violated is not None:
        return cert.status is CertStatus.REFUTED and _quasi_refutation_matches(
            cert.refutation, first_violated
        )
    if not cert.conclusion.holds:
        expected = Refutation(
            kind="conclusion", lam=None, u=u, v=v, t=t, lhs=cert.conclusion.lhs, rhs=cert.conclusion.rhs
        )
        return cert.status is CertStatus.REFUTED and cert.refutation == expected
    return cert.status is CertStatus.CONDITIONALLY_VERIFIED and cert.refutation is None
