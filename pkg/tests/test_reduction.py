"""Certificate engine: coefficient selection, both branches, validation."""

from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcheck import (
    CertStatus,
    ConstantFunctional,
    ConstantFunctionalOnDomain,
    CONTINUITY_ON_INNER_SEGMENT,
    DegeneratePairing,
    FunctionOracle,
    InnerContinuity,
    MalformedCertificate,
    Pass,
    PointClass,
    RADIAL_STABILITY_AT_FLAT_POINT,
    SamplePlan,
    Segment,
    StabilityLimsup,
    Violation,
    case_a_bound,
    case_b_bound,
    choose_w,
    convex_check,
    fixture,
    functional,
    pair,
    point,
    select_lambda,
    segment_point,
    validate_certificate,
    verify_convexity_via_theorem,
)

X1_SQUARED = FunctionOracle("x1_squared", lambda p: p[0] * p[0], 2)


class TestSelectLambda:
    def test_basic(self):
        assert select_lambda(X1_SQUARED, functional(1, 0), point(1, 0), point(0, 0)) == -1

    def test_zero_numerator(self):
        # equal values at symmetric points, separating functional
        lam = select_lambda(X1_SQUARED, functional(1, 0), point(1, 0), point(-1, 0))
        assert lam == 0

    def test_degenerate_pairing(self):
        C, f, c = fixture("remark1")
        with pytest.raises(DegeneratePairing):
            select_lambda(f, c, point(1, 0), point(0, 1))

    def test_sign_convention_regression(self):
        # pinned orientation: lam * <c, u-v> = f(v) - f(u), nothing else
        C, f, c = fixture("remark3")
        u, v = point(F(3, 4), F(1, 4)), point(0, 0)
        lam = select_lambda(f, c, u, v)
        assert lam == 1
        g = lambda p: f(p) + lam * pair(c, p)
        assert g(u) == g(v) == 1


class TestCaseA:
    def test_verified_example(self):
        _, f, c = fixture("quadratic")
        cert = case_a_bound(f, c, point(1, 0), point(0, 0), F(1, 2))
        assert cert.status is CertStatus.VERIFIED
        assert cert.case.lam == -1
        assert cert.case.step.g_z == F(-1, 4)
        assert cert.case.step.g_v == 0
        assert (cert.conclusion.lhs, cert.conclusion.rhs) == (F(1, 4), F(1, 2))
        assert cert.assumptions == frozenset()
        assert cert.refutation is None

    def test_affine_equality(self):
        _, f, c = fixture("linear")
        cert = case_a_bound(f, c, point(1, 0), point(0, 0), F(1, 3))
        assert cert.status is CertStatus.VERIFIED
        assert cert.conclusion.lhs == cert.conclusion.rhs

    def test_refuted_unit_coefficient(self):
        C, f, c = fixture("remark3")
        cert = case_a_bound(f, c, point(F(3, 4), F(1, 4)), point(0, 0), F(1, 2))
        assert cert.status is CertStatus.REFUTED
        assert cert.refutation.kind == "quasiconvexity"
        assert cert.refutation.lam == 1
        assert (cert.refutation.lhs, cert.refutation.rhs) == (F(3, 2), F(1))
        assert not cert.conclusion.holds

    def test_degenerate_pairing_rejected(self):
        C, f, c = fixture("remark1")
        with pytest.raises(DegeneratePairing):
            case_a_bound(f, c, point(1, 0), point(0, 1), F(1, 2))


class TestChooseW:
    def test_triangle(self):
        C, _, c = fixture("remark1")
        assert choose_w(C, c, point(1, 0)) == point(0, 0)

    def test_segment_constant(self):
        seg = Segment(point(1, 0), point(0, 1))
        with pytest.raises(ConstantFunctional):
            choose_w(seg, functional(1, 1), point(1, 0))

    def test_constructed_functional_always_succeeds(self):
        from convexcheck import construct_nonconstant_functional

        C, _, _ = fixture("quadratic")
        c = construct_nonconstant_functional(C)
        for u in C.vertices:
            w = choose_w(C, c, u)
            assert pair(c, w) != pair(c, u)


class TestCaseB:
    def test_quadratic_flat_chord_point(self):
        C, f, c = fixture("quadratic")
        cert = case_b_bound(f, c, C, point(1, 0), point(0, 1), F(1, 2))
        assert cert.status is CertStatus.CONDITIONALLY_VERIFIED
        assert cert.assumptions == frozenset({RADIAL_STABILITY_AT_FLAT_POINT})
        assert cert.case.w == point(0, 0)
        assert cert.case.limit.z_t_class is PointClass.FLAT
        assert isinstance(cert.case.limit.mechanism, StabilityLimsup)
        assert isinstance(cert.case.limit.mechanism.estimate, Pass)
        assert (cert.conclusion.lhs, cert.conclusion.rhs) == (F(1, 2), F(1))

    def test_remark1_refuted_by_evaluation(self):
        C, f, c = fixture("remark1")
        cert = case_b_bound(f, c, C, point(1, 0), point(0, 1), F(1, 2))
        assert cert.status is CertStatus.REFUTED
        assert cert.refutation.kind == "conclusion"
        assert (cert.conclusion.lhs, cert.conclusion.rhs) == (F(1), F(1, 2))
        estimate = cert.case.limit.mechanism.estimate
        assert isinstance(estimate, Violation)
        assert estimate.lhs == 1 and estimate.rhs == 0
        # every recorded slide step still holds; the failure is the limit value
        for step in cert.case.steps:
            assert step.outer.quasiconvexity_holds
            assert step.inner.quasiconvexity_holds

    def test_linear_equality_conclusion(self):
        _, f, c = fixture("linear")
        C, _, _ = fixture("linear")
        straight = FunctionOracle("tilt", lambda p: p[0] - p[1], 2)
        cert = case_b_bound(straight, c, C, point(1, 0), point(0, 1), F(1, 3))
        assert cert.status is CertStatus.CONDITIONALLY_VERIFIED
        assert cert.conclusion.lhs == cert.conclusion.rhs

    def test_inner_continuity_branch(self):
        C, f, c = fixture("quadratic")
        cert = case_b_bound(f, c, C, point(F(1, 2), 0), point(0, F(1, 2)), F(1, 2))
        assert cert.status is CertStatus.CONDITIONALLY_VERIFIED
        assert cert.assumptions == frozenset({CONTINUITY_ON_INNER_SEGMENT})
        # first vertex whose pairing differs from u's is (1,0)
        assert cert.case.w == point(1, 0)
        limit = cert.case.limit
        assert limit.z_t_class is PointClass.INTRINSIC_CORE
        assert isinstance(limit.mechanism, InnerContinuity)
        # exit of the ray from (1,0) through the chord point (1/4,1/4)
        assert limit.mechanism.w_prime == point(0, F(1, 3))
        assert pair(c, limit.mechanism.w_prime - cert.case.w) != 0

    def test_misuse_rejected(self):
        C, f, c = fixture("quadratic")
        with pytest.raises(DegeneratePairing):
            case_b_bound(f, c, C, point(1, 0), point(0, 0), F(1, 2))

    def test_residuals_non_increasing(self):
        for name in ("quadratic", "remark1", "remark3", "linear"):
            C, f, c = fixture(name)
            cert = case_b_bound(f, c, C, point(1, 0), point(0, 1), F(1, 3))
            residuals = [s.residual for s in cert.case.steps]
            assert all(r >= 0 for r in residuals)
            assert all(b <= a for a, b in zip(residuals, residuals[1:]))
            assert cert.case.limit.residual_bound == residuals[-1]

    def test_chained_inequality_is_implied(self):
        C, f, c = fixture("quadratic")
        cert = case_b_bound(f, c, C, point(1, 0), point(0, 1), F(1, 2))
        f_u, f_v, f_w = f(cert.u), f(cert.v), f(cert.case.w)
        for step in cert.case.steps:
            # substituting the outer bound into the inner bound yields exactly
            # the recorded chained right-hand side
            outer_rhs = (1 - step.s) * f_v + step.s * f_w
            inner_rhs = (1 - step.t_s) * outer_rhs + step.t_s * f_u
            assert step.chained_rhs == inner_rhs
            assert step.chained_lhs <= step.chained_rhs


class TestVerifyViaTheorem:
    def test_quadratic_agrees_with_direct_check(self):
        C, f, c = fixture("quadratic")
        plan = SamplePlan(pair_count=20)
        report = verify_convexity_via_theorem(f, c, C, plan)
        assert report.overall in ("all-verified", "conditionally-verified")
        assert report.conclusion_mismatches == 0
        assert report.first_refutation is None
        assert isinstance(convex_check(f, C, plan), Pass)

    def test_remark1_refuted_with_stability_failure(self):
        C, f, c = fixture("remark1")
        plan = SamplePlan(pair_count=20)
        report = verify_convexity_via_theorem(f, c, C, plan)
        assert report.overall == "refuted"
        assert report.first_refutation is not None
        assert any(isinstance(v, Violation) for _, v in report.stability_assumed)

    def test_remark3_refuted_via_case_a(self):
        C, f, c = fixture("remark3")
        plan = SamplePlan(
            pair_count=0,
            t_grid=(F(1, 2),),
            explicit_pairs=((point(F(3, 4), F(1, 4)), point(0, 0)),),
        )
        report = verify_convexity_via_theorem(f, c, C, plan)
        assert report.overall == "refuted"
        assert report.first_refutation.kind == "quasiconvexity"
        assert report.first_refutation.lam == 1

    def test_constant_functional_rejected(self):
        seg = Segment(point(1, 0), point(0, 1))
        f = FunctionOracle("zero", lambda p: F(0), 2)
        with pytest.raises(ConstantFunctionalOnDomain):
            verify_convexity_via_theorem(f, functional(1, 1), seg, SamplePlan(pair_count=4))


class TestValidate:
    def _case_a_cert(self):
        _, f, c = fixture("quadratic")
        return case_a_bound(f, c, point(1, 0), point(0, 0), F(1, 2)), f, c

    def _case_b_cert(self):
        C, f, c = fixture("quadratic")
        return case_b_bound(f, c, C, point(1, 0), point(0, 1), F(1, 2)), f, c

    def test_roundtrip(self):
        for cert, f, c in (self._case_a_cert(), self._case_b_cert()):
            assert validate_certificate(cert, f, c) is True

    def test_perturbed_coefficient_rejected(self):
        cert, f, c = self._case_a_cert()
        bad_case = replace(cert.case, lam=cert.case.lam + F(1, 1000))
        assert validate_certificate(replace(cert, case=bad_case), f, c) is False

    def test_swapped_inequality_sides_rejected(self):
        cert, f, c = self._case_b_cert()
        step = cert.case.steps[0]
        swapped = replace(step, chained_lhs=step.chained_rhs, chained_rhs=step.chained_lhs)
        steps = (swapped,) + cert.case.steps[1:]
        assert validate_certificate(replace(cert, case=replace(cert.case, steps=steps)), f, c) is False

    def test_status_upgrade_rejected(self):
        cert, f, c = self._case_b_cert()
        assert validate_certificate(replace(cert, status=CertStatus.VERIFIED), f, c) is False

    def test_refuted_certificates_validate(self):
        C, f, c = fixture("remark1")
        cert = case_b_bound(f, c, C, point(1, 0), point(0, 1), F(1, 2))
        assert validate_certificate(cert, f, c) is True
        C3, f3, c3 = fixture("remark3")
        cert3 = case_a_bound(f3, c3, point(F(3, 4), F(1, 4)), point(0, 0), F(1, 2))
        assert validate_certificate(cert3, f3, c3) is True

    def test_malformed_raises(self):
        cert, f, c = self._case_a_cert()
        with pytest.raises(MalformedCertificate):
            validate_certificate("not a certificate", f, c)
        with pytest.raises(MalformedCertificate):
            validate_certificate(replace(cert, status="verified"), f, c)


small_fracs = st.fractions(min_value=-6, max_value=6, max_denominator=24)


class TestCaseAIdentity:
    @given(
        a=small_fracs,
        b=small_fracs,
        d=small_fracs,
        e=small_fracs,
        ux=small_fracs,
        uy=small_fracs,
        vx=small_fracs,
        vy=small_fracs,
        c0=small_fracs,
        c1=small_fracs,
        tk=st.integers(min_value=1, max_value=15),
    )
    @settings(max_examples=200, deadline=None)
    def test_equalized_bound_iff_convexity_bound(self, a, b, d, e, ux, uy, vx, vy, c0, c1, tk):
        f = FunctionOracle("poly", lambda p: a * p[0] * p[0] + b * p[1] * p[1] + d * p[0] + e * p[1], 2)
        u, v = point(ux, uy), point(vx, vy)
        c = functional(c0, c1)
        if u == v or pair(c, u - v) == 0:
            return
        t = F(tk, 16)
        lam = select_lambda(f, c, u, v)
        z = segment_point(v, u, t)
        g = lambda p: f(p) + lam * pair(c, p)
        assert g(u) == g(v)
        assert (g(z) <= g(v)) == (f(z) <= (1 - t) * f(v) + t * f(u))
