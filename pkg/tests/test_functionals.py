"""Functionals, oracles, perturbations, and the fixture registry."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convexcheck import (
    DimensionMismatch,
    EuclideanBall,
    PointSource,
    Segment,
    Simplex,
    SinglePointDomain,
    UnknownFixture,
    barycentric,
    construct_nonconstant_functional,
    fixture,
    fixture_names,
    fixture_record,
    functional,
    is_constant_on,
    pair,
    perturbed,
    point,
    sample_points,
)
from convexcheck.functionals import KNOWN_CONVEX

TRIANGLE = Simplex((point(1, 0), point(0, 1), point(0, 0)))

fractions_small = st.fractions(min_value=-5, max_value=5, max_denominator=30)


class TestPair:
    def test_examples(self):
        c = functional(1, 1)
        assert pair(c, point(1, 0)) == 1
        assert pair(c, point(0, 0)) == 0
        assert pair(functional(0, 0, 0), point(7, -2, F(1, 3))) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pair(functional(1, 1), point(1, 0, 0))

    @given(
        cs=st.tuples(fractions_small, fractions_small),
        xs=st.tuples(fractions_small, fractions_small),
        ys=st.tuples(fractions_small, fractions_small),
        alpha=fractions_small,
        beta=fractions_small,
    )
    @settings(max_examples=150, deadline=None)
    def test_linearity(self, cs, xs, ys, alpha, beta):
        c = functional(*cs)
        x, y = point(*xs), point(*ys)
        combo = x.scale(alpha) + y.scale(beta)
        assert pair(c, combo) == alpha * pair(c, x) + beta * pair(c, y)


class TestIsConstantOn:
    def test_triangle_witness(self):
        check = is_constant_on(functional(1, 1), TRIANGLE)
        assert check.constant is False
        assert check.witness == (point(1, 0), point(0, 0))
        assert check.pairings == (F(1), F(0))

    def test_constant_on_segment(self):
        seg = Segment(point(1, 0), point(0, 1))
        assert is_constant_on(functional(1, 1), seg).constant is True

    def test_zero_functional_constant_everywhere(self):
        for domain in (TRIANGLE, Segment(point(1, 0), point(0, 1)), EuclideanBall(point(0, 0), 1)):
            assert is_constant_on(functional(0, 0), domain).constant is True

    def test_ball_probes_decide(self):
        ball = EuclideanBall(point(2, 3), F(1, 2))
        check = is_constant_on(functional(0, 1), ball)
        assert check.constant is False
        assert check.witness is not None

    def test_ball_with_insufficient_witnesses_is_unknown(self):
        ball = EuclideanBall(point(0, 0), 1)
        check = is_constant_on(functional(1, 0), ball, witnesses=[point(0, 0)])
        assert check.constant is None


class TestConstructNonconstant:
    def test_examples(self):
        assert construct_nonconstant_functional(TRIANGLE).coeffs == (F(1), F(-1))
        seg = Segment(point(0, 0), point(0, 1))
        assert construct_nonconstant_functional(seg).coeffs == (F(0), F(-1))
        with pytest.raises(SinglePointDomain):
            construct_nonconstant_functional(Simplex((point(1, 2),)))

    def test_always_nonconstant(self):
        domains = [
            TRIANGLE,
            Segment(point(0, 0), point(0, 1)),
            EuclideanBall(point(1, -1), F(3, 4)),
            Simplex((point(0, 0, 0), point(1, 0, 0), point(0, 1, 0), point(0, 0, 1))),
        ]
        for domain in domains:
            c = construct_nonconstant_functional(domain)
            assert is_constant_on(c, domain).constant is False


class TestPerturbed:
    def test_zero_coefficient_identity(self):
        _, f, c = fixture("remark1")
        g = perturbed(f, 0, c)
        for p in sample_points(TRIANGLE, 40):
            assert g(p) == f(p)

    def test_examples(self):
        _, f1, c = fixture("remark1")
        assert perturbed(f1, 1, c)(point(F(1, 2), F(1, 2))) == 2
        _, f3, _ = fixture("remark3")
        assert perturbed(f3, 1, c)(point(F(3, 4), F(1, 4))) == 1

    def test_additivity(self):
        _, f, c = fixture("quadratic")
        lam1, lam2 = F(2, 3), F(-5, 7)
        once = perturbed(f, lam1 + lam2, c)
        twice = perturbed(perturbed(f, lam1, c), lam2, c)
        for p in sample_points(TRIANGLE, 40):
            assert once(p) == twice(p)

    def test_dimension_mismatch(self):
        _, f, _ = fixture("quadratic")
        with pytest.raises(DimensionMismatch):
            perturbed(f, 1, functional(1, 0, 0))


class TestFixtures:
    def test_remark1_values(self):
        _, f, _ = fixture("remark1")
        assert f(point(1, 0)) == 1
        assert f(point(0, 1)) == 0
        assert f(point(F(1, 2), F(1, 2))) == 1

    def test_remark3_values(self):
        _, f, _ = fixture("remark3")
        assert f(point(F(1, 2), F(1, 2))) == 0
        assert f(point(1, 0)) == 1
        assert f(point(0, 0)) == 1

    def test_quadratic_value(self):
        _, f, _ = fixture("quadratic")
        assert f(point(F(1, 2), F(1, 2))) == F(1, 2)

    def test_unknown_fixture(self):
        with pytest.raises(UnknownFixture):
            fixture("nope")

    def test_registry_names(self):
        names = fixture_names()
        for expected in ("remark1", "remark3", "quadratic", "linear", "norm1", "indicator_like_stable"):
            assert expected in names
        convex = [n for n in names if KNOWN_CONVEX in fixture_record(n).oracle.flags]
        assert len(convex) >= 5
        for n in convex:
            assert fixture_record(n).profile.convex

    def test_remark_membership_matches_barycentric_zero_pattern(self):
        domain, f1, _ = fixture("remark1")
        _, f3, _ = fixture("remark3")
        pts = sample_points(domain, 600) + sample_points(
            domain, 400, source=PointSource.SEEDED_RANDOM_BARYCENTRIC, seed=9
        )
        for p in pts:
            b_u, b_v, b_w = barycentric(domain, p)
            on_half_open = b_w == 0 and b_u > 0
            on_open = b_w == 0 and b_u > 0 and b_v > 0
            assert f1(p) == (1 if on_half_open else 0)
            assert f3(p) == (0 if on_open else 1)
