import random
from fractions import Fraction

import pytest

from trophom.polyhedra import LatticePolytope, cone_meets_relint, cone_hull
from trophom.tropio import (
    FanError,
    FanSpec,
    ParseError,
    TropicalPolynomial,
    fan_text,
    load_fan,
    newton_polytope,
    normal_fan,
    parse_polynomial,
    polynomial_text,
)


class TestParse:
    def test_standard_line(self):
        f = parse_polynomial("max(0, x1, x2)")
        assert f.n_vars == 2
        assert f.terms == (((0, 0), 0), ((0, 1), 0), ((1, 0), 0))

    def test_rational_coefficient(self):
        f = parse_polynomial("max(3/2 + 2*x1)")
        assert f.terms == (((2,), Fraction(3, 2)),)

    def test_duplicate_exponent_rejected(self):
        with pytest.raises(ParseError):
            parse_polynomial("max(0, x1, x1)")

    def test_syntax_error_has_location(self):
        with pytest.raises(ParseError) as e:
            parse_polynomial("max(0, x1,, x2)")
        assert "line 1" in str(e.value)

    def test_negative_exponent_and_coeff(self):
        f = parse_polynomial("max(-1 + -2*x1 + x2, 0)")
        assert (( -2, 1), Fraction(-1)) in f.terms

    def test_round_trip(self):
        rng = random.Random(2)
        for _ in range(20):
            n = rng.randint(1, 3)
            exps = set()
            while len(exps) < rng.randint(1, 5):
                exps.add(tuple(rng.randint(-3, 3) for _ in range(n)))
            terms = [(e, Fraction(rng.randint(-9, 9), rng.randint(1, 4))) for e in exps]
            f = TropicalPolynomial.make(terms, n)
            assert parse_polynomial(polynomial_text(f), n_vars=n) == f

    def test_padding(self):
        f = parse_polynomial("max(0, x1)", n_vars=3)
        assert f.n_vars == 3
        assert f.terms == (((0, 0, 0), 0), ((1, 0, 0), 0))


class TestNewton:
    def test_line_polytope(self):
        f = parse_polynomial("max(0, x1, x2)")
        np = newton_polytope(f)
        assert set(np.vertices) == {(0, 0), (1, 0), (0, 1)}

    def test_single_term(self):
        f = parse_polynomial("max(2*x1)")
        np = newton_polytope(f)
        assert np.vertices == ((2,),)
        assert np.dim == 0

    def test_dense_cubic(self):
        terms = [((a, b), 0) for a in range(4) for b in range(4 - a)]
        f = TropicalPolynomial.make(terms, 2)
        np = newton_polytope(f)
        assert set(np.vertices) == {(0, 0), (3, 0), (0, 3)}
        assert len(f.terms) == 10


class TestNormalFan:
    def test_tp2(self):
        np = newton_polytope(parse_polynomial("max(0, x1, x2)"))
        fan = normal_fan(np)
        assert set(fan.rays) == {(-1, 0), (0, -1), (1, 1)}
        assert len(fan.max_cones) == 3
        assert fan.is_complete()

    def test_square_tp1xtp1(self):
        np = LatticePolytope.from_points([(0, 0), (1, 0), (0, 1), (1, 1)])
        fan = normal_fan(np)
        assert set(fan.rays) == {(-1, 0), (0, -1), (1, 0), (0, 1)}
        assert len(fan.max_cones) == 4

    def test_dilation_invariance(self):
        np1 = LatticePolytope.from_points([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
        np3 = LatticePolytope.from_points([(0, 0, 0), (3, 0, 0), (0, 3, 0), (0, 0, 3)])
        f1, f3 = normal_fan(np1), normal_fan(np3)
        assert set(f1.rays) == set(f3.rays)

    def test_completeness_by_sampling(self):
        np = newton_polytope(parse_polynomial("max(0, x1, x2, x1 + x2)"))
        fan = normal_fan(np)
        rng = random.Random(4)
        for _ in range(40):
            d = (rng.randint(-7, 7), rng.randint(-7, 7))
            if d == (0, 0):
                continue
            hits = [c for c in fan.max_cones
                    if fan.cone_geometry(c).contains(d)]
            assert hits
            relint_hits = [c for c in fan.cones()
                           if c and cone_meets_relint(cone_hull([d], 2),
                                                      fan.cone_geometry(c))
                           and fan.cone_geometry(c).contains(d)]
            # d lies in the relative interior of exactly one cone
            mins = [c for c in relint_hits
                    if not any(o < c for o in relint_hits)]
            assert len(mins) == 1

    def test_non_fulldim_rejected(self):
        np = LatticePolytope.from_points([(0, 0), (1, 0)])
        with pytest.raises(FanError):
            normal_fan(np)


class TestLoadFan:
    def test_blowup_fan(self):
        # projective 3-space fan with the corner cone star-subdivided
        text = """dim 3
ray 0: -1 0 0
ray 1: 0 -1 0
ray 2: 0 0 -1
ray 3: 1 1 1
ray 4: -1 -1 -1
cone: 0 1 3
cone: 0 2 3
cone: 1 2 3
cone: 0 1 4
cone: 0 2 4
cone: 1 2 4
"""
        fan = load_fan(text)
        assert len(fan.rays) == 5
        assert len(fan.max_cones) == 6
        assert fan.is_complete()

    def test_partial_fan(self):
        fan = load_fan("dim 2\nray 0: 1 0\nray 1: 0 1\ncone: 0 1\n")
        assert not fan.is_complete()
        assert len(fan.cones()) == 4

    def test_unimodularity_violation(self):
        with pytest.raises(FanError) as e:
            load_fan("dim 2\nray 0: 1 0\nray 1: 1 2\ncone: 0 1\n")
        assert "unimodular" in str(e.value)

    def test_non_face_intersection(self):
        # two 2-cones overlapping in dimension 2
        with pytest.raises(FanError):
            load_fan("dim 2\nray 0: 1 0\nray 1: 0 1\nray 2: 1 1\nray 3: -1 1\n"
                     "cone: 0 1\ncone: 2 3\n")

    def test_round_trip(self):
        text = "dim 2\nray 0: -1 0\nray 1: 0 -1\nray 2: 1 1\ncone: 0 1\ncone: 0 2\ncone: 1 2\n"
        fan = load_fan(text)
        assert load_fan(fan_text(fan)) == fan

    def test_trivial_fan(self):
        fan = load_fan("dim 3\n")
        assert fan.is_trivial()
        assert fan.cones() == [frozenset()]
