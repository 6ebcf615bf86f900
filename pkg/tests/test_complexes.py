from fractions import Fraction

import pytest

from trophom.complexes import (
    BuildError,
    build_pair,
    gamma_open,
    is_cellular_pair,
    is_combinatorially_ample,
    is_nonsingular,
    is_proper,
    slice_pair,
    toric_complex,
)
from trophom.tropio import load_fan, newton_polytope, normal_fan, parse_polynomial
from trophom.toric import ToricVariety

TP3_BLOWUP_FAN = """dim 3
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


def pair_line_tp2():
    f = parse_polynomial("max(0, x1, x2)")
    return build_pair(f, normal_fan(newton_polytope(f)))


def pair_hyperplane_rn(n):
    f = parse_polynomial("max(0, %s)" % ", ".join("x%d" % i for i in range(1, n + 2)))
    return build_pair(f, load_fan("dim %d\n" % (n + 1)))


def pair_blowup():
    f = parse_polynomial("max(0, x1, x2, x3)")
    return build_pair(f, load_fan(TP3_BLOWUP_FAN))


def pair_degenerate(n):
    f = parse_polynomial("max(0, x1)", n_vars=n + 1)
    return build_pair(f, load_fan("dim %d\n" % (n + 1)))


def curve_poly(d):
    pts = [(a, b) for a in range(d + 1) for b in range(d + 1 - a)]
    from trophom.tropio import TropicalPolynomial
    return TropicalPolynomial.make(
        [(p, -(p[0] * p[0] + p[0] * p[1] + p[1] * p[1])) for p in pts], 2)


class TestDualComplex:
    def test_hyperplane_rn_structure(self):
        for n in (1, 2):
            pair = pair_hyperplane_rn(n)
            X = pair.X
            # one vertex, n+2 rays, and generally C(n+2, k) cells of codim k-1
            fv = X.f_vector()
            assert fv[0] == 1
            from math import comb
            for q in range(n + 1):
                assert fv[q] == comb(n + 2, n + 2 - q), (n, q, fv)

    def test_duality_counts(self):
        for f, fan in [
            (curve_poly(2), None),
            (parse_polynomial("max(0, x1, x2)"), None),
        ]:
            fan = fan or load_fan("dim 2\n")
            pair = build_pair(f, fan)
            S = pair.subdivision
            n1 = pair.Y.dim
            for q in range(n1):
                want = len([1 for F, d in S.faces.items() if d == n1 - q])
                got = len([c for c in pair.X.cells if c.sed == pair.Y.apex
                           and c.dim == q])
                assert got == want

    def test_cubic_curve_cycle(self):
        pair = build_pair(curve_poly(3), load_fan("dim 2\n"))
        X = pair.X
        # first Betti number of the compact part (rays retract onto their
        # endpoints) = interior lattice points of 3*simplex = 1
        v = len(X.cells_of_dim(0))
        e = len([c for c in X.cells_of_dim(1) if c.compact])
        comps = _graph_components(X)
        assert e - v + comps == 1
        assert X.validate(full=True)

    def test_degenerate_input_rejected(self):
        with pytest.raises(BuildError):
            build_pair(parse_polynomial("max(0)"), load_fan("dim 1\n"))

    def test_dimension_cap(self):
        f = parse_polynomial("max(0, x1, x2, x3, x4, x5)")
        with pytest.raises(BuildError):
            build_pair(f, load_fan("dim 5\n"))
        build_pair(f, load_fan("dim 5\n"), max_dim=5)


def _graph_components(X):
    verts = [c.index for c in X.cells_of_dim(0)]
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for c in X.cells_of_dim(1):
        if not c.compact:
            continue
        vs = X.facets_of[c.index]
        for a in vs[1:]:
            ra, rb = find(a), find(vs[0])
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in verts})


class TestCompactified:
    def test_line_in_tp2_counts(self):
        pair = pair_line_tp2()
        assert pair.Yref.f_vector() == [7, 9, 3]
        assert pair.X.f_vector() == [4, 3]
        assert pair.Yref.validate(full=True)
        assert pair.X.validate(full=True)
        # X has one mobile vertex and three sedentary ones
        sed0 = [c for c in pair.X.cells_of_dim(0) if c.sed == pair.Y.apex]
        assert len(sed0) == 1
        # every X cell is a Yref cell
        for c in pair.X.cells:
            assert pair.embed[c.index] is not None

    def test_line_compactness_flags(self):
        pair = pair_line_tp2()
        assert all(c.compact for c in pair.Yref.cells)

    def test_blowup_structure(self):
        pair = pair_blowup()
        assert pair.Yref.validate()
        assert pair.X.validate()
        # X misses the exceptional stratum entirely
        exc_ray = pair.Y.fan.rays.index((-1, -1, -1))
        exc_cone = pair.Y.cone_index[frozenset([exc_ray])]
        assert not any(c.sed == exc_cone for c in pair.X.cells)
        assert any(c.sed == exc_cone for c in pair.Yref.cells)

    def test_degenerate_newton_polytope(self):
        pair = pair_degenerate(2)
        # X is a classical plane: one 2-cell, nothing else
        assert pair.X.f_vector() == [0, 0, 1]
        assert pair.Yref.f_vector() == [0, 0, 1, 2]

    def test_sedentary_face_has_unique_mobile_coface(self):
        # at most one sedentarity-0 face of X projects onto a given sedentary
        # face (its dimension is forced to dim + sed by properness)
        for pair in (pair_line_tp2(), pair_blowup()):
            X = pair.X
            for c in X.cells:
                if c.sed == pair.Y.apex:
                    continue
                witnesses = []
                for s in X.cells:
                    if s.sed != pair.Y.apex or c.index not in X.closure(s.index):
                        continue
                    if c.sed in pair.Y.reached_cones(s.geom, s.sed):
                        img = s.geom.linear_image(pair.Y.projection(s.sed, c.sed))
                        if img.geometry_key() == c.geom.geometry_key():
                            witnesses.append(s.index)
                assert len(witnesses) == 1
                assert X.cells[witnesses[0]].dim == c.dim + pair.Y.sedentarity(c.sed)


class TestPredicates:
    def test_line_tp2_predicates(self):
        pair = pair_line_tp2()
        assert is_proper(pair)
        assert is_nonsingular(pair)
        ample, failing = is_combinatorially_ample(pair)
        assert ample and not failing
        assert is_cellular_pair(pair) == "yes"

    def test_blowup_fails_ampleness_at_exceptional_component(self):
        pair = pair_blowup()
        assert is_proper(pair)
        assert is_nonsingular(pair)
        ample, failing = is_combinatorially_ample(pair)
        assert not ample
        assert len(failing) == 1
        gamma = pair.Yref.cells[failing[0]]
        # the failing component is the one dual to the constant term, whose
        # gamma^o contains the exceptional stratum
        exc_ray = pair.Y.fan.rays.index((-1, -1, -1))
        exc_cone = pair.Y.cone_index[frozenset([exc_ray])]
        go = gamma_open(pair, failing[0])
        assert exc_cone in go.pieces

    def test_conic_trivial_subdivision_singular(self):
        from trophom.tropio import TropicalPolynomial
        pts = [(a, b) for a in range(3) for b in range(3 - a)]
        f = TropicalPolynomial.make([(p, 0) for p in pts], 2)
        pair = build_pair(f, normal_fan(newton_polytope(f)))
        assert not is_nonsingular(pair)

    def test_degenerate_cellular(self):
        assert is_cellular_pair(pair_degenerate(1)) == "no"
        assert is_cellular_pair(pair_hyperplane_rn(1)) == "yes"

    def test_missing_boundary_curve_not_cellular(self):
        # three rays (-2,1), (1,-2), (1,1) from Newton triangle (0,0),(1,2),(2,1)
        from trophom.tropio import TropicalPolynomial
        f = TropicalPolynomial.make([((0, 0), 0), ((1, 2), 0), ((2, 1), 0)], 2)
        fan = load_fan("dim 2\nray 0: -1 0\nray 1: 0 -1\ncone: 0 1\n")
        pair = build_pair(f, fan)
        assert not any(c.sed != pair.Y.apex for c in pair.X.cells)
        assert is_cellular_pair(pair) == "no"

    def test_line_in_half_toric_proper_but_not_cellular(self):
        f = parse_polynomial("max(0, x1)", n_vars=2)
        fan = load_fan("dim 2\nray 0: 0 -1\ncone: 0\n")
        pair = build_pair(f, fan)
        assert is_proper(pair)
        assert is_cellular_pair(pair) == "no"


class TestGammaOpen:
    def test_bounded_cell_is_alone(self):
        pair = pair_line_tp2()
        x = next(c for c in pair.X.cells if c.dim == 0 and c.sed == pair.Y.apex)
        go = gamma_open(pair, pair.embed[x.index])
        assert go.cone_ids() == [pair.Y.apex]
        assert go.minimal_face() == pair.embed[x.index]

    def test_edge_hitting_one_stratum(self):
        pair = pair_line_tp2()
        edges = [c for c in pair.X.cells if c.dim == 1]
        for e in edges:
            go = gamma_open(pair, e.index, host=pair.X)
            assert len(go.pieces) == 2  # poset of T
            assert go.minimal_face() is not None

    def test_two_face_through_one_dim_stratum_is_t2(self):
        # 2-face of the hyperplane in TP^3 reaching a 1-dimensional stratum
        f = parse_polynomial("max(0, x1, x2, x3)")
        pair = build_pair(f, normal_fan(newton_polytope(f)))
        two_faces = [c for c in pair.X.cells
                     if c.dim == 2 and c.sed == pair.Y.apex]
        counts = sorted(len(gamma_open(pair, c.index, host=pair.X).pieces)
                        for c in two_faces)
        # each 2-face of the hyperplane meets a 1-dim stratum: poset of T^2
        assert set(counts) == {4}
        for c in two_faces:
            go = gamma_open(pair, c.index, host=pair.X)
            assert go.is_boolean()
            assert go.minimal_face() is not None

    def test_unique_minimal_face_everywhere(self):
        for pair in (pair_line_tp2(),):
            assert is_combinatorially_ample(pair)[0]
            for c in pair.X.cells:
                if c.sed != pair.Y.apex:
                    continue
                go = gamma_open(pair, c.index, host=pair.X)
                assert go.minimal_face() is not None


class TestOtherStructures:
    def test_toric_complex_tp2(self):
        Y = ToricVariety(normal_fan(newton_polytope(parse_polynomial("max(0, x1, x2)"))))
        T = toric_complex(Y)
        assert T.f_vector() == [3, 3, 1]
        assert T.validate()

    def test_slice_pair_degenerate(self):
        pair = pair_degenerate(1)
        refined = slice_pair(pair, [((0, 1), Fraction(0))])
        # X = the line x1 = 0 refined into two rays and a vertex
        assert refined.X.f_vector() == [1, 2]
        assert refined.Yref.f_vector() == [1, 4, 4]
        assert refined.X.validate(full=True)
        assert refined.Yref.validate(full=True)
