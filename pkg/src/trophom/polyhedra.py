"""Exact rational polyhedral geometry.

Convex hulls, H/V-representation conversion by the double description method,
face lattices, recession cones, and regular subdivisions of lattice point
configurations induced by lifting heights.  All coordinates are Fractions or
ints; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .exactla import (
    IntMatrix,
    LatticeSubspace,
    det,
    kernel_lattice,
    primitive_vector,
    solve_int,
    solve_rational,
)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _int_row(vec):
    """Scale a rational row vector to primitive integer form (sign kept)."""
    return primitive_vector(vec)


def dd_cone(constraints, dim):
    """Generators of the cone {x in R^dim : <c, x> <= 0 for all c}.

    `constraints` is a list of integer row vectors.  Returns (lineality, rays)
    as lists of primitive integer tuples; the rays are the extreme rays modulo
    the lineality space.
    """
    lin = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays = []  # list of vectors
    processed = []

    def zeroset(v):
        return frozenset(k for k, c in enumerate(processed) if _dot(c, v) == 0)

    for c in constraints:
        vals_lin = [_dot(c, l) for l in lin]
        if any(vals_lin):
            k = next(i for i, v in enumerate(vals_lin) if v)
            l0, a0 = lin[k], vals_lin[k]
            if a0 > 0:
                l0 = tuple(-x for x in l0)
                a0 = -a0
            new_lin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                v = _dot(c, l)
                new_lin.append(primitive_vector(tuple(a0 * x - v * y for x, y in zip(l, l0)))
                               if v else l)
            new_rays = []
            for r in rays:
                v = _dot(c, r)
                if v:
                    r = primitive_vector(tuple(-a0 * x + v * y for x, y in zip(r, l0)))
                new_rays.append(r)
            new_rays.append(l0)
            lin, rays = new_lin, new_rays
            processed.append(c)
            continue
        processed.append(c)
        vals = [(_dot(c, r), r) for r in rays]
        neg = [r for v, r in vals if v < 0]
        zero = [r for v, r in vals if v == 0]
        pos = [r for v, r in vals if v > 0]
        if not pos:
            rays = neg + zero
            continue
        zs = {r: zeroset(r) for r in rays}
        combos = []
        seen = set(neg) | set(zero)
        for p in pos:
            vp = _dot(c, p)
            for q in neg:
                common = zs[p] & zs[q]
                adjacent = True
                for r in rays:
                    if r is p or r is q:
                        continue
                    if zs[r] >= common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vq = _dot(c, q)
                w = primitive_vector(tuple(vp * x - vq * y for x, y in zip(q, p)))
                if w not in seen and any(w):
                    seen.add(w)
                    combos.append(w)
        rays = neg + zero + combos
    return lin, rays


def _homogenize_hrep(ineqs, eqs, dim):
    rows = [(-1,) + (0,) * dim]  # t >= 0
    for a, b in ineqs:
        rows.append(_int_row((-Fraction(b),) + tuple(Fraction(x) for x in a)))
    for a, b in eqs:
        r = _int_row((-Fraction(b),) + tuple(Fraction(x) for x in a))
        rows.append(r)
        rows.append(tuple(-x for x in r))
    return rows


def generators_from_hrep(ineqs, eqs, dim):
    """V-representation (vertices, rays, lineality) of {Ax <= b, Ex = f}."""
    lin, rays = dd_cone(_homogenize_hrep(ineqs, eqs, dim), dim + 1)
    verts, recrays, lins = [], [], []
    for v in lin:
        assert v[0] == 0
        if any(v[1:]):
            lins.append(primitive_vector(v[1:]))
    for r in rays:
        t = r[0]
        if t > 0:
            verts.append(tuple(Fraction(x, t) for x in r[1:]))
        elif any(r[1:]):
            recrays.append(primitive_vector(r[1:]))
    return sorted(set(verts)), sorted(set(recrays)), lins


def hrep_from_generators(points, rays, lins, dim):
    """Minimal H-representation (facets, equations) of conv(points)+cone."""
    rows = []
    for p in points:
        rows.append(_int_row((-1,) + tuple(Fraction(x) for x in p)))
    for r in rays:
        rows.append((0,) + tuple(int(x) for x in r))
    for l in lins:
        row = (0,) + tuple(int(x) for x in l)
        rows.append(row)
        rows.append(tuple(-x for x in row))
    lin, drays = dd_cone(rows, dim + 1)
    facets, eqs = [], []
    for v in lin:
        if any(v[1:]):
            eqs.append((tuple(v[1:]), Fraction(v[0])))
    for r in drays:
        if any(r[1:]):
            facets.append((tuple(r[1:]), Fraction(r[0])))
    return facets, eqs


def _canonical_equations(eqs, dim):
    """Reduced, primitive, sign-normalized row echelon form of a system."""
    if not eqs:
        return ()
    rows = [[Fraction(x) for x in a] + [Fraction(b)] for a, b in eqs]
    n = dim + 1
    out = []
    r = 0
    for c in range(n):
        sel = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    result = []
    for row in rows[:r]:
        prim = primitive_vector(row)
        lead = next(x for x in prim if x != 0)
        if lead < 0:
            prim = tuple(-x for x in prim)
        result.append((tuple(prim[:-1]), Fraction(prim[-1])))
    return tuple(sorted(result))


class QPolyhedron:
    """A rational polyhedron carrying both V- and H-representations."""

    __slots__ = ("dim", "vertices", "rays", "lin", "facets", "equations", "_key")

    def __init__(self, dim, vertices, rays, lin, facets, equations):
        self.dim = dim
        self.vertices = tuple(sorted(tuple(Fraction(x) for x in v) for v in vertices))
        self.rays = tuple(sorted(tuple(int(x) for x in r) for r in rays))
        if lin:
            # canonical: the saturated lattice of the lineality space
            normals = [list(a) for a, b in facets] + [list(a) for a, b in equations]
            sat = kernel_lattice(IntMatrix(normals, ncols=dim)) if normals \
                else LatticeSubspace.full(dim)
            self.lin = tuple(sat.basis.columns())
        else:
            self.lin = ()
        self.facets = tuple(sorted(
            (tuple(int(x) for x in a), Fraction(b)) for a, b in facets))
        self.equations = _canonical_equations(equations, dim)
        self._key = None

    @classmethod
    def from_generators(cls, points, rays=(), lins=(), dim=None):
        if dim is None:
            dim = len(points[0]) if points else (len(rays[0]) if rays else len(lins[0]))
        if not points:
            raise ValueError("a nonempty polyhedron needs at least one point")
        facets, eqs = hrep_from_generators(points, rays, lins, dim)
        verts, recrays, lins2 = generators_from_hrep(facets, eqs, dim)
        return cls(dim, verts, recrays, lins2, facets, eqs)

    @classmethod
    def from_hrep(cls, ineqs, eqs, dim):
        verts, rays, lins = generators_from_hrep(ineqs, eqs, dim)
        if not verts:
            return None  # empty
        facets, eqs2 = hrep_from_generators(verts, rays, lins, dim)
        return cls(dim, verts, rays, lins, facets, eqs2)

    @classmethod
    def cone(cls, rays, dim, lins=()):
        return cls.from_generators([(0,) * dim], rays, lins, dim)

    # ---- basic queries ----

    @property
    def affine_dim(self):
        return self.dim - len(self.equations)

    def is_bounded(self):
        return not self.rays and not self.lin

    def is_pointed(self):
        return not self.lin

    def is_cone(self):
        return self.vertices == ((0,) * self.dim,) if self.vertices else False

    def contains(self, x, strict=False):
        x = tuple(Fraction(v) for v in x)
        for a, b in self.equations:
            if _dot(a, x) != b:
                return False
        for a, b in self.facets:
            v = _dot(a, x)
            if v > b or (strict and v == b):
                return False
        return True

    def contains_polyhedron(self, other):
        for v in other.vertices:
            if not self.contains(v):
                return False
        for r in other.rays:
            if not self._contains_direction(r):
                return False
        for l in other.lin:
            if not (self._contains_direction(l) and self._contains_direction([-x for x in l])):
                return False
        return True

    def _contains_direction(self, r):
        return (all(_dot(a, r) == 0 for a, b in self.equations)
                and all(_dot(a, r) <= 0 for a, b in self.facets))

    def relint_point(self):
        k = len(self.vertices)
        pt = [sum(v[i] for v in self.vertices) / k for i in range(self.dim)]
        for r in self.rays:
            pt = [p + x for p, x in zip(pt, r)]
        return tuple(pt)

    def recession(self):
        return QPolyhedron.cone(self.rays, self.dim, self.lin)

    def geometry_key(self):
        """Canonical hashable identity of the underlying point set."""
        if self._key is None:
            if not self.lin:
                self._key = ("pt", self.dim, self.vertices, self.rays)
            else:
                L = IntMatrix.from_columns(self.lin, self.dim)
                # canonical coordinates transverse to the lineality: kill the
                # pivot rows of the HNF basis, keep the remaining coordinates
                piv_rows = []
                for j in range(L.ncols):
                    col = L.column(j)
                    piv_rows.append(next(i for i in range(self.dim) if col[i]))
                keep = [i for i in range(self.dim) if i not in piv_rows]

                def project(x):
                    x = [Fraction(v) for v in x]
                    for j, pr in enumerate(piv_rows):
                        f = x[pr] / L.rows[pr][j]
                        if f:
                            colj = L.column(j)
                            x = [xv - f * cv for xv, cv in zip(x, colj)]
                    return tuple(x[i] for i in keep)

                verts = tuple(sorted(set(project(v) for v in self.vertices)))
                rays = tuple(sorted(set(
                    primitive_vector(project(r)) for r in self.rays
                    if any(project(r)))))
                self._key = ("lin", self.dim, tuple(self.lin), verts, rays)
        return self._key

    def __eq__(self, other):
        return isinstance(other, QPolyhedron) and self.geometry_key() == other.geometry_key()

    def __hash__(self):
        return hash(self.geometry_key())

    def __repr__(self):
        return ("QPolyhedron(dim=%d, adim=%d, verts=%d, rays=%d, lin=%d)"
                % (self.dim, self.affine_dim, len(self.vertices), len(self.rays),
                   len(self.lin)))

    # ---- constructions ----

    def intersect_hrep(self, ineqs=(), eqs=()):
        """Intersection with extra halfspaces/hyperplanes; None if empty."""
        return QPolyhedron.from_hrep(list(self.facets) + list(ineqs),
                                     list(self.equations) + list(eqs), self.dim)

    def intersect(self, other):
        return self.intersect_hrep(other.facets, other.equations)

    def linear_image(self, M: IntMatrix):
        """Image under an integer linear map (rows of M give the new coords)."""
        pts = [tuple(_dot(r, v) for r in M.rows) for v in self.vertices]
        rays = []
        for r in self.rays:
            w = tuple(_dot(row, r) for row in M.rows)
            if any(w):
                rays.append(primitive_vector(w))
        lins = []
        for l in self.lin:
            w = tuple(_dot(row, l) for row in M.rows)
            if any(w):
                lins.append(primitive_vector(w))
        return QPolyhedron.from_generators(pts, rays, lins, M.nrows)

    def translate(self, t):
        return QPolyhedron.from_generators(
            [tuple(Fraction(a) + Fraction(b) for a, b in zip(v, t)) for v in self.vertices],
            self.rays, self.lin, self.dim)

    def tangent_lattice(self) -> LatticeSubspace:
        """Saturated integral tangent lattice of the affine hull."""
        if not self.equations:
            return LatticeSubspace.full(self.dim)
        A = IntMatrix([list(a) for a, b in self.equations], ncols=self.dim)
        return kernel_lattice(A)

    def face_lattice(self):
        """All nonempty faces, including the polyhedron itself.

        Returns a list of (face: QPolyhedron, active: frozenset of facet
        indices); containment is reverse inclusion of active sets.
        """
        faces = {}
        todo = [frozenset()]
        seen = set()
        while todo:
            act = todo.pop()
            if act in seen:
                continue
            seen.add(act)
            eqs = list(self.equations) + [self.facets[i] for i in act]
            F = QPolyhedron.from_hrep(self.facets, eqs, self.dim)
            if F is None:
                continue
            full_act = frozenset(
                i for i, (a, b) in enumerate(self.facets)
                if all(_dot(a, v) == b for v in F.vertices)
                and all(_dot(a, r) == 0 for r in F.rays)
                and all(_dot(a, l) == 0 for l in F.lin))
            if full_act not in faces:
                faces[full_act] = F
                for i in range(len(self.facets)):
                    if i not in full_act:
                        todo.append(full_act | {i})
        return [(F, act) for act, F in sorted(faces.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))]

    def lattice_points(self, cap=10 ** 6):
        """All integer points of a bounded polyhedron (box enumeration)."""
        if not self.is_bounded():
            raise ValueError("lattice point enumeration needs a bounded polyhedron")
        import math
        lo = [math.ceil(min(v[i] for v in self.vertices)) for i in range(self.dim)]
        hi = [math.floor(max(v[i] for v in self.vertices)) for i in range(self.dim)]
        total = 1
        for a, b in zip(lo, hi):
            total *= max(0, b - a + 1)
        if total > cap:
            raise ValueError("lattice point scale cap exceeded: %d candidates" % total)
        pts = []
        def rec(i, prefix):
            if i == self.dim:
                if self.contains(prefix):
                    pts.append(tuple(prefix))
                return
            for x in range(lo[i], hi[i] + 1):
                rec(i + 1, prefix + [x])
        rec(0, [])
        return pts

    def interior_lattice_points(self, cap=10 ** 6):
        return [p for p in self.lattice_points(cap) if self.contains(p, strict=True)]


def convex_hull(points, dim=None) -> QPolyhedron:
    """Convex hull of rational points; redundant points are removed."""
    if not points:
        raise ValueError("empty point list")
    return QPolyhedron.from_generators(points, dim=dim)


def recession_cone(P: QPolyhedron) -> QPolyhedron:
    return P.recession()


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of integer vectors; vertices are the extreme points."""

    ambient_dim: int
    vertices: tuple
    poly: QPolyhedron = field(compare=False, repr=False)

    @classmethod
    def from_points(cls, points):
        P = convex_hull(points)
        verts = tuple(sorted(tuple(int(x) for x in v) for v in P.vertices))
        return cls(P.dim, verts, P)

    @property
    def dim(self):
        return self.poly.affine_dim


# ---------------------------------------------------------------------------
# cones in fans

def cone_hull(rays, dim) -> QPolyhedron:
    return QPolyhedron.cone(rays, dim)


def cone_meets_relint(C: QPolyhedron, rho: QPolyhedron) -> bool:
    """Does the cone C intersect the relative interior of the cone rho?

    For the apex cone (rho = {0}) this is always true.
    """
    if rho.affine_dim == 0:
        return True
    K = C.intersect(rho)
    if K is None:
        return False
    gens = list(K.rays) + list(K.lin) + [tuple(-x for x in l) for l in K.lin]
    if not gens:
        return False  # K = {0}
    for a, b in rho.facets:
        if all(_dot(a, g) == 0 for g in gens):
            return False
    return True


def cone_covered_by(C: QPolyhedron, cones) -> bool:
    """Is the cone C contained in the union of the given cones?

    Works by peeling: regions of C not yet covered are tracked as closed
    cones; only full-dimensional-in-C residues matter since the union of
    closed cones is closed.
    """
    target_dim = C.affine_dim
    regions = [C]
    for D in cones:
        walls = [a for a, b in D.facets]
        for a, b in D.equations:
            walls.append(a)
            walls.append(tuple(-x for x in a))
        new_regions = []
        for R in regions:
            if D.contains_polyhedron(R):
                continue
            prefix = []
            for a in walls:
                flipped = (tuple(-x for x in a), Fraction(0))
                piece = R.intersect_hrep(ineqs=prefix + [flipped])
                if piece is not None and piece.affine_dim == target_dim:
                    gens = list(piece.vertices) + list(piece.rays) + list(piece.lin) + \
                        [tuple(-x for x in l) for l in piece.lin]
                    if any(_dot(a, g) > 0 for g in gens):
                        new_regions.append(piece)
                prefix.append((a, Fraction(0)))
        regions = new_regions
        if not regions:
            return True
    return not regions


# ---------------------------------------------------------------------------
# regular subdivisions

@dataclass
class RegularSubdivision:
    """Polytopal subdivision induced by lifting heights (upper faces).

    `faces` maps a frozenset of support-point indices to its dimension; the
    maximal cells are those of top dimension.  Point sets include every
    support point lying on the face, not only its vertices.
    """

    support_points: tuple
    heights: tuple
    dimension: int
    maximal_cells: tuple        # tuple of frozensets
    faces: dict                 # frozenset -> dim
    used: tuple                 # bool per support point
    tangent_basis: IntMatrix    # intrinsic lattice basis of aff(points)
    base_point: tuple

    def faces_of_dim(self, d):
        return [f for f, fd in self.faces.items() if fd == d]


def _intrinsic_coords(points):
    """Saturated-lattice coordinates of integer points in their affine hull."""
    base = points[0]
    diffs = [tuple(p[i] - base[i] for i in range(len(base))) for p in points]
    T = LatticeSubspace.from_columns(diffs, len(base))
    # saturate
    T = kernel_lattice(IntMatrix([list(r) for r in _annihilator_rows(T, len(base))],
                                 ncols=len(base))) if T.rank < len(base) else LatticeSubspace.full(len(base))
    d = T.rank
    if d == 0:
        return [(0,) * 0 for _ in points], IntMatrix(tuple(() for _ in range(len(base))), ncols=0), base
    coords = []
    for df in diffs:
        y = T.coordinates(df)
        assert y is not None, "integer point outside saturated tangent lattice"
        coords.append(tuple(y))
    return coords, T.basis, base


def _annihilator_rows(T: LatticeSubspace, dim):
    """Integer rows spanning the annihilator of the subspace."""
    if T.rank == 0:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    K = kernel_lattice(T.basis.transpose())
    return [K.basis.column(j) for j in range(K.basis.ncols)]


def regular_subdivision(points, heights) -> RegularSubdivision:
    """Subdivision of conv(points) from the upper faces of the lifted hull."""
    points = [tuple(int(x) for x in p) for p in points]
    heights = [Fraction(h) for h in heights]
    if len(set(points)) != len(points):
        raise ValueError("duplicate support points")
    if len(heights) != len(points):
        raise ValueError("one height per point required")
    coords, basis, base = _intrinsic_coords(points)
    d = basis.ncols
    if d == 0:
        f = frozenset({0})
        return RegularSubdivision(tuple(points), tuple(heights), 0, (f,),
                                  {f: 0}, (True,), basis, base)
    lifted = [tuple(Fraction(c) for c in y) + (h,) for y, h in zip(coords, heights)]
    facets, eqs = hrep_from_generators(lifted, [], [], d + 1)
    degenerate = any(a[d] != 0 for a, b in eqs)
    if degenerate:
        # affine heights: the subdivision is the face complex of the polytope
        Q = convex_hull([tuple(Fraction(c) for c in y) for y in coords], dim=d)
        cells = {}
        for F, act in Q.face_lattice():
            members = frozenset(i for i, y in enumerate(coords) if F.contains(y))
            cells[members] = F.affine_dim
        maximal = tuple(sorted(f for f, fd in cells.items() if fd == d))
        used = tuple(True for _ in points)
        return RegularSubdivision(tuple(points), tuple(heights), d, maximal,
                                  cells, used, basis, base)
    upper = [(a, b) for a, b in facets if a[d] > 0]
    maximal = []
    for a, b in upper:
        members = frozenset(i for i, lp in enumerate(lifted) if _dot(a, lp) == b)
        maximal.append(members)
    maximal = sorted(set(maximal))
    faces = {}
    for members in maximal:
        pts = [coords[i] for i in sorted(members)]
        cellQ = convex_hull([tuple(Fraction(c) for c in y) for y in pts], dim=d)
        for F, act in cellQ.face_lattice():
            sub = frozenset(i for i in members if F.contains(coords[i]))
            fd = F.affine_dim
            if sub in faces:
                assert faces[sub] == fd
            else:
                faces[sub] = fd
    used = tuple(any(i in m for m in maximal) for i in range(len(points)))
    return RegularSubdivision(tuple(points), tuple(heights), d, tuple(maximal),
                              faces, used, basis, base)


def normalized_simplex_volume(sub: RegularSubdivision, cell) -> int:
    """Normalized lattice volume of a simplex cell (d! times euclidean),
    taken in the saturated lattice of the cell's own affine hull."""
    idx = sorted(cell)
    coords, basis, _ = _intrinsic_coords([sub.support_points[i] for i in idx])
    d = basis.ncols
    if len(idx) != d + 1:
        raise ValueError("not a simplex")
    rows = [tuple(coords[i + 1][j] for j in range(d)) for i in range(d)]
    return abs(det(IntMatrix(rows, ncols=d)))


def is_primitive(sub: RegularSubdivision) -> bool:
    """True iff every maximal cell is a unimodular simplex."""
    d = sub.dimension
    for cell in sub.maximal_cells:
        if len(cell) != d + 1:
            return False
        if normalized_simplex_volume(sub, cell) != 1:
            return False
    return True
