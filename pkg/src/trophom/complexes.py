"""Tropical hypersurfaces as cell complexes in tropical toric varieties.

Builds the hypersurface X dual to the regular subdivision of the Newton
polytope, its compactification, and the ambient polyhedral structure obtained
by refining the toric variety by X.  Cells are stored in stratum-local
coordinates together with their sedentarity cone, integral tangent lattice,
and compactness flag.  Also home to the predicate battery (properness,
non-singularity, combinatorial ampleness, cellular pair) and to the complex
refinements used for invariance checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactla import LatticeSubspace
from .polyhedra import QPolyhedron, cone_meets_relint, is_primitive, \
    normalized_simplex_volume, regular_subdivision
from .toric import ToricVariety
from .tropio import FanSpec, TropicalPolynomial, newton_polytope

DEFAULT_MAX_DIM = 4


class BuildError(ValueError):
    pass


@dataclass
class Cell:
    sed: int                    # cone id of the stratum holding the interior
    dim: int
    geom: QPolyhedron           # stratum-local coordinates
    tangent: LatticeSubspace
    compact: bool
    provenance: frozenset       # subdivision faces this cell is a piece of
    in_x: bool
    index: int = -1

    def key(self):
        return (self.sed, self.geom.geometry_key())


class CellComplex:
    """A finite polyhedral complex in a tropical toric variety."""

    def __init__(self, Y: ToricVariety, cells, incidence):
        self.Y = Y
        order = sorted(range(len(cells)),
                       key=lambda i: (cells[i].dim, cells[i].sed,
                                      cells[i].geom.geometry_key()))
        remap = {old: new for new, old in enumerate(order)}
        self.cells = [cells[i] for i in order]
        for i, c in enumerate(self.cells):
            c.index = i
        self.incidence = {(remap[t], remap[s]) for t, s in incidence}
        self.facets_of = {i: [] for i in range(len(self.cells))}
        self.cofacets_of = {i: [] for i in range(len(self.cells))}
        for t, s in sorted(self.incidence):
            self.facets_of[s].append(t)
            self.cofacets_of[t].append(s)
        self.dim = max((c.dim for c in self.cells), default=-1)
        self.by_key = {c.key(): c.index for c in self.cells}

    def cells_of_dim(self, q):
        return [c for c in self.cells if c.dim == q]

    def closure(self, idx):
        """All cells in the closure of the given cell, itself included."""
        seen = {idx}
        todo = [idx]
        while todo:
            s = todo.pop()
            for t in self.facets_of[s]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    def f_vector(self):
        out = [0] * (self.dim + 1)
        for c in self.cells:
            out[c.dim] += 1
        return out

    def validate(self, full=False):
        """Check closure and incidence certificates; `full` adds the pairwise
        common-face test (quadratic, for small fixtures)."""
        for t, s in self.incidence:
            tau, sig = self.cells[t], self.cells[s]
            assert tau.dim == sig.dim - 1, "incidence dimensions"
            if tau.sed == sig.sed:
                assert sig.geom.contains_polyhedron(tau.geom), \
                    "incidence containment certificate"
            else:
                assert self.Y.is_face(sig.sed, tau.sed)
                img = sig.geom.linear_image(self.Y.projection(sig.sed, tau.sed))
                assert img.geometry_key() == tau.geom.geometry_key(), \
                    "cross-stratum incidence certificate"
        # boundary closure: geometric facets of every cell are cells
        for c in self.cells:
            if c.dim == 0:
                continue
            for F, _ in c.geom.face_lattice():
                if F.affine_dim != c.dim - 1:
                    continue
                key = (c.sed, F.geometry_key())
                assert key in self.by_key, "missing boundary cell"
                assert (self.by_key[key], c.index) in self.incidence
        if full:
            for a in self.cells:
                for b in self.cells:
                    if b.index <= a.index or a.sed != b.sed:
                        continue
                    meet = a.geom.intersect(b.geom)
                    if meet is None:
                        continue
                    key = (a.sed, meet.geometry_key())
                    assert key in self.by_key, "intersection is not a cell"
                    m = self.by_key[key]
                    assert m in self.closure(a.index) and m in self.closure(b.index)
        return True


@dataclass
class HypersurfacePair:
    """The hypersurface X with the ambient structure Y refined by it."""

    f: TropicalPolynomial
    Y: ToricVariety
    subdivision: object
    newton: object
    X: CellComplex
    Yref: CellComplex
    embed: dict                  # X cell index -> Yref cell index
    _cache: dict = field(default_factory=dict)

    @property
    def hypersurface_dim(self):
        return self.Y.dim - 1

    def region_cells(self):
        return [c for c in self.Yref.cells
                if c.sed == self.Y.apex and c.dim == self.Y.dim]


def dual_cell_geometry(f: TropicalPolynomial, face, dim) -> QPolyhedron:
    """Locus where exactly the terms of `face` attain the maximum (closure)."""
    terms = list(f.terms)
    idx = sorted(face)
    a0, c0 = terms[idx[0]]
    eqs = []
    for i in idx[1:]:
        a, c = terms[i]
        eqs.append((tuple(x - y for x, y in zip(a, a0)), Fraction(c0 - c)))
    ineqs = []
    for j, (b, cb) in enumerate(terms):
        if j in face:
            continue
        ineqs.append((tuple(x - y for x, y in zip(b, a0)), Fraction(c0 - cb)))
    Q = QPolyhedron.from_hrep(ineqs, eqs, dim)
    if Q is None:
        raise BuildError("empty dual cell; the subdivision face %r is spurious"
                         % (sorted(face),))
    return Q


def build_pair(f: TropicalPolynomial, fan: FanSpec, max_dim=DEFAULT_MAX_DIM
               ) -> HypersurfacePair:
    """Build X and the refined ambient structure inside the toric variety."""
    Y = ToricVariety(fan)
    if Y.dim > max_dim:
        raise BuildError("ambient dimension %d exceeds the cap %d "
                         "(raise max_dim to override)" % (Y.dim, max_dim))
    if f.n_vars > Y.dim:
        raise BuildError("polynomial has more variables than the fan dimension")
    f = f.padded(Y.dim)
    if len(f.terms) < 2:
        raise BuildError("a tropical hypersurface needs at least two terms")
    S = regular_subdivision([e for e, c in f.terms], [c for e, c in f.terms])
    cells = {}

    def add_piece(sed, geom, prov, in_x):
        key = (sed, geom.geometry_key())
        if key in cells:
            old = cells[key]
            old.provenance = old.provenance | frozenset([prov])
            old.in_x = old.in_x or in_x
        else:
            cells[key] = Cell(sed, geom.affine_dim, geom,
                              geom.tangent_lattice(),
                              Y.closure_is_compact(geom, sed),
                              frozenset([prov]), in_x)

    for face, fd in sorted(S.faces.items(), key=lambda kv: (kv[1], sorted(kv[0]))):
        Q = dual_cell_geometry(f, face, Y.dim)
        if Q.affine_dim != Y.dim - fd:
            raise BuildError("dual cell of %r has dimension %d, expected %d"
                             % (sorted(face), Q.affine_dim, Y.dim - fd))
        in_x = fd >= 1
        for cone_id, piece in Y.compactify(Q).items():
            add_piece(cone_id, piece, face, in_x)

    cell_list = list(cells.values())
    tmp_index = {c.key(): i for i, c in enumerate(cell_list)}
    incidence = set()
    # same-stratum incidences, prefiltered by dual-face containment
    by_sed_dim = {}
    for i, c in enumerate(cell_list):
        by_sed_dim.setdefault((c.sed, c.dim), []).append(i)
    for (sed, d), sigmas in by_sed_dim.items():
        taus = by_sed_dim.get((sed, d - 1), [])
        for si in sigmas:
            sig = cell_list[si]
            for ti in taus:
                tau = cell_list[ti]
                if not any(fs < ft for fs in sig.provenance for ft in tau.provenance):
                    continue
                if sig.geom.contains_polyhedron(tau.geom):
                    incidence.add((ti, si))
    # cross-stratum incidences: the projection piece one cone step deeper
    for si, sig in enumerate(cell_list):
        for eta in Y.reached_cones(sig.geom, sig.sed):
            if Y.cone_dim(eta) != Y.cone_dim(sig.sed) + 1:
                continue
            img = sig.geom.linear_image(Y.projection(sig.sed, eta))
            if img.affine_dim != sig.dim - 1:
                continue
            key = (eta, img.geometry_key())
            ti = tmp_index.get(key)
            if ti is not None:
                incidence.add((ti, si))

    Yref = CellComplex(Y, cell_list, incidence)
    x_cells = [c for c in Yref.cells if c.in_x]
    x_old_indices = [c.index for c in x_cells]
    keep = set(x_old_indices)
    x_copy = [Cell(c.sed, c.dim, c.geom, c.tangent, c.compact, c.provenance, True)
              for c in x_cells]
    old_to_tmp = {old: i for i, old in enumerate(x_old_indices)}
    x_inc = {(old_to_tmp[t], old_to_tmp[s]) for t, s in Yref.incidence
             if t in keep and s in keep}
    X = CellComplex(Y, x_copy, x_inc)
    embed = {}
    for c in X.cells:
        embed[c.index] = Yref.by_key[c.key()]
    newton = newton_polytope(f)
    return HypersurfacePair(f, Y, S, newton, X, Yref, embed)


# ---------------------------------------------------------------------------
# predicates

def is_proper(pair: HypersurfacePair) -> bool:
    """Every cell meets every deeper stratum in the expected dimension."""
    if "proper" in pair._cache:
        return pair._cache["proper"]
    ok = True
    for c in pair.Yref.cells:
        for eta in pair.Y.reached_cones(c.geom, c.sed):
            if eta == c.sed:
                continue
            drop = pair.Y.cone_dim(eta) - pair.Y.cone_dim(c.sed)
            img = c.geom.linear_image(pair.Y.projection(c.sed, eta))
            if img.affine_dim != c.dim - drop:
                ok = False
                break
        if not ok:
            break
    pair._cache["proper"] = ok
    return ok


def induced_face_points(pair: HypersurfacePair, cone_id):
    """Support-point indices lying on the Newton polytope face dual to a cone."""
    f = pair.f
    pts = [e for e, c in f.terms]
    live = set(range(len(pts)))
    for i in sorted(pair.Y.cones[cone_id]):
        r = pair.Y.fan.rays[i]
        vals = {j: sum(x * y for x, y in zip(pts[j], r)) for j in live}
        m = max(vals[j] for j in live)
        live = {j for j in live if vals[j] == m}
    return frozenset(live)


def is_nonsingular(pair: HypersurfacePair) -> bool:
    """The induced subdivision on every stratum's Newton polytope face is a
    primitive triangulation."""
    if "nonsingular" in pair._cache:
        return pair._cache["nonsingular"]
    S = pair.subdivision
    ok = True
    for cone_id in range(len(pair.Y.cones)):
        live = induced_face_points(pair, cone_id)
        sub_faces = {F: d for F, d in S.faces.items() if F <= live}
        if not sub_faces:
            ok = False
            break
        top = max(sub_faces.values())
        if top == 0:
            continue  # the stratum misses X entirely
        for F, d in sub_faces.items():
            if d != top:
                continue
            if len(F) != top + 1:
                ok = False
                break
            try:
                if normalized_simplex_volume(S, F) != 1:
                    ok = False
                    break
            except ValueError:
                ok = False
                break
        if not ok:
            break
    pair._cache["nonsingular"] = ok
    return ok


@dataclass
class GammaOpen:
    """The pieces of a sedentarity-0 cell across the strata it meets."""

    base_cell: int
    pieces: dict          # cone id -> cell index in the host complex
    host: CellComplex

    def cone_ids(self):
        return sorted(self.pieces)

    def relation(self):
        """Face order among pieces: deeper cones are faces of shallower."""
        Y = self.host.Y
        out = set()
        for a in self.pieces:
            for b in self.pieces:
                if a != b and Y.is_face(a, b):
                    out.add((self.pieces[b], self.pieces[a]))
        return out

    def minimal_face(self):
        """The piece at the unique maximal cone, when there is one."""
        Y = self.host.Y
        ids = self.cone_ids()
        maxima = [a for a in ids
                  if not any(Y.cones[a] < Y.cones[b] for b in ids)]
        if len(maxima) == 1:
            return self.pieces[maxima[0]]
        return None

    def is_boolean(self):
        """Cone set equals the full face lattice of a single fan cone."""
        Y = self.host.Y
        ids = self.cone_ids()
        maxima = [a for a in ids
                  if not any(Y.cones[a] < Y.cones[b] for b in ids)]
        if len(maxima) != 1:
            return False
        eta = Y.cones[maxima[0]]
        want = {frozenset(s) for s in _subsets(sorted(eta))}
        return {Y.cones[a] for a in ids} == want


def _subsets(items):
    out = [[]]
    for x in items:
        out += [s + [x] for s in out]
    return [frozenset(s) for s in out]


def gamma_open(pair: HypersurfacePair, cell_index, host=None) -> GammaOpen:
    """The sub-poset gamma^o of a sedentarity-0 cell of Yref (or X)."""
    host = host or pair.Yref
    c = host.cells[cell_index]
    if c.sed != pair.Y.apex:
        raise ValueError("gamma_open needs a sedentarity-0 cell")
    pieces = {}
    for eta in pair.Y.reached_cones(c.geom, c.sed):
        if eta == c.sed:
            pieces[eta] = cell_index
            continue
        img = c.geom.linear_image(pair.Y.projection(c.sed, eta))
        key = (eta, img.geometry_key())
        pieces[eta] = host.by_key[key]
    return GammaOpen(cell_index, pieces, host)


def is_combinatorially_ample(pair: HypersurfacePair):
    """True iff every top-dimensional region's gamma^o is a T/R product.

    Returns (flag, failing) where failing lists the offending region cells.
    """
    if "ample" in pair._cache:
        return pair._cache["ample"]
    failing = []
    for c in pair.region_cells():
        go = gamma_open(pair, c.index)
        if not go.is_boolean():
            failing.append(c.index)
    result = (not failing, failing)
    pair._cache["ample"] = result
    return result


def is_cellular_pair(pair: HypersurfacePair) -> str:
    """Tri-state 'yes' / 'no' / 'unknown', by certified sufficient conditions."""
    if "cellular" in pair._cache:
        return pair._cache["cellular"]
    Y = pair.Y
    if Y.fan.is_trivial():
        full = pair.newton.dim == Y.dim
        result = "yes" if full else "no"
    elif Y.compact:
        result = "yes" if is_proper(pair) else "unknown"
    else:
        # non-compact with boundary: a cell whose stratum geometry has a
        # lineality direction pinches at the point at infinity
        if any(c.geom.lin for c in pair.Yref.cells):
            result = "no"
        else:
            result = "unknown"
    pair._cache["cellular"] = result
    return result


# ---------------------------------------------------------------------------
# other cell structures

def toric_complex(Y: ToricVariety) -> CellComplex:
    """The coarse structure on Y whose cells are the stratum closures."""
    cells = []
    for cid in range(len(Y.cones)):
        k = Y.stratum_dim(cid)
        geom = QPolyhedron.cone([], k, lins=[tuple(1 if i == j else 0 for j in range(k))
                                             for i in range(k)]) if k else \
            QPolyhedron.from_generators([()], dim=0)
        cells.append(Cell(cid, k, geom, LatticeSubspace.full(k), Y.compact,
                          frozenset([frozenset()]), False))
    incidence = set()
    for s, cs in enumerate(Y.cones):
        for t, ct in enumerate(Y.cones):
            if cs < ct and len(ct) == len(cs) + 1:
                incidence.add((t, s))
    return CellComplex(Y, cells, incidence)


def slice_complex(Z: CellComplex, normal, offset) -> CellComplex:
    """Refine a complex in R^n by the hyperplane <normal, x> = offset.

    Only complexes whose cells all sit in the open stratum are supported; a
    slicing hyperplane has no canonical closure behaviour at the toric
    boundary.
    """
    apex = Z.Y.apex
    if any(c.sed != apex for c in Z.cells):
        raise ValueError("hyperplane slicing needs a boundary-free complex")
    a = tuple(int(x) for x in normal)
    b = Fraction(offset)
    na = tuple(-x for x in a)
    pieces = {}
    for c in Z.cells:
        for Q in (c.geom.intersect_hrep(ineqs=[(a, b)]),
                  c.geom.intersect_hrep(ineqs=[(na, -b)]),
                  c.geom.intersect_hrep(eqs=[(a, b)])):
            if Q is None:
                continue
            key = Q.geometry_key()
            if key not in pieces:
                pieces[key] = Cell(apex, Q.affine_dim, Q, Q.tangent_lattice(),
                                   Z.Y.closure_is_compact(Q, apex),
                                   c.provenance, c.in_x)
            else:
                old = pieces[key]
                old.provenance = old.provenance | c.provenance
                old.in_x = old.in_x or c.in_x
    cell_list = list(pieces.values())
    by_dim = {}
    for i, c in enumerate(cell_list):
        by_dim.setdefault(c.dim, []).append(i)
    incidence = set()
    for d, sigmas in by_dim.items():
        for si in sigmas:
            for ti in by_dim.get(d - 1, []):
                if cell_list[si].geom.contains_polyhedron(cell_list[ti].geom):
                    incidence.add((ti, si))
    return CellComplex(Z.Y, cell_list, incidence)


def slice_pair(pair: HypersurfacePair, slices) -> HypersurfacePair:
    """Apply a sequence of hyperplane slices to both X and Yref."""
    X, Yref = pair.X, pair.Yref
    for normal, offset in slices:
        X = slice_complex(X, normal, offset)
        Yref = slice_complex(Yref, normal, offset)
    embed = {c.index: Yref.by_key[c.key()] for c in X.cells}
    return HypersurfacePair(pair.f, pair.Y, pair.subdivision, pair.newton,
                            X, Yref, embed)
