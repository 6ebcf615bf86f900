"""Cellular cosheaves of integral multi-tangent lattices.

A cosheaf here is a rank (with an optional basis matrix inside the stratum's
wedge space) per cell, plus one integer matrix per codimension-one incidence,
contravariant along inclusion: the matrix attached to (tau, sigma) maps the
stalk at sigma into the stalk at tau.  Instances built here: the multi-tangent
cosheaf of a complex, the ambient cosheaf of its toric variety, restrictions,
and free quotients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .complexes import CellComplex, HypersurfacePair
from .exactla import (
    IntMatrix,
    LatticeSubspace,
    exterior_power,
    lattice_sum,
    snf,
    solve_int,
)


class CosheafError(ValueError):
    pass


@dataclass
class Cosheaf:
    """Stalk data per cell and one matrix per incidence of the base complex."""

    base: CellComplex
    p: int
    ranks: list
    bases: list          # IntMatrix columns in the stratum wedge space, or None
    maps: dict           # (tau index, sigma index) -> IntMatrix

    def rank(self, idx):
        return self.ranks[idx]

    def map(self, tau, sigma) -> IntMatrix:
        return self.maps[(tau, sigma)]

    def check_functorial(self):
        """Path independence of composed incidence maps on codim-2 intervals."""
        Z = self.base
        for t, s in Z.incidence:
            for g in Z.facets_of[t]:
                paths = [tt for tt in Z.facets_of[s] if (g, tt) in Z.incidence]
                mats = [self.maps[(g, tt)] * self.maps[(tt, s)] for tt in paths]
                for m in mats[1:]:
                    if m != mats[0]:
                        return False
        return True


def _same_stratum_star(Z: CellComplex):
    """For each cell, the cells of the same stratum whose closure contains it."""
    star = {i: {i} for i in range(len(Z.cells))}
    for s in range(len(Z.cells)):
        for t in Z.closure(s):
            star[t].add(s)
    out = {}
    for i, members in star.items():
        sed = Z.cells[i].sed
        out[i] = [j for j in members if Z.cells[j].sed == sed]
    return out


def multitangent(Z: CellComplex, p: int) -> Cosheaf:
    """The integral p-multi-tangent cosheaf of the complex.

    The stalk at a cell is the sum, over cells of the same stratum whose
    closure contains it, of the p-th exterior powers of their tangent
    lattices; the sum is taken verbatim, with no saturation.  Maps are
    inclusions within a stratum and wedge powers of the quotient projections
    across strata.
    """
    Y = Z.Y
    star = _same_stratum_star(Z)
    ranks, bases = [], []
    for i, c in enumerate(Z.cells):
        k = Y.stratum_dim(c.sed)
        amb = comb(k, p) if 0 <= p <= k else 0
        total = LatticeSubspace.zero(amb)
        for j in star[i]:
            B = Z.cells[j].tangent.basis
            W = exterior_power(B, p)
            if W.ncols == 0 or W.nrows == 0:
                continue
            total = lattice_sum(total, LatticeSubspace.from_columns(W.columns(), amb))
        ranks.append(total.rank)
        bases.append(total.basis)
    maps = {}
    for t, s in Z.incidence:
        tau, sig = Z.cells[t], Z.cells[s]
        if sig.ranks if False else False:
            pass
        src = bases[s]
        if tau.sed == sig.sed:
            image = src
        else:
            pi = Y.projection(sig.sed, tau.sed)
            image = exterior_power(pi, p) * src if src.ncols else \
                IntMatrix.zeros(comb(Y.stratum_dim(tau.sed), p)
                                if 0 <= p <= Y.stratum_dim(tau.sed) else 0, 0)
        A = solve_int(bases[t], image) if image.ncols else \
            IntMatrix.zeros(ranks[t], 0)
        if A is None:
            raise CosheafError(
                "incidence image does not land in the target stalk "
                "(cells %d -> %d, p=%d)" % (s, t, p))
        maps[(t, s)] = A
    return Cosheaf(Z, p, ranks, bases, maps)


def multitangent_family(Z: CellComplex, pmax: int):
    return [multitangent(Z, p) for p in range(pmax + 1)]


def ambient_on_cells(Z: CellComplex, p: int) -> Cosheaf:
    """The ambient cosheaf: every cell carries the full wedge power of its
    stratum lattice; maps are wedge powers of the projections."""
    Y = Z.Y
    ranks, bases = [], []
    for c in Z.cells:
        k = Y.stratum_dim(c.sed)
        amb = comb(k, p) if 0 <= p <= k else 0
        ranks.append(amb)
        bases.append(IntMatrix.identity(amb))
    maps = {}
    for t, s in Z.incidence:
        tau, sig = Z.cells[t], Z.cells[s]
        if tau.sed == sig.sed:
            maps[(t, s)] = IntMatrix.identity(ranks[s])
        else:
            pi = Y.projection(sig.sed, tau.sed)
            W = exterior_power(pi, p)
            if W.nrows != ranks[t] or W.ncols != ranks[s]:
                W = IntMatrix.zeros(ranks[t], ranks[s])
            maps[(t, s)] = W
    return Cosheaf(Z, p, ranks, bases, maps)


def restrict_to_x(F: Cosheaf, pair: HypersurfacePair) -> Cosheaf:
    """Pull a cosheaf on Yref back along the embedding of X."""
    X = pair.X
    ranks = [F.ranks[pair.embed[c.index]] for c in X.cells]
    bases = [F.bases[pair.embed[c.index]] for c in X.cells]
    maps = {}
    for t, s in X.incidence:
        maps[(t, s)] = F.maps[(pair.embed[t], pair.embed[s])]
    return Cosheaf(X, F.p, ranks, bases, maps)


def zero_extend_to_y(F: Cosheaf, pair: HypersurfacePair) -> Cosheaf:
    """View a cosheaf on X as a cosheaf on Yref, zero off X."""
    Yref = pair.Yref
    back = {pair.embed[i]: i for i in range(len(pair.X.cells))}
    ranks, bases = [], []
    for c in Yref.cells:
        if c.index in back:
            i = back[c.index]
            ranks.append(F.ranks[i])
            bases.append(F.bases[i])
        else:
            ranks.append(0)
            bases.append(None)
    maps = {}
    for t, s in Yref.incidence:
        if t in back and s in back:
            maps[(t, s)] = F.maps[(back[t], back[s])]
        else:
            maps[(t, s)] = IntMatrix.zeros(ranks[t], ranks[s])
    return Cosheaf(Yref, F.p, ranks, bases, maps)


@dataclass
class QuotientData:
    projection: IntMatrix  # big-stalk coordinates -> quotient coordinates
    section: IntMatrix     # quotient coordinates -> big-stalk coordinates


def quotient_cosheaf(big: Cosheaf, small: Cosheaf):
    """Stalkwise quotient big/small with induced maps.

    Both cosheaves must live on the same base with small's stalks included in
    big's (small carries bases in big-stalk coordinates via its `bases` when
    big's basis is the identity, or comparable bases otherwise).  Raises if a
    quotient stalk has torsion, naming the cell.
    """
    Z = big.base
    if small.base is not Z:
        raise CosheafError("quotient needs cosheaves on the same base complex")
    projs, sects, ranks = [], [], []
    for i in range(len(Z.cells)):
        rb = big.ranks[i]
        # coordinates of the small stalk inside the big stalk
        if small.ranks[i] == 0:
            C = IntMatrix.zeros(rb, 0)
        else:
            C = solve_int(big.bases[i], small.bases[i])
            if C is None:
                raise CosheafError("sub-stalk does not lie in the big stalk "
                                   "at cell %d" % i)
        d = snf(C)
        if any(x > 1 for x in d.invariant_factors):
            raise CosheafError(
                "quotient stalk at cell %d has torsion %r"
                % (i, [x for x in d.invariant_factors if x > 1]))
        Uinv = solve_int(d.U, IntMatrix.identity(rb))
        q = rb - d.rank
        projs.append(d.U.submatrix(range(d.rank, rb), range(rb)))
        sects.append(Uinv.submatrix(range(rb), range(d.rank, rb)))
        ranks.append(q)
    maps = {}
    for t, s in Z.incidence:
        maps[(t, s)] = projs[t] * big.maps[(t, s)] * sects[s]
    Q = Cosheaf(Z, big.p, ranks, [None] * len(ranks), maps)
    data = [QuotientData(p_, s_) for p_, s_ in zip(projs, sects)]
    return Q, data


def stalk_rank_polynomial(family, cell_index):
    """Alternating-rank polynomial sum_p (-1)^p rank F_p(cell) * t^p as a
    coefficient list, from a list of cosheaves indexed by p."""
    return [(-1) ** p * F.ranks[cell_index] for p, F in enumerate(family)]


def expected_stalk_polynomial(q, m):
    """Coefficients of (1-t)^m - (1-t)^q (-t)^(m-q) for a q-cell in an
    m-dimensional stratum."""
    from math import comb as C
    out = [0] * (m + 1)
    for i in range(m + 1):
        out[i] += C(m, i) * (-1) ** i
    # (1-t)^q * (-t)^(m-q): coefficient of t^(m-q+j) is C(q, j)(-1)^j (-1)^(m-q)
    for j in range(q + 1):
        k = m - q + j
        if k <= m:
            out[k] -= C(q, j) * (-1) ** j * (-1) ** (m - q)
    return out


def hyperplane_vertex_rank(s, j):
    """rank of the j-th multi-tangent stalk at the vertex of the standard
    tropical hyperplane of dimension s."""
    if 0 <= j <= s:
        return comb(s + 1, j)
    return 0


def kunneth_stalk_rank(pair: HypersurfacePair, cell, p):
    """Predicted stalk rank via the product decomposition along the cell."""
    q = cell.dim
    m = pair.Y.stratum_dim(cell.sed)
    return sum(hyperplane_vertex_rank(m - q - 1, p - l) * comb(q, l)
               for l in range(p + 1))
