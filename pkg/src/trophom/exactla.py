"""Exact linear algebra over the integers.

Hermite and Smith normal forms with unimodular transforms, saturated kernels,
sums of sublattices, exterior powers in the lexicographic wedge basis, and the
homology (rank plus torsion) of a composable pair of integer matrices.

Every entry is a Python int, so arithmetic is exact at any size.  Matrices are
immutable once built; all functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd


class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        self.rows = rows
        self.nrows = len(rows)
        if rows:
            self.ncols = len(rows[0])
            if any(len(r) != self.ncols for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols mismatch")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs explicit ncols")
            self.ncols = ncols

    @classmethod
    def zeros(cls, m, n):
        return cls(tuple((0,) * n for _ in range(m)), ncols=n)

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), ncols=n)

    @classmethod
    def from_columns(cls, cols, nrows):
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), ncols=len(cols))

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return IntMatrix(tuple(zip(*self.rows)) if self.rows and self.ncols else (), ncols=self.nrows)

    def __mul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %sx%s * %sx%s"
                             % (self.nrows, self.ncols, other.nrows, other.ncols))
        ocols = other.ncols
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [0] * ocols
            for k, a in enumerate(r):
                if a:
                    rk = orows[k]
                    for j in range(ocols):
                        acc[j] += a * rk[j]
            out.append(tuple(acc))
        return IntMatrix(tuple(out), ncols=ocols)

    def __neg__(self):
        return IntMatrix(tuple(tuple(-x for x in r) for r in self.rows), ncols=self.ncols)

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return "IntMatrix(%dx%d, %r)" % (self.nrows, self.ncols, [list(r) for r in self.rows])

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return IntMatrix(tuple(a + b for a, b in zip(self.rows, other.rows)),
                         ncols=self.ncols + other.ncols)

    def submatrix(self, rows, cols):
        return IntMatrix(tuple(tuple(self.rows[i][j] for j in cols) for i in rows),
                         ncols=len(cols))

    def apply(self, vec):
        """Matrix times integer vector, returned as a tuple."""
        if len(vec) != self.ncols:
            raise ValueError("length mismatch")
        return tuple(sum(a * v for a, v in zip(r, vec)) for r in self.rows)


def _hnf_rows_inplace(h, u=None):
    """Row Hermite form of the mutable list-of-lists h; row ops mirrored on u.

    Pivots positive, entries above each pivot reduced into [0, pivot).
    Returns the list of (row, col) pivot positions.
    """
    m = len(h)
    n = len(h[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        # gcd elimination below row r in column c
        while True:
            best = None
            for i in range(r, m):
                v = h[i][c]
                if v != 0 and (best is None or abs(v) < abs(h[best][c])):
                    best = i
            if best is None:
                break
            if best != r:
                h[r], h[best] = h[best], h[r]
                if u is not None:
                    u[r], u[best] = u[best], u[r]
            done = True
            p = h[r][c]
            for i in range(r + 1, m):
                v = h[i][c]
                if v:
                    q = v // p
                    if q:
                        hi, hr = h[i], h[r]
                        for j in range(n):
                            hi[j] -= q * hr[j]
                        if u is not None:
                            ui, ur = u[i], u[r]
                            for j in range(len(ui)):
                                ui[j] -= q * ur[j]
                    if h[i][c]:
                        done = False
            if done:
                break
        if r < m and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                if u is not None:
                    u[r] = [-x for x in u[r]]
            p = h[r][c]
            for i in range(r):
                q = h[i][c] // p
                if q:
                    hi, hr = h[i], h[r]
                    for j in range(n):
                        hi[j] -= q * hr[j]
                    if u is not None:
                        ui, ur = u[i], u[r]
                        for j in range(len(ui)):
                            ui[j] -= q * ur[j]
            pivots.append((r, c))
            r += 1
    return pivots


def hnf_row(M: IntMatrix):
    """Canonical row Hermite normal form.  Returns (H, U) with U*M = H."""
    h = [list(r) for r in M.rows]
    u = [list(r) for r in IntMatrix.identity(M.nrows).rows]
    _hnf_rows_inplace(h, u)
    return IntMatrix(h, ncols=M.ncols), IntMatrix(u, ncols=M.nrows)


def hnf(M: IntMatrix):
    """Canonical column Hermite normal form.  Returns (H, V) with M*V = H.

    H's column span over Z equals M's; H is the unique such column HNF, so
    lattices compare by matrix equality.  Zero columns sit at the right.
    """
    Ht, Ut = hnf_row(M.transpose())
    return Ht.transpose(), Ut.transpose()


@dataclass(frozen=True)
class SmithDecomposition:
    """U*M*V = D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int

    @property
    def diagonal(self):
        n = min(self.D.nrows, self.D.ncols)
        return tuple(self.D.rows[i][i] for i in range(n))

    @property
    def invariant_factors(self):
        return tuple(d for d in self.diagonal if d != 0)

    @property
    def torsion(self):
        return tuple(d for d in self.invariant_factors if d > 1)


def _divisibility_pass(diag):
    """Make diag[i] | diag[i+1] by (gcd, lcm) replacements; returns sorted list."""
    diag = [abs(d) for d in diag]
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                if a == 0 and b != 0:
                    diag[i], diag[j] = b, 0
                    changed = True
                elif a != 0 and b % a != 0:
                    g = gcd(a, b)
                    diag[i], diag[j] = g, a * b // g
                    changed = True
    return diag


def snf(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivoting picks the minimal absolute nonzero entry of the remaining block,
    which keeps coefficient growth tame at the sizes used here.
    """
    m, n = M.nrows, M.ncols
    a = [list(r) for r in M.rows]
    u = [list(r) for r in IntMatrix.identity(m).rows]
    v = [list(r) for r in IntMatrix.identity(n).rows]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_op(i, t, q):
        ai, at = a[i], a[t]
        for j in range(n):
            ai[j] -= q * at[j]
        ui, ut = u[i], u[t]
        for j in range(m):
            ui[j] -= q * ut[j]

    def col_op(j, t, q):
        for row in a:
            row[j] -= q * row[t]
        for row in v:
            row[j] -= q * row[t]

    def clear_block(t):
        """Zero out row t and column t away from the pivot at (t, t)."""
        while True:
            p = a[t][t]
            restart = False
            for i in range(m):
                if i != t and a[i][t]:
                    q = a[i][t] // p
                    if q:
                        row_op(i, t, q)
                    if a[i][t]:
                        swap_rows(i, t)
                        restart = True
                        break
            if restart:
                continue
            for j in range(n):
                if j != t and a[t][j]:
                    q = a[t][j] // p
                    if q:
                        col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(j, t)
                        restart = True
                        break
            if not restart:
                return

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x != 0 and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            swap_rows(i0, t)
        if j0 != t:
            swap_cols(j0, t)
        clear_block(t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    rank = t
    # enforce the divisibility chain: a (gcd, lcm) fix on an offending pair,
    # realized by one column addition plus re-clearing the 2x2 block
    i = 0
    while i < rank - 1:
        if a[i + 1][i + 1] % a[i][i] != 0:
            col_op(i, i + 1, -1)  # column i += column i+1
            clear_block(i)
            if a[i][i] < 0:
                a[i] = [-x for x in a[i]]
                u[i] = [-x for x in u[i]]
            if a[i + 1][i + 1] < 0:
                a[i + 1] = [-x for x in a[i + 1]]
                u[i + 1] = [-x for x in u[i + 1]]
            i = max(i - 1, 0)
        else:
            i += 1
    return SmithDecomposition(IntMatrix(u, ncols=m), IntMatrix(a, ncols=n),
                              IntMatrix(v, ncols=n), rank)


def smith_diagonal(entries_by_row, nrows, ncols):
    """Invariant-factor diagonal of a sparse integer matrix, no transforms.

    `entries_by_row` maps row index -> {col index: value}.  Returns the list
    of invariant factors (nonzero, with divisibility) -- its length is the
    rank.  Unimodular pivots are eliminated first so fill-in stays small on
    the incidence-style matrices this is used for.
    """
    rows = {i: dict(cols) for i, cols in entries_by_row.items() if cols}
    cols = {}
    for i, r in rows.items():
        for j, v in r.items():
            cols.setdefault(j, set()).add(i)
    diag = []

    def drop(i, j):
        del rows[i][j]
        cols[j].discard(i)
        if not cols[j]:
            del cols[j]
        if not rows[i]:
            del rows[i]

    def setval(i, j, v):
        if v == 0:
            if j in rows.get(i, ()):
                drop(i, j)
        else:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)

    def row_op(i, i0, q):
        """row i -= q * row i0"""
        for j, w in list(rows[i0].items()):
            setval(i, j, rows.get(i, {}).get(j, 0) - q * w)

    def col_op(j, j0, q):
        """col j -= q * col j0"""
        for i in list(cols[j0]):
            setval(i, j, rows.get(i, {}).get(j, 0) - q * rows[i][j0])

    while rows:
        # prefer a unit pivot with the smallest fill estimate, else min |value|
        piv = None
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                cost = (abs(v) != 1, abs(v), len(r) * len(cols[j]))
                if best is None or cost < best:
                    best = cost
                    piv = (i, j)
                    if cost[:2] == (False, 1) and cost[2] == 1:
                        break
            if best is not None and best[0] is False and best[2] == 1:
                break
        i0, j0 = piv
        p = rows[i0][j0]
        if abs(p) == 1:
            # coreduction: clear column j0 with row i0, then retire the pair;
            # the leftover entries of row i0 die under column ops that touch
            # nothing else because column j0 is now a unit vector
            for i in list(cols[j0]):
                if i != i0:
                    row_op(i, i0, rows[i][j0] // p)
            for j in list(rows[i0]):
                if j != j0:
                    drop(i0, j)
            drop(i0, j0)
            diag.append(1)
            continue
        # reduce the pivot's row and column modulo p
        for i in list(cols[j0]):
            if i != i0:
                q = rows[i][j0] // p
                if q:
                    row_op(i, i0, q)
        for j in list(rows[i0]):
            if j != j0:
                q = rows[i0][j] // p
                if q:
                    col_op(j, j0, q)
        dirty = any(i != i0 for i in cols[j0]) or any(j != j0 for j in rows[i0])
        if dirty:
            continue  # remainders are smaller than |p|; re-pivot
        drop(i0, j0)
        diag.append(abs(p))
    return _divisibility_pass([d for d in diag if d])


@dataclass(frozen=True)
class LatticeSubspace:
    """A saturated-or-not sublattice of Z^ambient, basis in column HNF.

    The basis is the canonical column Hermite form of any generating set, so
    two equal sublattices have equal basis matrices.
    """

    ambient: int
    basis: IntMatrix  # ambient x rank, Z-independent columns

    @classmethod
    def from_columns(cls, cols, ambient):
        if not cols:
            return cls(ambient, IntMatrix((), ncols=0) if ambient == 0
                       else IntMatrix(tuple(() for _ in range(ambient)), ncols=0))
        M = IntMatrix.from_columns(cols, ambient)
        H, _ = hnf(M)
        keep = [j for j in range(H.ncols) if any(H.rows[i][j] for i in range(H.nrows))]
        return cls(ambient, H.submatrix(range(H.nrows), keep))

    @classmethod
    def zero(cls, ambient):
        return cls.from_columns([], ambient)

    @classmethod
    def full(cls, ambient):
        return cls(ambient, IntMatrix.identity(ambient))

    @property
    def rank(self):
        return self.basis.ncols

    def contains(self, vec):
        return solve_int(self.basis, IntMatrix.from_columns([tuple(vec)], self.ambient)) is not None

    def coordinates(self, vec):
        """Integer coordinates of vec in this basis, or None."""
        X = solve_int(self.basis, IntMatrix.from_columns([tuple(vec)], self.ambient))
        return X.column(0) if X is not None else None


def lattice_sum(A: LatticeSubspace, B: LatticeSubspace) -> LatticeSubspace:
    """Z-span of the union of generators; deliberately not saturated."""
    if A.ambient != B.ambient:
        raise ValueError("ambient rank mismatch")
    return LatticeSubspace.from_columns(A.basis.columns() + B.basis.columns(), A.ambient)


def kernel_lattice(M: IntMatrix) -> LatticeSubspace:
    """The saturated sublattice {v in Z^ncols : M v = 0}."""
    H, V = hnf(M)
    zero_cols = [j for j in range(H.ncols)
                 if all(H.rows[i][j] == 0 for i in range(H.nrows))]
    return LatticeSubspace.from_columns([V.column(j) for j in zero_cols], M.ncols)


def solve_int(A: IntMatrix, B: IntMatrix):
    """Integer X with A X = B, or None.  A need not be square."""
    H, V = hnf(A)  # A V = H, columns of H in HNF
    # pivot rows of H
    pivots = []
    seen_rows = set()
    for j in range(H.ncols):
        col = H.column(j)
        nz = [i for i in range(H.nrows) if col[i] != 0]
        if not nz:
            continue
        pivots.append((nz[0], j))
        seen_rows.add(nz[0])
    xcols = []
    for b in B.columns():
        y = [0] * H.ncols
        r = list(b)
        for (i, j) in pivots:
            if r[i] % H.rows[i][j] != 0:
                return None
            c = r[i] // H.rows[i][j]
            y[j] = c
            if c:
                col = H.column(j)
                for k in range(len(r)):
                    r[k] -= c * col[k]
        if any(r):
            return None
        xcols.append(tuple(y))
    Y = IntMatrix.from_columns(xcols, H.ncols)
    return V * Y


def solve_rational(A, b):
    """One rational solution x of A x = b (lists of Fractions), or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(A, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        sel = None
        for i in range(r, m):
            if M[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    # consistency
    for i in range(r, m):
        if M[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for k, c in enumerate(piv_cols):
        x[c] = M[k][n]
    return x


def det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return 1
    a = [list(r) for r in M.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            sel = None
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    sel = i
                    break
            if sel is None:
                return 0
            a[k], a[sel] = a[sel], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def exterior_power(M: IntMatrix, p: int) -> IntMatrix:
    """Induced map on p-th exterior powers, lexicographic wedge basis.

    Rows are indexed by p-subsets of row indices, columns by p-subsets of
    column indices, both in lexicographic order; the entry is the
    corresponding p x p minor.  p outside [0, min shape] gives a 0x0-ish
    empty matrix by convention; p == 0 gives the 1x1 identity.
    """
    k, l = M.nrows, M.ncols
    if p < 0:
        return IntMatrix((), ncols=0)
    if p == 0:
        return IntMatrix.identity(1)
    if p > k or p > l:
        return IntMatrix(tuple(() for _ in range(0)), ncols=0)
    row_sets = list(combinations(range(k), p))
    col_sets = list(combinations(range(l), p))
    out = []
    for I in row_sets:
        out.append(tuple(det(M.submatrix(I, J)) for J in col_sets))
    return IntMatrix(tuple(out), ncols=len(col_sets))


def wedge_indices(n: int, p: int):
    """The lexicographic p-subset basis of wedge^p Z^n."""
    return list(combinations(range(n), p))


def homology_at(d_in: IntMatrix, d_out: IntMatrix):
    """Rank and torsion of ker(d_out)/im(d_in).

    d_in maps into the middle module, d_out maps out of it; requires
    d_out * d_in = 0.  Torsion is returned as the list of invariant
    factors > 1.  Because ker(d_out) is saturated, the torsion equals the
    torsion of the cokernel of d_in, which is what the Smith form of d_in
    delivers directly.
    """
    if d_in.ncols and d_out.nrows and not (d_out * d_in).is_zero():
        raise ValueError("boundary maps do not compose to zero")
    if d_in.nrows != d_out.ncols:
        raise ValueError("middle module dimension mismatch")
    sp_in = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(d_in.rows)}
    sp_out = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(d_out.rows)}
    fac_in = smith_diagonal(sp_in, d_in.nrows, d_in.ncols)
    fac_out = smith_diagonal(sp_out, d_out.nrows, d_out.ncols)
    rank_in = len(fac_in)
    nullity_out = d_out.ncols - len(fac_out)
    rank = nullity_out - rank_in
    torsion = [d for d in fac_in if d > 1]
    return rank, torsion


def primitive_vector(vec):
    """Scale a rational/integer vector to a primitive integer vector."""
    fracs = [Fraction(x) for x in vec]
    if all(f == 0 for f in fracs):
        return tuple(0 for _ in fracs)
    denom = 1
    for f in fracs:
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(f * denom) for f in fracs]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)
