"""Exact matrix algebra over a chain ring GR(p^n, f).

Every element of the ring is unit * p^v, so Gaussian elimination with
minimal-valuation pivoting produces a diagonal (Smith-style) normal form
A = U * D * V with U, V invertible and D_ii = p^{a_i}, a_1 <= a_2 <= ...
(a_i = n encodes a zero entry).  The pivot rule is fixed - minimal valuation,
then row-major position - and units are normalized into U, which makes the
output deterministic for a given input.

The Howell form implemented here is the canonical generating matrix of a row
span: it depends only on the spanned submodule, not on the presented
generators, which is what makes span comparisons and coend presentations
reproducible.

No fraction-free or probabilistic shortcuts; everything is exact at desk
scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import RingSpec


class DimensionMismatch(ValueError):
    pass


class Matrix:
    """Dense matrix over a RingSpec; entries are packed ints.

    Treated as immutable by convention: operations return new matrices.
    """

    __slots__ = ("ring", "rows", "cols", "data")

    def __init__(self, ring: RingSpec, data: list[list[int]], rows: int | None = None,
                 cols: int | None = None):
        self.ring = ring
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def zeros(cls, ring: RingSpec, rows: int, cols: int) -> "Matrix":
        return cls(ring, [[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring: RingSpec, k: int) -> "Matrix":
        m = cls.zeros(ring, k, k)
        for i in range(k):
            m.data[i][i] = 1
        return m

    @classmethod
    def from_rows(cls, ring: RingSpec, rows: list[list[int]]) -> "Matrix":
        return cls(ring, [list(r) for r in rows])

    @classmethod
    def column(cls, ring: RingSpec, vec) -> "Matrix":
        return cls(ring, [[v] for v in vec], len(vec), 1)

    @classmethod
    def from_cols(cls, ring: RingSpec, cols, rows: int) -> "Matrix":
        """Build from a list of column vectors, keeping the row count even
        when the list is empty."""
        if not cols:
            return cls(ring, [[] for _ in range(rows)], rows, 0)
        return cls(ring, [list(r) for r in zip(*cols)], rows, len(cols))

    def copy(self) -> "Matrix":
        return Matrix(self.ring, [row[:] for row in self.data], self.rows, self.cols)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols,
                     tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        fmt = self.ring.format_elem
        body = ",".join("[" + ",".join(fmt(e) for e in row) + "]" for row in self.data)
        return "[%s]" % body

    def is_zero(self) -> bool:
        return all(e == 0 for row in self.data for e in row)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._shape_check(other, same=True)
        add = self.ring.add
        return Matrix(self.ring,
                      [[add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)],
                      self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, [[neg(a) for a in row] for row in self.data],
                      self.rows, self.cols)

    def scale(self, c: int) -> "Matrix":
        mul = self.ring.mul
        return Matrix(self.ring, [[mul(c, a) for a in row] for row in self.data],
                      self.rows, self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows or self.ring != other.ring:
            raise DimensionMismatch("%dx%d @ %dx%d" % (self.rows, self.cols,
                                                       other.rows, other.cols))
        ring = self.ring
        add, mul = ring.add, ring.mul
        out = [[0] * other.cols for _ in range(self.rows)]
        odata = other.data
        for i in range(self.rows):
            srow = self.data[i]
            orow = out[i]
            for k in range(self.cols):
                a = srow[k]
                if a == 0:
                    continue
                brow = odata[k]
                for j in range(other.cols):
                    b = brow[j]
                    if b:
                        orow[j] = add(orow[j], mul(a, b))
        return Matrix(ring, out, self.rows, other.cols)

    def apply(self, vec) -> list[int]:
        """Matrix times column vector (as a plain list)."""
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length %d, expected %d" % (len(vec), self.cols))
        add, mul = self.ring.add, self.ring.mul
        out = [0] * self.rows
        for k, v in enumerate(vec):
            if v == 0:
                continue
            for i in range(self.rows):
                a = self.data[i][k]
                if a:
                    out[i] = add(out[i], mul(a, v))
        return out

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, [list(col) for col in zip(*self.data)] if self.rows else
                      [[] for _ in range(self.cols)], self.cols, self.rows)

    def col(self, j: int) -> list[int]:
        return [self.data[i][j] for i in range(self.rows)]

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack rows %d vs %d" % (self.rows, other.rows))
        return Matrix(self.ring, [ra + rb for ra, rb in zip(self.data, other.data)],
                      self.rows, self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack cols %d vs %d" % (self.cols, other.cols))
        return Matrix(self.ring, [r[:] for r in self.data] + [r[:] for r in other.data],
                      self.rows + other.rows, self.cols)

    def _shape_check(self, other, same=False):
        if self.ring != other.ring:
            raise DimensionMismatch("ring mismatch")
        if same and (self.rows != other.rows or self.cols != other.cols):
            raise DimensionMismatch("shape mismatch")


def block_diag(ring: RingSpec, blocks: list[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Matrix.zeros(ring, rows, cols)
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            out.data[r + i][c:c + b.cols] = list(b.data[i])
        r += b.rows
        c += b.cols
    return out


@dataclass(frozen=True)
class SmithForm:
    """A = U * D * V with U, V invertible and D = diag(p^{a_i}) padded by
    zeros; invariants lists a_i (a_i = n for a zero entry), nondecreasing.
    u_inv and v_inv are the exact inverses, accumulated during reduction."""
    U: Matrix
    D: Matrix
    V: Matrix
    invariants: tuple[int, ...]
    u_inv: Matrix
    v_inv: Matrix


def smith(A: Matrix) -> SmithForm:
    ring = A.ring
    n = ring.n
    rows, cols = A.rows, A.cols
    D = A.copy()
    U = Matrix.identity(ring, rows)
    Ui = Matrix.identity(ring, rows)
    V = Matrix.identity(ring, cols)
    Vi = Matrix.identity(ring, cols)
    add, mul, neg, val = ring.add, ring.mul, ring.neg, ring.val

    def row_swap(M, i, j):
        M.data[i], M.data[j] = M.data[j], M.data[i]

    def col_swap(M, i, j):
        for r in M.data:
            r[i], r[j] = r[j], r[i]

    def row_addmul(M, dst, src, c):
        # row dst += c * row src
        rd, rs = M.data[dst], M.data[src]
        for j in range(len(rd)):
            a = rs[j]
            if a:
                rd[j] = add(rd[j], mul(c, a))

    def col_addmul(M, dst, src, c):
        for r in M.data:
            a = r[src]
            if a:
                r[dst] = add(r[dst], mul(c, a))

    def row_scale(M, i, c):
        M.data[i] = [mul(c, a) for a in M.data[i]]

    def col_scale(M, j, c):
        for r in M.data:
            r[j] = mul(c, r[j])

    m = min(rows, cols)
    for k in range(m):
        # pivot: minimal valuation, then row-major position
        best = None
        best_val = n
        for i in range(k, rows):
            di = D.data[i]
            for j in range(k, cols):
                e = di[j]
                if e:
                    v = val(e)
                    if v < best_val:
                        best_val = v
                        best = (i, j)
                        if v == 0:
                            break
            if best_val == 0:
                break
        if best is None:
            break  # submatrix is zero
        pi, pj = best
        if pi != k:
            row_swap(D, pi, k)
            col_swap(U, pi, k)
            row_swap(Ui, pi, k)
        if pj != k:
            col_swap(D, pj, k)
            row_swap(V, pj, k)
            col_swap(Vi, pj, k)
        # normalize pivot to p^a, pushing the unit into U
        a = best_val
        u = ring.unit_part(D.data[k][k])
        u_inv = ring.inv(u)
        row_scale(D, k, u_inv)
        col_scale(U, k, u)
        row_scale(Ui, k, u_inv)
        piv = D.data[k][k]  # = p^a
        # clear column k below the pivot
        for i in range(k + 1, rows):
            e = D.data[i][k]
            if e:
                t = ring.divide_p_power(e, a)
                row_addmul(D, i, k, neg(t))
                col_addmul(U, k, i, t)
                row_addmul(Ui, i, k, neg(t))
        # clear row k right of the pivot
        for j in range(k + 1, cols):
            e = D.data[k][j]
            if e:
                t = ring.divide_p_power(e, a)
                col_addmul(D, j, k, neg(t))
                row_addmul(V, k, j, t)
                col_addmul(Vi, j, k, neg(t))
        assert D.data[k][k] == piv
    invariants = tuple(val(D.data[i][i]) for i in range(m))
    return SmithForm(U, D, V, invariants, Ui, Vi)


def is_invertible(A: Matrix) -> bool:
    if A.rows != A.cols:
        return False
    return all(a == 0 for a in smith(A).invariants)


def inverse(A: Matrix) -> Matrix:
    sf = smith(A)
    if A.rows != A.cols or any(sf.invariants):
        raise DimensionMismatch("matrix is not invertible")
    # A = U D V with D = I, so A^{-1} = V^{-1} U^{-1}
    return sf.v_inv @ sf.u_inv


def kernel(A: Matrix) -> Matrix:
    """Columns generate {v : A v = 0} as an R-module."""
    ring = A.ring
    n = ring.n
    sf = smith(A)
    gens = []
    m = min(A.rows, A.cols)
    for i, a in enumerate(sf.invariants):
        if a > 0:
            c = ring.p_elem(n - a)  # p^{n-a}, equal to 1 when a = n
            gens.append([ring.mul(c, e) for e in sf.v_inv.col(i)])
    for j in range(m, A.cols):
        gens.append(sf.v_inv.col(j))
    if not gens:
        return Matrix.zeros(ring, A.cols, 0)
    return Matrix(ring, [list(col) for col in zip(*gens)], A.cols, len(gens))


def solve(A: Matrix, b: list[int]) -> list[int] | None:
    """Some x with A x = b, or None if no solution exists."""
    if len(b) != A.rows:
        raise DimensionMismatch("rhs length %d, expected %d" % (len(b), A.rows))
    ring = A.ring
    sf = smith(A)
    c = sf.u_inv.apply(b)
    m = min(A.rows, A.cols)
    y = [0] * A.cols
    for i in range(A.rows):
        a = sf.invariants[i] if i < m else ring.n
        ci = c[i]
        if i >= m or a == ring.n:
            if ci != 0:
                return None
            continue
        if ring.val(ci) < a:
            return None
        y[i] = ring.divide_p_power(ci, a)
    return sf.v_inv.apply(y)


def image_span(A: Matrix) -> Matrix:
    """Reduced generating set for the column span (one generator per
    nonzero invariant, of the form p^{a_i} * U e_i)."""
    ring = A.ring
    sf = smith(A)
    cols = []
    for i, a in enumerate(sf.invariants):
        if a < ring.n:
            pa = ring.p_elem(a)
            cols.append([ring.mul(pa, e) for e in sf.U.col(i)])
    if not cols:
        return Matrix.zeros(ring, A.rows, 0)
    return Matrix(ring, [list(r) for r in zip(*cols)], A.rows, len(cols))


def cokernel_exponents(A: Matrix) -> tuple[int, ...]:
    """Exponent multiset of coker(A) = R^rows / colspan(A), sorted
    descending; e = n is a free summand, zero summands are dropped."""
    ring = A.ring
    sf = smith(A)
    m = min(A.rows, A.cols)
    exps = [a for a in sf.invariants if a > 0]
    exps.extend([ring.n] * (A.rows - m))
    return tuple(sorted(exps, reverse=True))


# ---------------------------------------------------------------------------
# Howell form: canonical generating matrix of a row span
# ---------------------------------------------------------------------------

def howell(ring: RingSpec, rows: list[list[int]], width: int) -> list[list[int]]:
    """Canonical row-span form over a chain ring.

    The output depends only on the R-submodule of R^width spanned by the
    input rows: pivots are pure powers p^a in increasing column order, each
    column below a pivot is zero, entries above a pivot are reduced mod p^a,
    and for every pivot p^a with a > 0 the annihilated tail p^{n-a} * row is
    re-inserted so all prefix-zero span elements stay representable.
    """
    n = ring.n
    add, mul, neg = ring.add, ring.mul, ring.neg
    work = [list(r) for r in rows if any(r)]
    pivots: list[tuple[int, int]] = []  # (column, exponent)
    result: list[list[int]] = []
    for j in range(width):
        cands = [r for r in work if r[j] != 0]
        if not cands:
            continue
        best = min(cands, key=lambda r: ring.val(r[j]))
        a = ring.val(best[j])
        u_inv = ring.inv(ring.unit_part(best[j]))
        piv = [mul(u_inv, e) for e in best]
        work.remove(best)
        for r in work:
            e = r[j]
            if e:
                t = ring.divide_p_power(e, a)
                for k in range(j, width):
                    pe = piv[k]
                    if pe:
                        r[k] = add(r[k], mul(neg(t), pe))
        if a > 0:
            tail = [mul(ring.p_elem(n - a), e) for e in piv]
            if any(tail):
                work.append(tail)
        work = [r for r in work if any(r)]
        result.append(piv)
        pivots.append((j, a))
    # reduce entries above each pivot modulo p^a
    for idx in range(len(result)):
        j, a = pivots[idx]
        if a == n:
            continue
        for idx2 in range(idx):
            e = result[idx2][j]
            red = ring.reduce_exp(e, a)
            if red != e:
                t = ring.divide_p_power(ring.sub(e, red), a)
                row2, piv = result[idx2], result[idx]
                for k in range(j, width):
                    pe = piv[k]
                    if pe:
                        row2[k] = add(row2[k], mul(neg(t), pe))
    return result


def span_membership(ring: RingSpec, gens: list[list[int]], target: list[int]) -> list[int] | None:
    """Coefficients c with sum c_i gens_i = target, or None."""
    if not gens:
        return [] if not any(target) else None
    A = Matrix(ring, [list(col) for col in zip(*gens)], len(target), len(gens))
    return solve(A, list(target))
