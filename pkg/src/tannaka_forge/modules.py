"""Finitely presented modules over a chain ring, in canonical form.

A module is recorded by its exponent list: M = R/p^{e_1} + ... + R/p^{e_r}
with n >= e_1 >= ... >= e_r >= 1 (e = n is a free summand).  Over a chain
ring this classification is complete, so every isomorphism question reduces
to equality of exponent lists.

Elements are tuples of packed ring ints, coordinate i canonical mod p^{e_i}.
Morphisms are matrices subject to the congruence val(mat[j][i]) >=
max(0, e_j^dst - e_i^src); this is a constructor-time check, not a latent
invariant.  Entries are canonicalized mod p^{e_j^dst} on construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .rings import RingSpec
from .linalg import Matrix, smith, kernel, howell, solve


class RingMismatch(ValueError):
    pass


class NotWellDefined(ValueError):
    """A matrix that does not descend to the stated torsion quotients."""


class EnumerationBudget(RuntimeError):
    pass


DEFAULT_ENUM_BUDGET = 65536


class FinModule:
    """R/p^{e_1} + ... + R/p^{e_r} with exps sorted descending."""

    __slots__ = ("ring", "exps")

    def __init__(self, ring: RingSpec, exps):
        exps = tuple(exps)
        if any(not (1 <= e <= ring.n) for e in exps):
            raise ValueError("exponents must lie in 1..n")
        if list(exps) != sorted(exps, reverse=True):
            raise ValueError("exponents must be sorted descending")
        self.ring = ring
        self.exps = exps

    @classmethod
    def free(cls, ring: RingSpec, rank: int) -> "FinModule":
        return cls(ring, (ring.n,) * rank)

    @classmethod
    def zero(cls, ring: RingSpec) -> "FinModule":
        return cls(ring, ())

    @property
    def rank(self) -> int:
        return len(self.exps)

    def is_free(self) -> bool:
        return all(e == self.ring.n for e in self.exps)

    def is_zero(self) -> bool:
        return not self.exps

    def length(self) -> int:
        """Number of composition factors over the prime field: log_p |M|."""
        return sum(self.exps) * self.ring.f

    def cardinality(self) -> int:
        return self.ring.p ** self.length()

    def reduce(self, vec) -> tuple[int, ...]:
        """Canonicalize a raw coordinate vector into this module."""
        red = self.ring.reduce_exp
        return tuple(red(v, e) for v, e in zip(vec, self.exps))

    def zero_elem(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def gen(self, i: int) -> tuple[int, ...]:
        v = [0] * self.rank
        v[i] = 1
        return tuple(v)

    def add(self, v, w):
        a = self.ring.add
        return self.reduce([a(x, y) for x, y in zip(v, w)])

    def scale(self, c, v):
        m = self.ring.mul
        return self.reduce([m(c, x) for x in v])

    def elements(self, budget: int | None = DEFAULT_ENUM_BUDGET):
        """All elements, each exactly once, lexicographic in canonical
        coordinates.  Restartable (a fresh iterator per call)."""
        if budget is not None and self.cardinality() > budget:
            raise EnumerationBudget("module has %d elements, budget %d"
                                    % (self.cardinality(), budget))
        reps = [_coord_reps(self.ring, e) for e in self.exps]
        return (tuple(t) for t in itertools.product(*reps))

    def __eq__(self, other):
        return (isinstance(other, FinModule) and self.ring == other.ring
                and self.exps == other.exps)

    def __hash__(self):
        return hash((self.ring, self.exps))

    def __repr__(self):
        return "mod(%s) over %s" % (",".join(map(str, self.exps)), self.ring)


_COORD_REPS: dict[tuple, list[int]] = {}


def _coord_reps(ring: RingSpec, e: int) -> list[int]:
    key = (ring, e)
    if key not in _COORD_REPS:
        pe = ring.p**e
        reps = sorted(ring.from_coeffs(t)
                      for t in itertools.product(range(pe), repeat=ring.f))
        _COORD_REPS[key] = reps
    return _COORD_REPS[key]


class ModuleMap:
    """A morphism src -> dst given by mat (dst.rank x src.rank)."""

    __slots__ = ("src", "dst", "mat")

    def __init__(self, src: FinModule, dst: FinModule, mat: Matrix,
                 validate: bool = True):
        if src.ring != dst.ring or mat.ring != src.ring:
            raise RingMismatch("map pieces over different rings")
        if mat.rows != dst.rank or mat.cols != src.rank:
            raise ValueError("matrix is %dx%d, expected %dx%d"
                             % (mat.rows, mat.cols, dst.rank, src.rank))
        ring = src.ring
        n = ring.n
        if src.is_free() and dst.is_free():
            self.mat = mat
        else:
            red, val = ring.reduce_exp, ring.val
            data = []
            for j in range(dst.rank):
                ej = dst.exps[j]
                row = [red(a, ej) for a in mat.data[j]] if ej < n else list(mat.data[j])
                if validate:
                    for i, a in enumerate(row):
                        need = ej - src.exps[i]
                        if need > 0 and val(a) < need:
                            raise NotWellDefined(
                                "entry (%d,%d) has valuation %d < %d"
                                % (j, i, val(a), need))
                data.append(row)
            mat = Matrix(ring, data, dst.rank, src.rank)
            self.mat = mat
        self.src = src
        self.dst = dst

    @classmethod
    def zero(cls, src: FinModule, dst: FinModule) -> "ModuleMap":
        return cls(src, dst, Matrix.zeros(src.ring, dst.rank, src.rank), validate=False)

    @classmethod
    def identity(cls, M: FinModule) -> "ModuleMap":
        return cls(M, M, Matrix.identity(M.ring, M.rank), validate=False)

    def apply(self, v) -> tuple[int, ...]:
        return self.dst.reduce(self.mat.apply(list(v)))

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition: (g @ h)(v) = g(h(v)); requires h.dst == g.src."""
        if other.dst != self.src:
            raise ValueError("not composable: %r then %r" % (other, self))
        return ModuleMap(other.src, self.dst, self.mat @ other.mat, validate=False)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("sum of maps with different endpoints")
        return ModuleMap(self.src, self.dst, self.mat + other.mat, validate=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("difference of maps with different endpoints")
        return ModuleMap(self.src, self.dst, self.mat - other.mat, validate=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.src, self.dst, -self.mat, validate=False)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.src, self.dst, self.mat.scale(c), validate=False)

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def __eq__(self, other):
        return (isinstance(other, ModuleMap) and self.src == other.src
                and self.dst == other.dst and self.mat == other.mat)

    def __hash__(self):
        return hash((self.src, self.dst, self.mat))

    def __repr__(self):
        return "map %r -> %r: %r" % (self.src, self.dst, self.mat)


def compose(g: ModuleMap, h: ModuleMap) -> ModuleMap:
    """g after h."""
    return g @ h


def torsion_matrix(M: FinModule) -> Matrix:
    """Columns p^{e_i} e_i for the non-free summands: the relations of M
    inside its free cover R^rank."""
    ring = M.ring
    cols = []
    for i, e in enumerate(M.exps):
        if e < ring.n:
            col = [0] * M.rank
            col[i] = ring.p_elem(e)
            cols.append(col)
    if not cols:
        return Matrix.zeros(ring, M.rank, 0)
    return Matrix(ring, [list(r) for r in zip(*cols)], M.rank, len(cols))


@dataclass
class Presentation:
    """coker(P) in canonical form.  proj maps raw coordinates R^rows onto
    canonical coordinates; sect lifts canonical generators (a choice of
    representatives, not a module map).  proj @ sect = identity."""
    module: FinModule
    proj: Matrix
    sect: Matrix


def module_from_presentation(P: Matrix) -> Presentation:
    ring = P.ring
    n = ring.n
    if P.rows == 0:
        M = FinModule.zero(ring)
        return Presentation(M, Matrix.zeros(ring, 0, 0), Matrix.zeros(ring, 0, 0))
    sf = smith(P)
    m = min(P.rows, P.cols)
    keep = [(a, i) for i, a in enumerate(sf.invariants) if a > 0]
    keep += [(n, i) for i in range(m, P.rows)]
    keep.sort(key=lambda t: (-t[0], t[1]))
    exps = tuple(a for a, _ in keep)
    M = FinModule(ring, exps)
    red = ring.reduce_exp
    proj_rows = [[red(v, a) for v in sf.u_inv.data[i]] for a, i in keep]
    proj = Matrix(ring, proj_rows, M.rank, P.rows)
    sect_cols = [sf.U.col(i) for _, i in keep]
    if sect_cols:
        sect = Matrix(ring, [list(r) for r in zip(*sect_cols)], P.rows, M.rank)
    else:
        sect = Matrix.zeros(ring, P.rows, 0)
    return Presentation(M, proj, sect)


def presentation_with_torsion(M: FinModule, rel_cols: Matrix) -> Presentation:
    """Canonical form of M / (span of rel_cols), rel_cols in M-coordinates."""
    return module_from_presentation(rel_cols.hstack(torsion_matrix(M)))


# ---------------------------------------------------------------------------
# kernels, images, cokernels of module maps
# ---------------------------------------------------------------------------

def _preimage_generators(g: ModuleMap) -> Matrix:
    """Columns generating {x in R^src.rank : g(x) = 0 in dst}."""
    aug = g.mat.hstack(torsion_matrix(g.dst))
    K = kernel(aug)
    return Matrix(g.src.ring, [K.data[i][:] for i in range(g.src.rank)],
                  g.src.rank, K.cols)


def map_kernel(g: ModuleMap) -> tuple[FinModule, ModuleMap]:
    """(K, incl) with incl : K -> src the kernel in canonical form."""
    X = _preimage_generators(g)
    src = g.src
    aug = X.hstack(torsion_matrix(src))
    K2 = kernel(aug)
    rel = Matrix(src.ring, [K2.data[i][:] for i in range(X.cols)], X.cols, K2.cols)
    pres = module_from_presentation(rel)
    incl = ModuleMap(pres.module, src, X @ pres.sect)
    return pres.module, incl


def map_image(g: ModuleMap) -> tuple[FinModule, ModuleMap]:
    """(I, incl) with incl : I -> dst the image in canonical form."""
    X = _preimage_generators(g)
    pres = module_from_presentation(X)
    incl = ModuleMap(pres.module, g.dst, g.mat @ pres.sect)
    return pres.module, incl


def map_cokernel(g: ModuleMap) -> tuple[FinModule, ModuleMap]:
    """(C, proj) with proj : dst -> C the cokernel in canonical form."""
    pres = presentation_with_torsion(g.dst, g.mat)
    proj = ModuleMap(g.dst, pres.module, pres.proj)
    return pres.module, proj


def is_injective(g: ModuleMap) -> bool:
    return map_kernel(g)[0].is_zero()


def is_surjective(g: ModuleMap) -> bool:
    return map_cokernel(g)[0].is_zero()


def is_isomorphism(g: ModuleMap) -> bool:
    return (g.src.exps == g.dst.exps and is_injective(g) and is_surjective(g))


# ---------------------------------------------------------------------------
# hom modules
# ---------------------------------------------------------------------------

@dataclass
class HomData:
    """Hom_R(M, N) = sum over (i,j) of R/p^{min(e_i, d_j)}, with the basis
    map for (i,j) sending gen_i to p^{max(0, d_j - e_i)} gen_j."""
    src: FinModule
    dst: FinModule
    module: FinModule
    basis: list[ModuleMap]
    pairs: list[tuple[int, int]]

    def coords(self, g: ModuleMap) -> tuple[int, ...]:
        ring = self.src.ring
        out = []
        for (i, j), e in zip(self.pairs, self.module.exps):
            shift = max(0, self.dst.exps[j] - self.src.exps[i])
            out.append(ring.reduce_exp(ring.divide_p_power(g.mat.data[j][i], shift), e))
        return tuple(out)

    def from_coords(self, coords) -> ModuleMap:
        ring = self.src.ring
        mat = Matrix.zeros(ring, self.dst.rank, self.src.rank)
        for (i, j), c in zip(self.pairs, coords):
            shift = max(0, self.dst.exps[j] - self.src.exps[i])
            mat.data[j][i] = ring.mul(c, ring.p_elem(shift)) if shift else c
        return ModuleMap(self.src, self.dst, mat)


def hom_module(M: FinModule, N: FinModule) -> HomData:
    if M.ring != N.ring:
        raise RingMismatch("hom of modules over different rings")
    entries = []
    for i, e in enumerate(M.exps):
        for j, d in enumerate(N.exps):
            entries.append((min(e, d), (i, j)))
    entries.sort(key=lambda t: (-t[0], t[1]))
    exps = tuple(e for e, _ in entries)
    pairs = [p for _, p in entries]
    module = FinModule(M.ring, exps)
    hd = HomData(M, N, module, [], pairs)
    for k in range(module.rank):
        coords = [0] * module.rank
        coords[k] = 1
        hd.basis.append(hd.from_coords(coords))
    return hd


# ---------------------------------------------------------------------------
# tensor products over R and duals
# ---------------------------------------------------------------------------

@dataclass
class TensorData:
    """M tensor_R N in canonical form with the pure-tensor embedding.

    pos maps a summand pair (i, j) to its position in the sorted exponent
    list; embed is bilinear on elements; map_tensor is functorial on maps.
    """
    left: FinModule
    right: FinModule
    module: FinModule
    pos: dict[tuple[int, int], int]

    def embed(self, v, w) -> tuple[int, ...]:
        ring = self.left.ring
        out = [0] * self.module.rank
        mul = ring.mul
        for i, a in enumerate(v):
            if a == 0:
                continue
            for j, b in enumerate(w):
                if b:
                    k = self.pos[(i, j)]
                    out[k] = ring.add(out[k], mul(a, b))
        return self.module.reduce(out)

    def basis_elem(self, i: int, j: int) -> tuple[int, ...]:
        v = [0] * self.module.rank
        v[self.pos[(i, j)]] = 1
        return tuple(v)


def tensor_with_data(M: FinModule, N: FinModule) -> TensorData:
    if M.ring != N.ring:
        raise RingMismatch("tensor of modules over different rings")
    entries = []
    for i, e in enumerate(M.exps):
        for j, d in enumerate(N.exps):
            entries.append((min(e, d), (i, j)))
    entries.sort(key=lambda t: (-t[0], t[1]))
    module = FinModule(M.ring, tuple(e for e, _ in entries))
    pos = {p: k for k, (_, p) in enumerate(entries)}
    return TensorData(M, N, module, pos)


def tensor_over_ring(M: FinModule, N: FinModule) -> FinModule:
    return tensor_with_data(M, N).module


def map_tensor(T: TensorData, f: ModuleMap, g: ModuleMap, T2: TensorData) -> ModuleMap:
    """f tensor g : T -> T2 for f : T.left -> T2.left, g : T.right -> T2.right."""
    ring = T.left.ring
    mul = ring.mul
    mat = Matrix.zeros(ring, T2.module.rank, T.module.rank)
    for (i, j), k in T.pos.items():
        for (i2, j2), k2 in T2.pos.items():
            a = f.mat.data[i2][i]
            if a == 0:
                continue
            b = g.mat.data[j2][j]
            if b:
                mat.data[k2][k] = mul(a, b)
    return ModuleMap(T.module, T2.module, mat, validate=False)


@dataclass
class DualData:
    """Hom_R(M, R); same exponent list, with the pairing
    eval(xi, v) = sum xi_i v_i p^{n - e_i} (the dual basis pairing, which is
    the Kronecker pairing when M is free)."""
    source: FinModule
    module: FinModule

    def eval(self, xi, v) -> int:
        ring = self.source.ring
        out = 0
        for i, e in enumerate(self.source.exps):
            t = ring.mul(xi[i], v[i])
            if e < ring.n:
                t = ring.mul(t, ring.p_elem(ring.n - e))
            out = ring.add(out, t)
        return out


def dual(M: FinModule) -> DualData:
    return DualData(M, FinModule(M.ring, M.exps))


def is_projective(M: FinModule) -> bool:
    """Over a chain ring: projective iff free iff all exponents equal n."""
    return M.is_free()


# ---------------------------------------------------------------------------
# direct sums and submodule utilities
# ---------------------------------------------------------------------------

@dataclass
class SumData:
    module: FinModule
    injections: list[ModuleMap]
    projections: list[ModuleMap]


def direct_sum(mods: list[FinModule]) -> SumData:
    if not mods:
        raise ValueError("empty direct sum needs a ring")
    ring = mods[0].ring
    if any(m.ring != ring for m in mods):
        raise RingMismatch("direct sum over different rings")
    entries = []
    for t, m in enumerate(mods):
        for i, e in enumerate(m.exps):
            entries.append((e, (t, i)))
    entries.sort(key=lambda x: (-x[0], x[1]))
    module = FinModule(ring, tuple(e for e, _ in entries))
    place = {p: k for k, (_, p) in enumerate(entries)}
    injections, projections = [], []
    for t, m in enumerate(mods):
        inj = Matrix.zeros(ring, module.rank, m.rank)
        prj = Matrix.zeros(ring, m.rank, module.rank)
        for i in range(m.rank):
            inj.data[place[(t, i)]][i] = 1
            prj.data[i][place[(t, i)]] = 1
        injections.append(ModuleMap(m, module, inj, validate=False))
        projections.append(ModuleMap(module, m, prj, validate=False))
    return SumData(module, injections, projections)


def sub_membership(M: FinModule, gens: list[tuple[int, ...]],
                   target: tuple[int, ...]) -> list[int] | None:
    """Coefficients expressing target in the submodule of M spanned by gens,
    or None.  Coefficients for the torsion relations are dropped."""
    ring = M.ring
    cols = [list(g) for g in gens]
    tors = torsion_matrix(M)
    for j in range(tors.cols):
        cols.append(tors.col(j))
    if not cols:
        return [] if not any(target) else None
    A = Matrix(ring, [list(r) for r in zip(*cols)], M.rank, len(cols))
    sol = solve(A, list(target))
    return None if sol is None else sol[:len(gens)]


def sub_canonical(M: FinModule, gens: list[tuple[int, ...]]) -> tuple:
    """Canonical form of the submodule of M generated by gens (as a row
    tuple); equal iff the submodules are equal."""
    rows = [list(g) for g in gens]
    tors = torsion_matrix(M)
    for j in range(tors.cols):
        rows.append(tors.col(j))
    hf = howell(M.ring, rows, M.rank)
    return tuple(tuple(r) for r in hf)


def sub_elements(M: FinModule, gens: list[tuple[int, ...]],
                 budget: int | None = DEFAULT_ENUM_BUDGET) -> list[tuple[int, ...]]:
    """All elements of the submodule spanned by gens, via the Howell rows
    (each span element has a unique reduced coefficient vector)."""
    ring = M.ring
    rows = sub_canonical(M, gens)
    if not rows:
        return [M.zero_elem()]
    anns = []
    for r in rows:
        j = next(k for k, v in enumerate(r) if v)
        anns.append(ring.n - ring.val(r[j]))
    total = 1
    for a in anns:
        total *= ring.p ** (a * ring.f)
    if budget is not None and total > budget:
        raise EnumerationBudget("submodule has %d elements, budget %d" % (total, budget))
    out = []
    for coeffs in itertools.product(*[_coord_reps(ring, a) for a in anns]):
        acc = [0] * M.rank
        for c, r in zip(coeffs, rows):
            if c:
                for k, v in enumerate(r):
                    if v:
                        acc[k] = ring.add(acc[k], ring.mul(c, v))
        out.append(M.reduce(acc))
    return out
