"""Concrete diagram categories with fiber functor, and the coend coalgebra.

A diagram category is concrete: every object carries a free left B-module
B^{r_k} as its fiber, and hom-data from A_k to A_l is an R-spanned set of
B-matrices (R = Z/p^n, so hom sets are R-submodules of B-linear maps, the
situation filtered F-modules force).  Morphisms ARE their matrices, so the
fiber functor is faithful by construction.

The coend L is the quotient of T = sum_k fiber_k (x)_R fiber_k^dual by the
relations  (F v) (x) xi - v (x) (xi F)  for every spanning morphism F and
every R-basis pair (v, xi); relations for composites follow from relations
for factors (rel is R-linear in F, and rel(GF) = rel(G at Fv) + rel(F at
xi.G)), so any spanning family of the hom modules presents the same
submodule.  Relation generators are put in Howell form before the quotient
is taken, which makes the whole presentation canonical: two diagrams with
the same hom spans produce identical output, entry for entry.

Comultiplication on classes is  [v (x) xi] |-> sum_m [v (x) e_m*] (x)_B
[e_m (x) xi]  over a B-basis e_m of the fiber; the counit is evaluation
xi(v).  Both are verified to descend by evaluating them on every relation
generator, and the resulting coalgebra is re-validated axiom by axiom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .rings import RingSpec
from .linalg import Matrix, howell, span_membership, is_invertible, block_diag
from .modules import (FinModule, ModuleMap, module_from_presentation,
                      map_kernel, map_cokernel)
from .algebra import (AlgebraSpec, bimodule_make, free_bmodule,
                      regular_bimodule, tensor_bimodules, tensor_bim_bmodule,
                      induced, as_b_module, is_b_free)
from .coalgebra import (Coalgebra, Comodule, coalgebra_check, comodule_check,
                        comodule_hom)


class DiagramNotClosed(ValueError):
    """Raised when an operation requires a composition-closed diagram."""


DEFAULT_BUDGET = 4096


@dataclass(frozen=True)
class DiagObject:
    name: str
    rank: int


class DiagramCategory:
    """Objects with free B-module fibers and R-spanned hom sets of
    B-matrices; homs[(k, l)] holds maps A_k -> A_l as r_l x r_k matrices."""

    def __init__(self, alg: AlgebraSpec, objects: list[DiagObject],
                 homs: dict[tuple[int, int], list[Matrix]]):
        self.alg = alg
        self.objects = list(objects)
        self.homs = {}
        for k in range(len(objects)):
            for l in range(len(objects)):
                mats = list(homs.get((k, l), []))
                for F in mats:
                    if F.ring != alg.B or F.rows != objects[l].rank or \
                       F.cols != objects[k].rank:
                        raise ValueError("hom %s -> %s has wrong shape or ring"
                                         % (objects[k].name, objects[l].name))
                self.homs[(k, l)] = mats

    def nobj(self) -> int:
        return len(self.objects)

    def span_rows(self, k: int, l: int) -> list[list[int]]:
        alg = self.alg
        width = self.objects[l].rank * self.objects[k].rank * alg.fb
        rows = [list(_flatten_bmat(alg, F)) for F in self.homs[(k, l)]]
        return howell(alg.R, rows, width)

    def hom_contains(self, k: int, l: int, F: Matrix) -> bool:
        rows = [list(_flatten_bmat(self.alg, G)) for G in self.homs[(k, l)]]
        return span_membership(self.alg.R, rows,
                               list(_flatten_bmat(self.alg, F))) is not None

    def closure_violation(self):
        """None if composition-closed with identities, else a witness."""
        B = self.alg.B
        for k, obj in enumerate(self.objects):
            if not self.hom_contains(k, k, Matrix.identity(B, obj.rank)):
                return ("missing-identity", k)
        for (k, l), mats in self.homs.items():
            for (l2, m), mats2 in self.homs.items():
                if l2 != l:
                    continue
                for F in mats:
                    for G in mats2:
                        if not self.hom_contains(k, m, G @ F):
                            return ("not-closed", (k, l, m, F, G))
        return None

    def is_closed(self) -> bool:
        return self.closure_violation() is None


def _flatten_bmat(alg: AlgebraSpec, F: Matrix) -> tuple[int, ...]:
    out = []
    for row in F.data:
        for b in row:
            out.extend(alg.B.coeffs(b))
    return tuple(out)


def _unflatten_bmat(alg: AlgebraSpec, vec, rows: int, cols: int) -> Matrix:
    fb = alg.fb
    out = Matrix.zeros(alg.B, rows, cols)
    idx = 0
    for t in range(rows):
        for s in range(cols):
            out.data[t][s] = alg.B.from_coeffs(vec[idx:idx + fb])
            idx += fb
    return out


def hom_closure(D: DiagramCategory) -> DiagramCategory:
    """Smallest composition-closed R-span family containing the input homs
    and the identities, with every hom set in canonical (Howell) form.
    Idempotent."""
    alg = D.alg
    B = alg.B
    homs = {pair: list(mats) for pair, mats in D.homs.items()}
    for k, obj in enumerate(D.objects):
        homs[(k, k)].append(Matrix.identity(B, obj.rank))

    def canon(pair, mats):
        k, l = pair
        width = D.objects[l].rank * D.objects[k].rank * alg.fb
        rows = howell(alg.R, [list(_flatten_bmat(alg, F)) for F in mats], width)
        return [_unflatten_bmat(alg, r, D.objects[l].rank, D.objects[k].rank)
                for r in rows]

    homs = {pair: canon(pair, mats) for pair, mats in homs.items()}
    changed = True
    while changed:
        changed = False
        for (k, l) in list(homs):
            for m in range(D.nobj()):
                prods = [G @ F for F in homs[(k, l)] for G in homs[(l, m)]]
                if not prods:
                    continue
                new = canon((k, m), homs[(k, m)] + prods)
                if [M.data for M in new] != [M.data for M in homs[(k, m)]]:
                    homs[(k, m)] = new
                    changed = True
    return DiagramCategory(alg, D.objects, homs)


# ---------------------------------------------------------------------------
# the coend coalgebra
# ---------------------------------------------------------------------------

@dataclass
class CoendResult:
    diagram: DiagramCategory
    coalgebra: Coalgebra
    classmap: Matrix                 # carrier coords of each T-basis vector
    offsets: list[int]               # block offset of object k inside T
    block_dims: list[int]            # m_k = r_k * f_B
    perobject: list[Matrix]          # restriction of classmap to block k

    @property
    def L(self) -> Coalgebra:
        return self.coalgebra

    def class_of(self, k: int, v: int, w: int) -> tuple[int, ...]:
        """Class of basis vector v (x) xi_w of fiber_k (x) fiber_k^dual."""
        m = self.block_dims[k]
        j = self.offsets[k] + v * m + w
        L = self.coalgebra.carrier
        return L.reduce(self.classmap.col(j))


def _relation_columns(D: DiagramCategory, morphisms=None):
    """Relation generators in T-coordinates; morphisms defaults to the
    diagram's own spanning lists."""
    alg = D.alg
    B, R, fb = alg.B, alg.R, alg.fb
    dims = [obj.rank * fb for obj in D.objects]
    offsets = []
    acc = 0
    for m in dims:
        offsets.append(acc)
        acc += m * m
    N = acc
    cols = []
    items = morphisms if morphisms is not None else \
        [(k, l, F) for (k, l), mats in sorted(D.homs.items()) for F in mats]
    for (k, l, F) in items:
        mk, ml = dims[k], dims[l]
        rk = D.objects[k].rank
        Fr = alg.bmat_to_rmat(F)
        for v in range(mk):
            fv = Fr.col(v)
            for w in range(ml):
                col = [0] * N
                for w2 in range(ml):
                    a = Fr.data[w2][v]
                    if a:
                        col[offsets[l] + w2 * ml + w] = a
                # xi F as a row over B: xi = (t, beta) with w = t*fb + beta
                t, beta = divmod(w, fb)
                xb = B.pow(B.x, beta)
                for u in range(rk):
                    b = B.mul(F.data[t][u], xb)
                    if b:
                        for g, c in enumerate(B.coeffs(b)):
                            if c:
                                j = offsets[k] + v * mk + (u * fb + g)
                                col[j] = R.sub(col[j], c)
                if any(col):
                    cols.append(col)
    return N, offsets, dims, cols


def _block_x_action(alg: AlgebraSpec, dims, offsets, N, side: str) -> Matrix:
    """x acting on T on the chosen side: through the fiber for 'left',
    through the dual for 'right'; both act by the regular matrix of x."""
    R = alg.R
    out = Matrix.zeros(R, N, N)
    for k, m in enumerate(dims):
        rk = m // alg.fb
        X = block_diag(R, [alg._xmat] * rk) if rk else Matrix.zeros(R, 0, 0)
        for v in range(m):
            for w in range(m):
                j = offsets[k] + v * m + w
                if side == "left":
                    for v2 in range(m):
                        a = X.data[v2][v]
                        if a:
                            out.data[offsets[k] + v2 * m + w][j] = a
                else:
                    for w2 in range(m):
                        a = X.data[w2][w]
                        if a:
                            out.data[offsets[k] + v * m + w2][j] = a
    return out


def coend_relation_rows(D: DiagramCategory, morphisms=None):
    """Canonical (Howell) generators of the coend relation submodule.
    Relations from any R-spanning morphism family agree with relations from
    the full closure; this is the function the robustness property tests."""
    N, _, _, cols = _relation_columns(D, morphisms)
    return N, howell(D.alg.R, [list(c) for c in cols], N)


def coend(D: DiagramCategory, morphisms=None, check: bool = True) -> CoendResult:
    """The coend coalgebra of a composition-closed concrete diagram.

    morphisms optionally overrides the relation-generating family (used to
    test generator robustness); the diagram itself must still be closed.
    check=False skips the final coalgebra axiom re-validation (descent of
    delta and eps onto classes is always verified).
    """
    alg = D.alg
    R = alg.R
    violation = D.closure_violation()
    if violation is not None:
        raise DiagramNotClosed(str(violation))
    N, offsets, dims, cols = _relation_columns(D, morphisms)
    rel_rows = howell(R, [list(c) for c in cols], N)
    if rel_rows:
        P = Matrix(R, [list(r) for r in zip(*rel_rows)], N, len(rel_rows))
    else:
        P = Matrix.zeros(R, N, 0)
    pres = module_from_presentation(P)
    L_car = pres.module
    T_free = FinModule.free(R, N)
    proj = ModuleMap(T_free, L_car, pres.proj)

    def descend_endo(mat: Matrix) -> ModuleMap:
        comp = ModuleMap(T_free, L_car, pres.proj @ mat, validate=False)
        for rr in rel_rows:
            if any(comp.apply(tuple(rr))):
                raise RuntimeError("internal error: action does not descend")
        return ModuleMap(L_car, L_car, comp.mat @ pres.sect)

    left = descend_endo(_block_x_action(alg, dims, offsets, N, "left"))
    right = descend_endo(_block_x_action(alg, dims, offsets, N, "right"))
    L_bi = bimodule_make(alg, L_car, left, right)

    # counit: v (x) xi |-> xi(v)
    breg = regular_bimodule(alg)
    B = alg.B
    fb = alg.fb
    eps_flat = Matrix.zeros(R, fb, N)
    for k, m in enumerate(dims):
        for v in range(m):
            s, alpha = divmod(v, fb)
            for w in range(m):
                t, beta = divmod(w, fb)
                if s == t:
                    b = B.pow(B.x, alpha + beta)
                    for g, c in enumerate(B.coeffs(b)):
                        eps_flat.data[g][offsets[k] + v * m + w] = c
    eps_T = ModuleMap(T_free, breg.carrier, eps_flat, validate=False)
    for rr in rel_rows:
        if any(eps_T.apply(tuple(rr))):
            raise RuntimeError("internal error: counit does not descend")
    counit = ModuleMap(L_car, breg.carrier, eps_flat @ pres.sect)

    # comultiplication on classes via the dual basis of each fiber
    cc = tensor_bimodules(alg, L_bi, L_bi)
    delta_flat = Matrix.zeros(R, cc.module.rank, N)
    for k, m in enumerate(dims):
        rk = m // fb
        for v in range(m):
            for w in range(m):
                j = offsets[k] + v * m + w
                acc = [0] * cc.module.rank
                for mg in range(rk):
                    p1 = L_car.reduce(pres.proj.col(offsets[k] + v * m + mg * fb))
                    p2 = L_car.reduce(pres.proj.col(offsets[k] + (mg * fb) * m + w))
                    vec = cc.pure(p1, p2)
                    for rix, val in enumerate(vec):
                        if val:
                            acc[rix] = R.add(acc[rix], val)
                col = cc.module.reduce(acc)
                for rix, val in enumerate(col):
                    delta_flat.data[rix][j] = val
    delta_T = ModuleMap(T_free, cc.module, delta_flat, validate=False)
    for rr in rel_rows:
        if any(delta_T.apply(tuple(rr))):
            raise RuntimeError("internal error: comultiplication does not descend")
    delta = ModuleMap(L_car, cc.module, delta_flat @ pres.sect)

    if check:
        coalg = coalgebra_check(alg, L_bi, delta, counit)
    else:
        deltahat = cc.sect @ delta.mat
        coalg = Coalgebra(alg, L_bi, delta, counit, cc, deltahat)
    per = []
    for k, m in enumerate(dims):
        colslice = [pres.proj.col(offsets[k] + j) for j in range(m * m)]
        per.append(Matrix.from_cols(R, colslice, L_car.rank))
    return CoendResult(D, coalg, pres.proj, offsets, dims, per)


# ---------------------------------------------------------------------------
# the unit of the adjunction: lifted coactions
# ---------------------------------------------------------------------------

def lift_coaction(CR: CoendResult) -> list[Comodule]:
    """The canonical comodule structure on every fiber:
    rho(v) = sum_m [v (x) e_m*] (x)_B e_m, verified object by object."""
    D = CR.diagram
    alg = D.alg
    R, fb = alg.R, alg.fb
    L = CR.coalgebra
    out = []
    for k, obj in enumerate(D.objects):
        m = CR.block_dims[k]
        fiber = free_bmodule(alg, obj.rank)
        cm = tensor_bim_bmodule(alg, L.bi, fiber)
        mat = Matrix.zeros(R, cm.module.rank, m)
        for v in range(m):
            acc = [0] * cm.module.rank
            for mg in range(obj.rank):
                cls = CR.class_of(k, v, mg * fb)
                vec = cm.pure(cls, fiber.carrier.gen(mg * fb))
                for rix, val in enumerate(vec):
                    if val:
                        acc[rix] = R.add(acc[rix], val)
            col = cm.module.reduce(acc)
            for rix, val in enumerate(col):
                mat.data[rix][v] = val
        rho = ModuleMap(fiber.carrier, cm.module, mat)
        out.append(comodule_check(L, fiber, rho))
    return out


def morphisms_are_comodule_maps(CR: CoendResult, lifted: list[Comodule]) -> bool:
    """Every spanning morphism commutes with the lifted coactions."""
    D = CR.diagram
    alg = D.alg
    for (k, l), mats in D.homs.items():
        for F in mats:
            Fr = ModuleMap(lifted[k].carrier, lifted[l].carrier,
                           alg.bmat_to_rmat(F))
            lhs = lifted[l].rho @ Fr
            rhs = induced(lifted[k].cm, lifted[l].cm,
                          ModuleMap.identity(CR.coalgebra.carrier), Fr) @ lifted[k].rho
            if lhs != rhs:
                return False
    return True


def unit_fully_faithful_check(CR: CoendResult, lifted: list[Comodule] | None = None):
    """Compare each hom span with the full comodule hom of the lifted
    coactions.  Returns {(k, l): ("equal",) or ("strictly-smaller", witness)}
    where the witness is a comodule map outside the diagram span."""
    D = CR.diagram
    alg = D.alg
    if lifted is None:
        lifted = lift_coaction(CR)
    verdicts = {}
    for k in range(D.nobj()):
        for l in range(D.nobj()):
            _, basis = comodule_hom(lifted[k], lifted[l])
            span_rows = D.span_rows(k, l)
            missing = None
            for g in basis:
                bm = alg.rmat_to_bmat(g.mat, D.objects[l].rank, D.objects[k].rank)
                if span_membership(alg.R, [list(r) for r in span_rows],
                                   list(_flatten_bmat(alg, bm))) is None:
                    missing = bm
                    break
            # sanity: the diagram span must embed in the comodule homs
            hom_rows = howell(alg.R, [list(_flatten_bmat(
                alg, alg.rmat_to_bmat(g.mat, D.objects[l].rank,
                                      D.objects[k].rank))) for g in basis],
                len(_flatten_bmat(alg, Matrix.zeros(alg.B, D.objects[l].rank,
                                                    D.objects[k].rank))) or 1)
            for F in D.homs[(k, l)]:
                if span_membership(alg.R, [list(r) for r in hom_rows],
                                   list(_flatten_bmat(alg, F))) is None:
                    raise RuntimeError("internal error: diagram morphism is "
                                       "not a comodule map")
            verdicts[(k, l)] = ("equal",) if missing is None \
                else ("strictly-smaller", missing)
    return verdicts


# ---------------------------------------------------------------------------
# the counit comparison map
# ---------------------------------------------------------------------------

@dataclass
class CounitResult:
    nu: ModuleMap
    injective: bool
    surjective: bool
    iso: bool
    coalgebra_morphism: bool
    coend_result: CoendResult


def counit_map(C: Coalgebra, family: list[Comodule]) -> CounitResult:
    """nu : L(family) -> C, [m (x) xi] |-> (id (x) xi) rho(m), for a family
    of Cauchy comodules with solver-computed hom data."""
    alg = C.alg
    R, B, fb = alg.R, alg.B, alg.fb
    std_comods = []
    thetas = []
    for Mc in family:
        form = as_b_module(alg, Mc.carrier, Mc.module.act)
        if not form.is_free():
            raise ValueError("family member is not Cauchy (underlying "
                             "B-module not free)")
        r = len(form.exps)
        std = free_bmodule(alg, r)
        th = ModuleMap(std.carrier, Mc.carrier, form.theta)
        thinv = ModuleMap(Mc.carrier, std.carrier, form.theta_inv)
        cm_std = tensor_bim_bmodule(alg, C.bi, std)
        rho_std = induced(Mc.cm, cm_std, ModuleMap.identity(C.carrier), thinv) \
            @ Mc.rho @ th
        std_comods.append(comodule_check(C, std, rho_std))
        thetas.append(th)
    objects = [DiagObject("M%d" % i, sc.carrier.rank // fb)
               for i, sc in enumerate(std_comods)]
    homs = {}
    for i, Mi in enumerate(std_comods):
        for j, Mj in enumerate(std_comods):
            _, basis = comodule_hom(Mi, Mj)
            homs[(i, j)] = [alg.rmat_to_bmat(g.mat, objects[j].rank,
                                             objects[i].rank) for g in basis]
    D = DiagramCategory(alg, objects, homs)
    D = hom_closure(D)   # canonicalizes; adds identities if bases missed them
    CR = coend(D)
    L = CR.coalgebra
    # nu on the T-basis
    N = CR.classmap.cols
    nu_flat = Matrix.zeros(R, C.carrier.rank, N)
    for i, sc in enumerate(std_comods):
        m = CR.block_dims[i]
        rhohat = sc.rhohat()
        pos_inv = {v: kk for kk, v in sc.cm.TR.pos.items()}
        for v in range(m):
            lift = rhohat.col(v)
            for w in range(m):
                t, beta = divmod(w, fb)
                acc = [0] * C.carrier.rank
                for kk, coeff in enumerate(lift):
                    if coeff == 0:
                        continue
                    a, u = pos_inv[kk]
                    s, gamma = divmod(u, fb)
                    if s != t:
                        continue
                    b = B.pow(B.x, beta + gamma)
                    vec = C.bi.right_by(b).apply(C.carrier.gen(a))
                    for rix, val in enumerate(vec):
                        if val:
                            acc[rix] = R.add(acc[rix], R.mul(coeff, val))
                col = C.carrier.reduce(acc)
                j = CR.offsets[i] + v * m + w
                for rix, val in enumerate(col):
                    nu_flat.data[rix][j] = val
    # must kill the relations of L
    T_free = FinModule.free(R, N)
    nu_T = ModuleMap(T_free, C.carrier, nu_flat, validate=False)
    _, _, _, cols = _relation_columns(D)
    rel_rows = howell(R, [list(c) for c in cols], N)
    for rr in rel_rows:
        if any(nu_T.apply(tuple(rr))):
            raise RuntimeError("internal error: nu does not descend")
    # classmap has a section: reuse the coend presentation via solve-free path
    # sect columns: lift each L-generator through the projection
    pres_sect = _section_of_projection(R, CR.classmap, L.carrier)
    nu = ModuleMap(L.carrier, C.carrier, nu_flat @ pres_sect)
    # coalgebra-morphism checks
    bimod_ok = (nu @ L.bi.left == C.bi.left @ nu) and \
               (nu @ L.bi.right == C.bi.right @ nu)
    eps_ok = (C.counit @ nu) == L.counit
    nunu = induced(L.cc, C.cc, nu, nu)
    delta_ok = (C.delta @ nu) == (nunu @ L.delta)
    ker, _ = map_kernel(nu)
    cok, _ = map_cokernel(nu)
    injective, surjective = ker.is_zero(), cok.is_zero()
    return CounitResult(nu, injective, surjective,
                        injective and surjective and
                        L.carrier.exps == C.carrier.exps,
                        bimod_ok and eps_ok and delta_ok, CR)


def _section_of_projection(R: RingSpec, proj: Matrix, module: FinModule) -> Matrix:
    """A right inverse of a surjection R^N -> module (columnwise solve)."""
    from .linalg import solve
    from .modules import torsion_matrix
    cols = []
    aug = proj.hstack(torsion_matrix(module))
    for k in range(module.rank):
        rhs = list(module.gen(k))
        sol = solve(aug, rhs)
        if sol is None:
            raise RuntimeError("projection is not surjective")
        cols.append(sol[:proj.cols])
    if not cols:
        return Matrix.zeros(R, proj.cols, 0)
    return Matrix(R, [list(r) for r in zip(*cols)], proj.cols, module.rank)


# ---------------------------------------------------------------------------
# flatness
# ---------------------------------------------------------------------------

def flatness_check(L: Coalgebra) -> bool:
    """Flat as a right B-module: free over B through the right action
    (finite module over a chain ring)."""
    return is_b_free(L.alg, L.carrier, L.bi.right)


# ---------------------------------------------------------------------------
# recognition checkers
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    status: str                     # verified | refuted | inconclusive
    witness: object = None
    reason: str = ""

    def as_dict(self):
        d = {"status": self.status}
        if self.reason:
            d["reason"] = self.reason
        if self.witness is not None:
            d["witness"] = _witness_json(self.witness)
        return d


def _witness_json(w):
    if isinstance(w, Matrix):
        return repr(w)
    if isinstance(w, (list, tuple)):
        return [_witness_json(x) for x in w]
    if isinstance(w, dict):
        return {k: _witness_json(v) for k, v in w.items()}
    return w


@dataclass
class RecognitionReport:
    reflects_isos: Verdict
    cofiltered: Verdict
    rigid_colimits: Verdict
    probes: list = field(default_factory=list)

    def as_dict(self):
        return {"reflects_isos": self.reflects_isos.as_dict(),
                "cofiltered": self.cofiltered.as_dict(),
                "rigid_colimits": self.rigid_colimits.as_dict(),
                "probes": self.probes}


def _span_elements(alg: AlgebraSpec, rows: list[list[int]], budget: int):
    """All elements of the R-span of Howell rows; None if over budget."""
    R = alg.R
    anns = []
    for r in rows:
        j = next(k for k, v in enumerate(r) if v)
        anns.append(R.n - R.val(r[j]))
    total = 1
    for a in anns:
        total *= R.p ** a
        if total > budget:
            return None
    width = len(rows[0]) if rows else 0
    out = []
    for coeffs in itertools.product(*[range(R.p ** a) for a in anns]):
        acc = [0] * width
        for c, r in enumerate(coeffs):
            if r:
                for k, v in enumerate(rows[c]):
                    if v:
                        acc[k] = R.add(acc[k], R.mul(r, v))
        out.append(acc)
    if not rows:
        out = [[0] * width]
    return out


def _fiber_elements(alg: AlgebraSpec, rank: int, budget: int):
    if alg.B.size ** rank > budget:
        return None
    return [tuple(v) for v in itertools.product(range(alg.B.size), repeat=rank)]


def reflects_isos_check(D: DiagramCategory, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Sweep the hom spans; every invertible matrix must have a two-sided
    inverse inside the opposite span."""
    alg = D.alg
    skipped = False
    for (k, l) in sorted(D.homs):
        rows = D.span_rows(k, l)
        if not rows:
            continue
        elems = _span_elements(alg, rows, budget)
        if elems is None:
            skipped = True
            continue
        rk, rl = D.objects[k].rank, D.objects[l].rank
        back = D.homs[(l, k)]
        for vec in elems:
            F = _unflatten_bmat(alg, vec, rl, rk)
            if rk != rl or not is_invertible(F):
                continue
            if _two_sided_inverse_in_span(alg, F, back, rk, rl) is None:
                return Verdict("refuted", {"pair": (k, l), "matrix": F})
    if skipped:
        return Verdict("inconclusive", reason="hom span sweep over budget")
    return Verdict("verified")


def _two_sided_inverse_in_span(alg: AlgebraSpec, F: Matrix, back: list[Matrix],
                               rk: int, rl: int):
    """Coefficients c with (sum c G) F = id and F (sum c G) = id, or None."""
    R, B = alg.R, alg.B
    idk = Matrix.identity(B, rk)
    idl = Matrix.identity(B, rl)
    rows = []
    for G in back:
        rows.append(list(_flatten_bmat(alg, G @ F)) + list(_flatten_bmat(alg, F @ G)))
    target = list(_flatten_bmat(alg, idk)) + list(_flatten_bmat(alg, idl))
    return span_membership(R, rows, target)


def cofiltered_check(D: DiagramCategory, budget: int = DEFAULT_BUDGET) -> Verdict:
    """el(omega) nonempty, with binary cones and equalizing morphisms, by
    exhaustive search within the budget."""
    alg = D.alg
    if not D.objects:
        return Verdict("refuted", {"reason": "category of elements is empty"})
    objs = []
    for k, obj in enumerate(D.objects):
        els = _fiber_elements(alg, obj.rank, budget)
        if els is None:
            return Verdict("inconclusive", reason="fiber enumeration over budget")
        objs.extend((k, v) for v in els)
    if len(objs) ** 2 > budget * 16:
        return Verdict("inconclusive", reason="element-pair sweep over budget")
    span_cache = {pair: D.span_rows(*pair) for pair in D.homs}
    for (k, vA) in objs:
        for (l, vB) in objs:
            cone = _has_cone(D, span_cache, (k, vA), (l, vB), budget)
            if cone == "budget":
                return Verdict("inconclusive", reason="cone search over budget")
            if not cone:
                return Verdict("refuted", {"kind": "no-cone",
                                           "first": (k, list(vA)),
                                           "second": (l, list(vB))})
    # equalizing morphisms for parallel pairs
    for (k, vA) in objs:
        for (l, vB) in objs:
            pairmaps = _el_morphisms(D, span_cache, (k, vA), (l, vB), budget)
            if pairmaps is None:
                return Verdict("inconclusive", reason="parallel-pair sweep over budget")
            for f, g in itertools.combinations(pairmaps, 2):
                eq = _has_equalizing(D, span_cache, (k, vA), f, g, budget)
                if eq == "budget":
                    return Verdict("inconclusive",
                                   reason="equalizer search over budget")
                if not eq:
                    return Verdict("refuted", {"kind": "no-equalizer",
                                               "source": (k, list(vA)),
                                               "target": (l, list(vB)),
                                               "f": f, "g": g})
    return Verdict("verified")


def _apply_bmat(alg: AlgebraSpec, F: Matrix, v) -> tuple[int, ...]:
    return tuple(F.apply(list(v)))


def _has_cone(D: DiagramCategory, span_cache, obj1, obj2,
              budget: int = DEFAULT_BUDGET):
    """True / False / "budget": a refutation is only sound when every
    candidate source fiber could be enumerated."""
    alg = D.alg
    (k, vA), (l, vB) = obj1, obj2
    exhausted = False
    for c, cobj in enumerate(D.objects):
        els = _fiber_elements(alg, cobj.rank, budget)
        if els is None:
            exhausted = True
            continue
        for u in els:
            if _solvable_at(alg, D, span_cache, c, k, u, vA) and \
               _solvable_at(alg, D, span_cache, c, l, u, vB):
                return True
    return "budget" if exhausted else False


def _solvable_at(alg, D, span_cache, c, k, u, target) -> bool:
    """Is there F in span(c -> k) with F u = target?"""
    gens = D.homs[(c, k)]
    rows = [list(alg.bvec_to_rvec(_apply_bmat(alg, G, u))) for G in gens]
    return span_membership(alg.R, rows, list(alg.bvec_to_rvec(target))) is not None


def _el_morphisms(D, span_cache, obj1, obj2, budget):
    """All span elements f with f(v1) = v2, as B-matrices."""
    alg = D.alg
    (k, vA), (l, vB) = obj1, obj2
    rows = span_cache[(k, l)]
    if not rows:
        return []
    elems = _span_elements(alg, rows, budget)
    if elems is None:
        return None
    out = []
    for vec in elems:
        F = _unflatten_bmat(alg, vec, D.objects[l].rank, D.objects[k].rank)
        if _apply_bmat(alg, F, vA) == tuple(vB):
            out.append(F)
    return out


def _has_equalizing(D, span_cache, src, f, g, budget):
    """True / False / "budget": is there (C, u) and h in span(C -> src)
    with h u = v_src and f h = g h?"""
    alg = D.alg
    k, vA = src
    diff = f - g
    exhausted = False
    for c, cobj in enumerate(D.objects):
        els = _fiber_elements(alg, cobj.rank, budget)
        if els is None:
            exhausted = True
            continue
        gens = D.homs[(c, k)]
        for u in els:
            rows = []
            for G in gens:
                rows.append(list(alg.bvec_to_rvec(_apply_bmat(alg, G, u)))
                            + list(_flatten_bmat(alg, diff @ G)))
            target = list(alg.bvec_to_rvec(vA)) + [0] * (
                diff.rows * cobj.rank * alg.fb)
            if span_membership(alg.R, rows, target) is not None:
                return True
    return "budget" if exhausted else False


def rigid_colimit_probes(D: DiagramCategory, budget: int = DEFAULT_BUDGET,
                         extra_probes=None):
    """Coequalizer and pushout probes whose fiber colimit is free over B:
    search for a universal cocone object inside D and compare with the
    fiber colimit.  Returns (Verdict, probe detail list).

    extra_probes entries are ("coeq", k, l, F, G) or
    ("pushout", c, k, l, F, G) with F : c -> k, G : c -> l."""
    alg = D.alg
    B = alg.B
    probes = []
    jobs = []
    for (k, l), mats in sorted(D.homs.items()):
        for i, F in enumerate(mats):
            for G in [Matrix.zeros(B, D.objects[l].rank, D.objects[k].rank)] + mats[i:]:
                jobs.append(("coeq", k, l, F, G))
    for (c, k) in sorted(D.homs):
        for l in range(D.nobj()):
            for F in D.homs[(c, k)][:2]:
                for G in D.homs[(c, l)][:2]:
                    jobs.append(("pushout", c, k, l, F, G))
    if extra_probes:
        jobs.extend(extra_probes)
    overall = "verified"
    witness = None
    for job in jobs[:96]:
        kind = job[0]
        if kind == "coeq":
            _, k, l, F, G = job
            detail = {"kind": "coeq", "pair": (k, l)}
            diffB = F - G
            cok_exps = _b_cokernel_exps(alg, diffB)
            if any(e != B.n for e in cok_exps):
                detail["verdict"] = "not-applicable"
                probes.append(detail)
                continue
            found = _find_coequalizer(D, k, l, F, G, budget)
        else:
            _, c, k, l, F, G = job
            detail = {"kind": "pushout", "span": (c, k, l)}
            glueB = F.vstack(-G)
            cok_exps = _b_cokernel_exps(alg, glueB)
            if any(e != B.n for e in cok_exps):
                detail["verdict"] = "not-applicable"
                probes.append(detail)
                continue
            found = _find_pushout(D, c, k, l, F, G, budget)
        if found is None:
            detail["verdict"] = "refuted"
            if overall != "refuted":
                overall = "refuted"
                witness = detail | {"f": job[-2], "g": job[-1]}
        elif found == "budget":
            detail["verdict"] = "inconclusive"
            if overall == "verified":
                overall = "inconclusive"
        else:
            detail["verdict"] = "verified"
            detail["tip"] = found[0]
        probes.append(detail)
    v = Verdict(overall, witness,
                "" if overall != "inconclusive" else "probe sweep over budget")
    return v, probes


def _b_cokernel_exps(alg: AlgebraSpec, M: Matrix):
    from .linalg import cokernel_exponents
    return cokernel_exponents(M)


def _find_coequalizer(D: DiagramCategory, k: int, l: int, F: Matrix, G: Matrix,
                      budget: int):
    """(c, q) realizing the coequalizer of f, g with omega preserving it."""
    alg = D.alg
    B = alg.B
    diff = F - G
    for c, cobj in enumerate(D.objects):
        rows = D.span_rows(l, c)
        if rows:
            elems = _span_elements(alg, rows, budget)
        else:
            # the span still contains the zero morphism
            elems = [[0] * (cobj.rank * D.objects[l].rank * alg.fb)]
        if elems is None:
            return "budget"
        for vec in elems:
            q = _unflatten_bmat(alg, vec, cobj.rank, D.objects[l].rank)
            if not (q @ diff).is_zero():
                continue
            if _is_universal_cocone(D, k, l, c, q, diff, budget):
                # omega must send it to the fiber colimit: the induced map
                # coker(diff) -> fiber(c) must be an isomorphism over B
                presB = module_from_presentation(diff)
                qbar = ModuleMap(presB.module, FinModule.free(B, cobj.rank),
                                 q @ presB.sect)
                from .modules import is_isomorphism
                if is_isomorphism(qbar):
                    return (c, q)
    return None


def _find_pushout(D: DiagramCategory, c: int, k: int, l: int, F: Matrix,
                  G: Matrix, budget: int):
    """(tip, q1, q2) realizing the pushout of F : c -> k, G : c -> l, with
    the fiber comparison an isomorphism, or None / "budget"."""
    alg = D.alg
    B = alg.B
    glueB = F.vstack(-G)
    for t, tobj in enumerate(D.objects):
        rows1 = D.span_rows(k, t)
        rows2 = D.span_rows(l, t)
        e1 = _span_elements(alg, rows1, budget) if rows1 else \
            [[0] * (tobj.rank * D.objects[k].rank * alg.fb)]
        e2 = _span_elements(alg, rows2, budget) if rows2 else \
            [[0] * (tobj.rank * D.objects[l].rank * alg.fb)]
        if e1 is None or e2 is None or len(e1) * len(e2) > budget:
            return "budget"
        for v1 in e1:
            q1 = _unflatten_bmat(alg, v1, tobj.rank, D.objects[k].rank)
            q1F = q1 @ F
            for v2 in e2:
                q2 = _unflatten_bmat(alg, v2, tobj.rank, D.objects[l].rank)
                if q1F != q2 @ G:
                    continue
                ok = _pushout_universal(D, c, k, l, t, q1, q2, F, G, budget)
                if ok == "budget":
                    return "budget"
                if ok:
                    pres = module_from_presentation(glueB)
                    qbar = ModuleMap(pres.module, FinModule.free(B, tobj.rank),
                                     q1.hstack(q2) @ pres.sect)
                    from .modules import is_isomorphism
                    if is_isomorphism(qbar):
                        return (t, q1, q2)
    return None


def _pushout_universal(D: DiagramCategory, c: int, k: int, l: int, t: int,
                       q1: Matrix, q2: Matrix, F: Matrix, G: Matrix,
                       budget: int):
    alg = D.alg
    R = alg.R
    for e, eobj in enumerate(D.objects):
        gens1 = D.homs[(k, e)]
        gens2 = D.homs[(l, e)]
        gens_te = D.homs[(t, e)]
        # the cocone pairs (t1, t2) with t1 F = t2 G form the kernel of a
        # linear map on the joint coefficient space
        width_cond = eobj.rank * D.objects[c].rank * alg.fb
        rows = []
        for H in gens1:
            rows.append(list(_flatten_bmat(alg, H @ F)))
        for H in gens2:
            rows.append([R.neg(v) for v in _flatten_bmat(alg, H @ G)])
        if rows:
            A = Matrix(R, [list(rr) for rr in zip(*rows)], width_cond, len(rows))
            from .linalg import kernel as lkernel
            Kk = lkernel(A)
            if R.size ** Kk.cols > budget:
                return "budget"
            coeff_vectors = [Kk.apply(list(cf)) for cf in
                             itertools.product(range(R.size), repeat=Kk.cols)] \
                if Kk.cols else [[0] * len(rows)]
        else:
            coeff_vectors = [[]]
        seen = set()
        for cf in coeff_vectors:
            t1 = Matrix.zeros(alg.B, eobj.rank, D.objects[k].rank)
            for cc, H in zip(cf[:len(gens1)], gens1):
                if cc:
                    t1 = t1 + H.scale(alg.B.from_int(cc))
            t2 = Matrix.zeros(alg.B, eobj.rank, D.objects[l].rank)
            for cc, H in zip(cf[len(gens1):], gens2):
                if cc:
                    t2 = t2 + H.scale(alg.B.from_int(cc))
            key = (tuple(map(tuple, t1.data)), tuple(map(tuple, t2.data)))
            if key in seen:
                continue
            seen.add(key)
            srows = [list(_flatten_bmat(alg, S @ q1)) +
                     list(_flatten_bmat(alg, S @ q2)) for S in gens_te]
            target = list(_flatten_bmat(alg, t1)) + list(_flatten_bmat(alg, t2))
            if span_membership(R, srows, target) is None:
                return False
        # uniqueness: s q1 = 0 and s q2 = 0 force s = 0
        srows = [list(_flatten_bmat(alg, S @ q1)) +
                 list(_flatten_bmat(alg, S @ q2)) for S in gens_te]
        if srows:
            A = Matrix(R, [list(rr) for rr in zip(*srows)],
                       len(srows[0]), len(srows))
            from .linalg import kernel as lkernel
            Kk = lkernel(A)
            for j in range(Kk.cols):
                coeffs = Kk.col(j)
                acc = [0] * (eobj.rank * D.objects[t].rank * alg.fb)
                for cfv, S in zip(coeffs, gens_te):
                    if cfv:
                        fv = _flatten_bmat(alg, S)
                        for idx, vv in enumerate(fv):
                            acc[idx] = R.add(acc[idx], R.mul(cfv, vv))
                if any(acc):
                    return False
    return True


def _is_universal_cocone(D: DiagramCategory, k: int, l: int, c: int, q: Matrix,
                         diff: Matrix, budget: int) -> bool:
    alg = D.alg
    for e, eobj in enumerate(D.objects):
        rows = D.span_rows(l, e)
        elems = _span_elements(alg, rows, budget) if rows else []
        if elems is None:
            return False
        gens_ce = D.homs[(c, e)]
        for vec in elems:
            t = _unflatten_bmat(alg, vec, eobj.rank, D.objects[l].rank)
            if not (t @ diff).is_zero():
                continue
            srows = [list(_flatten_bmat(alg, S @ q)) for S in gens_ce]
            if span_membership(alg.R, srows, list(_flatten_bmat(alg, t))) is None:
                return False
        # uniqueness: s q = 0 forces s = 0 on the span
        width = eobj.rank * D.objects[c].rank * alg.fb
        srows = [list(_flatten_bmat(alg, S @ q)) for S in gens_ce]
        from .linalg import kernel as lkernel
        if srows:
            A = Matrix(alg.R, [list(r) for r in zip(*srows)],
                       len(srows[0]), len(srows))
            Kk = lkernel(A)
            for j in range(Kk.cols):
                coeffs = Kk.col(j)
                acc = [0] * width
                for cf, S in zip(coeffs, gens_ce):
                    if cf:
                        fv = _flatten_bmat(alg, S)
                        for idx, vv in enumerate(fv):
                            acc[idx] = alg.R.add(acc[idx], alg.R.mul(cf, vv))
                if any(acc):
                    return False
    return True


def recognition_check(D: DiagramCategory, budget: int = DEFAULT_BUDGET) -> RecognitionReport:
    """Conditions i)-iii) at desk scale; never crashes on budget exhaustion
    (verdict inconclusive instead)."""
    violation = D.closure_violation()
    if violation is not None:
        raise DiagramNotClosed(str(violation))
    v1 = reflects_isos_check(D, budget)
    v2 = cofiltered_check(D, budget)
    v3, probes = rigid_colimit_probes(D, budget)
    return RecognitionReport(v1, v2, v3, probes)


# ---------------------------------------------------------------------------
# standalone witness rechecks
# ---------------------------------------------------------------------------

def recheck_iso_witness(D: DiagramCategory, k: int, l: int, F: Matrix) -> bool:
    """True iff F really is an invertible matrix in the span with no
    two-sided inverse in the opposite span."""
    alg = D.alg
    if not D.hom_contains(k, l, F):
        return False
    if D.objects[k].rank != D.objects[l].rank or not is_invertible(F):
        return False
    return _two_sided_inverse_in_span(alg, F, D.homs[(l, k)],
                                      D.objects[k].rank, D.objects[l].rank) is None


def recheck_cone_witness(D: DiagramCategory, first, second,
                         budget: int = DEFAULT_BUDGET) -> bool:
    span_cache = {pair: D.span_rows(*pair) for pair in D.homs}
    k, vA = first
    l, vB = second
    return _has_cone(D, span_cache, (k, tuple(vA)), (l, tuple(vB)),
                     budget) is False
