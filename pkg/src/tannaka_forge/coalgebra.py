"""B-B-coalgebras and their left comodules.

A coalgebra is a B-B-bimodule C with a comultiplication delta : C -> C (x)_B C
and a counit eps : C -> B, both bimodule maps, satisfying coassociativity and
the two counit laws.  A left comodule is a left B-module M with a coaction
rho : M -> C (x)_B M compatible with delta and eps.

Axioms are evaluated on a generating set of the carrier (maps are linear, so
this is exhaustive).  Coassociativity is compared inside the triple tensor
over B, computed once as a quotient of the flat R-triple tensor; composites
like (delta (x) id) are induced through recorded tensor presentations and the
descent is checked on every middle-relation generator.

Failure reports carry the axiom name and a witness generator index so a
refutation can be replayed in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix
from .modules import (FinModule, ModuleMap, hom_module, map_kernel, direct_sum,
                      sub_membership, sub_canonical, sub_elements,
                      DEFAULT_ENUM_BUDGET, EnumerationBudget)
from .algebra import (AlgebraSpec, BModule, BBBimodule, BTensor, TripleTensor,
                      tensor_bimodules, tensor_bim_bmodule, triple_tensor,
                      descend, regular_bimodule, b_elem_of_rvec, is_b_free,
                      btensor_bmodule)


class AxiomError(ValueError):
    """code is one of NotBimoduleMap, NotModuleMap, Coassoc, CounitLeft,
    CounitRight; witness is a generator index of the carrier."""

    def __init__(self, code: str, witness: int, detail: str = ""):
        self.code = code
        self.witness = witness
        super().__init__("%s (witness generator %d)%s"
                         % (code, witness, " " + detail if detail else ""))


def _first_difference(f: ModuleMap, g: ModuleMap) -> int | None:
    for i in range(f.src.rank):
        if f.apply(f.src.gen(i)) != g.apply(g.src.gen(i)):
            return i
    return None


@dataclass
class Coalgebra:
    alg: AlgebraSpec
    bi: BBBimodule
    delta: ModuleMap            # carrier -> cc.module
    counit: ModuleMap           # carrier -> regular bimodule carrier
    cc: BTensor                 # C (x)_B C
    deltahat: Matrix            # lift of delta into the flat R-tensor

    @property
    def carrier(self) -> FinModule:
        return self.bi.carrier

    def counit_elem(self, v) -> int:
        """eps(v) as an element of B."""
        return b_elem_of_rvec(self.alg, self.counit.apply(v))

    def __eq__(self, other):
        return (isinstance(other, Coalgebra) and self.bi == other.bi
                and self.delta == other.delta and self.counit == other.counit)

    def __hash__(self):
        return hash((self.bi, self.delta, self.counit))


def _counit_left_map(alg: AlgebraSpec, C: BBBimodule, counit: ModuleMap,
                     data: BTensor, M: BModule) -> ModuleMap:
    """(eps (x)_B id) : C (x)_B M -> M through B (x)_B M = M, descended from
    the flat map c (x) m |-> eps(c) . m."""
    car_c, car_m = C.carrier, M.carrier
    flat = Matrix.zeros(alg.R, car_m.rank, data.TR.module.rank)
    eps_of_gen = [b_elem_of_rvec(alg, counit.apply(car_c.gen(i)))
                  for i in range(car_c.rank)]
    for (i, j), k in data.TR.pos.items():
        col = M.act_by(eps_of_gen[i]).apply(car_m.gen(j))
        for r, v in enumerate(col):
            flat.data[r][k] = v
    return descend(data, ModuleMap(data.TR.module, car_m, flat, validate=False))


def _counit_right_map(alg: AlgebraSpec, C: BBBimodule, counit: ModuleMap,
                      data: BTensor) -> ModuleMap:
    """(id (x)_B eps) : C (x)_B C -> C via the right action."""
    car = C.carrier
    flat = Matrix.zeros(alg.R, car.rank, data.TR.module.rank)
    eps_of_gen = [b_elem_of_rvec(alg, counit.apply(car.gen(j)))
                  for j in range(car.rank)]
    for (i, j), k in data.TR.pos.items():
        col = C.right_by(eps_of_gen[j]).apply(car.gen(i))
        for r, v in enumerate(col):
            flat.data[r][k] = v
    return descend(data, ModuleMap(data.TR.module, car, flat, validate=False))


def _delta_tensor_id(alg: AlgebraSpec, deltahat: Matrix, data: BTensor,
                     t3: TripleTensor, right_car: FinModule) -> ModuleMap:
    """(delta (x)_B id) : C (x)_B Z -> C (x)_B C (x)_B Z, for data the source
    tensor and t3 the triple tensor with the same outer factors."""
    flat = Matrix.zeros(alg.R, t3.module.rank, data.TR.module.rank)
    for (i, j), k in data.TR.pos.items():
        dcol = deltahat.col(i)   # an element of the flat C (x) C
        col = t3.proj.apply(t3.TR.embed(tuple(dcol), right_car.gen(j)))
        for r, v in enumerate(col):
            flat.data[r][k] = v
    return descend(data, ModuleMap(data.TR.module, t3.module, flat, validate=False))


def _id_tensor_coaction(alg: AlgebraSpec, data: BTensor, t3: TripleTensor,
                        C_car: FinModule, hat: Matrix,
                        inner_pos) -> ModuleMap:
    """(id (x)_B rho) : C (x)_B Z -> C (x)_B C (x)_B Z where hat lifts the
    coaction of Z into the flat C (x) Z and inner_pos inverts its index."""
    R = alg.R
    flat = Matrix.zeros(R, t3.module.rank, data.TR.module.rank)
    for (i, j), k in data.TR.pos.items():
        acc = [0] * t3.module.rank
        for kk, coeff in enumerate(hat.col(j)):
            if coeff == 0:
                continue
            a, b = inner_pos[kk]
            vec = t3.pure3(C_car.gen(i), C_car.gen(a), _gen(t3, b))
            for r, v in enumerate(vec):
                if v:
                    acc[r] = R.add(acc[r], R.mul(coeff, v))
        col = t3.module.reduce(acc)
        for r, v in enumerate(col):
            flat.data[r][k] = v
    return descend(data, ModuleMap(data.TR.module, t3.module, flat, validate=False))


def _gen(t3: TripleTensor, b: int):
    return t3.TR.right.gen(b)


def coalgebra_check(alg: AlgebraSpec, C: BBBimodule, delta: ModuleMap,
                    counit: ModuleMap) -> Coalgebra:
    """Validate (C, delta, eps); raises AxiomError naming the first failing
    axiom with a witness generator."""
    cc = tensor_bimodules(alg, C, C)
    breg = regular_bimodule(alg)
    if delta.src != C.carrier or delta.dst != cc.module:
        raise ValueError("delta must map the carrier into C (x)_B C")
    if counit.src != C.carrier or counit.dst != breg.carrier:
        raise ValueError("counit must map the carrier into B")
    # bimodule-map conditions
    for name, lhs, rhs in (
            ("left", delta @ C.left, cc.left @ delta),
            ("right", delta @ C.right, cc.right @ delta),
            ("left", counit @ C.left, breg.left @ counit),
            ("right", counit @ C.right, breg.right @ counit)):
        w = _first_difference(lhs, rhs)
        if w is not None:
            raise AxiomError("NotBimoduleMap", w, "(%s action)" % name)
    deltahat = cc.sect @ delta.mat
    # counit laws
    eps_id = _counit_left_map(alg, C, counit, cc, C.left_module())
    w = _first_difference(eps_id @ delta, ModuleMap.identity(C.carrier))
    if w is not None:
        raise AxiomError("CounitLeft", w)
    id_eps = _counit_right_map(alg, C, counit, cc)
    w = _first_difference(id_eps @ delta, ModuleMap.identity(C.carrier))
    if w is not None:
        raise AxiomError("CounitRight", w)
    # coassociativity inside the triple tensor
    t3 = triple_tensor(alg, C.carrier, C.right, C.carrier, C.left, C.right,
                       C.carrier, C.left)
    lhs = _delta_tensor_id(alg, deltahat, cc, t3, C.carrier) @ delta
    pos_inv = {v: k for k, v in cc.TR.pos.items()}
    rhs = _id_tensor_coaction(alg, cc, t3, C.carrier, deltahat, pos_inv) @ delta
    w = _first_difference(lhs, rhs)
    if w is not None:
        raise AxiomError("Coassoc", w)
    return Coalgebra(alg, C, delta, counit, cc, deltahat)


@dataclass
class Comodule:
    coalgebra: Coalgebra
    module: BModule
    rho: ModuleMap              # carrier -> cm.module
    cm: BTensor                 # C (x)_B M

    @property
    def carrier(self) -> FinModule:
        return self.module.carrier

    def rhohat(self) -> Matrix:
        return self.cm.sect @ self.rho.mat

    def __eq__(self, other):
        return (isinstance(other, Comodule) and self.coalgebra == other.coalgebra
                and self.module == other.module and self.rho == other.rho)

    def __hash__(self):
        return hash((self.coalgebra, self.module, self.rho))


def comodule_check(C: Coalgebra, M: BModule, rho: ModuleMap) -> Comodule:
    """Validate a coaction; raises AxiomError on the first failing axiom."""
    alg = C.alg
    cm = tensor_bim_bmodule(alg, C.bi, M)
    if rho.src != M.carrier or rho.dst != cm.module:
        raise ValueError("rho must map the carrier into C (x)_B M")
    w = _first_difference(rho @ M.act, cm.left @ rho)
    if w is not None:
        raise AxiomError("NotModuleMap", w)
    eps_id = _counit_left_map(alg, C.bi, C.counit, cm, M)
    w = _first_difference(eps_id @ rho, ModuleMap.identity(M.carrier))
    if w is not None:
        raise AxiomError("CounitLeft", w)
    t3 = triple_tensor(alg, C.carrier, C.bi.right, C.carrier, C.bi.left,
                       C.bi.right, M.carrier, M.act)
    lhs = _delta_tensor_id(alg, C.deltahat, cm, t3, M.carrier) @ rho
    rhohat = cm.sect @ rho.mat
    pos_inv = {v: k for k, v in cm.TR.pos.items()}
    rhs = _id_tensor_coaction(alg, cm, t3, C.carrier, rhohat, pos_inv) @ rho
    w = _first_difference(lhs, rhs)
    if w is not None:
        raise AxiomError("Coassoc", w)
    return Comodule(C, M, rho, cm)


# ---------------------------------------------------------------------------
# comodule homs via the hom-equalizer
# ---------------------------------------------------------------------------

def b_hom(alg: AlgebraSpec, M: BModule, N: BModule):
    """Hom_B(M, N) as a submodule of Hom_R, with a basis of maps."""
    H = hom_module(M.carrier, N.carrier)
    defect_coords = []
    for h in H.basis:
        defect_coords.append(H.coords((h @ M.act) - (N.act @ h)))
    if H.module.rank:
        mat = Matrix(alg.R, [list(r) for r in zip(*defect_coords)],
                     H.module.rank, H.module.rank)
    else:
        mat = Matrix.zeros(alg.R, 0, 0)
    phi = ModuleMap(H.module, H.module, mat, validate=False)
    K, incl = map_kernel(phi)
    basis = [H.from_coords(incl.apply(K.gen(k))) for k in range(K.rank)]
    return K, basis, H


def comodule_hom(Mc: Comodule, Nc: Comodule):
    """The R-module of comodule maps M -> N, as the equalizer of
    rho_N . f and (id_C (x)_B f) . rho_M inside Hom_B(M, N).

    Returns (module, basis of ModuleMap).
    """
    C = Mc.coalgebra
    if Nc.coalgebra != C:
        raise ValueError("comodules over different coalgebras")
    alg = C.alg
    M, N = Mc.module, Nc.module
    H = hom_module(M.carrier, N.carrier)
    H2 = hom_module(M.carrier, N.carrier)
    HC = hom_module(M.carrier, Nc.cm.module)
    rhohat_M = Mc.rhohat()
    from .modules import map_tensor
    cond_cols = []
    sum_data = direct_sum([H2.module, HC.module])
    for h in H.basis:
        d1 = (h @ M.act) - (N.act @ h)
        flat = map_tensor(Mc.cm.TR, ModuleMap.identity(C.carrier), h, Nc.cm.TR)
        term = ModuleMap(M.carrier, Nc.cm.module,
                         Nc.cm.proj.mat @ flat.mat @ rhohat_M, validate=False)
        d2 = (Nc.rho @ h) - term
        v1 = sum_data.injections[0].apply(H2.coords(d1))
        v2 = sum_data.injections[1].apply(HC.coords(d2))
        cond_cols.append(sum_data.module.add(v1, v2))
    if H.module.rank:
        mat = Matrix(alg.R, [list(r) for r in zip(*cond_cols)],
                     sum_data.module.rank, H.module.rank)
    else:
        mat = Matrix.zeros(alg.R, sum_data.module.rank, 0)
    phi = ModuleMap(H.module, sum_data.module, mat, validate=False)
    K, incl = map_kernel(phi)
    basis = [H.from_coords(incl.apply(K.gen(k))) for k in range(K.rank)]
    return K, basis


def is_cauchy(Mc: Comodule) -> bool:
    """Cauchy = underlying B-module finitely generated projective; over a
    chain ring that means free."""
    return is_b_free(Mc.coalgebra.alg, Mc.carrier, Mc.module.act)


def cofree(C: Coalgebra, M: BModule) -> Comodule:
    """The cofree comodule on M: carrier C (x)_B M, coaction delta (x) id
    (verified by comodule_check even though it holds by construction)."""
    alg = C.alg
    cm = tensor_bim_bmodule(alg, C.bi, M)
    carrier_mod = btensor_bmodule(cm)
    target = tensor_bim_bmodule(alg, C.bi, carrier_mod)
    R = alg.R
    flat = Matrix.zeros(R, target.module.rank, cm.TR.module.rank)
    pos_inv = {v: k for k, v in C.cc.TR.pos.items()}
    for (i, j), k in cm.TR.pos.items():
        acc = [0] * target.module.rank
        for kk, coeff in enumerate(C.deltahat.col(i)):
            if coeff == 0:
                continue
            a, b = pos_inv[kk]
            inner = cm.pure(C.carrier.gen(b), M.carrier.gen(j))
            vec = target.pure(C.carrier.gen(a), inner)
            for r, v in enumerate(vec):
                if v:
                    acc[r] = R.add(acc[r], R.mul(coeff, v))
        col = target.module.reduce(acc)
        for r, v in enumerate(col):
            flat.data[r][k] = v
    rho = descend(cm, ModuleMap(cm.TR.module, target.module, flat, validate=False))
    return comodule_check(C, carrier_mod, rho)


# ---------------------------------------------------------------------------
# subcomodule enumeration (brute force, budgeted)
# ---------------------------------------------------------------------------

def enumerate_b_submodules(alg: AlgebraSpec, M: BModule,
                           budget: int = DEFAULT_ENUM_BUDGET):
    """All B-submodules of M's carrier, as canonical generator tuples."""
    car = M.carrier
    if car.cardinality() > budget:
        raise EnumerationBudget("carrier too large for submodule enumeration")
    fb = alg.fb
    acts = [ModuleMap.identity(car)]
    for _ in range(fb - 1):
        acts.append(M.act @ acts[-1])

    def close(gens):
        full = []
        for g in gens:
            for a in acts:
                full.append(a.apply(g))
        return frozenset(sub_elements(car, full, budget=None))

    elems = list(car.elements(budget))
    base = {close([e]) for e in elems}
    base.add(frozenset([car.zero_elem()]))
    closed = set(base)
    work = list(base)
    while work:
        S = work.pop()
        for T in base:
            if T <= S:
                continue
            U = close(list(S | T))
            if U not in closed:
                closed.add(U)
                work.append(U)
    out = []
    for S in closed:
        gens = sub_canonical(car, sorted(S))
        out.append((len(S), gens, sorted(S)))
    out.sort(key=lambda t: (t[0], t[2]))
    return out


def enumerate_subcomodules(Mc: Comodule, budget: int = DEFAULT_ENUM_BUDGET):
    """All B-submodules S with rho(S) inside the image of C (x)_B S in
    C (x)_B M; complete, contains 0 and M."""
    alg = Mc.coalgebra.alg
    car = Mc.carrier
    C_car = Mc.coalgebra.carrier
    out = []
    for size, gens, elems in enumerate_b_submodules(alg, Mc.module, budget):
        image_gens = []
        for a in range(C_car.rank):
            for s in gens:
                image_gens.append(Mc.cm.pure(C_car.gen(a), s))
        ok = True
        for s in gens:
            target = Mc.rho.apply(s)
            if sub_membership(Mc.cm.module, image_gens, target) is None:
                ok = False
                break
        if ok:
            out.append((size, [tuple(g) for g in gens], elems))
    return out


def subcomodule_as_comodule(Mc: Comodule, gens) -> Comodule | None:
    """Restrict the coaction to the subcomodule spanned by gens, presented
    abstractly; None when the restriction cannot be solved or fails the
    axioms (possible only for non-flat coalgebras)."""
    from .modules import Matrix as _M  # noqa: F401
    from .linalg import Matrix as LMatrix
    alg = Mc.coalgebra.alg
    car = Mc.carrier
    fb = alg.fb
    acts = [ModuleMap.identity(car)]
    for _ in range(fb - 1):
        acts.append(Mc.module.act @ acts[-1])
    full = []
    for g in gens:
        for a in acts:
            full.append(a.apply(g))
    # abstract presentation of the submodule S
    cols = [list(v) for v in full]
    gen_mat = LMatrix.from_cols(alg.R, cols, car.rank)
    from .modules import torsion_matrix, module_from_presentation
    from .linalg import kernel as lkernel
    aug = gen_mat.hstack(torsion_matrix(car))
    K = lkernel(aug)
    rel = LMatrix(alg.R, [K.data[i][:] for i in range(len(cols))], len(cols), K.cols)
    pres = module_from_presentation(rel)
    S = pres.module
    incl = ModuleMap(S, car, gen_mat @ pres.sect)
    # S as a B-module: x-action transported through incl (solve generator-wise)
    act_cols = []
    s_elem_cols = [incl.apply(S.gen(k)) for k in range(S.rank)]
    for k in range(S.rank):
        target = Mc.module.act.apply(s_elem_cols[k])
        sol = sub_membership(car, s_elem_cols, target)
        if sol is None:
            return None
        act_cols.append(pres.module.reduce(sol))
    act = ModuleMap(S, S, LMatrix.from_cols(alg.R, act_cols, S.rank))
    Smod = BModule(alg, S, act)
    cs = tensor_bim_bmodule(alg, Mc.coalgebra.bi, Smod)
    # solve (id (x) incl) . rho_S = rho_M . incl columnwise
    from .modules import map_tensor
    flat = map_tensor(cs.TR, ModuleMap.identity(Mc.coalgebra.carrier), incl, Mc.cm.TR)
    idincl = ModuleMap(cs.module, Mc.cm.module,
                       Mc.cm.proj.mat @ flat.mat @ cs.sect, validate=False)
    rho_cols = []
    from .linalg import solve as lsolve
    amat = idincl.mat.hstack(torsion_matrix(Mc.cm.module))
    for k in range(S.rank):
        rhs = list(Mc.rho.apply(incl.apply(S.gen(k))))
        sol = lsolve(amat, rhs)
        if sol is None:
            return None
        rho_cols.append(cs.module.reduce(sol[:cs.module.rank]))
    rho = ModuleMap(S, cs.module, LMatrix.from_cols(alg.R, rho_cols, cs.module.rank))
    try:
        return comodule_check(Mc.coalgebra, Smod, rho)
    except AxiomError:
        return None
