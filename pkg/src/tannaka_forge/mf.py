"""Filtered F-modules over the truncated Witt ring W_n = GR(p^n, f).

An object is a W-module M of finite length with a decreasing filtration
Fil^lo = M >= Fil^{lo+1} >= ... >= Fil^hi >= Fil^{hi+1} = 0 (the finite
window encodes exhaustive and separated) and sigma-semilinear maps
phi^i : Fil^i -> M, stored as matrices with phi^i(v) = Phi^i . sigma(v)
(sigma applied coordinatewise), subject to phi^i restricted to Fil^{i+1}
being p . phi^{i+1}.

The colimit module Mbar is the quotient of the slot sum by the relations
incl(x) at slot i-1  =  p.x at slot i; slots below the window are redundant
(each such relation eliminates its own slot), so the finite window loses
nothing.  len(Mbar) = len(M) is asserted on every call as a runtime
cross-check of the relation convention.

Hom spaces are solved over R = Z/p^n, not W: sigma-semilinearity makes the
phi-compatibility constraint only R-linear, which is exactly why base
coalgebras over B = W_n (rather than plain W_n-coalgebras) appear when these
categories are fed to the coend machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import RingSpec, ring_make
from .linalg import Matrix, solve, block_diag
from .modules import (FinModule, ModuleMap, NotWellDefined, direct_sum,
                      torsion_matrix, module_from_presentation,
                      presentation_with_torsion, hom_module, map_kernel,
                      is_isomorphism, is_surjective)
from .algebra import AlgebraSpec
from .tannaka import DiagObject, DiagramCategory, hom_closure


class MFError(ValueError):
    def __init__(self, code: str, witness=None, detail: str = ""):
        self.code = code
        self.witness = witness
        super().__init__("%s%s%s" % (code,
                                     " witness=%r" % (witness,) if witness is not None else "",
                                     " " + detail if detail else ""))


def _sigma_mat(W: RingSpec, mat: Matrix) -> Matrix:
    """Frobenius applied entrywise."""
    fr = W.frobenius
    return Matrix(W, [[fr(a) for a in row] for row in mat.data], mat.rows, mat.cols)


@dataclass
class SemilinearMap:
    """v |-> mat . sigma(v) between modules over W; twist tracks the power
    of sigma, with composition (A, s).(B, t) = (A . sigma^s(B), s + t)."""
    src: FinModule
    dst: FinModule
    mat: Matrix
    twist: int = 1

    def __post_init__(self):
        # same congruence constraints as a linear map (sigma fixes p-powers)
        ModuleMap(self.src, self.dst, self.mat)
        self.mat = ModuleMap(self.src, self.dst, self.mat).mat

    def apply(self, v):
        W = self.src.ring
        tw = [v[i] for i in range(len(v))]
        for _ in range(self.twist % W.f if W.f > 1 else 0):
            tw = [W.frobenius(a) for a in tw]
        return self.dst.reduce(self.mat.apply(tw))

    def after_linear(self, g: ModuleMap) -> "SemilinearMap":
        """self . g  (apply g first)."""
        W = self.src.ring
        gm = g.mat
        for _ in range(self.twist % W.f if W.f > 1 else 0):
            gm = _sigma_mat(W, gm)
        return SemilinearMap(g.src, self.dst, self.mat @ gm, self.twist)

    def scale(self, c: int) -> "SemilinearMap":
        return SemilinearMap(self.src, self.dst, self.mat.scale(c), self.twist)

    def linear_part(self) -> ModuleMap:
        return ModuleMap(self.src, self.dst, self.mat)

    def __eq__(self, other):
        if not isinstance(other, SemilinearMap):
            return NotImplemented
        return (self.src == other.src and self.dst == other.dst
                and self.mat == other.mat and self.twist == other.twist)


class FilteredFModule:
    """Validated filtered F-module; construct through mf_make."""

    def __init__(self, W, M, lo, hi, fil, phi, eps, span_ok):
        self.W = W
        self.M = M
        self.lo = lo
        self.hi = hi
        self.fil = fil          # i -> ModuleMap F_i -> M (injective)
        self.phi = phi          # i -> SemilinearMap F_i -> M
        self.eps = eps          # i -> ModuleMap F_i -> F_{i-1}, lo < i <= hi
        self.span_ok = span_ok

    def __repr__(self):
        return "mf(M=%r, window %d..%d)" % (self.M, self.lo, self.hi)


def _factor_through(incl: ModuleMap, other: ModuleMap) -> ModuleMap | None:
    """g with incl . g = other (unique when incl is injective)."""
    M = incl.dst
    aug = incl.mat.hstack(torsion_matrix(M))
    cols = []
    for k in range(other.src.rank):
        target = list(other.apply(other.src.gen(k)))
        sol = solve(aug, target)
        if sol is None:
            return None
        cols.append(incl.src.reduce(sol[:incl.src.rank]))
    mat = Matrix.from_cols(incl.src.ring, cols, incl.src.rank)
    return ModuleMap(other.src, incl.src, mat)


def mf_make(W: RingSpec, M: FinModule, lo: int, hi: int,
            fil: dict[int, ModuleMap], phi: dict[int, Matrix],
            require_span: bool = True) -> FilteredFModule:
    """Validate and construct; MFError names the first violated clause."""
    if M.ring != W:
        raise MFError("NotAnnihilated", detail="module is not over W")
    if lo > hi:
        raise MFError("WindowViolation", detail="empty filtration window")
    if set(fil) != set(range(lo, hi + 1)) or set(phi) != set(range(lo, hi + 1)):
        raise MFError("WindowViolation", detail="fil/phi must cover lo..hi")
    for i, inc in fil.items():
        if inc.dst != M:
            raise MFError("WindowViolation", (i,), "inclusion target is not M")
        K, _ = map_kernel(inc)
        if not K.is_zero():
            raise MFError("WindowViolation", (i,), "inclusion is not injective")
    if not is_surjective(fil[lo]):
        raise MFError("WindowViolation", (lo,), "Fil^lo must be all of M")
    # decreasing: Fil^{i+1} inside Fil^i, recording the factorizations
    eps = {}
    for i in range(lo, hi):
        e = _factor_through(fil[i], fil[i + 1])
        if e is None:
            raise MFError("NotDecreasing", (i + 1,))
        eps[i + 1] = e
    # phi well-formed (congruences) and compatible
    semi = {}
    for i in range(lo, hi + 1):
        try:
            semi[i] = SemilinearMap(fil[i].src, M, phi[i])
        except NotWellDefined as exc:
            raise MFError("PhiIncompatible", (i,),
                          "phi^%d is not a morphism: %s" % (i, exc)) from exc
    for i in range(lo, hi):
        lhs = semi[i].after_linear(eps[i + 1])
        rhs = semi[i + 1].scale(W.p_elem(1))
        if lhs != rhs:
            w = next((k for k in range(lhs.src.rank)
                      if lhs.apply(lhs.src.gen(k)) != rhs.apply(rhs.src.gen(k))), 0)
            raise MFError("PhiIncompatible", (i, w))
    span_ok = _span_check(W, M, semi)
    if require_span and not span_ok:
        raise MFError("SpanFails")
    return FilteredFModule(W, M, lo, hi, dict(fil), semi, eps, span_ok)


def _span_check(W, M, semi) -> bool:
    cols = None
    for i, s in sorted(semi.items()):
        cols = s.mat if cols is None else cols.hstack(s.mat)
    if cols is None:
        cols = Matrix.zeros(W, M.rank, 0)
    pres = presentation_with_torsion(M, cols)
    return pres.module.is_zero()


@dataclass
class MBarResult:
    Mbar: FinModule
    phibar: SemilinearMap        # Mbar -> M (target carries the sigma twist)
    slotmaps: dict[int, ModuleMap]


def mbar(X: FilteredFModule) -> MBarResult:
    """Colimit of the filtration zigzag, with the induced map to M."""
    W = X.W
    slots = list(range(X.lo, X.hi + 1))
    mods = [X.fil[i].src for i in slots]
    sd = direct_sum(mods)
    rel_cols = []
    for idx, i in enumerate(slots):
        if i == X.lo:
            continue
        for k in range(X.fil[i].src.rank):
            g = X.fil[i].src.gen(k)
            a = sd.injections[idx - 1].apply(X.eps[i].apply(g))
            b = sd.injections[idx].apply(g)
            col = [W.sub(x, W.mul(W.p_elem(1), y)) for x, y in zip(a, b)]
            rel_cols.append(col)
    if rel_cols:
        rel = Matrix(W, [list(r) for r in zip(*rel_cols)], sd.module.rank,
                     len(rel_cols))
    else:
        rel = Matrix.zeros(W, sd.module.rank, 0)
    pres = presentation_with_torsion(sd.module, rel)
    Mbar = pres.module
    # the blockwise semilinear map descends: check it kills the relations
    phi_s = Matrix.zeros(W, X.M.rank, sd.module.rank)
    for idx, i in enumerate(slots):
        blk = X.phi[i].mat @ sd.projections[idx].mat
        phi_s = phi_s + blk
    for col in rel_cols:
        tw = [W.frobenius(a) for a in col] if W.f > 1 else list(col)
        if any(X.M.reduce(phi_s.apply(tw))):
            raise RuntimeError("internal error: phibar does not descend")
    sect_tw = _sigma_mat(W, pres.sect) if W.f > 1 else pres.sect
    phibar = SemilinearMap(Mbar, X.M, phi_s @ sect_tw)
    slotmaps = {i: ModuleMap(X.fil[i].src, Mbar,
                             pres.proj @ _embed_mat(sd, idx))
                for idx, i in enumerate(slots)}
    if Mbar.length() != X.M.length():
        raise RuntimeError("length of the colimit differs from len(M); "
                           "the filtration data is inconsistent")
    return MBarResult(Mbar, phibar, slotmaps)


def _embed_mat(sd, idx) -> Matrix:
    return sd.injections[idx].mat


def is_mf_fl(X: FilteredFModule) -> bool:
    """Fontaine-Laffaille admissible: the induced map Mbar -> M_sigma is an
    isomorphism (equivalently surjective, by the length equality)."""
    mb = mbar(X)
    return is_isomorphism(mb.phibar.linear_part())


def phibar_surjective(X: FilteredFModule) -> bool:
    return is_surjective(mbar(X).phibar.linear_part())


def is_mf_proj(X: FilteredFModule) -> bool:
    return X.M.is_free() and is_mf_fl(X)


# ---------------------------------------------------------------------------
# standard objects and direct sums
# ---------------------------------------------------------------------------

def tate_object(W: RingSpec, k: int) -> FilteredFModule:
    """M(k): rank-one free module, Fil^i = M for i <= k, 0 above, with
    phi^k the identity and phi^i = p^{k-i} below."""
    M = FinModule.free(W, 1)
    ident = ModuleMap.identity(M)
    fil = {i: ident for i in range(0, k + 1)}
    phi = {i: Matrix.from_rows(W, [[W.p_elem(k - i) if k - i < W.n else 0]])
           for i in range(0, k + 1)}
    return mf_make(W, M, 0, k, fil, phi)


def mf_direct_sum(X: FilteredFModule, Y: FilteredFModule) -> FilteredFModule:
    if X.W != Y.W:
        raise MFError("NotAnnihilated", detail="summands over different rings")
    W = X.W
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    Xe = _extend_window(X, lo, hi)
    Ye = _extend_window(Y, lo, hi)
    sd = direct_sum([X.M, Y.M])
    fil, phi = {}, {}
    for i in range(lo, hi + 1):
        fs = direct_sum([Xe[0][i].src, Ye[0][i].src])
        inc = (sd.injections[0] @ Xe[0][i] @ fs.projections[0]) + \
              (sd.injections[1] @ Ye[0][i] @ fs.projections[1])
        fil[i] = inc
        pm = (sd.injections[0].mat @ Xe[1][i].mat @ fs.projections[0].mat) + \
             (sd.injections[1].mat @ Ye[1][i].mat @ fs.projections[1].mat)
        phi[i] = pm
    return mf_make(W, sd.module, lo, hi, fil, phi,
                   require_span=X.span_ok and Y.span_ok)


def _extend_window(X: FilteredFModule, lo: int, hi: int):
    """fil and phi dicts over a larger window: Fil^i = M with
    phi^i = p^{lo_X - i} phi^{lo_X} below, zero above."""
    W = X.W
    fil = dict(X.fil)
    phi = {i: s for i, s in X.phi.items()}
    for i in range(lo, X.lo):
        fil[i] = X.fil[X.lo]
        k = X.lo - i
        phi[i] = X.phi[X.lo].scale(W.p_elem(k) if k < W.n else 0)
    zero = FinModule.zero(W)
    for i in range(X.hi + 1, hi + 1):
        fil[i] = ModuleMap.zero(zero, X.M)
        phi[i] = SemilinearMap(zero, X.M, Matrix.zeros(W, X.M.rank, 0))
    return fil, phi


# ---------------------------------------------------------------------------
# hom solver over R = Z/p^n
# ---------------------------------------------------------------------------

class _RCarrier:
    """A W-module seen as a Z/p^n-module with the x-action of W."""

    def __init__(self, alg: AlgebraSpec, wmod: FinModule):
        self.alg = alg
        self.wmod = wmod
        f = alg.fb
        exps = []
        for e in wmod.exps:
            exps.extend([e] * f)
        self.rmod = FinModule(alg.R, tuple(exps))
        blocks = []
        sblocks = []
        for e in wmod.exps:
            blocks.append(Matrix(alg.R, [[alg.R.reduce_exp(a, e) for a in row]
                                         for row in alg._xmat.data], f, f))
            scols = [alg.B.coeffs(alg.B.frobenius(alg.B.pow(alg.B.x, g)))
                     for g in range(f)]
            sblocks.append(Matrix(alg.R, [[alg.R.reduce_exp(c, e) for c in row]
                                          for row in zip(*scols)], f, f))
        if blocks:
            self.act = ModuleMap(self.rmod, self.rmod, block_diag(alg.R, blocks))
            self.sigma = ModuleMap(self.rmod, self.rmod, block_diag(alg.R, sblocks))
        else:
            z = Matrix.zeros(alg.R, 0, 0)
            self.act = ModuleMap(self.rmod, self.rmod, z, validate=False)
            self.sigma = ModuleMap(self.rmod, self.rmod, z, validate=False)

    def w2r_map(self, src: "_RCarrier", wmat: Matrix) -> ModuleMap:
        """The R-matrix of a W-matrix src.wmod -> self.wmod."""
        alg = self.alg
        f = alg.fb
        out = Matrix.zeros(alg.R, self.rmod.rank, src.rmod.rank)
        for t in range(self.wmod.rank):
            for s in range(src.wmod.rank):
                b = wmat.data[t][s]
                if b == 0:
                    continue
                blk = alg.regular_rep(b)
                for d in range(f):
                    for g in range(f):
                        out.data[t * f + d][s * f + g] = blk.data[d][g]
        return ModuleMap(src.rmod, self.rmod, out)

    def r2w_map(self, src: "_RCarrier", rmap: ModuleMap) -> Matrix:
        """Inverse of w2r_map for x-commuting maps (verified)."""
        alg = self.alg
        f = alg.fb
        out = Matrix.zeros(alg.B, self.wmod.rank, src.wmod.rank)
        for t in range(self.wmod.rank):
            for s in range(src.wmod.rank):
                coeffs = [rmap.mat.data[t * f + d][s * f] for d in range(f)]
                out.data[t][s] = alg.B.from_coeffs(coeffs)
        if self.w2r_map(src, out).mat != rmap.mat:
            raise ValueError("map is not W-linear")
        return out


def mf_hom(X: FilteredFModule, Y: FilteredFModule):
    """All MF-morphisms X -> Y: W-linear g with g(Fil^i) inside Fil^i and
    phi^i_Y . g_i = g . phi^i_X, solved as one R-linear system.

    Returns (module over Z/p^n, basis of ModuleMap over W, alg).
    """
    if X.W != Y.W:
        raise MFError("NotAnnihilated", detail="objects over different rings")
    W = X.W
    alg = AlgebraSpec(ring_make(W.p, W.n, 1), W)
    lo, hi = min(X.lo, Y.lo), max(X.hi, Y.hi)
    filX, phiX = _extend_window(X, lo, hi)
    filY, phiY = _extend_window(Y, lo, hi)
    carMX, carMY = _RCarrier(alg, X.M), _RCarrier(alg, Y.M)
    carFX = {i: _RCarrier(alg, filX[i].src) for i in range(lo, hi + 1)}
    carFY = {i: _RCarrier(alg, filY[i].src) for i in range(lo, hi + 1)}
    # unknowns: g plus one g_i per filtration step
    unknowns = [hom_module(carMX.rmod, carMY.rmod)]
    for i in range(lo, hi + 1):
        unknowns.append(hom_module(carFX[i].rmod, carFY[i].rmod))
    blocks = direct_sum([h.module for h in unknowns])
    # targets: x-commutators, inclusion factorizations, phi compatibility
    targets = [hom_module(carMX.rmod, carMY.rmod)]
    for i in range(lo, hi + 1):
        targets.append(hom_module(carFX[i].rmod, carFY[i].rmod))
    for i in range(lo, hi + 1):
        targets.append(hom_module(carFX[i].rmod, carMY.rmod))
        targets.append(hom_module(carFX[i].rmod, carMY.rmod))
    tsum = direct_sum([t.module for t in targets])
    iotaX = {i: carMX.w2r_map(carFX[i], filX[i].mat) for i in range(lo, hi + 1)}
    iotaY = {i: carMY.w2r_map(carFY[i], filY[i].mat) for i in range(lo, hi + 1)}
    phiXr = {i: carMX.w2r_map(carFX[i], phiX[i].mat) @ carFX[i].sigma
             for i in range(lo, hi + 1)}
    phiYr = {i: carMY.w2r_map(carFY[i], phiY[i].mat) @ carFY[i].sigma
             for i in range(lo, hi + 1)}

    def conditions(slot: int, h: ModuleMap):
        """Images of a basis map in the stacked target module."""
        out = tsum.module.zero_elem()
        nfil = hi - lo + 1
        if slot == 0:
            d = (h @ carMX.act) - (carMY.act @ h)
            out = tsum.module.add(out, tsum.injections[0].apply(targets[0].coords(d)))
            for idx, i in enumerate(range(lo, hi + 1)):
                c = -(h @ iotaX[i])
                out = tsum.module.add(out, tsum.injections[1 + nfil + 2 * idx]
                                      .apply(targets[1 + nfil + 2 * idx].coords(c)))
                dphi = -(h @ phiXr[i])
                out = tsum.module.add(out, tsum.injections[2 + nfil + 2 * idx]
                                      .apply(targets[2 + nfil + 2 * idx].coords(dphi)))
        else:
            i = lo + slot - 1
            idx = slot - 1
            d = (h @ carFX[i].act) - (carFY[i].act @ h)
            out = tsum.module.add(out, tsum.injections[slot].apply(targets[slot].coords(d)))
            c = iotaY[i] @ h
            out = tsum.module.add(out, tsum.injections[1 + nfil + 2 * idx]
                                  .apply(targets[1 + nfil + 2 * idx].coords(c)))
            dphi = phiYr[i] @ h
            out = tsum.module.add(out, tsum.injections[2 + nfil + 2 * idx]
                                  .apply(targets[2 + nfil + 2 * idx].coords(dphi)))
        return out

    cols = []
    for slot, h in enumerate(unknowns):
        for b in h.basis:
            cols.append(conditions(slot, b))
    if cols:
        mat = Matrix(alg.R, [list(r) for r in zip(*cols)], tsum.module.rank,
                     len(cols))
    else:
        mat = Matrix.zeros(alg.R, tsum.module.rank, 0)
    phimap = ModuleMap(blocks.module, tsum.module, mat, validate=False)
    K, incl = map_kernel(phimap)
    basis = []
    for k in range(K.rank):
        coords = blocks.projections[0].apply(incl.apply(K.gen(k)))
        g_r = unknowns[0].from_coords(coords)
        wmat = carMY.r2w_map(carMX, g_r)
        basis.append(ModuleMap(X.M, Y.M, wmat))
    return K, basis, alg


# ---------------------------------------------------------------------------
# export to the Tannaka pipeline
# ---------------------------------------------------------------------------

def mf_to_diagram(objects: list[FilteredFModule], names=None):
    """Diagram with R = Z/p^n, B = W_n, fibers the underlying free modules
    and homs the solver bases; closure of the raw bases is verified, then
    hom sets are put in canonical form."""
    if not objects:
        raise MFError("WindowViolation", detail="empty object list")
    W = objects[0].W
    for X in objects:
        if not X.M.is_free() or not is_mf_fl(X):
            raise MFError("SpanFails", detail="object is not in MF_proj")
    alg = AlgebraSpec(ring_make(W.p, W.n, 1), W)
    if names is None:
        names = ["M%d" % i for i in range(len(objects))]
    objs = [DiagObject(nm, X.M.rank) for nm, X in zip(names, objects)]
    homs = {}
    for i, Xi in enumerate(objects):
        for j, Xj in enumerate(objects):
            _, basis, _ = mf_hom(Xi, Xj)
            homs[(i, j)] = [g.mat for g in basis]
    D = DiagramCategory(alg, objs, homs)
    if not D.is_closed():
        raise RuntimeError("internal error: MF hom bases are not "
                           "composition-closed")
    return hom_closure(D)


# ---------------------------------------------------------------------------
# colimit probes
# ---------------------------------------------------------------------------

@dataclass
class ColimitProbe:
    """A finite diagram among MF objects: nodes index the objects list;
    edges are (src_node, dst_node, W-matrix between the fibers)."""
    nodes: list[int]
    edges: list[tuple[int, int, Matrix]]


def mf_colimit_probe(objects: list[FilteredFModule], probe: ColimitProbe) -> dict:
    """Build the fiber colimit; when it is free over W, construct the MF
    structure the colimit recipe induces and validate it.  Verdicts:
    verified / not-applicable (fiber colimit not free) / refuted."""
    W = objects[0].W
    nodes = [objects[i] for i in probe.nodes]
    sd = direct_sum([X.M for X in nodes])
    cols = []
    for (s, d, F) in probe.edges:
        for k in range(nodes[s].M.rank):
            g = nodes[s].M.gen(k)
            a = sd.injections[d].apply(nodes[d].M.reduce(F.apply(list(g))))
            b = sd.injections[s].apply(g)
            cols.append([W.sub(x, y) for x, y in zip(a, b)])
    rel = Matrix.from_cols(W, cols, sd.module.rank)
    pres = presentation_with_torsion(sd.module, rel)
    colim = pres.module
    if not colim.is_free():
        return {"verdict": "not-applicable", "fiber_colimit": colim.exps}
    # induced filtration: Fil^i = image of the slotwise Fil^i; induced phi
    lo = min(X.lo for X in nodes)
    hi = max(X.hi for X in nodes)
    ext = [_extend_window(X, lo, hi) for X in nodes]
    proj = ModuleMap(sd.module, colim, pres.proj)
    fil, phi = {}, {}
    for i in range(lo, hi + 1):
        gens = []
        vals = []
        for t, X in enumerate(nodes):
            filX, phiX = ext[t]
            for k in range(filX[i].src.rank):
                g = filX[i].src.gen(k)
                gens.append(proj.apply(sd.injections[t].apply(filX[i].apply(g))))
                vals.append(_push_phi(X, phiX, i, g, sd, t, proj))
        sub = _abstract_submodule(colim, gens)
        if sub is None:
            return {"verdict": "refuted", "reason": "filtration step failed"}
        S, incl, coords_of = sub
        cols_phi = []
        for k in range(S.rank):
            cs = coords_of(incl.apply(S.gen(k)))
            if cs is None:
                return {"verdict": "refuted", "reason": "phi lift failed"}
            acc = [0] * colim.rank
            for c, val in zip(cs, vals):
                if c:
                    cf = W.frobenius(c) if W.f > 1 else c
                    for r, v in enumerate(val):
                        acc[r] = W.add(acc[r], W.mul(cf, v))
            cols_phi.append(colim.reduce(acc))
        phi[i] = Matrix.from_cols(W, cols_phi, colim.rank)
        fil[i] = incl
    try:
        Xc = mf_make(W, colim, lo, hi, fil, phi)
    except MFError as e:
        return {"verdict": "refuted", "reason": str(e)}
    return {"verdict": "verified", "colimit": Xc,
            "fiber_colimit": colim.exps}


def _push_phi(X, phiX, i, g, sd, t, proj):
    return proj.apply(sd.injections[t].apply(
        X.M.reduce(phiX[i].apply(g))))


def _abstract_submodule(M: FinModule, gens):
    """(S, incl, coords_of) presenting the submodule spanned by gens."""
    from .linalg import kernel as lkernel
    W = M.ring
    cols = [list(v) for v in gens]
    gmat = Matrix.from_cols(W, cols, M.rank)
    aug = gmat.hstack(torsion_matrix(M))
    K = lkernel(aug)
    relm = Matrix(W, [K.data[i][:] for i in range(len(cols))], len(cols), K.cols)
    pres = module_from_presentation(relm)
    incl = ModuleMap(pres.module, M, gmat @ pres.sect)

    solve_aug = gmat.hstack(torsion_matrix(M))

    def coords_of(v):
        sol = solve(solve_aug, list(v))
        return None if sol is None else sol[:len(cols)]

    return pres.module, incl, coords_of
