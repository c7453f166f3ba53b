"""The recollement Mod P -> Mod R -> Mod S and the functors built from it.

For an S-module M

    (K_R M)(x) = Hom_S(T_x, M),          T_x = R(?, x) restricted to S,
    (K_L M)(x) = M (x)_S U_x,            U_x = R(x, ?) restricted to S,

and the canonical map K_L M -> K_R M sends m (x) p to t |-> M(p o t) m.
K_LR is its image, KK its kernel and CK its cokernel.

R and S are infinite-dimensional, so T_x and U_x are only known up to the
degree bound N of the build.  Suppose every S-morphism of degree > A acts by
zero on M and T_x (resp. U_x) is generated in degrees <= G.  Then every
element of degree > N is a combination of generators times morphisms of degree
> N - G, and if N >= G + A every homomorphism kills it: the truncated Hom and
tensor product are exact.  Otherwise :class:`TruncationError` is raised.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field

from .linalg import Field, QQ
from .orbitcat import BuildConfig, PresentedCategory, build_P, build_R, build_S, gabriel, path_morphism
from .quiver import (AutoSpec, Configuration, DynkinQuiver, ZVertex, sigma, sigma_shift, tau)
from .reps import (ModuleError, ModuleMap, Representation, dual, free_module, hom, injective_decomposition,
                   is_isomorphic, max_acting_degree, projective_decomposition, restrict, subrep,
                   to_quotient, top_dims)


class TruncationError(ModuleError):
    """The degree bound of the build is too small for an exact answer."""


# --------------------------------------------------------------------------
# an instance: R, S, P and the restricted representables
# --------------------------------------------------------------------------

class KanContext:
    """R, S and P of one (Q, C, F) together with T_x and U_x."""

    def __init__(self, r: PresentedCategory):
        self.r = r
        self.s = build_S(r)
        self.field: Field = r.field
        self.frozen_objects = list(self.s.parent_objects)
        self.nonfrozen_objects = [x for x in r.objects if not r.frozen[x]]
        self._T, self._G = {}, {}
        self._p = None
        self._op = None

    @classmethod
    def build(cls, quiver: DynkinQuiver, config: Configuration | None = None, auto: AutoSpec | None = None,
              field: Field = QQ, max_degree: int | None = None, check: bool = True) -> "KanContext":
        cfg = BuildConfig(quiver, config or Configuration.all(), auto or AutoSpec.tau(), field,
                          max_degree, check)
        return cls(build_R(cfg))

    @property
    def p(self) -> PresentedCategory:
        if self._p is None:
            self._p = build_P(self.r)
        return self._p

    @property
    def bound(self) -> int | None:
        return self.r.max_degree

    def op(self) -> "KanContext":
        """The same instance for R^op (S^op is its frozen part)."""
        if self._op is None:
            rop = self.r.opposite()
            rop._S = self.s.opposite()
            ctx = KanContext(rop)
            ctx._op = self
            self._op = ctx
        return self._op

    def T(self, x: int) -> Representation:
        """R(?, x) restricted to S, graded by degree."""
        t = self._T.get(x)
        if t is None:
            t = restrict(free_module(self.r, x), self.s)
            self._T[x] = t
        return t

    def generation_degree(self, x: int) -> int:
        g = self._G.get(x)
        if g is None:
            t = self.T(x)
            from .reps import radical_basis
            rad = radical_basis(t)
            g = -1
            for s in self.s.objects:
                kept, _ = self.field.complement(rad[s], t.dims[s])
                for k in kept:
                    g = max(g, t.grading[s][k])
            self._G[x] = g
        return g

    def check_headroom(self, M: Representation, side: str = "right"):
        """Raise TruncationError unless N >= G + A for every object."""
        if self.bound is None:
            return
        A = max_acting_degree(M)
        if A < 0:
            return
        ctx = self if side == "right" else self.op()
        G = max(ctx.generation_degree(x) for x in self.r.objects)
        if self.bound < G + A:
            raise TruncationError(f"degree bound {self.bound} < {G} + {A} needed for an exact "
                                  f"{side} Kan extension; rebuild with max_degree >= {G + A}")

    def required_degree(self, M: Representation) -> int:
        A = max(max_acting_degree(M), 0)
        G = max(max(self.generation_degree(x), self.op().generation_degree(x)) for x in self.r.objects)
        return G + A

    # ------------------------------------------------------------------
    def sigma_P(self, x: int) -> int:
        """Sigma on objects of P (indices into P.labels)."""
        p, q, zqc = self.p, self.r.zqc.q, self.r.zqc
        return p.labels.index(zqc.canonical_rep(sigma_shift(q, p.labels[x], 1)))

    def tau_P(self, x: int) -> int:
        zqc = self.r.zqc
        return self.p.labels.index(zqc.canonical_rep(tau(self.p.labels[x])))

    def frozen_of(self, x: int) -> int | None:
        """S-index of sigma(x) for a P-object x, or None when x is not in C."""
        zqc = self.r.zqc
        v = zqc.canonical_rep(sigma(self.p.labels[x]))
        labels = self.s.labels
        return labels.index(v) if v in labels else None


# --------------------------------------------------------------------------
# the Kan extensions
# --------------------------------------------------------------------------

def _flat(mats, F):
    ent = []
    for m in mats:
        ent.extend(m.entries())
    return F.mat(len(ent), 1, ent)


@dataclass
class RightKan:
    module: Representation
    hom_bases: list  # per R-object: matrix whose columns are flattened maps T_x -> M


def kan_right(ctx: KanContext, M: Representation, check: bool = True) -> Representation:
    """K_R M as an R-module; ``K.hom_bases[x]`` keeps the Hom_S(T_x, M) basis."""
    r, F = ctx.r, ctx.field
    if M.cat is not ctx.s:
        raise ModuleError("module does not live on S")
    if check:
        ctx.check_headroom(M, "right")
    fro = ctx.frozen_objects
    bases, dims = [], []
    for x in r.objects:
        T = ctx.T(x)
        H = hom(T, M)
        n = sum(T.dims[s] * M.dims[s] for s in ctx.s.objects)
        bases.append(F.hstack([h.flat() for h in H], n) if H else F.zeros(n, 0))
        dims.append(len(H))
    g = gabriel(r)
    arrows = []
    for (_, y, x, k, _) in g.arrows:
        # phi |-> phi o T(a), T(a): T_y -> T_x is g |-> a o g
        cols = []
        if dims[x] and dims[y]:
            Tx, Ty = ctx.T(x), ctx.T(y)
            for j in range(dims[x]):
                col = F.columns(bases[x], [j])
                pieces, o = [], 0
                for s in ctx.s.objects:
                    ms, tx = M.dims[s], Tx.dims[s]
                    phi = F.mat(ms, tx, [col[o + i, 0] for i in range(ms * tx)])
                    o += ms * tx
                    pieces.append(phi * r.post[(fro[s], y, x)][k])
                cols.append(_flat(pieces, F))
            arrows.append(F.coordinates(bases[y], F.hstack(cols, bases[y].nrows())))
        else:
            arrows.append(F.zeros(dims[y], dims[x]))
    K = Representation(r, dims, arrows, check=False)
    K.hom_bases = bases
    return K


def kan_right_map(ctx: KanContext, f: ModuleMap, KN: Representation, KM: Representation) -> ModuleMap:
    """K_R f: K_R N -> K_R M for f: N -> M (post-composition with f)."""
    F = ctx.field
    N, M = f.source, f.target
    mats = []
    for x in ctx.r.objects:
        T = ctx.T(x)
        cols = []
        for j in range(KN.dims[x]):
            col = KN.hom_bases[x].entries()
            nc = KN.hom_bases[x].ncols()
            pieces, o = [], 0
            for s in ctx.s.objects:
                ns, ts = N.dims[s], T.dims[s]
                phi = F.mat(ns, ts, [col[(o + i) * nc + j] for i in range(ns * ts)])
                o += ns * ts
                pieces.append(f.mats[s] * phi)
            cols.append(_flat(pieces, F))
        if cols:
            mats.append(F.coordinates(KM.hom_bases[x], F.hstack(cols, KM.hom_bases[x].nrows())))
        else:
            mats.append(F.zeros(KM.dims[x], 0))
    return ModuleMap(KN, KM, mats)


def kan_left(ctx: KanContext, M: Representation, check: bool = True) -> Representation:
    """K_L M by the coend (+)_s M(s) (x) R(x, s) / <M(b) m (x) p - m (x) b o p>."""
    r, s, F = ctx.r, ctx.s, ctx.field
    if M.cat is not s:
        raise ModuleError("module does not live on S")
    if check:
        ctx.check_headroom(M, "left")
    fro = ctx.frozen_objects
    gs = gabriel(s)
    layout, dims, kept_all, proj_all = [], [], [], []
    for x in r.objects:
        offs, o = {}, 0
        for t in s.objects:
            offs[t] = o
            o += M.dims[t] * r.dim(x, fro[t])
        n = o
        rels = []
        for (_, t, t2, kb, _) in gs.arrows:  # b: t -> t2 in S
            mb = M.arrows[gs.arrow_of[(t, t2, kb)]]  # M(t2) -> M(t)
            w1, w2 = r.dim(x, fro[t]), r.dim(x, fro[t2])
            if not M.dims[t2] or not w1:
                continue
            post = r.post[(x, fro[t], fro[t2])][kb]  # p |-> b o p
            for i2 in range(M.dims[t2]):
                for j in range(w1):
                    v = F.zeros(n, 1)
                    for i in range(M.dims[t]):
                        if mb[i, i2] != 0:
                            v[offs[t] + i * w1 + j, 0] += mb[i, i2]
                    for q in range(w2):
                        if post[q, j] != 0:
                            v[offs[t2] + i2 * w2 + q, 0] -= post[q, j]
                    rels.append(v)
        relm = F.hstack(rels, n) if rels else F.zeros(n, 0)
        kept, proj = F.complement(relm, n)
        layout.append(offs)
        kept_all.append(kept)
        proj_all.append(proj)
        dims.append(len(kept))
    g = gabriel(r)
    arrows = []
    for (_, y, x, k, _) in g.arrows:  # a: y -> x; K_L(x) -> K_L(y), m (x) p |-> m (x) p o a
        if not dims[x] or not dims[y]:
            arrows.append(F.zeros(dims[y], dims[x]))
            continue
        ny = proj_all[y].ncols()
        cols = []
        for c in kept_all[x]:
            t, i, j = _coend_index(layout[x], M, r, x, fro, c)
            w = r.dim(x, fro[t])
            pre = r.pre(y, x, fro[t], k)  # R(x, s) -> R(y, s)
            v = F.zeros(ny, 1)
            wy = r.dim(y, fro[t])
            for q in range(wy):
                if pre[q, j] != 0:
                    v[layout[y][t] + i * wy + q, 0] = pre[q, j]
            cols.append(proj_all[y] * v)
        arrows.append(F.hstack(cols, dims[y]))
    K = Representation(r, dims, arrows, check=False)
    K.coend = (layout, kept_all, proj_all)
    return K


def _coend_index(offs, M, r, x, fro, c):
    """(object t, index in M(t), index in R(x, t)) of a coend coordinate."""
    for t in sorted(offs, key=lambda u: offs[u], reverse=True):
        if c >= offs[t] and M.dims[t] and r.dim(x, fro[t]):
            c2 = c - offs[t]
            w = r.dim(x, fro[t])
            return t, c2 // w, c2 % w
    raise AssertionError("coordinate outside the coend")


def kan_left_dual(ctx: KanContext, M: Representation, check: bool = True) -> Representation:
    """K_L M computed as D K_R^{op} D M."""
    return dual(kan_right(ctx.op(), dual(M), check))


def canonical_map(ctx: KanContext, M: Representation, KL: Representation, KR: Representation) -> ModuleMap:
    """K_L M -> K_R M, m (x) p |-> (t |-> M(p o t) m)."""
    r, s, F = ctx.r, ctx.s, ctx.field
    fro = ctx.frozen_objects
    layout, kept_all, _ = KL.coend
    mats = []
    for x in r.objects:
        if not KL.dims[x] or not KR.dims[x]:
            mats.append(F.zeros(KR.dims[x], KL.dims[x]))
            continue
        Tx = ctx.T(x)
        cols = []
        for c in kept_all[x]:
            t, i, j = _coend_index(layout[x], M, r, x, fro, c)
            pieces = []
            for s2 in s.objects:
                tx = Tx.dims[s2]
                phi = F.zeros(M.dims[s2], tx)
                if M.dims[s2] and tx:
                    post = r.post[(fro[s2], x, fro[t])][j]  # t' |-> p o t'
                    for col in range(tx):
                        v = F.columns(post, [col])
                        img = M.act_vec(s2, t, v) * F.unit_column(M.dims[t], i)
                        for a in range(M.dims[s2]):
                            phi[a, col] = img[a, 0]
                pieces.append(phi)
            cols.append(_flat(pieces, F))
        mats.append(F.coordinates(KR.hom_bases[x], F.hstack(cols, KR.hom_bases[x].nrows())))
    return ModuleMap(KL, KR, mats)


def unit_map(ctx: KanContext, N: Representation, KR: Representation | None = None) -> ModuleMap:
    """N -> K_R(res N), n |-> (t |-> N(t) n)."""
    r, s, F = ctx.r, ctx.s, ctx.field
    fro = ctx.frozen_objects
    if KR is None:
        KR = kan_right(ctx, restrict(N, s))
    mats = []
    for x in r.objects:
        if not N.dims[x] or not KR.dims[x]:
            mats.append(F.zeros(KR.dims[x], N.dims[x]))
            continue
        Tx = ctx.T(x)
        cols = []
        for i in range(N.dims[x]):
            pieces = []
            for s2 in s.objects:
                tx = Tx.dims[s2]
                phi = F.zeros(N.dims[fro[s2]], tx)
                for col in range(tx):
                    img = N.act(fro[s2], x, col) * F.unit_column(N.dims[x], i)
                    for a in range(phi.nrows()):
                        phi[a, col] = img[a, 0]
                pieces.append(phi)
            cols.append(_flat(pieces, F))
        mats.append(F.coordinates(KR.hom_bases[x], F.hstack(cols, KR.hom_bases[x].nrows())))
    return ModuleMap(N, KR, mats)


@dataclass
class KanResult:
    module: Representation
    KL: Representation
    KR: Representation
    can: ModuleMap
    KLR: Representation
    KLR_incl: ModuleMap
    KK: Representation
    KK_incl: ModuleMap
    CK: Representation
    CK_proj: ModuleMap

    def dims_json(self) -> dict:
        return {"K_L": list(self.KL.dims), "K_R": list(self.KR.dims), "K_LR": list(self.KLR.dims),
                "KK": list(self.KK.dims), "CK": list(self.CK.dims)}


def kan(ctx: KanContext, M: Representation, check: bool = True) -> KanResult:
    KL = kan_left(ctx, M, check)
    KR = kan_right(ctx, M, check)
    can = canonical_map(ctx, M, KL, KR)
    KLR, incl = can.image()
    KK, kinc = can.kernel()
    CK, proj = can.cokernel()
    return KanResult(M, KL, KR, can, KLR, incl, KK, kinc, CK, proj)


def kan_lr(ctx: KanContext, M: Representation) -> Representation:
    return kan(ctx, M).KLR


def kk(ctx: KanContext, M: Representation, res: KanResult | None = None) -> Representation:
    """KK(M) as a P-module; it must be projective."""
    res = res or kan(ctx, M)
    out = to_quotient(res.KK, ctx.p)
    if projective_decomposition(out) is None:
        raise ModuleError("KK(M) is not a projective P-module")
    return out


def ck(ctx: KanContext, M: Representation, res: KanResult | None = None) -> Representation:
    """CK(M) as a P-module; it must be injective."""
    res = res or kan(ctx, M)
    out = to_quotient(res.CK, ctx.p)
    if injective_decomposition(out) is None:
        raise ModuleError("CK(M) is not an injective P-module")
    return out


# --------------------------------------------------------------------------
# stability
# --------------------------------------------------------------------------

def is_stable(ctx: KanContext, N: Representation) -> bool:
    """The unit N -> K_R res N is injective: no element of N(x) is killed by all t: s -> x, s frozen."""
    r, F = ctx.r, ctx.field
    for x in ctx.nonfrozen_objects:
        if not N.dims[x]:
            continue
        rows = [N.act(s, x, t) for s in ctx.frozen_objects for t in range(r.dim(s, x)) if N.dims[s]]
        if not rows or F.rank(F.vstack(rows, N.dims[x])) < N.dims[x]:
            return False
    return True


def is_costable(ctx: KanContext, N: Representation) -> bool:
    """The counit K_L res N -> N is onto: N(x) is spanned by the images of all p: x -> s."""
    r, F = ctx.r, ctx.field
    for x in ctx.nonfrozen_objects:
        if not N.dims[x]:
            continue
        cols = [N.act(x, s, p) for s in ctx.frozen_objects for p in range(r.dim(x, s)) if N.dims[s]]
        if not cols or F.rank(F.hstack(cols, N.dims[x])) < N.dims[x]:
            return False
    return True


def is_bistable(ctx: KanContext, N: Representation) -> bool:
    return is_stable(ctx, N) and is_costable(ctx, N)


# --------------------------------------------------------------------------
# strata, C_q, multiplicities
# --------------------------------------------------------------------------

def stratum_of(ctx: KanContext, M: Representation, res: KanResult | None = None) -> tuple:
    """v = dims of K_LR M at the non-frozen objects."""
    res = res or kan(ctx, M)
    return res.KLR.v()


def cq_matrix(ctx: KanContext) -> list[list[int]]:
    """C_q on the non-frozen objects: (C_q v)(x) = v(x) - sum_{y -> x} v(y) + v(tau x)."""
    p, zqc = ctx.p, ctx.r.zqc
    labels = list(p.labels)
    n = len(labels)
    mat = [[0] * n for _ in range(n)]
    for a, x in enumerate(labels):
        mat[a][a] += 1
        for y in zqc.predecessors(x):
            if not y.frozen:
                mat[a][labels.index(zqc.canonical_rep(y))] -= 1
        mat[a][labels.index(zqc.canonical_rep(tau(x)))] += 1
    return mat


def cq_apply(ctx: KanContext, v) -> tuple:
    mat = cq_matrix(ctx)
    return tuple(sum(mat[a][b] * v[b] for b in range(len(v))) for a in range(len(v)))


def cq_rank(ctx: KanContext) -> int:
    m = cq_matrix(ctx)
    return QQ.rank(QQ.from_rows(m, len(m))) if m else 0


def w_sigma(ctx: KanContext, w) -> tuple:
    """(w sigma)(x) = w(sigma x) for the non-frozen objects x."""
    out = []
    for x in ctx.p.objects:
        s = ctx.frozen_of(x)
        out.append(w[s] if s is not None else 0)
    return tuple(out)


def multiplicity_vector(ctx: KanContext, M: Representation, res: KanResult | None = None) -> tuple:
    """(w sigma - C_q v) on the non-frozen objects; a negative entry is an error."""
    res = res or kan(ctx, M)
    v, w = res.KLR.v(), res.KLR.w()
    pred = tuple(a - b for a, b in zip(w_sigma(ctx, w), cq_apply(ctx, v)))
    if any(m < 0 for m in pred):
        raise ModuleError(f"negative multiplicity predicted: {pred}")
    return pred


def multiplicity_prediction(ctx: KanContext, M: Representation, res: KanResult | None = None,
                            literal: bool = False) -> Counter:
    """Predicted projective decomposition of KK(M).

    The number m(z) = (w sigma - C_q v)(z) is dim Ext^1(S_z, K_LR M), which is
    the multiplicity of z^v in CK(M) and of (tau z)^ in KK(M).  With
    ``literal=True`` m(z) is assigned to z^ instead; the two agree whenever
    tau fixes the objects of P (F = tau).
    """
    pred = multiplicity_vector(ctx, M, res)
    out = Counter()
    for z, m in enumerate(pred):
        if m:
            out[z if literal else ctx.tau_P(z)] += m
    return out


def ck_prediction(ctx: KanContext, M: Representation, res: KanResult | None = None) -> Counter:
    """Predicted injective decomposition of CK(M): z^v with multiplicity m(z)."""
    return Counter({z: m for z, m in enumerate(multiplicity_vector(ctx, M, res)) if m})


def sigma_of_projectives(ctx: KanContext, dec: Counter) -> Counter:
    """Sigma on proj P: x^ |-> (Sigma x)^."""
    out = Counter()
    for x, m in dec.items():
        out[ctx.sigma_P(x)] += m
    return out


def ck_is_sigma_kk(ctx: KanContext, M: Representation, res: KanResult | None = None) -> bool:
    """CK(M) and Sigma KK(M) are isomorphic (both projective-injective over P)."""
    res = res or kan(ctx, M)
    k = kk(ctx, M, res)
    c = to_quotient(res.CK, ctx.p)
    pk = projective_decomposition(k)
    pc = projective_decomposition(c)
    if pc is None:
        return False
    return sigma_of_projectives(ctx, pk) == pc


# --------------------------------------------------------------------------
# degeneration order and closed orbits
# --------------------------------------------------------------------------

def degeneration_leq(ctx: KanContext, M: Representation, M2: Representation) -> bool:
    """M <= M2 iff stratum(M) <= stratum(M2) componentwise (same w)."""
    if M.dims != M2.dims:
        raise ModuleError("modules have different dimension vectors w")
    return all(a <= b for a, b in zip(stratum_of(ctx, M), stratum_of(ctx, M2)))


@dataclass
class StratumPoint:
    s_part: Representation
    ss_part: Counter = dc_field(default_factory=Counter)

    def to_json(self):
        return {"s_part_dims": list(self.s_part.dims),
                "ss_part": {str(k): v for k, v in sorted(self.ss_part.items())}}


def closed_orbit_normal_form(ctx: KanContext, N: Representation) -> StratumPoint:
    """(res N, semisimple part): the closed orbit K_LR(res N) (+) (+)_x S_x^{m_x}.

    m_x = dim N(x) - dim K_LR(res N)(x).  For stable N the unit embeds N in
    K_R res N with K_LR res N inside, and m counts the composition factors of
    the cokernel; this containment is verified.
    """
    M = restrict(N, ctx.s)
    res = kan(ctx, M)
    if is_stable(ctx, N):
        u = unit_map(ctx, N, res.KR)
        if not u.is_injective():
            raise ModuleError("unit of a stable module is not injective")
        F = ctx.field
        for x in ctx.r.objects:
            a = res.KLR_incl.mats[x]
            b = u.mats[x]
            if a.ncols() and F.rank(F.hstack([b, a], b.nrows())) != F.rank(b):
                raise ModuleError("K_LR res N is not inside N")
    ss = Counter()
    for i, x in enumerate(ctx.nonfrozen_objects):
        m = N.dims[x] - res.KLR.dims[x]
        if m < 0:
            raise ModuleError("K_LR(res N) larger than N")
        if m:
            ss[i] = m
    return StratumPoint(M, ss)


# --------------------------------------------------------------------------
# Q~ arrows (for the tangent map)
# --------------------------------------------------------------------------

def orbit_arrows(ctx: KanContext):
    """Arrows of ZQ_C / F ending at non-frozen fundamental-domain vertices, as R-morphisms.

    Returns ``[(x, [(alpha, alpha_bar), ...]), ...]`` for every non-frozen
    object x, where alpha: y -> x and alpha_bar: tau x -> y are given by
    ``(source, target, coordinates)`` in R.
    """
    r, zqc = ctx.r, ctx.r.zqc
    out = []
    for x in ctx.nonfrozen_objects:
        v = r.labels[x]
        pairs = []
        for y in zqc.predecessors(v):
            pairs.append((path_morphism(r, (y, v)), path_morphism(r, (tau(v), y))))
        out.append((x, pairs))
    return out
