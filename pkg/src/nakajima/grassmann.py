"""Quiver Grassmannians over F_p, fibers of pi and the tangent map.

Subrepresentations are enumerated object by object: a subspace of the right
dimension is chosen at each object (in reduced echelon form, so every subspace
is produced once) and a partial choice is abandoned as soon as one arrow
between two chosen objects leaves it.  The size of the search is bounded by a
product of Gaussian binomials, and exceeding the guard is an error.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kan import (KanContext, KanResult, ck, is_stable, kan, orbit_arrows)
from .linalg import Field, gaussian_binomial
from .reps import (ModuleError, ModuleMap, Representation, cofree_module, direct_sum,
                   find_isomorphism, is_isomorphic, is_nilpotent, radical_basis, restrict,
                   semisimple, subrep)

DEFAULT_GUARD = 10 ** 7


class SizeGuardError(ModuleError):
    """An enumeration would exceed its size guard."""


# --------------------------------------------------------------------------
# subspaces
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _echelon_forms(n: int, k: int, p: int) -> tuple:
    """All k x n reduced echelon matrices over F_p, as flat tuples of ints."""
    out = []
    for piv in itertools.combinations(range(n), k):
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in piv]
        for vals in itertools.product(range(p), repeat=len(free)):
            m = [0] * (k * n)
            for i, j in enumerate(piv):
                m[i * n + j] = 1
            for (i, j), v in zip(free, vals):
                m[i * n + j] = v
            out.append(tuple(m))
    return tuple(out)


def subspaces(F: Field, n: int, k: int):
    """Column bases (n x k) of all k-dimensional subspaces of F_p^n."""
    if not F.p:
        raise ValueError("subspace enumeration needs a finite field")
    for m in _echelon_forms(n, k, F.p):
        yield F.mat(k, n, m).transpose()


def subspace_key(F: Field, basis) -> tuple:
    """Canonical key: the reduced echelon form of the spanned subspace."""
    if basis.ncols() == 0:
        return (basis.nrows(), ())
    r = F.row_space(basis.transpose())
    return (basis.nrows(), tuple(int(e) if F.p else str(e) for e in r.entries()))


def grassmann_size(M: Representation, d) -> int:
    """Number of per-object subspace choices (upper bound on |Gr_d(M)|)."""
    p = M.field.p
    out = 1
    for x in M.cat.objects:
        if not 0 <= d[x] <= M.dims[x]:
            return 0
        out *= gaussian_binomial(M.dims[x], d[x], p)
    return out


# --------------------------------------------------------------------------
# enumeration
# --------------------------------------------------------------------------

@dataclass
class SubrepList:
    ambient: Representation
    d: tuple
    subreps: list  # per-object column bases

    @property
    def count(self) -> int:
        return len(self.subreps)

    def keys(self) -> list:
        F = self.ambient.field
        return [tuple(subspace_key(F, b) for b in s) for s in self.subreps]

    def modules(self):
        for basis in self.subreps:
            yield subrep(self.ambient, basis)[0]


def enumerate_subreps(M: Representation, d, guard: int = DEFAULT_GUARD) -> SubrepList:
    """All subrepresentations of M with dimension vector d (M over F_p)."""
    F = M.field
    d = tuple(d)
    if len(d) != M.cat.n:
        raise ModuleError("dimension vector has the wrong length")
    size = grassmann_size(M, d)
    if size > guard:
        raise SizeGuardError(f"Grassmannian search space {size} exceeds guard {guard}")
    if size == 0:
        return SubrepList(M, d, [])
    # objects ordered so that arrows get checked early
    order = sorted(M.cat.objects, key=lambda x: -M.dims[x])
    pos = {x: i for i, x in enumerate(order)}
    checks = [[] for _ in order]  # arrows whose later endpoint is order[i]
    for i, a in enumerate(M.gab.arrows):
        x, y = a[1], a[2]
        if M.dims[x] and M.dims[y] and d[y]:
            checks[max(pos[x], pos[y])].append(i)
    choices = []
    for x in order:
        opts = []
        for b in subspaces(F, M.dims[x], d[x]):
            _, proj = F.complement(b, M.dims[x])
            opts.append((b, proj))
        choices.append(opts)
    out = []
    chosen = [None] * M.cat.n

    def rec(i):
        if i == len(order):
            out.append([chosen[x][0] for x in M.cat.objects])
            return
        x = order[i]
        for opt in choices[i]:
            chosen[x] = opt
            ok = True
            for ai in checks[i]:
                _, s, t = M.gab.arrows[ai][:3]
                # M(a): M(t) -> M(s) must map U_t into U_s
                img = M.arrows[ai] * chosen[t][0]
                if not F.is_zero(chosen[s][1] * img):
                    ok = False
                    break
            if ok:
                rec(i + 1)
        chosen[x] = None

    rec(0)
    return SubrepList(M, d, out)


def gr_count(M: Representation, d, guard: int = DEFAULT_GUARD) -> int:
    return enumerate_subreps(M, d, guard).count


def gr_nil_count(M: Representation, d, guard: int = DEFAULT_GUARD) -> int:
    return sum(1 for N in enumerate_subreps(M, d, guard).modules() if is_nilpotent(N))


def dimension_vectors(dims):
    """All d with 0 <= d <= dims componentwise."""
    return itertools.product(*(range(n + 1) for n in dims))


# --------------------------------------------------------------------------
# fibers of pi: submodules of CK(M) <-> stable N with res N = M
# --------------------------------------------------------------------------

def fiber_pullback(ctx: KanContext, M: Representation, X, res: KanResult | None = None,
                   check: bool = True) -> Representation:
    """Preimage of X (per-object basis in CK(M) coordinates) under K_R M -> CK(M).

    Returned as a submodule of K_R M (``N.incl`` is the inclusion).
    """
    res = res or kan(ctx, M)
    F = ctx.field
    basis = []
    for x in ctx.r.objects:
        proj = res.CK_proj.mats[x]
        n = res.KR.dims[x]
        xb = X[x]
        if proj.nrows() == 0:
            basis.append(F.eye(n))
            continue
        # v with proj v in span(X): kernel of [proj | -X] projected to the v part
        A = F.hstack([proj, -xb], proj.nrows()) if xb.ncols() else proj
        ker = F.nullspace(A)
        v = F.rows(ker, range(n))
        basis.append(F.column_basis(v) if v.ncols() else F.zeros(n, 0))
    N, incl = subrep(res.KR, basis)
    N.incl = incl
    N.basis = basis
    if check:
        want = tuple(a + b.ncols() for a, b in zip(res.KLR.dims, X))
        if tuple(N.dims) != want:
            raise ModuleError(f"pullback has dims {N.dims}, expected {want}")
        if not is_stable(ctx, N):
            raise ModuleError("pullback is not stable")
        if not is_isomorphic(restrict(N, ctx.s), M):
            raise ModuleError("pullback does not restrict to M")
    return N


def _ck_module(ctx: KanContext, res: KanResult) -> Representation:
    """CK(M) as an R-module (the cokernel computed with the Kan result)."""
    return res.CK


def fiber_points(ctx: KanContext, M: Representation, v, res: KanResult | None = None,
                 guard: int = DEFAULT_GUARD) -> list:
    """Stable N with res N = M and non-frozen dims v, via Gr_{v - v0}(CK(M))."""
    res = res or kan(ctx, M)
    v0 = res.KLR.v()
    d = [0] * ctx.r.n
    for i, x in enumerate(ctx.nonfrozen_objects):
        d[x] = v[i] - v0[i]
        if d[x] < 0:
            return []
    subs = enumerate_subreps(_ck_module(ctx, res), d, guard)
    return [fiber_pullback(ctx, M, X, res) for X in subs.subreps]


def fiber_count(ctx: KanContext, M: Representation, v, res: KanResult | None = None,
                guard: int = DEFAULT_GUARD) -> int:
    """|pi^{-1}(M)| in stratum v: gr_count(CK(M), v - v0), every point certified."""
    return len(fiber_points(ctx, M, v, res, guard))


def direct_fiber_count(ctx: KanContext, M: Representation, v, res: KanResult | None = None,
                       guard: int = DEFAULT_GUARD) -> int:
    """The same number counted inside K_R M.

    Every stable N with res N = M embeds in K_R M through the unit and contains
    K_LR M, so the fiber is the set of submodules of K_R M that are full at the
    frozen objects; each one is checked to be stable and to restrict to M.
    """
    res = res or kan(ctx, M)
    d = list(res.KR.dims)
    for i, x in enumerate(ctx.nonfrozen_objects):
        d[x] = v[i]
    count = 0
    F = ctx.field
    for basis in enumerate_subreps(res.KR, d, guard).subreps:
        N, _ = subrep(res.KR, basis)
        if not is_stable(ctx, N):
            continue
        if not is_isomorphic(restrict(N, ctx.s), M):
            continue
        ok = True
        for x in ctx.r.objects:
            a = res.KLR_incl.mats[x]
            if a.ncols() and F.rank(F.hstack([basis[x], a], a.nrows())) != basis[x].ncols():
                ok = False
        if ok:
            count += 1
    return count


def feasible_strata(ctx: KanContext, M: Representation, res: KanResult | None = None) -> list:
    """All v = v0 + d with d <= dims CK(M) on the non-frozen objects."""
    res = res or kan(ctx, M)
    v0 = res.KLR.v()
    top = res.CK.v()
    return [tuple(a + b for a, b in zip(v0, d)) for d in dimension_vectors(top)]


# --------------------------------------------------------------------------
# the L-variety
# --------------------------------------------------------------------------

def injective_hull_Iw(ctx: KanContext, w) -> Representation:
    """I_w = (+)_x (x^v_P)^{w(sigma x)}, inflated to an R-module."""
    from .reps import inflate

    parts = []
    for x in ctx.p.objects:
        s = ctx.frozen_of(x)
        if s is not None:
            parts.extend([cofree_module(ctx.p, x)] * w[s])
    if not parts:
        from .reps import zero_module
        return inflate(zero_module(ctx.p), ctx.r)
    return inflate(direct_sum(*parts), ctx.r)


def _sigma_incoming(ctx: KanContext) -> list:
    """The R-morphisms tau(x) -> sigma(x) for x in C, as (source, target, coords)."""
    from .orbitcat import path_morphism
    from .quiver import sigma, tau

    r, zqc = ctx.r, ctx.r.zqc
    out = []
    for x in ctx.nonfrozen_objects:
        v = r.labels[x]
        if zqc.in_C(v):
            out.append(path_morphism(r, (tau(v), sigma(v))))
    return out


@dataclass
class LVarietyReport:
    v: tuple
    w: tuple
    count: int
    gr_count: int
    certified: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.certified and self.count == self.gr_count

    def to_json(self):
        return {"v": list(self.v), "w": list(self.w), "count": self.count, "gr_count": self.gr_count,
                "certified": self.certified, "failures": self.failures}


def l_variety_count(ctx: KanContext, v, w, guard: int = DEFAULT_GUARD) -> LVarietyReport:
    """Points of L(v, w) as pullbacks over s_w, checked against Gr_v(I_w).

    Each point N (a stable module with res N = s_w) is checked to be
    nilpotent, to restrict to a semisimple S-module and to have vanishing maps
    along the arrows tau(x) -> sigma(x).
    """
    F = ctx.field
    sw = semisimple(ctx.s, list(w))
    res = kan(ctx, sw)
    Iw = injective_hull_Iw(ctx, w)
    d = [0] * ctx.r.n
    for i, x in enumerate(ctx.nonfrozen_objects):
        d[x] = v[i]
    n_iw = gr_count(Iw, d, guard)
    ckm = res.CK
    phi = find_isomorphism(Iw, ckm)
    if phi is None:
        raise ModuleError("CK(s_w) is not isomorphic to I_w")
    arrows = _sigma_incoming(ctx)
    failures = []
    count = 0
    for X in enumerate_subreps(Iw, d, guard).subreps:
        Y = [phi.mats[x] * X[x] for x in ctx.r.objects]
        N = fiber_pullback(ctx, sw, Y, res)
        count += 1
        why = []
        if not is_nilpotent(N):
            why.append("not nilpotent")
        NS = restrict(N, ctx.s)
        if any(b.ncols() for b in radical_basis(NS)):
            why.append("restriction not semisimple")
        for (a, b, coords) in arrows:
            if not F.is_zero(N.act_vec(a, b, coords)):
                why.append("nonzero map tau(x) -> sigma(x)")
                break
        if why:
            failures.append({"point": count - 1, "why": why})
    return LVarietyReport(tuple(v), tuple(w), count, n_iw, not failures, failures)


# --------------------------------------------------------------------------
# the tangent map of the moment-type map nu
# --------------------------------------------------------------------------

@dataclass
class TangentReport:
    rank: int
    domain_dim: int
    codomain_dim: int
    stable: bool

    @property
    def surjective(self) -> bool:
        return self.rank == self.codomain_dim

    def to_json(self):
        return {"rank": self.rank, "domain_dim": self.domain_dim, "codomain_dim": self.codomain_dim,
                "surjective": self.surjective, "stable": self.stable}


def _mesh_signs(ctx: KanContext, x, pairs) -> list:
    """Coefficients eps with sum eps * (alpha o alpha_bar) = 0 in R(tau x, x)."""
    F = ctx.field
    r = ctx.r
    cols = []
    for (a, b) in pairs:
        # alpha o alpha_bar : tau x -> y -> x
        ya, xa, ca = a
        tb, yb, cb = b
        cols.append(r.compose_vec(ca, cb, tb, yb, xa))
    m = F.hstack(cols, cols[0].nrows())
    ker = F.nullspace(m)
    if ker.ncols() != 1:
        raise ModuleError(f"mesh relation at object {x} is not one-dimensional")
    return [ker[i, 0] for i in range(ker.nrows())]


def tangent_map(ctx: KanContext, N: Representation):
    """The matrix of d nu_N and the list of arrow variables.

    Variables are the matrices N(beta) of all arrows beta of the orbit quiver;
    the target is (+)_x Hom(N(x), N(tau x)) over non-frozen x, and
    d nu(dN)_x = sum eps (dN(alpha_bar) N(alpha) + N(alpha_bar) dN(alpha)).
    """
    F = ctx.field
    arrows = {}
    rows_of = []
    terms = []
    for x, pairs in orbit_arrows(ctx):
        eps = _mesh_signs(ctx, x, pairs)
        tx = pairs[0][1][0]
        for (a, b), e in zip(pairs, eps):
            for arr in (a, b):
                key = (arr[0], arr[1], tuple(str(c) for c in arr[2].entries()))
                if key not in arrows:
                    arrows[key] = (len(arrows), arr)
            terms.append((x, tx, a, b, e))
        rows_of.append((x, tx))
    # variable offsets
    var_off, o = {}, 0
    for key, (i, arr) in sorted(arrows.items(), key=lambda kv: kv[1][0]):
        var_off[key] = o
        o += N.dims[arr[0]] * N.dims[arr[1]]
    nvar = o
    row_off, o = {}, 0
    for (x, tx) in rows_of:
        row_off[x] = o
        o += N.dims[tx] * N.dims[x]
    nrow = o
    D = F.zeros(nrow, nvar)

    def key(arr):
        return (arr[0], arr[1], tuple(str(c) for c in arr[2].entries()))

    for (x, tx, a, b, e) in terms:
        Na = N.act_vec(*a)  # N(x) -> N(y), shape dims[y] x dims[x]
        Nb = N.act_vec(*b)  # N(y) -> N(tau x), shape dims[tx] x dims[y]
        y = a[0]
        ro = row_off[x]
        nx, ny, nt = N.dims[x], N.dims[y], N.dims[tx]
        # dN(alpha_bar) N(alpha): variable entry (i, j) of dN(b) (nt x ny)
        ob = var_off[key(b)]
        for i in range(nt):
            for j in range(ny):
                for c in range(nx):
                    val = Na[j, c]
                    if val != 0:
                        D[ro + i * nx + c, ob + i * ny + j] += e * val
        # N(alpha_bar) dN(alpha): variable entry (j, c) of dN(a) (ny x nx)
        oa = var_off[key(a)]
        for i in range(nt):
            for j in range(ny):
                val = Nb[i, j]
                if val != 0:
                    for c in range(nx):
                        D[ro + i * nx + c, oa + j * nx + c] += e * val
    return D, [arr for _, arr in sorted(arrows.values(), key=lambda t: t[0])]


def tangent_surjectivity_check(ctx: KanContext, N: Representation) -> TangentReport:
    """Rank of d nu_N against the dimension of (+)_x Hom(k^v(x), k^v(tau x))."""
    D, _ = tangent_map(ctx, N)
    return TangentReport(ctx.field.rank(D), D.ncols(), D.nrows(), is_stable(ctx, N))


# --------------------------------------------------------------------------
# modules up to isomorphism (orbit marking)
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gl(n: int, p: int):
    """GL_n(F_p) and the inverses, as integer arrays of shape (|G|, n, n)."""
    if n == 0:
        return np.zeros((1, 0, 0), dtype=np.int64), np.zeros((1, 0, 0), dtype=np.int64)
    mats = np.array(list(itertools.product(range(p), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    det = np.rint(np.linalg.det(mats)).astype(np.int64) % p
    g = mats[det != 0]
    inv_f = np.linalg.inv(g.astype(float))
    dets = np.rint(np.linalg.det(g.astype(float))).astype(np.int64)
    adj = np.rint(inv_f * dets[:, None, None]).astype(np.int64)
    dinv = np.array([pow(int(d) % p, p - 2, p) for d in dets], dtype=np.int64)
    ginv = (adj * dinv[:, None, None]) % p
    return g, ginv


def enumerate_modules(cat, dims, field: Field, guard: int = 1 << 22, predicate=None) -> list:
    """One representative per isomorphism class of modules with dimension vector dims.

    All arrow matrices over F_p are run through; the orbit of each unseen tuple
    under (product of) GL(dims[x]) is marked, and the representative is kept
    if it satisfies the relations (and ``predicate``).
    """
    p = field.p
    if not p:
        raise ValueError("module enumeration needs a finite field")
    from .orbitcat import gabriel

    g = gabriel(cat)
    shapes = [(dims[a[1]], dims[a[2]]) for a in g.arrows]
    sizes = [r * c for r, c in shapes]
    E = sum(sizes)
    if p ** E > guard:
        raise SizeGuardError(f"{p}^{E} arrow tuples exceed guard {guard}")
    groups = [_gl(n, p) for n in dims]
    # group as the product: enumerate index tuples lazily through numpy broadcasting
    idx = np.array(list(itertools.product(*(range(len(gr[0])) for gr in groups))), dtype=np.int64)
    if idx.size == 0:
        idx = np.zeros((1, len(dims)), dtype=np.int64)
    weights = p ** np.arange(E, dtype=np.int64)[::-1]
    seen = np.zeros(p ** E, dtype=bool)
    reps = []
    for code in range(p ** E):
        if seen[code]:
            continue
        digits = [(code // p ** (E - 1 - i)) % p for i in range(E)]
        mats, o = [], 0
        for (r, c), s in zip(shapes, sizes):
            mats.append(np.array(digits[o:o + s], dtype=np.int64).reshape(r, c))
            o += s
        images = []
        for a, m in zip(g.arrows, mats):
            x, y = a[1], a[2]
            gx = groups[x][0][idx[:, x]]
            gyi = groups[y][1][idx[:, y]]
            images.append((gx @ m @ gyi % p).reshape(len(idx), -1))
        flat = np.concatenate(images, axis=1) if images else np.zeros((len(idx), 0), dtype=np.int64)
        codes = flat @ weights if E else np.zeros(len(idx), dtype=np.int64)
        seen[codes] = True
        arrows = [field.mat(r, c, [int(e) for e in m.flatten()]) for (r, c), m in zip(shapes, mats)]
        M = Representation(cat, list(dims), arrows, check=False)
        if not M.is_valid():
            continue
        if predicate is not None and not predicate(M):
            continue
        reps.append(M)
    return reps


def modules_up_to_dim(cat, field: Field, max_total: int, guard: int = 1 << 22, predicate=None) -> list:
    out = []
    for dims in itertools.product(range(max_total + 1), repeat=cat.n):
        if 0 < sum(dims) <= max_total:
            out.extend(enumerate_modules(cat, dims, field, guard, predicate))
    return out
