"""Finite-dimensional right modules over a :class:`PresentedCategory`.

A module M assigns a space M(x) to every object and to a morphism f: x -> y a
matrix M(f): M(y) -> M(x), with M(g o f) = M(f) M(g).  It is stored by the
matrices of the Gabriel arrows; any other basis morphism acts through the
one-step factorisation table of :func:`nakajima.orbitcat.gabriel`.

On a degree-truncated category (R or S built up to degree N) a module is a
module over the truncation: every morphism of degree > N acts by zero.

Optional gradings (one integer per basis vector) are used by the graded
resolutions; everything else ignores them.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

from .linalg import Field
from .orbitcat import PresentedCategory, factoring_span, gabriel
from .quiver import QuiverError


class ModuleError(QuiverError):
    pass


class Representation:
    """A right module given by one matrix per Gabriel arrow."""

    def __init__(self, cat: PresentedCategory, dims, arrows, grading=None, check: bool = True,
                 source_act=None):
        self.cat = cat
        self.field: Field = cat.field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != cat.n:
            raise ModuleError("dimension vector has the wrong length")
        self.gab = gabriel(cat)
        self.arrows = tuple(arrows)
        if len(self.arrows) != len(self.gab.arrows):
            raise ModuleError("one matrix per arrow expected")
        for m, a in zip(self.arrows, self.gab.arrows):
            if m.nrows() != self.dims[a[1]] or m.ncols() != self.dims[a[2]]:
                raise ModuleError(f"arrow {a[0]} has a matrix of the wrong shape")
        self.grading = None if grading is None else tuple(tuple(g) for g in grading)
        self._act = {}
        self._source_act = source_act
        if check:
            self.validate()

    @classmethod
    def from_action(cls, cat, dims, act, grading=None, check: bool = False):
        """Build from a function ``act(x, y, k)`` giving M of every basis morphism."""
        g = gabriel(cat)
        arrows = [act(a[1], a[2], a[3]) for a in g.arrows]
        return cls(cat, dims, arrows, grading, check, source_act=act)

    # ------------------------------------------------------------------
    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def v(self) -> tuple:
        """Dimensions at the non-frozen objects."""
        return tuple(d for d, fr in zip(self.dims, self.cat.frozen) if not fr)

    def w(self) -> tuple:
        """Dimensions at the frozen objects."""
        return tuple(d for d, fr in zip(self.dims, self.cat.frozen) if fr)

    def support(self) -> list[int]:
        return [x for x in self.cat.objects if self.dims[x]]

    def act(self, x, y, k):
        """M(f) for the k-th basis morphism f: x -> y, a dims[x] x dims[y] matrix."""
        key = (x, y, k)
        m = self._act.get(key)
        if m is not None:
            return m
        F, c = self.field, self.cat
        if not self.dims[x] or not self.dims[y]:
            m = F.zeros(self.dims[x], self.dims[y])
        elif self._source_act is not None:
            m = self._source_act(x, y, k)
        elif c.degrees[(x, y)][k] == 0:
            m = F.eye(self.dims[x])
        elif key in self.gab.arrow_of:
            m = self.arrows[self.gab.arrow_of[key]]
        else:
            m = F.zeros(self.dims[x], self.dims[y])
            for coef, i, kk in self.gab.factor[key]:
                z = self.gab.arrows[i][1]
                if self.dims[z]:
                    m += self.act(x, z, kk) * self.arrows[i] * coef
        self._act[key] = m
        return m

    def act_vec(self, x, y, vec):
        """M of the morphism with coordinates ``vec`` (a column) in C(x, y)."""
        F = self.field
        out = F.zeros(self.dims[x], self.dims[y])
        if not self.dims[x] or not self.dims[y]:
            return out
        for k in range(vec.nrows()):
            c = vec[k, 0]
            if c != 0:
                out += self.act(x, y, k) * c
        return out

    def validate(self):
        """Check M(a o f) = M(f) M(a) for every arrow a and every basis morphism f."""
        c, F = self.cat, self.field
        for i, a in enumerate(self.gab.arrows):
            _, y, z, ka, _ = a
            if not self.dims[y] and not self.dims[z]:
                continue
            for x in c.objects:
                if not self.dims[x]:
                    continue
                post = c.post[(x, y, z)][ka]
                for f in range(c.dim(x, y)):
                    lhs = self.act_vec(x, z, post * F.unit_column(c.dim(x, y), f))
                    rhs = self.act(x, y, f) * self.arrows[i]
                    if lhs != rhs:
                        raise ModuleError(f"relation violated at arrow {a[0]} and basis {f} of C({x},{y})")
        return True

    def is_valid(self) -> bool:
        try:
            return self.validate()
        except ModuleError:
            return False

    # ------------------------------------------------------------------
    def key(self) -> tuple:
        """Hashable identity of the matrices (not an isomorphism invariant)."""
        F = self.field
        return (self.dims, tuple(tuple(F.to_python(e) for e in m.entries()) for m in self.arrows))

    def __eq__(self, other):
        return isinstance(other, Representation) and other.cat is self.cat and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Representation({self.cat.name}, dims={list(self.dims)})"

    def to_json(self) -> dict:
        F = self.field
        return {"category": self.cat.name, "field": F.name,
                "dims": {str(x): d for x, d in enumerate(self.dims)},
                "matrices": {a[0]: [[F.to_python(m[i, j]) for j in range(m.ncols())]
                                    for i in range(m.nrows())]
                             for a, m in zip(self.gab.arrows, self.arrows)}}

    @classmethod
    def from_json(cls, cat, d: dict, check: bool = True) -> "Representation":
        F = cat.field
        dims = [int(d["dims"].get(str(x), 0)) for x in cat.objects]
        mats = []
        for a in gabriel(cat).arrows:
            rows = d["matrices"].get(a[0])
            r, s = dims[a[1]], dims[a[2]]
            if rows is None:
                mats.append(F.zeros(r, s))
            else:
                mats.append(F.mat(r, s, [F.from_python(e) for row in rows for e in row]))
        return cls(cat, dims, mats, check=check)


# --------------------------------------------------------------------------
# maps
# --------------------------------------------------------------------------

class ModuleMap:
    """Per-object matrices ``mats[x]: M(x) -> N(x)`` commuting with the action."""

    def __init__(self, source: Representation, target: Representation, mats, check: bool = False):
        self.source, self.target = source, target
        self.mats = tuple(mats)
        self.field = source.field
        if check and not self.is_homomorphism():
            raise ModuleError("not a module homomorphism")

    def is_homomorphism(self) -> bool:
        M, N = self.source, self.target
        for i, a in enumerate(M.gab.arrows):
            x, y = a[1], a[2]
            if self.mats[x] * M.arrows[i] != N.arrows[i] * self.mats[y]:
                return False
        return True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self o other."""
        return ModuleMap(other.source, self.target, [a * b for a, b in zip(self.mats, other.mats)])

    def rank(self) -> tuple:
        return tuple(self.field.rank(m) for m in self.mats)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dims

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dims

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    def flat(self):
        """The map as one column (row-major blocks, object by object)."""
        F = self.field
        ent = []
        for m in self.mats:
            ent.extend(m.entries())
        return F.mat(len(ent), 1, ent)

    def kernel(self):
        F = self.field
        basis = [F.nullspace(m) for m in self.mats]
        return subrep(self.source, basis)

    def image(self):
        F = self.field
        basis = [F.column_basis(m) if m.ncols() and m.nrows() else F.zeros(m.nrows(), 0)
                 for m in self.mats]
        return subrep(self.target, basis)

    def cokernel(self):
        F = self.field
        basis = [F.column_basis(m) if m.ncols() and m.nrows() else F.zeros(m.nrows(), 0)
                 for m in self.mats]
        return quotient(self.target, basis)


def identity_map(M: Representation) -> ModuleMap:
    return ModuleMap(M, M, [M.field.eye(d) for d in M.dims])


def zero_map(M: Representation, N: Representation) -> ModuleMap:
    return ModuleMap(M, N, [M.field.zeros(n, m) for m, n in zip(M.dims, N.dims)])


# --------------------------------------------------------------------------
# sub-objects and quotients
# --------------------------------------------------------------------------

def _col_degree(grading, col):
    degs = {grading[i] for i in range(col.nrows()) if col[i, 0] != 0}
    return degs.pop() if len(degs) == 1 else None


def closure(M: Representation, gens) -> list:
    """Basis (per object) of the submodule generated by columns ``gens[x]``."""
    F = M.field
    basis = []
    for x in M.cat.objects:
        g = gens[x] if gens[x] is not None else F.zeros(M.dims[x], 0)
        basis.append(F.column_basis(g) if g.ncols() else F.zeros(M.dims[x], 0))
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(M.gab.arrows):
            x, y = a[1], a[2]
            if not basis[y].ncols() or not M.dims[x]:
                continue
            img = M.arrows[i] * basis[y]
            big = F.hstack([basis[x], img], M.dims[x])
            r = F.rank(big)
            if r > basis[x].ncols():
                basis[x] = F.column_basis(big)
                changed = True
    return basis


def subrep(M: Representation, basis):
    """The submodule spanned by invariant subspaces ``basis[x]``, with its inclusion."""
    F = M.field
    dims = [b.ncols() for b in basis]
    arrows = []
    for i, a in enumerate(M.gab.arrows):
        x, y = a[1], a[2]
        if dims[x] and dims[y]:
            try:
                arrows.append(F.coordinates(basis[x], M.arrows[i] * basis[y]))
            except ValueError:
                raise ModuleError("subspace is not a submodule") from None
        else:
            arrows.append(F.zeros(dims[x], dims[y]))
    grading = None
    if M.grading is not None:
        grading = []
        for x, b in enumerate(basis):
            degs = [_col_degree(M.grading[x], F.columns(b, [j])) for j in range(b.ncols())]
            if any(d is None for d in degs):
                grading = None
                break
            grading.append(degs)
    S = Representation(M.cat, dims, arrows, grading, check=False)
    return S, ModuleMap(S, M, basis)


def quotient(M: Representation, basis):
    """M modulo the submodule spanned by ``basis[x]``, with the projection."""
    F = M.field
    kept, proj, incl = [], [], []
    for x, b in enumerate(basis):
        k, p = F.complement(b, M.dims[x])
        kept.append(k)
        proj.append(p)
        inc = F.zeros(M.dims[x], len(k))
        for j, kk in enumerate(k):
            inc[kk, j] = 1
        incl.append(inc)
    dims = [len(k) for k in kept]
    arrows = []
    for i, a in enumerate(M.gab.arrows):
        x, y = a[1], a[2]
        arrows.append(proj[x] * M.arrows[i] * incl[y])
    grading = None
    if M.grading is not None:
        grading = [[M.grading[x][kk] for kk in k] for x, k in enumerate(kept)]
    Q = Representation(M.cat, dims, arrows, grading, check=False)
    return Q, ModuleMap(M, Q, proj)


def direct_sum(*mods: Representation) -> Representation:
    if not mods:
        raise ModuleError("empty direct sum")
    F, c = mods[0].field, mods[0].cat
    dims = [sum(m.dims[x] for m in mods) for x in c.objects]
    arrows = [F.block_diag([m.arrows[i] for m in mods]) for i in range(len(mods[0].arrows))]
    grading = None
    if all(m.grading is not None for m in mods):
        grading = [sum((list(m.grading[x]) for m in mods), []) for x in c.objects]
    return Representation(c, dims, arrows, grading, check=False)


def change_basis(M: Representation, g) -> Representation:
    """The module with M(x) re-coordinatised by invertible ``g[x]`` (new = g old)."""
    F = M.field
    inv = [F.inverse(m) for m in g]
    arrows = [g[a[1]] * M.arrows[i] * inv[a[2]] for i, a in enumerate(M.gab.arrows)]
    return Representation(M.cat, M.dims, arrows, None, check=False)


def random_basis_change(M: Representation, rng: random.Random) -> Representation:
    F = M.field
    g = []
    for d in M.dims:
        while True:
            m = F.random_matrix(d, d, rng)
            if F.rank(m) == d:
                break
        g.append(m)
    return change_basis(M, g)


# --------------------------------------------------------------------------
# standard modules
# --------------------------------------------------------------------------

def free_module(cat: PresentedCategory, x: int, shift: int = 0, bound: int | None = None) -> Representation:
    """x^ = C(?, x), graded by morphism degree + ``shift``; cut at total degree ``bound``."""
    keep = {}
    for y in cat.objects:
        keep[y] = [k for k, d in enumerate(cat.degrees[(y, x)]) if bound is None or d + shift <= bound]
    dims = [len(keep[y]) for y in cat.objects]
    grading = [[cat.degrees[(y, x)][k] + shift for k in keep[y]] for y in cat.objects]
    F = cat.field
    full = all(len(keep[y]) == cat.dim(y, x) for y in cat.objects)

    def act(y, z, k):
        m = cat.pre(y, z, x, k)  # C(z, x) -> C(y, x)
        if full:
            return m
        return F.submatrix(m, keep[y], keep[z])

    M = Representation.from_action(cat, dims, act, grading)
    M.generator, M.keep = (x, shift), keep
    return M


def cofree_module(cat: PresentedCategory, x: int) -> Representation:
    """x^v = D C(x, ?)."""
    dims = [cat.dim(x, y) for y in cat.objects]

    def act(y, z, k):
        return cat.post[(x, y, z)][k].transpose()

    return Representation.from_action(cat, dims, act)


def simple(cat: PresentedCategory, x: int, degree: int = 0) -> Representation:
    F = cat.field
    dims = [1 if y == x else 0 for y in cat.objects]
    g = gabriel(cat)
    arrows = [F.zeros(dims[a[1]], dims[a[2]]) for a in g.arrows]
    return Representation(cat, dims, arrows, [[degree] * d for d in dims], check=False)


def zero_module(cat: PresentedCategory) -> Representation:
    F = cat.field
    return Representation(cat, [0] * cat.n, [F.zeros(0, 0) for _ in gabriel(cat).arrows], check=False)


def semisimple(cat: PresentedCategory, mult) -> Representation:
    """(+)_x S_x^{mult[x]}."""
    F = cat.field
    dims = list(mult)
    arrows = [F.zeros(dims[a[1]], dims[a[2]]) for a in gabriel(cat).arrows]
    return Representation(cat, dims, arrows, [[0] * d for d in dims], check=False)


def truncate(M: Representation, bound: int) -> Representation:
    """Graded M modulo its part of degree > bound."""
    if M.grading is None:
        raise ModuleError("truncation needs a grading")
    F = M.field
    basis = []
    for x in M.cat.objects:
        high = [i for i, d in enumerate(M.grading[x]) if d > bound]
        b = F.zeros(M.dims[x], len(high))
        for j, i in enumerate(high):
            b[i, j] = 1
        basis.append(b)
    return quotient(M, basis)[0]


# --------------------------------------------------------------------------
# change of category
# --------------------------------------------------------------------------

def restrict(M: Representation, sub: PresentedCategory) -> Representation:
    """Restriction to a full subcategory built by ``full_subcategory`` (e.g. S in R)."""
    objs = sub.parent_objects
    if sub.parent is not M.cat:
        raise ModuleError("module does not live on the parent category")
    dims = [M.dims[o] for o in objs]
    grading = None if M.grading is None else [M.grading[o] for o in objs]
    return Representation.from_action(sub, dims, lambda x, y, k: M.act(objs[x], objs[y], k), grading)


def to_quotient(M: Representation, p: PresentedCategory) -> Representation:
    """An R-module killed by the frozen ideal, read as a module over P = R / <S>."""
    r, objs = p.parent, p.parent_objects
    if M.cat is not r:
        raise ModuleError("module does not live on the parent category")
    for x in r.objects:
        if r.frozen[x] and M.dims[x]:
            raise ModuleError("module is not supported on non-frozen objects")
    dims = [M.dims[o] for o in objs]
    grading = None if M.grading is None else [M.grading[o] for o in objs]
    return Representation.from_action(
        p, dims, lambda x, y, k: M.act(objs[x], objs[y], p.parent_basis[(x, y)][k]), grading)


def inflate(M: Representation, r: PresentedCategory) -> Representation:
    """A P-module as an R-module (zero at frozen objects)."""
    p = M.cat
    objs = p.parent_objects
    pos = {o: i for i, o in enumerate(objs)}
    F = M.field
    dims = [M.dims[pos[x]] if x in pos else 0 for x in r.objects]

    def act(x, y, k):
        if x not in pos or y not in pos or not dims[x] or not dims[y]:
            return F.zeros(dims[x], dims[y])
        vec = _class_in_P(p, pos[x], pos[y], k)
        return M.act_vec(pos[x], pos[y], vec)

    return Representation.from_action(r, dims, act)


def _class_in_P(p, x, y, k):
    """Coordinates in P(x, y) of the class of R's k-th basis morphism."""
    cache = getattr(p, "_proj_cache", None)
    if cache is None:
        cache = p._proj_cache = {}
    if (x, y) not in cache:
        r = p.parent
        fro = [o for o in r.objects if r.frozen[o]]
        a, b = p.parent_objects[x], p.parent_objects[y]
        kept, proj = r.field.complement(factoring_span(r, a, b, fro), r.dim(a, b))
        assert kept == p.parent_basis[(x, y)]
        cache[(x, y)] = proj
    return p.field.columns(cache[(x, y)], [k])


def dual(M: Representation) -> Representation:
    """D M over the opposite category."""
    op = M.cat.opposite()
    return Representation.from_action(op, M.dims, lambda x, y, k: M.act(y, x, k).transpose())


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(f.target), dual(f.source), [m.transpose() for m in f.mats])


# --------------------------------------------------------------------------
# Hom
# --------------------------------------------------------------------------

def hom(M: Representation, N: Representation) -> list[ModuleMap]:
    """Basis of Hom(M, N) (solving the intertwiner equations)."""
    F = M.field
    c = M.cat
    offs, o = [], 0
    for x in c.objects:
        offs.append(o)
        o += N.dims[x] * M.dims[x]
    nvar = o
    if nvar == 0:
        return []
    rows = []
    for i, a in enumerate(M.gab.arrows):
        x, y = a[1], a[2]
        mx, my, nx, ny = M.dims[x], M.dims[y], N.dims[x], N.dims[y]
        if not nx or not my:
            continue
        Ma, Na = M.arrows[i], N.arrows[i]
        Me, Ne = Ma.entries(), Na.entries()
        for r in range(nx):
            for s in range(my):
                row = {}
                for k in range(mx):  # phi_x[r, k] Ma[k, s]
                    e = Me[k * my + s]
                    if e != 0:
                        j = offs[x] + r * mx + k
                        row[j] = row.get(j, 0) + e
                for k in range(ny):  # - Na[r, k] phi_y[k, s]
                    e = Ne[r * ny + k]
                    if e != 0:
                        j = offs[y] + k * my + s
                        row[j] = row.get(j, 0) - e
                if row:
                    rows.append(row)
    if rows:
        A = F.zeros(len(rows), nvar)
        for ri, row in enumerate(rows):
            for j, e in row.items():
                A[ri, j] = e
        sol = F.nullspace(A)
    else:
        sol = F.eye(nvar)
    out = []
    se = sol.entries()
    nc = sol.ncols()
    for j in range(nc):
        mats = []
        for x in c.objects:
            n, m = N.dims[x], M.dims[x]
            mats.append(F.mat(n, m, [se[(offs[x] + t) * nc + j] for t in range(n * m)]))
        out.append(ModuleMap(M, N, mats))
    return out


def hom_dim(M: Representation, N: Representation) -> int:
    return len(hom(M, N))


def hom_matrix(maps: list[ModuleMap], nrows: int):
    """Columns = flattened maps."""
    F = maps[0].field if maps else None
    if not maps:
        return None
    return F.hstack([m.flat() for m in maps], nrows)


# --------------------------------------------------------------------------
# radical, top, socle
# --------------------------------------------------------------------------

def radical_basis(M: Representation) -> list:
    F = M.field
    out = []
    for x in M.cat.objects:
        imgs = [M.arrows[i] for i, a in enumerate(M.gab.arrows) if a[1] == x and M.dims[a[2]]]
        if imgs and M.dims[x]:
            out.append(F.column_basis(F.hstack(imgs, M.dims[x])))
        else:
            out.append(F.zeros(M.dims[x], 0))
    return out


def radical(M: Representation):
    return subrep(M, radical_basis(M))


def top(M: Representation):
    return quotient(M, radical_basis(M))


def top_dims(M: Representation) -> list[int]:
    return [M.dims[x] - b.ncols() for x, b in enumerate(radical_basis(M))]


def socle_basis(M: Representation) -> list:
    F = M.field
    out = []
    for y in M.cat.objects:
        maps = [M.arrows[i] for i, a in enumerate(M.gab.arrows) if a[2] == y and M.dims[a[1]]]
        if maps and M.dims[y]:
            out.append(F.nullspace(F.vstack(maps, M.dims[y])))
        else:
            out.append(F.eye(M.dims[y]))
    return out


def socle(M: Representation):
    return subrep(M, socle_basis(M))


def socle_dims(M: Representation) -> list[int]:
    return [b.ncols() for b in socle_basis(M)]


def radical_layers(M: Representation) -> list[tuple]:
    """Dimension vectors of M, rad M, rad^2 M, ... down to 0 (or a fixed point)."""
    out = [M.dims]
    cur = M
    for _ in range(M.total_dim + 1):
        nxt = radical(cur)[0]
        if nxt.dims == cur.dims:
            break
        out.append(nxt.dims)
        cur = nxt
    return out


def is_nilpotent(M: Representation) -> bool:
    """rad^n M = 0 for some n (n = total dimension suffices)."""
    return sum(radical_layers(M)[-1]) == 0


def max_acting_degree(M: Representation) -> int:
    """Largest degree of a basis morphism acting non-trivially on M (-1 for M = 0)."""
    c = M.cat
    if M.is_zero():
        return -1
    step = max((a[4] for a in M.gab.arrows), default=1)
    top = max((d for v in c.degrees.values() for d in v), default=0)
    best, quiet = 0, 0
    for d in range(1, top + 1):
        hit = False
        for (x, y), degs in c.degrees.items():
            if not M.dims[x] or not M.dims[y]:
                continue
            for k, dd in enumerate(degs):
                if dd == d and not M.field.is_zero(M.act(x, y, k)):
                    hit = True
                    break
            if hit:
                break
        if hit:
            best, quiet = d, 0
        else:
            quiet += 1
            if quiet >= step:
                break
    return best


# --------------------------------------------------------------------------
# isomorphism
# --------------------------------------------------------------------------

def iso_class_fingerprint(M: Representation) -> tuple:
    c = M.cat
    simples = [simple(c, x) for x in c.objects]
    return (M.dims,
            tuple(hom_dim(M, s) for s in simples),
            tuple(hom_dim(s, M) for s in simples),
            hom_dim(M, M))


def find_isomorphism(M: Representation, N: Representation, seed: int = 0, tries: int = 12):
    """An isomorphism M -> N, or None.

    Over Q a random combination of a Hom basis is invertible as soon as any
    element is (tried several times).  Over a small F_p the Hom space is
    enumerated when it has at most 2^14 elements.
    """
    if M.dims != N.dims:
        return None
    if M.total_dim == 0:
        return zero_map(M, N)
    basis = hom(M, N)
    if not basis:
        return None
    F = M.field
    rng = random.Random(seed)
    if F.p and F.p ** len(basis) <= 1 << 14:
        combos = itertools.product(range(F.p), repeat=len(basis))
    else:
        combos = ([rng.randrange(F.p) if F.p else rng.randint(-50, 50) for _ in basis]
                  for _ in range(tries * (3 if F.p else 1)))
    for coeffs in combos:
        mats = []
        ok = True
        for x in M.cat.objects:
            m = F.zeros(N.dims[x], M.dims[x])
            for c, f in zip(coeffs, basis):
                if c:
                    m += f.mats[x] * F.elem(c)
            if F.rank(m) != M.dims[x]:
                ok = False
                break
            mats.append(m)
        if ok:
            return ModuleMap(M, N, mats)
    return None


def is_isomorphic(M: Representation, N: Representation) -> bool:
    if M.dims != N.dims:
        return False
    if iso_class_fingerprint(M) != iso_class_fingerprint(N):
        return False
    return find_isomorphism(M, N) is not None


# --------------------------------------------------------------------------
# projective / injective decompositions
# --------------------------------------------------------------------------

def projective_decomposition(M: Representation) -> Counter | None:
    """Multiplicities of x^ if M is projective, else None.

    M is projective iff its projective cover (+) x^{top(x)} has the same
    dimension vector (the cover is onto, so it is then an isomorphism).
    """
    t = top_dims(M)
    c = M.cat
    tot = [0] * c.n
    for x, m in enumerate(t):
        if m:
            for y in c.objects:
                tot[y] += m * c.dim(y, x)
    if tuple(tot) != M.dims:
        return None
    return Counter({x: m for x, m in enumerate(t) if m})


def injective_decomposition(M: Representation) -> Counter | None:
    """Multiplicities of x^v if M is injective, else None."""
    s = socle_dims(M)
    c = M.cat
    tot = [0] * c.n
    for x, m in enumerate(s):
        if m:
            for y in c.objects:
                tot[y] += m * c.dim(x, y)
    if tuple(tot) != M.dims:
        return None
    return Counter({x: m for x, m in enumerate(s) if m})


@dataclass
class SelfInjectiveReport:
    ok: bool
    permutation: dict | None
    reason: str = ""

    def to_json(self):
        return {"ok": self.ok, "reason": self.reason,
                "permutation": None if self.permutation is None
                else {str(k): v for k, v in self.permutation.items()}}


def selfinjective_check(c: PresentedCategory) -> SelfInjectiveReport:
    """Is every indecomposable injective x^v projective, x -> top of x^v a bijection?

    Requires an exact (finite-dimensional) category; a degree-truncated one is
    rejected, since truncation destroys self-injectivity.
    """
    if c.max_degree is not None:
        return SelfInjectiveReport(False, None,
                                   f"infinite-dimensional category (truncated at degree {c.max_degree})")
    perm = {}
    for x in c.objects:
        dec = projective_decomposition(cofree_module(c, x))
        if dec is None or sum(dec.values()) != 1:
            return SelfInjectiveReport(False, None, f"injective at object {x} is not projective")
        perm[x] = next(iter(dec))
    if len(set(perm.values())) != c.n:
        return SelfInjectiveReport(False, None, "Nakayama map is not a bijection")
    return SelfInjectiveReport(True, perm)


# --------------------------------------------------------------------------
# resolutions and Ext
# --------------------------------------------------------------------------

@dataclass
class Resolution:
    """Minimal projective resolution ... -> P1 -> P0 -> M.

    ``generators[k]`` lists ``(object, degree)`` of the free summands of P_k
    (in order; ``summands[k]`` holds them); ``differentials[k-1]`` is
    P_k -> P_{k-1} and ``augmentation`` is P0 -> M.  With a degree bound the
    resolution is exact in degrees <= bound.
    """

    module: Representation
    terms: list
    summands: list
    generators: list
    augmentation: ModuleMap
    differentials: list
    syzygies: list
    bound: int | None

    def multiplicities(self, k: int) -> Counter:
        return Counter(x for x, _ in self.generators[k]) if k < len(self.generators) else Counter()

    def generator_index(self, k: int, t: int) -> int:
        """Position in P_k(x) of the identity of the t-th summand (x its object)."""
        x = self.generators[k][t][0]
        off = sum(fr.dims[x] for fr in self.summands[k][:t])
        fr = self.summands[k][t]
        return off + fr.keep[x].index(fr.cat.identity_index(x))


def _cover(K: Representation, bound):
    """Projective cover of K: the free summands, their generators and the map."""
    F = K.field
    c = K.cat
    graded = K.grading is not None
    rad = radical_basis(K)
    gens = []
    for x in c.objects:
        kept, _ = F.complement(rad[x], K.dims[x])
        for k in kept:
            gens.append((x, K.grading[x][k] if graded else 0, k))
    frees = [free_module(c, x, d, bound if graded else None) for x, d, _ in gens]
    P = direct_sum(*frees) if frees else zero_module(c)
    if not graded:
        P.grading = None
    mats = []
    for y in c.objects:
        cols = []
        for (x, _, k), fr in zip(gens, frees):
            m = F.unit_column(K.dims[x], k)
            for kk in fr.keep[y]:
                cols.append(K.act(y, x, kk) * m)
        mats.append(F.hstack(cols, K.dims[y]) if cols else F.zeros(K.dims[y], 0))
    return P, frees, [(x, d) for x, d, _ in gens], ModuleMap(P, K, mats)


def _graded_kernel(f: ModuleMap):
    """Kernel of a homogeneous map, with a homogeneous basis when graded."""
    F = f.field
    P = f.source
    basis = []
    for x in P.cat.objects:
        m = f.mats[x]
        blocks = _homogeneous_blocks(None if P.grading is None else P.grading[x], P.dims[x])
        cols = []
        for d in sorted(blocks):
            idx = blocks[d]
            ns = F.nullspace(F.columns(m, idx))
            for j in range(ns.ncols()):
                v = F.zeros(P.dims[x], 1)
                for t, i in enumerate(idx):
                    v[i, 0] = ns[t, j]
                cols.append(v)
        basis.append(F.hstack(cols, P.dims[x]) if cols else F.zeros(P.dims[x], 0))
    return subrep(P, basis)


def _homogeneous_blocks(grading_x, n):
    if grading_x is None:
        return {0: list(range(n))}
    blocks = {}
    for i, d in enumerate(grading_x):
        blocks.setdefault(d, []).append(i)
    return blocks


def minimal_resolution(M: Representation, steps: int, bound: int | None = None) -> Resolution:
    """Minimal projective resolution P_steps -> ... -> P_0 -> M.

    For a graded M the free modules are cut at total degree ``bound`` (default:
    the category's degree bound), which keeps the computation finite on R and
    S; the result is then exact in all degrees <= bound.  Stops early when a
    syzygy vanishes.
    """
    if M.grading is not None and bound is None:
        bound = M.cat.max_degree
    cur = M
    terms, sums, gens, diffs, syz = [], [], [], [], []
    aug = prev_incl = None
    for k in range(steps + 1):
        P, frees, g, cover = _cover(cur, bound)
        terms.append(P)
        sums.append(frees)
        gens.append(g)
        if k == 0:
            aug = cover
        else:
            diffs.append(prev_incl.compose(cover))
        K, prev_incl = _graded_kernel(cover)
        syz.append(K)
        cur = K
        if K.is_zero():
            break
    return Resolution(M, terms, sums, gens, aug, diffs, syz, bound)


def check_exact(res: Resolution) -> bool:
    """Re-verify exactness by ranks: P_k(x) = rank(out) + rank(in) at every object."""
    F = res.module.field
    if not res.augmentation.is_surjective():
        return False
    maps = [res.augmentation] + res.differentials
    for k, P in enumerate(res.terms):
        for x in res.module.cat.objects:
            rk_out = F.rank(maps[k].mats[x])
            if k + 1 < len(maps):
                rk_in = F.rank(maps[k + 1].mats[x])
            else:
                rk_in = res.syzygies[k].dims[x]  # kernel, computed directly
            if rk_out + rk_in != P.dims[x]:
                return False
    return True


def _cochain(res: Resolution, N: Representation, j: int):
    """Hom(P_{j-1}, N) -> Hom(P_j, N) in generator coordinates (Yoneda)."""
    F, c = N.field, N.cat
    src, tgt = res.generators[j - 1], res.generators[j]
    offs, o = [], 0
    for x, _ in src:
        offs.append(o)
        o += N.dims[x]
    out = F.zeros(sum(N.dims[x] for x, _ in tgt), o)
    d = res.differentials[j - 1]
    r = 0
    for t, (xt, _) in enumerate(tgt):
        col = F.columns(d.mats[xt], [res.generator_index(j, t)])
        q = 0
        for s, fr in enumerate(res.summands[j - 1]):
            xs = src[s][0]
            vec = F.zeros(c.dim(xt, xs), 1)
            for i, kk in enumerate(fr.keep[xt]):
                vec[kk, 0] = col[q + i, 0]
            q += fr.dims[xt]
            blk = N.act_vec(xt, xs, vec)  # N(xs) -> N(xt)
            for a in range(N.dims[xt]):
                for b in range(N.dims[xs]):
                    out[r + a, offs[s] + b] += blk[a, b]
        r += N.dims[xt]
    return out


def ext(M: Representation, N: Representation, k: int, bound: int | None = None) -> int:
    """dim Ext^k(M, N) from the minimal projective resolution of M."""
    if k == 0:
        return hom_dim(M, N)
    res = minimal_resolution(M, k + 1, bound)
    return ext_from_resolution(res, N, k)


def ext_from_resolution(res: Resolution, N: Representation, k: int) -> int:
    if k >= len(res.terms):
        return 0
    F = N.field
    width = sum(N.dims[x] for x, _ in res.generators[k])
    ker = width - (F.rank(_cochain(res, N, k + 1)) if k + 1 < len(res.terms) else 0)
    rank_in = F.rank(_cochain(res, N, k)) if k >= 1 else 0
    return ker - rank_in


@dataclass
class SequenceCheck:
    """One of the standard resolutions of a simple module, predicted vs computed.

    ``predicted`` and ``computed`` list, term by term, the multiset of
    ``(object, degree)`` of the free summands.
    """

    kind: str
    obj: object
    predicted: list
    computed: list
    exact: bool

    @property
    def ok(self) -> bool:
        return self.exact and self.predicted == self.computed

    def to_json(self):
        return {"kind": self.kind, "object": repr(self.obj), "ok": self.ok, "exact": self.exact,
                "predicted": [sorted(map(list, t)) for t in self.predicted],
                "computed": [sorted(map(list, t)) for t in self.computed]}


def _terms(res: Resolution) -> list:
    return [sorted(g) for g in res.generators if g]


def resolution_simple_R(r: PresentedCategory, x: int, injective: bool = False) -> SequenceCheck:
    """Check the length-two resolution of the simple R-module at x.

    Projective side: 0 -> (tau x)^ -> sum over arrows y -> x of y^ -> x^ -> S_x,
    and 0 -> (tau c)^ -> (sigma c)^ -> S_{sigma c} for a frozen object.  The
    injective side is the same statement over R^op, dualised.  The minimal
    resolution is computed independently and compared term by term.
    """
    zqc = r.zqc
    lab = r.labels[x]
    c = r.opposite() if injective else r
    nbrs = zqc.successors(lab) if injective else zqc.predecessors(lab)
    shift = -1 if injective else 1

    def idx(v):
        return r.index_of(zqc.canonical_rep(v))

    from .quiver import tau as _tau
    pred = [[(x, 0)], sorted((idx(y), 1) for y in nbrs)]
    if not lab.frozen:
        pred.append([(idx(_tau(lab, shift)), 2)])
    res = minimal_resolution(simple(c, x), len(pred) + 1)
    exact = check_exact(res) and res.syzygies[-1].is_zero()
    kind = ("injective" if injective else "projective") + ("-frozen" if lab.frozen else "")
    return SequenceCheck(kind, lab, pred, _terms(res), exact)


def resolution_simple_S(s: PresentedCategory, x: int, terms: int = 4) -> tuple[Resolution, bool]:
    """Truncated minimal resolution of S_x over S with its first ``terms`` terms.

    Returns the resolution and whether it is exact there with a nonzero
    syzygy after the last term (the resolution does not stop).
    """
    res = minimal_resolution(simple(s, x), terms - 1)
    ok = check_exact(res) and len(res.terms) == terms and not res.syzygies[-1].is_zero()
    return res, ok


def simple_resolutions(r: PresentedCategory) -> list[SequenceCheck]:
    """All four resolutions, for every object of R."""
    return [resolution_simple_R(r, x, inj) for inj in (False, True) for x in r.objects]


# --------------------------------------------------------------------------
# random modules
# --------------------------------------------------------------------------

def random_module(cat: PresentedCategory, rng: random.Random, max_dim: int = 4,
                  tries: int = 200) -> Representation:
    """A random finite-dimensional module of total dimension 1..max_dim.

    A truncated free module x^ / (degree > t) is cut down by the submodule
    generated by a few random elements; with probability 1/2 the same is done
    on the opposite side and dualised (a submodule of a cofree module).  The
    result is re-coordinatised by a random basis change.  With probability
    1/3 a second, smaller such module is added as a direct summand.
    """
    M = _random_piece(cat, rng, max_dim, tries)
    room = max_dim - M.total_dim
    if room >= 1 and rng.random() < 1 / 3:
        M = direct_sum(M, _random_piece(cat, rng, room, tries))
    return random_basis_change(M, rng)


def _random_piece(cat, rng, max_dim, tries):
    for _ in range(tries):
        side = cat if rng.random() < 0.5 else cat.opposite()
        x = rng.randrange(cat.n)
        t = rng.randint(0, max(0, min(side.max_degree or 12, 3 * max_dim)))
        M = free_module(side, x, 0, t)
        if M.total_dim == 0:
            continue
        F = cat.field
        for _ in range(rng.randint(0, 2)):
            if M.total_dim <= 1:
                break
            y = rng.choice([o for o in side.objects if M.dims[o]])
            v = F.random_matrix(M.dims[y], 1, rng)
            if F.is_zero(v):
                continue
            gens = [v if o == y else F.zeros(M.dims[o], 0) for o in side.objects]
            basis = closure(M, gens)
            if sum(b.ncols() for b in basis) >= M.total_dim:
                continue
            M = quotient(M, basis)[0]
        if not 1 <= M.total_dim <= max_dim:
            continue
        if side is not cat:
            M = dual(M)
        return M
    raise ModuleError("could not sample a module of the requested size")
