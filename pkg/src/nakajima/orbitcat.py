"""Finite presented categories: the orbit categories R, S, P and presentations.

Every Hom space of R^gr_C sits in one degree (the height difference), so the
orbit category R is graded with finite-dimensional pieces.  R and S are in
general infinite-dimensional; they are built up to a degree bound N, i.e. as
the quotient by the ideal of morphisms of degree > N.  P is finite and is
exact once N reaches its top degree.
"""
from __future__ import annotations

import itertools
import threading
from collections import defaultdict
from dataclasses import dataclass, field as dc_field

from .linalg import QQ, Field
from .mesh import GradedCategory, SIGN_CONVENTION
from .quiver import (AutoSpec, Configuration, DynkinQuiver, QuiverError, Window, ZQC, ZVertex,
                     apply_F, check_admissible, sigma_shift)


class LazyTensor(dict):
    """Composition tensors computed per object triple on first access."""

    def __init__(self, builder):
        super().__init__()
        self._builder = builder
        self._lock = threading.Lock()

    def __missing__(self, key):
        val = self._builder(key)
        with self._lock:
            self[key] = val
        return val


class PresentedCategory:
    """A k-linear category with finitely many objects and finite Hom bases.

    ``post[(x, y, z)][g]`` is the matrix of ``f |-> g o f`` from C(x, y) to
    C(x, z) for the g-th basis morphism of C(y, z).  Objects are indices
    ``0..n-1``; ``labels`` keeps what they stand for.
    """

    def __init__(self, name, field, labels, frozen, bases, degrees, post, max_degree=None, meta=None):
        self.name = name
        self.field = field
        self.labels = list(labels)
        self.frozen = list(frozen)
        self.bases = bases
        self.degrees = degrees
        self.post = post
        self.max_degree = max_degree
        self.meta = dict(meta or {})
        self._pre_cache = {}

    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def objects(self) -> range:
        return range(self.n)

    def dim(self, x, y) -> int:
        return len(self.bases[(x, y)])

    def hilbert(self) -> list[list[int]]:
        return [[self.dim(x, y) for y in self.objects] for x in self.objects]

    def total_dim(self) -> int:
        return sum(self.dim(x, y) for x in self.objects for y in self.objects)

    def identity_index(self, x) -> int:
        return self.degrees[(x, x)].index(0)

    def index_of(self, label) -> int:
        return self.labels.index(label)

    def compose(self, g: int, f: int, x, y, z):
        """Coordinates of g o f, f the f-th basis morphism x -> y, g the g-th y -> z."""
        return self.post[(x, y, z)][g] * self.field.unit_column(self.dim(x, y), f)

    def compose_vec(self, gvec, fvec, x, y, z):
        F = self.field
        out = F.zeros(self.dim(x, z), 1)
        for gi in range(self.dim(y, z)):
            c = gvec[gi, 0]
            if c != 0:
                out += self.post[(x, y, z)][gi] * fvec * c
        return out

    def pre(self, x, y, z, f: int):
        """Matrix of ``g |-> g o f`` from C(y, z) to C(x, z) for the f-th basis morphism x -> y."""
        m = self._pre_cache.get((x, y, z, f))
        if m is None:
            post = self._pre_cache.get((x, y, z))
            if post is None:
                post = [g.entries() for g in self.post[(x, y, z)]]
                self._pre_cache[(x, y, z)] = post
            nf, ng, nr = self.dim(x, y), self.dim(y, z), self.dim(x, z)
            m = self.field.mat(nr, ng, [post[g][r * nf + f] for r in range(nr) for g in range(ng)])
            self._pre_cache[(x, y, z, f)] = m
        return m

    def radical_indices(self, x, y) -> list[int]:
        return [i for i, d in enumerate(self.degrees[(x, y)]) if d > 0]

    # ------------------------------------------------------------------
    def full_subcategory(self, objs, name) -> "PresentedCategory":
        objs = list(objs)
        idx = {o: k for k, o in enumerate(objs)}
        bases = {(idx[x], idx[y]): self.bases[(x, y)] for x in objs for y in objs}
        degrees = {(idx[x], idx[y]): self.degrees[(x, y)] for x in objs for y in objs}
        post = LazyTensor(lambda k: self.post[(objs[k[0]], objs[k[1]], objs[k[2]])])
        return PresentedCategory(name, self.field, [self.labels[o] for o in objs],
                                 [self.frozen[o] for o in objs], bases, degrees, post,
                                 self.max_degree, self.meta)

    def opposite(self) -> "PresentedCategory":
        """C^op: Hom^op(x, y) = C(y, x); g o^op f = f o g.  Cached, and (C^op)^op is C."""
        op = getattr(self, "_op", None)
        if op is None:
            op = self._make_opposite()
            op._op, self._op = self, op
            sub = getattr(self, "parent", None)
            if sub is not None:
                op.parent, op.parent_objects = sub.opposite(), self.parent_objects
                if hasattr(self, "parent_basis"):
                    op.parent_basis = {(y, x): v for (x, y), v in self.parent_basis.items()}
        return op

    def _make_opposite(self) -> "PresentedCategory":
        bases = {(x, y): self.bases[(y, x)] for x in self.objects for y in self.objects}
        degrees = {(x, y): self.degrees[(y, x)] for x in self.objects for y in self.objects}
        # g in C(z, y), f in C(y, x): f o g in C(z, x), as a map in f
        post = LazyTensor(lambda k: [self.pre(k[2], k[1], k[0], g) for g in range(self.dim(k[2], k[1]))])
        return PresentedCategory(self.name + "^op", self.field, self.labels, self.frozen,
                                 bases, degrees, post, self.max_degree, self.meta)

    def check_associative(self) -> bool:
        F = self.field
        for x in self.objects:
            for y in self.objects:
                for z in self.objects:
                    for w in self.objects:
                        for h in range(self.dim(z, w)):
                            for g in range(self.dim(y, z)):
                                hg = self.compose(h, g, y, z, w)
                                left = F.zeros(self.dim(x, w), self.dim(x, y))
                                for k in range(self.dim(y, w)):
                                    if hg[k, 0] != 0:
                                        left += self.post[(x, y, w)][k] * hg[k, 0]
                                right = self.post[(x, z, w)][h] * self.post[(x, y, z)][g]
                                if left != right:
                                    return False
        for x in self.objects:
            for y in self.objects:
                if self.post[(x, y, y)][self.identity_index(y)] != F.eye(self.dim(x, y)):
                    return False
                i = self.identity_index(x)
                if self.pre(x, x, y, i) != F.eye(self.dim(x, y)):
                    return False
        return True

    def to_json(self) -> dict:
        F = self.field
        objs = [{"label": _label_json(l), "frozen": fr} for l, fr in zip(self.labels, self.frozen)]
        hom = {f"{x},{y}": {"basis": [_label_json(b) for b in self.bases[(x, y)]],
                            "degrees": self.degrees[(x, y)]}
               for x in self.objects for y in self.objects if self.dim(x, y)}
        comp = {}
        for (x, y, z) in itertools.product(self.objects, repeat=3):
            for g, m in enumerate(self.post[(x, y, z)]):
                if m.nrows() and m.ncols() and not F.is_zero(m):
                    comp[f"{x},{y},{z},{g}"] = [[F.to_python(m[i, j]) for j in range(m.ncols())]
                                                for i in range(m.nrows())]
        return {"name": self.name, "field": F.name, "max_degree": self.max_degree,
                "objects": objs, "hom": hom, "post": comp, "meta": self.meta}


def _label_json(l):
    if isinstance(l, ZVertex):
        return l.to_json()
    if isinstance(l, tuple):
        return [_label_json(e) for e in l]
    return l


# --------------------------------------------------------------------------
# building R, S, P
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BuildConfig:
    """What to build: quiver, configuration, automorphism, field, degree bound."""

    quiver: DynkinQuiver
    config: Configuration = dc_field(default_factory=Configuration.all)
    auto: AutoSpec = dc_field(default_factory=AutoSpec.tau)
    field: Field = QQ
    max_degree: int | None = None
    check: bool = True

    def degree_bound(self) -> int:
        if self.max_degree is not None:
            return self.max_degree
        return self.quiver.coxeter_number + 4


def _orbit_blocks(zqc: ZQC, cat: GradedCategory, x: ZVertex, y: ZVertex, N: int):
    """List of (i, target F^i y, paths) with 0 <= degree <= N, ordered by degree."""
    q, f = zqc.q, zqc.f
    d = zqc.delta
    hx, hy = zqc.height(x), zqc.height(y)
    out = []
    # heights of F^i y are hy + i d; keep those in [hx, hx + N]
    lo = (hx - hy) / d
    hi = (hx + N - hy) / d
    imin, imax = sorted((lo, hi))
    import math
    for i in range(math.ceil(imin) - 1, math.floor(imax) + 2):
        t = apply_F(q, f, y, i)
        deg = zqc.height(t) - hx
        if 0 <= deg <= N:
            paths = cat.basis(x, t)
            if paths:
                out.append((deg, i, t, paths))
    out.sort(key=lambda e: e[0])
    return out


def build_R(cfg: BuildConfig) -> PresentedCategory:
    q, f = cfg.quiver, cfg.auto
    zqc = ZQC(q, cfg.config, f)
    if zqc.delta == 0:
        raise QuiverError("finite order")
    if cfg.check:
        w = Window.around(q, cfg.config, f)
        rep = check_admissible(cfg.config, f, w)
        if not rep.ok:
            raise QuiverError(f"not admissible: {rep.reason} {rep.counterexample}")
    N = cfg.degree_bound()
    cat = GradedCategory(zqc, cfg.field, max_degree=N)
    nf, fr = zqc.fundamental_domain()
    labels = nf + fr
    frozen = [v.frozen for v in labels]
    n = len(labels)
    blocks = {}
    bases, degrees = {}, {}
    for a in range(n):
        for b in range(n):
            bl = _orbit_blocks(zqc, cat, labels[a], labels[b], N)
            blocks[(a, b)] = bl
            bases[(a, b)] = [(i, p) for (_, i, _, paths) in bl for p in paths]
            degrees[(a, b)] = [deg for (deg, _, _, paths) in bl for _ in paths]
    F = cfg.field
    offsets = {}
    for key, bl in blocks.items():
        offc, o = {}, 0
        for (_, i, t, paths) in bl:
            offc[i] = (o, t, len(paths))
            o += len(paths)
        offsets[key] = offc

    def build(key):
        a, b, c = key
        hf = cat.hom_from(labels[a])
        dab, dac = len(bases[(a, b)]), len(bases[(a, c)])
        offc = offsets[(a, c)]
        mats = []
        for (j, gpath) in bases[(b, c)]:
            entries = [0] * (dac * dab)
            col = 0
            for (_, i, t, paths) in blocks[(a, b)]:
                k = len(paths)
                tgt = offc.get(i + j)
                if tgt is not None:
                    o2, t2, k2 = tgt
                    moved = tuple(apply_F(q, f, v, i) for v in gpath)
                    assert moved[0] == t and moved[-1] == t2
                    pe = hf.path_matrix(moved).entries()
                    for r in range(k2):
                        base = (o2 + r) * dab + col
                        entries[base:base + k] = pe[r * k:(r + 1) * k]
                col += k
            mats.append(F.mat(dac, dab, entries))
        return mats

    post = LazyTensor(build)
    meta = {"quiver": q.type_tag, "config": cfg.config.to_json(), "F": f.to_json(),
            "sign_convention": SIGN_CONVENTION, "max_degree": N}
    r = PresentedCategory("R", F, labels, frozen, bases, degrees, post, N, meta)
    r.zqc, r.graded, r.blocks, r.auto = zqc, cat, blocks, f
    return r


def path_morphism(r: PresentedCategory, path) -> tuple[int, int, object]:
    """A path of ZQ_C as a morphism of R: ``(source, target, coordinates)``."""
    zqc, q, f = r.zqc, r.zqc.q, r.auto
    x0, k = zqc.canonical(path[0])
    moved = tuple(apply_F(q, f, v, k) for v in path)  # starts at the representative x0
    y0, j = zqc.canonical(moved[-1])
    a, b = r.index_of(x0), r.index_of(y0)
    coords = r.field.zeros(r.dim(a, b), 1)
    o = 0
    for (_, i, t, paths) in r.blocks[(a, b)]:
        if i == -j:
            v = r.graded.hom_from(x0).path_vector(moved)
            for m in range(len(paths)):
                coords[o + m, 0] = v[m, 0]
        o += len(paths)
    return a, b, coords


def _has_gap(r: PresentedCategory, x) -> bool:
    """Some degree <= N has R(x, ?) = 0.

    Arrows of ZQ_C all have degree one, so every morphism of degree d > 0 is
    an arrow composed with a morphism of degree d - 1: past an empty degree
    everything vanishes and R(x, ?) is exact.
    """
    seen = set()
    for z in r.objects:
        seen.update(r.degrees[(x, z)])
    return any(d not in seen for d in range(r.max_degree + 1))


def build_S(r: PresentedCategory) -> PresentedCategory:
    """The full subcategory on the frozen objects (cached on r)."""
    s = getattr(r, "_S", None)
    if s is None:
        objs = [x for x in r.objects if r.frozen[x]]
        s = r.full_subcategory(objs, "S")
        s.parent, s.parent_objects = r, objs
        if r.max_degree is not None and all(_has_gap(r, x) for x in objs):
            s.max_degree = None
            s.meta = dict(s.meta, exact=True)
        r._S = s
    return s


def factoring_span(r: PresentedCategory, x, y, through) -> object:
    """Columns spanning the morphisms x -> y that factor through objects in ``through``."""
    F = r.field
    cols = []
    for s in through:
        for g in range(r.dim(s, y)):
            m = r.post[(x, s, y)][g]
            if m.ncols():
                cols.append(m)
    if not cols:
        return F.zeros(r.dim(x, y), 0)
    return F.hstack(cols, r.dim(x, y))


def build_P(r: PresentedCategory) -> PresentedCategory:
    """R modulo the ideal of morphisms factoring through frozen objects."""
    F = r.field
    objs = [x for x in r.objects if not r.frozen[x]]
    fro = [x for x in r.objects if r.frozen[x]]
    kept, proj = {}, {}
    for x in objs:
        for y in objs:
            span = factoring_span(r, x, y, fro)
            k, p = F.complement(span, r.dim(x, y))
            kept[(x, y)], proj[(x, y)] = k, p
    idx = {o: k for k, o in enumerate(objs)}
    bases, degrees, post = {}, {}, {}
    for x in objs:
        for y in objs:
            bases[(idx[x], idx[y])] = [r.bases[(x, y)][k] for k in kept[(x, y)]]
            degrees[(idx[x], idx[y])] = [r.degrees[(x, y)][k] for k in kept[(x, y)]]
    for x in objs:
        for y in objs:
            incl = F.zeros(r.dim(x, y), len(kept[(x, y)]))
            for a, k in enumerate(kept[(x, y)]):
                incl[k, a] = 1
            for z in objs:
                post[(idx[x], idx[y], idx[z])] = [proj[(x, z)] * r.post[(x, y, z)][g] * incl
                                                  for g in kept[(y, z)]]
    top = max((d for v in degrees.values() for d in v), default=0)
    exact = r.max_degree is None or top < r.max_degree
    meta = dict(r.meta)
    meta["exact"] = exact
    p = PresentedCategory("P", F, [r.labels[o] for o in objs], [False] * len(objs),
                          bases, degrees, post, None if exact else r.max_degree, meta)
    # where P came from: its objects and basis morphisms inside R
    p.parent, p.parent_objects = r, objs
    p.parent_basis = {(idx[x], idx[y]): kept[(x, y)] for x in objs for y in objs}
    p.zqc = r.zqc
    return p


def mesh_orbit_category(q: DynkinQuiver, f: AutoSpec, field: Field = QQ) -> PresentedCategory:
    """k(ZQ)/F computed from the mesh category alone (no frozen vertices)."""
    cfg = BuildConfig(q, Configuration(()), f, field, max_degree=q.coxeter_number, check=False)
    # Configuration(()) has no frozen vertices, so build_R gives k(ZQ)/F up to degree h
    r = build_R(cfg)
    r.name = "P"
    r.max_degree = None
    return r


def build_all(cfg: BuildConfig):
    r = build_R(cfg)
    return r, build_S(r), build_P(r)


def path_category(q: DynkinQuiver, field: Field = QQ) -> PresentedCategory:
    """The path category of Q itself (hereditary, not self-injective)."""
    verts = list(q.vertices)
    n = len(verts)
    paths = {}
    for a in range(n):
        for b in range(n):
            paths[(a, b)] = []
    # BFS over paths; Dynkin trees have at most one path between vertices
    for a in range(n):
        frontier = [(verts[a],)]
        while frontier:
            p = frontier.pop()
            paths[(a, verts.index(p[-1]))].append(p)
            for s, t in q.arrows:
                if s == p[-1]:
                    frontier.append(p + (t,))
    bases = {k: v for k, v in paths.items()}
    degrees = {k: [len(p) - 1 for p in v] for k, v in paths.items()}
    post = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                mats = []
                for g in bases[(b, c)]:
                    m = field.zeros(len(bases[(a, c)]), len(bases[(a, b)]))
                    for j, fpath in enumerate(bases[(a, b)]):
                        comp = fpath + g[1:]
                        m[bases[(a, c)].index(comp), j] = 1
                    mats.append(m)
                post[(a, b, c)] = mats
    return PresentedCategory("kQ", field, verts, [False] * n, bases, degrees, post, None,
                             {"quiver": q.type_tag})


# --------------------------------------------------------------------------
# presentations
# --------------------------------------------------------------------------

@dataclass
class Gabriel:
    """Arrows (irreducible basis morphisms) and a one-step factorisation table.

    ``arrows[i] = (name, source, target, basis index, degree)``.  For a basis
    morphism f of positive degree that is not an arrow, ``factor[(x, y, k)]``
    lists ``(coef, arrow i, k')`` with f = sum coef * (arrow_i o f'), f' the
    k'-th basis morphism x -> source(arrow_i).
    """

    arrows: list
    factor: dict
    arrow_of: dict

    def into(self, y):
        return [i for i, a in enumerate(self.arrows) if a[2] == y]


def gabriel(c: PresentedCategory) -> Gabriel:
    """Arrows and factorisations, computed one homogeneous piece at a time.

    In degree d the square of the radical is spanned by a o f with a an arrow
    of degree < d and f radical; basis morphisms outside that span become
    arrows, the others are expressed through it.
    """
    g = getattr(c, "_gabriel", None)
    if g is not None:
        return g
    F = c.field
    for x in c.objects:
        if c.degrees[(x, x)].count(0) != 1:
            raise QuiverError("endomorphism ring is not local with k in degree 0")
        for y in c.objects:
            if x != y and 0 in c.degrees[(x, y)]:
                raise QuiverError("non-basic input: isomorphic objects")
    by_deg = {}
    for (x, y), degs in c.degrees.items():
        for k, d in enumerate(degs):
            if d > 0:
                by_deg.setdefault((x, y, d), []).append(k)
    arrows, factor = [], {}
    into = defaultdict(list)
    for d in sorted({key[2] for key in by_deg}):
        for x in c.objects:
            for y in c.objects:
                ks = by_deg.get((x, y, d))
                if not ks:
                    continue
                pos = {k: r for r, k in enumerate(ks)}
                vecs, terms = [], []
                for i in into[y]:
                    _, z, _, ka, da = arrows[i]
                    for k in by_deg.get((x, z, d - da), ()):
                        col = c.post[(x, z, y)][ka]
                        vecs.append(F.mat(len(ks), 1, [col[kk, k] for kk in ks]))
                        terms.append((i, k))
                if vecs:
                    m = F.hstack(vecs, len(ks))
                    piv = F.rref(m)[1]
                    basis = F.columns(m, piv)
                else:
                    piv, basis = [], F.zeros(len(ks), 0)
                new, _ = F.complement(basis, len(ks))
                for r in new:
                    arrows.append((None, x, y, ks[r], d))
                    into[y].append(len(arrows) - 1)
                    piv.append(len(terms))
                    terms.append((len(arrows) - 1, c.identity_index(x)))
                    basis = F.hstack([basis, F.unit_column(len(ks), r)], len(ks))
                new = set(new)
                rest = [k for k in ks if pos[k] not in new]
                if not rest:
                    continue
                rhs = F.hstack([F.unit_column(len(ks), pos[k]) for k in rest], len(ks))
                coords = F.coordinates(basis, rhs)
                for j, k in enumerate(rest):
                    factor[(x, y, k)] = [(coords[r, j], terms[p][0], terms[p][1])
                                         for r, p in enumerate(piv) if coords[r, j] != 0]
    order = sorted(range(len(arrows)), key=lambda i: arrows[i][1:4])
    renum = {old: new for new, old in enumerate(order)}
    arrows = [(f"a{n}",) + arrows[i][1:] for n, i in enumerate(order)]
    factor = {key: [(cc, renum[i], k) for cc, i, k in row] for key, row in factor.items()}
    arrow_of = {(a[1], a[2], a[3]): i for i, a in enumerate(arrows)}
    g = Gabriel(arrows, factor, arrow_of)
    c._gabriel = g
    return g


def word_expressions(c: PresentedCategory, arrows=None) -> dict:
    """Each basis morphism as a combination of words in the arrows.

    Words are tuples of arrow indices in path order: ``(a1, a2)`` is a2 o a1.
    Exponential in the degree; meant for small presentations.
    """
    g = gabriel(c)
    F = c.field
    memo = {}

    def expr(x, y, k):
        key = (x, y, k)
        if key in memo:
            return memo[key]
        if c.degrees[(x, y)][k] == 0:
            out = {(): F.elem(1)}
        elif key in g.arrow_of:
            out = {(g.arrow_of[key],): F.elem(1)}
        else:
            out = {}
            for coef, i, kk in g.factor[key]:
                z = g.arrows[i][1]
                for w, v in expr(x, z, kk).items():
                    out[w + (i,)] = out.get(w + (i,), F.elem(0)) + coef * v
            out = {w: v for w, v in out.items() if v != 0}
        memo[key] = out
        return out

    return {(x, y, k): expr(x, y, k) for x in c.objects for y in c.objects for k in range(c.dim(x, y))}


@dataclass
class QuiverPresentation:
    objects: list
    arrows: list  # (name, source, target, basis index, degree), morphism direction
    relations: list  # (source, target, degree, {word: coeff})
    hilbert: list
    arrow_counts: list
    relation_counts: list
    max_degree: int | None

    def word_name(self, word) -> str:
        return " ".join(self.arrows[a][0] for a in word) or "id"

    def to_json(self, field: Field) -> dict:
        return {"objects": [_label_json(o) for o in self.objects],
                "arrows": [{"name": a[0], "source": a[1], "target": a[2], "degree": a[4]}
                           for a in self.arrows],
                "relations": [{"source": s, "target": t, "degree": d,
                               "terms": [[field.to_python(c), self.word_name(w)]
                                         for w, c in sorted(r.items())]}
                              for s, t, d, r in self.relations],
                "hilbert": self.hilbert, "arrow_counts": self.arrow_counts,
                "relation_counts": self.relation_counts, "max_degree": self.max_degree}


def _cover_generators(c, g, y, w, bound):
    """Basis of P1(w) = (+)_{a: z -> y} C(w, z) as (arrow, basis index, total degree)."""
    out = []
    for i in g.into(y):
        a = g.arrows[i]
        for k, d in enumerate(c.degrees[(w, a[1])]):
            if bound is None or d + a[4] <= bound:
                out.append((i, k, d + a[4]))
    return out


def _syzygy(c, g, y, w, gens):
    """Kernel of P1(w) -> C(w, y) on the span of ``gens`` (columns in gens coordinates)."""
    F = c.field
    if not gens:
        return F.zeros(0, 0)
    cols = [c.compose(g.arrows[i][3], k, w, g.arrows[i][1], y) for i, k, _ in gens]
    return F.nullspace(F.hstack(cols, c.dim(w, y)))


def present(c: PresentedCategory, with_words: bool = True) -> QuiverPresentation:
    """Gabriel quiver (rad / rad^2) and minimal relations of a graded category.

    Relations ending at y come from the kernel K of the radical cover
    ``(+)_{a: z -> y} C(?, z) -> rad C(?, y)``; minimal ones are K / K.rad.
    On a truncated category only relations of degree <= max_degree are
    reported; those are exact.
    """
    F = c.field
    N = c.max_degree
    g = gabriel(c)
    arrows = g.arrows
    counts = [[0] * c.n for _ in c.objects]
    for a in arrows:
        counts[a[1]][a[2]] += 1
    words = word_expressions(c) if with_words else None
    relations = []
    rcounts = [[0] * c.n for _ in c.objects]
    for y in c.objects:
        # kernels at every w, graded by total degree
        kers = {}
        for w in c.objects:
            gens = _cover_generators(c, g, y, w, N)
            by_deg = defaultdict(list)
            for t in gens:
                by_deg[t[2]].append(t)
            for deg, gl in by_deg.items():
                ker = _syzygy(c, g, y, w, gl)
                if ker.ncols():
                    kers[(w, deg)] = (gl, ker)
        for (w, deg), (gl, ker) in sorted(kers.items()):
            pos = {(i, k): r for r, (i, k, _) in enumerate(gl)}
            # K.rad: lower-degree kernel elements at w2 composed with rad(w, w2)
            cols = []
            for (w2, d2), (gl2, ker2) in kers.items():
                if d2 >= deg:
                    continue
                for r in c.radical_indices(w, w2):
                    if c.degrees[(w, w2)][r] + d2 != deg:
                        continue
                    for j in range(ker2.ncols()):
                        col = F.zeros(len(gl), 1)
                        for t, (i, k, _) in enumerate(gl2):
                            coef = ker2[t, j]
                            if coef == 0:
                                continue
                            img = c.compose(k, r, w, w2, arrows[i][1])
                            for kk in range(img.nrows()):
                                if img[kk, 0] != 0:
                                    col[pos[(i, kk)], 0] += coef * img[kk, 0]
                        cols.append(col)
            cur = F.hstack(cols, len(gl)) if cols else F.zeros(len(gl), 0)
            rk = F.rank(cur)
            for j in range(ker.ncols()):
                v = F.columns(ker, [j])
                t = F.hstack([cur, v], len(gl))
                if F.rank(t) == rk:
                    continue
                cur, rk = t, rk + 1
                expr = {}
                if words is not None:
                    for r_, (i, k, _) in enumerate(gl):
                        coef = v[r_, 0]
                        if coef == 0:
                            continue
                        for word, cc in words[(w, arrows[i][1], k)].items():
                            key = word + (i,)
                            expr[key] = expr.get(key, F.elem(0)) + coef * cc
                    expr = {k_: v_ for k_, v_ in expr.items() if v_ != 0}
                relations.append((w, y, deg, expr))
                rcounts[w][y] += 1
    return QuiverPresentation(list(c.labels), arrows, relations, c.hilbert(), counts, rcounts, N)


def evaluate_word(c: PresentedCategory, arrows, word, x):
    """Coordinates of a word starting at object x."""
    F = c.field
    v = F.unit_column(c.dim(x, x), c.identity_index(x))
    cur = x
    for ai in word:
        a = arrows[ai]
        assert a[1] == cur
        v = c.post[(x, cur, a[2])][a[3]] * v
        cur = a[2]
    return cur, v


def relation_vanishes(c: PresentedCategory, arrows, rel) -> bool:
    s, t, _, expr = rel
    F = c.field
    tot = F.zeros(c.dim(s, t), 1)
    for word, coef in expr.items():
        end, v = evaluate_word(c, arrows, word, s)
        assert end == t
        tot += v * coef
    return F.is_zero(tot)


# --------------------------------------------------------------------------
# predictions and checks
# --------------------------------------------------------------------------

def predicted_QS_counts(p: PresentedCategory, s: PresentedCategory, q: DynkinQuiver, f: AutoSpec):
    """arrow(x -> y) = dim P(y, Sigma x), relation(x -> y) = dim P(y, Sigma^2 x).

    Objects of S are indexed by sigma^{-1}; P's Sigma is evaluated through the
    orbit representative of Sigma x.
    """
    zqc = ZQC(q, Configuration.all(), f)
    plabels = list(p.labels)
    cs = [ZVertex(v.base, v.level + 1) for v in s.labels]  # sigma^{-1} of frozen labels
    n = len(cs)
    arr = [[0] * n for _ in range(n)]
    rel = [[0] * n for _ in range(n)]
    for a, x in enumerate(cs):
        sx = zqc.canonical_rep(sigma_shift(q, x, 1))
        s2x = zqc.canonical_rep(sigma_shift(q, x, 2))
        for b, y in enumerate(cs):
            yp = plabels.index(zqc.canonical_rep(y))
            arr[a][b] = p.dim(yp, plabels.index(sx))
            rel[a][b] = p.dim(yp, plabels.index(s2x))
    return arr, rel


def stable_category_dims(r: PresentedCategory) -> list[list[int]]:
    """dim R(x, y) minus morphisms factoring through frozen objects, x, y non-frozen."""
    F = r.field
    objs = [x for x in r.objects if not r.frozen[x]]
    fro = [x for x in r.objects if r.frozen[x]]
    return [[r.dim(x, y) - F.rank(factoring_span(r, x, y, fro)) for y in objs] for x in objs]


