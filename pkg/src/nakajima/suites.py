"""The acceptance criteria as runnable checks, grouped into suites.

Each criterion function returns an ``Outcome``; the wall-clock limit is part
of the criterion, so an outcome that is correct but too slow is a failure.
The same functions back ``nakajima check`` and ``tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .desing import check_desing_surjective
from .grassmann import (dimension_vectors, direct_fiber_count, feasible_strata, fiber_count,
                        fiber_pullback, l_variety_count, modules_up_to_dim,
                        tangent_surjectivity_check)
from .kan import (KanContext, ck, ck_is_sigma_kk, is_bistable, kan, kk, multiplicity_prediction)
from .linalg import GF, QQ
from .mesh import GradedCategory
from .oracle import knitting_oracle
from .orbitcat import (BuildConfig, build_all, gabriel, path_category, predicted_QS_counts, present,
                       relation_vanishes, stable_category_dims)
from .quiver import (AutoSpec, Configuration, DynkinQuiver, Window, ZQC, ZVertex, nakayama_nu,
                     sigma_shift)
from .reps import (closure, cofree_module, ext, free_module, injective_decomposition, is_isomorphic,
                   simple_resolutions, projective_decomposition, quotient, random_module,
                   resolution_simple_S, restrict, selfinjective_check, simple, subrep)
from .rewriting import WeightedQuiver, normal_form_counts, parse_relations

A2, A3, D4 = (DynkinQuiver.parse(t) for t in ("A2", "A3", "D4"))
F2 = GF(2)


@dataclass
class Outcome:
    ident: int
    title: str
    ok: bool
    seconds: float
    limit: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.limit

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = "" if self.ok else f"  [{self.detail.get('reason', 'check failed')}]"
        if self.ok and not self.passed:
            extra = "  [over time limit]"
        return f"{tag} {self.ident:>2} {self.title} ({self.seconds:.2f}s / {self.limit:.0f}s){extra}"

    def to_json(self):
        return {"id": self.ident, "title": self.title, "ok": self.ok, "passed": self.passed,
                "seconds": round(self.seconds, 3), "limit": self.limit, "detail": self.detail}


CRITERIA = {}


def criterion(ident, title, limit):
    def wrap(fn):
        def run(seed: int = 0) -> Outcome:
            if ident != 6:  # 6 reuses the samples of 5 ("same run")
                context.cache_clear()
                kan_samples.cache_clear()
            t = time.perf_counter()
            ok, detail = fn(seed)
            return Outcome(ident, title, ok, time.perf_counter() - t, limit, detail)
        run.ident, run.title, run.limit, run.__doc__ = ident, title, limit, fn.__doc__
        CRITERIA[ident] = run
        return run
    return wrap


def _fail(reason, **kw):
    return False, dict(reason=reason, **kw)


# --------------------------------------------------------------------------
# presentations
# --------------------------------------------------------------------------

def _weighted(g):
    return WeightedQuiver(tuple(sorted({a[1] for a in g.arrows} | {a[2] for a in g.arrows})),
                          tuple((a[1], a[2], a[4]) for a in g.arrows))


def _degree_table(c, bound):
    out = Counter()
    for (x, y), degs in c.degrees.items():
        for d in degs:
            if d <= bound:
                out[(x, y, d)] += 1
    return out


def preprojective_relations(q: DynkinQuiver, p, g):
    """sum over neighbours j of i of +-(i -> j)(j -> i), read off the diagram of Q.

    Objects of P are matched with vertices of Q through their labels; each
    edge must give exactly one Gabriel arrow in either direction.
    """
    obj = {p.labels[x].base: x for x in p.objects}
    between = {}
    for k, a in enumerate(g.arrows):
        between.setdefault((a[1], a[2]), []).append(k)
    rels = []
    for i in q.vertices:
        poly = {}
        for j in q.neighbours[i]:
            out, back = between.get((obj[i], obj[j]), []), between.get((obj[j], obj[i]), [])
            if len(out) != 1 or len(back) != 1:
                raise ValueError(f"edge {i}-{j} is not a single pair of arrows")
            sign = 1 if (i, j) in q.arrows else -1
            poly[(out[0], back[0])] = p.field.elem(sign)
        rels.append(poly)
    return rels


@criterion(1, "preprojective presentation of P(A2, tau)", 1)
def c1(seed):
    r, s, p = build_all(BuildConfig(A2, max_degree=8))
    if p.n != 2 or p.hilbert() != [[1, 1], [1, 1]]:
        return _fail("P shape", hilbert=p.hilbert())
    pres = present(p)
    g = gabriel(p)
    if not all(relation_vanishes(p, g.arrows, rel) for rel in pres.relations):
        return _fail("a presented relation does not vanish")
    top = max(d for degs in p.degrees.values() for d in degs) + 2
    wq = _weighted(g)
    have = _degree_table(p, top)
    presented = normal_form_counts(wq, [rel[3] for rel in pres.relations], top)
    oracle = normal_form_counts(wq, preprojective_relations(A2, p, g), top)
    ok = Counter(presented) == have == Counter(oracle)
    return ok, {"total_dim": p.total_dim(), "oracle_total": sum(oracle.values()),
                "presented_total": sum(presented.values()), "relations": len(pres.relations)}


@criterion(2, "Q_S of A2, tau: counts and normal forms", 5)
def c2(seed):
    N = 14
    r, s, p = build_all(BuildConfig(A2, max_degree=N))
    pres = present(s)
    if pres.arrow_counts != [[1, 1], [1, 1]] or pres.relation_counts != [[1, 1], [1, 1]]:
        return _fail("counts", arrows=pres.arrow_counts, relations=pres.relation_counts)
    g = gabriel(s)
    names = {}
    for k, a in enumerate(g.arrows):
        key = {(0, 0): "d", (1, 1): "e", (0, 1): "f", (1, 0): "g"}[(a[1], a[2])]
        names[key] = k
    wq = _weighted(g)
    rels = parse_relations(names, ["d d d - f g", "e e e - g f", "d f - f e", "e g - g d"])
    oracle = normal_form_counts(wq, rels, N)
    have = _degree_table(s, N)
    return Counter(oracle) == have, {"dim_S_up_to_degree": sum(have.values()),
                                     "normal_words": sum(oracle.values()), "degree_bound": N}


@criterion(3, "cluster S of A2: quiver of S", 10)
def c3(seed):
    r, s, p = build_all(BuildConfig(A2, auto=AutoSpec.cluster(), max_degree=10))
    pres = present(s, with_words=False)
    out_deg = [sum(row) for row in pres.arrow_counts]
    pred = predicted_QS_counts(p, s, A2, AutoSpec.cluster())
    ok = s.n == 5 and out_deg == [2] * 5 and pred == (pres.arrow_counts, pres.relation_counts)
    return ok, {"objects": s.n, "outgoing": out_deg, "arrows": pres.arrow_counts,
                "relations": pres.relation_counts, "predicted": list(pred)}


# --------------------------------------------------------------------------
# Kan extensions
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def context(tag: str, auto: str = "tau", field: str = "Q", max_degree: int | None = None,
            config=None) -> KanContext:
    q = DynkinQuiver.parse(tag)
    a = AutoSpec.tau() if auto == "tau" else AutoSpec.cluster()
    cfg = Configuration.all() if config is None else Configuration(tuple(ZVertex(*v) for v in config))
    if max_degree is None:
        max_degree = {"A2": 10, "A3": 8}.get(tag, 8)
    return KanContext.build(q, config=cfg, auto=a, field=GF(2) if field == "F2" else QQ,
                            max_degree=max_degree)


@criterion(4, "KK and CK of frozen simples (A2, A3; tau)", 10)
def c4(seed):
    checked = 0
    for tag in ("A2", "A3"):
        ctx = context(tag)
        p = ctx.p
        for x in p.objects:
            sx = ctx.frozen_of(x)
            res = kan(ctx, simple(ctx.s, sx))
            if not is_isomorphic(kk(ctx, res.module, res), free_module(p, x)):
                return _fail(f"KK(S_sigma x) != x^ for {p.labels[x]} in {tag}")
            if not is_isomorphic(ck(ctx, res.module, res), cofree_module(p, x)):
                return _fail(f"CK(S_sigma x) != x^v for {p.labels[x]} in {tag}")
            checked += 1
    return True, {"checked": checked}


@lru_cache(maxsize=None)
def kan_samples(seed: int = 0, per_quiver: int = 25):
    """50 seeded random S-modules over Q (25 for A2, 25 for A3) with their checks."""
    rows = []
    for tag in ("A2", "A3"):
        ctx = context(tag)
        rng = random.Random(f"{seed}:{tag}")
        for _ in range(per_quiver):
            M = random_module(ctx.s, rng, 4)
            res = kan(ctx, M)
            k = kk(ctx, M, res)
            rows.append({"quiver": tag, "dims": list(M.dims),
                         "ck_sigma_kk": ck_is_sigma_kk(ctx, M, res),
                         "kk": dict(projective_decomposition(k)),
                         "predicted": dict(multiplicity_prediction(ctx, M, res)),
                         "K_LR": list(res.KLR.dims)})
    return rows


@criterion(5, "CK = Sigma KK on 50 random modules", 60)
def c5(seed):
    rows = kan_samples(seed)
    bad = [r for r in rows if not r["ck_sigma_kk"]]
    return not bad and len(rows) == 50, {"samples": len(rows), "failures": bad[:3]}


@criterion(6, "KK multiplicities = w sigma - C_q v", 60)
def c6(seed):
    rows = kan_samples(seed)
    bad = [r for r in rows if r["kk"] != r["predicted"]]
    return not bad and len(rows) == 50, {"samples": len(rows), "failures": bad[:3]}


def _ses(ctx, rng):
    """0 -> Y -> N -> L -> 0 with Y generated by one random element of N."""
    F = ctx.field
    while True:
        N = random_module(ctx.s, rng, 4)
        x = rng.choice([o for o in ctx.s.objects if N.dims[o]])
        v = F.random_matrix(N.dims[x], 1, rng)
        if F.is_zero(v):
            continue
        gens = [v if o == x else F.zeros(N.dims[o], 0) for o in ctx.s.objects]
        basis = closure(N, gens)
        Y, _ = subrep(N, basis)
        L, _ = quotient(N, basis)
        return Y, N, L


@criterion(8, "recollement identities and K_LR superadditivity", 30)
def c8(seed):
    rng = random.Random(f"{seed}:recollement")
    n_mod = n_ses = 0
    for tag in ("A2", "A3"):
        ctx = context(tag)
        for _ in range(10):
            M = random_module(ctx.s, rng, 4)
            res = kan(ctx, M)
            if not (is_isomorphic(restrict(res.KL, ctx.s), M) and is_isomorphic(restrict(res.KR, ctx.s), M)):
                return _fail("restriction of a Kan extension is not M", dims=list(M.dims))
            if not is_bistable(ctx, res.KLR):
                return _fail("K_LR M is not bistable", dims=list(M.dims))
            n_mod += 1
            Y, N, L = _ses(ctx, rng)
            dy, dn, dl = (kan(ctx, X).KLR.dims for X in (Y, N, L))
            if any(a + c > b for a, b, c in zip(dy, dn, dl)):
                return _fail("dim K_LR Y + dim K_LR L > dim K_LR N", Y=list(dy), N=list(dn), L=list(dl))
            n_ses += 1
    return True, {"modules": n_mod, "sequences": n_ses}


# --------------------------------------------------------------------------
# resolutions, stable category, Serre functor
# --------------------------------------------------------------------------

@criterion(7, "resolutions: R (A3), Ext^3 = 0, S (A2) infinite", 30)
def c7(seed):
    r3, _, _ = build_all(BuildConfig(A3, max_degree=8))
    checks = simple_resolutions(r3)
    bad = [c.to_json() for c in checks if not c.ok]
    if bad:
        return _fail("a resolution of a simple R-module is wrong", failures=bad[:2])
    simples = [simple(r3, x) for x in r3.objects]
    nonzero = [(x, y) for x in r3.objects for y in r3.objects if ext(simples[x], simples[y], 3)]
    if nonzero:
        return _fail("Ext^3 does not vanish", pairs=nonzero)
    ctx = context("A2", max_degree=12)
    s, p = ctx.s, ctx.p
    sinv = {ctx.sigma_P(z): z for z in p.objects}
    owner = {ctx.frozen_of(y): y for y in p.objects}
    for x in s.objects:
        res, ok = resolution_simple_S(s, x, 4)
        if not ok:
            return _fail("S-resolution not exact or stops", object=repr(s.labels[x]))
        # P_k has sigma(y)^ with multiplicity dim P(y, Sigma^{1-k} tau x)
        z = ctx.tau_P(owner[x])
        for k in range(1, 4):
            want = Counter({ctx.frozen_of(y): p.dim(y, z) for y in p.objects if p.dim(y, z)})
            if res.multiplicities(k) != want:
                return _fail("S-resolution terms differ from P(Sigma^-k tau x)", k=k)
            z = sinv[z]
    return True, {"R_sequences": len(checks), "ext3_pairs": len(simples) ** 2, "S_objects": s.n}


@criterion(9, "stable Hom table of proj R = Hilbert table of P", 10)
def c9(seed):
    out = {}
    for q in (A2, A3):
        r, s, p = build_all(BuildConfig(q, max_degree=8))
        st = stable_category_dims(r)
        if st != p.hilbert():
            return _fail(f"{q.type_tag}: stable table differs", stable=st, P=p.hilbert())
        out[q.type_tag] = st
    return True, out


@criterion(10, "mesh Hom = knitting oracle, Serre duality", 120)
def c10(seed):
    out = {}
    for q in (A2, A3, D4):
        oracle = knitting_oracle(q)
        w = Window.around(q, Configuration(()), width=2 * q.coxeter_number + 4)
        cat = GradedCategory(ZQC(q, Configuration(())))
        vs = list(w.vertices)
        if any(oracle.sigma(v) != sigma_shift(q, v) for v in vs):
            return _fail(f"{q.type_tag}: Sigma disagrees with the oracle")
        for x in vs:
            hf = cat.hom_from(x)
            for y in vs:
                if hf.dim(y) != oracle.dim_hom(x, y):
                    return _fail(f"{q.type_tag}: dim Hom({x},{y}) differs from the oracle")
                if hf.dim(y) != cat.dim(y, nakayama_nu(q, x)):
                    return _fail(f"{q.type_tag}: Serre duality fails at ({x},{y})")
        out[q.type_tag] = len(vs) ** 2
    return True, {"pairs": out}


# --------------------------------------------------------------------------
# Grassmannians
# --------------------------------------------------------------------------

@criterion(11, "fibers over F_2 (A2, tau)", 120)
def c11(seed):
    ctx = context("A2", field="F2")
    mods = [simple(ctx.s, x) for x in ctx.s.objects]
    rng = random.Random(f"{seed}:fibers")
    while len(mods) < ctx.s.n + 10:
        mods.append(random_module(ctx.s, rng, 4))
    n = 0
    for M in mods:
        res = kan(ctx, M)
        v0 = res.KLR.v()
        for v in feasible_strata(ctx, M, res):
            a, b = fiber_count(ctx, M, v, res), direct_fiber_count(ctx, M, v, res)
            if a != b or (v == v0 and a != 1):
                return _fail("fiber count mismatch", dims=list(M.dims), v=list(v), count=a, direct=b)
            n += 1
    return True, {"modules": len(mods), "strata": n}


@criterion(12, "L-variety = Gr_v(I_w), |w| <= 2 (A2)", 60)
def c12(seed):
    ctx = context("A2", field="F2")
    n = 0
    counts = {}
    for w in dimension_vectors([2] * ctx.s.n):
        if sum(w) > 2:
            continue
        top = [0] * ctx.p.n
        for x in ctx.p.objects:
            s = ctx.frozen_of(x)
            if s is not None:
                for y in ctx.p.objects:
                    top[y] += w[s] * ctx.p.dim(x, y)
        for v in dimension_vectors(top):
            rep = l_variety_count(ctx, v, w)
            if not rep.ok:
                return _fail("L-variety mismatch", **rep.to_json())
            counts[f"{list(w)}|{list(v)}"] = rep.count
            n += 1
    return True, {"cases": n, "counts": counts}


def stable_points(ctx, n, seed, max_dim=3):
    """Seeded stable points of rep(v, w, R): pullbacks of random submodules of CK(M)."""
    F = ctx.field
    rng = random.Random(f"{seed}:stable")
    out = []
    while len(out) < n:
        M = random_module(ctx.s, rng, 4)
        res = kan(ctx, M)
        gens = []
        for x in ctx.r.objects:
            k = rng.randint(0, min(1, res.CK.dims[x]))
            gens.append(F.random_matrix(res.CK.dims[x], k, rng))
        X = closure(res.CK, gens)
        N = fiber_pullback(ctx, M, X, res)
        if max(N.dims) <= max_dim:
            out.append(N)
    return out


@criterion(13, "tangent map surjective at 20 stable points", 30)
def c13(seed):
    ctx = context("A2")
    pts = stable_points(ctx, 20, seed)
    reps = [tangent_surjectivity_check(ctx, N) for N in pts]
    bad = [r.to_json() for r in reps if not (r.stable and r.surjective)]
    return not bad, {"points": len(reps), "dims": [list(N.dims) for N in pts], "failures": bad}


# --------------------------------------------------------------------------
# desingularization and self-injectivity
# --------------------------------------------------------------------------

DESING_INSTANCES = {
    "A2 tau C=(1,0)": dict(config=((1, 0),), allow=False),
    "A2 tau C=(2,0)": dict(config=((2, 0),), allow=False),
    "A2 tau C=all, nilpotent": dict(config=None, allow=True, max_degree=12),
}


@criterion(14, "desingularization over F_2 (S of A2, tau; dim <= 4)", 300)
def c14(seed):
    out = {}
    for name, inst in DESING_INSTANCES.items():
        ctx = context("A2", field="F2", max_degree=inst.get("max_degree", 10), config=inst["config"])
        mods = modules_up_to_dim(ctx.s, F2, 4)
        n = 0
        for M in mods:
            for e in dimension_vectors(M.dims):
                rep = check_desing_surjective(ctx, M, e, allow_infinite=inst["allow"])
                if not rep.ok:
                    return _fail(f"{name}: desingularization check failed", **rep.to_json())
                n += 1
        out[name] = {"modules": len(mods), "pairs": n}
    return True, out


SELFINJ_LITERAL = [("P", "A2", "tau"), ("P", "A3", "tau"), ("P", "A2", "cluster"),
                   ("S", "A2", "tau"), ("S", "A3", "tau"), ("S", "A2", "cluster")]
SELFINJ_FINITE_S = {"A2 tau C=(1,0)": ("A2", "tau", ((1, 0),)),
                    "A2 tau C=(2,0)": ("A2", "tau", ((2, 0),)),
                    "A3 tau C=(1,0)": ("A3", "tau", ((1, 0),)),
                    "A3 cluster C={(1,0),(3,-1),(2,1)}": ("A3", "cluster", ((1, 0), (3, -1), (2, 1)))}


def selfinjective_table():
    rows = {}
    for which, tag, auto in SELFINJ_LITERAL:
        ctx = context(tag, auto, max_degree=8)
        rows[f"{which} {tag} {auto} C=all"] = selfinjective_check(ctx.p if which == "P" else ctx.s).to_json()
    for name, (tag, auto, cfg) in SELFINJ_FINITE_S.items():
        ctx = context(tag, auto, max_degree=10, config=cfg)
        rows[f"S {name}"] = selfinjective_check(ctx.s).to_json()
    rows["control: path category A3"] = selfinjective_check(path_category(A3)).to_json()
    return rows


@criterion(15, "self-injectivity of P and S; hereditary control fails", 10)
def c15(seed):
    rows = selfinjective_table()
    literal = all(rows[f"{w} {t} {a} C=all"]["ok"] for w, t, a in SELFINJ_LITERAL)
    finite = all(rows[f"S {n}"]["ok"] for n in SELFINJ_FINITE_S)
    p_ok = all(rows[f"P {t} {a} C=all"]["ok"] for w, t, a in SELFINJ_LITERAL if w == "P")
    control = not rows["control: path category A3"]["ok"]
    detail = {"table": rows, "P": p_ok, "finite_S": finite, "control_fails": control}
    if not literal:
        detail["reason"] = "S with C = all is infinite-dimensional, hence not self-injective"
    return literal and control, detail


SUITES = {
    "presentations": [1, 2, 3, 9, 10],
    "kan": [4, 5, 6, 8],
    "resolutions": [7],
    "grassmann": [11, 12, 13],
    "desing": [14, 15],
}


def run(ids, seed: int = 0, jobs: int = 1) -> list[Outcome]:
    ids = list(ids)
    if jobs > 1 and len(ids) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(_run_one, ids, [seed] * len(ids)))
    return [_run_one(i, seed) for i in ids]


def _run_one(ident, seed):
    return CRITERIA[ident](seed)
