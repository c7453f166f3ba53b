"""Desingularisation of quiver Grassmannians of a self-injective S.

For a submodule N of an S-module M, K_LR N sits inside K_LR M (left
exactness), is bistable and restricts to N.  Grouping the submodules of
dimension e by isomorphism class (the finite-field stand-in for irreducible
components) gives dimension vectors d_i = dims K_LR N_i, and

    disjoint union over i of Gr^bs_{d_i}(K_LR M)  ->  Gr_e(M),   L |-> res L

is checked to be surjective, with the bistable points of dimension d_i in
bijection with the submodules in the classes of dimension d_i.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field

from .grassmann import DEFAULT_GUARD, enumerate_subreps, subspace_key
from .kan import KanContext, is_bistable, kan, kan_right_map
from .reps import (ModuleError, Representation, find_isomorphism, iso_class_fingerprint,
                   restrict, selfinjective_check, subrep)


class NotSelfInjective(ModuleError):
    pass


@dataclass
class Component:
    representative: Representation
    fingerprint: tuple
    members: list  # indices into the submodule list
    d: tuple

    def to_json(self):
        return {"fingerprint": _fp_json(self.fingerprint), "count": len(self.members), "d": list(self.d)}


def _fp_json(fp):
    dims, hs, sh, end = fp
    return {"dims": list(dims), "hom_to_simples": list(hs), "hom_from_simples": list(sh), "end": end}


@dataclass
class DesingReport:
    module: Representation
    e: tuple
    field: str
    components: list
    submodules: list  # per-object bases in M
    bistable_counts: dict = dc_field(default_factory=dict)
    witnesses: list = dc_field(default_factory=list)
    surjective: bool | None = None
    birational: bool | None = None
    note: str = "components are isomorphism classes of submodules over a finite field"

    @property
    def V(self) -> list:
        return sorted({c.d for c in self.components})

    @property
    def ok(self) -> bool:
        return bool(self.surjective) and bool(self.birational)

    def to_json(self):
        return {"dims": list(self.module.dims), "e": list(self.e), "field": self.field,
                "components": [c.to_json() for c in self.components], "V": [list(d) for d in self.V],
                "bistable_counts": {",".join(map(str, d)): n for d, n in self.bistable_counts.items()},
                "surjective": self.surjective, "birational": self.birational,
                "witnesses": self.witnesses, "note": self.note}


def _require_selfinjective(ctx: KanContext, allow: bool):
    rep = selfinjective_check(ctx.s)
    if not rep.ok and not allow:
        raise NotSelfInjective(f"S is not self-injective: {rep.reason}")
    return rep


def components(ctx: KanContext, M: Representation, e, guard: int = DEFAULT_GUARD,
               allow_infinite: bool = False) -> DesingReport:
    """Submodules of M of dimension e, split into isomorphism classes with d_i."""
    _require_selfinjective(ctx, allow_infinite)
    subs = enumerate_subreps(M, e, guard)
    comps: list[Component] = []
    for i, basis in enumerate(subs.subreps):
        N, _ = subrep(M, basis)
        fp = iso_class_fingerprint(N)
        for c in comps:
            if c.fingerprint == fp and find_isomorphism(N, c.representative) is not None:
                c.members.append(i)
                break
        else:
            d = tuple(kan(ctx, N).KLR.dims)
            comps.append(Component(N, fp, [i], d))
    return DesingReport(M, tuple(e), ctx.field.name, comps, subs.subreps)


def bistable_subreps(ctx: KanContext, K: Representation, d, guard: int = DEFAULT_GUARD) -> list:
    """Bistable submodules of K (an R-module) with dimension vector d, as bases."""
    out = []
    for basis in enumerate_subreps(K, d, guard).subreps:
        L, _ = subrep(K, basis)
        if is_bistable(ctx, L):
            out.append(basis)
    return out


def _key(F, basis) -> tuple:
    return tuple(subspace_key(F, b) for b in basis)


def check_desing_surjective(ctx: KanContext, M: Representation, e, guard: int = DEFAULT_GUARD,
                            allow_infinite: bool = False) -> DesingReport:
    """Cover every N in Gr_e(M) by L = K_LR N inside K_LR M and compare counts."""
    F = ctx.field
    rep = components(ctx, M, e, guard, allow_infinite)
    resM = kan(ctx, M)
    KLR_M = resM.KLR
    incl_M = resM.KLR_incl.mats
    comp_of = {}
    for ci, c in enumerate(rep.components):
        for i in c.members:
            comp_of[i] = ci
    images = {}
    ok = True
    for i, basis in enumerate(rep.submodules):
        N, iota = subrep(M, basis)
        resN = kan(ctx, N)
        KRi = kan_right_map(ctx, iota, resN.KR, resM.KR)
        w = {"submodule": i, "component": comp_of[i]}
        L = []
        for x in ctx.r.objects:
            img = KRi.mats[x] * resN.KLR_incl.mats[x]
            try:
                L.append(F.coordinates(incl_M[x], img))
            except ValueError:
                L.append(None)
                break
        if any(b is None for b in L) or len(L) != ctx.r.n:
            w["error"] = "K_LR N is not inside K_LR M"
            ok = False
            rep.witnesses.append(w)
            continue
        Lmod, _ = subrep(KLR_M, L)
        d = tuple(Lmod.dims)
        if d != rep.components[comp_of[i]].d:
            w["error"] = f"dims {list(d)} not the component's d"
            ok = False
        elif not is_bistable(ctx, Lmod):
            w["error"] = "image is not bistable"
            ok = False
        elif find_isomorphism(restrict(Lmod, ctx.s), N) is None:
            w["error"] = "restriction of the image is not N"
            ok = False
        else:
            w["d"] = list(d)
        images[i] = _key(F, L)
        rep.witnesses.append(w)
    rep.surjective = ok
    # birationality: bistable points of dimension d <-> submodules in classes with that d
    per_d = Counter()
    for c in rep.components:
        per_d[c.d] += len(c.members)
    birational = ok
    for d, n in per_d.items():
        bs = bistable_subreps(ctx, KLR_M, d, guard)
        rep.bistable_counts[d] = len(bs)
        keys = {_key(F, b) for b in bs}
        mine = {images[i] for c in rep.components if c.d == d for i in c.members if i in images}
        if len(bs) != n or keys != mine:
            birational = False
    rep.birational = birational
    return rep
