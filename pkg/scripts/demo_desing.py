"""Desingularization check for S = k[x]/x^3 over F_2 (A2, F = tau, C = orbit of (1,0))."""
from nakajima.desing import check_desing_surjective
from nakajima.grassmann import dimension_vectors, modules_up_to_dim
from nakajima.kan import KanContext
from nakajima.linalg import GF
from nakajima.quiver import Configuration, DynkinQuiver, ZVertex

ctx = KanContext.build(DynkinQuiver.parse("A2"), config=Configuration((ZVertex(1, 0),)),
                       field=GF(2), max_degree=10)
for M in modules_up_to_dim(ctx.s, GF(2), 3):
    for e in dimension_vectors(M.dims):
        rep = check_desing_surjective(ctx, M, e)
        comps = [(len(c.members), c.d) for c in rep.components]
        print(f"M dims {M.dims} e {list(e)}: classes {comps}  bistable {dict(rep.bistable_counts)}  "
              f"ok {rep.ok}")
