"""Kan extensions of a few random S-modules for A3, F = tau, C = all.

Prints dims of K_L, K_R, K_LR, the projective decomposition of KK and the
prediction w sigma - C_q v.
"""
import random

from nakajima.kan import KanContext, kan, kk, multiplicity_prediction
from nakajima.quiver import DynkinQuiver
from nakajima.reps import projective_decomposition, random_module

ctx = KanContext.build(DynkinQuiver.parse("A3"), max_degree=8)
print("P objects:", [repr(x) for x in ctx.p.labels])
rng = random.Random(1)
for _ in range(6):
    M = random_module(ctx.s, rng, 4)
    res = kan(ctx, M)
    got = dict(projective_decomposition(kk(ctx, M, res)))
    want = dict(multiplicity_prediction(ctx, M, res))
    print(f"M {M.dims}  K_L {res.KL.dims}  K_R {res.KR.dims}  K_LR {res.KLR.dims}  "
          f"KK {got}  predicted {want}")
