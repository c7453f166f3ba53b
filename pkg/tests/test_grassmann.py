import itertools
import random

import pytest
from hypothesis import given, strategies as st

from nakajima.grassmann import (SizeGuardError, dimension_vectors, direct_fiber_count, enumerate_modules,
                                enumerate_subreps, fiber_count, fiber_pullback, gr_count, gr_nil_count,
                                l_variety_count, subspace_key)
from nakajima.kan import is_stable, kan
from nakajima.linalg import GF, gaussian_binomial
from nakajima.reps import free_module, is_isomorphic, random_module, semisimple


def test_extreme_dimensions(a2_f2):
    M = free_module(a2_f2.s, 0, bound=6)
    assert gr_count(M, [0] * a2_f2.s.n) == 1
    assert gr_count(M, M.dims) == 1


@pytest.mark.parametrize("p", [2, 3])
def test_semisimple_counts_are_gaussian_products(p):
    from nakajima.kan import KanContext
    from nakajima.quiver import DynkinQuiver
    ctx = KanContext.build(DynkinQuiver.parse("A2"), field=GF(p), max_degree=6)
    mult = [2, 1][:ctx.s.n] + [0] * max(0, ctx.s.n - 2)
    M = semisimple(ctx.s, mult)
    for d in dimension_vectors(M.dims):
        want = 1
        for n, k in zip(M.dims, d):
            want *= gaussian_binomial(n, k, p)
        assert gr_count(M, d) == want


def test_lines_in_the_plane(truncated_poly):
    assert gr_count(semisimple(truncated_poly.s, [2]), [1]) == 3


@given(st.integers(0, 10 ** 6))
def test_subreps_distinct_and_valid(a2_f2, seed):
    M = random_module(a2_f2.s, random.Random(seed), 3)
    for d in dimension_vectors(M.dims):
        subs = enumerate_subreps(M, d)
        keys = subs.keys()
        assert len(set(keys)) == len(keys)
        assert all(N.is_valid() for N in subs.modules())
        assert gr_nil_count(M, d) <= subs.count


def test_brute_force_subspaces_of_uniserial(truncated_poly):
    # k[x]/x^3 has exactly one submodule of each dimension
    M = free_module(truncated_poly.s, 0)
    assert [gr_count(M, [k]) for k in range(4)] == [1, 1, 1, 1]


@given(st.integers(0, 10 ** 6))
def test_pullback_endpoints(a2_f2, seed):
    ctx = a2_f2
    F = ctx.field
    M = random_module(ctx.s, random.Random(seed), 3)
    res = kan(ctx, M)
    zero = [F.zeros(n, 0) for n in res.CK.dims]
    full = [F.eye(n) for n in res.CK.dims]
    assert is_isomorphic(fiber_pullback(ctx, M, zero, res), res.KLR)
    assert fiber_pullback(ctx, M, full, res).dims == res.KR.dims


def test_distinct_submodules_give_distinct_points(a2_f2):
    ctx = a2_f2
    F = ctx.field
    rng = random.Random(3)
    for _ in range(5):
        M = random_module(ctx.s, rng, 3)
        res = kan(ctx, M)
        for d in dimension_vectors(res.CK.dims):
            subs = enumerate_subreps(res.CK, d).subreps
            pts = [fiber_pullback(ctx, M, X, res) for X in subs]
            keys = {tuple(subspace_key(F, b) for b in N.basis) for N in pts}
            assert len(keys) == len(pts)
            assert all(is_stable(ctx, N) for N in pts)


def test_fiber_counts_agree(a2_f2):
    ctx = a2_f2
    rng = random.Random(7)
    for _ in range(4):
        M = random_module(ctx.s, rng, 2)
        res = kan(ctx, M)
        v0 = res.KLR.v()
        ck = [res.CK.dims[x] for x in ctx.nonfrozen_objects]
        for dv in itertools.product(*(range(c + 1) for c in ck)):
            v = tuple(a + b for a, b in zip(v0, dv))
            assert fiber_count(ctx, M, v, res) == direct_fiber_count(ctx, M, v, res)


def test_l_variety_unit(a2_f2):
    ctx = a2_f2
    for s in ctx.s.objects:
        w = [int(t == s) for t in ctx.s.objects]
        x = next(x for x in ctx.p.objects if ctx.frozen_of(x) == s)
        v = [int(y == x) for y in ctx.p.objects]
        rep = l_variety_count(ctx, v, w)
        assert rep.ok and rep.count == 1


def test_size_guard(a2_f2):
    M = semisimple(a2_f2.s, [4] + [0] * (a2_f2.s.n - 1))
    with pytest.raises(SizeGuardError):
        gr_count(M, [2] + [0] * (a2_f2.s.n - 1), guard=10)


def test_module_enumeration_truncated_poly(truncated_poly):
    # k[x]/x^3: modules of dimension 2 are k[x]/x^2 and k + k
    assert len(enumerate_modules(truncated_poly.s, [2], GF(2))) == 2
    assert len(enumerate_modules(truncated_poly.s, [3], GF(2))) == 3
    with pytest.raises(ValueError):
        from nakajima.linalg import QQ
        enumerate_modules(truncated_poly.s, [1], QQ)
