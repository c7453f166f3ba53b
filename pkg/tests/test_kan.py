import random

import pytest
from hypothesis import given, strategies as st

from nakajima.kan import (KanContext, TruncationError, closed_orbit_normal_form, cq_rank, degeneration_leq, is_stable,
                          kan, kan_left, kan_left_dual, kk, ck_is_sigma_kk, multiplicity_prediction, stratum_of)
from nakajima.quiver import DynkinQuiver
from nakajima.reps import (direct_sum, free_module, is_isomorphic, projective_decomposition, random_basis_change,
                           random_module, restrict, semisimple, simple, zero_module)

seeds = st.integers(0, 10 ** 6)


@given(seeds)
def test_left_kan_two_constructions_agree(a2, seed):
    M = random_module(a2.s, random.Random(seed), 3)
    assert is_isomorphic(kan_left(a2, M), kan_left_dual(a2, M))


@given(seeds)
def test_restriction_of_kan_extensions(a2, seed):
    M = random_module(a2.s, random.Random(seed), 3)
    res = kan(a2, M)
    for K in (res.KL, res.KR, res.KLR):
        assert is_isomorphic(restrict(K, a2.s), M)


@given(seeds)
def test_kan_is_additive(a2, seed):
    rng = random.Random(seed)
    M, N = random_module(a2.s, rng, 2), random_module(a2.s, rng, 2)
    S = kan(a2, direct_sum(M, N)).KLR
    assert is_isomorphic(S, direct_sum(kan(a2, M).KLR, kan(a2, N).KLR))


@given(seeds)
def test_kk_prediction_and_sigma(a3, seed):
    M = random_module(a3.s, random.Random(seed), 3)
    res = kan(a3, M)
    assert projective_decomposition(kk(a3, M, res)) == multiplicity_prediction(a3, M, res)
    assert ck_is_sigma_kk(a3, M, res)


def test_zero_module(a2):
    res = kan(a2, zero_module(a2.s))
    assert res.KLR.is_zero() and res.KK.is_zero() and res.CK.is_zero()


def test_stability_of_simples(a2):
    for x in a2.nonfrozen_objects:
        assert not is_stable(a2, simple(a2.r, x))
    for x in a2.frozen_objects:
        assert is_stable(a2, simple(a2.r, x))


@given(seeds)
def test_kan_lr_is_stable(a2, seed):
    M = random_module(a2.s, random.Random(seed), 3)
    assert is_stable(a2, kan(a2, M).KLR)


@given(seeds)
def test_stratum_invariant_under_basis_change(a2, seed):
    rng = random.Random(seed)
    M = random_module(a2.s, rng, 3)
    assert stratum_of(a2, M) == stratum_of(a2, random_basis_change(M, rng))


def test_semisimple_point_has_trivial_stratum(a2):
    w = [1] * a2.s.n
    sw = semisimple(a2.s, w)
    assert all(c == 0 for c in stratum_of(a2, sw))
    for x in a2.s.objects:
        M = free_module(a2.s, x, bound=2)
        if M.dims == tuple(w):
            assert degeneration_leq(a2, sw, M)


def test_cq_full_rank(a2, a3):
    assert cq_rank(a2) == a2.p.n
    assert cq_rank(a3) == a3.p.n


def test_closed_orbit_adds_simple(a2):
    M = semisimple(a2.s, [1] * a2.s.n)
    KLR = kan(a2, M).KLR
    x = a2.nonfrozen_objects[0]
    N = direct_sum(KLR, simple(a2.r, x))
    pt = closed_orbit_normal_form(a2, N)
    assert dict(pt.ss_part) == {0: 1}


def test_klr_of_simple_is_simple(a2):
    for x in a2.s.objects:
        K = kan(a2, simple(a2.s, x)).KLR
        assert K.total_dim == 1
        assert K.dims[a2.s.parent_objects[x]] == 1


def test_truncation_guard():
    ctx = KanContext.build(DynkinQuiver.parse("A2"), max_degree=3)
    M = free_module(ctx.s, 0, bound=3)
    with pytest.raises(TruncationError):
        kan(ctx, M)
