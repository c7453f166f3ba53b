import pytest

from nakajima.desing import NotSelfInjective, check_desing_surjective, components
from nakajima.grassmann import dimension_vectors
from nakajima.reps import free_module, semisimple, simple


def test_zero_dimension_vector(truncated_poly):
    M = free_module(truncated_poly.s, 0)
    rep = check_desing_surjective(truncated_poly, M, [0])
    assert rep.ok and len(rep.components) == 1
    assert all(n == 0 for n in rep.components[0].d)


def test_simple_module(truncated_poly):
    rep = check_desing_surjective(truncated_poly, simple(truncated_poly.s, 0), [1])
    assert rep.ok and len(rep.components) == 1


def test_uniserial_free_module(truncated_poly):
    M = free_module(truncated_poly.s, 0)
    for e in dimension_vectors(M.dims):
        rep = check_desing_surjective(truncated_poly, M, e)
        assert rep.ok and len(rep.components) == 1


def test_semisimple_plane(truncated_poly):
    rep = check_desing_surjective(truncated_poly, semisimple(truncated_poly.s, [2]), [1])
    assert rep.ok
    assert sum(len(c.members) for c in rep.components) == 3
    assert sum(rep.bistable_counts.values()) == 3


def test_refuses_infinite_s(a2_f2):
    M = simple(a2_f2.s, 0)
    with pytest.raises(NotSelfInjective):
        components(a2_f2, M, [1] + [0] * (a2_f2.s.n - 1))
    assert check_desing_surjective(a2_f2, M, [1] + [0] * (a2_f2.s.n - 1), allow_infinite=True).ok
