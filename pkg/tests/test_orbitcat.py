import json

import pytest

from nakajima.linalg import GF
from nakajima.orbitcat import (BuildConfig, build_all, mesh_orbit_category, path_category, present,
                               relation_vanishes)
from nakajima.quiver import AutoSpec, Configuration, DynkinQuiver, ZVertex


@pytest.fixture(scope="module")
def p_a3():
    return mesh_orbit_category(DynkinQuiver.parse("A3"), AutoSpec.tau())


def test_p_a3_dimensions(p_a3):
    # preprojective algebra of A_n has dimension n(n+1)(n+2)/6
    assert p_a3.total_dim() == 10
    assert p_a3.hilbert() == [[1, 1, 1], [1, 1, 1], [1, 1, 2]]
    assert mesh_orbit_category(DynkinQuiver.parse("A2"), AutoSpec.tau()).total_dim() == 4


def test_associative(p_a3, a2):
    assert p_a3.check_associative()
    assert a2.r.check_associative()
    assert a2.s.check_associative()


def test_truncated_polynomial(truncated_poly):
    s = truncated_poly.s
    assert s.n == 1 and s.hilbert() == [[3]]
    assert s.max_degree is None


@pytest.mark.parametrize("auto", [AutoSpec.tau(), AutoSpec.cluster()])
def test_relations_vanish(auto):
    cfg = BuildConfig(DynkinQuiver.parse("A2"), auto=auto, max_degree=8)
    for c in build_all(cfg):
        pres = present(c)
        assert all(relation_vanishes(c, pres.arrows, rel) for rel in pres.relations)


def test_path_category_a3():
    c = path_category(DynkinQuiver.parse("A3"))
    assert c.total_dim() == 6 and c.check_associative()
    pres = present(c)
    assert pres.relations == [] and sum(map(sum, pres.arrow_counts)) == 2


def test_opposite_transposes_hilbert(a2):
    h = a2.r.hilbert()
    assert a2.r.opposite().hilbert() == [list(r) for r in zip(*h)]


def test_to_json_serialisable(a2, truncated_poly):
    for c in (a2.r, a2.s, truncated_poly.s):
        json.dumps(c.to_json())
        json.dumps(present(c).to_json(c.field))


def test_frozen_count(a2_cluster):
    cfg = BuildConfig(DynkinQuiver.parse("A2"), config=Configuration((ZVertex(1, 0),)), field=GF(2),
                      max_degree=8)
    r, s, p = build_all(cfg)
    assert s.n == sum(r.frozen) == 1
    assert p.n == r.n - s.n
