import pytest
from hypothesis import given, strategies as st

from nakajima.quiver import (AutoSpec, Configuration, DynkinQuiver, QuiverError, Window, ZQC, ZVertex,
                             apply_F, check_admissible, height, height_shift, parse_auto, sigma,
                             sigma_inv, sigma_shift, tau)

TAGS = ["A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "E8"]


@st.composite
def type_a(draw, max_rank=7):
    n = draw(st.integers(1, max_rank))
    arrows = [(i, i + 1) if draw(st.booleans()) else (i + 1, i) for i in range(1, n)]
    return DynkinQuiver.standard("A", n, arrows)


@pytest.mark.parametrize("tag,h", [("A1", 2), ("A3", 4), ("D4", 6), ("D5", 8), ("E6", 12), ("E7", 18), ("E8", 30)])
def test_coxeter_number(tag, h):
    assert DynkinQuiver.parse(tag).coxeter_number == h


def test_rejects_non_dynkin():
    with pytest.raises(QuiverError):
        DynkinQuiver.standard("A", 3, [(1, 2), (2, 3), (3, 1)])
    with pytest.raises(QuiverError):
        DynkinQuiver.parse("B2")
    with pytest.raises(QuiverError):
        DynkinQuiver.standard("D", 3)


@given(type_a())
def test_heights_follow_arrows(q):
    for a, b in q.arrows:
        assert q.heights[b] == q.heights[a] + 1
    assert min(q.heights.values()) == 0


@given(type_a())
def test_quiver_json_round_trip(q):
    assert DynkinQuiver.from_json(q.to_json()) == q


@pytest.mark.parametrize("tag", TAGS)
def test_nakayama_involution_is_automorphism(tag):
    q = DynkinQuiver.parse(tag)
    phi = q.nakayama_involution
    assert q.is_automorphism(phi)
    assert all(phi[phi[i]] == i for i in q.vertices)


@pytest.mark.parametrize("tag", TAGS)
def test_sigma_squared_shifts_by_twice_h(tag):
    q = DynkinQuiver.parse(tag)
    for i in q.vertices:
        v = ZVertex(i, 0)
        w = sigma_shift(q, v, 2)
        assert w.base == i and height(q, w) == height(q, v) + 2 * q.coxeter_number


def test_sigma_frozen_pairing():
    v = ZVertex(2, 3)
    assert sigma(v).frozen and sigma_inv(sigma(v)) == v
    assert tau(v, 2) == ZVertex(2, 1)


AUTOS = [AutoSpec.tau(), AutoSpec.tau(2), AutoSpec.cluster(), AutoSpec(1, 1, None)]


@given(st.sampled_from(["A2", "A3", "D4", "E6"]), st.sampled_from(AUTOS),
       st.integers(-3, 3), st.integers(-3, 3))
def test_apply_F_is_invertible_and_shifts_height(tag, f, level, k):
    q = DynkinQuiver.parse(tag)
    for i in q.vertices:
        v = ZVertex(i, level)
        w = apply_F(q, f, v, k)
        assert apply_F(q, f, w, -k) == v
        assert height(q, w) == height(q, v) + k * height_shift(q, f)


@pytest.mark.parametrize("config", [Configuration.all(), Configuration((ZVertex(1, 0),))])
def test_predecessors_and_successors_agree(config):
    q = DynkinQuiver.parse("A3")
    w = Window.around(q, config, width=6)
    zqc = w.zqc
    for v in w.vertices:
        for u in zqc.predecessors(v):
            assert v in zqc.successors(u)


def test_canonical_representative_in_fundamental_domain():
    q = DynkinQuiver.parse("A3")
    zqc = ZQC(q, Configuration.all(), AutoSpec.cluster())
    for p in range(-4, 5):
        rep, k = zqc.canonical(ZVertex(2, p))
        assert 0 <= zqc.height(rep) < abs(zqc.delta)
        assert apply_F(q, zqc.f, ZVertex(2, p), k) == rep


def test_admissibility():
    q = DynkinQuiver.parse("A2")
    rep = check_admissible(Configuration.all(), AutoSpec.tau(), Window.around(q, Configuration.all()))
    assert rep.ok and rep.checked > 0
    finite = AutoSpec(2, 1, None)  # tau^2 Sigma on A3: height shift -4 + 4 = 0
    q3 = DynkinQuiver.parse("A3")
    bad = check_admissible(Configuration.all(), finite, Window.around(q3, Configuration.all(), finite))
    assert not bad.ok and bad.reason == "finite order"


def test_parse_auto():
    assert parse_auto("tau") == AutoSpec.tau()
    assert parse_auto("tau^3") == AutoSpec(3, 0, None)
    assert parse_auto("cluster") == parse_auto("Sigma*tau^-1") == AutoSpec(-1, 1, None)
    with pytest.raises(QuiverError):
        parse_auto("rho")


def test_window_dot_boxes_frozen_vertices():
    q = DynkinQuiver.parse("A2")
    w = Window.around(q, Configuration.all(), width=4)
    dot = w.to_dot()
    assert dot.count("shape=box") == sum(v.frozen for v in w.vertices) > 0
    assert dot.startswith("digraph")
