import pytest
from hypothesis import given, strategies as st

from nakajima.mesh import GradedCategory, hom_basis
from nakajima.oracle import euler_form, knitting_oracle, projective
from nakajima.quiver import Configuration, DynkinQuiver, Window, ZQC, ZVertex, nakayama_nu, tau


def _cat(tag, config=Configuration(())):
    q = DynkinQuiver.parse(tag)
    return q, GradedCategory(ZQC(q, config))


@pytest.mark.parametrize("tag", ["A4", "D5", "E6"])
def test_hom_dims_match_knitting(tag):
    q, cat = _cat(tag)
    oracle = knitting_oracle(q)
    vs = Window.around(q, Configuration(()), width=q.coxeter_number + 2).vertices
    for x in vs:
        for y in vs:
            assert cat.dim(x, y) == oracle.dim_hom(x, y)
            assert cat.dim(x, y) == cat.dim(y, nakayama_nu(q, x))


@given(st.sampled_from(["A3", "D4"]), st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 4), st.integers(1, 4))
def test_translation_invariance(tag, p1, p2, i, j):
    q, cat = _cat(tag)
    i, j = min(i, q.rank), min(j, q.rank)
    x, y = ZVertex(i, p1), ZVertex(j, p2)
    assert cat.dim(x, y) == cat.dim(tau(x), tau(y))


def test_endomorphisms_and_mesh():
    q, cat = _cat("A3")
    for i in q.vertices:
        x = ZVertex(i, 0)
        assert cat.dim(x, x) == 1
        # paths tau x -> x run through each neighbour; the mesh kills one combination
        assert cat.dim(tau(x), x) == len(q.neighbours[i]) - 1


def test_frozen_vertices_add_morphisms():
    q = DynkinQuiver.parse("A2")
    plain = GradedCategory(ZQC(q, Configuration(())), max_degree=8)
    framed = GradedCategory(ZQC(q, Configuration.all()), max_degree=8)
    x, y = ZVertex(1, 0), ZVertex(1, 2)
    assert framed.dim(x, y) > plain.dim(x, y)


def test_euler_form_of_projectives():
    q = DynkinQuiver.parse("A3")
    for i in q.vertices:
        d = projective(q, i).dimvec
        assert euler_form(q, d, d) == 1
