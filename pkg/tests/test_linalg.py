import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from nakajima.linalg import GF, QQ, Field, gaussian_binomial


def int_matrices(max_side=5, lo=-3, hi=3):
    return st.integers(1, max_side).flatmap(lambda r: st.integers(1, max_side).flatmap(
        lambda c: st.lists(st.integers(lo, hi), min_size=r * c, max_size=r * c).map(lambda e: (r, c, e))))


def _gf2_rank(rows):
    """Rank over F_2 by xor elimination on bit masks (test oracle)."""
    basis = []
    for r in rows:
        v = int("".join(str(b % 2) for b in r), 2) if r else 0
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@given(int_matrices())
def test_rank_matches_sympy(m):
    r, c, e = m
    assert QQ.rank(QQ.mat(r, c, e)) == sympy.Matrix(r, c, e).rank()


@given(int_matrices())
def test_nullspace_is_kernel(m):
    r, c, e = m
    a = QQ.mat(r, c, e)
    ns = QQ.nullspace(a)
    assert ns.ncols() == c - QQ.rank(a)
    assert QQ.is_zero(a * ns)
    assert QQ.rank(ns) == ns.ncols()


@given(int_matrices(lo=0, hi=1))
def test_rank_over_f2_matches_xor_elimination(m):
    r, c, e = m
    rows = [e[i * c:(i + 1) * c] for i in range(r)]
    assert GF(2).rank(GF(2).mat(r, c, e)) == _gf2_rank(rows)


@given(int_matrices(), st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_coordinates_recover_combination(m, coeffs):
    r, c, e = m
    a = QQ.column_basis(QQ.mat(r, c, e))
    k = a.ncols()
    x = QQ.mat(k, 1, coeffs[:k]) if k else QQ.mat(0, 1)
    assert QQ.coordinates(a, a * x) == x


def test_coordinates_outside_span():
    a = QQ.mat(2, 1, [1, 0])
    with pytest.raises(ValueError):
        QQ.coordinates(a, QQ.mat(2, 1, [0, 1]))


@given(int_matrices())
def test_complement_completes_span(m):
    r, c, e = m
    a = QQ.mat(r, c, e)
    kept, proj = QQ.complement(a)
    assert len(kept) == r - QQ.rank(a)
    assert QQ.is_zero(proj * a)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_gaussian_binomial_counts_row_spaces(p, n):
    F = GF(p)
    for k in range(n + 1):
        spaces = set()
        for e in itertools.product(range(p), repeat=k * n):
            m = F.mat(k, n, list(e))
            if F.rank(m) == k:
                spaces.add(tuple(F.row_space(m).entries()))
        assert len(spaces) == gaussian_binomial(n, k, p)


def test_field_tags():
    assert Field.parse("Q") is QQ and Field.parse("F2") == GF(2) and Field.parse("GF3") == GF(3)
    with pytest.raises(ValueError):
        Field.parse("F4")
    with pytest.raises(ValueError):
        Field.parse("R")


@given(st.fractions(max_denominator=50))
def test_scalar_round_trip(x):
    assert Fraction(str(QQ.to_python(QQ.from_python(str(x))))) == x
