import itertools

from hypothesis import given, strategies as st

from nakajima.linalg import GF, QQ
from nakajima.rewriting import WeightedQuiver, groebner, normal_form_counts, parse_relations


def one_vertex(loops, weights=None):
    weights = weights or [1] * loops
    return WeightedQuiver((0,), tuple((0, 0, w) for w in weights))


def _by_degree(counts, D):
    return [sum(n for (_, _, d), n in counts.items() if d == k) for k in range(D + 1)]


def test_single_loop():
    assert _by_degree(normal_form_counts(one_vertex(1), [], 6), 6) == [1] * 7


def test_commuting_loops():
    q = one_vertex(2)
    rel = parse_relations({"x": 0, "y": 1}, ["x y - y x"])
    assert _by_degree(normal_form_counts(q, rel, 7), 7) == [d + 1 for d in range(8)]


def test_free_algebra():
    assert _by_degree(normal_form_counts(one_vertex(2), [], 6), 6) == [2 ** d for d in range(7)]


def test_truncated_polynomial():
    rel = parse_relations({"x": 0}, ["x x x"], GF(2))
    assert _by_degree(normal_form_counts(one_vertex(1), rel, 8, GF(2)), 8) == [1, 1, 1] + [0] * 6


def test_weighted_degrees():
    q = one_vertex(2, [1, 2])
    rel = parse_relations({"x": 0, "y": 1}, ["x y - y x"])
    # k[x, y] with deg y = 2: partitions into parts 1 and 2
    assert _by_degree(normal_form_counts(q, rel, 6), 6) == [d // 2 + 1 for d in range(7)]


def test_groebner_completes_overlaps():
    # x y = y x and y y = x x force extra degree-3 consequences
    rel = parse_relations({"x": 0, "y": 1}, ["x y - y x", "y y - x x"])
    gb = groebner(one_vertex(2), rel, 5)
    assert len(gb) >= 2
    counts = _by_degree(normal_form_counts(one_vertex(2), rel, 5), 5)
    assert counts[:3] == [1, 2, 2]


def _brute_monomial(nloops, forbidden, D):
    out = [0] * (D + 1)
    for d in range(D + 1):
        for w in itertools.product(range(nloops), repeat=d):
            if not any(w[i:i + len(f)] == f for f in forbidden for i in range(d - len(f) + 1)):
                out[d] += 1
    return out


@given(st.integers(1, 3),
       st.lists(st.lists(st.integers(0, 2), min_size=1, max_size=3).map(tuple), max_size=3))
def test_monomial_relations_match_enumeration(nloops, forbidden):
    forbidden = [tuple(a % nloops for a in f) for f in forbidden]
    rels = [{f: QQ.elem(1)} for f in forbidden]
    D = 5
    got = _by_degree(normal_form_counts(one_vertex(nloops), rels, D), D)
    assert got == _brute_monomial(nloops, forbidden, D)


def test_path_algebra_of_a3():
    q = WeightedQuiver((1, 2, 3), ((1, 2, 1), (2, 3, 1)))
    counts = normal_form_counts(q, [], 4)
    assert sum(counts.values()) == 6
    rel = parse_relations({"a": 0, "b": 1}, ["a b"])
    assert sum(normal_form_counts(q, rel, 4).values()) == 5
