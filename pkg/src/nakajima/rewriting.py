"""Normal words of a path algebra modulo homogeneous relations.

A small noncommutative Buchberger procedure on a quiver with weighted arrows.
Words are tuples of arrow indices in path order.  The monomial order is
(weighted degree, length, lexicographic), which is multiplicative, so the
usual overlap rule produces a Groebner basis.  Relations must be homogeneous
for the weighting; everything is truncated at ``max_degree``, which keeps the
result exact in degrees up to the bound.

This module does not look at any category: it is used as an independent
oracle for algebra dimensions.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .linalg import QQ, Field


@dataclass(frozen=True)
class WeightedQuiver:
    vertices: tuple
    arrows: tuple  # (source, target, weight)

    def source(self, word, default=None):
        return self.arrows[word[0]][0] if word else default

    def target(self, word, default=None):
        return self.arrows[word[-1]][1] if word else default

    def weight(self, word) -> int:
        return sum(self.arrows[a][2] for a in word)

    def is_path(self, word) -> bool:
        return all(self.arrows[a][1] == self.arrows[b][0] for a, b in zip(word, word[1:]))


def _key(quiver, word):
    return (quiver.weight(word), len(word), word)


def _lead(quiver, poly):
    return max(poly, key=lambda w: _key(quiver, w))


def _normalise(field, quiver, poly):
    poly = {w: c for w, c in poly.items() if c != 0}
    if not poly:
        return None
    lw = _lead(quiver, poly)
    inv = field.elem(1) / poly[lw]
    return {w: c * inv for w, c in poly.items()}


def _find(word, sub):
    n, m = len(word), len(sub)
    for i in range(n - m + 1):
        if word[i:i + m] == sub:
            return i
    return -1


def _reduce(field, quiver, poly, basis):
    """Full reduction of ``poly`` by a list of monic polynomials."""
    poly = dict(poly)
    out = {}
    while poly:
        lw = _lead(quiver, poly)
        c = poly.pop(lw)
        if c == 0:
            continue
        for lead, g in basis:
            i = _find(lw, lead)
            if i >= 0:
                pre, post = lw[:i], lw[i + len(lead):]
                for w, gc in g.items():
                    if w == lead:
                        continue
                    nw = pre + w + post
                    poly[nw] = poly.get(nw, field.elem(0)) - c * gc
                break
        else:
            out[lw] = c
    return {w: c for w, c in out.items() if c != 0}


def groebner(quiver: WeightedQuiver, relations, max_degree: int, field: Field = QQ):
    """Reduced Groebner basis (up to ``max_degree``) as a list of ``(lead, poly)``."""
    basis = []
    todo = []
    for r in relations:
        r = _normalise(field, quiver, r)
        if r is not None:
            todo.append(r)
    seen_pairs = set()
    while todo:
        todo.sort(key=lambda p: _key(quiver, _lead(quiver, p)))
        p = todo.pop(0)
        p = _reduce(field, quiver, p, basis)
        p = _normalise(field, quiver, p) if p else None
        if p is None:
            continue
        lead = _lead(quiver, p)
        if quiver.weight(lead) > max_degree:
            continue
        new = (lead, p)
        # inter-reduce old elements whose lead contains the new lead
        keep = []
        for l2, g2 in basis:
            if _find(l2, lead) >= 0:
                todo.append(g2)
            else:
                keep.append((l2, g2))
        basis = keep + [new]
        # overlaps of the new element with every basis element (both orders, and itself)
        for l2, g2 in basis:
            for (la, ga), (lb, gb) in (((lead, p), (l2, g2)), ((l2, g2), (lead, p))):
                key = (la, lb)
                if key in seen_pairs:
                    continue
                seen_pairs.add(key)
                for k in range(1, min(len(la), len(lb))):
                    if la[-k:] == lb[:k]:
                        word = la + lb[k:]
                        if quiver.weight(word) > max_degree:
                            continue
                        # S-polynomial: ga * lb[k:] - la[:-k] * gb
                        s = defaultdict(lambda: field.elem(0))
                        for w, c in ga.items():
                            s[w + lb[k:]] += c
                        for w, c in gb.items():
                            s[la[:-k] + w] -= c
                        s = {w: c for w, c in s.items() if c != 0}
                        if s:
                            todo.append(s)
    # final inter-reduction of tails
    out = []
    for lead, g in basis:
        others = [(l2, g2) for l2, g2 in basis if l2 != lead]
        tail = _reduce(field, quiver, {w: c for w, c in g.items() if w != lead}, others)
        tail[lead] = field.elem(1)
        out.append((lead, tail))
    out.sort(key=lambda e: _key(quiver, e[0]))
    return out


def normal_words(quiver: WeightedQuiver, leads, max_degree: int):
    """All paths of weight <= max_degree avoiding every lead word as a subword.

    Trivial paths are included as ``((), vertex)``.
    """
    leads = list(leads)
    out = [((), v) for v in quiver.vertices]
    stack = [(a,) for a in range(len(quiver.arrows)) if quiver.arrows[a][2] <= max_degree]
    while stack:
        w = stack.pop()
        if any(w[-len(l):] == l for l in leads if len(l) <= len(w)):
            continue
        out.append((w, None))
        wt = quiver.weight(w)
        t = quiver.arrows[w[-1]][1]
        for a, (s, _, aw) in enumerate(quiver.arrows):
            if s == t and wt + aw <= max_degree:
                stack.append(w + (a,))
    return out


def normal_form_counts(quiver: WeightedQuiver, relations, max_degree: int, field: Field = QQ):
    """``{(source, target, weight): number of normal words}`` up to ``max_degree``."""
    gb = groebner(quiver, relations, max_degree, field)
    counts = defaultdict(int)
    for w, v in normal_words(quiver, [l for l, _ in gb], max_degree):
        if not w:
            counts[(v, v, 0)] += 1
        else:
            counts[(quiver.source(w), quiver.target(w), quiver.weight(w))] += 1
    return dict(counts)


def parse_relations(quiver_names: dict, text_relations, field: Field = QQ):
    """Relations like ``"d d d - f g"`` over named arrows (names separated by spaces).

    ``quiver_names`` maps names to arrow indices; words are read left to right
    in path order.  Terms are separated by `` + `` / `` - ``.
    """
    out = []
    for rel in text_relations:
        poly = {}
        terms = []
        cur, sgn = [], 1
        for tok in rel.replace("+", " + ").replace("-", " - ").split():
            if tok in "+-":
                if cur:
                    terms.append((sgn, cur))
                cur, sgn = [], (1 if tok == "+" else -1)
            else:
                cur.append(tok)
        if cur:
            terms.append((sgn, cur))
        for sgn, names in terms:
            coef = 1
            if names and names[0].lstrip("-").isdigit():
                coef = int(names[0])
                names = names[1:]
            w = tuple(quiver_names[n] for n in names)
            poly[w] = poly.get(w, field.elem(0)) + field.elem(sgn * coef)
        out.append(poly)
    return out
