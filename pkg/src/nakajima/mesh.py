"""Hom spaces of the graded Nakajima category (paths in ZQ_C modulo meshes).

For a fixed source ``a`` the functor ``R(a, ?)`` is computed one height layer
at a time.  At a frozen vertex nothing is imposed, so ``R(a, s)`` is the sum of
``R(a, y)`` over arrows ``y -> s``.  At a non-frozen vertex ``b`` the mesh
relation makes ``R(a, b)`` the cokernel of

    R(a, tau b) -> (+)_{y -> b} R(a, y),   v |-> (A_{tau b -> y} v)_y.

Cokernels are taken by keeping standard coordinates, so every basis element
is (the class of) a single path.  The relation is the all-plus sum of the
two-step paths through the mesh.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .linalg import QQ, Field
from .quiver import (AutoSpec, Configuration, DynkinQuiver, QuiverError, Window, ZQC, ZVertex,
                     apply_F, tau)

SIGN_CONVENTION = "mesh relation R_x = sum over arrows y->x of (y->x)(tau x->y), all signs +"


class WindowExhausted(QuiverError):
    pass


Path = tuple  # tuple of ZVertex, from source to target


class HomFrom:
    """The representable functor R(a, ?) on the whole of ZQ_C."""

    def __init__(self, zqc: ZQC, a: ZVertex, field: Field = QQ, guard: int | None = None,
                 max_degree: int | None = None):
        self.zqc, self.a, self.field = zqc, a, field
        h0 = zqc.height(a)
        self.h0 = h0
        self.dims: dict[ZVertex, int] = {a: 1}
        self.bases: dict[ZVertex, list[Path]] = {a: [(a,)]}
        self.arrows: dict[tuple[ZVertex, ZVertex], object] = {}
        self.layers: list[list[ZVertex]] = [[a]]
        guard = guard if guard is not None else 4 * zqc.q.coxeter_number + 8
        F = field
        m = h0
        while True:
            m += 1
            if max_degree is not None and m - h0 > max_degree:
                break
            if max_degree is None and m - h0 > guard:
                raise WindowExhausted(f"Hom support from {a} exceeds {guard} layers")
            layer = []
            for b in zqc.layer(m):
                preds = [y for y in zqc.predecessors(b) if self.dims.get(y, 0)]
                if not preds:
                    continue
                sizes = [self.dims[y] for y in preds]
                total = sum(sizes)
                if b.frozen:
                    kept = list(range(total))
                    proj = F.eye(total)
                else:
                    t = tau(b)
                    dt = self.dims.get(t, 0)
                    if dt:
                        rel = F.vstack([self.arrow_matrix(t, y) for y in preds], dt)
                        kept, proj = F.complement(rel, total)
                    else:
                        kept, proj = list(range(total)), F.eye(total)
                if not kept:
                    continue
                offs, basis = [], []
                o = 0
                for y, s in zip(preds, sizes):
                    offs.append(o)
                    o += s
                flat = [(y, p) for y in preds for p in self.bases[y]]
                for k in kept:
                    basis.append(flat[k][1] + (b,))
                self.dims[b] = len(kept)
                self.bases[b] = basis
                for y, o, s in zip(preds, offs, sizes):
                    self.arrows[(y, b)] = F.columns(proj, range(o, o + s))
                layer.append(b)
            if not layer:
                break
            self.layers.append(layer)
        self.top = m - 1
        self.truncated = max_degree is not None
        self._path_cache: dict[Path, object] = {}

    # ------------------------------------------------------------------
    def dim(self, b: ZVertex) -> int:
        return self.dims.get(b, 0)

    def basis(self, b: ZVertex) -> list[Path]:
        return self.bases.get(b, [])

    def support(self) -> list[ZVertex]:
        return [b for layer in self.layers for b in layer]

    def arrow_matrix(self, y: ZVertex, b: ZVertex):
        m = self.arrows.get((y, b))
        if m is None:
            return self.field.zeros(self.dim(b), self.dim(y))
        return m

    def path_matrix(self, path: Path):
        """Post-composition with a path, as a map R(a, path[0]) -> R(a, path[-1])."""
        if len(path) == 1:
            return self.field.eye(self.dim(path[0]))
        hit = self._path_cache.get(path)
        if hit is not None:
            return hit
        m = self.arrow_matrix(path[-2], path[-1]) * self.path_matrix(path[:-1])
        self._path_cache[path] = m
        return m

    def path_vector(self, path: Path):
        """Coordinates of a path starting at a."""
        assert path[0] == self.a
        return self.path_matrix(path) * self.field.unit_column(1, 0)


class GradedCategory:
    """Memoised access to R^gr_C(x, y) with path bases."""

    def __init__(self, zqc: ZQC, field: Field = QQ, max_degree: int | None = None):
        self.zqc, self.field, self.max_degree = zqc, field, max_degree
        self._cache: dict[ZVertex, HomFrom] = {}
        self._lock = threading.Lock()

    @property
    def q(self) -> DynkinQuiver:
        return self.zqc.q

    def hom_from(self, a: ZVertex) -> HomFrom:
        hf = self._cache.get(a)
        if hf is None:
            hf = HomFrom(self.zqc, a, self.field, max_degree=self.max_degree)
            with self._lock:
                self._cache[a] = hf
        return hf

    def dim(self, x: ZVertex, y: ZVertex) -> int:
        return self.hom_from(x).dim(y)

    def basis(self, x: ZVertex, y: ZVertex) -> list[Path]:
        return self.hom_from(x).basis(y)

    def compose_paths(self, x: ZVertex, path_f: Path, path_g: Path):
        """Coordinates of g o f in R(x, target g) for basis paths f, g."""
        hf = self.hom_from(x)
        return hf.path_matrix(path_g) * hf.path_vector(path_f)

    def postcompose_matrix(self, x: ZVertex, path_g: Path):
        """Matrix of f |-> g o f from R(x, y) to R(x, z) for a path g: y -> z."""
        return self.hom_from(x).path_matrix(path_g)

    def precompose_matrix(self, y: ZVertex, x: ZVertex, z: ZVertex):
        """Matrix of f |-> f o alpha, R(x, z) -> R(y, z), alpha the arrow y -> x."""
        hy = self.hom_from(y)
        alpha = hy.path_vector((y, x))
        cols = [hy.path_matrix(p) * alpha for p in self.basis(x, z)]
        if not cols:
            return self.field.zeros(hy.dim(z), 0)
        return self.field.hstack(cols, hy.dim(z))


# --------------------------------------------------------------------------
# window-level API
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PathSpace:
    source: ZVertex
    target: ZVertex
    basis: tuple[Path, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class MeshMorphism:
    source: ZVertex
    target: ZVertex
    coeffs: tuple  # field elements in the hom basis


_window_cats: dict[tuple, GradedCategory] = {}


def category_for(q: DynkinQuiver, config: Configuration, f: AutoSpec | None = None,
                 field: Field = QQ, max_degree: int | None = None) -> GradedCategory:
    key = (q, config, f or AutoSpec.tau(), field, max_degree)
    cat = _window_cats.get(key)
    if cat is None:
        cat = GradedCategory(ZQC(q, config, f), field, max_degree)
        _window_cats[key] = cat
    return cat


def _hom_upto(w: Window, x: ZVertex, y: ZVertex, field: Field) -> HomFrom:
    """R(x, ?) computed up to the height of y (enough to know R(x, y))."""
    zqc = w.zqc
    deg = max(0, zqc.height(y) - zqc.height(x))
    return category_for(w.quiver, w.config, w.f, field, deg).hom_from(x)


def _support_inside(w: Window, hf: HomFrom) -> bool:
    return all(w.contains(b) for b in hf.support())


def hom_basis(w: Window, x: ZVertex, y: ZVertex, field: Field = QQ, retries: int = 3) -> PathSpace:
    """Path basis of R^gr(x, y); every vertex on a nonzero path must lie in the window.

    The window is widened by the Coxeter number up to ``retries`` times.
    """
    hf = _hom_upto(w, x, y, field)
    for _ in range(retries + 1):
        if w.contains(x) and w.contains(y) and _support_inside(w, hf):
            return PathSpace(x, y, tuple(hf.basis(y)))
        w = w.extended(w.quiver.coxeter_number)
    raise WindowExhausted(f"Hom({x},{y}) does not fit in the window")


def compose(cat: GradedCategory, f: MeshMorphism, g: MeshMorphism) -> MeshMorphism:
    """g o f."""
    if f.target != g.source:
        raise QuiverError("mismatched endpoints")
    F = cat.field
    x, y, z = f.source, f.target, g.target
    hx = cat.hom_from(x)
    fv = F.column(f.coeffs) if f.coeffs else F.zeros(0, 1)
    out = F.zeros(hx.dim(z), 1)
    for c, p in zip(g.coeffs, cat.basis(y, z)):
        if c != 0:
            out += hx.path_matrix(p) * fv * F.elem(c)
    return MeshMorphism(x, z, tuple(out[i, 0] for i in range(out.nrows())))


def basis_morphism(cat: GradedCategory, x: ZVertex, y: ZVertex, k: int) -> MeshMorphism:
    n = cat.dim(x, y)
    return MeshMorphism(x, y, tuple(cat.field.elem(1 if i == k else 0) for i in range(n)))


def orbit_hom_dim(w: Window, f: AutoSpec, x: ZVertex, y: ZVertex, field: Field = QQ,
                  max_degree: int | None = None):
    """``sum_i dim R^gr(x, F^i y)`` and the list of contributing i.

    Without ``max_degree`` the sum must be finite; when ``R^gr(x, ?)`` has
    unbounded support (e.g. C = all vertices) this raises ``WindowExhausted``.
    With ``max_degree`` only the terms of degree at most that bound count.
    """
    zqc = ZQC(w.quiver, w.config, f)
    hf = category_for(w.quiver, w.config, f, field, max_degree).hom_from(x)
    total, contrib = 0, []
    limit = 4 * w.quiver.coxeter_number + 8
    for direction in (1, -1):
        i = 0 if direction == 1 else -1
        steps = zeros = 0
        while zeros < 2:
            steps += 1
            if steps > limit:
                raise WindowExhausted("orbit scan did not terminate")
            t = apply_F(w.quiver, f, y, i)
            d = hf.dim(t)
            if d:
                total += d
                contrib.append(i)
            if zqc.height(t) > hf.top or zqc.height(t) < hf.h0:
                zeros += 1
            i += direction
    return total, sorted(contrib)
