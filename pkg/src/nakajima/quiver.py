"""Dynkin quivers, the repetition quiver ZQ_C and its automorphisms.

Vertices of ZQ are pairs ``(i, p)``; for every arrow ``i -> j`` of Q there are
arrows ``(i, p) -> (j, p)`` and ``(j, p) -> (i, p + 1)``.  A configuration C
adds a frozen vertex ``sigma(x) = (i', p - 1)`` for each ``x = (i, p)`` in C,
with arrows ``tau(x) -> sigma(x) -> x``.

Internally every vertex also has a *height*: choose ``h: Q_0 -> Z`` with
``h(j) = h(i) + 1`` along arrows, then ``(i, p)`` sits at ``2p + h(i)`` and
``(i', p)`` at ``2p + h(i) + 1``.  Every arrow raises the height by one and
tau lowers it by two, so Hom spaces can be computed layer by layer.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator


class QuiverError(ValueError):
    pass


class UnsupportedError(QuiverError):
    pass


class WindowTooSmall(QuiverError):
    pass


# --------------------------------------------------------------------------
# Dynkin quivers
# --------------------------------------------------------------------------

def _default_edges(kind: str, n: int) -> list[tuple[int, int]]:
    if kind == "A":
        return [(i, i + 1) for i in range(1, n)]
    if kind == "D":
        return [(i, i + 1) for i in range(1, n - 2)] + [(n - 2, n - 1), (n - 2, n)]
    if kind == "E":
        # Bourbaki labelling: 1-3-4-5-6(-7-8), with 2 attached to 4
        edges = [(1, 3), (3, 4), (2, 4)] + [(i, i + 1) for i in range(4, n)]
        return edges
    raise UnsupportedError(f"unknown Dynkin type {kind!r}")


def _classify(n: int, edges: list[tuple[int, int]]) -> tuple[str, int]:
    """ADE type of a tree on vertices 1..n, or raise."""
    adj = {i: set() for i in range(1, n + 1)}
    for a, b in edges:
        if a == b or a not in adj or b not in adj:
            raise QuiverError(f"bad edge {(a, b)}")
        adj[a].add(b)
        adj[b].add(a)
    if len(edges) != n - 1:
        raise QuiverError("underlying graph is not a tree")
    seen, todo = {1}, [1]
    while todo:
        v = todo.pop()
        for u in adj[v] - seen:
            seen.add(u)
            todo.append(u)
    if len(seen) != n:
        raise QuiverError("quiver is not connected")
    branch = [v for v in adj if len(adj[v]) >= 3]
    if not branch:
        return "A", n
    if len(branch) > 1 or len(adj[branch[0]]) > 3:
        raise QuiverError("not a Dynkin diagram")
    c = branch[0]
    legs = []
    for start in sorted(adj[c]):
        length, prev, cur = 1, c, start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        legs.append(length)
    legs.sort()
    if legs[:2] == [1, 1]:
        return "D", n
    if legs == [1, 2, 2]:
        return "E", 6
    if legs == [1, 2, 3]:
        return "E", 7
    if legs == [1, 2, 4]:
        return "E", 8
    raise QuiverError(f"not a Dynkin diagram (legs {legs})")


@dataclass(frozen=True)
class DynkinQuiver:
    """An orientation of an ADE diagram on vertices ``1..rank``."""

    kind: str
    rank: int
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        kind, rank = _classify(self.rank, [tuple(a) for a in self.arrows])
        if kind != self.kind or rank != self.rank:
            raise QuiverError(f"arrows form {kind}{rank}, declared {self.type_tag}")
        if self.kind == "D" and self.rank < 4:
            raise QuiverError("D_n needs n >= 4")

    @classmethod
    def standard(cls, kind: str, rank: int, arrows=None) -> "DynkinQuiver":
        kind = kind.upper()
        if arrows is None:
            arrows = _default_edges(kind, rank)
        return cls(kind, rank, tuple(tuple(a) for a in arrows))

    @classmethod
    def parse(cls, tag: str) -> "DynkinQuiver":
        """``"A3"``, ``"D4"``, ``"E6"`` with the default orientation."""
        tag = tag.strip().upper()
        return cls.standard(tag[0], int(tag[1:]))

    @property
    def type_tag(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @cached_property
    def coxeter_number(self) -> int:
        if self.kind == "A":
            return self.rank + 1
        if self.kind == "D":
            return 2 * self.rank - 2
        return {6: 12, 7: 18, 8: 30}[self.rank]

    @cached_property
    def neighbours(self) -> dict[int, tuple[int, ...]]:
        adj = {i: set() for i in self.vertices}
        for a, b in self.arrows:
            adj[a].add(b)
            adj[b].add(a)
        return {i: tuple(sorted(s)) for i, s in adj.items()}

    @cached_property
    def heights(self) -> dict[int, int]:
        h = {1: 0}
        todo = deque([1])
        while todo:
            v = todo.popleft()
            for a, b in self.arrows:
                if a == v and b not in h:
                    h[b] = h[v] + 1
                    todo.append(b)
                elif b == v and a not in h:
                    h[a] = h[v] - 1
                    todo.append(a)
        m = min(h.values())
        return {i: h[i] - m for i in self.vertices}

    @cached_property
    def legs(self) -> list[list[int]]:
        """Legs at the branch vertex, each listed outward from the centre."""
        c = next(v for v in self.vertices if len(self.neighbours[v]) == 3)
        out = []
        for start in self.neighbours[c]:
            leg, prev, cur = [start], c, start
            while True:
                nxt = [u for u in self.neighbours[cur] if u != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                leg.append(cur)
            out.append(leg)
        out.sort(key=len)
        return out

    @cached_property
    def nakayama_involution(self) -> dict[int, int]:
        """Diagram involution phi with Sigma(i, .) landing on phi(i)."""
        phi = {i: i for i in self.vertices}
        if self.kind == "A":
            ends = [v for v in self.vertices if len(self.neighbours[v]) <= 1]
            path, prev = [ends[0]], None
            while len(path) < self.rank:
                nxt = [u for u in self.neighbours[path[-1]] if u != prev]
                prev = path[-1]
                path.append(nxt[0])
            for a, b in zip(path, reversed(path)):
                phi[a] = b
        elif self.kind == "D" and self.rank % 2 == 1:
            a, b = self.legs[0][0], self.legs[1][0]
            phi[a], phi[b] = b, a
        elif self.kind == "E" and self.rank == 6:
            for a, b in zip(self.legs[1], self.legs[2]):
                phi[a], phi[b] = b, a
        return phi

    def is_automorphism(self, perm: dict[int, int]) -> bool:
        if sorted(perm.values()) != list(self.vertices):
            return False
        edges = {frozenset(a) for a in self.arrows}
        return {frozenset((perm[a], perm[b])) for a, b in self.arrows} == edges

    def to_json(self) -> dict:
        return {"type": self.kind, "rank": self.rank, "arrows": [list(a) for a in self.arrows]}

    @classmethod
    def from_json(cls, d: dict) -> "DynkinQuiver":
        return cls.standard(d["type"], int(d["rank"]), d.get("arrows"))


def build_framed(q: DynkinQuiver):
    """Framed quiver: vertices ``i`` and ``(i, "'")``, one arrow ``i -> i'`` each."""
    verts = list(q.vertices) + [f"{i}'" for i in q.vertices]
    arrows = [tuple(a) for a in q.arrows] + [(i, f"{i}'") for i in q.vertices]
    return verts, arrows


# --------------------------------------------------------------------------
# vertices of ZQ^f
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ZVertex:
    base: int
    level: int
    frozen: bool = False

    def __repr__(self):
        return f"({self.base}{chr(39) if self.frozen else ''},{self.level})"

    def to_json(self):
        return [f"{self.base}'" if self.frozen else self.base, self.level]

    @classmethod
    def from_json(cls, d) -> "ZVertex":
        b, p = d
        if isinstance(b, str) and b.endswith("'"):
            return cls(int(b[:-1]), int(p), True)
        return cls(int(b), int(p), False)


def tau(v: ZVertex, k: int = 1) -> ZVertex:
    return ZVertex(v.base, v.level - k, v.frozen)


def sigma(v: ZVertex) -> ZVertex:
    if v.frozen:
        return ZVertex(v.base, v.level, False)
    return ZVertex(v.base, v.level - 1, True)


def sigma_inv(v: ZVertex) -> ZVertex:
    if v.frozen:
        return ZVertex(v.base, v.level + 1, False)
    return ZVertex(v.base, v.level, True)


def height(q: DynkinQuiver, v: ZVertex) -> int:
    return 2 * v.level + q.heights[v.base] + (1 if v.frozen else 0)


def at_height(q: DynkinQuiver, base: int, m: int, frozen: bool = False) -> ZVertex:
    r = m - q.heights[base] - (1 if frozen else 0)
    if r % 2:
        raise QuiverError(f"no vertex over {base} at height {m}")
    return ZVertex(base, r // 2, frozen)


def sigma_shift(q: DynkinQuiver, v: ZVertex, k: int = 1) -> ZVertex:
    """Sigma^k on non-frozen vertices: ``(i, m) -> (phi^k i, m + k h)`` in heights."""
    if v.frozen:
        raise QuiverError("Sigma acts on non-frozen vertices")
    b = v.base
    if k % 2:
        b = q.nakayama_involution[b]
    return at_height(q, b, height(q, v) + k * q.coxeter_number)


def nakayama_nu(q: DynkinQuiver, v: ZVertex) -> ZVertex:
    """Serre functor tau Sigma on vertices."""
    return tau(sigma_shift(q, v))


# --------------------------------------------------------------------------
# automorphisms F = tau^t Sigma^s g
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AutoSpec:
    tau_power: int = 1
    sigma_shift_power: int = 0
    diagram_auto: tuple[int, ...] | None = None

    @classmethod
    def tau(cls, t: int = 1):
        return cls(t, 0, None)

    @classmethod
    def cluster(cls):
        """``Sigma tau^{-1}``."""
        return cls(-1, 1, None)

    def perm(self, q: DynkinQuiver) -> dict[int, int]:
        if self.diagram_auto is None:
            return {i: i for i in q.vertices}
        perm = {i: self.diagram_auto[i - 1] for i in q.vertices}
        if not q.is_automorphism(perm):
            raise QuiverError(f"{self.diagram_auto} is not a diagram automorphism")
        return perm

    def label(self) -> str:
        parts = []
        if self.tau_power:
            parts.append(f"tau^{self.tau_power}")
        if self.sigma_shift_power:
            parts.append(f"Sigma^{self.sigma_shift_power}")
        if self.diagram_auto is not None:
            parts.append("g" + "".join(map(str, self.diagram_auto)))
        return "*".join(parts) or "id"

    def to_json(self) -> dict:
        return {"tau": self.tau_power, "sigma_shift": self.sigma_shift_power,
                "diagram_auto": list(self.diagram_auto) if self.diagram_auto else None}

    @classmethod
    def from_json(cls, d: dict) -> "AutoSpec":
        g = d.get("diagram_auto")
        return cls(int(d.get("tau", 0)), int(d.get("sigma_shift", 0)), tuple(g) if g else None)


def _diagram_shift(q: DynkinQuiver, perm: dict[int, int]) -> int:
    """Height shift (0 or 1) making a diagram automorphism act on ZQ."""
    c = {(q.heights[perm[i]] - q.heights[i]) % 2 for i in q.vertices}
    assert len(c) == 1, "diagram automorphism of a tree must respect the 2-colouring"
    return c.pop()


def height_shift(q: DynkinQuiver, f: AutoSpec) -> int:
    """Amount by which F raises every height; 0 means F has finite order."""
    return (-2 * f.tau_power + f.sigma_shift_power * q.coxeter_number
            + _diagram_shift(q, f.perm(q)))


def apply_F(q: DynkinQuiver, f: AutoSpec, v: ZVertex, k: int = 1) -> ZVertex:
    """F^k(v); frozen vertices follow ``F sigma(c) = sigma(F c)``."""
    if v.frozen:
        return sigma(apply_F(q, f, sigma_inv(v), k))
    perm = f.perm(q)
    c = _diagram_shift(q, perm)
    if k < 0:
        perm = {b: a for a, b in perm.items()}
    m, b = height(q, v), v.base
    for _ in range(abs(k)):
        b = perm[b]
    m += k * c
    v = at_height(q, b, m)
    v = sigma_shift(q, v, k * f.sigma_shift_power)
    return tau(v, k * f.tau_power)


def apply_F_arrow(q, f, arrow, k: int = 1):
    a, b = arrow
    return apply_F(q, f, a, k), apply_F(q, f, b, k)


# --------------------------------------------------------------------------
# configurations
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """An F-stable set of non-frozen vertices, given by orbit representatives.

    ``orbit_reps=None`` means every vertex of ZQ.
    """

    orbit_reps: tuple[ZVertex, ...] | None = None

    @classmethod
    def all(cls):
        return cls(None)

    @property
    def is_all(self) -> bool:
        return self.orbit_reps is None

    def to_json(self):
        if self.is_all:
            return "all"
        return {"orbit_reps": [v.to_json() for v in self.orbit_reps]}

    @classmethod
    def from_json(cls, d) -> "Configuration":
        if d == "all":
            return cls.all()
        return cls(tuple(ZVertex.from_json(v) for v in d["orbit_reps"]))


class ZQC:
    """The translation quiver ZQ_C together with an automorphism F."""

    def __init__(self, q: DynkinQuiver, config: Configuration, f: AutoSpec | None = None):
        self.q = q
        self.config = config
        self.f = f if f is not None else AutoSpec.tau()
        self.delta = height_shift(q, self.f)
        self._reps = None
        if not config.is_all:
            if self.delta == 0:
                raise QuiverError("F has finite order")
            for v in config.orbit_reps:
                if v.frozen:
                    raise QuiverError("configuration vertices must be non-frozen")
            self._reps = frozenset(self.canonical_rep(v) for v in config.orbit_reps)

    # ------------------------------------------------------------------
    def height(self, v: ZVertex) -> int:
        return height(self.q, v)

    def canonical(self, v: ZVertex) -> tuple[ZVertex, int]:
        """Representative of the F-orbit with height in ``[0, |delta|)`` and the power used."""
        d = self.delta
        if d == 0:
            raise QuiverError("F has finite order")
        m = self.height(v)
        k = -(m // d) if d > 0 else m // (-d)
        return apply_F(self.q, self.f, v, k), k

    def canonical_rep(self, v: ZVertex) -> ZVertex:
        return self.canonical(v)[0]

    def in_C(self, v: ZVertex) -> bool:
        if v.frozen:
            return False
        if self.config.is_all:
            return True
        return self.canonical(v)[0] in self._reps

    def exists(self, v: ZVertex) -> bool:
        if v.frozen:
            return self.in_C(sigma_inv(v))
        return True

    # ------------------------------------------------------------------
    def layer(self, m: int) -> list[ZVertex]:
        """All vertices of ZQ_C at height m, in a fixed order."""
        out = []
        for i in self.q.vertices:
            if (m - self.q.heights[i]) % 2 == 0:
                out.append(at_height(self.q, i, m))
        for i in self.q.vertices:
            if (m - self.q.heights[i] - 1) % 2 == 0:
                v = at_height(self.q, i, m, frozen=True)
                if self.exists(v):
                    out.append(v)
        return out

    def predecessors(self, v: ZVertex) -> list[ZVertex]:
        """Sources of arrows into v (ordered: ZQ arrows, then the frozen one)."""
        if v.frozen:
            return [tau(sigma_inv(v))]
        m = self.height(v)
        out = [at_height(self.q, j, m - 1) for j in self.q.neighbours[v.base]]
        if self.in_C(v):
            out.append(sigma(v))
        return out

    def successors(self, v: ZVertex) -> list[ZVertex]:
        if v.frozen:
            return [sigma_inv(v)]
        m = self.height(v)
        out = [at_height(self.q, j, m + 1) for j in self.q.neighbours[v.base]]
        w = tau(v, -1)
        if self.in_C(w):
            out.append(sigma(w))
        return out

    def fundamental_domain(self) -> tuple[list[ZVertex], list[ZVertex]]:
        """Non-frozen and frozen vertices with height in ``[0, |delta|)``."""
        if self.delta == 0:
            raise QuiverError("F has finite order")
        nf, fr = [], []
        for m in range(abs(self.delta)):
            for v in self.layer(m):
                (fr if v.frozen else nf).append(v)
        return nf, fr


# --------------------------------------------------------------------------
# windows
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Window:
    quiver: DynkinQuiver
    config: Configuration
    level_range: tuple[int, int]
    f: AutoSpec = field(default_factory=AutoSpec.tau)

    @classmethod
    def around(cls, q, config, f=None, centre: int = 0, width: int | None = None):
        width = width if width is not None else 2 * q.coxeter_number + 4
        lo = centre - width // 2
        return cls(q, config, (lo, lo + width - 1), f or AutoSpec.tau())

    @cached_property
    def zqc(self) -> ZQC:
        return ZQC(self.quiver, self.config, self.f)

    def contains(self, v: ZVertex) -> bool:
        lo, hi = self.level_range
        u = sigma_inv(v) if v.frozen else v
        return lo <= u.level <= hi and self.zqc.exists(v)

    @cached_property
    def vertices(self) -> list[ZVertex]:
        lo, hi = self.level_range
        out = [ZVertex(i, p) for p in range(lo, hi + 1) for i in self.quiver.vertices]
        out += [sigma(v) for v in out if self.zqc.in_C(v)]
        return out

    @cached_property
    def arrows(self) -> list[tuple[ZVertex, ZVertex]]:
        vs = set(self.vertices)
        return [(u, v) for v in self.vertices for u in self.zqc.predecessors(v) if u in vs]

    def interior(self) -> list[ZVertex]:
        """Non-frozen vertices whose whole mesh lies in the window."""
        vs = set(self.vertices)
        out = []
        for v in self.vertices:
            if v.frozen:
                continue
            need = [tau(v)] + self.zqc.predecessors(v) + self.zqc.successors(v) + [tau(v, -1)]
            if all(u in vs for u in need):
                out.append(v)
        return out

    def extended(self, by: int) -> "Window":
        lo, hi = self.level_range
        return Window(self.quiver, self.config, (lo - by, hi + by), self.f)

    def to_dot(self) -> str:
        lines = ["digraph ZQC {", "  rankdir=LR;"]
        for v in self.vertices:
            shape = "box" if v.frozen else "ellipse"
            lines.append(f'  "{v!r}" [shape={shape}];')
        for u, v in self.arrows:
            lines.append(f'  "{u!r}" -> "{v!r}";')
        lines.append("}")
        return "\n".join(lines)


def iter_window_pairs(w: Window, frozen: bool = False) -> Iterator[tuple[ZVertex, ZVertex]]:
    vs = [v for v in w.vertices if frozen or not v.frozen]
    for x in vs:
        for y in vs:
            yield x, y


# --------------------------------------------------------------------------
# admissibility
# --------------------------------------------------------------------------

@dataclass
class AdmissibilityReport:
    ok: bool
    reason: str = ""
    counterexample: dict | None = None
    checked: int = 0

    def to_json(self):
        return {"ok": self.ok, "reason": self.reason,
                "counterexample": self.counterexample, "checked": self.checked}


def check_admissible(config: Configuration, f: AutoSpec, w: Window,
                     depth: int | None = None) -> AdmissibilityReport:
    """Exactness of the mesh sequences at every interior vertex of the window.

    For each interior non-frozen x and each window object z, composing with
    the arrows out of x must be injective on R(z, x), and composing with the
    arrows into x must be injective on R(x, z).  Pairs are tested up to a
    height difference of ``depth`` (default h + 2): with frozen vertices present
    the Hom spaces grow exponentially with the height difference.
    """
    from .mesh import GradedCategory

    q = w.quiver
    if height_shift(q, f) == 0:
        return AdmissibilityReport(False, "finite order", {"F": f.label()})
    zqc = ZQC(q, config, f)
    # F(C) is contained in C by construction (C is an F-saturation); spot-check anyway
    for v in w.vertices:
        if not v.frozen and zqc.in_C(v) and not zqc.in_C(apply_F(q, f, v)):
            return AdmissibilityReport(False, "F(C) not in C", {"x": v.to_json()})
    inner = w.interior()
    if not inner:
        raise WindowTooSmall("window has no vertex with a complete mesh")
    if depth is None:
        depth = q.coxeter_number + 2
    cat = GradedCategory(zqc, max_degree=depth + 1)
    field = cat.field
    n = 0
    for x in inner:
        succ = zqc.successors(x)
        pred = zqc.predecessors(x)
        hx = zqc.height(x)
        for z in w.vertices:
            if abs(zqc.height(z) - hx) > depth:
                continue
            hz = cat.hom_from(z)
            dim = hz.dim(x)
            if dim:
                stack = field.vstack([hz.arrow_matrix(x, y) for y in succ], dim)
                n += 1
                if field.rank(stack) < dim:
                    return AdmissibilityReport(
                        False, "R(z,x) -> sum R(z,y) not injective",
                        {"x": x.to_json(), "z": z.to_json()}, n)
            dim = cat.hom_from(x).dim(z)
            if dim:
                blocks = [cat.precompose_matrix(y, x, z) for y in pred]
                n += 1
                if field.rank(field.vstack(blocks, dim)) < dim:
                    return AdmissibilityReport(
                        False, "R(x,z) -> sum R(y,z) not injective",
                        {"x": x.to_json(), "z": z.to_json()}, n)
    return AdmissibilityReport(True, "", None, n)


def parse_auto(text: str) -> AutoSpec:
    """Short forms: ``tau``, ``tau^3``, ``cluster`` (Sigma tau^-1), ``Sigma*tau``."""
    t = text.strip()
    if t in ("tau", "τ"):
        return AutoSpec.tau()
    if t in ("cluster",):
        return AutoSpec.cluster()
    tp = sp = 0
    for part in t.replace("τ", "tau").replace("Σ", "Sigma").split("*"):
        part = part.strip()
        name, _, exp = part.partition("^")
        e = int(exp) if exp else 1
        if name == "tau":
            tp += e
        elif name in ("Sigma", "S"):
            sp += e
        else:
            raise QuiverError(f"cannot parse automorphism {text!r}")
    return AutoSpec(tp, sp, None)


def vertices_in(items: Iterable) -> list[ZVertex]:
    return [v if isinstance(v, ZVertex) else ZVertex.from_json(v) for v in items]
