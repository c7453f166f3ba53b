"""Independent Hom-dimension oracle for the mesh category of ZQ.

Indecomposable representations of Q^op are knitted from the projectives: the
vertex ``(i, 0)`` carries ``P'_i`` and ``tau^{-1}`` of a non-injective module
is the cokernel of the map into the sum of its successors.  Every vertex of ZQ
is ``Sigma^k`` of a module position, with Sigma located from
``tau^{-1}(position of I'_j) = Sigma(position of P'_j)``.  Hom dimensions then
come from intertwiner solves (same shift) or the Euler form (shift one).

Nothing here uses the height formulas of :mod:`nakajima.quiver`, so the two
descriptions of Sigma can be compared.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .linalg import QQ
from .quiver import DynkinQuiver, ZVertex


@dataclass
class QRep:
    """A representation of Q^op over Q: spaces ``dims[i]``, maps keyed by arrow."""

    dims: dict
    maps: dict  # (s, t) arrow of Q^op -> matrix dims[t] x dims[s]

    @property
    def dimvec(self) -> tuple:
        return tuple(self.dims[i] for i in sorted(self.dims))

    @property
    def total(self) -> int:
        return sum(self.dims.values())


def _op_arrows(q: DynkinQuiver):
    return [(b, a) for a, b in q.arrows]


def _reach(arrows, start):
    seen, todo = {start}, [start]
    while todo:
        v = todo.pop()
        for s, t in arrows:
            if s == v and t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def projective(q: DynkinQuiver, i: int) -> QRep:
    arr = _op_arrows(q)
    support = _reach(arr, i)
    dims = {v: int(v in support) for v in q.vertices}
    maps = {(s, t): QQ.mat(dims[t], dims[s], [1] * (dims[t] * dims[s])) for s, t in arr}
    return QRep(dims, maps)


def injective(q: DynkinQuiver, j: int) -> QRep:
    arr = _op_arrows(q)
    support = _reach([(t, s) for s, t in arr], j)
    dims = {v: int(v in support) for v in q.vertices}
    maps = {(s, t): QQ.mat(dims[t], dims[s], [1] * (dims[t] * dims[s])) for s, t in arr}
    return QRep(dims, maps)


def hom_space(q: DynkinQuiver, m: QRep, n: QRep):
    """Basis of Hom(m, n) as lists of per-vertex matrices."""
    verts = list(q.vertices)
    offs, o = {}, 0
    for v in verts:
        offs[v] = o
        o += n.dims[v] * m.dims[v]
    nvars = o
    rows = []
    for (s, t) in _op_arrows(q):
        # n_a phi_s - phi_t m_a = 0, a matrix of size n_t x m_s
        na, ma = n.maps[(s, t)], m.maps[(s, t)]
        for r in range(n.dims[t]):
            for c in range(m.dims[s]):
                row = [0] * nvars
                for k in range(n.dims[s]):  # (n_a phi_s)[r, c]
                    row[offs[s] + k * m.dims[s] + c] += na[r, k]
                for k in range(m.dims[t]):  # (phi_t m_a)[r, c]
                    row[offs[t] + r * m.dims[t] + k] -= ma[k, c]
                rows.append(row)
    if nvars == 0:
        return []
    sol = QQ.nullspace(QQ.from_rows(rows, nvars)) if rows else QQ.eye(nvars)
    out = []
    for c in range(sol.ncols()):
        phi = {}
        for v in verts:
            phi[v] = QQ.mat(n.dims[v], m.dims[v],
                            [sol[offs[v] + k, c] for k in range(n.dims[v] * m.dims[v])])
        out.append(phi)
    return out


def euler_form(q: DynkinQuiver, d, e) -> int:
    d = dict(zip(q.vertices, d))
    e = dict(zip(q.vertices, e))
    return sum(d[i] * e[i] for i in q.vertices) - sum(d[s] * e[t] for s, t in _op_arrows(q))


def _cokernel_rep(q: DynkinQuiver, m: QRep, targets: list[QRep], maps: list[dict]) -> QRep:
    verts = list(q.vertices)
    kept, proj, incl = {}, {}, {}
    dims = {}
    for v in verts:
        tot = sum(t.dims[v] for t in targets)
        if m.dims[v]:
            big = QQ.vstack([f[v] for f in maps], m.dims[v])
            if QQ.rank(big) < m.dims[v]:
                raise ValueError("knitting map is not injective")
        else:
            big = QQ.zeros(tot, 0)
        k, p = QQ.complement(big, tot)
        kept[v], proj[v] = k, p
        inc = QQ.zeros(tot, len(k))
        for a, j in enumerate(k):
            inc[j, a] = 1
        incl[v] = inc
        dims[v] = len(k)
    newmaps = {}
    for (s, t) in _op_arrows(q):
        e = QQ.block_diag([tg.maps[(s, t)] for tg in targets])
        newmaps[(s, t)] = proj[t] * e * incl[s]
    return QRep(dims, newmaps)


class KnittingOracle:
    """Positions of all indecomposable Q^op-modules in ZQ, and Sigma on ZQ."""

    def __init__(self, q: DynkinQuiver):
        self.q = q
        self.arr = list(q.arrows)
        inj_dims = {injective(q, j).dimvec: j for j in q.vertices}
        self.modules: dict[ZVertex, QRep] = {}
        self.injective_at: dict[int, ZVertex] = {}
        for i in q.vertices:
            self.modules[ZVertex(i, 0)] = projective(q, i)
        # successors of (i, p): (j, p) for i -> j and (j, p + 1) for j -> i
        todo = sorted(self.modules, key=self._order)
        done = set()
        while todo:
            x = todo.pop(0)
            if x in done:
                continue
            done.add(x)
            m = self.modules[x]
            j = inj_dims.get(m.dimvec)
            if j is not None and self._is_injective(m, j):
                self.injective_at[j] = x
                continue
            succ = self._successors(x)
            if any(y not in self.modules for y in succ):
                raise RuntimeError(f"knitting order broken at {x}")
            tgts = [self.modules[y] for y in succ]
            fs = []
            for t in tgts:
                hs = hom_space(q, m, t)
                if len(hs) != 1:
                    raise RuntimeError("irreducible map space is not one-dimensional")
                fs.append(hs[0])
            nxt = ZVertex(x.base, x.level + 1)
            self.modules[nxt] = _cokernel_rep(q, m, tgts, fs)
            todo.append(nxt)
            todo.sort(key=self._order)
        if len(self.injective_at) != q.rank:
            raise RuntimeError("knitting did not reach all injectives")

    def _order(self, v: ZVertex):
        # any order compatible with arrows works; use a height from a BFS on Q
        return (2 * v.level + self.q.heights[v.base], v.base)

    def _successors(self, x: ZVertex):
        out = []
        for a, b in self.arr:
            if a == x.base:
                out.append(ZVertex(b, x.level))
            if b == x.base:
                out.append(ZVertex(a, x.level + 1))
        return [y for y in out if y in self.modules or self._order(y) > self._order(x)]

    def _is_injective(self, m: QRep, j: int) -> bool:
        return len(hom_space(self.q, m, injective(self.q, j))) == 1 and \
            len(hom_space(self.q, injective(self.q, j), m)) == 1

    # ------------------------------------------------------------------
    def sigma(self, v: ZVertex, k: int = 1) -> ZVertex:
        """Sigma^k located by knitting."""
        for _ in range(abs(k)):
            if k > 0:
                pos = self.injective_at[v.base]
                v = ZVertex(pos.base, pos.level + 1 + v.level)
            else:
                # invert: find j with Sigma(j, 0) on the tau-orbit of v
                for j in self.q.vertices:
                    pos = self.injective_at[j]
                    if pos.base == v.base:
                        v = ZVertex(j, v.level - pos.level - 1)
                        break
        return v

    def locate(self, v: ZVertex) -> tuple[int, QRep]:
        """``(k, M)`` with v the position of Sigma^k M."""
        k = 0
        lo = min(p.level for p in self.modules)
        while v not in self.modules:
            if v.level < lo:
                v = self.sigma(v, 1)
                k -= 1
            else:
                v = self.sigma(v, -1)
                k += 1
        return k, self.modules[v]

    def dim_hom(self, x: ZVertex, y: ZVertex) -> int:
        a, m = self.locate(x)
        b, n = self.locate(y)
        if b == a:
            return len(hom_space(self.q, m, n))
        if b == a + 1:
            return len(hom_space(self.q, m, n)) - euler_form(self.q, m.dimvec, n.dimvec)
        return 0


@lru_cache(maxsize=None)
def knitting_oracle(q: DynkinQuiver) -> KnittingOracle:
    return KnittingOracle(q)


def oracle_dim_hom(q: DynkinQuiver, x: ZVertex, y: ZVertex) -> int:
    if x.frozen or y.frozen:
        raise ValueError("oracle is defined on non-frozen vertices only")
    return knitting_oracle(q).dim_hom(x, y)
