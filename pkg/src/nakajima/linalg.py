"""Exact linear algebra over Q and small prime fields.

Matrices are python-flint objects (``fmpq_mat`` over Q, ``nmod_mat`` over
F_p).  Everything else in the package talks to matrices only through a
:class:`Field`, so the same code runs over both kinds of scalars.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint


class Field:
    """Scalar field: the rationals (``p == 0``) or F_p."""

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    # identity -----------------------------------------------------------
    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def __repr__(self):
        return f"Field({self.name})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    @staticmethod
    def parse(tag: str) -> "Field":
        tag = tag.strip().upper()
        if tag in ("Q", "QQ"):
            return QQ
        if tag.startswith("F") or tag.startswith("GF"):
            return GF(int(tag.lstrip("GF")))
        raise ValueError(f"unknown field tag {tag!r}")

    # scalars --------------------------------------------------------------
    def elem(self, x):
        if self.p == 0:
            if isinstance(x, Fraction):
                return flint.fmpq(x.numerator, x.denominator)
            return flint.fmpq(x)
        if isinstance(x, Fraction):
            return flint.nmod(x.numerator, self.p) / flint.nmod(x.denominator, self.p)
        if isinstance(x, flint.fmpq):
            return flint.nmod(int(x.p), self.p) / flint.nmod(int(x.q), self.p)
        return flint.nmod(int(x), self.p)

    def to_python(self, x):
        """Scalar to a JSON-friendly python value (int or 'a/b' string)."""
        if self.p:
            return int(x)
        x = flint.fmpq(x)
        if x.q == 1:
            return int(x.p)
        return f"{int(x.p)}/{int(x.q)}"

    def from_python(self, v):
        if isinstance(v, str):
            return self.elem(Fraction(v))
        return self.elem(v)

    # constructors ---------------------------------------------------------
    def mat(self, nrows: int, ncols: int, entries=None):
        if self.p == 0:
            if entries is None:
                return flint.fmpq_mat(nrows, ncols)
            return flint.fmpq_mat(nrows, ncols, list(entries))
        if entries is None:
            return flint.nmod_mat(nrows, ncols, self.p)
        return flint.nmod_mat(nrows, ncols, [int(e) if not isinstance(e, flint.nmod) else e
                                             for e in entries], self.p)

    def zeros(self, nrows, ncols):
        return self.mat(nrows, ncols)

    def eye(self, n):
        m = self.mat(n, n)
        for i in range(n):
            m[i, i] = 1
        return m

    def from_rows(self, rows, ncols=None):
        rows = list(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return self.mat(len(rows), ncols, [e for r in rows for e in r])

    def column(self, values):
        values = list(values)
        return self.mat(len(values), 1, values)

    def unit_column(self, n, i):
        m = self.mat(n, 1)
        m[i, 0] = 1
        return m

    def convert(self, m):
        """Re-read a matrix from another field (rationals reduce mod p)."""
        if self.p == 0:
            return self.mat(m.nrows(), m.ncols(), [flint.fmpq(int(e)) if isinstance(e, flint.nmod) else e
                                                   for e in m.entries()])
        return self.mat(m.nrows(), m.ncols(), [self.elem(e) for e in m.entries()])

    def random_matrix(self, nrows, ncols, rng, bound: int = 3):
        if self.p:
            return self.mat(nrows, ncols, [rng.randrange(self.p) for _ in range(nrows * ncols)])
        return self.mat(nrows, ncols, [rng.randint(-bound, bound) for _ in range(nrows * ncols)])

    # shape helpers --------------------------------------------------------
    def hstack(self, mats, nrows=None):
        mats = list(mats)
        if nrows is None:
            nrows = mats[0].nrows() if mats else 0
        for m in mats:
            if m.nrows() != nrows:
                raise ValueError("hstack: row mismatch")
        ncols = sum(m.ncols() for m in mats)
        flat = [(m.entries(), m.ncols()) for m in mats]
        entries = []
        for i in range(nrows):
            for e, c in flat:
                entries.extend(e[i * c:(i + 1) * c])
        return self.mat(nrows, ncols, entries)

    def vstack(self, mats, ncols=None):
        mats = list(mats)
        if ncols is None:
            ncols = mats[0].ncols() if mats else 0
        entries = []
        for m in mats:
            if m.ncols() != ncols:
                raise ValueError("vstack: column mismatch")
            entries.extend(m.entries())
        return self.mat(sum(m.nrows() for m in mats), ncols, entries)

    def block_diag(self, mats):
        mats = list(mats)
        out = self.mat(sum(m.nrows() for m in mats), sum(m.ncols() for m in mats))
        r0 = c0 = 0
        for m in mats:
            for i in range(m.nrows()):
                for j in range(m.ncols()):
                    out[r0 + i, c0 + j] = m[i, j]
            r0 += m.nrows()
            c0 += m.ncols()
        return out

    def submatrix(self, m, rows, cols):
        rows, cols = list(rows), list(cols)
        e, c = m.entries(), m.ncols()
        return self.mat(len(rows), len(cols), [e[i * c + j] for i in rows for j in cols])

    def columns(self, m, cols):
        return self.submatrix(m, range(m.nrows()), cols)

    def rows(self, m, rows):
        return self.submatrix(m, rows, range(m.ncols()))

    # elimination ----------------------------------------------------------
    def rref(self, m):
        """Reduced row echelon form and pivot columns."""
        if m.nrows() == 0 or m.ncols() == 0:
            return self.mat(m.nrows(), m.ncols()), []
        r, rank = m.rref()
        pivots = []
        row = 0
        for j in range(m.ncols()):
            if row < rank and r[row, j] != 0:
                pivots.append(j)
                row += 1
        return r, pivots

    def rank(self, m) -> int:
        if m.nrows() == 0 or m.ncols() == 0:
            return 0
        return m.rank()

    def nullspace(self, m):
        """Matrix whose columns form a basis of ``{v : m v = 0}``."""
        n = m.ncols()
        r, pivots = self.rref(m)
        free = [j for j in range(n) if j not in set(pivots)]
        out = self.mat(n, len(free))
        for k, f in enumerate(free):
            out[f, k] = 1
            for i, pj in enumerate(pivots):
                out[pj, k] = -r[i, f]
        return out

    def left_nullspace(self, m):
        return self.nullspace(m.transpose()).transpose()

    def column_basis(self, m):
        """Independent columns spanning the column space (a sub-matrix of ``m``)."""
        _, pivots = self.rref(m)
        return self.columns(m, pivots)

    def row_space(self, m):
        """RREF rows spanning the row space."""
        r, pivots = self.rref(m)
        return self.rows(r, range(len(pivots)))

    def is_zero(self, m) -> bool:
        return all(e == 0 for e in m.entries())

    def inverse(self, m):
        if m.nrows() == 0:
            return self.mat(0, 0)
        return m.inv()

    def coordinates(self, basis, vectors):
        """Solve ``basis @ X = vectors`` for X; ``basis`` has independent columns.

        Raises ``ValueError`` if some column of ``vectors`` is outside the span.
        """
        k = basis.ncols()
        if k == 0:
            if not self.is_zero(vectors):
                raise ValueError("vector not in span of empty basis")
            return self.mat(0, vectors.ncols())
        _, piv = self.rref(basis.transpose())
        # pivot columns of basis^T = rows of basis where it is invertible
        square = self.rows(basis, piv)
        x = self.inverse(square) * self.rows(vectors, piv)
        if basis * x != vectors:
            raise ValueError("vector not in span")
        return x

    def complement(self, m, n=None):
        """Indices of standard basis vectors completing the column span of ``m``.

        Returns ``(kept, proj)`` where ``kept`` lists coordinates whose unit
        vectors form a basis of ``F^n / colspan(m)`` and ``proj`` is the matrix
        of the quotient map in that basis.
        """
        if n is None:
            n = m.nrows()
        if m.ncols() == 0 or n == 0:
            return list(range(n)), self.eye(n)
        r, pivots = self.rref(m.transpose())
        pset = set(pivots)
        kept = [j for j in range(n) if j not in pset]
        proj = self.mat(len(kept), n)
        for a, j in enumerate(kept):
            proj[a, j] = 1
            for i, pj in enumerate(pivots):
                proj[a, pj] = -r[i, j]
        return kept, proj

    def in_span(self, basis, v) -> bool:
        return self.rank(self.hstack([basis, v], basis.nrows())) == self.rank(basis)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
