"""Exact dense linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays.  Over ``GF(p)`` they hold ``float64``
integer residues in ``[0, p)`` (exact: products are kept below 2**53); over ``QQ`` they are object arrays of
``fractions.Fraction``.  A :class:`Field` instance carries the arithmetic,
so every routine is called as ``F.rank(a)``, ``F.kernel(a)`` and so on.

Maps act on column vectors: a matrix of shape ``(m, n)`` is a map
``k^n -> k^m``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class NoSolution(ValueError):
    """Raised by :meth:`Field.solve` when the right-hand side is not in the column space."""


class NotAComplex(ValueError):
    """Raised when two composable maps do not compose to zero."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """A prime field ``GF(p)`` (``p`` given) or the rationals (``p=None``)."""

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            # residues are stored as float64 integers: every intermediate of a
            # BLAS product stays below 2**53 as long as the inner chunk is bounded
            self.dtype = np.float64 if p < (1 << 20) else object
            self._chunk = max(1, (1 << 53) // max(1, (p - 1) ** 2)) if p < (1 << 20) else None
        else:
            self.dtype = object
        self.p = p

    # -- identity -----------------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def tag(self) -> str:
        return f"GF({self.p})" if self.p is not None else "QQ"

    def __repr__(self) -> str:
        return self.tag

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    @property
    def size(self) -> float:
        return float(self.p) if self.p is not None else float("inf")

    # -- scalars ------------------------------------------------------------

    def scalar(self, x):
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return float((x.numerator * pow(x.denominator, -1, self.p)) % self.p)
        return float(int(x) % self.p) if self.dtype is not object else int(x) % self.p

    def inv(self, x):
        if self.p is None:
            return Fraction(1) / x
        return float(pow(int(x), -1, self.p)) if self.dtype is not object else pow(int(x), -1, self.p)

    def neg(self, x):
        return self.scalar(-x)

    def to_int(self, x) -> int | str:
        """JSON-friendly rendering of a scalar."""
        if self.p is None:
            x = Fraction(x)
            return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    # -- constructors -------------------------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.dtype is object:
            a = np.empty((rows, cols), dtype=object)
            a.fill(Fraction(0) if self.p is None else 0)
            return a
        return np.zeros((rows, cols), dtype=np.float64)

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros(n, n)
        for i in range(n):
            a[i, i] = self.scalar(1)
        return a

    def asarray(self, data) -> np.ndarray:
        """Coerce nested sequences / arrays of ints or Fractions into field elements."""
        if isinstance(data, np.ndarray) and data.dtype.kind in "iuf" and self.dtype is not object:
            return np.asarray(data, dtype=np.float64) % self.p
        raw = np.array(data, dtype=object)
        flat = [self.scalar(x) for x in raw.ravel()]
        out = np.empty(len(flat), dtype=self.dtype)
        out[:] = flat
        return out.reshape(raw.shape)

    def vector(self, data) -> np.ndarray:
        return self.asarray(list(data))

    def random(self, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
        if self.p is not None:
            a = rng.integers(0, self.p, size=(rows, cols))
            return self.asarray(a)
        a = rng.integers(-5, 6, size=(rows, cols))
        return self.asarray(a.astype(object))

    # -- arithmetic ---------------------------------------------------------

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p is None:
            return a
        return a % self.p

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if self.dtype is object or a.shape[1] <= self._chunk:
            return self.reduce(a @ b)
        out = self.zeros(a.shape[0], b.shape[1])
        for s in range(0, a.shape[1], self._chunk):
            out = self.reduce(out + a[:, s:s + self._chunk] @ b[s:s + self._chunk])
        return out

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(self.scalar(c) * a)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a)

    # -- elimination --------------------------------------------------------

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int], int]:
        """Reduced row-echelon form, pivot columns and rank."""
        a = np.array(m, dtype=self.dtype, copy=True)
        if a.ndim != 2:
            raise ValueError("rref expects a 2-d array")
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            a[r, c:] = self.reduce(a[r, c:] * self.inv(a[r, c]))
            col = a[:, c].copy()
            col[r] = 0
            others = np.nonzero(col)[0]
            if others.size:
                a[others, c:] = self.reduce(a[others, c:] - np.outer(col[others], a[r, c:]))
            pivots.append(c)
            r += 1
        return a, pivots, r

    def rank(self, m: np.ndarray) -> int:
        if m.size == 0:
            return 0
        # eliminate along the shorter side
        if m.shape[0] > m.shape[1]:
            m = m.T
        return self.rref(m)[2]

    def kernel(self, m: np.ndarray) -> np.ndarray:
        """Columns spanning the right kernel of ``m``."""
        rows, cols = m.shape
        r, pivots, rank = self.rref(m)
        pivset = set(pivots)
        free = [c for c in range(cols) if c not in pivset]
        k = self.zeros(cols, len(free))
        if free:
            k[free, list(range(len(free)))] = self.scalar(1)
            if pivots:
                k[np.ix_(pivots, range(len(free)))] = self.reduce(-r[:rank][:, free])
        return k

    def solve(self, m: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Some ``x`` with ``m @ x == b``; raises :class:`NoSolution` otherwise."""
        if b.ndim == 1:
            return self.solve(m, b.reshape(-1, 1))[:, 0]
        rows, cols = m.shape
        if b.shape[0] != rows:
            raise ValueError("row count mismatch")
        aug = np.concatenate([np.asarray(m, dtype=self.dtype), np.asarray(b, dtype=self.dtype)], axis=1)
        r, pivots, rank = self.rref(aug)
        if pivots and pivots[-1] >= cols:
            raise NoSolution("right-hand side is not in the column space")
        x = self.zeros(cols, b.shape[1])
        for i, pc in enumerate(pivots):
            x[pc] = r[i, cols:]
        return x

    def inverse(self, m: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        if m.shape != (n, n) or self.rank(m) != n:
            raise NoSolution("matrix is not invertible")
        return self.solve(m, self.eye(n))

    def column_basis(self, m: np.ndarray) -> np.ndarray:
        """Independent columns of ``m`` spanning its column space (first-found order)."""
        if m.shape[1] == 0:
            return self.zeros(m.shape[0], 0)
        _, pivots, _ = self.rref(m)
        return m[:, pivots]

    def left_inverse(self, k: np.ndarray) -> np.ndarray:
        """``L`` with ``L @ k == I`` for ``k`` of full column rank."""
        n, d = k.shape
        if d == 0:
            return self.zeros(0, n)
        _, rows_used, rank = self.rref(k.T)
        if rank != d:
            raise ValueError("matrix does not have full column rank")
        s = k[rows_used, :]
        s_inv = self.inverse(s)
        left = self.zeros(d, n)
        left[:, rows_used] = s_inv
        return left

    def complement(self, sub: np.ndarray, n: int | None = None) -> np.ndarray:
        """Standard basis vectors completing the columns of ``sub`` to a basis.

        Candidates are taken in index order, so the complement is the
        lexicographically first one.
        """
        if n is None:
            n = sub.shape[0]
        aug = np.concatenate([sub, self.eye(n)], axis=1)
        _, pivots, _ = self.rref(aug)
        chosen = [p - sub.shape[1] for p in pivots if p >= sub.shape[1]]
        return self.eye(n)[:, chosen]

    def in_span(self, basis: np.ndarray, v: np.ndarray) -> bool:
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if basis.shape[1] == 0:
            return self.is_zero(v)
        return self.rank(np.concatenate([basis, v], axis=1)) == self.rank(basis)

    def intersect(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Basis of the intersection of two column spans."""
        n = u.shape[0]
        if u.shape[1] == 0 or w.shape[1] == 0:
            return self.zeros(n, 0)
        k = self.kernel(np.concatenate([u, self.reduce(-w)], axis=1))
        return self.column_basis(self.matmul(u, k[: u.shape[1]]))

    def is_exact_at(self, a: np.ndarray, b: np.ndarray) -> bool:
        """Exactness of ``U --a--> V --b--> W`` at ``V``.

        Requires ``b @ a == 0``; exact iff ``rank a + rank b == dim V``.
        """
        if a.shape[0] != b.shape[1]:
            raise ValueError("maps are not composable")
        if a.shape[1] and b.shape[0] and not self.is_zero(self.matmul(b, a)):
            raise NotAComplex("b @ a is not zero")
        return self.rank(a) + self.rank(b) == a.shape[0]


GF101 = Field(101)
QQ = Field(None)


def block(F: Field, rows: list[list[np.ndarray]]) -> np.ndarray:
    """Assemble a block matrix; empty blocks are allowed."""
    if not rows:
        return F.zeros(0, 0)
    strips = [np.concatenate(r, axis=1) if r else F.zeros(0, 0) for r in rows]
    return np.concatenate(strips, axis=0)


def direct_sum_matrix(F: Field, mats: list[np.ndarray]) -> np.ndarray:
    r = sum(m.shape[0] for m in mats)
    c = sum(m.shape[1] for m in mats)
    out = F.zeros(r, c)
    i = j = 0
    for m in mats:
        out[i : i + m.shape[0], j : j + m.shape[1]] = m
        i += m.shape[0]
        j += m.shape[1]
    return out
