"""Exact integer, rational and modular arithmetic.

Everything here works on Python ints and :class:`fractions.Fraction`, so the
cocycle identities built on top of it hold exactly rather than to a tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    NoOrderFound,
    NonInvertibleDenominator,
    NotInvertible,
    NotInvertibleMod,
    UnsupportedDegree,
)

Rational = Fraction


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not reduced mod {self.modulus}")

    def __int__(self):
        return self.value


def rational_mod_reduce(q, n: int) -> Residue:
    """Reduce ``q`` (int or Fraction) to a residue mod ``n``.

    The denominator is replaced by its inverse mod ``n``, so 1/2 mod 5 is 3.
    """
    q = Fraction(q)
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    if math.gcd(q.denominator, n) != 1:
        raise NonInvertibleDenominator(
            f"denominator {q.denominator} is not invertible mod {n}")
    if n == 1:
        return Residue(0, 1)
    inv = pow(q.denominator, -1, n)
    return Residue((q.numerator * inv) % n, n)


def binomial_poly(j: int, k: int) -> int:
    """Value of the polynomial j(j-1)...(j-k+1)/k! at any integer j, for k <= 3."""
    if k == 0:
        return 1
    if k == 1:
        return j
    if k == 2:
        return j * (j - 1) // 2
    if k == 3:
        return j * (j - 1) * (j - 2) // 6
    raise UnsupportedDegree(f"binomial_poly supports k in 0..3, got {k}")


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("IntMatrix needs at least one row and column")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise ValueError("ragged rows")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "IntMatrix":
        return cls.of([[0] * (rows if cols is None else cols) for _ in range(rows)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(tuple(tuple(a - b for a, b in zip(r, s))
                               for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in r) for r in self.entries))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = list(zip(*other.entries))
            return IntMatrix(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols)
                                   for r in self.entries))
        # integer vector
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.entries)

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(tuple(
            tuple(a * b for a in r for b in s)
            for r in self.entries for s in other.entries))

    def mod(self, n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(a % n for a in r) for r in self.entries))

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        m = [[Fraction(x) for x in r] for r in self.entries]
        size = self.rows
        det = Fraction(1)
        for c in range(size):
            p = next((r for r in range(c, size) if m[r][c] != 0), None)
            if p is None:
                return 0
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            det *= m[c][c]
            for r in range(c + 1, size):
                f = m[r][c] / m[c][c]
                if f:
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return int(det)

    def inverse(self) -> "IntMatrix":
        """Inverse over the integers; exists only for |det| = 1."""
        if self.rows != self.cols:
            raise NotInvertible("inverse of a non-square matrix")
        if abs(self.det()) != 1:
            raise NotInvertible(f"det = {self.det()}; no inverse over Z")
        size = self.rows
        m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(size)]
             for i, r in enumerate(self.entries)]
        for c in range(size):
            p = next(r for r in range(c, size) if m[r][c] != 0)
            m[c], m[p] = m[p], m[c]
            piv = m[c][c]
            m[c] = [a / piv for a in m[c]]
            for r in range(size):
                if r != c and m[r][c]:
                    f = m[r][c]
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return IntMatrix(tuple(tuple(int(x) for x in r[size:]) for r in m))

    def __pow__(self, k: int) -> "IntMatrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = IntMatrix.identity(self.rows)
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def _same_shape(self, other: "IntMatrix"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


CAT_MAP = IntMatrix.of([[2, 1], [1, 1]])


@lru_cache(maxsize=None)
def _s_k_cached(T: IntMatrix, k: int) -> IntMatrix:
    TT = T.kron(T)
    if k == 0:
        return IntMatrix.zeros(TT.rows)
    if k > 0:
        return _s_k_cached(T, k - 1) + TT ** (k - 1)
    # k < 0: S_k = -sum_{j=k}^{-1} (T (x) T)^j
    return _s_k_cached(T, k + 1) - TT ** k


def s_k(T: IntMatrix, k: int) -> IntMatrix:
    """Geometric sum of powers of T (x) T.

    ``S_k = sum_{j=0}^{k-1} (T(x)T)^j`` for k >= 0 and
    ``S_k = -sum_{j=k}^{-1} (T(x)T)^j`` for k < 0, so that
    ``(T(x)T - 1) S_k = (T(x)T)^k - 1`` for every integer k.
    """
    if T.shape != (2, 2):
        raise ValueError(f"s_k expects a 2x2 matrix, got {T.shape}")
    return _s_k_cached(T, k)


def matrix_order_mod(M: IntMatrix, n: int, cap: int | None = None) -> int:
    """Smallest m >= 1 with M^m = 1 mod n."""
    if n < 2:
        raise ValueError(f"modulus must be at least 2, got {n}")
    if math.gcd(M.det(), n) != 1:
        raise NotInvertibleMod(f"det {M.det()} is not a unit mod {n}")
    cap = n ** 4 if cap is None else cap
    ident = IntMatrix.identity(M.rows).mod(n)
    base = M.mod(n)
    power = base
    for m in range(1, cap + 1):
        if power == ident:
            return m
        power = (power @ base).mod(n)
    raise NoOrderFound(f"no order found below cap {cap} mod {n}")


def mat_vec(M: IntMatrix | Sequence[Sequence[int]], v: Sequence) -> tuple:
    """Matrix-vector product that also accepts Fraction entries in ``v``."""
    rows = M.entries if isinstance(M, IntMatrix) else M
    return tuple(sum(a * b for a, b in zip(r, v)) for r in rows)
