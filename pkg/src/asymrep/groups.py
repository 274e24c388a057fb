"""Concrete groups given by exponent vectors and polynomial multiplication.

Three infinite groups are provided (free abelian groups, a rank-5 three-step
nilpotent group and the semidirect product Z^2 x| Z twisted by the cat map),
together with their coordinate-wise finite quotients.  Group elements are
canonical-form exponent vectors ``a_1^{x_1} ... a_m^{x_m}``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _arrays
from .errors import BadPeriod, CoprimalityViolation, InfiniteGroup
from .exact import CAT_MAP, binomial_poly, matrix_order_mod, rational_mod_reduce

Exponents = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class GroupDescriptor:
    name: str
    rank: int
    multiply_map: Callable[[Exponents, Exponents], Exponents]
    inverse_map: Callable[[Exponents], Exponents]
    moduli: tuple[int, ...] | None = None
    # vectorized product on (N, rank) integer arrays; optional
    multiply_array: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    quotient_factory: Callable[..., tuple["GroupDescriptor", "QuotientMap"]] | None = None
    params: dict = field(default_factory=dict)

    @property
    def is_finite(self) -> bool:
        return self.moduli is not None

    def order(self) -> int:
        if self.moduli is None:
            raise InfiniteGroup(f"{self.name} is infinite")
        return math.prod(self.moduli)

    def reduce(self, exps: Iterable[int]) -> Exponents:
        exps = tuple(int(x) for x in exps)
        if len(exps) != self.rank:
            raise ValueError(f"{self.name} has rank {self.rank}, got {len(exps)} exponents")
        if self.moduli is None:
            return exps
        return tuple(x % m for x, m in zip(exps, self.moduli))

    def element(self, *exps) -> "GroupElement":
        if len(exps) == 1 and not isinstance(exps[0], (int, np.integer)):
            exps = tuple(exps[0])
        return GroupElement(self, self.reduce(exps))

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> list["GroupElement"]:
        return [self.element(tuple(int(i == j) for j in range(self.rank)))
                for i in range(self.rank)]

    def multiply(self, x: Exponents, y: Exponents) -> Exponents:
        return self.reduce(self.multiply_map(x, y))

    def inverse(self, x: Exponents) -> Exponents:
        return self.reduce(self.inverse_map(x))

    def multiply_rows(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Row-wise products of two (N, rank) exponent arrays."""
        if self.multiply_array is not None:
            Z = self.multiply_array(X, Y)
        else:
            Z = _arrays.exact_array([self.multiply_map(tuple(int(a) for a in x),
                                                       tuple(int(b) for b in y))
                                     for x, y in zip(X, Y)]).reshape(len(X), self.rank)
        if self.moduli is not None:
            Z = Z % np.asarray(self.moduli, dtype=np.int64)
        return Z

    def __repr__(self):
        return f"GroupDescriptor({self.name!r}, rank={self.rank}, moduli={self.moduli})"


class GroupElement:
    __slots__ = ("group", "exponents")

    def __init__(self, group: GroupDescriptor, exponents: Exponents):
        self.group = group
        self.exponents = exponents

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.group is not self.group and other.group.name != self.group.name:
            raise ValueError(f"cannot multiply {self.group.name} by {other.group.name}")
        return GroupElement(self.group, self.group.multiply(self.exponents, other.exponents))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inverse(self.exponents))

    def __pow__(self, k: int) -> "GroupElement":
        base = self if k >= 0 else self.inverse()
        out = self.group.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def __getitem__(self, i):
        return self.exponents[i]

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.exponents == other.exponents and self.group.name == other.group.name

    def __hash__(self):
        return hash((self.group.name, self.exponents))

    def __lt__(self, other: "GroupElement"):
        return self.exponents < other.exponents

    def __repr__(self):
        return f"{self.group.name}{self.exponents}"


@dataclass(frozen=True)
class QuotientMap:
    source: GroupDescriptor
    target: GroupDescriptor

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.target.moduli

    def __call__(self, g: GroupElement) -> GroupElement:
        return self.target.element(g.exponents)


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    """aba^{-1}b^{-1}."""
    return a * b * a.inverse() * b.inverse()


# --------------------------------------------------------------------------
# free abelian groups


def make_free_abelian(rank: int, name: str | None = None) -> GroupDescriptor:
    name = name or ("z" if rank == 1 else f"z{rank}")

    def quotient(n: int, m: int | None = None):
        if n < 1:
            raise CoprimalityViolation(f"modulus must be positive, got {n}")
        target = GroupDescriptor(
            name=f"{name}/{n}", rank=rank,
            multiply_map=lambda x, y: tuple(a + b for a, b in zip(x, y)),
            inverse_map=lambda x: tuple(-a for a in x),
            moduli=(n,) * rank,
            multiply_array=lambda X, Y: X + Y,
            params={"n": n},
        )
        return target, QuotientMap(source, target)

    source = GroupDescriptor(
        name=name, rank=rank,
        multiply_map=lambda x, y: tuple(a + b for a, b in zip(x, y)),
        inverse_map=lambda x: tuple(-a for a in x),
        multiply_array=lambda X, Y: X + Y,
        quotient_factory=quotient,
    )
    return source


def make_z() -> GroupDescriptor:
    return make_free_abelian(1, "z")


def make_z2() -> GroupDescriptor:
    return make_free_abelian(2, "z2")


# --------------------------------------------------------------------------
# the rank-5 nilpotent group with a_2a_1 = a_1a_2a_3, a_3a_1 = a_1a_3a_4^2,
# a_3a_2 = a_2a_3a_5, all other generator pairs commuting


def _nil5_mul(x: Exponents, y: Exponents) -> Exponents:
    x1, x2, x3, x4, x5 = x
    y1, y2, y3, y4, y5 = y
    return (
        x1 + y1,
        x2 + y2,
        x3 + y3 + x2 * y1,
        x4 + y4 + 2 * x3 * y1 + 2 * x2 * binomial_poly(y1, 2),
        x5 + y5 + y1 * binomial_poly(x2, 2) + x3 * y2 + x2 * y1 * y2,
    )


def _nil5_inv(x: Exponents) -> Exponents:
    # back-substitution: solve x * y = 0 coordinate by coordinate
    x1, x2, x3, x4, x5 = x
    y1 = -x1
    y2 = -x2
    y3 = -x3 - x2 * y1
    y4 = -x4 - 2 * x3 * y1 - 2 * x2 * binomial_poly(y1, 2)
    y5 = -x5 - y1 * binomial_poly(x2, 2) - x3 * y2 - x2 * y1 * y2
    return (y1, y2, y3, y4, y5)


def _nil5_mul_array(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4, x5 = (X[:, i] for i in range(5))
    y1, y2, y3, y4, y5 = (Y[:, i] for i in range(5))
    return np.stack([
        x1 + y1,
        x2 + y2,
        x3 + y3 + x2 * y1,
        x4 + y4 + 2 * x3 * y1 + x2 * (y1 * (y1 - 1)),
        x5 + y5 + y1 * ((x2 * (x2 - 1)) // 2) + x3 * y2 + x2 * y1 * y2,
    ], axis=1)


def _nil5_quotient_mul(n: int):
    # the integer polynomials with their 1/2 coefficients read mod n
    half = rational_mod_reduce(Fraction(1, 2), n).value

    def mul(x: Exponents, y: Exponents) -> Exponents:
        x1, x2, x3, x4, x5 = x
        y1, y2, y3, y4, y5 = y
        return (
            (x1 + y1) % n,
            (x2 + y2) % n,
            (x3 + y3 + x2 * y1) % n,
            (x4 + y4 + 2 * x3 * y1 + 2 * x2 * half * y1 * (y1 - 1)) % n,
            (x5 + y5 + y1 * half * x2 * (x2 - 1) + x3 * y2 + x2 * y1 * y2) % n,
        )

    def inv(x: Exponents) -> Exponents:
        x1, x2, x3, x4, x5 = x
        y1, y2 = -x1 % n, -x2 % n
        y3 = (-x3 - x2 * y1) % n
        y4 = (-x4 - 2 * x3 * y1 - 2 * x2 * half * y1 * (y1 - 1)) % n
        y5 = (-x5 - y1 * half * x2 * (x2 - 1) - x3 * y2 - x2 * y1 * y2) % n
        return (y1, y2, y3, y4, y5)

    return mul, inv



def make_nilpotent5() -> GroupDescriptor:
    def quotient(n: int, m: int | None = None):
        if n < 1 or math.gcd(n, 6) != 1:
            raise CoprimalityViolation(
                f"nilpotent5 quotients need n coprime to 6, got {n}")
        mul, inv = _nil5_quotient_mul(n)
        target = GroupDescriptor(
            name=f"nilpotent5/{n}", rank=5,
            multiply_map=mul, inverse_map=inv,
            moduli=(n,) * 5,
            multiply_array=_nil5_mul_array,
            params={"n": n},
        )
        return target, QuotientMap(source, target)

    source = GroupDescriptor(
        name="nilpotent5", rank=5,
        multiply_map=_nil5_mul, inverse_map=_nil5_inv,
        multiply_array=_nil5_mul_array,
        quotient_factory=quotient,
    )
    return source


# --------------------------------------------------------------------------
# Z^2 x| Z with the generator of Z acting by T = [[2, 1], [1, 1]];
# exponents are (v^1, v^2, k) for the element (v, k)


def _cat_mul(x: Exponents, y: Exponents) -> Exponents:
    v1, v2, k = x
    w = (CAT_MAP ** k) @ (y[0], y[1])
    return (v1 + w[0], v2 + w[1], k + y[2])


def _cat_inv(x: Exponents) -> Exponents:
    v1, v2, k = x
    w = (CAT_MAP ** (-k)) @ (v1, v2)
    return (-w[0], -w[1], -k)


def _cat_mul_array(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    P = _arrays.power_table(CAT_MAP, X[:, 2])
    w1 = P[:, 0, 0] * Y[:, 0] + P[:, 0, 1] * Y[:, 1]
    w2 = P[:, 1, 0] * Y[:, 0] + P[:, 1, 1] * Y[:, 1]
    return np.stack([X[:, 0] + w1, X[:, 1] + w2, X[:, 2] + Y[:, 2]], axis=1)


def catmap_period(n: int) -> int:
    return matrix_order_mod(CAT_MAP, n)


def make_catmap() -> GroupDescriptor:
    def quotient(n: int, m: int | None = None):
        if n < 3 or n % 2 == 0:
            raise CoprimalityViolation(f"catmap quotients need odd n >= 3, got {n}")
        order = catmap_period(n)
        m = order if m is None else m
        if m < 1 or m % order:
            raise BadPeriod(
                f"m={m} is not a multiple of the order {order} of T mod {n}")
        powers = [(CAT_MAP ** k).mod(n) for k in range(m)]

        def mul(x: Exponents, y: Exponents) -> Exponents:
            w = powers[x[2] % m] @ (y[0], y[1])
            return ((x[0] + w[0]) % n, (x[1] + w[1]) % n, (x[2] + y[2]) % m)

        def inv(x: Exponents) -> Exponents:
            w = powers[(-x[2]) % m] @ (x[0], x[1])
            return (-w[0] % n, -w[1] % n, -x[2] % m)

        target = GroupDescriptor(
            name=f"catmap/{n},{m}", rank=3,
            multiply_map=mul, inverse_map=inv,
            moduli=(n, n, m),
            multiply_array=_cat_mul_array,
            params={"n": n, "m": m},
        )
        return target, QuotientMap(source, target)

    source = GroupDescriptor(
        name="catmap", rank=3,
        multiply_map=_cat_mul, inverse_map=_cat_inv,
        multiply_array=_cat_mul_array,
        quotient_factory=quotient,
    )
    return source


GROUP_FACTORIES: dict[str, Callable[[], GroupDescriptor]] = {
    "z": make_z,
    "z2": make_z2,
    "nilpotent5": make_nilpotent5,
    "catmap": make_catmap,
}


def make_group(name: str) -> GroupDescriptor:
    try:
        return GROUP_FACTORIES[name]()
    except KeyError:
        raise ValueError(f"unknown group {name!r}; choose from {sorted(GROUP_FACTORIES)}") from None


def finite_quotient(descriptor: GroupDescriptor, n: int,
                    m: int | None = None) -> tuple[GroupDescriptor, QuotientMap]:
    """Coordinate-wise reduction of ``descriptor`` mod n (and k mod m for catmap)."""
    if descriptor.quotient_factory is None:
        raise ValueError(f"{descriptor.name} has no finite quotients")
    return descriptor.quotient_factory(n, m)


def enumerate_elements(descriptor: GroupDescriptor) -> list[GroupElement]:
    """All elements of a finite group in lexicographic exponent order."""
    if descriptor.moduli is None:
        raise InfiniteGroup(f"cannot enumerate the infinite group {descriptor.name}")
    return [GroupElement(descriptor, exps)
            for exps in itertools.product(*(range(m) for m in descriptor.moduli))]


def box_ranges(rank: int, radius: int | Sequence) -> list[range]:
    """Per-coordinate ranges; ``radius`` is an int or a list of (lo, hi) pairs."""
    if isinstance(radius, (int, np.integer)):
        return [range(-int(radius), int(radius) + 1)] * rank
    ranges = [range(lo, hi + 1) for lo, hi in radius]
    if len(ranges) != rank:
        raise ValueError(f"box has {len(ranges)} coordinates, group rank is {rank}")
    return ranges


def box_elements(descriptor: GroupDescriptor, radius: int | Sequence) -> list[GroupElement]:
    """Elements with exponents in a box, lexicographically ordered."""
    return [GroupElement(descriptor, descriptor.reduce(exps))
            for exps in itertools.product(*box_ranges(descriptor.rank, radius))]


def box_array(rank: int, radius: int | Sequence) -> np.ndarray:
    ranges = box_ranges(rank, radius)
    grids = np.meshgrid(*[np.array(r, dtype=np.int64) for r in ranges], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)
