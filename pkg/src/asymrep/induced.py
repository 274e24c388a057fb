"""Finite central extensions and representations induced from the center.

Only the Heisenberg group mod n is built concretely: it is the central
extension of (Z/n)^2 by Z/n whose section (x, y) -> (x, y, 0) has cocycle
sigma((x1, x2), (y1, y2)) = x2 y1.  Inducing the character c -> omega from
the center gives a genuine representation of dimension n^2, which is compared
entrywise with the explicit formula from :mod:`asymrep.reps`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NonPrimitiveRoot
from .groups import GroupDescriptor, GroupElement, box_elements, enumerate_elements, finite_quotient, make_z2
from .numerics import op_norm
from .reps import AsymRepSpec, build_rep


@dataclass(eq=False)
class FiniteCentralExtension:
    total: GroupDescriptor
    center_generator: GroupElement
    quotient: GroupDescriptor
    projection: Callable[[GroupElement], GroupElement]
    section: Callable[[GroupElement], GroupElement]
    n: int

    def validate(self) -> None:
        c = self.center_generator
        for g in enumerate_elements(self.total):
            if g * c != c * g:
                raise ValueError(f"center generator does not commute with {g}")
        if (c ** self.n) != self.total.identity() or any(
                (c ** k).is_identity() for k in range(1, self.n)):
            raise ValueError(f"center generator does not have order {self.n}")
        for q in enumerate_elements(self.quotient):
            if self.projection(self.section(q)) != q:
                raise ValueError(f"projection . section is not the identity at {q}")
        if not self.section(self.quotient.identity()).is_identity():
            raise ValueError("section does not send the identity to the identity")

    def section_cocycle(self, g: GroupElement, h: GroupElement) -> int:
        """k with theta(g) theta(h) theta(gh)^{-1} = c^k."""
        s = self.section
        z = s(g) * s(h) * s(g * h).inverse()
        return self._center_power(z)

    def _center_power(self, z: GroupElement) -> int:
        c = self.center_generator
        p = self.total.identity()
        for k in range(self.n):
            if p == z:
                return k
            p = p * c
        raise ValueError(f"{z} is not central")


def heisenberg_mod(n: int) -> FiniteCentralExtension:
    """(x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+y1x2) mod n."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"heisenberg_mod needs an integer n >= 2, got {n!r}")

    def mul(a, b):
        return ((a[0] + b[0]) % n, (a[1] + b[1]) % n, (a[2] + b[2] + a[1] * b[0]) % n)

    def inv(a):
        return (-a[0] % n, -a[1] % n, (a[0] * a[1] - a[2]) % n)

    total = GroupDescriptor(name=f"heisenberg/{n}", rank=3, multiply_map=mul,
                            inverse_map=inv, moduli=(n, n, n), params={"n": n})
    quotient, _ = finite_quotient(make_z2(), n)
    return FiniteCentralExtension(
        total=total,
        center_generator=total.element(0, 0, 1),
        quotient=quotient,
        projection=lambda g: quotient.element(g.exponents[:2]),
        section=lambda q: total.element(q.exponents[0], q.exponents[1], 0),
        n=n,
    )


class InducedRep:
    """Induced from c -> omega, on the basis of coset representatives section(q)."""

    def __init__(self, ext: FiniteCentralExtension, omega: complex):
        self.ext = ext
        self.omega = omega
        self.cosets = enumerate_elements(ext.quotient)
        self.reps = [ext.section(q) for q in self.cosets]
        self.index = {q: i for i, q in enumerate(self.cosets)}
        self.dim = len(self.cosets)
        self._cache: dict = {}

    def __call__(self, g: GroupElement) -> np.ndarray:
        hit = self._cache.get(g.exponents)
        if hit is not None:
            return hit
        M = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for i, gi in enumerate(self.reps):
            p = g * gi
            j = self.index[self.ext.projection(p)]
            # g g_i = g_j c^k
            k = self.ext._center_power(self.reps[j].inverse() * p)
            M[j, i] = self.omega ** k
        self._cache[g.exponents] = M
        return M

    def restricted(self, lift: Callable[[GroupElement], GroupElement]) -> Callable:
        """g -> pi(lift(g)) for g in the infinite group."""
        return lambda g: self(lift(g))


def induce_character(ext: FiniteCentralExtension, omega: complex | None = None) -> InducedRep:
    n = ext.n
    omega = cmath.exp(2j * math.pi / n) if omega is None else complex(omega)
    if abs(omega ** n - 1) > 1e-12:
        raise NonPrimitiveRoot(f"omega^{n} = {omega ** n:.6g}, not 1")
    for k in range(1, n):
        if abs(omega ** k - 1) < 1e-9:
            raise NonPrimitiveRoot(f"omega has order {k}, not {n}")
    return InducedRep(ext, omega)


def max_multiplicativity_error(pi: InducedRep) -> float:
    elems = enumerate_elements(pi.ext.total)
    mats = {g.exponents: pi(g) for g in elems}
    worst = 0.0
    for g in elems:
        A = mats[g.exponents]
        for h in elems:
            worst = max(worst, float(np.max(np.abs(mats[(g * h).exponents] - A @ mats[h.exponents]))))
    return worst


def compare_with_formula(ext: FiniteCentralExtension, spec: AsymRepSpec, n: int,
                         lift: Callable[[GroupElement], GroupElement] | None = None,
                         box: int = 2) -> float:
    """max over g in a box of ||pi(theta(g)) - rho_n(g)||.

    theta(g) = section(q(g)) unless ``lift`` (a map on quotient elements into
    the extension) replaces the section.  Basis vectors are matched through
    q(g) <-> section(q(g)).
    """
    if ext.n != n:
        raise DimensionMismatch(f"extension is mod {ext.n}, comparison asked for n={n}")
    rho = build_rep(spec, n)
    pi = induce_character(ext)
    if rho.dim != pi.dim:
        raise DimensionMismatch(f"induced dim {pi.dim} vs formula dim {rho.dim}")
    sec = ext.section if lift is None else lift
    worst = 0.0
    for g in box_elements(spec.group, box):
        q = ext.quotient.element(g.exponents)
        worst = max(worst, op_norm(pi(sec(q)) - rho(g)))
    return worst
