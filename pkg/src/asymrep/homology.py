"""Bar-resolution chains and cochains in degrees 1 to 3.

A chain is a finite integer combination of cells ``[g_1|...|g_d]``; a cochain
is an exact (Fraction-valued) function of ``d`` group elements.  Groups here
are infinite, so cochains are evaluators and every identity is checked on
finite boxes of exponent vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import NotARelator
from .groups import GroupDescriptor, GroupElement, box_array, box_ranges, commutator

Cell = tuple[GroupElement, ...]


class Chain:
    """Integer combination of degree-``d`` bar cells; zero terms are dropped."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[Cell, int] | Iterable[tuple[Cell, int]] = ()):
        self.degree = degree
        acc: dict[Cell, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for cell, coeff in items:
            cell = tuple(cell)
            if len(cell) != degree:
                raise ValueError(f"cell {cell} does not have degree {degree}")
            acc[cell] = acc.get(cell, 0) + int(coeff)
        self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def zero(cls, degree: int) -> "Chain":
        return cls(degree)

    @classmethod
    def cell(cls, *elements: GroupElement, coeff: int = 1) -> "Chain":
        return cls(len(elements), [(elements, coeff)])

    def _check(self, other: "Chain"):
        if not isinstance(other, Chain) or other.degree != self.degree:
            raise TypeError("chains must have the same degree")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        return Chain(self.degree, itertools.chain(self.terms.items(), other.terms.items()))

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {k: -v for k, v in self.terms.items()})

    def __rmul__(self, k: int) -> "Chain":
        return Chain(self.degree, {c: k * v for c, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[Cell, int]]:
        """Terms in a fixed (lexicographic) order, so sums are reproducible."""
        return sorted(self.terms.items(), key=lambda kv: tuple(g.exponents for g in kv[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Cell]:
        return [cell for cell, _ in self.items()]

    def boundary_support(self) -> list[GroupElement]:
        """The elements a, b and ab over all terms [a|b]."""
        if self.degree != 2:
            raise ValueError("boundary support is defined for 2-chains")
        out = set()
        for a, b in self.terms:
            out.update((a, b, a * b))
        return sorted(out)

    def to_json(self) -> list[dict]:
        key = "pair" if self.degree == 2 else "cell"
        return [{key: [list(g.exponents) for g in cell], "coeff": coeff}
                for cell, coeff in self.items()]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], group: GroupDescriptor) -> "Chain":
        terms = []
        degree = None
        for entry in data:
            cell = entry.get("pair", entry.get("cell"))
            if cell is None:
                raise ValueError(f"chain entry without 'pair': {entry!r}")
            elems = tuple(group.element(tuple(e)) for e in cell)
            if degree is None:
                degree = len(elems)
            terms.append((elems, int(entry["coeff"])))
        return cls(2 if degree is None else degree, terms)

    def __repr__(self):
        if not self.terms:
            return f"Chain{self.degree}(0)"
        parts = []
        for cell, coeff in self.items():
            body = "|".join(str(g.exponents) for g in cell)
            parts.append(f"{coeff:+d}[{body}]")
        return " ".join(parts)


def Chain1(terms=()) -> Chain:
    return Chain(1, terms)


def Chain2(terms=()) -> Chain:
    return Chain(2, terms)


def Chain3(terms=()) -> Chain:
    return Chain(3, terms)


def boundary2(c: Chain) -> Chain:
    """d[g|h] = [g] - [gh] + [h]."""
    if c.degree != 2:
        raise ValueError("boundary2 takes a 2-chain")
    out = []
    for (g, h), x in c.terms.items():
        out += [((g,), x), ((g * h,), -x), ((h,), x)]
    return Chain(1, out)


def boundary3(d: Chain) -> Chain:
    """d[g1|g2|g3] = -[g1|g2] + [g1|g2g3] - [g1g2|g3] + [g2|g3]."""
    if d.degree != 3:
        raise ValueError("boundary3 takes a 3-chain")
    out = []
    for (g1, g2, g3), x in d.terms.items():
        out += [((g1, g2), -x), ((g1, g2 * g3), x), ((g1 * g2, g3), -x), ((g2, g3), x)]
    return Chain(2, out)


def _exps(g) -> tuple[int, ...]:
    return g.exponents if isinstance(g, GroupElement) else tuple(g)


class Cochain:
    """Exact cochain given by an evaluator on exponent tuples.

    ``array_fn``, if present, evaluates on (N, rank) integer arrays and returns
    ``(numerators, denominator)``; it is only a fast path and must agree with
    ``fn`` exactly.
    """

    def __init__(self, degree: int, fn: Callable[..., object], name: str = "cochain",
                 array_fn: Callable[..., tuple[np.ndarray, int]] | None = None):
        self.degree = degree
        self.fn = fn
        self.name = name
        self.array_fn = array_fn

    def __call__(self, *args) -> Fraction:
        if len(args) != self.degree:
            raise TypeError(f"{self.name} takes {self.degree} arguments")
        return Fraction(self.fn(*(_exps(g) for g in args)))

    def evaluate_rows(self, *arrays: np.ndarray) -> tuple[np.ndarray, int]:
        if self.array_fn is not None:
            return self.array_fn(*arrays)
        vals = [Fraction(self.fn(*(tuple(int(v) for v in row) for row in rows)))
                for rows in zip(*arrays)]
        den = 1
        for v in vals:
            den = den * v.denominator // np.gcd(den, v.denominator)
        return np.array([int(v * den) for v in vals], dtype=object), den

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree:
            raise TypeError("cochains must have the same degree")
        return Cochain(self.degree, lambda *a: Fraction(self.fn(*a)) + Fraction(other.fn(*a)),
                       f"({self.name}+{other.name})")

    def __repr__(self):
        return f"Cochain{self.degree}({self.name})"


def Cochain1(fn, name="alpha", array_fn=None) -> Cochain:
    return Cochain(1, fn, name, array_fn)


def Cochain2(fn, name="sigma", array_fn=None) -> Cochain:
    return Cochain(2, fn, name, array_fn)


def zero_cochain(degree: int) -> Cochain:
    return Cochain(degree, lambda *a: 0, "0",
                   lambda *arrs: (np.zeros(len(arrs[0]), dtype=np.int64), 1))


def coboundary1(alpha: Cochain, group: GroupDescriptor) -> Cochain:
    """(d alpha)(g, h) = alpha(g) - alpha(gh) + alpha(h)."""
    if alpha.degree != 1:
        raise ValueError("coboundary1 takes a 1-cochain")

    def fn(x, y):
        return Fraction(alpha.fn(x)) - Fraction(alpha.fn(group.multiply(x, y))) + Fraction(alpha.fn(y))

    return Cochain(2, fn, f"d({alpha.name})")


def coboundary2(sigma: Cochain, group: GroupDescriptor) -> Cochain:
    """(d sigma)(g1,g2,g3) = -s(g1,g2) + s(g1,g2g3) - s(g1g2,g3) + s(g2,g3)."""
    if sigma.degree != 2:
        raise ValueError("coboundary2 takes a 2-cochain")
    mul = group.multiply
    s = sigma.fn

    def fn(x, y, z):
        return (-Fraction(s(x, y)) + Fraction(s(x, mul(y, z)))
                - Fraction(s(mul(x, y), z)) + Fraction(s(y, z)))

    def array_fn(X, Y, Z):
        parts = [sigma.evaluate_rows(X, Y), sigma.evaluate_rows(X, group.multiply_rows(Y, Z)),
                 sigma.evaluate_rows(group.multiply_rows(X, Y), Z), sigma.evaluate_rows(Y, Z)]
        den = 1
        for _, d in parts:
            den = int(np.lcm(den, d))
        signs = (-1, 1, -1, 1)
        total = sum(sgn * num * (den // d) for sgn, (num, d) in zip(signs, parts))
        return total, den

    return Cochain(3, fn, f"d({sigma.name})", array_fn)


def pair(sigma: Cochain, c: Chain) -> Fraction:
    """<sigma, c> = sum of coeff * sigma(cell), summed in sorted term order."""
    if sigma.degree != c.degree:
        raise ValueError(f"cannot pair a degree {sigma.degree} cochain with a degree {c.degree} chain")
    total = Fraction(0)
    for cell, coeff in c.items():
        total += coeff * sigma(*cell)
    return total


@dataclass(frozen=True)
class CocycleCheck:
    result: bool
    checked: int
    violations: int
    witness: tuple[tuple[int, ...], ...] | None = None
    value: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "result": self.result,
            "checked": self.checked,
            "violations": self.violations,
            "witness": None if self.witness is None else [list(w) for w in self.witness],
            "value": None if self.value is None else str(self.value),
        }


def is_cocycle(sigma: Cochain, group: GroupDescriptor, box=3, boxes=None,
               vectorized: bool = True) -> CocycleCheck:
    """Exhaustive check of d sigma = 0 over all triples drawn from a box.

    ``box`` is a radius or per-coordinate (lo, hi) list used for every
    argument; ``boxes`` gives a separate box for each of the three arguments.
    The witness is the lexicographically first failing triple.
    """
    boxes = boxes if boxes is not None else (box, box, box)
    d = coboundary2(sigma, group)
    if vectorized and (sigma.array_fn is not None or group.multiply_array is not None):
        return _is_cocycle_rows(d, group, boxes)
    checked = violations = 0
    witness = value = None
    grids = [list(itertools.product(*box_ranges(group.rank, b))) for b in boxes]
    for x in grids[0]:
        for y in grids[1]:
            for z in grids[2]:
                checked += 1
                v = d.fn(x, y, z)
                if v != 0:
                    violations += 1
                    if witness is None:
                        witness, value = (x, y, z), Fraction(v)
    return CocycleCheck(violations == 0, checked, violations, witness, value)


def _is_cocycle_rows(d: Cochain, group: GroupDescriptor, boxes) -> CocycleCheck:
    A, B, C = (box_array(group.rank, b) for b in boxes)
    # inner block: every (y, z) pair; the outer loop runs over x
    nb, nc = len(B), len(C)
    Y = np.repeat(B, nc, axis=0)
    Z = np.tile(C, (nb, 1))
    checked = violations = 0
    witness = value = None
    for x in A:
        X = np.broadcast_to(x, Y.shape)
        num, den = d.array_fn(X, Y, Z)
        bad = np.flatnonzero(num != 0)
        checked += len(Y)
        if len(bad):
            violations += len(bad)
            if witness is None:
                i = int(bad[0])
                witness = (tuple(int(t) for t in x), tuple(int(t) for t in Y[i]),
                           tuple(int(t) for t in Z[i]))
                value = Fraction(int(num[i]), den)
    return CocycleCheck(violations == 0, checked, violations, witness, value)


def hopf_cycle(word: Sequence[tuple[GroupElement, GroupElement]]) -> Chain:
    """2-cycle attached to a product of commutators that is trivial in the group.

    With I_0 = e and I_i = I_{i-1}[a_i, b_i], the chain is the sum over i of
    [I_{i-1}|a_i] + [I_{i-1}a_i|b_i] - [I_{i-1}a_ib_ia_i^{-1}|a_i] - [I_i|b_i].
    Degenerate cells such as [e|a] are kept.
    """
    if not word:
        return Chain(2)
    group = word[0][0].group
    prefix = group.identity()
    terms = []
    for a, b in word:
        nxt = prefix * commutator(a, b)
        terms += [
            ((prefix, a), 1),
            ((prefix * a, b), 1),
            ((prefix * a * b * a.inverse(), a), -1),
            ((nxt, b), -1),
        ]
        prefix = nxt
    if not prefix.is_identity():
        raise NotARelator(f"product of commutators is {prefix}, not the identity")
    return Chain(2, terms)


def random_chain3(group: GroupDescriptor, rng: np.random.Generator, radius: int = 2,
                  terms: int = 3, max_coeff: int = 3) -> Chain:
    """Random 3-chain with entries in a box; used by the boundary tests."""
    out = []
    for _ in range(terms):
        cell = tuple(group.element(tuple(int(v) for v in rng.integers(-radius, radius + 1, group.rank)))
                     for _ in range(3))
        coeff = int(rng.integers(1, max_coeff + 1)) * int(rng.choice([-1, 1]))
        out.append((cell, coeff))
    return Chain(3, out)
