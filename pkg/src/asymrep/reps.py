"""Unitary families built from an integer 2-cocycle and finite quotients.

For a finite quotient Q_n of the group and ``sigma`` whose reduction mod n
only sees Q_n-classes, ``rho_n(g)`` acts on the basis of l^2(Q_n) by

    rho_n(g) e_{q(h)} = exp(2 pi i (alpha_n(g) + sigma_n(g, h)) / n) e_{q(gh)}.

These matrices satisfy rho(g) rho(h) = exp(2 pi i sigma(g, h) / n) rho(gh);
the trace-of-log pairing against a 2-cycle then detects the class of sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import cocycles
from .errors import (
    InadmissibleN,
    NotAlmostMultiplicative,
    ReductionInvalid,
    TooFarFromIdentity,
    WellDefinednessFailure,
)
from .groups import (
    GroupDescriptor,
    GroupElement,
    QuotientMap,
    catmap_period,
    enumerate_elements,
    finite_quotient,
    make_catmap,
    make_nilpotent5,
    make_z2,
)
from .homology import Chain, Cochain, boundary2, pair
from .numerics import MonomialMatrix, distance_to_identity, is_unitary, op_norm, trace_log

TWO_PI_I = 2j * math.pi
INTEGRALITY_TOL = 1e-6
OBSTRUCTION_BOUND = "1/24"


@dataclass(frozen=True, eq=False)
class AsymRepSpec:
    name: str
    group: GroupDescriptor
    sigma: Cochain
    quotient_builder: Callable[[int], tuple[GroupDescriptor, QuotientMap]]
    admissible: Callable[[int], bool]
    requirement: str = ""
    sigma_n: Callable[[int], Cochain] | None = None
    alpha_n: Callable[[int], Cochain] | None = None

    def check_n(self, n: int) -> None:
        if not self.admissible(n):
            raise InadmissibleN(f"n={n} is not admissible for {self.name}: {self.requirement}")

    def sigma_for(self, n: int) -> Cochain:
        return self.sigma if self.sigma_n is None else self.sigma_n(n)

    def alpha_for(self, n: int) -> Cochain | None:
        return None if self.alpha_n is None else self.alpha_n(n)


def _residues(num: np.ndarray, den: int, n: int) -> np.ndarray:
    """(num / den) mod n as int64, den assumed invertible mod n."""
    if den != 1:
        if math.gcd(den, n) != 1:
            raise InadmissibleN(f"denominator {den} is not invertible mod {n}")
        num = num * pow(den, -1, n)
    return np.asarray(num % n, dtype=np.int64)


class BuiltRep:
    """rho_n on l^2 of the quotient, or on a coordinate subset of it.

    ``retained`` lists 1-based coordinates kept in the basis (None keeps all);
    dropped coordinates of basis lifts are set to 0.
    """

    def __init__(self, spec: AsymRepSpec, n: int, retained: Sequence[int] | None = None):
        spec.check_n(n)
        self.spec = spec
        self.n = n
        self.quotient, self.qmap = spec.quotient_builder(n)
        rank = spec.group.rank
        keep = list(range(rank)) if retained is None else sorted({int(c) - 1 for c in retained})
        if not keep or keep[0] < 0 or keep[-1] >= rank:
            raise ReductionInvalid(f"retained coordinates {retained} out of range 1..{rank}")
        self.keep = keep
        self.retained = tuple(c + 1 for c in keep)
        self.reduced = len(keep) < rank
        moduli = np.array(self.quotient.moduli, dtype=np.int64)
        self.moduli = moduli
        self.kept_moduli = moduli[keep]
        self.dim = int(np.prod(self.kept_moduli))
        strides = np.ones(len(keep), dtype=np.int64)
        for i in range(len(keep) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.kept_moduli[i + 1]
        self.strides = strides
        # basis: lexicographic over the kept coordinates, lifted with zeros elsewhere
        grids = np.meshgrid(*[np.arange(m, dtype=np.int64) for m in self.kept_moduli], indexing="ij")
        self.lifts = np.zeros((self.dim, rank), dtype=np.int64)
        for j, c in enumerate(keep):
            self.lifts[:, c] = grids[j].ravel()
        self._sigma = spec.sigma_for(n)
        self._alpha = spec.alpha_for(n)
        self._cache: dict[tuple[int, ...], MonomialMatrix] = {}

    # raw column data: target basis index and phase residue mod n
    def _columns(self, x: Sequence[int], Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        X = np.broadcast_to(np.asarray(x, dtype=np.int64), Y.shape)
        P = self.spec.group.multiply_rows(X, Y)
        kept = np.asarray(P[:, self.keep] % self.kept_moduli, dtype=np.int64)
        idx = kept @ self.strides
        num, den = self._sigma.evaluate_rows(X, Y)
        res = _residues(num, den, self.n)
        if self._alpha is not None:
            a = self._alpha(tuple(int(v) for v in x))
            res = (res + (a.numerator * pow(a.denominator, -1, self.n))) % self.n
        return idx, res

    def monomial(self, g) -> MonomialMatrix:
        x = g.exponents if isinstance(g, GroupElement) else tuple(int(v) for v in g)
        hit = self._cache.get(x)
        if hit is None:
            idx, res = self._columns(x, self.lifts)
            hit = MonomialMatrix(idx, np.exp(TWO_PI_I * res / self.n))
            self._cache[x] = hit
        return hit

    def monomial_rows(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Permutations and phases of rho(x) for every row x of X, shape (N, dim)."""
        X = np.asarray(X)
        N, d = len(X), self.dim
        Xr = np.repeat(X, d, axis=0)
        Yr = np.tile(self.lifts, (N, 1))
        P = self.spec.group.multiply_rows(Xr, Yr)
        kept = np.asarray(P[:, self.keep] % self.kept_moduli, dtype=np.int64)
        perms = (kept @ self.strides).reshape(N, d)
        num, den = self._sigma.evaluate_rows(Xr, Yr)
        res = _residues(num, den, self.n).reshape(N, d)
        if self._alpha is not None:
            extra = []
            for x in X:
                a = self._alpha(tuple(int(v) for v in x))
                extra.append(a.numerator * pow(a.denominator, -1, self.n) % self.n)
            res = (res + np.array(extra, dtype=np.int64)[:, None]) % self.n
        return perms, np.exp(TWO_PI_I * res / self.n)

    def __call__(self, g) -> np.ndarray:
        return self.monomial(g).dense()

    def index(self, g) -> int:
        x = np.asarray(g.exponents if isinstance(g, GroupElement) else g, dtype=np.int64)
        return int((x[self.keep] % self.kept_moduli) @ self.strides)

    def basis(self) -> list[GroupElement]:
        return [self.spec.group.element(tuple(int(v) for v in row)) for row in self.lifts]

    def check_lifts(self, elements: Sequence, seed: int = 0, preimages: int = 3) -> None:
        """Sample other preimages of the basis and of each ``g``; raise on mismatch."""
        rng = np.random.default_rng(seed)
        rank = self.spec.group.rank
        drop = [c for c in range(rank) if c not in self.keep]
        for g in elements:
            x = np.asarray(g.exponents if isinstance(g, GroupElement) else g, dtype=np.int64)
            idx0, res0 = self._columns(x, self.lifts)
            for _ in range(preimages):
                shift = rng.integers(-1, 3, size=(self.dim, rank)) * self.moduli
                Y = self.lifts + shift
                Y[:, drop] = self.lifts[:, drop]
                idx, res = self._columns(x, Y)
                if not (np.array_equal(idx, idx0) and np.array_equal(res, res0)):
                    raise WellDefinednessFailure(
                        f"{self.spec.name}, n={self.n}: sigma mod n separates preimages "
                        f"of a quotient class (g={tuple(x)})")
                if drop:
                    Y = self.lifts.copy()
                    Y[:, drop] = rng.integers(-3, 4, size=(self.dim, len(drop)))
                    idx, res = self._columns(x, Y)
                    if not (np.array_equal(idx, idx0) and np.array_equal(res, res0)):
                        raise ReductionInvalid(
                            f"{self.spec.name}, n={self.n}: the action on retained coordinates "
                            f"{self.retained} depends on dropped coordinates (g={tuple(x)})")
                x2 = x + rng.integers(-1, 3, size=rank) * self.moduli
                idx, res = self._columns(x2, self.lifts)
                if not (np.array_equal(idx, idx0) and np.array_equal(res, res0)):
                    raise WellDefinednessFailure(
                        f"{self.spec.name}, n={self.n}: rho depends on the lift of g={tuple(x)}")

    def __repr__(self):
        kind = f"reduced{self.retained}" if self.reduced else "full"
        return f"BuiltRep({self.spec.name}, n={self.n}, {kind}, dim={self.dim})"


def _sample_elements(group: GroupDescriptor, rng: np.random.Generator, count: int, radius: int = 3):
    gens = group.generators()
    out = [group.identity()] + gens + [g.inverse() for g in gens]
    for _ in range(count):
        out.append(group.element(tuple(int(v) for v in rng.integers(-radius, radius + 1, group.rank))))
    return out


def build_rep(spec: AsymRepSpec, n: int, seed: int = 0, samples: int = 8) -> BuiltRep:
    rep = BuiltRep(spec, n)
    rep.check_lifts(_sample_elements(spec.group, np.random.default_rng(seed), samples), seed)
    return rep


def build_reduced_rep(spec: AsymRepSpec, n: int, retained: Sequence[int], seed: int = 0,
                      samples: int = 8) -> BuiltRep:
    rep = BuiltRep(spec, n, retained)
    rep.check_lifts(_sample_elements(spec.group, np.random.default_rng(seed), samples), seed)
    return rep


def scalar_defect(spec: AsymRepSpec, n: int, g, h) -> complex:
    """chi_n(g, h) = exp(2 pi i sigma(g, h) / n)."""
    spec.check_n(n)
    return complex(np.exp(TWO_PI_I * float(spec.sigma(g, h) % n) / n))


def multiplicativity_defect(rep: BuiltRep, g: GroupElement, h: GroupElement) -> float:
    """||rho(gh) - rho(g) rho(h)||."""
    return rep.monomial(g * h).distance(rep.monomial(g) @ rep.monomial(h))


# --------------------------------------------------------------------------
# pairing


@dataclass
class PairingReport:
    n: int | None
    dim: int
    raw: complex
    rounded: int
    residual: float
    epsilon: float
    certificate: bool
    boundary_support: list
    is_cycle: bool
    strict: bool = True
    convention: str = "chi"
    bound: str = OBSTRUCTION_BOUND
    terms: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dim": self.dim,
            "raw": [float(self.raw.real), float(self.raw.imag)],
            "rounded": self.rounded,
            "residual": float(self.residual),
            "epsilon": float(self.epsilon),
            "certificate": self.certificate,
            "boundary_support": [list(g.exponents) for g in self.boundary_support],
            "is_cycle": self.is_cycle,
            "strict": self.strict,
            "convention": self.convention,
            "bound": self.bound,
        }


def _inverse(M):
    if isinstance(M, MonomialMatrix):
        return M.adjoint() if is_unitary(M) else M.inverse()
    M = np.asarray(M, dtype=np.complex128)
    return M.conj().T if is_unitary(M) else np.linalg.inv(M)


def _commutator(evaluate, a, b, convention: str):
    A, B, AB = evaluate(a), evaluate(b), evaluate(a * b)
    if convention == "chi":
        # rho(a) rho(b) rho(ab)^{-1}, equal to chi(a, b) I for rho_n
        return A @ B @ _inverse(AB)
    if convention == "verbatim":
        # rho(ab) rho(b)^{-1} rho(a)^{-1}, equal to conj(chi(a, b)) I for rho_n
        return AB @ _inverse(B) @ _inverse(A)
    raise ValueError(f"unknown convention {convention!r}")


def rep_pairing(rep, c: Chain, strict: bool = True, convention: str = "chi",
                n: int | None = None) -> PairingReport:
    """(1 / 2 pi i) sum_i x_i Tr log D_i over the terms x_i [a_i|b_i] of ``c``.

    ``D_i`` is rho(a)rho(b)rho(ab)^{-1} (``convention="chi"``) or
    rho(ab)rho(b)^{-1}rho(a)^{-1} (``"verbatim"``); the two give opposite signs.
    With ``strict`` every D_i must lie within 1 of the identity, otherwise
    ``NotAlmostMultiplicative`` is raised.  Without it the principal branch
    is used up to distance just below 2.
    """
    if isinstance(rep, BuiltRep):
        evaluate, dim, n = rep.monomial, rep.dim, rep.n
    else:
        evaluate = rep
        dim = None
    limit = 1.0 if strict else 2.0 - 1e-6
    total = 0j
    eps = 0.0
    terms = []
    for (a, b), x in c.items():
        D = _commutator(evaluate, a, b, convention)
        if dim is None:
            dim = D.shape[0]
        dist = distance_to_identity(D)
        eps = max(eps, dist)
        if dist > limit + 1e-9:
            kind = "strictly " if strict else ""
            raise NotAlmostMultiplicative(
                f"commutator at [{a.exponents}|{b.exponents}] is {dist:.4g} from the identity; "
                f"the pairing needs {kind}at most {limit:.6g}")
        try:
            tl = trace_log(D, max_distance=limit)
        except TooFarFromIdentity as exc:
            raise NotAlmostMultiplicative(str(exc)) from exc
        total += x * tl
        terms.append(((a.exponents, b.exponents), x, tl / TWO_PI_I))
    raw = total / TWO_PI_I
    rounded = int(round(raw.real))
    residual = abs(raw - rounded)
    cyc = boundary2(c).is_zero()
    support = c.boundary_support() if c.terms else []
    cert = cyc and residual < INTEGRALITY_TOL and rounded != 0 and eps < 1.0
    return PairingReport(n=n, dim=dim or 0, raw=complex(raw), rounded=rounded,
                         residual=float(residual), epsilon=float(eps), certificate=bool(cert),
                         boundary_support=support, is_cycle=cyc, strict=strict,
                         convention=convention, terms=terms)


def obstruction_certificate(rep, c: Chain, strict: bool = True, **kw) -> PairingReport:
    """Pairing report whose ``certificate`` flag is set when the pairing is a
    nonzero integer on a cycle with every defect below 1: no genuine
    representation lies within 1/24 of ``rep`` on the boundary support."""
    return rep_pairing(rep, c, strict=strict, **kw)


def predicted_pairing(spec: AsymRepSpec, c: Chain, n: int,
                      retained: Sequence[int] | None = None) -> Fraction:
    """<sigma, c> dim / n for the full or reduced representation."""
    spec.check_n(n)
    Q, _ = spec.quotient_builder(n)
    moduli = Q.moduli
    if retained is None:
        dim = math.prod(moduli)
    else:
        dim = math.prod(moduli[int(i) - 1] for i in sorted(set(retained)))
    return pair(spec.sigma, c) * dim / n


# --------------------------------------------------------------------------
# defect scans


def defect_rows(rep: BuiltRep, G: np.ndarray, H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ||rho(gh) - rho(g)rho(h)|| and |chi(g, h) - 1| for rows of G, H.

    The first comes from the matrices, the second straight from sigma.
    """
    G, H = np.asarray(G), np.asarray(H)
    pg, fg = rep.monomial_rows(G)
    ph, fh = rep.monomial_rows(H)
    pgh, fgh = rep.monomial_rows(rep.spec.group.multiply_rows(G, H))
    perm = np.take_along_axis(pg, ph, axis=1)
    phase = fh * np.take_along_axis(fg, ph, axis=1)
    defect = np.empty(len(G))
    same = np.all(perm == pgh, axis=1)
    # with equal permutations the difference is monomial: its norm is the
    # largest phase gap
    defect[same] = np.max(np.abs(fgh[same] - phase[same]), axis=1) if same.any() else 0.0
    for i in np.flatnonzero(~same):
        defect[i] = MonomialMatrix(pgh[i], fgh[i]).distance(MonomialMatrix(perm[i], phase[i]))
    num, den = rep.spec.sigma.evaluate_rows(G, H)
    res = _residues(num, den, rep.n)
    predicted = np.abs(np.exp(TWO_PI_I * res / rep.n) - 1)
    return defect, predicted


def defect_box(rep: BuiltRep, B: np.ndarray, chunk: int = 1 << 16) -> tuple[float, float]:
    """Exhaustive scan over all pairs of rows of B.

    Returns (max |defect - predicted|, max defect).
    """
    B = np.asarray(B)
    pb, fb = rep.monomial_rows(B)
    nb = len(B)
    step = max(1, chunk // nb)
    worst = top = 0.0
    for start in range(0, nb, step):
        gi = np.repeat(np.arange(start, min(start + step, nb)), nb)
        hi = np.tile(np.arange(nb), len(gi) // nb)
        G, H = B[gi], B[hi]
        pgh, fgh = rep.monomial_rows(rep.spec.group.multiply_rows(G, H))
        perm = np.take_along_axis(pb[gi], pb[hi], axis=1)
        phase = fb[hi] * np.take_along_axis(fb[gi], pb[hi], axis=1)
        if not np.array_equal(perm, pgh):
            raise AssertionError("rho(g)rho(h) and rho(gh) permute the basis differently")
        defect = np.max(np.abs(fgh - phase), axis=1)
        num, den = rep.spec.sigma.evaluate_rows(G, H)
        predicted = np.abs(np.exp(TWO_PI_I * _residues(num, den, rep.n) / rep.n) - 1)
        worst = max(worst, float(np.max(np.abs(defect - predicted))))
        top = max(top, float(defect.max()))
    return worst, top


def defect_table(rep: BuiltRep, elements: Sequence[GroupElement], pairs=None):
    """Rows (g, h, defect, predicted |chi - 1|) over all pairs of ``elements``."""
    sigma = rep.spec.sigma
    pairs = pairs if pairs is not None else [(g, h) for g in elements for h in elements]
    rows = []
    for g, h in pairs:
        d = multiplicativity_defect(rep, g, h)
        p = abs(np.exp(TWO_PI_I * float(sigma(g, h) % rep.n) / rep.n) - 1)
        rows.append((g, h, d, float(p)))
    return rows


# --------------------------------------------------------------------------
# genuine representations and perturbations


class CharacterRep:
    """Direct sum of characters x -> exp(2 pi i <theta_j, x>) of Z^r."""

    def __init__(self, thetas):
        self.thetas = np.atleast_2d(np.asarray(thetas, dtype=float))

    @classmethod
    def random(cls, dim: int, rank: int = 2, seed: int = 0) -> "CharacterRep":
        return cls(np.random.default_rng(seed).uniform(0, 1, (dim, rank)))

    @property
    def dim(self) -> int:
        return self.thetas.shape[0]

    def __call__(self, g) -> np.ndarray:
        x = np.asarray(g.exponents if isinstance(g, GroupElement) else g, dtype=float)
        return np.diag(np.exp(TWO_PI_I * (self.thetas @ x)))


class PerturbedRep:
    """rho + E with a fixed random E(g) of norm below ``size`` for each g."""

    def __init__(self, base, size: float, seed: int = 0):
        self.base = base
        self.size = size
        self._rng = np.random.default_rng(seed)
        self._noise: dict = {}

    def noise(self, g) -> np.ndarray:
        key = g.exponents
        if key not in self._noise:
            d = self.base(g).shape[0]
            E = self._rng.standard_normal((d, d)) + 1j * self._rng.standard_normal((d, d))
            r = self._rng.uniform(0.0, self.size)
            self._noise[key] = E * (r / op_norm(E)) * (1 - 1e-9)
        return self._noise[key]

    def __call__(self, g) -> np.ndarray:
        return self.base(g) + self.noise(g)


# --------------------------------------------------------------------------
# the three example specs


def _z2_quotient(n):
    return finite_quotient(make_z2(), n)


def spec_z2() -> AsymRepSpec:
    return AsymRepSpec("z2", make_z2(), cocycles.sigma_z2(), _z2_quotient,
                       lambda n: isinstance(n, int) and n >= 2, "n >= 2 required")


def spec_nilpotent5() -> AsymRepSpec:
    G = make_nilpotent5()
    return AsymRepSpec("nilpotent5", G, cocycles.sigma_nilpotent5(),
                       lambda n: finite_quotient(G, n),
                       lambda n: isinstance(n, int) and n >= 2 and math.gcd(n, 6) == 1,
                       "coprime to 6 required")


def spec_catmap(m: int | Callable[[int], int] | None = None) -> AsymRepSpec:
    G = make_catmap()

    def period(n):
        if m is None:
            return catmap_period(n)
        return m(n) if callable(m) else m

    return AsymRepSpec("catmap", G, cocycles.sigma_catmap(),
                       lambda n: finite_quotient(G, n, period(n)),
                       lambda n: isinstance(n, int) and n >= 3 and n % 2 == 1,
                       "odd n >= 3 required")


SPECS = {"z2": spec_z2, "nilpotent5": spec_nilpotent5, "catmap": spec_catmap}

# coordinates kept by the standard dimension reductions (1-based)
DEFAULT_RETAINED = {"z2": (1,), "nilpotent5": (1,), "catmap": (1, 2)}


def make_spec(name: str) -> AsymRepSpec:
    try:
        return SPECS[name]()
    except KeyError:
        raise ValueError(f"unknown spec {name!r}; choose from {sorted(SPECS)}") from None


def commutator_cycle(a: GroupElement, b: GroupElement) -> Chain:
    """[b|a] - [a|b], a cycle whenever a and b commute."""
    return Chain(2, [((b, a), 1), ((a, b), -1)])


def enumerate_basis(rep: BuiltRep) -> list[GroupElement]:
    if rep.reduced:
        return rep.basis()
    return enumerate_elements(rep.quotient)
