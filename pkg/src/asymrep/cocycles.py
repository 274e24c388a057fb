"""The example 2-cocycles, each with an exact scalar and a vectorized evaluator.

The scalar routes use Fraction and :class:`IntMatrix`; the array routes work on
integer numpy arrays and return ``(numerator, denominator)``.  The two are
computed independently and compared in the tests.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import _arrays
from .exact import CAT_MAP, IntMatrix, binomial_poly, mat_vec, s_k
from .homology import Cochain

HALF = Fraction(1, 2)


# Z^2: sigma((x1, x2), (y1, y2)) = x2 y1

def _z2(x, y):
    return x[1] * y[0]


def _z2_rows(X, Y):
    return X[:, 1] * Y[:, 0], 1


def sigma_z2() -> Cochain:
    return Cochain(2, _z2, "sigma_z2", _z2_rows)


# nilpotent5: sigma(x, y) = x4 y1 + 2 x3 C(y1, 2) + 2 x2 C(y1, 3)

def _nil5(x, y):
    y1 = y[0]
    return x[3] * y1 + 2 * x[2] * binomial_poly(y1, 2) + 2 * x[1] * binomial_poly(y1, 3)


def _nil5_rows(X, Y):
    y1 = Y[:, 0]
    c2 = y1 * (y1 - 1)            # 2 C(y1, 2)
    c3 = y1 * (y1 - 1) * (y1 - 2)  # 6 C(y1, 3)
    return X[:, 3] * y1 + X[:, 2] * c2 + (X[:, 1] * c3) // 3, 1


def sigma_nilpotent5() -> Cochain:
    return Cochain(2, _nil5, "sigma_nilpotent5", _nil5_rows)


# catmap

TMINUS1_INV = (CAT_MAP - IntMatrix.identity(2)).inverse()


def form_alpha(t) -> Fraction:
    """alpha(u (x) w) = u^1 w^2, extended linearly to Z^2 (x) Z^2 = Z^4."""
    return Fraction(t[1])


def form_beta(t) -> Fraction:
    """beta(u (x) w) = 1/2 u^2 w^2 + u^1 w^1."""
    return HALF * t[3] + t[0]


def form_gamma(v) -> Fraction:
    """gamma(v) = v^1 + 1/2 v^2."""
    return v[0] + HALF * v[1]


def _tensor(u, w) -> tuple:
    return (u[0] * w[0], u[0] * w[1], u[1] * w[0], u[1] * w[1])


def catmap_parts(x, y) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """sigma_1 .. sigma_4 at ((v1, k1), (v2, k2)); sigma = s1 + s2 + s3 - s4."""
    v1, k1 = (x[0], x[1]), x[2]
    v2 = (y[0], y[1])
    Tk = CAT_MAP ** k1
    s1 = form_alpha(_tensor(Tk @ v2, v1))
    Sv = mat_vec(s_k(CAT_MAP, k1), _tensor(v2, v2))
    s2 = form_alpha(Sv)
    s3 = form_beta(Sv)
    w = TMINUS1_INV @ ((Tk - IntMatrix.identity(2)) @ v2)
    s4 = form_gamma(w)
    return s1, s2, s3, s4


def _cat(x, y):
    s1, s2, s3, s4 = catmap_parts(x, y)
    return s1 + s2 + s3 - s4


# (T - 1)^{-1} as plain ints for the array route
_TI = TMINUS1_INV.tolist()


def _cat_rows(X, Y):
    """2 sigma on rows, as an exact integer array (denominator 2)."""
    k = X[:, 2]
    a1, a2 = Y[:, 0], Y[:, 1]
    P = _arrays.power_table(CAT_MAP, k)
    S = _arrays.s_table(CAT_MAP, k)
    u1 = P[:, 0, 0] * a1 + P[:, 0, 1] * a2
    # sigma_1: first coordinate of T^k v2 times second coordinate of v1
    s1 = u1 * X[:, 1]
    t = (a1 * a1, a1 * a2, a2 * a1, a2 * a2)
    St = [S[:, r, 0] * t[0] + S[:, r, 1] * t[1] + S[:, r, 2] * t[2] + S[:, r, 3] * t[3]
          for r in range(4)]
    s2 = St[1]
    two_s3 = St[3] + 2 * St[0]
    d1 = u1 - a1
    d2 = P[:, 1, 0] * a1 + P[:, 1, 1] * a2 - a2
    w1 = _TI[0][0] * d1 + _TI[0][1] * d2
    w2 = _TI[1][0] * d1 + _TI[1][1] * d2
    two_s4 = 2 * w1 + w2
    return 2 * s1 + 2 * s2 + two_s3 - two_s4, 2


def sigma_catmap() -> Cochain:
    return Cochain(2, _cat, "sigma_catmap", _cat_rows)


# a deliberately broken cochain on Z: sigma(x, y) = x1 y1^3

def _bad(x, y):
    return x[0] * y[0] ** 3


def sigma_noncocycle() -> Cochain:
    return Cochain(2, _bad, "noncocycle", lambda X, Y: (X[:, 0] * Y[:, 0] ** 3, 1))


COCYCLES = {
    "z2": sigma_z2,
    "nilpotent5": sigma_nilpotent5,
    "catmap": sigma_catmap,
    "noncocycle": sigma_noncocycle,
}


def integer_value(sigma: Cochain, x, y) -> int:
    """sigma(x, y) as an int; raises if the value is not integral."""
    v = sigma(x, y)
    if v.denominator != 1:
        raise ValueError(f"{sigma.name}{(tuple(x), tuple(y))} = {v} is not an integer")
    return v.numerator


def integer_rows(sigma: Cochain, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    num, den = sigma.evaluate_rows(X, Y)
    if den != 1:
        if np.any(num % den != 0):
            raise ValueError(f"{sigma.name} took a non-integer value")
        num = num // den
    return num
