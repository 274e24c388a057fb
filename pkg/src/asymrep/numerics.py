"""Dense complex linear algebra on numpy arrays, plus a monomial fast path.

Matrices are plain ``complex128`` numpy arrays.  The representations built in
:mod:`asymrep.reps` are permutation-times-phase matrices, stored as
:class:`MonomialMatrix` and densified only when a general routine needs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .errors import DimensionMismatch, NonNormal, TooFarFromIdentity

UNITARY_TOL = 1e-9
SVD_LIMIT = 256


def complex_matrix(data) -> np.ndarray:
    A = np.array(data, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


class MonomialMatrix:
    """Matrix with ``M e_i = phases[i] e_{perm[i]}``."""

    __slots__ = ("perm", "phases")

    def __init__(self, perm, phases):
        self.perm = np.asarray(perm, dtype=np.int64)
        self.phases = np.asarray(phases, dtype=np.complex128)
        if self.perm.shape != self.phases.shape or self.perm.ndim != 1:
            raise DimensionMismatch("perm and phases must be 1-d of equal length")

    @classmethod
    def identity(cls, d: int) -> "MonomialMatrix":
        return cls(np.arange(d), np.ones(d))

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.dim, self.dim)

    def __matmul__(self, other):
        if isinstance(other, MonomialMatrix):
            if other.dim != self.dim:
                raise DimensionMismatch(f"{self.dim} vs {other.dim}")
            return MonomialMatrix(self.perm[other.perm], other.phases * self.phases[other.perm])
        return self.dense() @ other

    def scale(self, c: complex) -> "MonomialMatrix":
        return MonomialMatrix(self.perm, c * self.phases)

    def inverse(self) -> "MonomialMatrix":
        q = np.empty_like(self.perm)
        q[self.perm] = np.arange(self.dim)
        return MonomialMatrix(q, 1.0 / self.phases[q])

    def adjoint(self) -> "MonomialMatrix":
        q = np.empty_like(self.perm)
        q[self.perm] = np.arange(self.dim)
        return MonomialMatrix(q, np.conj(self.phases[q]))

    def is_diagonal(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.dim)))

    def dense(self) -> np.ndarray:
        M = np.zeros((self.dim, self.dim), dtype=np.complex128)
        M[self.perm, np.arange(self.dim)] = self.phases
        return M

    def distance(self, other: "MonomialMatrix | np.ndarray") -> float:
        """Operator norm of self - other."""
        if isinstance(other, MonomialMatrix) and np.array_equal(self.perm, other.perm):
            return float(np.max(np.abs(self.phases - other.phases), initial=0.0))
        other = other.dense() if isinstance(other, MonomialMatrix) else other
        return op_norm(self.dense() - other)

    def distance_to_scalar(self, z: complex = 1.0) -> float:
        """Operator norm of self - z I."""
        if self.is_diagonal():
            return float(np.max(np.abs(self.phases - z), initial=0.0))
        return op_norm(self.dense() - z * np.eye(self.dim))

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues from the cycle decomposition of the permutation."""
        seen = np.zeros(self.dim, dtype=bool)
        out = []
        for start in range(self.dim):
            if seen[start]:
                continue
            i, length, prod = start, 0, 1.0 + 0j
            while not seen[i]:
                seen[i] = True
                prod *= self.phases[i]
                i = self.perm[i]
                length += 1
            root = abs(prod) ** (1.0 / length) * np.exp(1j * np.angle(prod) / length)
            out.extend(root * np.exp(2j * np.pi * np.arange(length) / length))
        return np.array(out, dtype=np.complex128)

    def __array__(self, dtype=None, copy=None):
        D = self.dense()
        return D if dtype is None else D.astype(dtype)

    def __repr__(self):
        return f"MonomialMatrix(dim={self.dim})"


def _dense(A) -> np.ndarray:
    return A.dense() if isinstance(A, MonomialMatrix) else np.asarray(A, dtype=np.complex128)


def op_norm(A) -> float:
    """Largest singular value.

    Full SVD up to dimension 256, power iteration on A*A above that.
    """
    if isinstance(A, MonomialMatrix):
        return float(np.max(np.abs(A.phases), initial=0.0))
    A = np.asarray(A, dtype=np.complex128)
    if A.size == 0:
        return 0.0
    if max(A.shape) <= SVD_LIMIT:
        return float(np.linalg.norm(A, 2))
    return _power_norm(A)


def _power_norm(A: np.ndarray, tol: float = 1e-12, max_iter: int = 5000) -> float:
    rng = np.random.default_rng(0)
    x = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = A.conj().T @ (A @ x)
        new = float(np.linalg.norm(y))
        if new == 0.0:
            return 0.0
        x = y / new
        if abs(new - lam) <= tol * new:
            return math.sqrt(new)
        lam = new
    # slow convergence (clustered top singular values): fall back to SVD
    return float(np.linalg.norm(A, 2))


def is_unitary(U, tol: float = UNITARY_TOL) -> bool:
    if isinstance(U, MonomialMatrix):
        return bool(np.all(np.abs(np.abs(U.phases) - 1.0) <= tol))
    U = np.asarray(U)
    return op_norm(U.conj().T @ U - np.eye(U.shape[0])) <= tol


def is_normal(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    scale = max(1.0, op_norm(U)) ** 2
    return op_norm(U @ U.conj().T - U.conj().T @ U) <= tol * scale


def distance_to_identity(U) -> float:
    if isinstance(U, MonomialMatrix):
        return U.distance_to_scalar(1.0)
    U = np.asarray(U)
    return op_norm(U - np.eye(U.shape[0]))


def _check_radius(U, max_distance: float, tol: float) -> float:
    dist = distance_to_identity(U)
    if dist > max_distance + tol:
        raise TooFarFromIdentity(
            f"||U - I|| = {dist:.6g} exceeds {max_distance}; the logarithm is not defined here")
    return dist


def principal_log(U, max_distance: float = 1.0, tol: float = 1e-9) -> np.ndarray:
    """Principal matrix logarithm of a matrix near the identity.

    Normal input is diagonalized (complex Schur form) and the principal log
    taken on the eigenvalues.  Non-normal input is accepted only strictly
    inside the series radius ||U - I|| < 1, where scipy's ``logm`` is used.
    """
    if isinstance(U, MonomialMatrix) and U.is_diagonal():
        _check_radius(U, max_distance, tol)
        return np.diag(np.log(U.phases))
    U = _dense(U)
    dist = _check_radius(U, max_distance, tol)
    if is_normal(U):
        T, Z = scipy.linalg.schur(U, output="complex")
        return (Z * np.log(np.diag(T))) @ Z.conj().T
    if dist < 1.0:
        return scipy.linalg.logm(U)
    raise NonNormal("non-normal matrix on or beyond the series radius")


def trace_log(U, max_distance: float = 1.0, tol: float = 1e-9) -> complex:
    """Tr log U = sum of principal logs of the eigenvalues of U."""
    if isinstance(U, MonomialMatrix):
        _check_radius(U, max_distance, tol)
        lam = U.phases if U.is_diagonal() else U.eigenvalues()
        return complex(np.sum(np.log(lam)))
    U = _dense(U)
    dist = _check_radius(U, max_distance, tol)
    if not is_normal(U) and dist >= 1.0:
        raise NonNormal("non-normal matrix on or beyond the series radius")
    return complex(np.sum(np.log(np.linalg.eigvals(U))))


def kron(A, B) -> np.ndarray:
    return np.kron(_dense(A), _dense(B))


# --------------------------------------------------------------------------
# property harness for the two analytic lemmas


@dataclass
class LemmaReport:
    seed: int
    samples: int
    violations: dict = field(default_factory=dict)
    worst: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> dict:
        return {"seed": self.seed, "samples": self.samples, "ok": self.ok,
                "violations": dict(sorted(self.violations.items())),
                "worst": {k: float(v) for k, v in sorted(self.worst.items())}}


def _random_matrix(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def _with_norm(A: np.ndarray, r: float) -> np.ndarray:
    return A * (r / op_norm(A))


def lemma_anal_harness(seed: int = 0, samples: int = 1000, dim: int = 4) -> LemmaReport:
    """Sample each hypothesis and count violations of the conclusion.

    product: ||prod a_i - prod b_i|| < N M^{N-1} eps when ||a_i - b_i|| < eps
             and ||a_i||, ||b_i|| < M.
    inverse: ||a^{-1} - u*|| <= 2||a - u|| and ||a^{-1}|| < 2 when u is
             unitary and ||a - u|| <= 1/2.
    tracelog: Tr log(m1 m2) = Tr log m1 + Tr log m2 for unitaries with
              ||m_i - I|| < 1/2.
    """
    rng = np.random.default_rng(seed)
    report = LemmaReport(seed, samples, {"product": 0, "inverse": 0, "tracelog": 0},
                         {"product": 0.0, "inverse": 0.0, "tracelog": 0.0})

    for _ in range(samples):
        N = int(rng.integers(1, 7))
        M = float(rng.uniform(0.5, 3.0))
        eps = float(rng.uniform(1e-3, 1.0))
        a, b = [], []
        for _ in range(N):
            ai = _with_norm(_random_matrix(rng, dim), rng.uniform(0.0, M) * 0.999)
            diff = _with_norm(_random_matrix(rng, dim), rng.uniform(0.0, eps) * 0.999)
            bi = ai + diff
            nb = op_norm(bi)
            if nb >= M:
                # keep ||b_i|| < M by pulling b_i back towards a_i
                bi = ai + diff * ((M - op_norm(ai)) * 0.999 / op_norm(diff))
            a.append(ai)
            b.append(bi)
        lhs = op_norm(np.linalg.multi_dot(a) - np.linalg.multi_dot(b)) if N > 1 else op_norm(a[0] - b[0])
        eps_eff = max(op_norm(x - y) for x, y in zip(a, b))
        bound = N * M ** (N - 1) * eps
        if not (eps_eff < eps and lhs < bound):
            report.violations["product"] += 1
        report.worst["product"] = max(report.worst["product"], lhs / bound)

    for i in range(samples):
        u = unitary_group.rvs(dim, random_state=rng)
        r = 0.3 if i == 0 else float(rng.uniform(0.0, 0.5))
        a = u + _with_norm(_random_matrix(rng, dim), r) if r > 0 else u
        dist = op_norm(a - u)
        ainv = np.linalg.inv(a)
        lhs = op_norm(ainv - u.conj().T)
        if lhs > 2 * dist + 1e-12 or op_norm(ainv) >= 2:
            report.violations["inverse"] += 1
        if dist > 0:
            report.worst["inverse"] = max(report.worst["inverse"], lhs / (2 * dist))

    theta_max = 2 * math.asin(0.25)
    for _ in range(samples):
        ms = []
        for _ in range(2):
            W = unitary_group.rvs(dim, random_state=rng)
            theta = rng.uniform(-theta_max, theta_max, dim) * 0.999
            ms.append((W * np.exp(1j * theta)) @ W.conj().T)
        m1, m2 = ms
        if not (distance_to_identity(m1) < 0.5 and distance_to_identity(m2) < 0.5):
            report.violations["tracelog"] += 1
            continue
        lhs = trace_log(m1 @ m2, max_distance=1.0)
        rhs = trace_log(m1, 0.5) + trace_log(m2, 0.5)
        err = abs(lhs - rhs)
        if err > 1e-9:
            report.violations["tracelog"] += 1
        report.worst["tracelog"] = max(report.worst["tracelog"], err)
    return report
