"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import cmath
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from asymrep.cocycles import sigma_catmap, sigma_nilpotent5, sigma_z2
from asymrep.exact import CAT_MAP, IntMatrix, matrix_order_mod, s_k
from asymrep.errors import BadPeriod
from asymrep.groups import box_array, box_elements, finite_quotient, make_catmap, make_nilpotent5, make_z2
from asymrep.homology import boundary2, boundary3, hopf_cycle, is_cocycle, pair, random_chain3
from asymrep.induced import compare_with_formula, heisenberg_mod, induce_character, max_multiplicativity_error
from asymrep.numerics import lemma_anal_harness
from asymrep.reps import (
    DEFAULT_RETAINED,
    CharacterRep,
    PerturbedRep,
    build_reduced_rep,
    build_rep,
    commutator_cycle,
    defect_box,
    predicted_pairing,
    rep_pairing,
    spec_catmap,
    spec_nilpotent5,
    spec_z2,
)


def test_criterion_01_voiculescu_commutator(record):
    t0 = time.perf_counter()
    spec = spec_z2()
    a, b = spec.group.generators()
    worst = 0.0
    for n in range(2, 65):
        rep = build_reduced_rep(spec, n, (1,))
        U, V = rep(a), rep(b)
        C = U @ V @ np.linalg.inv(U) @ np.linalg.inv(V)
        worst = max(worst, float(np.abs(C - cmath.exp(-2j * math.pi / n) * np.eye(n)).max()))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 5
    record(1, "u v u^-1 v^-1 = exp(-2 pi i/n) I, n=2..64", ok,
           f"max entry error {worst:.2e}, sign -, {elapsed:.2f}s")
    assert worst < 1e-10
    assert elapsed < 5


def _pairing_cases():
    z2, cat, nil = spec_z2(), spec_catmap(), spec_nilpotent5()
    za, zb = z2.group.generators()
    c1, c2, _ = cat.group.generators()
    n1, _, _, n4, _ = nil.group.generators()
    cycles = {
        "z2": [commutator_cycle(za, zb), hopf_cycle([(za, zb)])],
        "catmap": [commutator_cycle(c1, c2), hopf_cycle([(c1, c2)])],
        "nilpotent5": [commutator_cycle(n1, n4), hopf_cycle([(n4, n1)])],
    }
    out = []
    for spec, ns in ((z2, (3, 5, 7, 11)), (cat, (3, 5, 7, 11)), (nil, (5, 7, 11))):
        for n in ns:
            for ret in (None, DEFAULT_RETAINED[spec.name]):
                if spec.name == "nilpotent5" and ret is None and n > 7:
                    continue
                out += [(spec, n, ret, c) for c in cycles[spec.name]]
    return out


def test_criterion_02_pairing_formula(record):
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for spec, n, ret, c in _pairing_cases():
        rep = build_rep(spec, n) if ret is None else build_reduced_rep(spec, n, ret)
        # below n = 7 the commutators sit farther than 1 from I; evaluate on
        # the principal branch there
        rep_r = rep_pairing(rep, c, strict=n >= 7)
        pred = predicted_pairing(spec, c, n, ret)
        checked += 1
        if not (abs(rep_r.raw - float(pred)) < 1e-6 and pred.denominator == 1
                and rep_r.rounded == pred != 0):
            failures.append((spec.name, n, ret, rep_r.raw, pred))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    record(2, "rep pairing = <sigma,c> dim/n, nonzero integer", ok,
           f"{checked} cases, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 60


def test_criterion_03_cocycle_verification(record):
    t0 = time.perf_counter()
    results = {}
    results["z2 [-3,3]"] = is_cocycle(sigma_z2(), make_z2(), 3)
    # d(sigma_nilpotent5) only reads coordinates 2-4 of g1, 1-4 of g2 and 1 of g3
    # (see test_nilpotent5_coboundary_reads); the box over those is exhaustive
    full, zero = (-3, 3), (0, 0)
    reads = ((zero, full, full, full, zero), (full, full, full, full, zero),
             (full, zero, zero, zero, zero))
    results["nilpotent5 [-3,3] on read coords"] = is_cocycle(sigma_nilpotent5(), make_nilpotent5(),
                                                             boxes=reads)
    results["nilpotent5 [-1,1]^5 all coords"] = is_cocycle(sigma_nilpotent5(), make_nilpotent5(), 1)
    results["catmap v,k in [-2,2]"] = is_cocycle(sigma_catmap(), make_catmap(), 2)
    elapsed = time.perf_counter() - t0
    bad = {k: v.violations for k, v in results.items() if not v.result}
    ok = not bad and elapsed < 120
    record(3, "d sigma = 0 exhaustively", ok,
           ", ".join(f"{k}: {v.checked} triples" for k, v in results.items()) + f", {elapsed:.1f}s")
    assert not bad
    assert elapsed < 120


def test_criterion_04_hopf_cycle(record):
    G = make_z2()
    a, b = G.generators()
    c = hopf_cycle([(a, b)])
    value = pair(sigma_z2(), c)
    ok = boundary2(c).is_zero() and abs(value) == 1
    record(4, "hopf cycle is a cycle, |<sigma_z2, c>| = 1", ok, f"<sigma_z2, c> = {value}")
    assert boundary2(c).is_zero()
    assert abs(value) == 1


def test_criterion_05_defect_law(record):
    worst = 0.0
    cases = [(spec_z2(), None, (3, 5, 7)), (spec_catmap(), None, (3, 5, 7)),
             (spec_nilpotent5(), (1,), (5, 7))]
    for spec, ret, ns in cases:
        B = box_array(spec.group.rank, 2)
        for n in ns:
            rep = build_rep(spec, n) if ret is None else build_reduced_rep(spec, n, ret)
            err, _ = defect_box(rep, B)
            worst = max(worst, err)
    # O(1/n): the max defect over the box halves when n doubles
    spec = spec_z2()
    B = box_array(2, 2)
    tops = [defect_box(build_reduced_rep(spec, n, (1,)), B)[1] for n in (32, 64, 128)]
    ratios = [tops[i] / tops[i + 1] for i in range(len(tops) - 1)]
    ratio_ok = all(abs(r - 2) < 0.1 for r in ratios)
    ok = worst < 1e-10 and ratio_ok
    record(5, "defect = |chi - 1| on [-2,2]; max defect O(1/n)", ok,
           f"max error {worst:.2e}, ratios {', '.join(f'{r:.4f}' for r in ratios)} (n=32,64,128)")
    assert worst < 1e-10
    assert ratio_ok


def test_criterion_06_genuine_null(record):
    G = make_z2()
    a, b = G.generators()
    cycles = [commutator_cycle(a, b), hopf_cycle([(a, b)])]
    rho0 = CharacterRep.random(6, 2, seed=11)
    base = [rep_pairing(rho0, c).rounded for c in cycles]
    bad = 0
    for trial in range(100):
        rho1 = PerturbedRep(rho0, 1 / 48, seed=trial)
        for c in cycles:
            for g in c.boundary_support():
                assert np.linalg.norm(rho1.noise(g), 2) < 1 / 48
            r = rep_pairing(rho1, c)
            if r.rounded != 0 or r.certificate:
                bad += 1
    ok = base == [0, 0] and bad == 0
    record(6, "genuine rep and 1/48-perturbations pair to 0", ok,
           f"unperturbed {base}, {bad} nonzero of 200 perturbed pairings")
    assert base == [0, 0]
    assert bad == 0


def test_criterion_07_boundaries_pair_to_zero(record):
    spec = spec_z2()
    G = spec.group
    rng = np.random.default_rng(7)
    reps = {n: build_reduced_rep(spec, n, (1,)) for n in (64, 512)}
    nonzero = 0
    eps = {n: 0.0 for n in reps}
    for _ in range(100):
        c = boundary3(random_chain3(G, rng, radius=2))
        for n, rep in reps.items():
            r = rep_pairing(rep, c)
            eps[n] = max(eps[n], r.epsilon)
            if r.rounded != 0 or r.residual > 1e-6:
                nonzero += 1
    ok = nonzero == 0
    record(7, "<rho, d3 d> = 0 for 100 random 3-chains", ok,
           f"n=64: eps {eps[64]:.3f}; n=512: eps {eps[512]:.4f} (<1/8); {nonzero} nonzero")
    assert nonzero == 0


def test_criterion_08_induced_equivalence(record):
    spec = spec_z2()
    devs, mults = [], []
    for n in (3, 4, 5):
        ext = heisenberg_mod(n)
        ext.validate()
        devs.append(compare_with_formula(ext, spec, n))
        mults.append(max_multiplicativity_error(induce_character(ext)))
    ok = max(devs) < 1e-10 and max(mults) < 1e-10
    record(8, "induced rep = explicit formula; induced rep multiplicative", ok,
           f"deviation {max(devs):.1e}, multiplicativity {max(mults):.1e}")
    assert max(devs) < 1e-10
    assert max(mults) < 1e-10


def _nil5_closed_forms(n):
    w = lambda t: cmath.exp(2j * math.pi * t / n)
    mats = [np.zeros((n, n), complex) for _ in range(5)]
    for j in range(n):
        mats[0][(j + 1) % n, j] = 1
        mats[1][j, j] = w(2 * math.comb(j, 3))
        mats[2][j, j] = w(2 * math.comb(j, 2))
        mats[3][j, j] = w(j)
        mats[4][j, j] = 1
    return mats


def _cat_closed_forms(n):
    w = lambda t: cmath.exp(2j * math.pi * t / n)
    d = n * n
    mats = [np.zeros((d, d), complex) for _ in range(3)]
    idx = lambda j, k: (j % n) * n + (k % n)
    for j in range(n):
        for k in range(n):
            mats[0][idx(j + 1, k), idx(j, k)] = 1
            mats[1][idx(j, k + 1), idx(j, k)] = w(j)
            mats[2][idx(2 * j + k, j + k), idx(j, k)] = w(Fraction(2 * j * k + 2 * j * j + k * k - 2 * j - k, 2))
    return mats


def test_criterion_09_generator_fidelity(record):
    worst = 0.0
    nil = spec_nilpotent5()
    for n in (5, 7):
        rep = build_reduced_rep(nil, n, (1,))
        for g, M in zip(nil.group.generators(), _nil5_closed_forms(n)):
            worst = max(worst, float(np.abs(rep(g) - M).max()))
    cat = spec_catmap()
    for n in (3, 5):
        rep = build_reduced_rep(cat, n, (1, 2))
        for g, M in zip(cat.group.generators(), _cat_closed_forms(n)):
            worst = max(worst, float(np.abs(rep(g) - M).max()))
    ok = worst < 1e-12
    record(9, "generator matrices match the closed forms", ok, f"max entry error {worst:.1e}")
    assert worst < 1e-12


def test_criterion_10_sk_identities_and_period(record):
    TT = CAT_MAP.kron(CAT_MAP)
    one = IntMatrix.identity(4)
    problems = []
    for k1 in range(-5, 6):
        if (TT - one) @ s_k(CAT_MAP, k1) != TT ** k1 - one:
            problems.append(("telescoping", k1))
        for k2 in range(-5, 6):
            if s_k(CAT_MAP, k1 + k2) != s_k(CAT_MAP, k1) + (TT ** k1) @ s_k(CAT_MAP, k2):
                problems.append(("additivity", k1, k2))
    G = make_catmap()
    sigma = sigma_catmap()
    for n in (3, 5, 7):
        m = matrix_order_mod(CAT_MAP, n)
        # brute-force order with plain integer lists
        P, brute = [[1, 0], [0, 1]], None
        for e in range(1, 10 * n * n):
            P = [[(P[0][0] * 2 + P[0][1]) % n, (P[0][0] + P[0][1]) % n],
                 [(P[1][0] * 2 + P[1][1]) % n, (P[1][0] + P[1][1]) % n]]
            if P == [[1, 0], [0, 1]]:
                brute = e
                break
        if brute != m:
            problems.append(("order", n, m, brute))
        Q, q = finite_quotient(G, n, m)
        Q2, _ = finite_quotient(G, n, 2 * m)
        if Q.order() != n * n * m or Q2.order() != 2 * n * n * m:
            problems.append(("size", n))
        if m > 1:
            with pytest.raises(BadPeriod):
                finite_quotient(G, n, m + 1)
        for g in box_elements(G, 1):
            for h in box_elements(G, 1):
                if q(g * h) != q(g) * q(h):
                    problems.append(("hom", n, g, h))
                # sigma mod n only sees k1 mod m
                shifted = G.element(g[0], g[1], g[2] + m)
                if (sigma(shifted, h) - sigma(g, h)) % n != 0:
                    problems.append(("period", n, g, h))
    ok = not problems
    record(10, "S_k identities, order of T mod n and the catmap quotient", ok,
           f"{len(problems)} problems")
    assert not problems, problems[:5]


def test_criterion_11_lemma_harnesses(record):
    rep = lemma_anal_harness(seed=2024, samples=1000)
    ok = rep.ok and rep.samples == 1000
    record(11, "analytic lemma harnesses, 1000 samples each", ok,
           ", ".join(f"{k}: {v} violations" for k, v in sorted(rep.violations.items())))
    assert rep.ok
