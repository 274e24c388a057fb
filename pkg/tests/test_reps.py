import cmath
import math
from dataclasses import replace

import numpy as np
import pytest

from asymrep.errors import InadmissibleN, NotAlmostMultiplicative, ReductionInvalid, WellDefinednessFailure
from asymrep.groups import box_array, box_elements, enumerate_elements
from asymrep.homology import Chain, Cochain1, Cochain2, hopf_cycle, pair
from asymrep.numerics import is_unitary, op_norm
from asymrep.reps import (
    BuiltRep,
    CharacterRep,
    PerturbedRep,
    build_reduced_rep,
    build_rep,
    commutator_cycle,
    defect_box,
    defect_rows,
    defect_table,
    enumerate_basis,
    make_spec,
    multiplicativity_defect,
    obstruction_certificate,
    predicted_pairing,
    rep_pairing,
    scalar_defect,
    spec_catmap,
)

Z2S, NILS, CATS = make_spec("z2"), make_spec("nilpotent5"), make_spec("catmap")


def brute_force_matrix(spec, n, g):
    """rho_n(g) built straight from the definition, one quotient element at a time."""
    Q, q = spec.quotient_builder(n)
    elems = enumerate_elements(Q)
    pos = {h: i for i, h in enumerate(elems)}
    M = np.zeros((len(elems), len(elems)), dtype=complex)
    for h in elems:
        lift = spec.group.element(h.exponents)
        v = spec.sigma(g, lift)
        M[pos[q(g * lift)], pos[h]] = cmath.exp(2j * math.pi * float(v % n) / n)
    return M


@pytest.mark.parametrize("spec,n", [(Z2S, 3), (Z2S, 4), (CATS, 3), (NILS, 5)])
def test_matches_brute_force(spec, n):
    rep = build_rep(spec, n)
    rng = np.random.default_rng(n)
    for _ in range(3):
        g = spec.group.element(tuple(int(v) for v in rng.integers(-3, 4, spec.group.rank)))
        assert np.allclose(rep(g), brute_force_matrix(spec, n, g))


def test_dimensions():
    assert build_rep(Z2S, 5).dim == 25
    assert build_rep(CATS, 3).dim == 36
    assert build_rep(NILS, 5).dim == 5 ** 5
    assert build_reduced_rep(Z2S, 8, (1,)).dim == 8
    assert build_reduced_rep(CATS, 7, (1, 2)).dim == 49
    assert build_reduced_rep(NILS, 7, (1,)).dim == 7


@pytest.mark.parametrize("spec,n", [(Z2S, 6), (CATS, 5), (NILS, 5)])
def test_unitary_monomial(spec, n):
    rep = build_rep(spec, n)
    for g in box_elements(spec.group, 1)[:30]:
        M = rep.monomial(g)
        assert is_unitary(M)
        assert sorted(M.perm.tolist()) == list(range(rep.dim))
    assert np.allclose(rep(spec.group.identity()), np.eye(rep.dim))


@pytest.mark.parametrize("spec,n", [(Z2S, 5), (CATS, 3), (NILS, 5)])
def test_chi_identity(spec, n):
    rep = build_rep(spec, n)
    rng = np.random.default_rng(0)
    for _ in range(10):
        g, h = (spec.group.element(tuple(int(v) for v in rng.integers(-3, 4, spec.group.rank)))
                for _ in range(2))
        chi = scalar_defect(spec, n, g, h)
        if rep.dim > 300:
            A, B, AB = rep.monomial(g), rep.monomial(h), rep.monomial(g * h)
            assert (A @ B).distance(AB.scale(chi)) < 1e-9
            assert (A @ B @ AB.adjoint()).distance_to_scalar(chi) < 1e-9
            assert (AB @ B.adjoint() @ A.adjoint()).distance_to_scalar(np.conj(chi)) < 1e-9
            continue
        A, B, AB = rep(g), rep(h), rep(g * h)
        assert np.allclose(A @ B, chi * AB)
        assert np.allclose(A @ B @ AB.conj().T, chi * np.eye(rep.dim))
        assert np.allclose(AB @ B.conj().T @ A.conj().T, np.conj(chi) * np.eye(rep.dim))
        assert multiplicativity_defect(rep, g, h) == pytest.approx(abs(chi - 1))


def test_scalar_defect_examples():
    a, b = Z2S.group.generators()
    assert scalar_defect(Z2S, 4, b, a) == pytest.approx(1j)
    assert scalar_defect(Z2S, 4, a, b) == pytest.approx(1)
    with pytest.raises(InadmissibleN):
        scalar_defect(NILS, 9, a, b)


def test_inadmissible_n():
    for spec, n in [(NILS, 4), (NILS, 9), (CATS, 4), (CATS, 1), (Z2S, 1)]:
        with pytest.raises(InadmissibleN):
            build_rep(spec, n)
    with pytest.raises(InadmissibleN, match="coprime to 6 required"):
        BuiltRep(NILS, 3)


def test_well_definedness_failure():
    bad = replace(Z2S, sigma=Cochain2(lambda x, y: x[1] * abs(y[0]), "abs"))
    with pytest.raises(WellDefinednessFailure):
        build_rep(bad, 5)


def test_reduction_invalid():
    with pytest.raises(ReductionInvalid):
        build_reduced_rep(Z2S, 5, (2,))
    with pytest.raises(ReductionInvalid):
        BuiltRep(Z2S, 5, (0,))
    with pytest.raises(ReductionInvalid):
        BuiltRep(Z2S, 5, (3,))


@pytest.mark.parametrize("spec,n", [(Z2S, 5), (CATS, 3)])
def test_retaining_everything_is_the_full_rep(spec, n):
    full = build_rep(spec, n)
    same = BuiltRep(spec, n, tuple(range(1, spec.group.rank + 1)))
    assert not same.reduced and same.dim == full.dim
    for g in box_elements(spec.group, 1)[:20]:
        assert np.array_equal(full(g), same(g))
    assert [g.exponents for g in enumerate_basis(full)] == [tuple(r) for r in full.lifts]


def test_monomial_rows_agree_with_single_evaluation():
    rep = build_reduced_rep(CATS, 7, (1, 2))
    X = box_array(3, 1)
    perms, phases = rep.monomial_rows(X)
    for x, p, f in zip(X, perms, phases):
        M = rep.monomial(tuple(int(v) for v in x))
        assert np.array_equal(M.perm, p) and np.allclose(M.phases, f)


@pytest.mark.parametrize("spec,n,retained", [(Z2S, 7, None), (CATS, 3, None), (NILS, 7, (1,))])
def test_defect_law(spec, n, retained):
    rep = BuiltRep(spec, n, retained)
    B = box_array(spec.group.rank, 1)
    worst, top = defect_box(rep, B)
    assert worst < 1e-12
    assert top <= 2 * math.sin(math.pi * (n // 2) / n) + 1e-12
    half = len(B) // 2
    d, p = defect_rows(rep, B[:half], B[half:2 * half])
    assert np.allclose(d, p)
    rows = defect_table(rep, box_elements(spec.group, 1)[:6])
    assert all(abs(r[2] - r[3]) < 1e-12 for r in rows)


def test_z2_pairing_full_and_reduced():
    a, b = Z2S.group.generators()
    c = commutator_cycle(a, b)
    assert pair(Z2S.sigma, c) == 1
    full = rep_pairing(build_rep(Z2S, 8), c)
    assert full.rounded == 8 and full.certificate and full.is_cycle
    red = obstruction_certificate(build_reduced_rep(Z2S, 8, (1,)), c)
    assert red.rounded == 1 and red.certificate
    assert red.epsilon == pytest.approx(2 * math.sin(math.pi / 8))
    assert predicted_pairing(Z2S, c, 8, (1,)) == 1
    assert predicted_pairing(Z2S, c, 8) == 8


def test_verbatim_convention_flips_sign():
    a, b = Z2S.group.generators()
    c = commutator_cycle(a, b)
    rep = build_reduced_rep(Z2S, 8, (1,))
    assert rep_pairing(rep, c, convention="verbatim").rounded == -rep_pairing(rep, c).rounded
    with pytest.raises(ValueError):
        rep_pairing(rep, c, convention="other")


def test_strict_and_lenient():
    a, b = Z2S.group.generators()
    c = commutator_cycle(a, b)
    rep = build_reduced_rep(Z2S, 4, (1,))
    # at n = 4 the commutator sits at distance sqrt(2) from I
    with pytest.raises(NotAlmostMultiplicative):
        rep_pairing(rep, c)
    rpt = rep_pairing(rep, c, strict=False)
    assert rpt.rounded == 1 and rpt.epsilon == pytest.approx(math.sqrt(2))
    assert not rpt.certificate and not rpt.strict
    with pytest.raises(NotAlmostMultiplicative):
        rep_pairing(build_reduced_rep(Z2S, 2, (1,)), c, strict=False)


def test_catmap_small_n():
    a1, a2, _ = CATS.group.generators()
    c = commutator_cycle(a1, a2)
    rep = build_reduced_rep(CATS, 3, (1, 2))
    rpt = rep_pairing(rep, commutator_cycle(*CATS.group.generators()[:2]), strict=False)
    assert rpt.rounded == int(predicted_pairing(CATS, c, 3, (1, 2)))
    with pytest.raises(NotAlmostMultiplicative):
        rep_pairing(build_rep(CATS, 3), c)
    lenient = rep_pairing(build_rep(CATS, 3), c, strict=False)
    assert lenient.rounded == predicted_pairing(CATS, c, 3) == 3 * pair(CATS.sigma, c) * 4
    assert not lenient.certificate


def test_catmap_larger_period():
    double = spec_catmap(lambda n: 2 * 8)
    a1, a2, _ = double.group.generators()
    c = commutator_cycle(a1, a2)
    rep = build_rep(double, 7)
    assert rep.dim == 49 * 16
    assert rep_pairing(rep, c).rounded == predicted_pairing(double, c, 7)


def test_nilpotent5_pairing():
    a1, _, _, a4, _ = NILS.group.generators()
    c = commutator_cycle(a4, a1)
    for n in (5, 7):
        rpt = rep_pairing(build_reduced_rep(NILS, n, (1,)), c, strict=n >= 7)
        assert rpt.rounded == predicted_pairing(NILS, c, n, (1,)) != 0
    assert rep_pairing(build_reduced_rep(NILS, 7, (1,)), hopf_cycle([(a4, a1)])).rounded == \
        predicted_pairing(NILS, hopf_cycle([(a4, a1)]), 7, (1,))


def test_empty_chain():
    rep = build_reduced_rep(Z2S, 8, (1,))
    rpt = rep_pairing(rep, Chain(2))
    assert rpt.rounded == 0 and not rpt.certificate and rpt.is_cycle
    assert predicted_pairing(Z2S, Chain(2), 8) == 0


def test_non_cycle_is_not_certified():
    a, b = Z2S.group.generators()
    rpt = rep_pairing(build_rep(Z2S, 8), Chain.cell(b, a))
    assert not rpt.is_cycle and not rpt.certificate


def test_twisted_spec_has_the_same_pairing():
    # alpha(g) = g_1 and sigma + n x1 y1 change rho by a coboundary and a
    # multiple of n, neither of which is visible to the pairing
    twisted = replace(
        Z2S,
        alpha_n=lambda n: Cochain1(lambda x: x[0], "g1"),
        sigma_n=lambda n: Cochain2(lambda x, y: x[1] * y[0] + n * x[0] * y[0], "shifted"),
    )
    a, b = Z2S.group.generators()
    c = commutator_cycle(a, b)
    r0, r1 = build_rep(Z2S, 8), build_rep(twisted, 8)
    assert not np.allclose(r0(a), r1(a))
    assert rep_pairing(r1, c).rounded == rep_pairing(r0, c).rounded == 8


def test_dense_and_monomial_paths_agree():
    rep = build_reduced_rep(CATS, 7, (1, 2))
    c = commutator_cycle(*CATS.group.generators()[:2])
    fast = rep_pairing(rep, c)
    slow = rep_pairing(lambda g: rep(g), c, n=7)
    assert fast.rounded == slow.rounded and abs(fast.raw - slow.raw) < 1e-9
    assert slow.dim == rep.dim


def test_genuine_reps_give_zero():
    a, b = Z2S.group.generators()
    c = commutator_cycle(a, b)
    base = CharacterRep.random(6, seed=11)
    assert np.allclose(base(a) @ base(b), base(a * b))
    rpt = rep_pairing(base, c)
    assert rpt.rounded == 0 and not rpt.certificate
    noisy = PerturbedRep(base, 0.05, seed=2)
    assert op_norm(noisy.noise(a)) < 0.05
    assert rep_pairing(noisy, c).rounded == 0


def test_report_json():
    a, b = Z2S.group.generators()
    data = rep_pairing(build_reduced_rep(Z2S, 8, (1,)), commutator_cycle(a, b)).to_json()
    assert set(data) == {"n", "dim", "raw", "rounded", "residual", "epsilon", "certificate",
                         "boundary_support", "is_cycle", "strict", "convention", "bound"}
    assert data["bound"] == "1/24" and data["convention"] == "chi"
    assert data["boundary_support"] == [[0, 1], [1, 0], [1, 1]]
