import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from hyperladder.errors import DomainError
from hyperladder.families import FamilyName, eigenvalue, make_family, standard_families
from hyperladder.hilbert import (
    AlgebraTag,
    BasisVector,
    adjointness_worst,
    annihilate,
    basis_state,
    classify_algebra,
    commutator_checks,
    create,
    creation_chain_deviation,
    gauss_rule,
    inner,
    inner_product,
    norm,
    norm_ladder_worst,
    orthogonality_worst,
    r_op,
    shift_u,
)
from hyperladder.ladder import asf

vectors = st.lists(st.floats(-5, 5), min_size=2, max_size=20).map(np.array)


def test_gauss_examples(legendre, hermite):
    one = gauss_rule(legendre, 1)
    np.testing.assert_allclose(one.nodes, [0.0], atol=1e-15)
    np.testing.assert_allclose(one.weights, [2.0])
    five = gauss_rule(legendre, 5)
    assert five.exact_degree == 9
    assert abs(five.integrate(five.nodes ** 8) - 2 / 9) < 1e-13
    three = gauss_rule(hermite, 3)
    assert abs(three.integrate(np.ones(3)) - math.sqrt(math.pi)) < 1e-12


def _scipy_rule(fam, n):
    if fam.name is FamilyName.JACOBI:
        return special.roots_jacobi(n, float(fam.param("alpha")), float(fam.param("beta")))
    if fam.name is FamilyName.LAGUERRE:
        return special.roots_genlaguerre(n, float(fam.param("alpha")))
    if fam.name is FamilyName.HERMITE:
        return special.roots_hermite(n)
    return None


@pytest.mark.parametrize("fam", [f for f in standard_families() if f.name is not FamilyName.HYPERGEOMETRIC],
                         ids=lambda f: f.label)
def test_gauss_rule_matches_scipy(fam):
    for n in (4, 17, 40):
        x, w = _scipy_rule(fam, n)
        rule = gauss_rule(fam, n)
        np.testing.assert_allclose(rule.nodes, x, rtol=1e-12, atol=1e-13)
        np.testing.assert_allclose(rule.weights, w, rtol=1e-10, atol=1e-300)
        assert np.all(rule.weights > 0)


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_gauss_moments_against_quad(fam):
    rule = gauss_rule(fam, 6)
    a, b = (float(v) for v in fam.interval)
    for k in range(12):
        exact, _ = integrate.quad(lambda s: s ** k * fam.weight(s), a, b, limit=400)
        assert rule.integrate(rule.nodes ** k) == pytest.approx(exact, rel=1e-9, abs=1e-12)


def test_inner_product_examples(legendre):
    assert abs(inner_product(asf(legendre, 1, 0), asf(legendre, 0, 0))) < 1e-13
    assert inner_product(asf(legendre, 2, 1), asf(legendre, 2, 1)) == pytest.approx(12 / 5, rel=1e-14)
    assert abs(inner_product(asf(legendre, 2, 1), asf(legendre, 3, 1))) < 1e-12
    with pytest.raises(DomainError):
        inner_product(asf(legendre, 2, 1), asf(legendre, 2, 0))


def test_inner_product_of_callables(legendre):
    ip = inner_product(lambda s: s, lambda s: s, gauss_rule(legendre, 4))
    assert ip == pytest.approx(2 / 3, rel=1e-14)


def test_norm_examples(legendre):
    assert norm(asf(legendre, 2, 1)) == pytest.approx(math.sqrt(12 / 5), rel=1e-14)
    assert norm(asf(legendre, 2, 0)) == pytest.approx(math.sqrt(2 / 5), rel=1e-14)
    assert norm(asf(legendre, 2, 1)) == pytest.approx(math.sqrt(6) * norm(asf(legendre, 2, 0)), rel=1e-14)
    assert norm(asf(legendre, 0, 0)) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_norm_against_quad():
    fam = make_family("laguerre", alpha="5/2")
    phi = asf(fam, 6, 3)
    sq, _ = integrate.quad(lambda s: float(phi.evaluate(s)) ** 2 * fam.weight(s), 0, math.inf, limit=400)
    assert norm(phi) ** 2 == pytest.approx(sq, rel=1e-8)


def test_annihilate_create_examples(hermite):
    ground = basis_state(hermite, 0, 0, 8)
    assert np.all(annihilate(ground).coeffs == 0)
    up = create(ground)
    assert up.coeffs[1] == pytest.approx(math.sqrt(2))
    assert np.count_nonzero(up.coeffs) == 1


@pytest.mark.parametrize("fam", standard_families()[::3], ids=lambda f: f.label)
@given(u=vectors, v=vectors)
def test_adjointness_in_coefficient_space(fam, u, v):
    size = max(len(u), len(v))
    a = BasisVector(fam, 1, np.pad(u, (0, size + 1 - len(u))).astype(complex))
    b = BasisVector(fam, 1, np.pad(v, (0, size + 1 - len(v))).astype(complex))
    left, right = inner(create(a), b), inner(a, annihilate(b))
    assert abs(left - right) <= 1e-12 * max(1.0, abs(left))


@given(vectors, st.sampled_from(standard_families()))
def test_shift_is_unitary(v, fam):
    vec = BasisVector(fam, 2, v.astype(complex))
    there = shift_u(vec, 1)
    assert there.m == 3
    assert there.norm() == pytest.approx(vec.norm(), rel=1e-15, abs=1e-300)
    back = shift_u(there, -1)
    assert back.m == 2 and np.array_equal(back.coeffs, vec.coeffs)


def test_commutator_examples(hermite, legendre):
    for l in range(10):
        v = basis_state(hermite, 0, l, 16)
        comm = annihilate(create(v)) - create(annihilate(v))
        np.testing.assert_allclose(comm.padded(17), 2 * v.padded(17), atol=1e-12)
        w = basis_state(legendre, 0, l, 16)
        comm = annihilate(create(w)) - create(annihilate(w))
        np.testing.assert_allclose(comm.padded(17), (2 * l + 2) * w.padded(17), atol=1e-12)
        np.testing.assert_allclose(r_op(w).padded(17), (2 * l + 2) * w.padded(17), atol=1e-12)


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_commutator_report(fam):
    for m in range(3):
        rep = commutator_checks(fam, m, 30)
        assert rep.passed, [c for c in rep.checks if not c.passed]
    with pytest.raises(DomainError):
        commutator_checks(fam, 5, 5)


def test_classification():
    assert classify_algebra(make_family("jacobi", alpha=1, beta=2)).tag is AlgebraTag.SU11
    assert classify_algebra(make_family("hypergeometric")).tag is AlgebraTag.SU11
    assert classify_algebra(make_family("hermite")).tag is AlgebraTag.HEISENBERG_WEYL
    assert classify_algebra(make_family("laguerre", alpha=1)).tag is AlgebraTag.HEISENBERG_WEYL
    for fam in standard_families():
        assert classify_algebra(fam).verified


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_function_level_sweeps(fam):
    assert orthogonality_worst(fam, 12, 6) <= 1e-11
    assert norm_ladder_worst(fam, 12) <= 1e-10
    assert adjointness_worst(fam, 8) <= 1e-10
    for m in (0, 2):
        assert creation_chain_deviation(fam, m, m + 6) <= 1e-9


def test_h_minus_lambda_is_a_plus_a(legendre):
    from hyperladder.hilbert import h_op

    m, l = 1, 4
    v = basis_state(legendre, m, l, 8)
    gap = float(eigenvalue(legendre, l) - eigenvalue(legendre, m))
    np.testing.assert_allclose(create(annihilate(v)).padded(9), gap * v.padded(9), atol=1e-12)
    np.testing.assert_allclose(h_op(v).padded(9), float(eigenvalue(legendre, l)) * v.padded(9), atol=1e-12)
