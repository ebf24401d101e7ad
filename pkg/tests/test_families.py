import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from hyperladder.errors import DomainError
from hyperladder.families import (
    FamilyName,
    boundary_values,
    classical_polynomial,
    eigenvalue,
    family_from_config,
    make_family,
    ode_residual,
    pearson_holds,
    recurrence_coefficients,
    rodrigues_constant,
    standard_families,
    weight_mass,
)
from hyperladder.polynomial import Polynomial

params = st.fractions(min_value=Fraction(-7, 8), max_value=4, max_denominator=8)
S = np.linspace(-0.9, 0.9, 7)


def test_legendre_row(legendre):
    assert legendre.sigma == Polynomial([1, 0, -1])
    assert legendre.tau == Polynomial([0, -2])
    assert legendre.interval == (-1, 1)


def test_laguerre_row(laguerre0):
    assert laguerre0.sigma == Polynomial([0, 1])
    assert laguerre0.tau == Polynomial([1, -1])
    assert laguerre0.interval[0] == 0 and laguerre0.interval[1] == math.inf


def test_hermite_uses_pearson_consistent_tau(hermite):
    assert hermite.tau == Polynomial([0, -2])
    assert pearson_holds(hermite)
    assert eigenvalue(hermite, 5) == 10


@pytest.mark.parametrize("bad", [-1, -2, "-3/2"])
def test_parameter_out_of_range(bad):
    with pytest.raises(DomainError, match="parameter out of range"):
        make_family("jacobi", alpha=bad, beta=0)


def test_unknown_family_and_parameter():
    with pytest.raises(DomainError):
        make_family("chebyshev")
    with pytest.raises(DomainError):
        make_family("hermite", alpha=1)


def test_eigenvalue_examples(legendre, laguerre0):
    for fam in standard_families():
        assert eigenvalue(fam, 0) == 0
    assert eigenvalue(legendre, 2) == 6
    assert eigenvalue(laguerre0, 5) == 5
    assert ode_residual(legendre, classical_polynomial(legendre, 2), 6).is_zero()
    assert ode_residual(laguerre0, classical_polynomial(laguerre0, 5), 5).is_zero()


def test_polynomial_examples(legendre, laguerre0):
    assert classical_polynomial(legendre, 2) == Polynomial(["-1/2", 0, "3/2"])
    assert classical_polynomial(laguerre0, 1) == Polynomial([1, -1])
    for fam in standard_families():
        assert classical_polynomial(fam, 0) == Polynomial.constant(rodrigues_constant(fam, 0))


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_ode_degree_and_recurrence(fam):
    for l in range(21):
        phi = classical_polynomial(fam, l)
        assert phi.degree == l
        assert ode_residual(fam, phi, eigenvalue(fam, l)).is_zero()
    s = Polynomial.x()
    for l in range(1, 20):
        a, b, c = recurrence_coefficients(fam, l)
        res = s * classical_polynomial(fam, l) - classical_polynomial(fam, l + 1) * a \
            - classical_polynomial(fam, l) * b - classical_polynomial(fam, l - 1) * c
        assert res.is_zero()
    lams = [eigenvalue(fam, l) for l in range(41)]
    assert all(x < y for x, y in zip(lams, lams[1:]))
    assert pearson_holds(fam)


def test_recurrence_examples(legendre, hermite):
    assert recurrence_coefficients(legendre, 2) == (Fraction(3, 5), 0, Fraction(2, 5))
    assert recurrence_coefficients(hermite, 1) == (Fraction(1, 2), 0, 1)
    assert recurrence_coefficients(legendre, 1)[1] == 0


def _scipy_values(fam, l, s):
    a = float(fam.param("alpha")) if fam.name is not FamilyName.HERMITE else 0.0
    if fam.name is FamilyName.JACOBI:
        return special.eval_jacobi(l, a, float(fam.param("beta")), s)
    if fam.name is FamilyName.HYPERGEOMETRIC:
        return special.eval_jacobi(l, a, float(fam.param("beta")), 1 - 2 * s)
    if fam.name is FamilyName.LAGUERRE:
        return special.eval_genlaguerre(l, a, s)
    return special.eval_hermite(l, s)


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_conventional_normalization_matches_scipy(fam):
    s = np.linspace(0.05, 0.95, 7) if fam.name in (FamilyName.HYPERGEOMETRIC, FamilyName.LAGUERRE) else S
    for l in range(9):
        np.testing.assert_allclose(classical_polynomial(fam, l).evaluate_float(s), _scipy_values(fam, l, s),
                                   rtol=1e-11, atol=1e-11)


def test_monic_toggle():
    fam = make_family("laguerre", alpha=1, normalization="monic")
    for l in range(6):
        assert classical_polynomial(fam, l).leading == 1


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_weight_mass_against_quad(fam):
    a, b = (float(v) for v in fam.interval)
    mass, _ = integrate.quad(lambda s: fam.weight(s), a, b, limit=200)
    assert weight_mass(fam) == pytest.approx(mass, rel=1e-7)


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_boundary_term_vanishes(fam):
    lo, hi = boundary_values(fam, 3, 1e-6)
    assert abs(lo) < 1e-5 and abs(hi) < 1e-5


def test_config_roundtrip():
    fam = family_from_config('{"family": "jacobi", "alpha": "1/2", "beta": "3/2"}')
    assert fam.param("beta") == Fraction(3, 2)
    assert family_from_config(json.dumps(fam.to_config())) == fam


@given(params, params)
def test_random_jacobi_parameters(a, b):
    fam = make_family("jacobi", alpha=a, beta=b)
    assert pearson_holds(fam)
    for l in range(7):
        assert ode_residual(fam, classical_polynomial(fam, l), eigenvalue(fam, l)).is_zero()


@given(params)
def test_random_laguerre_parameters(a):
    fam = make_family("laguerre", alpha=a)
    s = Polynomial.x()
    for l in range(1, 6):
        x, y, z = recurrence_coefficients(fam, l)
        phis = [classical_polynomial(fam, k) for k in (l - 1, l, l + 1)]
        assert (s * phis[1] - phis[2] * x - phis[1] * y - phis[0] * z).is_zero()
