import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperladder.errors import DomainError
from hyperladder.families import classical_polynomial, eigenvalue, make_family, standard_families
from hyperladder.ladder import (
    apply_hm,
    asf,
    factorization_check,
    hm_check,
    intertwining_check,
    ladder_product,
    lower,
    lowering_check,
    r_eigenvalue,
    raise_,
    raise_value,
    raising_check,
    shape_invariance_step,
    sweep,
    three_term_asf_check,
)
from hyperladder.polynomial import Polynomial


def test_asf_examples(legendre):
    assert asf(legendre, 2, 1).part == Polynomial([0, 3])
    assert asf(legendre, 0, 0).part == Polynomial([1])
    for fam in standard_families():
        top = asf(fam, 4, 4).part
        assert top.degree == 0
        assert top.coeff(0) == 24 * classical_polynomial(fam, 4).leading
    with pytest.raises(DomainError):
        asf(legendre, 1, 2)


def test_raise_examples(legendre):
    up = raise_(asf(legendre, 2, 0))
    assert (up.m, up.part) == (1, Polynomial([0, 3]))
    top = raise_(up)
    assert (top.m, top.part) == (2, Polynomial([3]))
    with pytest.raises(DomainError):
        raise_(top)
    assert raise_value(top).is_zero()


def test_lower_examples(legendre):
    down = lower(asf(legendre, 2, 2))
    assert down.m == 1 and down.part == Polynomial([0, 12])
    assert down.part == asf(legendre, 2, 1).part * (eigenvalue(legendre, 2) - eigenvalue(legendre, 1))
    phi10 = asf(legendre, 1, 0)
    assert lower(raise_(phi10)).part == phi10.part * 2
    with pytest.raises(DomainError):
        lower(phi10)


def test_apply_hm_examples(legendre, hermite):
    assert apply_hm(asf(legendre, 2, 1)).part == Polynomial([0, 12])
    for fam in standard_families():
        assert apply_hm(asf(fam, 3, 3)).part.is_zero()
    assert apply_hm(asf(hermite, 3, 0)).part == classical_polynomial(hermite, 3) * 6


def test_three_term_examples(legendre, laguerre0):
    assert three_term_asf_check(legendre, 2, 1).passed
    assert three_term_asf_check(laguerre0, 3, 2).passed
    with pytest.raises(DomainError):
        three_term_asf_check(legendre, 1, 1)


def test_factorization_examples(legendre, hermite):
    rep = factorization_check(legendre, 3, 1)
    assert rep.passed and rep.details["r_next"] == "4"
    for m in range(10):
        assert shape_invariance_step(hermite, m) == (2, 2)
    for fam in standard_families():
        assert factorization_check(fam, 5, 4).passed


def test_ladder_product_examples(legendre):
    assert ladder_product(legendre, 2, 0).part == Polynomial(["-1/2", 0, "3/2"])
    lag = make_family("laguerre", alpha=1)
    assert ladder_product(lag, 4, 2).part == asf(lag, 4, 2).part
    for fam in standard_families():
        single = lower(asf(fam, 5, 5)).part / (eigenvalue(fam, 5) - eigenvalue(fam, 4))
        assert ladder_product(fam, 5, 4).part == single


def test_report_json():
    rep = raising_check(make_family("hermite"), 3, 1)
    data = json.loads(rep.to_json())
    assert data == {"identity": "raising", "family": "hermite()", "l": 3, "m": 1, "status": "pass", "residual": "0"}


def test_failing_identity_is_reported():
    # a deliberately wrong gap must fail, so the sweep is not vacuous
    fam = make_family("jacobi", alpha=0, beta=0)
    phi = asf(fam, 3, 1)
    wrong = lower(raise_(phi)).part - phi.part * (eigenvalue(fam, 3) - eigenvalue(fam, 1) + 1)
    assert not wrong.is_zero()


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_exact_sweep(fam):
    failures = [r for r in sweep(fam, 12) if not r.passed]
    assert not failures, failures[0].to_json()


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_shape_invariance_to_forty(fam):
    total = Fraction(0)
    for m in range(41):
        diff, formula = shape_invariance_step(fam, m)
        assert diff == formula
    for l in range(1, 41):
        total += shape_invariance_step(fam, l - 1)[1]
        assert eigenvalue(fam, l) == total


@pytest.mark.parametrize("fam", standard_families(), ids=lambda f: f.label)
def test_r_is_independent_of_m(fam):
    for l in range(8):
        for m in range(l):
            assert intertwining_check(fam, l, m).passed
        assert r_eigenvalue(fam, l) == -fam.sigma2 * l - fam.tau1


@given(st.integers(0, 18).flatmap(lambda l: st.tuples(st.just(l), st.integers(0, l))),
       st.sampled_from(standard_families()))
def test_round_trip_property(lm, fam):
    l, m = lm
    assert hm_check(fam, l, m).passed
    if m < l:
        assert lowering_check(fam, l, m).passed
        assert factorization_check(fam, l, m).passed
