import math
import time

import numpy as np
import pytest

from hyperladder import schrodinger
from hyperladder.errors import DomainError
from hyperladder.families import FamilyName, eigenvalue, make_family, standard_families
from hyperladder.schrodinger import (
    auto_clip,
    change_of_variable,
    interior_grid,
    numerov_eigenvalues,
    poschl_teller_family,
    potential,
)


def _levels(fam, m, count, clip=None, **kw):
    cov = change_of_variable(fam)
    prof = potential(fam, m, cov, interior_grid(cov, 64))
    return numerov_eigenvalues(prof, count, domain_clip=clip, cov=cov, **kw)


def test_infinite_square_well():
    levels = _levels(poschl_teller_family(1, 1), 0, 3)
    np.testing.assert_allclose(levels, [0, 3, 8], atol=1e-6)


def test_poschl_teller_2_2():
    t0 = time.perf_counter()
    levels = _levels(poschl_teller_family(2, 2), 0, 3, n_grid=8000)
    assert time.perf_counter() - t0 < 10
    np.testing.assert_allclose(levels, [0, 5, 12], atol=1e-6)


def test_harmonic_oscillator(hermite):
    np.testing.assert_allclose(_levels(hermite, 0, 3, clip=(-12.0, 12.0)), [0, 2, 4], atol=1e-6)


def _critical(fam, m):
    # alpha = 0 or beta = 0 at m = 0 puts a -1/(4x^2) wall at a Dirichlet end
    if m > 0 or fam.name is FamilyName.HERMITE:
        return False
    return any(v == 0 for _, v in fam.params)


MATRIX = [(f, m) for f in standard_families() for m in (0, 1) if not _critical(f, m)]


@pytest.mark.parametrize("fam,m", MATRIX, ids=lambda v: getattr(v, "label", str(v)))
def test_oracle_matrix(fam, m):
    clip = (-12.0, 12.0) if fam.name is FamilyName.HERMITE else None
    levels = _levels(fam, m, 4, clip=clip, n_grid=8000)
    expected = [float(eigenvalue(fam, m + k)) for k in range(4)]
    np.testing.assert_allclose(levels, expected, atol=1e-5)


def test_auto_clip_on_half_line():
    fam = make_family("laguerre", alpha=1)
    cov = change_of_variable(fam)
    prof = potential(fam, 0, cov, interior_grid(cov, 16))
    lo, hi = auto_clip(cov, prof.func)
    assert lo == 0.0
    # rho = s exp(-s) with s = x^2/4 falls to exp(-144) where s - log s = 144
    s = hi ** 2 / 4
    assert s - math.log(s) >= 144 > (s - 0.3) - math.log(s - 0.3)


def test_unresolved_levels_are_nan(monkeypatch, hermite):
    monkeypatch.setattr(schrodinger, "_numerov_shoot", lambda v, h, e: (1.0, 0))
    levels = _levels(hermite, 0, 2, clip=(-6.0, 6.0), max_refinements=0)
    assert all(math.isnan(v) for v in levels)


def test_bad_arguments(hermite):
    cov = change_of_variable(hermite)
    prof = potential(hermite, 0, cov, interior_grid(cov, 8))
    with pytest.raises(DomainError):
        numerov_eigenvalues(prof, 0)
    with pytest.raises(DomainError):
        numerov_eigenvalues(prof, 1, domain_clip=(1.0, -1.0))
