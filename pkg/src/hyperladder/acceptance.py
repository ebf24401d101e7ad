"""The acceptance matrix: each criterion returns a Criterion with a pass flag
and a short machine-readable detail dict."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coherent import coherent_state, eigen_residual, normalization_sq
from .families import eigenvalue, make_family, standard_families
from .hilbert import (
    classify_algebra,
    commutator_checks,
    norm_ladder_worst,
    orthogonality_worst,
)
from .ladder import (
    factorization_check,
    intertwining_check,
    lowering_check,
    raising_check,
    shape_invariance_step,
    three_term_asf_check,
)
from .schrodinger import (
    change_of_variable,
    interior_grid,
    numerov_eigenvalues,
    partner_potential,
    poschl_teller_family,
    poschl_teller_potential,
    poschl_teller_superpotential,
    potential,
    superpotential,
)

PT_PARAMS = (Fraction(1), Fraction(3, 2), Fraction(2))


@dataclass
class Criterion:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name} ({self.seconds:.1f}s) {self.detail}"


def _timed(number: int, name: str, fn) -> Criterion:
    t0 = time.perf_counter()
    passed, detail = fn()
    return Criterion(number, name, bool(passed), detail, time.perf_counter() - t0)


def exact_factorization(l_max: int = 15) -> Criterion:
    def run():
        failures, checked = [], 0
        for fam in standard_families():
            for l in range(l_max + 1):
                reports = [raising_check(fam, l, l)]
                for m in range(l):
                    reports += [
                        factorization_check(fam, l, m),
                        raising_check(fam, l, m),
                        lowering_check(fam, l, m),
                        intertwining_check(fam, l, m),
                    ]
                    if m >= 1:
                        reports.append(three_term_asf_check(fam, l, m))
                for rep in reports:
                    checked += 1
                    if not rep.passed:
                        failures.append(f"{rep.family} l={rep.l} m={rep.m} {rep.identity}")
        return not failures, {"checked": checked, "failures": failures[:5]}

    return _timed(1, "exact factorization suite", run)


def shape_invariance(n_max: int = 40) -> Criterion:
    def run():
        bad = []
        for fam in standard_families():
            for m in range(n_max + 1):
                diff, formula = shape_invariance_step(fam, m)
                if diff != formula:
                    bad.append(f"{fam.label} m={m}")
            total = Fraction(0)
            for l in range(n_max + 1):
                if l > 0:
                    total += shape_invariance_step(fam, l - 1)[1]
                if eigenvalue(fam, l) != total:
                    bad.append(f"{fam.label} sum l={l}")
        return not bad, {"failures": bad[:5]}

    return _timed(2, "shape invariance", run)


def orthogonality_and_norms(l_max: int = 15, m_max: int = 10, ortho_tol: float = 1e-11,
                            norm_tol: float = 1e-10) -> Criterion:
    def run():
        ortho = max(orthogonality_worst(f, l_max, m_max) for f in standard_families())
        ladder = max(norm_ladder_worst(f, l_max, m_max) for f in standard_families())
        return ortho <= ortho_tol and ladder <= norm_tol, {"orthogonality": ortho, "norm_ladder": ladder}

    return _timed(3, "orthogonality and norm ladder", run)


def operator_algebra(l_max: int = 30, tol: float = 1e-12) -> Criterion:
    def run():
        failures = []
        for fam in standard_families():
            for m in range(4):
                rep = commutator_checks(fam, m, l_max, tol)
                failures += [f"{fam.label} m={m} {c.identity}" for c in rep.checks if not c.passed]
            cls = classify_algebra(fam, 0, l_max, tol)
            expected = "su11" if fam.sigma2 < 0 else "heisenberg_weyl"
            if cls.tag.value != expected or not cls.verified:
                failures.append(f"{fam.label} classified {cls.tag.value}")
        return not failures, {"failures": failures[:5]}

    return _timed(4, "operator algebra", run)


def poschl_teller(points: int = 512, tol: float = 1e-10) -> Criterion:
    """V_0 and W_0 against the closed forms.

    The detail also reports the V_0 deviation from the closed form with mu
    and eta exchanged, which is the form consistent with the W_0 formula.
    """

    def run():
        worst_v = worst_w = worst_swapped = 0.0
        failing = []
        for mu in PT_PARAMS:
            for eta in PT_PARAMS:
                fam = poschl_teller_family(mu, eta)
                cov = change_of_variable(fam)
                x = np.linspace(0.0, math.pi, points + 2)[1:-1]
                v = potential(fam, 0, cov, x).values
                dv = float(np.max(np.abs(v - poschl_teller_potential(mu, eta, x))))
                dw = float(np.max(np.abs(superpotential(fam, 0, cov, x) - poschl_teller_superpotential(mu, eta, x))))
                ds = float(np.max(np.abs(v - poschl_teller_potential(eta, mu, x))))
                worst_v, worst_w, worst_swapped = max(worst_v, dv), max(worst_w, dw), max(worst_swapped, ds)
                if dv > tol or dw > tol:
                    failing.append(f"mu={mu} eta={eta}")
        detail = {"V0": worst_v, "W0": worst_w, "V0_mu_eta_exchanged": worst_swapped, "failing": failing}
        return not failing, detail

    return _timed(5, "Poschl-Teller closed forms", run)


def spectral_oracle(tol: float = 1e-5, time_budget: float = 10.0) -> Criterion:
    def run():
        pt = poschl_teller_family(2, 2)
        cov = change_of_variable(pt)
        t0 = time.perf_counter()
        prof = potential(pt, 0, cov, interior_grid(cov, 64))
        levels_pt = numerov_eigenvalues(prof, 3, n_grid=8000, cov=cov)
        elapsed = time.perf_counter() - t0
        err_pt = max(abs(e - t) for e, t in zip(levels_pt, (0.0, 5.0, 12.0)))

        herm = make_family("hermite")
        hcov = change_of_variable(herm)
        hprof = potential(herm, 0, hcov, interior_grid(hcov, 64))
        levels_h = numerov_eigenvalues(hprof, 3, domain_clip=(-12.0, 12.0), n_grid=8000)
        err_h = max(abs(e - t) for e, t in zip(levels_h, (0.0, 2.0, 4.0)))
        passed = err_pt <= tol and err_h <= tol and elapsed < time_budget
        return passed, {"poschl_teller": levels_pt, "pt_err": err_pt, "pt_seconds": round(elapsed, 2),
                        "hermite": levels_h, "hermite_err": err_h}

    return _timed(6, "Numerov spectral oracle", run)


def coherent_states(norm_tol: float = 1e-10, eig_tol: float = 1e-8) -> Criterion:
    def run():
        cases = [(make_family("hermite"), 0)]
        legendre = make_family("jacobi", alpha=0, beta=0)
        cases += [(legendre, 0), (legendre, 1)]
        worst_norm = worst_eig = 0.0
        for fam, m in cases:
            for z in (0, 1, 2 + 1j):
                st = coherent_state(fam, m, z)
                worst_norm = max(worst_norm, abs(normalization_sq(st) - 1.0))
                worst_eig = max(worst_eig, eigen_residual(st))
        n2 = coherent_state(make_family("hermite"), 0, 1).normalization_sq
        closed = abs(n2 - math.exp(0.5))
        passed = worst_norm <= norm_tol and worst_eig <= eig_tol and closed <= norm_tol
        return passed, {"norm": worst_norm, "eigen": worst_eig, "hermite_N2_minus_sqrt_e": closed}

    return _timed(7, "coherent states", run)


def riccati_partners(m_max: int = 3, tol: float = 1e-7, points: int = 512) -> Criterion:
    def run():
        worst, where = 0.0, None
        for fam in standard_families():
            cov = change_of_variable(fam)
            if cov.closed_form is None:
                continue
            x = interior_grid(cov, points)
            for m in range(m_max + 1):
                partner = partner_potential(fam, m, cov, x)
                own = potential(fam, m + 1, cov, x).values
                d = float(np.max(np.abs(partner - own)))
                if d > worst:
                    worst, where = d, f"{fam.label} m={m}"
        return worst <= tol, {"worst": worst, "at": where}

    return _timed(8, "Riccati partner consistency", run)


CRITERIA = (
    exact_factorization,
    shape_invariance,
    orthogonality_and_norms,
    operator_algebra,
    poschl_teller,
    spectral_oracle,
    coherent_states,
    riccati_partners,
)


def run_all(only: list[int] | None = None) -> list[Criterion]:
    out = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        out.append(fn())
    return out


def summary_table(results: list[Criterion]) -> str:
    rows = [f"{'#':>2}  {'criterion':<34} {'status':<6} {'time':>7}"]
    for c in results:
        rows.append(f"{c.number:>2}  {c.name:<34} {'PASS' if c.passed else 'FAIL':<6} {c.seconds:>6.1f}s")
    passed = sum(c.passed for c in results)
    rows.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(rows)
