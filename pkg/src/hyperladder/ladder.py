"""Associated special functions and the exact raising/lowering algebra.

An ASF ``Phi_{l,m} = kappa^m * Phi_l^(m)`` with ``kappa = sqrt(sigma)`` is
stored as the pair ``(m, P)`` with ``P = Phi_l^(m)`` plus an exact scale.
The operators never touch ``kappa`` itself: on the pair they reduce to
polynomial maps, using ``kappa**2 = sigma`` and ``kappa*kappa' = sigma'/2``.

    A_m   (m, P) -> (m+1, P')
    A_m^+ (m+1, Q) -> (m, -sigma Q' - tau Q - m sigma' Q)
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Union

from .errors import DomainError
from .families import FamilySpec, classical_polynomial, eigenvalue
from .polynomial import Polynomial

Scalar = Union[Fraction, float]


@dataclass(frozen=True)
class ASF:
    family: FamilySpec
    l: int
    m: int
    part: Polynomial
    scale: Scalar = Fraction(1)

    def __post_init__(self):
        if not 0 <= self.m <= self.l:
            raise DomainError(f"need 0 <= m <= l, got l={self.l}, m={self.m}")
        if not self.part.is_zero() and self.part.degree != self.l - self.m:
            raise DomainError(f"part has degree {self.part.degree}, expected l-m = {self.l - self.m}")

    def polynomial(self) -> Polynomial:
        """scale * part (only meaningful for exact scales)."""
        return self.part * self.scale

    def scaled(self, factor) -> "ASF":
        return replace(self, scale=self.scale * factor)

    def evaluate(self, s):
        """Float value of scale * kappa(s)^m * part(s)."""
        import numpy as np

        s = np.asarray(s, dtype=float)
        kappa_m = self.family.sigma.evaluate_float(s) ** (self.m / 2)
        return float(self.scale) * kappa_m * self.part.evaluate_float(s)


@dataclass(frozen=True)
class LadderReport:
    family: str
    l: object
    m: object
    identity: str
    status: str
    residual: Fraction = Fraction(0)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> str:
        payload = {
            "identity": self.identity,
            "family": self.family,
            "l": self.l,
            "m": self.m,
            "status": self.status,
            "residual": str(self.residual),
        }
        if self.details:
            payload["details"] = self.details
        return json.dumps(payload, sort_keys=True)


def _report(family: FamilySpec, l, m, identity: str, residuals: list[Polynomial], **details) -> LadderReport:
    worst = max((r.max_abs_coeff() for r in residuals), default=Fraction(0))
    return LadderReport(family.label, l, m, identity, "pass" if worst == 0 else "fail", worst, details)


def asf(family: FamilySpec, l: int, m: int) -> ASF:
    if m < 0 or l < 0:
        raise DomainError("l and m must be nonnegative")
    if m > l:
        raise DomainError(f"m = {m} exceeds l = {l}")
    return ASF(family, l, m, classical_polynomial(family, l).derivative(m))


def raise_(phi: ASF) -> ASF:
    """A_m: Phi_{l,m} -> Phi_{l,m+1}."""
    if phi.m >= phi.l:
        raise DomainError(f"A_{phi.m} annihilates Phi_({phi.l},{phi.l}); there is no Phi_({phi.l},{phi.l + 1})")
    return ASF(phi.family, phi.l, phi.m + 1, phi.part.derivative(), phi.scale)


def raise_value(phi: ASF) -> Polynomial:
    """The polynomial part of A_m phi evaluated formally, including the m = l case (zero)."""
    return phi.part.derivative()


def lower_part(family: FamilySpec, m: int, part: Polynomial) -> Polynomial:
    """Polynomial part of A_(m-1)^+ applied to kappa^m * part."""
    sigma, tau = family.sigma, family.tau
    return -(sigma * part.derivative()) - tau * part - sigma.derivative() * part * (m - 1)


def lower(phi: ASF) -> ASF:
    """A_(m-1)^+: Phi_{l,m} -> (lambda_l - lambda_(m-1)) Phi_{l,m-1}."""
    if phi.m < 1:
        raise DomainError("cannot lower below m = 0")
    return ASF(phi.family, phi.l, phi.m - 1, lower_part(phi.family, phi.m, phi.part), phi.scale)


def apply_hm(phi: ASF) -> ASF:
    """(H_m - lambda_m) in the kappa^m sector: P -> -sigma P'' - (tau + m sigma') P'."""
    fam, p = phi.family, phi.part
    out = -(fam.sigma * p.derivative(2)) - (fam.tau + fam.sigma.derivative() * phi.m) * p.derivative()
    return replace(phi, part=out)


def shape_invariance_step(family: FamilySpec, m: int) -> tuple[Fraction, Fraction]:
    """r_(m+1) computed as lambda_(m+1) - lambda_m and as -m sigma'' - tau'."""
    return eigenvalue(family, m + 1) - eigenvalue(family, m), -m * family.sigma2 - family.tau1


def three_term_asf_check(family: FamilySpec, l: int, m: int) -> LadderReport:
    """sigma P_(m+1) + (tau + (m-1) sigma') P_m + (lambda_l - lambda_(m-1)) P_(m-1) == 0."""
    if not 1 <= m <= l - 1:
        raise DomainError(f"recurrence in m needs 1 <= m <= l-1, got l={l}, m={m}")
    phi = classical_polynomial(family, l)
    p_lo, p_mid, p_hi = phi.derivative(m - 1), phi.derivative(m), phi.derivative(m + 1)
    lam = eigenvalue(family, l) - eigenvalue(family, m - 1)
    res = family.sigma * p_hi + (family.tau + family.sigma.derivative() * (m - 1)) * p_mid + p_lo * lam
    return _report(family, l, m, "three_term_m", [res])


def factorization_check(family: FamilySpec, l: int, m: int) -> LadderReport:
    """Both factorizations, shape invariance of r_(m+1), and lambda_l = sum r_k."""
    if not 0 <= m < l:
        raise DomainError(f"factorization needs 0 <= m < l, got l={l}, m={m}")
    gap = eigenvalue(family, l) - eigenvalue(family, m)
    phi = asf(family, l, m)
    phi_up = asf(family, l, m + 1)
    res = [
        lower(raise_(phi)).part - phi.part * gap,
        raise_(lower(phi_up)).part - phi_up.part * gap,
    ]
    r_diff, r_formula = shape_invariance_step(family, m)
    res.append(Polynomial.constant(r_diff - r_formula))
    telescoped = sum((shape_invariance_step(family, k - 1)[1] for k in range(1, l + 1)), Fraction(0))
    res.append(Polynomial.constant(eigenvalue(family, l) - telescoped))
    return _report(family, l, m, "factorization", res, r_next=str(r_formula))


def raising_check(family: FamilySpec, l: int, m: int) -> LadderReport:
    """A_m Phi_{l,m} == Phi_{l,m+1}, and A_l Phi_{l,l} == 0 at the top."""
    if m == l:
        return _report(family, l, m, "annihilation", [raise_value(asf(family, l, l))])
    return _report(family, l, m, "raising", [raise_(asf(family, l, m)).part - asf(family, l, m + 1).part])


def lowering_check(family: FamilySpec, l: int, m: int) -> LadderReport:
    """A_m^+ Phi_{l,m+1} == (lambda_l - lambda_m) Phi_{l,m}."""
    gap = eigenvalue(family, l) - eigenvalue(family, m)
    res = lower(asf(family, l, m + 1)).part - asf(family, l, m).part * gap
    return _report(family, l, m, "lowering", [res])


def hm_check(family: FamilySpec, l: int, m: int) -> LadderReport:
    phi = asf(family, l, m)
    gap = eigenvalue(family, l) - eigenvalue(family, m)
    return _report(family, l, m, "eigen_hm", [apply_hm(phi).part - phi.part * gap])


def r_eigenvalue(family: FamilySpec, l: int) -> Fraction:
    """R_m acts on Phi_{l,m} as the scalar -sigma'' l - tau' (independent of m)."""
    return -family.sigma2 * l - family.tau1


def intertwining_check(family: FamilySpec, l: int, m: int) -> LadderReport:
    """A_m R_m == R_(m+1) A_m and R_m A_m^+ == A_m^+ R_(m+1) on Phi_{l,m}, Phi_{l,m+1}."""
    phi = asf(family, l, m)
    r = r_eigenvalue(family, l)
    left = raise_(phi.scaled(r)).polynomial()
    right = raise_(phi).polynomial() * r
    phi_up = asf(family, l, m + 1)
    left2 = lower(phi_up).polynomial() * r
    right2 = lower(phi_up.scaled(r)).polynomial()
    return _report(family, l, m, "intertwining", [left - right, left2 - right2])


def ladder_product(family: FamilySpec, l: int, m: int) -> ASF:
    """Phi_{l,m} rebuilt from Phi_{l,l} by repeated lowering with exact denominators."""
    if not 0 <= m < l:
        raise DomainError(f"ladder product needs 0 <= m < l, got l={l}, m={m}")
    lam_l = eigenvalue(family, l)
    phi = asf(family, l, l)
    for k in range(l - 1, m - 1, -1):
        lowered = lower(phi)
        phi = ASF(family, l, k, lowered.part / (lam_l - eigenvalue(family, k)), phi.scale)
    return phi


def sweep(family: FamilySpec, l_max: int):
    """Yield every exact ladder report for l <= l_max."""
    for l in range(l_max + 1):
        for m in range(l + 1):
            yield raising_check(family, l, m)
            yield hm_check(family, l, m)
            if m < l:
                yield lowering_check(family, l, m)
                yield factorization_check(family, l, m)
                yield intertwining_check(family, l, m)
            if 1 <= m <= l - 1:
                yield three_term_asf_check(family, l, m)
