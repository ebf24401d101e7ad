"""Inner products, normalized bases and the creation/annihilation algebra.

Integrals of ASF products reduce to rho-weighted polynomials,
``<Phi_{l,m}, Phi_{k,m}> = int P_l P_k sigma^m rho ds``, so a Gauss rule
built from the family's own recurrence integrates them exactly.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericError
from .families import FamilySpec, eigenvalue, recurrence_coefficients, weight_mass
from .ladder import ASF, asf, lower, r_eigenvalue, raise_
from .polynomial import Polynomial

DEFAULT_TRUNCATION = 64


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def monic_recurrence(family: FamilySpec, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal b_l and off-diagonal squares c_l of the Jacobi matrix.

    From s Phi_l = alpha_l Phi_(l+1) + beta_l Phi_l + gamma_l Phi_(l-1),
    the monic polynomials satisfy p_(l+1) = (s - beta_l) p_l - alpha_(l-1) gamma_l p_(l-1).
    """
    coeffs = [recurrence_coefficients(family, l) for l in range(n + 1)]
    b = np.array([float(c[1]) for c in coeffs])
    c = np.array([0.0] + [float(coeffs[l - 1][0] * coeffs[l][2]) for l in range(1, n + 1)])
    return b, c


def _orthonormal_values(x: np.ndarray, b, c, mass: float, n: int):
    """p_hat_0..p_hat_n and p_hat_n' at x by the stable three-term recurrence."""
    vals = np.empty((n + 1, x.size))
    p_prev, p = np.zeros_like(x), np.full_like(x, 1.0 / math.sqrt(mass))
    dp_prev, dp = np.zeros_like(x), np.zeros_like(x)
    vals[0] = p
    for l in range(n):
        sq_next = math.sqrt(c[l + 1])
        sq_cur = math.sqrt(c[l]) if l > 0 else 0.0
        p_next = ((x - b[l]) * p - sq_cur * p_prev) / sq_next
        dp_next = (p + (x - b[l]) * dp - sq_cur * dp_prev) / sq_next
        p_prev, p, dp_prev, dp = p, p_next, dp, dp_next
        vals[l + 1] = p
    return vals, dp


def gauss_rule(family: FamilySpec, n: int) -> QuadratureRule:
    """n-node Gauss rule for the family weight (Golub-Welsch, Newton-polished).

    Nodes come from the symmetric tridiagonal Jacobi matrix and are polished
    by a Newton step on the orthonormal p_n; weights use the Christoffel
    form 1 / sum p_hat_k(x)^2, which keeps tiny weights (Laguerre, Hermite
    tails) accurate to full relative precision.
    """
    if n < 1:
        raise DomainError("a Gauss rule needs n >= 1 nodes")
    return _gauss_rule(family, n)


@lru_cache(maxsize=256)
def _gauss_rule(family: FamilySpec, n: int) -> QuadratureRule:
    b, c = monic_recurrence(family, n)
    mass = weight_mass(family)
    if n == 1:
        x = np.array([b[0]])
    else:
        try:
            x = eigh_tridiagonal(b[:n], np.sqrt(c[1:n]), eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"Jacobi-matrix eigensolver failed for {family.label}, n={n}") from exc
        for _ in range(2):
            vals, dp = _orthonormal_values(x, b, c, mass, n)
            x = x - vals[n] / dp
    vals, _ = _orthonormal_values(x, b, c, mass, n)
    w = 1.0 / np.sum(vals[:n] ** 2, axis=0)
    if not (np.all(np.isfinite(x)) and np.all(w > 0)):
        raise NumericError(f"non-finite Gauss rule for {family.label}, n={n}")
    return QuadratureRule(np.sort(x), w[np.argsort(x)], 2 * n - 1)


def rule_for_degree(family: FamilySpec, degree: int) -> QuadratureRule:
    return gauss_rule(family, max(degree // 2 + 1, 1))


def _reduced_integrand(f: ASF, g: ASF) -> Polynomial:
    return f.part * g.part * f.family.sigma**f.m


def inner_product(f, g, rule: QuadratureRule | None = None) -> float:
    """<f, g> = int f g rho ds.

    ASF pairs must share m; the reduced integrand P_f P_g sigma^m is then a
    polynomial evaluated exactly at the nodes.  Plain callables of s are
    integrated with the given rule (default 64 nodes) and are only as exact
    as the rule is for them.
    """
    if isinstance(f, ASF) and isinstance(g, ASF):
        if f.family != g.family:
            raise DomainError("inner product of ASF from different families")
        if f.m != g.m:
            raise DomainError(f"ASF with different m ({f.m} vs {g.m}) give a non-polynomial integrand")
        integrand = _reduced_integrand(f, g)
        if rule is None:
            rule = rule_for_degree(f.family, integrand.degree)
        elif integrand.degree > rule.exact_degree:
            raise DomainError(f"integrand degree {integrand.degree} exceeds rule exactness {rule.exact_degree}")
        return float(f.scale) * float(g.scale) * rule.integrate(integrand.evaluate_exact(rule.nodes))
    family = next((h.family for h in (f, g) if isinstance(h, ASF)), None)
    if rule is None:
        if family is None:
            raise DomainError("a quadrature rule is required for two sampled functions")
        rule = gauss_rule(family, 64)
    fv = f.evaluate(rule.nodes) if isinstance(f, ASF) else np.asarray(f(rule.nodes))
    gv = g.evaluate(rule.nodes) if isinstance(g, ASF) else np.asarray(g(rule.nodes))
    return rule.integrate(fv * gv)


@lru_cache(maxsize=8192)
def _unit_norm(family: FamilySpec, l: int, m: int) -> float:
    phi = asf(family, l, m)
    return math.sqrt(inner_product(phi, phi))


def norm(phi: ASF) -> float:
    if phi.part == asf(phi.family, phi.l, phi.m).part:
        return abs(float(phi.scale)) * _unit_norm(phi.family, phi.l, phi.m)
    return abs(float(phi.scale)) * math.sqrt(inner_product(replace(phi, scale=Fraction(1)), replace(phi, scale=Fraction(1))))


def normalized(family: FamilySpec, l: int, m: int) -> ASF:
    """|l,m> = Phi_{l,m} / ||Phi_{l,m}|| with a float scale."""
    phi = asf(family, l, m)
    return replace(phi, scale=1.0 / _unit_norm(family, l, m))


# coefficient space


def level_gap(family: FamilySpec, m: int, n: int) -> Fraction:
    """e_n = lambda_(m+n) - lambda_m."""
    return eigenvalue(family, m + n) - eigenvalue(family, m)


@dataclass(frozen=True)
class BasisVector:
    """sum_n coeffs[n] |m+n, m>."""

    family: FamilySpec
    m: int
    coeffs: np.ndarray

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def padded(self, size: int) -> np.ndarray:
        out = np.zeros(size, dtype=self.coeffs.dtype)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def __sub__(self, other: "BasisVector") -> "BasisVector":
        _same_space(self, other)
        size = max(self.truncation, other.truncation)
        return replace(self, coeffs=self.padded(size) - other.padded(size))

    def __add__(self, other: "BasisVector") -> "BasisVector":
        _same_space(self, other)
        size = max(self.truncation, other.truncation)
        return replace(self, coeffs=self.padded(size) + other.padded(size))

    def __mul__(self, k) -> "BasisVector":
        return replace(self, coeffs=self.coeffs * k)

    __rmul__ = __mul__


def _same_space(u: BasisVector, v: BasisVector):
    if u.family != v.family or u.m != v.m:
        raise DomainError("vectors live in different H_m spaces")


def basis_state(family: FamilySpec, m: int, l: int, truncation: int = DEFAULT_TRUNCATION) -> BasisVector:
    if l < m:
        raise DomainError(f"|l,m> needs l >= m, got l={l}, m={m}")
    size = max(truncation, l - m + 1)
    c = np.zeros(size)
    c[l - m] = 1.0
    return BasisVector(family, m, c)


def _sqrt_gaps(family: FamilySpec, m: int, n_max: int) -> np.ndarray:
    return np.sqrt([float(level_gap(family, m, n)) for n in range(n_max + 1)])


def annihilate(v: BasisVector) -> BasisVector:
    """a_m |m+n, m> = sqrt(e_n) |m+n-1, m>; the top slot is left at zero."""
    g = _sqrt_gaps(v.family, v.m, v.truncation)
    out = np.zeros_like(v.coeffs)
    out[:-1] = g[1 : v.truncation] * v.coeffs[1:]
    return replace(v, coeffs=out)


def create(v: BasisVector) -> BasisVector:
    """a_m^+ |m+n, m> = sqrt(e_(n+1)) |m+n+1, m>; grows the vector by one level."""
    g = _sqrt_gaps(v.family, v.m, v.truncation)
    out = np.zeros(v.truncation + 1, dtype=v.coeffs.dtype)
    out[1:] = g[1:] * v.coeffs
    return replace(v, coeffs=out)


def shift_u(v: BasisVector, direction: int = 1) -> BasisVector:
    """U_m |l,m> = |l+1, m+1>: the level index n = l - m is unchanged."""
    if direction not in (1, -1):
        raise DomainError("direction must be +1 or -1")
    if v.m + direction < 0:
        raise DomainError("cannot shift below m = 0")
    return replace(v, m=v.m + direction)


def _diagonal(v: BasisVector, fn) -> BasisVector:
    d = np.array([float(fn(v.m + n)) for n in range(v.truncation)])
    return replace(v, coeffs=d * v.coeffs)


def number_op(v: BasisVector) -> BasisVector:
    return _diagonal(v, lambda l: l)


def r_op(v: BasisVector) -> BasisVector:
    """R_m = -sigma'' N_m - tau'."""
    return _diagonal(v, lambda l: r_eigenvalue(v.family, l))


def h_op(v: BasisVector) -> BasisVector:
    return _diagonal(v, lambda l: eigenvalue(v.family, l))


def inner(u: BasisVector, v: BasisVector) -> complex:
    _same_space(u, v)
    size = max(u.truncation, v.truncation)
    return complex(np.vdot(u.padded(size), v.padded(size)))


# algebra checks


@dataclass
class CheckResult:
    identity: str
    passed: bool
    residual: float | Fraction
    kind: str  # "exact" or "numeric"

    def to_dict(self) -> dict:
        return {"identity": self.identity, "status": "pass" if self.passed else "fail", "kind": self.kind,
                "residual": str(self.residual) if isinstance(self.residual, Fraction) else float(self.residual)}


@dataclass
class AlgebraReport:
    family: str
    m: int
    l_max: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _exact(identity: str, diffs) -> CheckResult:
    worst = max((abs(d) for d in diffs), default=Fraction(0))
    return CheckResult(identity, worst == 0, worst, "exact")


def _numeric(identity: str, lhs: np.ndarray, rhs: np.ndarray, tol: float) -> CheckResult:
    size = max(len(lhs), len(rhs))
    a, b = np.zeros(size, dtype=complex), np.zeros(size, dtype=complex)
    a[: len(lhs)], b[: len(rhs)] = lhs, rhs
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    err = float(np.max(np.abs(a - b)) / scale)
    return CheckResult(identity, err <= tol, err, "numeric")


def commutator_checks(family: FamilySpec, m: int, l_max: int, tol: float = 1e-12, seed: int = 0) -> AlgebraReport:
    """Commutation relations of a_m, a_m^+, R_m, H_m and U_m on |l,m>, l <= l_max.

    Each relation is checked twice: as an exact identity between eigenvalue
    differences, and by applying the operators to a random vector in
    coefficient space.
    """
    if l_max <= m:
        raise DomainError("l_max must exceed m")
    s2 = family.sigma2
    lam = lambda l: eigenvalue(family, l)  # noqa: E731
    r = lambda l: r_eigenvalue(family, l)  # noqa: E731
    e = lambda n: level_gap(family, m, n)  # noqa: E731
    levels = range(m, l_max + 1)
    rep = AlgebraReport(family.label, m, l_max)
    rep.checks += [
        _exact("[a,a+]=R", [e(l - m + 1) - e(l - m) - r(l) for l in levels]),
        _exact("lie_gap", [e(l - m + 1) - e(l - m) - (lam(l + 1) - lam(l)) for l in levels]),
        _exact("[a+,R]=s''a+", [(r(l) - r(l + 1)) - s2 for l in levels]),
        _exact("[a,R]=-s''a", [(r(l) - r(l - 1)) + s2 for l in levels if l > m]),
        _exact("[H,a]=-Ra", [(lam(l - 1) - lam(l)) + r(l - 1) for l in levels if l > m]),
        _exact("[H,a+]=a+R", [(lam(l + 1) - lam(l)) - r(l) for l in levels]),
        _exact("URU+=R'+s''", [r(l) - (r(l + 1) + s2) for l in levels]),
        _exact("H-lam=a+a", [lam(l) - lam(m) - e(l - m) for l in levels]),
    ]

    rng = np.random.default_rng(seed)
    v = BasisVector(family, m, rng.standard_normal(l_max - m + 1) + 1j * rng.standard_normal(l_max - m + 1))
    a, ad, R = annihilate, create, r_op
    rep.checks.append(_numeric("vec [a,a+]=R", (a(ad(v)) - ad(a(v))).coeffs, R(v).coeffs, tol))
    big = replace(v, coeffs=v.padded(v.truncation + 1))
    rep.checks.append(_numeric("vec [a+,R]=s''a+", (ad(R(v)) - R(ad(v))).coeffs, float(s2) * ad(v).coeffs, tol))
    rep.checks.append(_numeric("vec [a,R]=-s''a", (a(R(big)) - R(a(big))).coeffs, -float(s2) * a(big).coeffs, tol))
    rep.checks.append(_numeric("vec [H,a]=-Ra", (h_op(a(big)) - a(h_op(big))).coeffs, -R(a(big)).coeffs, tol))
    rep.checks.append(_numeric("vec [H,a+]=a+R", (h_op(ad(v)) - ad(h_op(v))).coeffs, ad(R(v)).coeffs, tol))
    up = shift_u(v, 1)
    lhs = shift_u(R(shift_u(up, -1)), 1)
    rep.checks.append(_numeric("vec URU+=R'+s''", lhs.coeffs, (R(up) + float(s2) * up).coeffs, tol))
    rep.checks.append(_numeric("vec <a+u,v>=<u,av>", np.array([inner(ad(v), big)]), np.array([inner(v, a(big))]), tol))
    return rep


class AlgebraTag(str, enum.Enum):
    SU11 = "su11"
    HEISENBERG_WEYL = "heisenberg_weyl"


@dataclass
class AlgebraClass:
    tag: AlgebraTag
    report: AlgebraReport | None = None

    @property
    def verified(self) -> bool:
        return self.report is None or self.report.passed


def classify_algebra(family: FamilySpec, m: int = 0, l_max: int = 30, tol: float = 1e-12) -> AlgebraClass:
    """su(1,1) when sigma'' < 0, Heisenberg-Weyl when sigma'' = 0.

    For su(1,1) the generators K_+- = sqrt(2/|sigma''|) a_m^+-, K_0 = -R_m/sigma''
    are checked against [K_0, K_+-] = +-K_+- and [K_+, K_-] = -2 K_0.
    """
    s2 = family.sigma2
    if s2 > 0:
        raise DomainError("sigma'' > 0 is outside the admissible families")
    if s2 == 0:
        rep = AlgebraReport(family.label, m, l_max)
        rep.checks.append(_exact("[[a,a+],a+]=0", [r_eigenvalue(family, l + 1) - r_eigenvalue(family, l) for l in range(m, l_max + 1)]))
        return AlgebraClass(AlgebraTag.HEISENBERG_WEYL, rep)

    rep = AlgebraReport(family.label, m, l_max)
    c2 = Fraction(2) / abs(s2)
    k0 = lambda l: -r_eigenvalue(family, l) / s2  # noqa: E731
    levels = range(m, l_max + 1)
    # K_+|l> = c sqrt(e_(n+1))|l+1>; [K_0,K_+]|l> = (k0(l+1)-k0(l)) K_+|l>
    rep.checks.append(_exact("[K0,K+]=K+", [k0(l + 1) - k0(l) - 1 for l in levels]))
    rep.checks.append(_exact("[K0,K-]=-K-", [k0(l - 1) - k0(l) + 1 for l in levels if l > m]))
    # [K_+,K_-]|l> = c^2 (e_n - e_(n+1)) |l>
    rep.checks.append(_exact("[K+,K-]=-2K0", [c2 * (level_gap(family, m, l - m) - level_gap(family, m, l - m + 1)) + 2 * k0(l) for l in levels]))

    c = math.sqrt(float(c2))
    kp = lambda v: create(v) * c  # noqa: E731
    km = lambda v: annihilate(v) * c  # noqa: E731
    K0 = lambda v: r_op(v) * (-1.0 / float(s2))  # noqa: E731
    rng = np.random.default_rng(1)
    v = BasisVector(family, m, rng.standard_normal(l_max - m + 1))
    big = replace(v, coeffs=v.padded(v.truncation + 1))
    rep.checks.append(_numeric("vec [K0,K+]=K+", (K0(kp(v)) - kp(K0(v))).coeffs, kp(v).coeffs, tol))
    rep.checks.append(_numeric("vec [K0,K-]=-K-", (K0(km(big)) - km(K0(big))).coeffs, -km(big).coeffs, tol))
    rep.checks.append(_numeric("vec [K+,K-]=-2K0", (kp(km(v)) - km(kp(v))).coeffs, -2 * K0(v).coeffs, tol))
    return AlgebraClass(AlgebraTag.SU11, rep)


# function-level sweeps


def orthogonality_worst(family: FamilySpec, l_max: int, m_max: int) -> float:
    """max |<Phi_{l,m},Phi_{k,m}>| / (||Phi_{l,m}|| ||Phi_{k,m}||) over l != k."""
    worst = 0.0
    for m in range(m_max + 1):
        for l in range(m, l_max + 1):
            for k in range(l + 1, l_max + 1):
                ip = inner_product(asf(family, l, m), asf(family, k, m))
                worst = max(worst, abs(ip) / (_unit_norm(family, l, m) * _unit_norm(family, k, m)))
    return worst


def norm_ladder_worst(family: FamilySpec, l_max: int, m_max: int | None = None) -> float:
    """max relative deviation of ||Phi_{l,m+1}|| / ||Phi_{l,m}|| from sqrt(lambda_l - lambda_m)."""
    worst = 0.0
    for l in range(1, l_max + 1):
        for m in range(min(l, (m_max if m_max is not None else l) + 1)):
            ratio = _unit_norm(family, l, m + 1) / _unit_norm(family, l, m)
            expected = math.sqrt(float(eigenvalue(family, l) - eigenvalue(family, m)))
            worst = max(worst, abs(ratio - expected) / expected)
    return worst


def adjointness_worst(family: FamilySpec, l_max: int) -> float:
    """<A_m Phi_{l,m}, Phi_{k,m+1}> against <Phi_{l,m}, A_m^+ Phi_{k,m+1}>, relative."""
    worst = 0.0
    for m in range(l_max):
        for l in range(m + 1, l_max + 1):
            for k in range(m + 1, l_max + 1):
                phi_l, phi_k = asf(family, l, m), asf(family, k, m + 1)
                left = inner_product(raise_(phi_l), phi_k)
                right = inner_product(phi_l, lower(phi_k))
                scale = _unit_norm(family, l, m + 1) * _unit_norm(family, k, m + 1)
                worst = max(worst, abs(left - right) / scale)
    return worst


def create_function(phi: ASF) -> ASF:
    """a_m^+ = A_m^+ U_m at function level, for phi proportional to Phi_{l,m}.

    U_m sends the normalized |l,m> to |l+1,m+1>, which carries the norm
    ratio into the scale; A_m^+ then lowers back to the m sector.
    """
    fam, l, m = phi.family, phi.l, phi.m
    # phi = amplitude * Phi_{l,m}; the part may carry an exact factor of its own
    amplitude = float(phi.scale) * float(phi.part.leading / asf(fam, l, m).part.leading)
    ratio = _unit_norm(fam, l, m) / _unit_norm(fam, l + 1, m + 1)
    shifted = replace(asf(fam, l + 1, m + 1), scale=amplitude * ratio)
    return lower(shifted)


def creation_chain_deviation(family: FamilySpec, m: int, l: int) -> float:
    """(a_m^+)^(l-m)|m,m> / sqrt(prod e_k) against the direct |l,m>, up to sign.

    Compared as float polynomial coefficients of scale * part.
    """
    state = normalized(family, m, m)
    denom = 1.0
    for k in range(m, l):
        state = create_function(state)
        denom *= math.sqrt(float(eigenvalue(family, k + 1) - eigenvalue(family, m)))
    built = state.part.to_floats() * float(state.scale) / denom
    direct_phi = normalized(family, l, m)
    direct = direct_phi.part.to_floats() * float(direct_phi.scale)
    scale = np.max(np.abs(direct))
    return float(min(np.max(np.abs(built - direct)), np.max(np.abs(built + direct))) / scale)


SampledFunction = Union[ASF, Callable[[np.ndarray], np.ndarray]]
