"""Hypergeometric-type families and their classical orthogonal polynomials.

A family is fixed by polynomials ``sigma`` (degree <= 2) and ``tau``
(degree 1), an interval ``(a, b)`` and a weight ``rho`` obeying the Pearson
relation ``(sigma*rho)' = tau*rho``.  For each ``l`` the equation

    sigma*y'' + tau*y' + lambda_l*y = 0

has a polynomial solution of degree ``l``, built here in exact arithmetic.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import ConsistencyError, DomainError
from .polynomial import Polynomial, as_rational

S = Polynomial.x()
ONE = Polynomial.constant(1)


class FamilyName(str, enum.Enum):
    HYPERGEOMETRIC = "hypergeometric"
    JACOBI = "jacobi"
    LAGUERRE = "laguerre"
    HERMITE = "hermite"


PARAMETERS = {
    FamilyName.HYPERGEOMETRIC: ("alpha", "beta"),
    FamilyName.JACOBI: ("alpha", "beta"),
    FamilyName.LAGUERRE: ("alpha",),
    FamilyName.HERMITE: (),
}


@dataclass(frozen=True)
class WeightForm:
    """rho(s) = prod(p_i(s) ** e_i) * exp(q(s)) with linear p_i and rational e_i."""

    factors: tuple[tuple[Polynomial, Fraction], ...] = ()
    exponent: Polynomial = field(default_factory=Polynomial)
    tag: str = ""

    def log(self, s):
        s = np.asarray(s, dtype=float)
        out = self.exponent.evaluate_float(s)
        for p, e in self.factors:
            if e != 0:
                out = out + float(e) * np.log(p.evaluate_float(s))
        return out

    def __call__(self, s):
        return np.exp(self.log(s))

    def log_derivative_times(self, sigma: Polynomial) -> Polynomial:
        """sigma * rho'/rho as an exact polynomial.

        Each factor contributes e_i * sigma * p_i'/p_i, which is polynomial
        only when p_i divides sigma; anything else means the stored form
        cannot satisfy the Pearson relation.
        """
        out = sigma * self.exponent.derivative()
        for p, e in self.factors:
            if e == 0:
                continue
            quot, rem = sigma.divmod(p)
            if not rem.is_zero():
                raise ConsistencyError(f"weight factor ({p}) does not divide sigma = {sigma}")
            out = out + quot * p.derivative() * e
        return out


@dataclass(frozen=True)
class FamilySpec:
    name: FamilyName
    interval: tuple[float | Fraction, float | Fraction]
    sigma: Polynomial
    tau: Polynomial
    weight: WeightForm
    params: tuple[tuple[str, Fraction], ...] = ()
    normalization: str = "conventional"

    def param(self, key: str) -> Fraction:
        return dict(self.params)[key]

    @property
    def sigma2(self) -> Fraction:
        """sigma'' (a constant)."""
        return 2 * self.sigma.coeff(2)

    @property
    def tau1(self) -> Fraction:
        """tau' (a constant)."""
        return self.tau.coeff(1)

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name.value}({inner})"

    def to_config(self) -> dict:
        cfg = {"family": self.name.value}
        cfg.update({k: str(v) for k, v in self.params})
        if self.normalization != "conventional":
            cfg["normalization"] = self.normalization
        return cfg

    def __str__(self) -> str:
        return self.label


def make_family(name, params: Mapping | None = None, normalization: str = "conventional", **kw) -> FamilySpec:
    """Build and validate one of the four standard families.

    Parameters are exact rationals (ints, Fractions or "p/q" strings) and
    must lie in (-1, oo).  Hermite uses tau = -2s so that the Pearson
    relation holds with rho = exp(-s^2).
    """
    try:
        fam = FamilyName(str(getattr(name, "value", name)).lower())
    except ValueError:
        raise DomainError(f"unknown family {name!r}; expected one of {[f.value for f in FamilyName]}") from None
    if normalization not in ("conventional", "monic"):
        raise DomainError(f"unknown normalization {normalization!r}")
    given = dict(params or {})
    given.update(kw)
    names = PARAMETERS[fam]
    unknown = set(given) - set(names)
    if unknown:
        raise DomainError(f"{fam.value} does not take parameter(s) {sorted(unknown)}")
    values = {}
    for key in names:
        q = as_rational(given.get(key, 0))
        if q <= -1:
            raise DomainError(f"parameter out of range: {key} = {q} must be > -1")
        values[key] = q

    inf = math.inf
    if fam is FamilyName.HYPERGEOMETRIC:
        a, b = values["alpha"], values["beta"]
        interval = (Fraction(0), Fraction(1))
        sigma = S - S * S
        tau = Polynomial([a + 1, -(a + b + 2)])
        weight = WeightForm(((S, a), (ONE - S, b)), tag="s^alpha (1-s)^beta")
    elif fam is FamilyName.JACOBI:
        a, b = values["alpha"], values["beta"]
        interval = (Fraction(-1), Fraction(1))
        sigma = ONE - S * S
        tau = Polynomial([b - a, -(a + b + 2)])
        weight = WeightForm(((ONE - S, a), (ONE + S, b)), tag="(1-s)^alpha (1+s)^beta")
    elif fam is FamilyName.LAGUERRE:
        a = values["alpha"]
        interval = (Fraction(0), inf)
        sigma = S
        tau = Polynomial([a + 1, -1])
        weight = WeightForm(((S, a),), exponent=-S, tag="s^alpha exp(-s)")
    else:
        interval = (-inf, inf)
        sigma = ONE
        tau = Polynomial([0, -2])
        weight = WeightForm((), exponent=-(S * S), tag="exp(-s^2)")

    spec = FamilySpec(fam, interval, sigma, tau, weight, tuple(values.items()), normalization)
    validate_family(spec)
    return spec


def validate_family(spec: FamilySpec) -> None:
    if spec.sigma.degree > 2 or spec.sigma.is_zero():
        raise DomainError(f"deg sigma must be <= 2, got {spec.sigma}")
    if spec.tau.degree != 1:
        raise DomainError(f"deg tau must be 1, got {spec.tau}")
    if spec.sigma2 > 0:
        raise DomainError("sigma'' must be <= 0")
    if spec.tau1 >= 0:
        raise DomainError("tau' must be < 0")
    if not pearson_holds(spec):
        raise ConsistencyError(f"Pearson relation fails for {spec.label}")
    a, b = spec.interval
    for root in np.roots(spec.sigma.to_floats()[::-1]) if spec.sigma.degree > 0 else []:
        if abs(root.imag) < 1e-14 and a < root.real < b:
            raise DomainError(f"sigma vanishes inside the interval at s = {root.real}")
    if spec.sigma(Fraction(interior_point(spec))) <= 0:
        raise DomainError("sigma must be positive on the open interval")


def interior_point(spec: FamilySpec) -> float:
    a, b = (float(e) for e in spec.interval)
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(b):
        return a + 1.0
    if math.isinf(a):
        return b - 1.0
    return 0.5 * (a + b)


def pearson_holds(spec: FamilySpec) -> bool:
    """Check (sigma*rho)'/rho == tau as a polynomial identity."""
    lhs = spec.sigma.derivative() + spec.weight.log_derivative_times(spec.sigma)
    return lhs == spec.tau


def boundary_values(spec: FamilySpec, k: int, offset: float) -> tuple[float, float]:
    """sigma*rho*s^k evaluated `offset` inside each endpoint (or at -/+1/offset for infinite ends)."""
    out = []
    for end, inward in ((spec.interval[0], 1.0), (spec.interval[1], -1.0)):
        e = float(end)
        s = -inward / offset if math.isinf(e) else e + inward * offset
        log_val = spec.weight.log(s) + np.log(abs(float(spec.sigma(s)))) + (k * np.log(abs(s)) if s else -np.inf)
        out.append(float(np.exp(log_val)))
    return out[0], out[1]


def eigenvalue(spec: FamilySpec, l: int) -> Fraction:
    """lambda_l = -l(l-1)/2 * sigma'' - l * tau'."""
    if l < 0:
        raise DomainError("l must be nonnegative")
    return -Fraction(l * (l - 1), 2) * spec.sigma2 - l * spec.tau1


def rodrigues_constant(spec: FamilySpec, l: int) -> Fraction:
    fact = math.factorial(l)
    if spec.name is FamilyName.JACOBI:
        return Fraction((-1) ** l, 2**l * fact)
    if spec.name is FamilyName.HERMITE:
        return Fraction((-1) ** l)
    return Fraction(1, fact)


def classical_polynomial(spec: FamilySpec, l: int) -> Polynomial:
    """Phi_l from the Rodrigues formula, without differentiating rho.

    Writing d^j/ds^j [sigma^l rho] = sigma^(l-j) rho q_(l-j), the Pearson
    relation gives q_l = 1 and
    q_(k-1) = sigma q_k' + (tau + (k-1) sigma') q_k, so Phi_l = B_l q_0.
    """
    if l < 0:
        raise DomainError("l must be nonnegative")
    return _classical_polynomial(spec, l)


@lru_cache(maxsize=4096)
def _classical_polynomial(spec: FamilySpec, l: int) -> Polynomial:
    q = ONE
    dsigma = spec.sigma.derivative()
    for k in range(l, 0, -1):
        q = spec.sigma * q.derivative() + (spec.tau + dsigma * (k - 1)) * q
    if q.degree != l:
        raise ConsistencyError(f"Rodrigues descent produced degree {q.degree}, expected {l}")
    if spec.normalization == "monic":
        return q.monic()
    return q * rodrigues_constant(spec, l)


def ode_residual(spec: FamilySpec, poly: Polynomial, lam: Fraction) -> Polynomial:
    """sigma*y'' + tau*y' + lam*y for y = poly."""
    return spec.sigma * poly.derivative(2) + spec.tau * poly.derivative() + poly * lam


def recurrence_coefficients(spec: FamilySpec, l: int) -> tuple[Fraction, Fraction, Fraction]:
    """(alpha_l, beta_l, gamma_l) with s*Phi_l = alpha_l Phi_(l+1) + beta_l Phi_l + gamma_l Phi_(l-1).

    The system is triangular in the top coefficients; the full identity is
    asserted afterwards.  l = 0 is accepted with gamma_0 = 0.
    """
    if l < 0:
        raise DomainError("l must be nonnegative")
    return _recurrence(spec, l)


@lru_cache(maxsize=4096)
def _recurrence(spec: FamilySpec, l: int) -> tuple[Fraction, Fraction, Fraction]:
    p_prev = classical_polynomial(spec, l - 1) if l > 0 else Polynomial()
    p = classical_polynomial(spec, l)
    p_next = classical_polynomial(spec, l + 1)
    r = S * p
    a = r.leading / p_next.leading
    r = r - p_next * a
    b = r.coeff(l) / p.leading
    r = r - p * b
    c = r.coeff(l - 1) / p_prev.leading if l > 0 else Fraction(0)
    r = r - p_prev * c
    if not r.is_zero():
        raise ConsistencyError(f"three-term recurrence residual nonzero at l={l}: {r}")
    return a, b, c


def weight_mass(spec: FamilySpec) -> float:
    """Integral of rho over (a, b)."""
    g = math.gamma
    if spec.name is FamilyName.HERMITE:
        return math.sqrt(math.pi)
    a = float(spec.param("alpha"))
    if spec.name is FamilyName.LAGUERRE:
        return g(a + 1)
    b = float(spec.param("beta"))
    beta_fn = math.exp(math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(a + b + 2))
    if spec.name is FamilyName.JACOBI:
        return 2.0 ** (a + b + 1) * beta_fn
    return beta_fn


def family_from_config(cfg) -> FamilySpec:
    """Load {"family": "jacobi", "alpha": "1/2", "beta": "3/2"} (dict or JSON text)."""
    if isinstance(cfg, str):
        cfg = json.loads(cfg)
    cfg = dict(cfg)
    try:
        name = cfg.pop("family")
    except KeyError:
        raise DomainError("config is missing the 'family' key") from None
    normalization = cfg.pop("normalization", "conventional")
    return make_family(name, cfg, normalization=normalization)


def standard_families() -> list[FamilySpec]:
    """The parameter matrix used by the verification sweeps."""
    half, three_halves = Fraction(1, 2), Fraction(3, 2)
    out = []
    for a in (0, half, three_halves):
        for b in (0, half, three_halves):
            out.append(make_family("jacobi", alpha=a, beta=b))
    out.append(make_family("hypergeometric", alpha=0, beta=0))
    out.append(make_family("hypergeometric", alpha=half, beta=half))
    for a in (0, 1, Fraction(5, 2)):
        out.append(make_family("laguerre", alpha=a))
    out.append(make_family("hermite"))
    return out
