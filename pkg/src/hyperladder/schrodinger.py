"""From hypergeometric data to one-dimensional Schrodinger problems.

A change of variable with ds/dx = sign * kappa(s(x)) turns the associated
equation into -Psi'' + V_m Psi = lambda_l Psi, with

    Psi_{l,m}(x) = sqrt(kappa(s) rho(s)) Phi_{l,m}(s),   s = s(x),
    W_m = -tau/(2 kappa) - sign (2m-1)/(2 kappa) d(kappa)/dx,
    V_m - lambda_m = W_m^2 - sign dW_m/dx,
    V_(m+1) - lambda_m = W_m^2 + sign dW_m/dx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy.integrate import simpson, solve_ivp
from numba import njit

from .errors import DomainError
from .families import FamilyName, FamilySpec, classical_polynomial, eigenvalue



@dataclass(frozen=True)
class ChangeOfVariable:
    family: FamilySpec
    sign: int
    x_domain: tuple[float, float]
    s_of_x: Callable
    ds_dx: Callable
    d2s_dx2: Callable | None = None
    closed_form: str | None = None
    # s - a and b - s in closed form; avoids cancellation next to finite endpoints
    dist_a: Callable | None = None
    dist_b: Callable | None = None

    def interior(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x > self.x_domain[0]) & (x < self.x_domain[1])))

    def derivative_mismatch(self, x) -> float:
        """max |ds/dx - sign*kappa(s(x))| at the given points."""
        s = self.s_of_x(np.asarray(x, dtype=float))
        kappa = np.sqrt(self.family.sigma.evaluate_float(s))
        return float(np.max(np.abs(self.ds_dx(x) - self.sign * kappa)))


def _arr(x):
    return np.asarray(x, dtype=float)


# sign, x-domain, tag, s, s', s'', s - a, b - s
_CLOSED_FORMS = {
    FamilyName.JACOBI: (-1, (0.0, math.pi), "s = cos x",
                        np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x),
                        lambda x: 2 * np.cos(_arr(x) / 2) ** 2, lambda x: 2 * np.sin(_arr(x) / 2) ** 2),
    FamilyName.HYPERGEOMETRIC: (1, (0.0, math.pi), "s = sin^2(x/2)",
                                lambda x: np.sin(_arr(x) / 2) ** 2, lambda x: np.sin(x) / 2, lambda x: np.cos(x) / 2,
                                lambda x: np.sin(_arr(x) / 2) ** 2, lambda x: np.cos(_arr(x) / 2) ** 2),
    FamilyName.LAGUERRE: (1, (0.0, math.inf), "s = x^2/4",
                          lambda x: _arr(x) ** 2 / 4, lambda x: _arr(x) / 2, lambda x: np.full_like(_arr(x), 0.5),
                          lambda x: _arr(x) ** 2 / 4, None),
    FamilyName.HERMITE: (1, (-math.inf, math.inf), "s = x",
                         lambda x: _arr(x) * 1.0, lambda x: np.ones_like(_arr(x)), lambda x: np.zeros_like(_arr(x)),
                         None, None),
}


def default_sign(family: FamilySpec) -> int:
    return _CLOSED_FORMS[family.name][0]


def change_of_variable(family: FamilySpec, sign: int | None = None) -> ChangeOfVariable:
    """Closed-form s(x) covering (a, b) monotonically.

    The non-default sign is obtained by reflecting x -> c - x (c = x_a + x_b
    on finite domains, 0 otherwise), which flips ds/dx while keeping the map
    closed-form.
    """
    base_sign, dom, tag, s, ds, d2s, da, db = _CLOSED_FORMS[family.name]
    if sign is None:
        sign = base_sign
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    if sign == base_sign:
        return ChangeOfVariable(family, sign, dom, s, ds, d2s, tag, da, db)
    lo, hi = dom
    c = lo + hi if math.isfinite(lo) and math.isfinite(hi) else 0.0

    def reflect(fn):
        return None if fn is None else (lambda x: fn(c - _arr(x)))

    return ChangeOfVariable(
        family, sign, (c - hi, c - lo),
        reflect(s),
        lambda x: -ds(c - _arr(x)),
        reflect(d2s),
        f"{tag} reflected about x = {c / 2:g}",
        reflect(da),
        reflect(db),
    )


def numeric_change_of_variable(family: FamilySpec, sign: int, x0: float, s0: float,
                               x_domain: tuple[float, float]) -> ChangeOfVariable:
    """Integrate ds/dx = sign*sqrt(sigma(s)) from (x0, s0) with a dense ODE solution."""
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    sig = family.sigma

    def rhs(_x, y):
        return [sign * math.sqrt(max(float(sig(float(y[0]))), 0.0))]

    lo, hi = x_domain
    left = solve_ivp(rhs, (x0, lo), [s0], dense_output=True, rtol=1e-12, atol=1e-14)
    right = solve_ivp(rhs, (x0, hi), [s0], dense_output=True, rtol=1e-12, atol=1e-14)

    def s_of_x(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < x0, left.sol(np.minimum(x, x0))[0], right.sol(np.maximum(x, x0))[0])
        return out

    def ds_dx(x):
        return sign * np.sqrt(np.maximum(sig.evaluate_float(s_of_x(x)), 0.0))

    def d2s_dx2(x):
        # d/dx (sign*sqrt(sigma(s))) = sigma'(s)/2 along the solution
        return 0.5 * sig.derivative().evaluate_float(s_of_x(x))

    return ChangeOfVariable(family, sign, x_domain, s_of_x, ds_dx, d2s_dx2, None)


def interior_grid(cov: ChangeOfVariable, n: int = 512, trim: float = 0.0, span: float = 8.0) -> np.ndarray:
    """n evenly spaced points strictly inside x_domain.

    Finite ends are approached to within one step (or cut by ``trim`` of the
    length); infinite ends are replaced by a distance ``span`` from the other
    end, or from 0 when both are infinite.
    """
    if n < 2:
        raise DomainError("need at least 2 grid points")
    lo, hi = cov.x_domain
    if not math.isfinite(lo) and not math.isfinite(hi):
        lo, hi = -span, span
    elif not math.isfinite(hi):
        hi = lo + span
    elif not math.isfinite(lo):
        lo = hi - span
    cut = trim * (hi - lo)
    lo, hi = lo + cut, hi - cut
    return np.linspace(lo, hi, n + 2)[1:-1]


def _require_interior(cov: ChangeOfVariable, x):
    if not cov.interior(x):
        raise DomainError(f"x must lie strictly inside {cov.x_domain}")


def _sigma_and_log_weight(family: FamilySpec, cov: ChangeOfVariable, x):
    """sigma(s(x)) and log rho(s(x)), using endpoint distances where they vanish."""
    s = cov.s_of_x(x)
    a, b = (float(e) for e in family.interval)
    da = cov.dist_a(x) if cov.dist_a is not None else s - a
    db = cov.dist_b(x) if cov.dist_b is not None else b - s
    sig = family.sigma
    if sig.degree == 2:
        sg = -float(sig.leading) * da * db
    elif sig.degree == 1 and math.isfinite(a) and sig(Fraction(a)) == 0:
        sg = float(sig.leading) * da
    else:
        sg = sig.evaluate_float(s)
    logw = family.weight.exponent.evaluate_float(s)
    for p, e in family.weight.factors:
        if e == 0:
            continue
        if math.isfinite(a) and p(Fraction(a)) == 0:
            val = float(p.leading) * da
        elif math.isfinite(b) and p(Fraction(b)) == 0:
            val = -float(p.leading) * db
        else:
            val = p.evaluate_float(s)
        logw = logw + float(e) * np.log(val)
    return s, sg, logw


def _w_and_dw(family: FamilySpec, m: int, cov: ChangeOfVariable, x):
    """W_m and dW_m/dx from the closed-form s, s', s''."""
    x = np.asarray(x, dtype=float)
    s, sg, _ = _sigma_and_log_weight(family, cov, x)
    sd, sdd = cov.ds_dx(x), cov.d2s_dx2(x)
    sg1 = family.sigma.derivative().evaluate_float(s)
    sg2 = float(family.sigma2)
    t, t1 = family.tau.evaluate_float(s), float(family.tau1)
    kappa = np.sqrt(sg)
    kdot = sg1 * sd / (2 * kappa)
    c = cov.sign * (2 * m - 1)
    w = -t / (2 * kappa) - c * kdot / (2 * kappa)
    # d/dx [sigma' s' / sigma]
    dq = (sg2 * sd * sd + sg1 * sdd) / sg - (sg1 * sd) ** 2 / sg**2
    dw = -t1 * sd / (2 * kappa) + t * kdot / (2 * sg) - c * dq / 4
    return w, dw


def superpotential(family: FamilySpec, m: int, cov: ChangeOfVariable, x):
    _require_interior(cov, x)
    w, _ = _w_and_dw(family, m, cov, x)
    return w if np.ndim(x) else float(w)


def superpotential_derivative(family: FamilySpec, m: int, cov: ChangeOfVariable, x,
                              method: str = "analytic", target: float = 1e-8):
    """dW_m/dx, analytic or by 4th-order central differences with a Richardson check."""
    _require_interior(cov, x)
    if method == "analytic":
        return _w_and_dw(family, m, cov, x)[1]
    if method != "numeric":
        raise DomainError(f"unknown derivative method {method!r}")
    f = lambda y: _w_and_dw(family, m, cov, y)[0]  # noqa: E731
    return richardson_derivative(f, np.asarray(x, dtype=float), target=target)


def _central4(f, x, h):
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def richardson_derivative(f, x, h: float = 1e-2, target: float = 1e-8, max_halvings: int = 8):
    """Fourth-order central difference, halving h until the Richardson estimate beats target."""
    d_h = _central4(f, x, h)
    for _ in range(max_halvings):
        d_half = _central4(f, x, h / 2)
        err = np.max(np.abs(d_half - d_h)) / 15
        h /= 2
        if err < target:
            return d_half + (d_half - d_h) / 15
        d_h = d_half
    return d_h


@dataclass
class PotentialProfile:
    m: int
    grid: np.ndarray
    values: np.ndarray
    lambda_m: Fraction
    sign: int
    func: Callable | None = None
    flagged: list[int] = field(default_factory=list)


def _potential_values(family, m, cov, x, method="analytic"):
    w, _ = _w_and_dw(family, m, cov, x)
    dw = superpotential_derivative(family, m, cov, x, method) if method != "analytic" else _w_and_dw(family, m, cov, x)[1]
    return w * w - cov.sign * dw + float(eigenvalue(family, m))


def potential(family: FamilySpec, m: int, cov: ChangeOfVariable, grid, method: str = "analytic") -> PotentialProfile:
    """V_m = W_m^2 - sign dW_m/dx + lambda_m sampled on an interior grid."""
    grid = np.asarray(grid, dtype=float)
    _require_interior(cov, grid)
    with np.errstate(all="ignore"):
        values = _potential_values(family, m, cov, grid, method)
    flagged = [int(i) for i in np.flatnonzero(~np.isfinite(values))]

    def func(x):
        with np.errstate(all="ignore"):
            return _potential_values(family, m, cov, np.asarray(x, dtype=float))

    return PotentialProfile(m, grid, values, eigenvalue(family, m), cov.sign, func, flagged)


def partner_potential(family: FamilySpec, m: int, cov: ChangeOfVariable, grid, method: str = "analytic") -> np.ndarray:
    """V_(m+1) from the partner line: W_m^2 + sign dW_m/dx + lambda_m."""
    grid = np.asarray(grid, dtype=float)
    _require_interior(cov, grid)
    w, dw = _w_and_dw(family, m, cov, grid)
    if method != "analytic":
        dw = superpotential_derivative(family, m, cov, grid, method)
    return w * w + cov.sign * dw + float(eigenvalue(family, m))


def riccati_mismatch(family: FamilySpec, m: int, cov: ChangeOfVariable, grid, method: str = "analytic") -> float:
    """max |V_(m+1) (partner line) - V_(m+1) (own Riccati line)|, relative to max(1, |V|)."""
    partner = partner_potential(family, m, cov, grid, method)
    own = potential(family, m + 1, cov, grid, method).values
    return float(np.max(np.abs(partner - own) / np.maximum(1.0, np.abs(own))))


def poschl_teller_potential(mu, eta, x):
    """V_0 = [mu(mu-1)/cos^2(x/2) + eta(eta-1)/sin^2(x/2)]/4 - (mu+eta)^2/4."""
    mu, eta = float(mu), float(eta)
    x = np.asarray(x, dtype=float)
    return 0.25 * (mu * (mu - 1) / np.cos(x / 2) ** 2 + eta * (eta - 1) / np.sin(x / 2) ** 2) - (mu + eta) ** 2 / 4


def poschl_teller_superpotential(mu, eta, x):
    """W_0 = [mu cot(x/2) - eta tan(x/2)]/2."""
    mu, eta = float(mu), float(eta)
    x = np.asarray(x, dtype=float)
    return 0.5 * (mu / np.tan(x / 2) - eta * np.tan(x / 2))


def poschl_teller_family(mu, eta) -> FamilySpec:
    """Jacobi family with alpha = mu - 1/2, beta = eta - 1/2."""
    from .families import make_family
    from .polynomial import as_rational

    half = Fraction(1, 2)
    return make_family("jacobi", alpha=as_rational(mu) - half, beta=as_rational(eta) - half)


# wavefunctions


@dataclass
class Wavefunction:
    l: int
    m: int
    grid: np.ndarray
    values: np.ndarray
    scale: float = 1.0  # values = scale * raw Psi
    residual: float = math.nan


def _raw_psi(family: FamilySpec, l: int, m: int, cov: ChangeOfVariable, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    s, sg, logw = _sigma_and_log_weight(family, cov, x)
    part = classical_polynomial(family, l).derivative(m)
    with np.errstate(divide="ignore", invalid="ignore"):
        envelope = np.exp(0.5 * logw + (m / 2 + 0.25) * np.log(sg))
    return envelope * part.evaluate_float(s)


def _schrodinger_residual(grid, psi, v, energy) -> float:
    h = np.diff(grid)
    if not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
        return math.nan
    d2 = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / h[0] ** 2
    r = -d2 + (v[1:-1] - energy) * psi[1:-1]
    r = r[np.isfinite(r)]
    return float(np.max(np.abs(r))) if r.size else math.nan


def wavefunction(family: FamilySpec, l: int, m: int, cov: ChangeOfVariable, grid, normalize: bool = True) -> Wavefunction:
    """Psi_{l,m} = sqrt(kappa rho) kappa^m Phi_l^(m) sampled on an interior grid.

    Normalized to unit L2 norm by composite Simpson on the grid, sign fixed
    positive at the first interior maximum of |Psi|.  The residual of
    -Psi'' + (V_m - lambda_l) Psi by second differences is attached.
    """
    if not 0 <= m <= l:
        raise DomainError(f"need 0 <= m <= l, got l={l}, m={m}")
    grid = np.asarray(grid, dtype=float)
    _require_interior(cov, grid)
    psi = _raw_psi(family, l, m, cov, grid)
    scale = 1.0
    if normalize:
        scale = 1.0 / math.sqrt(simpson(psi * psi, x=grid))
        a = np.abs(psi)
        peaks = np.flatnonzero((a[1:-1] >= a[:-2]) & (a[1:-1] >= a[2:])) + 1
        if peaks.size and psi[peaks[0]] < 0:
            scale = -scale
    values = scale * psi
    v = potential(family, m, cov, grid).values
    res = _schrodinger_residual(grid, values, v, float(eigenvalue(family, l)))
    return Wavefunction(l, m, grid, values, scale, res)


_STENCIL8 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def _fd8(f, x, h):
    offsets = np.arange(-4, 5)
    return sum(c * f(x + k * h) for k, c in zip(offsets, _STENCIL8) if c) / h


def ladder_wavefunction(family: FamilySpec, l: int, m: int, cov: ChangeOfVariable, grid, h: float = 0.02) -> Wavefunction:
    """Psi_{l,m} built numerically from Psi_{l,l} by the operator chain

        Psi_{l,k} = (-sign d/dx + W_k) Psi_{l,k+1} / (lambda_l - lambda_k),

    with the x-derivatives taken by nested 8th-order central differences of
    step h.  Returned unnormalized, on the same footing as
    ``wavefunction(..., normalize=False)``.
    """
    if not 0 <= m <= l:
        raise DomainError(f"need 0 <= m <= l, got l={l}, m={m}")
    grid = np.asarray(grid, dtype=float)
    _require_interior(cov, grid)
    lam_l = eigenvalue(family, l)
    fn = lambda x: _raw_psi(family, l, l, cov, x)  # noqa: E731
    for k in range(l - 1, m - 1, -1):
        fn = _lowering_step(family, k, cov, fn, float(lam_l - eigenvalue(family, k)), h)
    return Wavefunction(l, m, grid, fn(grid))


def _lowering_step(family, k, cov, inner, gap, h):
    def step(x):
        x = np.asarray(x, dtype=float)
        w, _ = _w_and_dw(family, k, cov, x)
        return (-cov.sign * _fd8(inner, x, h) + w * inner(x)) / gap
    return step


# Numerov shooting oracle


GAUSS_LOG_CUTOFF = 144.0


def auto_clip(cov: ChangeOfVariable, v_func, e_max: float = 0.0) -> tuple[float, float]:
    """Integration interval for the Numerov oracle.

    Finite endpoints are kept (a Dirichlet wall sits on a singular endpoint).
    Infinite ones are cut where V exceeds max(50|E_max|, 1e3), or where the
    weight has decayed by exp(-144), whichever comes first.
    """
    threshold = max(50.0 * abs(e_max), 1e3)
    lo, hi = cov.x_domain
    out = []
    for end, direction in ((lo, -1.0), (hi, 1.0)):
        if math.isfinite(end):
            out.append(end)
            continue
        other = hi if direction < 0 else lo
        # start clear of a singular finite end and walk outward; only a
        # rising wall counts, not the decaying tail of the other end's barrier
        x = (other if math.isfinite(other) else 0.0) + direction * 1.0
        step = 0.01
        v_prev = math.inf
        while abs(x) < 1e4:
            with np.errstate(all="ignore"):
                vx = float(v_func(np.array([x]))[0])
                logw = float(_sigma_and_log_weight(cov.family, cov, np.array([x]))[2][0])
            if (np.isfinite(vx) and vx > threshold and vx > v_prev) or -logw >= GAUSS_LOG_CUTOFF:
                break
            v_prev = vx
            x += direction * step
        out.append(x)
    return out[0], out[1]


@njit(cache=True)
def _numerov_kernel(f, h):
    n = f.shape[0] - 1
    psi_prev, psi = 0.0, h
    nodes = 0
    for i in range(1, n - 1):
        nxt = ((12.0 - 10.0 * f[i]) * psi - f[i - 1] * psi_prev) / f[i + 1]
        if (nxt < 0.0) != (psi < 0.0) and nxt != 0.0:
            nodes += 1
        psi_prev, psi = psi, nxt
        if abs(psi) > 1e200:
            psi_prev *= 1e-200
            psi *= 1e-200
    # psi_n = 0 is equivalent to this combination vanishing, whatever f_n is
    mismatch = (12.0 - 10.0 * f[n - 1]) * psi - f[n - 2] * psi_prev
    if (mismatch < 0.0) != (psi < 0.0) and mismatch != 0.0:
        nodes += 1
    return mismatch, nodes


def _numerov_shoot(v: np.ndarray, h: float, energy: float):
    """Integrate from the left wall; returns (mismatch at right wall, node count)."""
    c = h * h / 12.0
    f = np.where(np.isfinite(v), 1.0 + c * (energy - v), 1.0)
    f[0] = 1.0  # psi_0 = 0 removes the wall term
    return _numerov_kernel(f, h)


def _solve_levels(v: np.ndarray, h: float, count: int, hints=None) -> list[float]:
    from scipy.optimize import brentq

    floor = float(np.min(v[np.isfinite(v)]))
    levels = []
    for k in range(count):
        bracket = None
        if hints is not None and math.isfinite(hints[k]):
            for delta in (1e-5, 1e-4, 1e-3):
                a, b = hints[k] - delta * max(1.0, abs(hints[k])), hints[k] + delta * max(1.0, abs(hints[k]))
                if _numerov_shoot(v, h, a)[1] == k and _numerov_shoot(v, h, b)[1] == k + 1:
                    bracket = (a, b)
                    break
        if bracket is None:
            prev = [e for e in levels if math.isfinite(e)]
            bracket = _bisect_nodes(v, h, k, prev[-1] if prev else floor, floor)
        if bracket is None:
            levels.append(math.nan)
            continue
        a, b = bracket
        try:
            levels.append(brentq(lambda e: _numerov_shoot(v, h, e)[0], a, b, xtol=1e-13, rtol=1e-14, maxiter=200))
        except ValueError:
            levels.append(math.nan)
    return levels


def _bisect_nodes(v, h, k, start, floor):
    """Bracket [lo, hi] with exactly k nodes at lo and k+1 at hi."""
    lo = start
    n_lo = _numerov_shoot(v, h, lo)[1]
    if n_lo > k:
        lo = floor
        n_lo = _numerov_shoot(v, h, lo)[1]
        if n_lo > k:
            return None
    width = max(1.0, 1e-3 * abs(lo))
    hi = lo + width
    for _ in range(80):
        n_hi = _numerov_shoot(v, h, hi)[1]
        if n_hi > k:
            break
        lo, n_lo = hi, n_hi
        width *= 2.0
        hi = lo + width
    else:
        return None
    for _ in range(200):
        if n_lo == k and n_hi == k + 1:
            return lo, hi
        if hi - lo < 1e-13 * max(1.0, abs(hi)):
            return None
        mid = 0.5 * (lo + hi)
        n_mid = _numerov_shoot(v, h, mid)[1]
        if n_mid > k:
            hi, n_hi = mid, n_mid
        else:
            lo, n_lo = mid, n_mid
    return None


def numerov_eigenvalues(profile: PotentialProfile, count: int, domain_clip: tuple[float, float] | None = None,
                        n_grid: int = 8000, tol: float = 1e-7, max_refinements: int = 4,
                        cov: ChangeOfVariable | None = None) -> list[float]:
    """Lowest ``count`` Dirichlet eigenvalues of -psi'' + V psi by Numerov shooting.

    Each level is bracketed by node-count bisection and polished by Brent's
    method on the right-wall mismatch.  The grid is doubled until successive
    estimates agree within ``tol``.  Unresolved levels come back as NaN.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    if profile.func is None:
        raise DomainError("the profile carries no potential function to resample")
    if domain_clip is None:
        if cov is None:
            domain_clip = (float(profile.grid[0]), float(profile.grid[-1]))
        else:
            domain_clip = auto_clip(cov, profile.func)
    lo, hi = domain_clip
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"invalid clip interval {domain_clip}")

    def sample(n):
        x = np.linspace(lo, hi, n + 1)
        with np.errstate(all="ignore"):
            v = np.asarray(profile.func(x), dtype=float)
        return v, (hi - lo) / n

    n = n_grid
    v, h = sample(n)
    levels = _solve_levels(v, h, count)
    for _ in range(max_refinements):
        n *= 2
        v, h = sample(n)
        finer = _solve_levels(v, h, count, hints=levels)
        diff = max((abs(a - b) for a, b in zip(levels, finer)), default=0.0)
        levels = finer
        if diff < tol:
            break
    return levels
