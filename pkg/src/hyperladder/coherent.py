"""Coherent states of the annihilation operator a_m.

With e_n = lambda_(m+n) - lambda_m and eps_n = e_1 ... e_n,

    |z> = N(|z|^2)^-1 sum_n z^n / sqrt(eps_n) |n>,   N^2 = sum_n |z|^(2n) / eps_n,

and a_m |z> = z |z>.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .families import FamilySpec
from .hilbert import BasisVector, annihilate, level_gap

MAX_LEVELS = 100_000


def epsilon_sequence(family: FamilySpec, m: int, n_max: int) -> list[Fraction]:
    """[eps_0, ..., eps_n_max] exactly."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    out = [Fraction(1)]
    for n in range(1, n_max + 1):
        out.append(out[-1] * level_gap(family, m, n))
    return out


@dataclass(frozen=True)
class RadiusEstimate:
    root_value: float  # eps_n^(1/n) at n = n_max
    ratio_value: float  # e_(n_max+1), the ratio-test limit proxy for |z|^2
    diverging: bool

    @property
    def radius(self) -> float:
        return math.inf if self.diverging else self.root_value


def _log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def radius_estimate(family: FamilySpec, m: int, n_max: int = 50) -> RadiusEstimate:
    """Growth diagnostics for eps_n.

    Reports the root-test value eps_n^(1/n) and the ratio e_(n+1); the
    sequence counts as diverging when the root values keep increasing over
    the second half of the window and the ratio has outgrown them.
    """
    if n_max < 8:
        raise DomainError("n_max must be >= 8")
    eps = epsilon_sequence(family, m, n_max + 1)
    roots = [math.exp(_log_fraction(eps[n]) / n) for n in range(1, n_max + 1)]
    tail = roots[n_max // 2 - 1 :]
    increasing = all(b > a for a, b in zip(tail, tail[1:]))
    ratio = float(level_gap(family, m, n_max + 1))
    return RadiusEstimate(roots[-1], ratio, increasing and ratio > roots[-1])


@dataclass(frozen=True)
class CoherentState:
    family: FamilySpec
    m: int
    z: complex
    coeffs: np.ndarray
    normalization_sq: float  # N(|z|^2)^2 summed over the kept levels
    tail_bound: float

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def vector(self) -> BasisVector:
        return BasisVector(self.family, self.m, self.coeffs)


def coherent_state(family: FamilySpec, m: int, z: complex, tol: float = 1e-12) -> CoherentState:
    """Build |z> truncated adaptively.

    Levels are added until the geometric bound on the neglected part of
    N^2 (relative) is below ``tol`` and the amplitude in the last kept
    level times |z|, which is exactly what a_m|z> - z|z> leaves behind, is
    below ``tol`` too.
    """
    if tol <= 0:
        raise DomainError("tol must be > 0")
    z = complex(z)
    if not cmath.isfinite(z):
        raise DomainError(f"z must be finite, got {z}")
    r2 = abs(z) ** 2
    terms = [1.0 + 0j]  # z^n / sqrt(eps_n)
    total = 1.0
    tail = 0.0
    n = 0
    while True:
        if r2 == 0.0:
            break
        n += 1
        if n > MAX_LEVELS:
            raise DomainError(f"|z| = {abs(z)} needs more than {MAX_LEVELS} levels")
        gap = float(level_gap(family, m, n))
        terms.append(terms[-1] * z / math.sqrt(gap))
        w = abs(terms[-1]) ** 2
        total += w
        next_ratio = r2 / float(level_gap(family, m, n + 1))
        if next_ratio < 1.0:
            tail = w * next_ratio / (1.0 - next_ratio) / total
            if tail < tol and abs(z) * abs(terms[-1]) / math.sqrt(total) < tol:
                break
    coeffs = np.array(terms) / math.sqrt(total)
    return CoherentState(family, m, z, coeffs, total, tail)


def normalization_sq(state: CoherentState) -> float:
    return float(np.sum(np.abs(state.coeffs) ** 2))


def eigen_residual(state: CoherentState) -> float:
    """|| a_m|z> - z|z> || over the kept levels."""
    v = state.vector()
    return float(np.linalg.norm(annihilate(v).coeffs - state.z * v.coeffs))
