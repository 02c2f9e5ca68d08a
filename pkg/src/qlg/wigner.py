"""Wigner small-d rotation matrices for integer and half-integer spin.

Matrices are indexed (m', m) with both indices running m = -s, ..., +s, and
follow the exp(-i theta S_y) convention, so d^(1/2)_{1/2,1/2} = cos(theta/2)
and d^(1/2)_{1/2,-1/2} = -sin(theta/2).

Entries come from Wigner's explicit factorial sum.  The alternating sum loses
roughly ``twice_s * log10(2)`` digits near theta = pi/2, so spins above
``FLOAT_MAX_TWICE_S`` are evaluated with mpmath at raised working precision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import CapabilityError, DomainError

MAX_TWICE_S = 200
FLOAT_MAX_TWICE_S = 24

_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True, order=True)
class SpinLabel:
    """Spin quantum number stored as the integer 2s."""

    twice_s: int

    def __post_init__(self):
        if isinstance(self.twice_s, bool) or int(self.twice_s) != self.twice_s or self.twice_s < 0:
            raise DomainError(f"twice_s must be a non-negative integer, got {self.twice_s!r}")
        object.__setattr__(self, "twice_s", int(self.twice_s))

    @classmethod
    def of(cls, s) -> "SpinLabel":
        """Build from s itself, e.g. ``SpinLabel.of(0.5)`` or ``SpinLabel.of("3/2")``."""
        twice = Fraction(s).limit_denominator(2) * 2
        if twice.denominator != 1 or Fraction(s) * 2 != twice:
            raise DomainError(f"spin must be a multiple of 1/2, got {s!r}")
        return cls(int(twice))

    @property
    def s(self) -> Fraction:
        return Fraction(self.twice_s, 2)

    @property
    def dim(self) -> int:
        return self.twice_s + 1

    def magnetic_numbers(self) -> list[Fraction]:
        return [Fraction(2 * k - self.twice_s, 2) for k in range(self.dim)]

    def __str__(self) -> str:
        return str(self.s)


def as_spin(spin) -> SpinLabel:
    if isinstance(spin, SpinLabel):
        return spin
    return SpinLabel.of(spin)


@dataclass(frozen=True)
class WignerMatrix:
    entries: np.ndarray
    theta: float
    spin: SpinLabel


_lf_lock = threading.Lock()
_log_factorials: np.ndarray | None = None


def _log_factorial_table() -> np.ndarray:
    global _log_factorials
    if _log_factorials is None:
        with _lf_lock:
            if _log_factorials is None:
                table = np.array([math.lgamma(k + 1) for k in range(MAX_TWICE_S + 2)])
                table.setflags(write=False)
                _log_factorials = table
    return _log_factorials


def _sum_terms(J: int):
    """Index arrays (a', a, k) of the non-vanishing terms with a = s + m."""
    a_p, a, k = np.meshgrid(np.arange(J + 1), np.arange(J + 1), np.arange(J + 1), indexing="ij")
    valid = (a - k >= 0) & (a_p - a + k >= 0) & (J - a_p - k >= 0)
    return a_p[valid], a[valid], k[valid]


@lru_cache(maxsize=64)
def _float_coefficients(J: int):
    lf = _log_factorial_table()
    a_p, a, k = _sum_terms(J)
    log_mag = (
        0.5 * (lf[a_p] + lf[J - a_p] + lf[a] + lf[J - a])
        - lf[a - k] - lf[k] - lf[a_p - a + k] - lf[J - a_p - k]
    )
    sign = np.where((a_p - a + k) % 2 == 0, 1.0, -1.0)
    coef = sign * np.exp(log_mag)
    cos_pow = J + a - a_p - 2 * k
    sin_pow = a_p - a + 2 * k
    flat = a_p * (J + 1) + a
    return flat, coef, cos_pow, sin_pow


def _float_matrix(J: int, theta: float) -> np.ndarray:
    flat, coef, cos_pow, sin_pow = _float_coefficients(J)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    terms = coef * np.power(c, cos_pow) * np.power(s, sin_pow)
    out = np.bincount(flat, weights=terms, minlength=(J + 1) ** 2)
    return out.reshape(J + 1, J + 1)


def _mp_matrix(J: int, theta: float) -> np.ndarray:
    a_p, a, k = _sum_terms(J)
    with mpmath.workdps(20 + int(math.ceil(J * math.log10(2))) + 5):
        half = mpmath.mpf(theta) / 2
        c, s = mpmath.cos(half), mpmath.sin(half)
        fac = [mpmath.factorial(i) for i in range(J + 1)]
        cpow = [c**i for i in range(2 * J + 1)]
        spow = [s**i for i in range(2 * J + 1)]
        acc = [[mpmath.mpf(0)] * (J + 1) for _ in range(J + 1)]
        for ap_i, a_i, k_i in zip(a_p.tolist(), a.tolist(), k.tolist()):
            term = cpow[J + a_i - ap_i - 2 * k_i] * spow[ap_i - a_i + 2 * k_i] / (
                fac[a_i - k_i] * fac[k_i] * fac[ap_i - a_i + k_i] * fac[J - ap_i - k_i]
            )
            if (ap_i - a_i + k_i) % 2:
                term = -term
            acc[ap_i][a_i] += term
        out = np.empty((J + 1, J + 1))
        for i in range(J + 1):
            for j in range(J + 1):
                norm = mpmath.sqrt(fac[i] * fac[J - i] * fac[j] * fac[J - j])
                out[i, j] = float(acc[i][j] * norm)
    return out


def reduce_angle(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise DomainError(f"rotation angle must be finite, got {theta!r}")
    return math.fmod(theta, _FOUR_PI)


def d_matrix(spin, theta: float) -> WignerMatrix:
    """Rotation matrix d^(s)(theta) about the y axis."""
    spin = as_spin(spin)
    J = spin.twice_s
    if J > MAX_TWICE_S:
        raise CapabilityError(f"2s = {J} exceeds the supported maximum {MAX_TWICE_S}")
    reduced = reduce_angle(theta)
    if J <= FLOAT_MAX_TWICE_S:
        entries = _float_matrix(J, reduced)
    else:
        entries = _mp_matrix(J, reduced)
    entries.setflags(write=False)
    return WignerMatrix(entries=entries, theta=float(theta), spin=spin)


def transition_matrix(spin, theta: float) -> np.ndarray:
    """p(m'|m) = |d_{m',m}(theta)|^2; column m is the distribution over m'."""
    d = d_matrix(spin, theta).entries
    return d * d
