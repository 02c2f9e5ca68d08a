"""Leggett-Garg statistics of a spin-s system in the completely mixed state.

Sequential projective S_z measurements separated by rotations about y.  The
API takes dimensionless angles theta = omega * dt only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, MarginalInconsistencyError
from .qentropy import (
    JointTable,
    ProbVec,
    _check_q,
    _is_shannon,
    entropy,
    joint_entropy,
    max_entropy,
)
from .wigner import SpinLabel, as_spin, transition_matrix

MARGINAL_TOL = 1e-8
DEFAULT_GRID_STEPS = 512
ARGMAX_XTOL = 1e-6


@dataclass(frozen=True)
class LGScenario:
    """n measurements of a spin-s system; ``gaps[j]`` is the angle between j and j+1."""

    n: int
    spin: SpinLabel
    gaps: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "spin", as_spin(self.spin))
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"need at least 3 measurements, got n={self.n!r}")
        gaps = tuple(float(g) for g in self.gaps)
        if len(gaps) != self.n - 1:
            raise DomainError(f"n={self.n} measurements need {self.n - 1} gaps, got {len(gaps)}")
        if any(not math.isfinite(g) or g < 0 for g in gaps):
            raise DomainError(f"gaps must be finite and non-negative: {gaps}")
        object.__setattr__(self, "gaps", gaps)

    @classmethod
    def equidistant(cls, spin, n: int, theta: float) -> "LGScenario":
        """Total angle ``theta`` split into n - 1 equal steps."""
        return cls(n=n, spin=spin, gaps=(theta / (n - 1),) * (n - 1))

    @property
    def theta(self) -> float:
        return math.fsum(self.gaps)


def uniform_marginal(spin) -> ProbVec:
    spin = as_spin(spin)
    return ProbVec(np.full(spin.dim, 1.0 / spin.dim), labels=tuple(spin.magnetic_numbers()))


def pair_joint(spin, theta: float) -> JointTable:
    """p(m, m') for outcomes m then m' separated by a rotation ``theta``."""
    spin = as_spin(spin)
    return JointTable(transition_matrix(spin, theta).T / spin.dim)


def f_q(spin, theta: float, q: float) -> float:
    """Conditional entropy of one outcome given the previous, at angle ``theta``."""
    spin = as_spin(spin)
    q = _check_q(q)
    probs = transition_matrix(spin, theta)
    d = spin.dim
    if _is_shannon(q):
        nz = probs[probs > 0]
        return float(-np.sum(nz * np.log(nz)) / d)
    per_input = 1.0 - np.sum(probs**q, axis=0)
    return float(d ** (-q) / (q - 1.0) * per_input.sum())


def c_q(scenario: LGScenario, q: float) -> float:
    """Characteristic quantity; positive values witness a violation."""
    ends = f_q(scenario.spin, scenario.theta, q)
    steps = math.fsum(f_q(scenario.spin, g, q) for g in scenario.gaps)
    return ends - steps


def tilde_c_q(scenario: LGScenario, q: float) -> float:
    return c_q(scenario, q) / max_entropy(scenario.spin.dim, q)


def _check_consistent(a: np.ndarray, b: np.ndarray, what: str):
    if a.shape != b.shape or np.max(np.abs(a - b)) > MARGINAL_TOL:
        raise MarginalInconsistencyError(f"inconsistent marginals: {what}")


def generic_c_q(pair_tables: Sequence[JointTable], endpoint_table: JointTable, q: float) -> float:
    """C_q from joint-entropy form on arbitrary pair statistics.

    ``pair_tables[j]`` is the table of (X_{j+1}, X_{j+2}) with rows the
    earlier variable; ``endpoint_table`` is (X_1, X_n).
    """
    q = _check_q(q)
    if len(pair_tables) < 2:
        raise DomainError("need at least two consecutive pair tables")
    for j in range(len(pair_tables) - 1):
        _check_consistent(
            pair_tables[j].probs.sum(axis=0),
            pair_tables[j + 1].probs.sum(axis=1),
            f"pair {j} (X_{j + 1},X_{j + 2}) vs pair {j + 1} (X_{j + 2},X_{j + 3}) on X_{j + 2}",
        )
    n = len(pair_tables) + 1
    _check_consistent(
        endpoint_table.probs.sum(axis=1), pair_tables[0].probs.sum(axis=1),
        "endpoint (X_1,X_n) vs pair 0 on X_1",
    )
    _check_consistent(
        endpoint_table.probs.sum(axis=0), pair_tables[-1].probs.sum(axis=0),
        f"endpoint (X_1,X_n) vs pair {n - 2} on X_{n}",
    )
    pairs = math.fsum(joint_entropy(t, q) for t in pair_tables)
    singles = math.fsum(entropy(t.marginal_y(), q) for t in pair_tables[:-1])
    return joint_entropy(endpoint_table, q) - pairs + singles


def default_theta_grid(steps: int = DEFAULT_GRID_STEPS) -> np.ndarray:
    """``steps`` uniform points on (0, pi]."""
    return math.pi * np.arange(1, steps + 1) / steps


def tilde_c_curve(spin, n: int, q: float, thetas) -> np.ndarray:
    return np.array([tilde_c_q(LGScenario.equidistant(spin, n, t), q) for t in thetas])


@dataclass(frozen=True)
class CurveSummary:
    q: float
    argmax: float
    peak: float
    window: tuple[float, float] | None


def summarize_curve(spin, n: int, q: float, thetas=None) -> CurveSummary:
    """Locate the maximum of tilde-C_q and the positivity window around it.

    Grid scan first, then bounded refinement of the maximum and root
    bracketing of the window edges.
    """
    thetas = default_theta_grid() if thetas is None else np.asarray(thetas, dtype=float)

    def curve(t):
        return tilde_c_q(LGScenario.equidistant(spin, n, t), q)

    values = tilde_c_curve(spin, n, q, thetas)
    i = int(np.argmax(values))
    lo = thetas[max(i - 1, 0)]
    hi = thetas[min(i + 1, len(thetas) - 1)]
    if hi > lo:
        res = minimize_scalar(lambda t: -curve(t), bounds=(lo, hi), method="bounded",
                              options={"xatol": ARGMAX_XTOL})
        argmax, peak = float(res.x), float(-res.fun)
        if peak < values[i]:
            argmax, peak = float(thetas[i]), float(values[i])
    else:
        argmax, peak = float(thetas[i]), float(values[i])
    if peak <= 0:
        return CurveSummary(q, argmax, peak, None)

    left = i
    while left > 0 and values[left - 1] > 0:
        left -= 1
    right = i
    while right < len(thetas) - 1 and values[right + 1] > 0:
        right += 1
    lower = float(thetas[left]) if left == 0 else brentq(curve, thetas[left - 1], thetas[left])
    upper = (float(thetas[right]) if right == len(thetas) - 1
             else brentq(curve, thetas[right], thetas[right + 1]))
    return CurveSummary(q, argmax, peak, (lower, upper))
