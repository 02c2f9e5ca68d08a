"""Detection inefficiency: independent no-click events with efficiency eta.

Every altered distribution or table carries the no-click outcome as its
last index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lgmodel import LGScenario, c_q, pair_joint
from .qentropy import (
    JointTable,
    ProbVec,
    _check_q,
    binary_entropy,
    entropy,
    eta_alter_single,
    joint_entropy,
    max_entropy,
)

DEFAULT_BISECT_TOL = 1e-6
THRESHOLD_GRID_STEP = 1e-3


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta!r}")
    return eta


def eta_alter_pair(j: JointTable, eta: float) -> JointTable:
    """(d+1) x (d+1) table of a pair of lossy observations."""
    eta = _check_eta(eta)
    if not isinstance(j, JointTable):
        j = JointTable(j)
    rows, cols = j.shape
    out = np.zeros((rows + 1, cols + 1))
    out[:rows, :cols] = eta * eta * j.probs
    out[:rows, cols] = eta * (1 - eta) * j.probs.sum(axis=1)
    out[rows, :cols] = eta * (1 - eta) * j.probs.sum(axis=0)
    out[rows, cols] = (1 - eta) ** 2
    return JointTable(out)


def h_eta_single(p: ProbVec, eta: float, q: float) -> float:
    """Entropy of the altered single distribution, via the closed form."""
    eta, q = _check_eta(eta), _check_q(q)
    return eta**q * entropy(p, q) + binary_entropy(eta, q)


def h_eta_pair(j: JointTable, eta: float, q: float) -> float:
    """Entropy of the altered pair table, via the closed form."""
    eta, q = _check_eta(eta), _check_q(q)
    if not isinstance(j, JointTable):
        j = JointTable(j)
    a, b = eta**q, (1 - eta) ** q
    return (
        a * a * joint_entropy(j, q)
        + a * b * (entropy(j.marginal_x(), q) + entropy(j.marginal_y(), q))
        + (a + b + 1) * binary_entropy(eta, q)
    )


def _scenario_tables(scenario: LGScenario):
    pairs = [pair_joint(scenario.spin, g) for g in scenario.gaps]
    ends = pair_joint(scenario.spin, scenario.theta)
    return pairs, ends


def c_q_eta(scenario: LGScenario, eta: float, q: float) -> float:
    """Observable characteristic quantity built from explicitly altered tables."""
    eta, q = _check_eta(eta), _check_q(q)
    pairs, ends = _scenario_tables(scenario)
    value = joint_entropy(eta_alter_pair(ends, eta), q)
    value -= math.fsum(joint_entropy(eta_alter_pair(t, eta), q) for t in pairs)
    value += math.fsum(entropy(eta_alter_single(t.marginal_y(), eta), q) for t in pairs[:-1])
    return value


def delta_from_marginals(interior_entropies, eta: float, q: float) -> float:
    """Additional term for arbitrary statistics, given H_q(X_k) for k = 2..n-1."""
    eta, q = _check_eta(eta), _check_q(q)
    interior = list(interior_entropies)
    a, b = eta**q, (1 - eta) ** q
    return a * (a + 2 * b - 1) * math.fsum(interior) + len(interior) * (a + b) * binary_entropy(eta, q)


def delta_q(scenario: LGScenario, eta: float, q: float) -> float:
    """Additional term for the spin model, where every H_q(X_k) is ln_q(2s+1)."""
    eta, q = _check_eta(eta), _check_q(q)
    a, b = eta**q, (1 - eta) ** q
    scale = max_entropy(scenario.spin.dim, q)
    return (scenario.n - 2) * (a * (a + 2 * b - 1) * scale + (a + b) * binary_entropy(eta, q))


def c_q_eta_closed(scenario: LGScenario, eta: float, q: float) -> float:
    eta = _check_eta(eta)
    return eta ** (2 * q) * c_q(scenario, q) - delta_q(scenario, eta, q)


def _violating_c_q(scenario: LGScenario, q: float) -> float:
    value = c_q(scenario, q)
    if not value > 0:
        raise DomainError(f"scenario does not violate the inequality at q={q} (C_q = {value:.6g})")
    return value


def ratio(scenario: LGScenario, eta: float, q: float) -> float:
    """|Delta_q(eta)| relative to the ideal violation term eta^{2q} C_q."""
    eta, q = _check_eta(eta), _check_q(q)
    if eta == 0:
        raise DomainError("ratio is undefined at eta = 0")
    ideal = _violating_c_q(scenario, q)
    return abs(delta_q(scenario, eta, q)) / (eta ** (2 * q) * ideal)


def critical_eta(scenario: LGScenario, q: float, tol: float = DEFAULT_BISECT_TOL) -> float:
    """Smallest efficiency above which the observable quantity stays positive.

    Scans down from eta = 1 on a grid to find the first non-positive point,
    then bisects the bracketing cell.  Positivity is only guaranteed on the
    scan grid above the result, since monotonicity in eta is not assumed.
    """
    q = _check_q(q)
    c = _violating_c_q(scenario, q)
    scale = max_entropy(scenario.spin.dim, q)
    n = scenario.n

    def observed(eta):
        a, b = eta**q, (1 - eta) ** q
        delta = (n - 2) * (a * (a + 2 * b - 1) * scale + (a + b) * binary_entropy(eta, q))
        return eta ** (2 * q) * c - delta

    steps = int(round(1.0 / THRESHOLD_GRID_STEP))
    hi = 1.0
    lo = None
    for k in range(steps - 1, -1, -1):
        eta = k / steps
        if observed(eta) <= 0:
            lo = eta
            break
        hi = eta
    if lo is None:
        return 0.0
    if hi == 1.0 and observed(1.0 - tol) <= 0:
        return 1.0
    while hi - lo > tol / 4:
        mid = 0.5 * (lo + hi)
        if observed(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class LGEfficiencyReport:
    theta: float
    n: int
    twice_s: int
    q: float
    eta: float
    c_q: float
    tilde_c_q: float
    c_q_eta: float
    delta_q: float
    ratio: float | None


def report(scenario: LGScenario, eta: float, q: float) -> LGEfficiencyReport:
    ideal = c_q(scenario, q)
    delta = delta_q(scenario, eta, q)
    return LGEfficiencyReport(
        theta=scenario.theta,
        n=scenario.n,
        twice_s=scenario.spin.twice_s,
        q=q,
        eta=eta,
        c_q=ideal,
        tilde_c_q=ideal / max_entropy(scenario.spin.dim, q),
        c_q_eta=eta ** (2 * q) * ideal - delta,
        delta_q=delta,
        ratio=ratio(scenario, eta, q) if ideal > 0 and eta > 0 else None,
    )
