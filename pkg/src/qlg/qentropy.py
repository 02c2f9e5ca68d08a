"""Tsallis q-entropies of discrete distributions.

All entropies are in nats.  Evaluation for ``|q - 1| <= Q_ONE_TOL`` uses the
Shannon formulas; elsewhere the deformed sums are written through ``expm1``
so the two regimes join smoothly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .errors import DomainError, ValidationError

Q_ONE_TOL = 1e-9
NORM_TOL = 1e-9
CLAMP_TOL = 1e-15

NO_CLICK = "no-click"


def _check_q(q: float) -> float:
    q = float(q)
    if not q > 0 or not math.isfinite(q):
        raise DomainError(f"entropic index must be positive and finite, got {q!r}")
    return q


def _is_shannon(q: float) -> bool:
    return abs(q - 1.0) <= Q_ONE_TOL


def _validated(probs, ndim: int | None = None) -> np.ndarray:
    arr = np.array(probs, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise ValidationError(f"expected a {ndim}-d array of probabilities, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError("empty distribution")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("probabilities must be finite")
    if np.any(arr < -CLAMP_TOL):
        raise ValidationError(f"negative probability {arr.min()!r}")
    arr[arr < 0] = 0.0
    total = arr.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise ValidationError(f"probabilities sum to {total!r}, not 1")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ProbVec:
    """A finite distribution with optional outcome labels."""

    probs: np.ndarray
    labels: tuple[Hashable, ...] = field(default=())

    def __post_init__(self):
        arr = _validated(self.probs, ndim=1)
        object.__setattr__(self, "probs", arr)
        labels = tuple(self.labels) if len(self.labels) else tuple(range(arr.size))
        if len(labels) != arr.size:
            raise ValidationError(f"{len(labels)} labels for {arr.size} outcomes")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.probs.size

    @classmethod
    def uniform(cls, d: int) -> "ProbVec":
        if d < 1:
            raise DomainError("need at least one outcome")
        return cls(np.full(d, 1.0 / d))


@dataclass(frozen=True)
class JointTable:
    """Joint distribution p(x, y); rows index x, columns index y."""

    probs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "probs", _validated(self.probs, ndim=2))

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def marginal_x(self) -> ProbVec:
        return ProbVec(self.probs.sum(axis=1))

    def marginal_y(self) -> ProbVec:
        return ProbVec(self.probs.sum(axis=0))

    def transpose(self) -> "JointTable":
        return JointTable(self.probs.T)

    @classmethod
    def product(cls, px, py) -> "JointTable":
        px = px.probs if isinstance(px, ProbVec) else _validated(px, ndim=1)
        py = py.probs if isinstance(py, ProbVec) else _validated(py, ndim=1)
        return cls(np.outer(px, py))


def _as_probs(p) -> np.ndarray:
    if isinstance(p, (ProbVec, JointTable)):
        return p.probs
    return _validated(p)


def _tsallis(flat: np.ndarray, q: float) -> float:
    """Entropy of already-validated probabilities; zero entries are dropped."""
    p = flat[flat > 0]
    if _is_shannon(q):
        return float(-np.sum(p * np.log(p)))
    # (sum p^q - 1)/(1 - q) == sum p * expm1((q-1) ln p) / (1 - q)
    return float(np.sum(p * np.expm1((q - 1.0) * np.log(p))) / (1.0 - q))


def q_log(xi: float, q: float) -> float:
    """Deformed logarithm (xi**(1-q) - 1)/(1-q); natural log at q = 1."""
    q = _check_q(q)
    xi = float(xi)
    if not xi > 0:
        raise DomainError(f"q-logarithm needs a positive argument, got {xi!r}")
    if _is_shannon(q):
        return math.log(xi)
    return math.expm1((1.0 - q) * math.log(xi)) / (1.0 - q)


def entropy(p, q: float) -> float:
    """Tsallis entropy of a distribution (ProbVec, JointTable or array)."""
    q = _check_q(q)
    return _tsallis(_as_probs(p).ravel(), q)


def max_entropy(d: int, q: float) -> float:
    """Entropy of the uniform distribution on ``d`` points, ln_q(d)."""
    if int(d) != d or d < 1:
        raise DomainError(f"number of outcomes must be a positive integer, got {d!r}")
    return q_log(d, q)


def binary_entropy(eta: float, q: float) -> float:
    q = _check_q(q)
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"binary entropy argument must lie in [0, 1], got {eta!r}")
    return _tsallis(np.array([eta, 1.0 - eta]), q)


def joint_entropy(j: JointTable, q: float) -> float:
    if not isinstance(j, JointTable):
        j = JointTable(j)
    return entropy(j, q)


def conditional_entropy(j: JointTable, q: float, given: str = "y") -> float:
    """Conditional q-entropy sum_y p(y)^q H_q(X|y).

    ``given="y"`` conditions the row variable on the column variable,
    ``given="x"`` the reverse.  Conditioning outcomes of zero probability
    are skipped.
    """
    q = _check_q(q)
    if not isinstance(j, JointTable):
        j = JointTable(j)
    if given == "y":
        table = j.probs
    elif given == "x":
        table = j.probs.T
    else:
        raise ValueError(f"given must be 'x' or 'y', got {given!r}")
    total = 0.0
    for col in table.T:
        py = col.sum()
        if py <= 0:
            continue
        weight = py if _is_shannon(q) else py**q
        total += weight * _tsallis(col / py, q)
    return float(total)


def eta_alter_single(p: ProbVec, eta: float) -> ProbVec:
    """Append a no-click outcome of mass 1 - eta and scale the rest by eta."""
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise DomainError(f"efficiency must lie in [0, 1], got {eta!r}")
    if not isinstance(p, ProbVec):
        p = ProbVec(p)
    probs = np.append(eta * p.probs, 1.0 - eta)
    return ProbVec(probs, labels=p.labels + (NO_CLICK,))
