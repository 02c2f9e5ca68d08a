"""Random macrorealist hidden-variable models and brute-force certification.

A model assigns to each hidden value lambda (probability rho[lambda]) an
independent response distribution P(x_j | lambda) at every measurement
time j.  For such models the characteristic quantity never exceeds zero when
q >= 1; ``certify`` evaluates it from the full joint distribution.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SizeBudgetError
from .lgmodel import generic_c_q
from .qentropy import JointTable, ProbVec, _check_q

MAX_JOINT_ENTRIES = 10**6
VERTEX_RATE = 0.1
CERTIFY_TOL = 1e-10


@dataclass(frozen=True)
class HiddenModel:
    rho: np.ndarray       # shape (L,)
    response: np.ndarray  # shape (L, n, d); response[l, j] is P(x_j | l)

    def __post_init__(self):
        rho = ProbVec(self.rho).probs
        response = np.array(self.response, dtype=float)
        if response.ndim != 3 or response.shape[0] != rho.size:
            raise DomainError(f"response must have shape (L, n, d) with L={rho.size}, got {response.shape}")
        for row in response.reshape(-1, response.shape[2]):
            ProbVec(row)
        response.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "response", response)

    @property
    def n(self) -> int:
        return self.response.shape[1]

    @property
    def d(self) -> int:
        return self.response.shape[2]

    @property
    def hidden_size(self) -> int:
        return self.rho.size


def _draw_row(rng: np.random.Generator, d: int) -> np.ndarray:
    if rng.random() < VERTEX_RATE:
        row = np.zeros(d)
        row[rng.integers(d)] = 1.0
        return row
    return rng.dirichlet(np.ones(d))


def sample_model(n: int, d: int, L: int, seed: int) -> HiddenModel:
    """Deterministic random model; response rows are flat-simplex or vertex draws."""
    if n < 3 or d < 2 or L < 1:
        raise DomainError(f"need n >= 3, d >= 2, L >= 1; got n={n}, d={d}, L={L}")
    rng = np.random.default_rng(seed)
    rho = np.ones(1) if L == 1 else rng.dirichlet(np.ones(L))
    response = np.array([[_draw_row(rng, d) for _ in range(n)] for _ in range(L)])
    return HiddenModel(rho=rho, response=response)


def joint_distribution(model: HiddenModel) -> np.ndarray:
    """Array p[x_1, ..., x_n] = sum_l rho(l) prod_j P(x_j | l)."""
    if model.d**model.n > MAX_JOINT_ENTRIES:
        raise SizeBudgetError(
            f"joint array of {model.d}^{model.n} entries exceeds budget {MAX_JOINT_ENTRIES}"
        )
    out = np.zeros((model.d,) * model.n)
    for weight, rows in zip(model.rho, model.response):
        term = rows[0]
        for row in rows[1:]:
            term = np.multiply.outer(term, row)
        out += weight * term
    return out


def marginal(joint: np.ndarray, keep) -> np.ndarray:
    """Sum out every axis not in ``keep``; kept axes stay in the given order."""
    keep = tuple(keep)
    drop = tuple(ax for ax in range(joint.ndim) if ax not in keep)
    reduced = joint.sum(axis=drop)
    order = sorted(keep)
    return np.transpose(reduced, [order.index(ax) for ax in keep])


def pair_table(model: HiddenModel, i: int, j: int) -> np.ndarray:
    """(X_i, X_j) table straight from the hidden-variable sum, without the full array."""
    return np.einsum("l,la,lb->ab", model.rho, model.response[:, i], model.response[:, j])


def certify(model: HiddenModel, q: float) -> float:
    """Characteristic quantity of the model's statistics; <= 0 whenever q >= 1."""
    q = _check_q(q)
    if q < 1:
        warnings.warn(f"the bound C_q <= 0 is only established for q >= 1 (got q={q})", stacklevel=2)
    joint = joint_distribution(model)
    n = model.n
    pairs = [JointTable(marginal(joint, (j, j + 1))) for j in range(n - 1)]
    ends = JointTable(marginal(joint, (0, n - 1)))
    return generic_c_q(pairs, ends, q)


@dataclass(frozen=True)
class OracleResult:
    evaluations: int
    max_c_q: float
    worst: tuple  # (seed, n, d, L, q) of the largest value
    passed: bool


def model_grid(count: int, seed: int, ns=(3, 4, 5), ds=(2, 3), Ls=tuple(range(1, 9))):
    """Deterministic list of (seed, n, d, L) covering the shape grid cyclically."""
    shapes = list(itertools.product(ns, ds, Ls))
    return [(seed + i,) + shapes[i % len(shapes)] for i in range(count)]


def run_oracle(count: int, seed: int = 0, qs=(1.0, 1.5, 2.0, 3.0), ns=(3, 4, 5), ds=(2, 3),
               Ls=tuple(range(1, 9)), tol: float = CERTIFY_TOL) -> OracleResult:
    if count < 1:
        raise DomainError("need at least one model")
    best = -np.inf
    worst = None
    evaluations = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for model_seed, n, d, L in model_grid(count, seed, ns, ds, Ls):
            model = sample_model(n, d, L, model_seed)
            for q in qs:
                value = certify(model, q)
                evaluations += 1
                if value > best:
                    best, worst = value, (model_seed, n, d, L, q)
    return OracleResult(evaluations, float(best), worst, bool(best <= tol))
