import math

import numpy as np
import pytest

from qlg import wigner
from qlg.errors import DomainError, MarginalInconsistencyError
from qlg.lgmodel import (
    LGScenario,
    c_q,
    default_theta_grid,
    f_q,
    generic_c_q,
    pair_joint,
    summarize_curve,
    tilde_c_q,
    uniform_marginal,
)
from qlg.qentropy import JointTable, conditional_entropy, entropy, max_entropy
from qlg.wigner import SpinLabel

HALF = SpinLabel(1)
SPINS = [SpinLabel(1), SpinLabel(2), SpinLabel(3)]


def spin_half_closed(theta, q):
    """F for s=1/2 reduced by hand: two inputs, each a binary channel."""
    c2, s2 = math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2
    if q == 1:
        return -sum(p * math.log(p) for p in (c2, s2) if p > 0)
    return 2 ** (1 - q) / (q - 1) * (1 - c2**q - s2**q)


def test_scenario_validation():
    with pytest.raises(DomainError):
        LGScenario(n=2, spin=HALF, gaps=(0.1,))
    with pytest.raises(DomainError):
        LGScenario(n=3, spin=HALF, gaps=(0.1,))
    with pytest.raises(DomainError):
        LGScenario(n=3, spin=HALF, gaps=(0.1, -0.2))
    sc = LGScenario.equidistant(0.5, 4, 0.9)
    assert sc.spin == HALF and sc.gaps == (0.3, 0.3, 0.3)
    assert sc.theta == pytest.approx(0.9)


def test_uniform_marginal():
    np.testing.assert_allclose(uniform_marginal(HALF).probs, [0.5, 0.5])
    np.testing.assert_allclose(uniform_marginal(SpinLabel(2)).probs, [1 / 3] * 3)
    for spin in SPINS:
        for q in (1.0, 2.0):
            assert entropy(uniform_marginal(spin), q) == pytest.approx(max_entropy(spin.dim, q), abs=1e-14)


def test_pair_joint_examples():
    np.testing.assert_allclose(pair_joint(HALF, 0.0).probs, np.eye(2) / 2, atol=1e-16)
    np.testing.assert_allclose(pair_joint(HALF, math.pi).probs, [[0, 0.5], [0.5, 0]], atol=1e-16)
    # mpmath: cos^2(0.45)/2 and sin^2(0.45)/2
    a, b = 0.40540249206766611412, 0.094597507932333885879
    np.testing.assert_allclose(pair_joint(HALF, 0.9).probs, [[a, b], [b, a]], atol=1e-15)


def test_pair_joint_marginals_uniform():
    for spin in SPINS + [SpinLabel(6)]:
        t = pair_joint(spin, 1.1)
        np.testing.assert_allclose(t.marginal_x().probs, 1 / spin.dim, atol=1e-12)
        np.testing.assert_allclose(t.marginal_y().probs, 1 / spin.dim, atol=1e-12)


def test_f_q_examples():
    for spin in SPINS:
        for q in (0.5, 1.0, 2.0):
            assert f_q(spin, 0.0, q) == pytest.approx(0.0, abs=1e-15)
    for q in (1.0, 1.5, 2.0, 3.0, 7.0):
        for theta in (0.3, 0.9, 2.0, 3.0):
            assert f_q(HALF, theta, q) == pytest.approx(spin_half_closed(theta, q), abs=1e-13)
    # mpmath: binary Shannon entropy of cos^2(0.45)
    assert f_q(HALF, 0.9, 1.0) == pytest.approx(0.48505362193210857028, abs=1e-14)


@pytest.mark.parametrize("spin", SPINS)
@pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 3.0])
def test_f_q_two_routes(spin, q):
    for theta in np.linspace(0, 2 * math.pi, 24, endpoint=False):
        assert f_q(spin, theta, q) == pytest.approx(
            conditional_entropy(pair_joint(spin, theta), q, given="x"), abs=1e-10)


def test_f_q_symmetry_and_bounds(rng):
    for spin in SPINS:
        for theta in rng.uniform(0, 2 * math.pi, 8):
            for q in (1.0, 2.0, 3.0):
                value = f_q(spin, theta, q)
                assert value == pytest.approx(f_q(spin, -theta, q), abs=1e-10)
                assert value == pytest.approx(f_q(spin, theta + 2 * math.pi, q), abs=1e-10)
                assert -1e-15 <= value <= max_entropy(spin.dim, q) + 1e-12


def test_c_q_examples():
    zero = LGScenario(n=4, spin=SpinLabel(2), gaps=(0.0, 0.0, 0.0))
    assert c_q(zero, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert tilde_c_q(zero, 2.0) == pytest.approx(0.0, abs=1e-15)
    # mpmath: F_1(0.9) - 2 F_1(0.45) and its ratio to ln 2
    sc = LGScenario.equidistant(HALF, 3, 0.9)
    assert c_q(sc, 1.0) == pytest.approx(0.089340654432042594396, abs=1e-13)
    assert tilde_c_q(sc, 1.0) == pytest.approx(0.12889131909888244058, abs=1e-13)
    flip = LGScenario.equidistant(HALF, 3, math.pi)
    assert c_q(flip, 1.0) == pytest.approx(-2 * math.log(2), abs=1e-14)


def test_tilde_sign_follows_c_q(rng):
    for _ in range(50):
        sc = LGScenario.equidistant(SpinLabel(int(rng.integers(1, 4))), int(rng.integers(3, 6)), rng.uniform(0, math.pi))
        q = float(rng.choice([1.0, 1.5, 2.0]))
        assert np.sign(tilde_c_q(sc, q)) == np.sign(c_q(sc, q))


def test_unequal_gaps(rng):
    for spin in SPINS:
        gaps = tuple(rng.uniform(0.05, 0.6, 3))
        sc = LGScenario(n=4, spin=spin, gaps=gaps)
        expected = f_q(spin, sum(gaps), 2.0) - sum(f_q(spin, g, 2.0) for g in gaps)
        assert c_q(sc, 2.0) == pytest.approx(expected, abs=1e-14)


def test_generic_c_q_matches_quantum(rng):
    for spin in SPINS:
        for n in (3, 4, 5):
            gaps = tuple(rng.uniform(0.05, 0.8, n - 1))
            sc = LGScenario(n=n, spin=spin, gaps=gaps)
            pairs = [pair_joint(spin, g) for g in gaps]
            ends = pair_joint(spin, sc.theta)
            for q in (1.0, 1.5, 2.0, 3.0):
                assert generic_c_q(pairs, ends, q) == pytest.approx(c_q(sc, q), abs=1e-10)


def test_generic_c_q_diagonal_tables():
    diag = JointTable(np.eye(3) / 3)
    assert generic_c_q([diag] * 3, diag, 2.0) == pytest.approx(0.0, abs=1e-15)


def test_generic_c_q_inconsistent_marginals():
    a = JointTable(np.eye(2) / 2)
    b = JointTable([[0.7, 0.1], [0.1, 0.1]])
    with pytest.raises(MarginalInconsistencyError, match="pair 0"):
        generic_c_q([a, b], a, 1.0)


def test_outputs_independent_of_phase_convention(monkeypatch):
    """The opposite rotation sense transposes d; nothing downstream may notice."""
    before = [c_q(LGScenario.equidistant(s, 3, 0.9), q) for s in SPINS for q in (1.0, 2.0)]
    original = wigner.d_matrix

    def flipped(spin, theta):
        m = original(spin, theta)
        return wigner.WignerMatrix(m.entries.T.copy(), m.theta, m.spin)

    monkeypatch.setattr(wigner, "d_matrix", flipped)
    after = [c_q(LGScenario.equidistant(s, 3, 0.9), q) for s in SPINS for q in (1.0, 2.0)]
    np.testing.assert_allclose(after, before, atol=1e-14)


def test_summarize_curve_q1():
    summary = summarize_curve(HALF, 3, 1.0)
    assert 0.7 < summary.argmax < 0.9
    assert summary.peak > 0.13
    lo, hi = summary.window
    assert lo < 0.01 and 1.2 < hi < 1.4
    assert tilde_c_q(LGScenario.equidistant(HALF, 3, hi), 1.0) == pytest.approx(0.0, abs=1e-10)


def test_default_grid():
    grid = default_theta_grid()
    assert len(grid) == 512 and grid[0] > 0 and grid[-1] == math.pi
