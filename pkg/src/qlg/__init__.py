"""q-entropic Leggett-Garg inequalities: entropies, spin-s model, inefficiency analysis."""

from .errors import (
    CapabilityError,
    DomainError,
    MarginalInconsistencyError,
    QLGError,
    SizeBudgetError,
    ValidationError,
)
from .inefficiency import (
    LGEfficiencyReport,
    c_q_eta,
    c_q_eta_closed,
    critical_eta,
    delta_from_marginals,
    delta_q,
    eta_alter_pair,
    h_eta_pair,
    h_eta_single,
    ratio,
    report,
)
from .lgmodel import (
    LGScenario,
    c_q,
    f_q,
    generic_c_q,
    pair_joint,
    summarize_curve,
    tilde_c_q,
    uniform_marginal,
)
from .macroreal import HiddenModel, certify, joint_distribution, run_oracle, sample_model
from .qentropy import (
    NO_CLICK,
    JointTable,
    ProbVec,
    binary_entropy,
    conditional_entropy,
    entropy,
    eta_alter_single,
    joint_entropy,
    max_entropy,
    q_log,
)
from .wigner import SpinLabel, WignerMatrix, d_matrix, transition_matrix

__version__ = "0.1.0"
