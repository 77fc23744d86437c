"""Qubit channel representations and degradability classification."""

from .channels import (
    BELL_F,
    BlochParams,
    ChoiMatrix,
    KrausSet,
    PauliTransfer,
    Rank2Params,
    StinespringIsometry,
    amplitude_damping,
    apply,
    apply_choi,
    bell_mu,
    bloch_from_choi,
    choi_from_bloch,
    choi_from_kraus,
    choi_from_transfer,
    choi_rank,
    complement,
    completely_dephasing,
    completely_depolarizing,
    dephasing,
    depolarizing,
    identity,
    kraus_from_choi,
    phi_of_identity,
    rank2,
    stinespring,
    to_bell_basis,
    transfer_from_choi,
    unital,
)
from .classify import (
    ClassificationReport,
    Verdict,
    VerdictState,
    antidegradable_test,
    classify,
    deg_and_antideg_rank2,
    degradable_test,
    depolarizing_thresholds,
    entanglement_breaking_test,
    rank2_antidegradable,
    rank2_degradable,
    rank3_antidegradable,
    rank4_antidegradable,
    self_complementary_test,
    unital_antidegradable,
)
from .linalg import (
    HermitianEigen,
    det_psd,
    hermitian_eigen,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    partial_transpose,
    psd_check,
    unvec,
    vec,
)
from .symext import (
    ExtensionProblem,
    OracleResult,
    OracleStatus,
    dykstra_feasibility,
    oracle_extendible,
    project_marginal,
    project_psd,
    symmetrize_swap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
