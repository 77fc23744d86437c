"""Single-qubit channel representations and conversions between them.

Conventions used consistently across the package:

- ``vec`` is column-stacking, so the Choi matrix of a channel with Kraus
  operators ``{K_i}`` is ``C = sum_i vec(K_i) vec(K_i)^dag``.
- The Choi matrix lives on input (x) output; the *first* tensor factor is
  the channel input. Combined with column-stacking this gives
  ``tr_input(C) = Phi(I)`` and ``tr_output(C) = I`` for trace-preserving
  maps. Both orderings circulate in the literature; everything here
  assumes this one.
- A complementary channel is only defined up to an isometry on the
  environment. The construction below fixes the environment basis by
  Kraus order, so complements should be compared through Choi spectra,
  except where a matrix-exact comparison is deliberately wanted (the
  self-complementarity test).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    InvalidDimension,
    InvalidParameter,
    NotCompletelyPositive,
    NotHermitian,
    NotTracePreserving,
)

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

#: Change of basis whose rows are the Bell vectors; diagonalizes unital Chois.
BELL_F = np.array(
    [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]],
    dtype=np.complex128,
) / np.sqrt(2.0)

#: Absolute tolerance on trace-preservation residuals.
TP_TOL = 1e-10

#: Default relative eigenvalue cutoff (times trace) when extracting Kraus
#: operators or counting Choi rank.
RANK_CUTOFF = 1e-10


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Operator-sum representation: a tuple of (out_dim x 2) matrices.

    The completeness relation ``sum_i K_i^dag K_i = I_2`` must hold within
    :data:`TP_TOL`. Qubit channels have 2x2 operators; complements of a
    d-operator channel have d x 2 operators.
    """

    operators: tuple

    def __post_init__(self):
        ops = tuple(_freeze(linalg.as_matrix(k)) for k in self.operators)
        if not 1 <= len(ops) <= 4:
            raise InvalidDimension(f"expected 1..4 Kraus operators, got {len(ops)}")
        out_dim = ops[0].shape[0]
        for k in ops:
            if k.shape != (out_dim, 2):
                raise InvalidDimension(
                    f"inconsistent Kraus shapes: {k.shape} vs ({out_dim}, 2)"
                )
        gram = sum(linalg.dagger(k) @ k for k in ops)
        if linalg.frobenius(gram - I2) > TP_TOL:
            raise NotTracePreserving(
                f"sum K^dag K deviates from identity by {linalg.frobenius(gram - I2):.3e}"
            )
        object.__setattr__(self, "operators", ops)

    @property
    def env_dim(self) -> int:
        """Environment dimension of this representation (= operator count)."""
        return len(self.operators)

    @property
    def out_dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """4x4 Choi matrix on input (x) output, trace 2."""

    matrix: np.ndarray

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        if m.shape != (4, 4):
            raise InvalidDimension(f"Choi matrix must be 4x4, got {m.shape}")
        if linalg.frobenius(m - linalg.dagger(m)) > 1e-10 * max(linalg.frobenius(m), 1.0):
            raise NotHermitian("Choi matrix is not Hermitian within tolerance")
        m = (m + linalg.dagger(m)) / 2.0
        marginal = linalg.partial_trace(m, 2, 2, traced=1)
        if linalg.frobenius(marginal - I2) > TP_TOL:
            raise NotTracePreserving(
                f"output marginal deviates from identity by "
                f"{linalg.frobenius(marginal - I2):.3e}"
            )
        object.__setattr__(self, "matrix", _freeze(m))


@dataclass(frozen=True, eq=False)
class BlochParams:
    """Diagonal Pauli-basis form: translation t and axis contractions lam."""

    t: np.ndarray
    lam: np.ndarray

    def __post_init__(self):
        for name in ("t", "lam"):
            v = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            if v.size != 3 or not np.all(np.isfinite(v)):
                raise InvalidParameter(f"{name} must be a finite real 3-vector")
            v.setflags(write=False)
            object.__setattr__(self, name, v)


@dataclass(frozen=True, eq=False)
class PauliTransfer:
    """General Pauli transfer block (1, 0; t, T) of a qubit channel."""

    t: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).reshape(-1)
        T = np.asarray(self.T, dtype=float)
        if t.size != 3 or T.shape != (3, 3):
            raise InvalidParameter("transfer block needs a 3-vector t and 3x3 T")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(T))):
            raise InvalidParameter("transfer block entries must be finite")
        t.setflags(write=False)
        T.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "T", T)

    def is_diagonal(self, tol: float = 1e-10) -> bool:
        return bool(np.max(np.abs(self.T - np.diag(np.diag(self.T)))) <= tol)

    def as_bloch(self, tol: float = 1e-10) -> BlochParams:
        if not self.is_diagonal(tol):
            raise InvalidParameter("transfer block is not diagonal")
        return BlochParams(t=self.t, lam=np.diag(self.T))


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    """Isometry V: input -> output (x) environment, rows indexed y*d + z."""

    v: np.ndarray
    env_dim: int

    def __post_init__(self):
        v = _freeze(linalg.as_matrix(self.v))
        if v.shape != (2 * self.env_dim, 2):
            raise InvalidDimension(
                f"isometry shape {v.shape} does not match env_dim {self.env_dim}"
            )
        if linalg.frobenius(linalg.dagger(v) @ v - I2) > TP_TOL:
            raise NotTracePreserving("V^dag V deviates from identity")
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class Rank2Params:
    """Angles of the canonical two-Kraus qubit channel."""

    alpha: float
    beta: float


def bell_mu(lam) -> np.ndarray:
    """The four even-sign combinations 1 +- l1 +- l2 +- l3.

    Halved, these are the Bell-basis eigenvalues of the unital Choi matrix.
    """
    l1, l2, l3 = np.asarray(lam, dtype=float).reshape(3)
    return np.array(
        [1 + l1 + l2 + l3, 1 + l1 - l2 - l3, 1 - l1 + l2 - l3, 1 - l1 - l2 + l3]
    )


def choi_from_kraus(k: KrausSet) -> ChoiMatrix:
    """Choi matrix ``sum_i vec(K_i) vec(K_i)^dag`` of a qubit channel."""
    if k.out_dim != 2:
        raise InvalidDimension("choi_from_kraus expects 2x2 Kraus operators")
    c = np.zeros((4, 4), dtype=np.complex128)
    for op in k.operators:
        v = linalg.vec(op)
        c += np.outer(v, v.conj())
    return ChoiMatrix(c)


def kraus_from_choi(c: ChoiMatrix, tol: float | None = None) -> KrausSet:
    """Extract Kraus operators by eigendecomposing the Choi matrix.

    Eigendirections with eigenvalue below ``tol`` (default
    ``RANK_CUTOFF * tr(c)``) are dropped. Raises
    :class:`NotCompletelyPositive` when the Choi matrix is not PSD.
    """
    m = c.matrix
    if tol is None:
        tol = RANK_CUTOFF * float(np.trace(m).real)
    eig = linalg.hermitian_eigen(m)
    if eig.eigenvalues[0] < -tol:
        raise NotCompletelyPositive(
            f"Choi matrix has eigenvalue {eig.eigenvalues[0]:.3e}"
        )
    ops = []
    for lam, v in zip(eig.eigenvalues, eig.eigenvectors.T):
        if lam > tol:
            ops.append(linalg.unvec(np.sqrt(lam) * v, 2, 2))
    if not ops:
        raise NotCompletelyPositive("Choi matrix is numerically zero")
    return KrausSet(tuple(ops))


def choi_from_transfer(t, T) -> ChoiMatrix:
    """Choi matrix of the channel with Pauli transfer block (1, 0; t, T)."""
    t = np.asarray(t, dtype=float).reshape(3)
    T = np.asarray(T, dtype=float)
    c = np.zeros((4, 4), dtype=np.complex128)
    phi_i = I2 + sum(t[i] * PAULIS[i] for i in range(3))
    for j in range(2):
        for l in range(2):
            e_jl = np.zeros((2, 2), dtype=np.complex128)
            e_jl[j, l] = 1.0
            # Phi(X) from tr(X) and the Pauli components of the traceless part
            w = np.array([np.trace(p @ e_jl) for p in PAULIS]) / 2.0
            img = np.trace(e_jl) / 2.0 * phi_i
            img = img + sum((T @ w)[i] * PAULIS[i] for i in range(3))
            c[2 * j : 2 * j + 2, 2 * l : 2 * l + 2] = img
    return ChoiMatrix(c)


def choi_from_bloch(b: BlochParams) -> ChoiMatrix:
    """Choi matrix of the diagonal Pauli-basis channel (t, lam)."""
    t1, t2, t3 = b.t
    l1, l2, l3 = b.lam
    c = 0.5 * np.array(
        [
            [1 + t3 + l3, t1 - 1j * t2, 0, l1 + l2],
            [t1 + 1j * t2, 1 - t3 - l3, l1 - l2, 0],
            [0, l1 - l2, 1 + t3 - l3, t1 - 1j * t2],
            [l1 + l2, 0, t1 + 1j * t2, 1 - t3 + l3],
        ],
        dtype=np.complex128,
    )
    return ChoiMatrix(c)


def transfer_from_choi(c: ChoiMatrix) -> PauliTransfer:
    """Recover the full Pauli transfer block from a Choi matrix."""
    t = np.empty(3)
    T = np.empty((3, 3))
    for i, sig_i in enumerate(PAULIS):
        t[i] = 0.5 * np.trace(sig_i @ apply_choi(c, I2)).real
        for j, sig_j in enumerate(PAULIS):
            T[i, j] = 0.5 * np.trace(sig_i @ apply_choi(c, sig_j)).real
    return PauliTransfer(t=t, T=T)


def bloch_from_choi(c: ChoiMatrix, tol: float = 1e-10):
    """Diagonal Bloch parameters when the transfer block is diagonal.

    Returns :class:`BlochParams` if the recovered T is diagonal within
    ``tol``, otherwise the full :class:`PauliTransfer`.
    """
    tr = transfer_from_choi(c)
    if tr.is_diagonal(tol):
        return tr.as_bloch(tol)
    return tr


def to_bell_basis(c: ChoiMatrix) -> np.ndarray:
    """Conjugate the Choi matrix into the Bell basis, F c F^dag."""
    return BELL_F @ c.matrix @ linalg.dagger(BELL_F)


def apply(k: KrausSet, rho) -> np.ndarray:
    """Operator-sum action ``sum_i K_i rho K_i^dag``."""
    rho = linalg.as_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidDimension(f"state must be 2x2, got {rho.shape}")
    out = np.zeros((k.out_dim, k.out_dim), dtype=np.complex128)
    for op in k.operators:
        out += op @ rho @ linalg.dagger(op)
    return out


def apply_choi(c: ChoiMatrix, rho) -> np.ndarray:
    """Channel action recovered from the Choi matrix.

    ``Phi(X) = tr_input(C (X^T (x) I))`` under this package's conventions.
    """
    rho = linalg.as_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidDimension(f"state must be 2x2, got {rho.shape}")
    return linalg.partial_trace(c.matrix @ np.kron(rho.T, I2), 2, 2, traced=0)


def phi_of_identity(c: ChoiMatrix) -> np.ndarray:
    """Image of the identity, obtained as the input marginal of the Choi."""
    return linalg.partial_trace(c.matrix, 2, 2, traced=0)


def choi_rank(c: ChoiMatrix, tol: float = 1e-9) -> int:
    """Number of Choi eigenvalues above ``tol * tr(c)``."""
    eigs = linalg.hermitian_eigenvalues(c.matrix)
    trace = float(np.trace(c.matrix).real)
    if eigs[0] < -tol * trace:
        raise NotCompletelyPositive(f"Choi matrix has eigenvalue {eigs[0]:.3e}")
    return int(np.sum(eigs > tol * trace))


def complement(k: KrausSet) -> KrausSet:
    """Complementary channel in the environment basis fixed by Kraus order.

    For operators ``{K_i}`` (i = 1..d) the complement has one Kraus
    operator per output row m, of shape d x 2, whose i-th row is row m of
    ``K_i``. Its output dimension equals d.
    """
    d = k.env_dim
    return KrausSet(
        tuple(
            np.array([k.operators[i][m, :] for i in range(d)])
            for m in range(k.out_dim)
        )
    )


def stinespring(k: KrausSet) -> StinespringIsometry:
    """Stinespring isometry V = sum_i K_i (x) e_i on output (x) environment."""
    if k.out_dim != 2:
        raise InvalidDimension("stinespring expects a qubit channel")
    d = k.env_dim
    v = np.zeros((2 * d, 2), dtype=np.complex128)
    for i, op in enumerate(k.operators):
        for y in range(2):
            v[y * d + i, :] = op[y, :]
    return StinespringIsometry(v=v, env_dim=d)


# ---------------------------------------------------------------------------
# Named constructors
# ---------------------------------------------------------------------------


def identity() -> KrausSet:
    """The identity channel."""
    return KrausSet((I2,))


def completely_depolarizing() -> KrausSet:
    """The channel rho -> tr(rho) I/2, as a uniform Pauli mixture."""
    return KrausSet((I2 / 2, SIGMA_X / 2, SIGMA_Y / 2, SIGMA_Z / 2))


def depolarizing(p: float) -> KrausSet:
    """Mixture of the identity (weight 1-p) and the completely
    depolarizing channel (weight p), as a four-operator Pauli channel."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"depolarizing probability must be in [0, 1], got {p}")
    if p == 0.0:
        return identity()
    w = np.sqrt(p / 4.0)
    return KrausSet(
        (np.sqrt(1.0 - 3.0 * p / 4.0) * I2, w * SIGMA_X, w * SIGMA_Y, w * SIGMA_Z)
    )


def completely_dephasing() -> KrausSet:
    """The channel keeping only the standard-basis diagonal of rho."""
    return KrausSet((np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)))


def rank2(alpha: float, beta: float) -> KrausSet:
    """Canonical two-Kraus channel with angles (alpha, beta).

    Trace preservation holds for every real pair of angles.
    """
    k1 = np.diag([np.cos(alpha), np.cos(beta)]).astype(np.complex128)
    k2 = np.array([[0, np.sin(beta)], [np.sin(alpha), 0]], dtype=np.complex128)
    return KrausSet((k1, k2))


def dephasing(alpha: float) -> KrausSet:
    """Dephasing channel: the canonical two-Kraus form at alpha = beta.

    Its Kraus operators are simultaneously diagonalizable (in the Hadamard
    basis), which is what makes it a dephasing channel.
    """
    return rank2(alpha, alpha)


def amplitude_damping(alpha: float) -> KrausSet:
    """Amplitude damping channel: the canonical two-Kraus form at beta = 0."""
    return rank2(alpha, 0.0)


def unital(lam) -> BlochParams:
    """Unital channel (t = 0) with contractions lam inside the tetrahedron."""
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.size != 3 or not np.all(np.isfinite(lam)):
        raise InvalidParameter("lam must be a finite real 3-vector")
    mu = bell_mu(lam)
    if mu.min() < -1e-10:
        raise NotCompletelyPositive(
            f"lam outside the CP tetrahedron (min Bell weight {mu.min():.3e})"
        )
    return BlochParams(t=np.zeros(3), lam=lam)
