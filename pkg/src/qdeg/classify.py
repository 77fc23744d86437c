"""Degradability, antidegradability and entanglement-breaking verdicts.

The central criterion: a qubit channel with PSD Choi matrix C is
antidegradable if and only if

    tr(Phi(I)^2)  >=  tr(C^2) - 4 sqrt(det C).

Every three-valued verdict carries its raw margin (LHS - RHS of the
governing inequality) so callers can re-threshold; Boundary means the
margin is within ``tol`` of zero.

Rank-specialized closed forms are provided as independent evaluation
routes through the channel parameters. They must agree in verdict state
with the general Choi-spectrum test; the test suite enforces this.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import (
    BlochParams,
    ChoiMatrix,
    KrausSet,
    PauliTransfer,
    Rank2Params,
    bell_mu,
    choi_from_bloch,
    choi_from_kraus,
    choi_from_transfer,
    choi_rank,
    complement,
    depolarizing,
    kraus_from_choi,
    phi_of_identity,
    I2,
)
from .errors import (
    InvalidParameter,
    NotAChannel,
    NotApplicable,
    NotCompletelyPositive,
    NumericalFailure,
    WrongRank,
)

#: Default absolute tolerance on verdict margins (Boundary half-width).
DEFAULT_TOL = 1e-9


class VerdictState(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class Verdict:
    """Three-valued answer with the raw margin that produced it."""

    state: VerdictState
    margin: float

    @classmethod
    def from_margin(cls, margin: float, tol: float) -> "Verdict":
        if abs(margin) <= tol:
            state = VerdictState.BOUNDARY
        elif margin > 0:
            state = VerdictState.YES
        else:
            state = VerdictState.NO
        return cls(state=state, margin=float(margin))

    @property
    def holds(self) -> bool:
        """True for Yes or Boundary."""
        return self.state is not VerdictState.NO


@dataclass(frozen=True)
class ClassificationReport:
    antidegradable: Verdict
    degradable: Verdict
    entanglement_breaking: Verdict
    unital: bool
    self_complementary: bool | None
    choi_rank: int
    cp: bool

    def to_dict(self) -> dict:
        return {
            "antidegradable": {
                "state": self.antidegradable.state.value,
                "margin": self.antidegradable.margin,
            },
            "degradable": {
                "state": self.degradable.state.value,
                "margin": self.degradable.margin,
            },
            "entanglement_breaking": {
                "state": self.entanglement_breaking.state.value,
                "margin": self.entanglement_breaking.margin,
            },
            "unital": self.unital,
            "self_complementary": self.self_complementary,
            "choi_rank": self.choi_rank,
            "cp": self.cp,
        }


def _psd_eigenvalues(c: ChoiMatrix, tol: float) -> np.ndarray:
    eigs = linalg.hermitian_eigenvalues(c.matrix)
    if eigs[0] < -tol * max(1.0, linalg.frobenius(c.matrix)):
        raise NotCompletelyPositive(
            f"Choi matrix has eigenvalue {eigs[0]:.3e}; not a CP map"
        )
    return eigs


def _clamped_det(eigs: np.ndarray, tol: float) -> float:
    clamped = np.where(np.abs(eigs) <= tol, 0.0, np.clip(eigs, 0.0, None))
    return float(np.prod(clamped))


def antidegradable_test(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> Verdict:
    """General antidegradability test on the Choi spectrum.

    margin = tr(Phi(I)^2) - [tr(C^2) - 4 sqrt(det C)], with eigenvalues
    within ``tol`` of zero treated as exact zeros inside the determinant.
    """
    eigs = _psd_eigenvalues(c, tol)
    tr_c2 = float(np.sum(eigs * eigs))
    det = _clamped_det(eigs, tol)
    phi_i = phi_of_identity(c)
    lhs = float(np.trace(phi_i @ phi_i).real)
    return Verdict.from_margin(lhs - tr_c2 + 4.0 * math.sqrt(det), tol)


def degradable_test(k: KrausSet, tol: float = DEFAULT_TOL) -> Verdict:
    """Degradability by environment-dimension dispatch.

    Choi rank 1 means a unitary channel (degradable); rank >= 3 excludes
    degradability outright; for those cases the margin is reported as
    ``2 - rank``. At rank 2 the complement is itself a qubit channel, so
    the verdict is its antidegradability margin.
    """
    c = choi_from_kraus(k)
    rank = choi_rank(c, tol)
    if rank == 1:
        return Verdict(state=VerdictState.YES, margin=1.0)
    if rank >= 3:
        return Verdict(state=VerdictState.NO, margin=float(2 - rank))
    return antidegradable_test(choi_from_kraus(complement(k)), tol)


def rank2_antidegradable(p: Rank2Params, tol: float = DEFAULT_TOL) -> Verdict:
    """Closed form for the canonical two-Kraus channel: margin -cos2a cos2b."""
    return Verdict.from_margin(-math.cos(2 * p.alpha) * math.cos(2 * p.beta), tol)


def rank2_degradable(p: Rank2Params, tol: float = DEFAULT_TOL) -> Verdict:
    """Closed form for the canonical two-Kraus channel: margin +cos2a cos2b."""
    return Verdict.from_margin(math.cos(2 * p.alpha) * math.cos(2 * p.beta), tol)


def rank3_antidegradable(b: BlochParams, tol: float = DEFAULT_TOL) -> Verdict:
    """Antidegradability at Choi rank 3: margin 1 + |t|^2 - |lam|^2.

    The determinant term of the general test vanishes whenever the Choi
    matrix is singular, so any rank up to 3 is accepted (an axis contraction
    like lam = (1, 0, 0) drops to rank 2 and still satisfies the formula);
    full-rank input is rejected.
    """
    c = choi_from_bloch(b)
    eigs = _psd_eigenvalues(c, tol)
    rank = int(np.sum(eigs > tol * float(np.trace(c.matrix).real)))
    if rank > 3:
        raise WrongRank(f"expected a singular Choi matrix, got rank {rank}")
    margin = 1.0 + float(b.t @ b.t) - float(b.lam @ b.lam)
    return Verdict.from_margin(margin, tol)


def _det16_poly(t: np.ndarray, lam: np.ndarray) -> float:
    """16 det(C) as an explicit polynomial in the Bloch parameters."""
    t2 = t * t
    l2 = lam * lam
    s = 1.0 + float(np.sum(l2 * l2 + t2 * t2 - 2.0 * l2 - 2.0 * t2))
    s += 8.0 * float(lam[0] * lam[1] * lam[2])
    s -= 2.0 * float(l2[0] * l2[1] + l2[0] * l2[2] + l2[1] * l2[2])
    s += 2.0 * float(t2[0] * t2[1] + t2[0] * t2[2] + t2[1] * t2[2])
    s += 2.0 * float(np.sum(l2 * (np.sum(t2) - 2.0 * t2)))
    return s


def rank4_antidegradable(b: BlochParams, tol: float = DEFAULT_TOL) -> Verdict:
    """Antidegradability from the Bloch parameters at full Choi rank.

    Evaluates the determinant polynomial S = 16 det(C) and the squared
    deficit D^2 = (|lam|^2 - |t|^2 - 1)^2 entirely in the (t, lam)
    parameters. The inequality S >= D^2 decides antidegradability only on
    the branch D >= 0 (squaring is one-directional); for D < 0 the channel
    is antidegradable outright. The margin is therefore reported in the
    unsquared form  -D + sqrt(S), which matches the general test's margin.
    """
    s = _det16_poly(b.t, b.lam)
    d = float(b.lam @ b.lam) - float(b.t @ b.t) - 1.0
    margin = -d + math.sqrt(max(s, 0.0))
    return Verdict.from_margin(margin, tol)


def unital_antidegradable(lam, tol: float = DEFAULT_TOL) -> Verdict:
    """Antidegradability of a unital channel from its Bell weights.

    With nu = mu/2 the Bell-basis Choi eigenvalues,
    margin = 2 - [sum(nu^2) - 4 sqrt(prod(nu))].
    """
    mu = bell_mu(lam)
    if mu.min() < -1e-10:
        raise NotCompletelyPositive(
            f"lam outside the CP tetrahedron (min Bell weight {mu.min():.3e})"
        )
    nu = mu / 2.0
    det = float(np.prod(np.where(np.abs(nu) <= tol, 0.0, np.clip(nu, 0.0, None))))
    margin = 2.0 - float(np.sum(nu * nu)) + 4.0 * math.sqrt(det)
    return Verdict.from_margin(margin, tol)


def entanglement_breaking_test(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> Verdict:
    """PPT criterion, exact for qubit Choi matrices.

    margin = minimum eigenvalue of the partial transpose of C.
    """
    pt = linalg.partial_transpose(c.matrix, 2, 2, transposed=1)
    eigs = linalg.hermitian_eigenvalues(pt)
    return Verdict.from_margin(float(eigs[0]), tol)


def self_complementary_test(k: KrausSet, tol: float = DEFAULT_TOL) -> bool:
    """Matrix-exact self-complementarity in the fixed environment basis.

    Only defined when the complement's output dimension is 2 (two Kraus
    operators); otherwise raises :class:`NotApplicable`. Looser notions
    (equality up to an environment isometry) are deliberately not decided.
    """
    if k.env_dim != 2:
        raise NotApplicable(
            f"self-complementarity needs environment dimension 2, got {k.env_dim}"
        )
    c = choi_from_kraus(k)
    cc = choi_from_kraus(complement(k))
    return linalg.frobenius(c.matrix - cc.matrix) <= tol


def deg_and_antideg_rank2(p: Rank2Params, tol: float = DEFAULT_TOL) -> bool:
    """True when the canonical channel is both degradable and antidegradable,
    i.e. both rank-2 verdicts are Boundary: |cos2a cos2b| <= tol."""
    return abs(math.cos(2 * p.alpha) * math.cos(2 * p.beta)) <= tol


def _bisect(fn, lo: float, hi: float, width: float = 1e-10) -> float:
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise NumericalFailure("bisection bracket does not change sign")
    for _ in range(200):
        if hi - lo <= width:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise NumericalFailure("bisection did not reach the requested width")


def depolarizing_thresholds() -> tuple[float, float]:
    """Antidegradability and entanglement-breaking thresholds of the
    depolarizing family, located by bisection of the raw margins."""

    def anti_margin(p: float) -> float:
        return antidegradable_test(choi_from_kraus(depolarizing(p))).margin

    def eb_margin(p: float) -> float:
        return entanglement_breaking_test(choi_from_kraus(depolarizing(p))).margin

    return _bisect(anti_margin, 0.0, 1.0), _bisect(eb_margin, 0.0, 1.0)


def _coerce(channel):
    """Normalize any supported representation to (ChoiMatrix, KrausSet | None)."""
    if isinstance(channel, KrausSet):
        return choi_from_kraus(channel), channel
    if isinstance(channel, ChoiMatrix):
        return channel, None
    if isinstance(channel, BlochParams):
        return choi_from_bloch(channel), None
    if isinstance(channel, PauliTransfer):
        return choi_from_transfer(channel.t, channel.T), None
    raise InvalidParameter(f"unsupported channel representation: {type(channel)!r}")


def classify(channel, tol: float = DEFAULT_TOL) -> ClassificationReport:
    """Full classification of a channel given in any representation.

    Raises :class:`NotAChannel` (with the offending Choi eigenvalue and
    trace-preservation residual) when the input is not CPTP within ``tol``.
    """
    c, kraus = _coerce(channel)
    eigs = linalg.hermitian_eigenvalues(c.matrix)
    tp_residual = linalg.frobenius(linalg.partial_trace(c.matrix, 2, 2, traced=1) - I2)
    if eigs[0] < -tol * max(1.0, linalg.frobenius(c.matrix)):
        raise NotAChannel(
            f"Choi matrix has eigenvalue {eigs[0]:.3e}; channel is not CP",
            min_choi_eig=float(eigs[0]),
            tp_residual=float(tp_residual),
        )
    if kraus is None:
        kraus = kraus_from_choi(c)
    rank = choi_rank(c, tol)
    unital = linalg.frobenius(phi_of_identity(c) - I2) <= max(tol, 1e-10)
    if kraus.env_dim == 2:
        self_comp = self_complementary_test(kraus, tol)
    else:
        self_comp = None
    return ClassificationReport(
        antidegradable=antidegradable_test(c, tol),
        degradable=degradable_test(kraus, tol),
        entanglement_breaking=entanglement_breaking_test(c, tol),
        unital=bool(unital),
        self_complementary=self_comp,
        choi_rank=rank,
        cp=True,
    )
