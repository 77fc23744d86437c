"""Dense complex linear algebra on small matrices.

Everything here operates on plain ``numpy.ndarray`` values (complex128) and
treats them as immutable. The vectorization convention is column-stacking,
so ``vec(U @ K @ V) == kron(V.T, U) @ vec(K)`` holds for all conformable
operands; every Choi-matrix construction in the package relies on it.

The Hermitian eigensolver is a cyclic complex Jacobi iteration. At the
4x4 / 8x8 sizes used here it is accurate to machine precision and has no
external dependencies; tolerances are explicit arguments throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, NotHermitian, NotPSD, NumericalFailure

#: Relative Hermiticity tolerance accepted by the eigensolver.
HERMITICITY_RTOL = 1e-10

#: Relative off-diagonal mass at which the Jacobi sweep stops.
JACOBI_RTOL = 1e-14

#: Maximum number of Jacobi sweeps before giving up.
JACOBI_MAX_SWEEPS = 100

#: Default absolute eigenvalue tolerance for PSD tests and determinant clamping.
PSD_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidDimension(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidDimension("matrix entries must be finite")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def kron(a, b) -> np.ndarray:
    """Kronecker product (a tensor b)."""
    return np.kron(as_matrix(a), as_matrix(b))


def vec(a) -> np.ndarray:
    """Column-stacking vectorization, returned as a 1-D array.

    ``vec(A)[j * rows + i] == A[i, j]``.
    """
    return as_matrix(a).reshape(-1, order="F")


def unvec(v, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if cols is None:
        cols = v.size // rows
    if rows * cols != v.size:
        raise InvalidDimension(f"cannot reshape length {v.size} into {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def _check_bipartite(m: np.ndarray, dim_a: int, dim_b: int) -> None:
    n = dim_a * dim_b
    if m.shape != (n, n):
        raise InvalidDimension(
            f"matrix shape {m.shape} does not match {dim_a}x{dim_b} bipartite split"
        )


def partial_trace(m, dim_a: int, dim_b: int, traced: int) -> np.ndarray:
    """Trace out one tensor factor of a (dim_a * dim_b) square matrix.

    ``traced=0`` removes the first factor (returns a dim_b matrix),
    ``traced=1`` the second. The total trace is preserved.
    """
    m = as_matrix(m)
    _check_bipartite(m, dim_a, dim_b)
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if traced == 0:
        return np.einsum("ijik->jk", t)
    if traced == 1:
        return np.einsum("ijkj->ik", t)
    raise InvalidDimension(f"traced must be 0 or 1, got {traced!r}")


def partial_transpose(m, dim_a: int, dim_b: int, transposed: int) -> np.ndarray:
    """Transpose one tensor factor of a (dim_a * dim_b) square matrix.

    Applying it twice on the same factor returns the input exactly.
    """
    m = as_matrix(m)
    _check_bipartite(m, dim_a, dim_b)
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if transposed == 0:
        t = t.transpose(2, 1, 0, 3)
    elif transposed == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise InvalidDimension(f"transposed must be 0 or 1, got {transposed!r}")
    return t.reshape(dim_a * dim_b, dim_a * dim_b)


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending; column ``i`` of ``eigenvectors``
    is the unit eigenvector for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _require_hermitian(m: np.ndarray) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix of shape {m.shape} is not square")
    scale = frobenius(m)
    if frobenius(m - dagger(m)) > HERMITICITY_RTOL * max(scale, 1.0):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    return (m + dagger(m)) / 2.0


def _jacobi(m: np.ndarray, want_vectors: bool):
    """Cyclic complex Jacobi sweeps; returns (diagonal, vectors or None).

    Works on nested Python lists internally: at 4x4/8x8 scale that beats
    numpy slicing by a wide margin, and this is the package's hot path.
    """
    n = m.shape[0]
    scale = frobenius(m)
    if scale == 0.0:
        return np.zeros(n), (np.eye(n, dtype=np.complex128) if want_vectors else None)
    a = [[complex(x) for x in row] for row in m]
    v = None
    if want_vectors:
        v = [[1.0 + 0j if i == j else 0j for j in range(n)] for i in range(n)]
    threshold = JACOBI_RTOL * scale
    skip = threshold / n
    for _ in range(JACOBI_MAX_SWEEPS):
        off2 = 0.0
        for i in range(n):
            row = a[i]
            for j in range(n):
                if i != j:
                    x = row[j]
                    off2 += x.real * x.real + x.imag * x.imag
        if math.sqrt(off2) <= threshold:
            diag = np.array([a[i][i].real for i in range(n)])
            vectors = np.array(v, dtype=np.complex128) if want_vectors else None
            return diag, vectors
        for p in range(n - 1):
            for q in range(p + 1, n):
                z = a[p][q]
                az = abs(z)
                if az <= skip:
                    continue
                # factor the 2x2 subproblem into a phase times a real rotation
                phase = z / az
                tau = (a[q][q].real - a[p][p].real) / (2.0 * az)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sph = s * phase
                sphc = sph.conjugate()
                cph = c * phase
                cphc = cph.conjugate()
                for i in range(n):  # A <- A J
                    row = a[i]
                    x = row[p]
                    y = row[q]
                    row[p] = c * x - sphc * y
                    row[q] = s * x + cphc * y
                ap = a[p]
                aq = a[q]
                for j in range(n):  # A <- Jt A
                    x = ap[j]
                    y = aq[j]
                    ap[j] = c * x - sph * y
                    aq[j] = s * x + cph * y
                ap[q] = 0j
                aq[p] = 0j
                if want_vectors:
                    for i in range(n):
                        row = v[i]
                        x = row[p]
                        y = row[q]
                        row[p] = c * x - sphc * y
                        row[q] = s * x + cphc * y
    raise NumericalFailure(
        f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )


def hermitian_eigen(m) -> HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix via cyclic Jacobi."""
    a = _require_hermitian(as_matrix(m))
    diag, v = _jacobi(a, want_vectors=True)
    order = np.argsort(diag, kind="stable")
    return HermitianEigen(eigenvalues=diag[order], eigenvectors=v[:, order])


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (no eigenvectors)."""
    a = _require_hermitian(as_matrix(m))
    diag, _ = _jacobi(a, want_vectors=False)
    return np.sort(diag)


def psd_check(m, tol: float = PSD_TOL) -> bool:
    """True iff the minimum eigenvalue is >= -tol * max(1, ||m||_F)."""
    m = as_matrix(m)
    eigs = hermitian_eigenvalues(m)
    return bool(eigs[0] >= -tol * max(1.0, frobenius(m)))


def det_from_eigenvalues(eigs: np.ndarray, tol: float = PSD_TOL) -> float:
    """Clamped PSD determinant from precomputed eigenvalues.

    Eigenvalues within [-tol, tol] count as exact zeros, so rank-deficient
    matrices produce an exact zero determinant. An eigenvalue below -tol
    raises :class:`NotPSD`.
    """
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size and eigs.min() < -tol:
        raise NotPSD(f"eigenvalue {eigs.min():.3e} below -{tol:.1e}")
    clamped = np.where(np.abs(eigs) <= tol, 0.0, eigs)
    return float(np.prod(clamped))


def det_psd(m, tol: float = PSD_TOL) -> float:
    """Determinant of a Hermitian PSD matrix with small-eigenvalue clamping."""
    return det_from_eigenvalues(hermitian_eigenvalues(m), tol)
