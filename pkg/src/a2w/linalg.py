"""Small dense matrix kernel.

Everything here is written for matrices of order <= 8 and favors
determinism over speed: fixed iteration orders, no platform BLAS calls.
All routines accept anything convertible to a square complex ndarray.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
import math

import numpy as np

MAX_ORDER = 8

__all__ = [
    "MAX_ORDER",
    "SingularMatrixError",
    "ConvergenceError",
    "NegativeEigenvalueError",
    "as_square",
    "as_hermitian",
    "hermitian_defect",
    "permutation_sign",
    "leibniz_det",
    "lu_det",
    "elim_inverse",
    "cofactor",
    "adjugate_inverse",
    "sym_eigen",
    "sqrt_psd",
    "operator_norm",
    "PosDefResult",
    "is_positive_definite",
]


class SingularMatrixError(ArithmeticError):
    """Matrix is singular (or too close to it) for the requested inverse."""


class ConvergenceError(ArithmeticError):
    """Iterative routine did not converge within its sweep budget."""


class NegativeEigenvalueError(ArithmeticError):
    """Matrix has an eigenvalue below the PSD clamping tolerance."""


def as_square(m) -> np.ndarray:
    """Validate and return a finite square complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def hermitian_defect(m) -> float:
    """Max-entry distance from self-adjointness, relative to the entry scale."""
    a = as_square(m)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T))) / scale


def as_hermitian(m, tol: float = 1e-12) -> np.ndarray:
    """Check self-adjointness within tol and return the exactly symmetrized matrix."""
    a = as_square(m)
    if hermitian_defect(a) > tol:
        raise ValueError("matrix is not self-adjoint within tolerance")
    return (a + a.conj().T) / 2.0


def permutation_sign(images: tuple[int, ...]) -> int:
    """Sign of a permutation given as a tuple of images of 0..n-1.

    Computed from the cycle decomposition: sign = (-1)^(n - #cycles).
    """
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ValueError("not a permutation of 0..n-1")
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
    return 1 if (n - cycles) % 2 == 0 else -1


def leibniz_det(m) -> complex:
    """Determinant by full permutation expansion, terms in lexicographic order.

    Exponentially slow by design; serves as the auditable counterpart to
    lu_det. Rejects matrices of order above MAX_ORDER.
    """
    a = as_square(m)
    n = a.shape[0]
    if n > MAX_ORDER:
        raise ValueError(f"permutation expansion limited to order {MAX_ORDER}")
    total = 0j
    for perm in permutations(range(n)):
        term = complex(permutation_sign(perm))
        for i in range(n):
            term *= a[i, perm[i]]
        total += term
    return total


def _lu_decompose(a: np.ndarray):
    """In-place partially pivoted elimination. Returns (matrix, swaps, ok)."""
    n = a.shape[0]
    swaps = 0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0:
            return a, swaps, False
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            swaps += 1
        for row in range(col + 1, n):
            f = a[row, col] / a[col, col]
            a[row, col] = f
            a[row, col + 1:] -= f * a[col, col + 1:]
    return a, swaps, True


def lu_det(m) -> complex:
    """Determinant via partially pivoted elimination; returns 0 for singular input."""
    a = as_square(m).copy()
    a, swaps, ok = _lu_decompose(a)
    if not ok:
        return 0j
    det = complex(-1 if swaps % 2 else 1)
    for i in range(a.shape[0]):
        det *= a[i, i]
    return det


def elim_inverse(m, singular_rtol: float = 1e-14) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination with partial pivoting."""
    a = as_square(m).copy()
    n = a.shape[0]
    scale = float(np.max(np.abs(a)))
    aug = np.hstack([a, np.eye(n, dtype=complex)])
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if np.abs(aug[piv, col]) <= singular_rtol * max(scale, 1e-300):
            raise SingularMatrixError("pivot below singularity tolerance")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] / aug[col, col]
        for row in range(n):
            if row != col and aug[row, col] != 0:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


def cofactor(m, i: int, j: int) -> complex:
    """Signed minor (-1)^(i+j) det M_ij with row i and column j deleted (0-based)."""
    a = as_square(m)
    n = a.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"cofactor index ({i}, {j}) out of range for order {n}")
    if n == 1:
        return 1 + 0j  # determinant of the empty matrix
    minor = np.delete(np.delete(a, i, axis=0), j, axis=1)
    sign = -1 if (i + j) % 2 else 1
    return sign * lu_det(minor)


def adjugate_inverse(m, singular_rtol: float = 1e-12) -> np.ndarray:
    """Inverse via the adjugate: inv(M)[i, j] = cofactor(M, j, i) / det M.

    The singularity test compares |det M| against singular_rtol times
    max|entry|^n, which keeps the threshold scale consistent with the
    determinant itself.
    """
    a = as_square(m)
    n = a.shape[0]
    det = lu_det(a)
    scale = float(np.max(np.abs(a)))
    if abs(det) <= singular_rtol * scale**n:
        raise SingularMatrixError("determinant below singularity tolerance")
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = cofactor(a, j, i) / det
    return out


def sym_eigen(m, hermitian_tol: float = 1e-12, max_sweeps: int = 50):
    """Eigendecomposition of a self-adjoint matrix by cyclic Jacobi rotations.

    Sweeps run over the upper triangle in fixed row-major order, which makes
    the output a deterministic function of the input entries on any IEEE-754
    platform. Returns (eigenvalues ascending, unitary matrix of column
    eigenvectors).
    """
    h = as_hermitian(m, hermitian_tol)
    n = h.shape[0]
    v = np.eye(n, dtype=complex)
    scale = float(np.max(np.abs(h)))
    if scale == 0.0:
        return np.zeros(n), v
    stop = 1e-14 * scale
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(h[p, q]))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = h[p, q]
                r = abs(g)
                if r <= 1e-18 * scale:
                    continue
                phase = g / r
                tau = (h[p, p].real - h[q, q].real) / (2.0 * r)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(tau, 1.0))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                jrot = np.eye(n, dtype=complex)
                jrot[p, p] = c
                jrot[p, q] = -s * phase
                jrot[q, p] = s * np.conj(phase)
                jrot[q, q] = c
                h = jrot.conj().T @ h @ jrot
                v = v @ jrot
    else:
        raise ConvergenceError(f"Jacobi sweep budget {max_sweeps} exhausted")
    vals = h.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def sqrt_psd(m, clamp_rtol: float = 1e-12) -> np.ndarray:
    """Self-adjoint square root of a PSD matrix.

    Eigenvalues in [-clamp_rtol * spectral_radius, 0) are clamped to zero;
    anything lower raises NegativeEigenvalueError.
    """
    vals, vecs = sym_eigen(m)
    radius = float(np.max(np.abs(vals))) if len(vals) else 0.0
    floor = -clamp_rtol * radius
    if np.any(vals < floor):
        raise NegativeEigenvalueError(
            f"eigenvalue {vals.min():.6e} below PSD clamp {floor:.6e}")
    root = vecs @ np.diag(np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    return (root + root.conj().T) / 2.0


def operator_norm(m) -> float:
    """Largest singular value, computed from the top eigenvalue of M* M."""
    a = as_square(m)
    gram = a.conj().T @ a
    vals, _ = sym_eigen((gram + gram.conj().T) / 2.0)
    top = float(vals[-1])
    return math.sqrt(top) if top > 0.0 else 0.0


@dataclass(frozen=True)
class PosDefResult:
    """Outcome of the two-route positive definiteness test."""

    verdict: str  # "positive" | "not_positive" | "marginal"
    minors: tuple[float, ...]
    min_eigenvalue: float
    failed_minor: int | None = None  # 0-based index of first failing leading minor


def is_positive_definite(m, margin_rtol: float = 1e-10) -> PosDefResult:
    """Decide positive definiteness by leading minors and, independently, eigenvalues.

    Both routes must agree with a clear margin (relative to the entry scale)
    for a "positive" or "not_positive" verdict; disagreement or a verdict
    within the margin yields "marginal".
    """
    h = as_hermitian(m)
    n = h.shape[0]
    scale = float(np.max(np.abs(h)))
    if scale == 0.0:
        return PosDefResult("not_positive", tuple(0.0 for _ in range(n)), 0.0, 0)
    minors = []
    for k in range(1, n + 1):
        minors.append(lu_det(h[:k, :k]).real)
    vals, _ = sym_eigen(h)
    lam_min = float(vals[0])
    minor_margins = [mk / scale**k for k, mk in enumerate(minors, start=1)]
    minors_pos = all(g > margin_rtol for g in minor_margins)
    minors_neg = any(g < -margin_rtol for g in minor_margins)
    eig_pos = lam_min > margin_rtol * scale
    eig_neg = lam_min < -margin_rtol * scale
    failed = None
    for k, g in enumerate(minor_margins):
        if g <= margin_rtol:
            failed = k
            break
    if minors_pos and eig_pos:
        return PosDefResult("positive", tuple(minors), lam_min, None)
    if minors_neg and eig_neg:
        return PosDefResult("not_positive", tuple(minors), lam_min, failed)
    if not minors_pos and not eig_pos:
        # agreement on failure, but possibly only marginally negative
        if minors_neg or eig_neg:
            return PosDefResult("not_positive", tuple(minors), lam_min, failed)
        return PosDefResult("marginal", tuple(minors), lam_min, failed)
    return PosDefResult("marginal", tuple(minors), lam_min, failed)
