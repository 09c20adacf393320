"""Small dense complex linear algebra and entropy helpers.

Matrices are plain ``numpy.ndarray`` objects. Everything here is sized for
2x2 up to 8x8 operators, so no effort is spent on sparse or batched paths.
All entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import NotHermitian, NotPSD, NotUnitTrace, SingularOperator, ValidationError

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
ETA = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues sorted descending, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValidationError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


def hermitian_deviation(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first component with magnitude > 1e-8 made real positive
    for x in v:
        if abs(x) > 1e-8:
            return v * (abs(x) / x)
    return v


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix with a deterministic gauge.

    Eigenvalues come back in descending order. Each eigenvector has its first
    non-negligible component real and positive; vectors sharing an eigenvalue
    (within 1e-10) are ordered lexicographically by their rounded components.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValidationError(f"matrix must be square, got {m.shape}")
    dev = hermitian_deviation(m)
    if dev > tol:
        raise NotHermitian(f"matrix is not Hermitian (max |M - M^dag| = {dev:.3e})")
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    w = w[::-1]
    v = v[:, ::-1]
    cols = [_fix_phase(v[:, k]) for k in range(len(w))]

    order = []
    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and abs(w[stop] - w[start]) < 1e-10:
            stop += 1
        block = list(range(start, stop))
        if len(block) > 1:
            block.sort(
                key=lambda k: tuple(
                    x for c in cols[k] for x in (-round(c.real, 12), -round(c.imag, 12))
                )
            )
        order.extend(block)
        start = stop
    vecs = np.column_stack([cols[k] for k in order])
    return HermitianEigen(eigenvalues=w[order].copy(), eigenvectors=vecs)


def inv_sqrt(m, tol: float = 1e-10) -> np.ndarray:
    """Inverse square root of a positive definite Hermitian matrix."""
    eig = hermitian_eig(m)
    low = eig.eigenvalues.min()
    if low <= tol:
        raise SingularOperator(f"operator is not invertible (smallest eigenvalue {low:.3e})")
    v = eig.eigenvectors
    return (v / np.sqrt(eig.eigenvalues)) @ v.conj().T


def kron(*mats) -> np.ndarray:
    return reduce(np.kron, [np.asarray(a) for a in mats])


def partial_trace(m, dims: tuple[int, int], keep: int | str) -> np.ndarray:
    """Reduced operator of a bipartite matrix.

    ``keep`` selects the surviving factor: 0 or ``"A"`` for the left factor,
    1 or ``"B"`` for the right one.
    """
    m = as_matrix(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValidationError(f"matrix of shape {m.shape} does not match dims {dims}")
    keep = {"A": 0, "B": 1}.get(keep, keep)
    t = m.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise ValidationError(f"keep must be 0/'A' or 1/'B', got {keep!r}")


def _h2(x):
    """Binary entropy on arrays, no validation; 0 log 0 = 0."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(x > 0, -x * np.log2(np.where(x > 0, x, 1.0)), 0.0)
        u = np.where(x < 1, -(1 - x) * np.log2(np.where(x < 1, 1 - x, 1.0)), 0.0)
    return t + u


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2(1-x) for x in [0, 1]."""
    x = float(x)
    if not (-1e-12 <= x <= 1 + 1e-12) or np.isnan(x):
        raise ValidationError(f"binary entropy argument {x} outside [0, 1]")
    return float(_h2(x))


def entropy_of_bloch_length(r):
    """Entropy of a qubit state whose Bloch vector has length ``r``."""
    return _h2((1.0 + np.clip(r, 0.0, 1.0)) / 2.0)


def von_neumann_entropy(rho, tol: float = PSD_TOL) -> float:
    """S(rho) = -Tr rho log2 rho."""
    rho = as_matrix(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-8:
        raise NotUnitTrace(f"trace is {tr!r}, expected 1")
    w = hermitian_eig(rho).eigenvalues
    if w.min() < -tol:
        raise NotPSD(f"negative eigenvalue {w.min():.3e}")
    w = w[w > 0]
    s = float(-np.sum(w * np.log2(w)))
    return max(s, 0.0)
