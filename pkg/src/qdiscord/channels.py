"""One-qubit channels as superoperators and Bloch matrices, and the state-channel map.

Operators are vectorized row-major, X -> (x00, x01, x10, x11). In that
convention the superoperator of K . K^dag is K (x) K*, and Pauli coordinates
are x = sqrt(2) U X with U the fixed unitary returned by :func:`upsilon`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import NotPauliReal, ValidationError
from .qmat import ETA
from .states import TwoQubitState, r_matrix, validate

R_PLUS = np.diag([1.0, 1.0, -1.0, 1.0])

_UPSILON = np.array(
    [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1j, -1j, 0], [1, 0, 0, -1]], dtype=complex
) / math.sqrt(2)


def upsilon() -> np.ndarray:
    return _UPSILON.copy()


@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray

    @classmethod
    def from_kraus(cls, kraus) -> "Superoperator":
        ks = [np.asarray(k, dtype=complex) for k in kraus]
        return cls(sum(np.kron(k, k.conj()) for k in ks))

    @classmethod
    def from_bloch(cls, lmat) -> "Superoperator":
        u = _UPSILON
        return cls(u.conj().T @ np.asarray(lmat, dtype=complex) @ u)

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return (self.matrix @ x.reshape(-1)).reshape(2, 2)

    @property
    def trace_preserving(self) -> bool:
        # Tr Phi(X) = Tr X for all X  <=>  (1,0,0,1) Phi = (1,0,0,1)
        t = np.array([1, 0, 0, 1])
        return bool(np.max(np.abs(t @ self.matrix - t)) < 1e-9)


def kraus_trace_preserving(kraus, tol: float = 1e-9) -> bool:
    s = sum(np.asarray(k).conj().T @ np.asarray(k) for k in kraus)
    return bool(np.max(np.abs(s - np.eye(2))) < tol)


def reshuffle(x) -> np.ndarray:
    """X^R with <ij|X^R|i'j'> = <i i'|X|j j'> for a 4x4 bipartite matrix."""
    x = np.asarray(x)
    if x.shape != (4, 4):
        raise ValidationError(f"reshuffle expects a 4x4 matrix, got {x.shape}")
    return x.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def bloch_rep(phi: Superoperator | np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Bloch representation L = U Phi U^dag, checked real."""
    m = phi.matrix if isinstance(phi, Superoperator) else np.asarray(phi, dtype=complex)
    lmat = _UPSILON @ m @ _UPSILON.conj().T
    resid = float(np.max(np.abs(lmat.imag)))
    if resid > tol:
        raise NotPauliReal(f"Bloch matrix has imaginary residue {resid:.3e}")
    return lmat.real


def filtered_state(state: TwoQubitState) -> np.ndarray:
    """(2 rho^A)^{-1/2} rho (2 rho^A)^{-1/2}, whose A-marginal is 1/2."""
    f = np.kron(qmat.inv_sqrt(2 * state.rho_a), np.eye(2))
    return f @ state.matrix @ f


def channel_from_state(state: TwoQubitState) -> np.ndarray:
    """Bloch matrix of the channel isomorphic to the filtered state.

    L = R~^T R_+^T, where R~ is the R-matrix of the filtered state; applying
    this channel to qubit B of the Bell state P+ reproduces the filtered state.
    Raises SingularOperator when rho^A is not invertible.
    """
    rt = r_matrix(filtered_state(state))
    return rt.T @ R_PLUS.T


def apply_to_second(phi: Superoperator, rho4) -> np.ndarray:
    """(id (x) Phi)[rho] for a 4x4 operator, via the superoperator."""
    t = np.asarray(rho4, dtype=complex).reshape(2, 2, 2, 2)  # [a, b, a', b']
    out = np.empty_like(t)
    for a in range(2):
        for ap in range(2):
            out[a, :, ap, :] = phi.apply(t[a, :, ap, :])
    return out.reshape(4, 4)


def apply_local_channels(r, la, lb) -> np.ndarray:
    """R -> L^A R (L^B)^T."""
    return np.asarray(la) @ np.asarray(r) @ np.asarray(lb).T


def filter_bloch(f, tol: float = 1e-9) -> np.ndarray:
    """Bloch matrix U (F (x) F*) U^dag of the local filter F (not trace preserving)."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (2, 2):
        raise ValidationError(f"filter must be 2x2, got {f.shape}")
    if abs(np.linalg.det(f)) < 1e-12:
        raise ValidationError("filter is singular")
    top = np.linalg.eigvalsh(f.conj().T @ f).max()
    if top > 1 + tol:
        raise ValidationError(f"filter violates F^dag F <= 1 (largest eigenvalue {top})")
    return bloch_rep(Superoperator(np.kron(f, f.conj())))


def lorentz_defect(lmat, f) -> float:
    """max |L^T eta L - |det F|^2 eta|."""
    lmat = np.asarray(lmat)
    return float(np.max(np.abs(lmat.T @ ETA @ lmat - abs(np.linalg.det(f)) ** 2 * ETA)))


def apply_filter(state: TwoQubitState, f) -> TwoQubitState:
    """Renormalized (F (x) 1) rho (F^dag (x) 1)."""
    g = np.kron(np.asarray(f, dtype=complex), np.eye(2))
    out = g @ state.matrix @ g.conj().T
    return validate(out / np.trace(out).real)


def canonical_invariants(lmat) -> tuple[np.ndarray, float]:
    """Singular values of the 3x3 block and norm of the translation column."""
    lmat = np.asarray(lmat)
    return np.linalg.svd(lmat[1:, 1:], compute_uv=False), float(np.linalg.norm(lmat[1:, 0]))
