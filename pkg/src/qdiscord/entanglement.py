"""Concurrence and entanglement of formation.

Two independent routes are provided for the concurrence of a rank-two
complement state: the two-qubit spin-flip formula (only for 2x2 systems) and
the generalized-eigenvalue pencil built from the Bloch matrix of the channel
isomorphic to the source state (any 2 x r system).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmat
from .channels import channel_from_state
from .errors import ComplexPencilEigenvalue, NonRealParameters, RankTooHigh, ValidationError
from .qmat import ETA, SIGMA
from .states import Rank2Params, TwoQubitState, complement_basis, complement_state, purify, r_matrix

RADICAND_TOL = 1e-9
# a nearly degenerate real pair of a non-symmetric eigenproblem splits by ~sqrt(eps)
PENCIL_IMAG_TOL = 1e-6
_YY = np.kron(SIGMA[2], SIGMA[2])


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    method: str

    @classmethod
    def from_square(cls, sq: float, method: str) -> "ConcurrenceResult":
        if sq < -RADICAND_TOL:
            raise ArithmeticError(f"negative squared concurrence {sq:.3e}")
        return cls(min(1.0, math.sqrt(max(sq, 0.0))), method)


@dataclass(frozen=True)
class PencilData:
    """Generalized eigenvalues w1 >= ... >= w4 and the two quadratic forms at the state."""

    eigenvalues: np.ndarray
    q1_value: float
    q2_value: float


def wootters_concurrence(rho) -> ConcurrenceResult:
    """max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)), mu from rho (yy) rho* (yy)."""
    m = rho.matrix if isinstance(rho, TwoQubitState) else qmat.as_matrix(rho)
    if m.shape != (4, 4):
        raise ValidationError(f"Wootters concurrence needs a 4x4 state, got {m.shape}")
    # the spin-flip eigenvalues are the singular values of sqrt(rho) sqrt(rho~);
    # taking them directly avoids square roots of tiny eigenvalues.
    sq = _psd_sqrt(m)
    flipped_sq = _YY @ sq.conj() @ _YY
    lam = np.linalg.svd(sq @ flipped_sq, compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return ConcurrenceResult(float(min(1.0, max(0.0, c))), "wootters")


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def eof_from_concurrence(c: float) -> float:
    """E = H((1 + sqrt(1 - C^2)) / 2)."""
    c = float(c)
    if not (-1e-12 <= c <= 1 + 1e-12):
        raise ValidationError(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return qmat.binary_entropy((1 + math.sqrt(1 - c * c)) / 2)


def _generalized_pauli(basis: np.ndarray) -> list[np.ndarray]:
    p0, p1 = basis[0], basis[1]
    o = lambda u, v: np.outer(u, v.conj())  # noqa: E731
    return [
        o(p0, p0) + o(p1, p1),
        o(p0, p1) + o(p1, p0),
        -1j * o(p0, p1) + 1j * o(p1, p0),
        o(p0, p0) - o(p1, p1),
    ]


def pencil_concurrence(rho_bc, channel, basis, rank_tol: float = 1e-10) -> tuple[ConcurrenceResult, PencilData]:
    """Concurrence of a rank-two 2 x r state from the channel pencil.

    ``channel`` is the Bloch matrix L of the source state and ``basis`` holds
    (as rows) the orthonormal pair phi_0, phi_1 paired with that channel, so
    that Tr_C |phi_i><phi_j| = 2 <i|rho~|j>. With Q1 = L^T eta L and
    Q2 = eta / 2, the pencil eigenvalues are those of 2 eta L^T eta L and
    Con = sqrt(Q1(x) - w2 Q2(x)) at the coordinates x of rho_bc.
    """
    rho_bc = np.asarray(rho_bc, dtype=complex)
    rank = int(np.sum(np.linalg.eigvalsh(0.5 * (rho_bc + rho_bc.conj().T)) > rank_tol))
    if rank > 2:
        raise RankTooHigh(f"pencil concurrence needs rank <= 2, got {rank}")
    varsigma = _generalized_pauli(np.asarray(basis))
    x = np.array([np.trace(rho_bc @ s).real for s in varsigma])
    lmat = np.asarray(channel)
    q1 = lmat.T @ ETA @ lmat
    q2 = 0.5 * ETA
    w = np.linalg.eigvals(2 * ETA @ q1)
    if np.max(np.abs(w.imag)) > PENCIL_IMAG_TOL:
        raise ComplexPencilEigenvalue(f"pencil eigenvalue imaginary part {np.max(np.abs(w.imag)):.3e}")
    w = np.sort(w.real)[::-1]
    q1x = float(x @ q1 @ x)
    q2x = float(x @ q2 @ x)
    res = ConcurrenceResult.from_square(q1x - w[1] * q2x, "pencil")
    return res, PencilData(eigenvalues=w, q1_value=q1x, q2_value=q2x)


def pencil_eigenvalues(state: TwoQubitState) -> np.ndarray:
    """Eigenvalues of 2 R~ eta R~^T eta (complex array, unsorted)."""
    from .channels import filtered_state

    rt = r_matrix(filtered_state(state))
    return np.linalg.eigvals(2 * rt @ ETA @ rt.T @ ETA)


def complement_concurrence(state: TwoQubitState) -> tuple[ConcurrenceResult, PencilData]:
    """Pencil concurrence of the complement of ``state`` (requires invertible rho^A)."""
    psi = purify(state)
    rho_bc = complement_state(psi)
    return pencil_concurrence(rho_bc, channel_from_state(state), complement_basis(state, psi))


def rank2_concurrence_complex(p: Rank2Params) -> ConcurrenceResult:
    """Closed-form concurrence of the complement of a rank-two state, complex parameters."""
    a0, b0, a1, b1, c, d = (complex(z) for z in (p.a0, p.b0, p.a1, p.b1, p.c, p.d))
    ll = p.lam0 * p.lam1
    g = a0 * b1 * c.conjugate() - a1 * b0 * c
    dd = abs(d) ** 2
    sq = 2 * ll * (abs(g) ** 2 + 2 * dd * (abs(a0) ** 2 * abs(b1) ** 2 + abs(a1) ** 2 * abs(b0) ** 2))
    sq -= 2 * ll * abs(g * g - 4 * a0 * a1 * b0 * b1 * dd)
    return ConcurrenceResult.from_square(sq, "analytic_complex")


def rank2_concurrence_cases(p: Rank2Params) -> tuple[str, ConcurrenceResult]:
    """Real-parameter case split; ties go to case (i)."""
    if not p.is_real():
        raise NonRealParameters("case formulas need real parameters")
    a0, b0, a1, b1, c, d = p.real_parts()
    ll = p.lam0 * p.lam1
    if c * c * (a0 * b1 - a1 * b0) ** 2 >= 4 * a0 * a1 * b0 * b1 * d * d:
        return "i", ConcurrenceResult.from_square(4 * ll * d * d * (a0 * b1 + a1 * b0) ** 2, "analytic_case_i")
    return "ii", ConcurrenceResult.from_square(4 * ll * (a0 * b1 - a1 * b0) ** 2, "analytic_case_ii")


def eof_lower_bound(con: ConcurrenceResult | float) -> float:
    """H(1/2 + sqrt(1 - Con^2)/2); a lower bound on the EoF of a 2 x r rank-two state."""
    value = con.value if isinstance(con, ConcurrenceResult) else float(con)
    return eof_from_concurrence(value)
