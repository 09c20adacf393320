"""Two-qubit states: validation, Pauli-basis R-matrices, canonical families, purification.

Basis order is |00>, |01>, |10>, |11> with qubit A as the left tensor factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qmat
from .errors import NotHermitian, NotPSD, NotUnitTrace, ValidationError
from .qmat import SIGMA

RANK_TOL = 1e-10

# sigma_mu (x) sigma_nu for mu, nu = 0..3
PAULI_PRODUCTS = np.array([[np.kron(s, t) for t in SIGMA] for s in SIGMA])


@dataclass(frozen=True)
class TwoQubitState:
    matrix: np.ndarray
    rank_tol: float = RANK_TOL
    eigen: qmat.HermitianEigen = field(repr=False, compare=False, default=None)

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigen.eigenvalues > self.rank_tol))

    @property
    def rho_a(self) -> np.ndarray:
        return qmat.partial_trace(self.matrix, (2, 2), 0)

    @property
    def rho_b(self) -> np.ndarray:
        return qmat.partial_trace(self.matrix, (2, 2), 1)

    def bloch_a(self) -> np.ndarray:
        return bloch_vector(self.rho_a)

    def bloch_b(self) -> np.ndarray:
        return bloch_vector(self.rho_b)


def validate(rho, tol: float = 1e-10, rank_tol: float = RANK_TOL) -> TwoQubitState:
    """Check that ``rho`` is a 4x4 density matrix and wrap it.

    Raises NotHermitian, NotUnitTrace or NotPSD with the offending magnitude.
    """
    m = qmat.as_matrix(rho)
    if m.shape != (4, 4):
        raise ValidationError(f"two-qubit state must be 4x4, got {m.shape}")
    dev = qmat.hermitian_deviation(m)
    if dev > tol:
        raise NotHermitian(f"state is not Hermitian (deviation {dev:.3e})")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol:
        raise NotUnitTrace(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    eig = qmat.hermitian_eig(m)
    if eig.eigenvalues[-1] < -qmat.PSD_TOL:
        raise NotPSD(f"state has negative eigenvalue {eig.eigenvalues[-1]:.3e}")
    return TwoQubitState(matrix=m, rank_tol=rank_tol, eigen=eig)


def bloch_vector(rho2) -> np.ndarray:
    rho2 = np.asarray(rho2)
    return np.array([np.trace(rho2 @ s).real for s in SIGMA[1:]])


def qubit_from_bloch(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return 0.5 * (SIGMA[0] + r[0] * SIGMA[1] + r[1] * SIGMA[2] + r[2] * SIGMA[3])


def r_matrix(state) -> np.ndarray:
    """R[mu, nu] = Tr(rho sigma_mu (x) sigma_nu)."""
    m = state.matrix if isinstance(state, TwoQubitState) else np.asarray(state, dtype=complex)
    return np.einsum("ij,mnji->mn", m, PAULI_PRODUCTS).real


def from_r_matrix(r) -> np.ndarray:
    """Inverse of :func:`r_matrix`. The result is not validated."""
    r = np.asarray(r, dtype=float)
    return 0.25 * np.einsum("mn,mnij->ij", r, PAULI_PRODUCTS)


def local_unitary(state: TwoQubitState, ua, ub) -> TwoQubitState:
    u = np.kron(ua, ub)
    return validate(u @ state.matrix @ u.conj().T)


# -- canonical rank-two families ---------------------------------------------


@dataclass(frozen=True)
class Rank2Params:
    """Eigen-decomposition parameters of a rank-two two-qubit state.

    psi0 = a0|0>|0> + b0|eta>|1>, psi1 = a1|1>|0> + b1|eta_perp>|1>
    with eta = c|0> + d|1> and eta_perp = -d*|0> + c*|1>, weights lam0, lam1.
    """

    lam0: float
    lam1: float
    a0: complex
    b0: complex
    a1: complex
    b1: complex
    c: complex
    d: complex

    def __post_init__(self):
        tol = 1e-10
        if self.lam0 < 0 or self.lam1 < 0 or abs(self.lam0 + self.lam1 - 1) > tol:
            raise ValidationError(f"weights ({self.lam0}, {self.lam1}) are not a probability pair")
        for name, (x, y) in {"(a0, b0)": (self.a0, self.b0), "(a1, b1)": (self.a1, self.b1),
                             "(c, d)": (self.c, self.d)}.items():
            n = abs(x) ** 2 + abs(y) ** 2
            if abs(n - 1) > tol:
                raise ValidationError(f"{name} is not normalized (|x|^2+|y|^2 = {n})")

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(abs(complex(z).imag) < tol for z in (self.a0, self.b0, self.a1, self.b1, self.c, self.d))

    def real_parts(self):
        return tuple(complex(z).real for z in (self.a0, self.b0, self.a1, self.b1, self.c, self.d))

    def eigenvectors(self) -> tuple[np.ndarray, np.ndarray]:
        a0, b0, a1, b1, c, d = (complex(z) for z in (self.a0, self.b0, self.a1, self.b1, self.c, self.d))
        psi0 = np.array([a0, b0 * c, 0, b0 * d], dtype=complex)
        psi1 = np.array([0, -b1 * d.conjugate(), a1, b1 * c.conjugate()], dtype=complex)
        return psi0, psi1


@dataclass(frozen=True)
class SeparableRank2Params:
    """q|00><00| + (1-q)|psi><psi| (x) |phi><phi|, psi = (cos a, sin a), phi = (cos b, sin b)."""

    q: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValidationError(f"q = {self.q} not in (0, 1)")
        for name, ang in (("alpha", self.alpha), ("beta", self.beta)):
            if not 0 < ang <= math.pi / 2 + 1e-15:
                raise ValidationError(f"{name} = {ang} not in (0, pi/2]")


def build_rank2(p: Rank2Params) -> TwoQubitState:
    psi0, psi1 = p.eigenvectors()
    rho = p.lam0 * np.outer(psi0, psi0.conj()) + p.lam1 * np.outer(psi1, psi1.conj())
    return validate(rho)


def build_separable_rank2(p: SeparableRank2Params) -> TwoQubitState:
    ket0 = np.array([1, 0], dtype=complex)
    psi = np.array([math.cos(p.alpha), math.sin(p.alpha)], dtype=complex)
    phi = np.array([math.cos(p.beta), math.sin(p.beta)], dtype=complex)
    v0 = np.kron(ket0, ket0)
    v1 = np.kron(psi, phi)
    rho = p.q * np.outer(v0, v0.conj()) + (1 - p.q) * np.outer(v1, v1.conj())
    return validate(rho)


# -- purification -------------------------------------------------------------


@dataclass(frozen=True)
class TripartitePure:
    """|Psi> on A (x) B (x) C with ancilla dimension ``r``; index = (2a + b) r + c."""

    vector: np.ndarray
    r: int

    def amplitudes(self) -> np.ndarray:
        """Amplitudes as an array indexed [a, b, c]."""
        return self.vector.reshape(2, 2, self.r)

    def rho_ab(self) -> np.ndarray:
        m = self.vector.reshape(4, self.r)
        return m @ m.conj().T

    def rho_c(self) -> np.ndarray:
        m = self.vector.reshape(4, self.r)
        return m.T @ m.conj()


def purify(state: TwoQubitState, rank_tol: float | None = None, ancilla_dim: int | None = None) -> TripartitePure:
    """Eigen-ensemble purification sum_i sqrt(lam_i) |psi_i>|i_C>.

    The ancilla has dimension equal to the numerical rank unless
    ``ancilla_dim`` asks for a larger one (extra levels get zero amplitude).
    ``rank_tol`` defaults to the state's own threshold.
    """
    rank_tol = state.rank_tol if rank_tol is None else rank_tol
    w = state.eigen.eigenvalues
    v = state.eigen.eigenvectors
    r = max(1, int(np.sum(w > rank_tol)))
    dim = r if ancilla_dim is None else ancilla_dim
    if dim < r:
        raise ValidationError(f"ancilla dimension {dim} below state rank {r}")
    m = np.zeros((4, dim), dtype=complex)
    m[:, :r] = v[:, :r] * np.sqrt(np.clip(w[:r], 0, None))
    vec = m.reshape(-1)
    vec = vec / np.linalg.norm(vec)
    return TripartitePure(vector=vec, r=dim)


def _a_by_bc(psi: TripartitePure) -> np.ndarray:
    return psi.vector.reshape(2, 2 * psi.r)


def complement_state(psi: TripartitePure) -> np.ndarray:
    """rho^{BC} = Tr_A |Psi><Psi|, a (2r)x(2r) matrix on B (x) C."""
    m = _a_by_bc(psi)
    return m.T @ m.conj()


def complement_basis(state: TwoQubitState, psi: TripartitePure) -> np.ndarray:
    """Orthonormal basis (rows) of the range of rho^{BC} tied to the filtered state.

    Row i is sqrt(2) <i_A| ((2 rho^A)^{-1/2} (x) 1) |Psi>, so that
    (|0>|phi_0> + |1>|phi_1>)/sqrt(2) is the filtered purification whose
    AB-marginal is (2 rho^A)^{-1/2} rho (2 rho^A)^{-1/2}.
    """
    f = qmat.inv_sqrt(2 * state.rho_a)
    return math.sqrt(2) * f @ _a_by_bc(psi)
