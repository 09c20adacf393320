"""Seeded random states, parameters and filters.

Every sampler takes a ``numpy.random.Generator`` so callers control
reproducibility; nothing here touches global random state.
"""

from __future__ import annotations

import math

import numpy as np

from .states import Rank2Params, SeparableRank2Params, TwoQubitState, validate


def haar_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def wishart_state(rng: np.random.Generator, rank: int = 4) -> TwoQubitState:
    """rho = G G^dag / Tr(G G^dag) with a 4 x rank standard complex normal G."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    m = g @ g.conj().T
    return validate(m / np.trace(m).real)


def _disk(rng: np.random.Generator, radius: float) -> complex:
    return radius * math.sqrt(rng.uniform()) * complex(np.exp(2j * math.pi * rng.uniform()))


def x_state(rng: np.random.Generator, hole_probability: float = 0.5) -> TwoQubitState:
    """Random X state of rank 3 or 4.

    The diagonal (rho00, rho11, rho22, rho33) is Dirichlet(1, 1, 1, 1). With
    probability ``hole_probability`` one diagonal entry, chosen uniformly,
    is set to zero and the rest renormalized; this produces the rank-three
    family with an empty level. Each corner coherence is uniform on the disk
    allowed by positivity, |rho03|^2 <= rho00 rho33 and |rho12|^2 <= rho11 rho22.
    """
    while True:
        d = rng.dirichlet(np.ones(4))
        if rng.uniform() < hole_probability:
            d[rng.integers(4)] = 0.0
            d /= d.sum()
        m = np.diag(d).astype(complex)
        c03 = _disk(rng, math.sqrt(d[0] * d[3]))
        c12 = _disk(rng, math.sqrt(d[1] * d[2]))
        m[0, 3], m[3, 0] = c03, c03.conjugate()
        m[1, 2], m[2, 1] = c12, c12.conjugate()
        st = validate(m)
        if st.rank >= 3:
            return st


def rank2_params(rng: np.random.Generator, real: bool = True) -> Rank2Params:
    """Random parameters of the canonical rank-two family.

    Weights lam0 ~ U(0.02, 0.98); each normalized pair is (cos t, sin t) with
    t ~ U(0, 2 pi), times independent uniform phases when ``real`` is False.
    """
    lam0 = rng.uniform(0.02, 0.98)

    def pair():
        t = rng.uniform(0, 2 * math.pi)
        x, y = complex(math.cos(t)), complex(math.sin(t))
        if not real:
            x *= np.exp(2j * math.pi * rng.uniform())
            y *= np.exp(2j * math.pi * rng.uniform())
        return x, y

    a0, b0 = pair()
    a1, b1 = pair()
    c, d = pair()
    return Rank2Params(lam0, 1 - lam0, a0, b0, a1, b1, c, d)


def separable_params(rng: np.random.Generator) -> SeparableRank2Params:
    """q ~ U(0.02, 0.98), alpha and beta ~ U(0.02, pi/2)."""
    return SeparableRank2Params(
        q=rng.uniform(0.02, 0.98),
        alpha=rng.uniform(0.02, math.pi / 2),
        beta=rng.uniform(0.02, math.pi / 2),
    )


def random_filter(rng: np.random.Generator, low: float = 0.2) -> np.ndarray:
    """Invertible 2x2 F with F^dag F <= 1: largest singular value 1, smallest in [low, 1]."""
    u, v = haar_unitary(rng), haar_unitary(rng)
    s = np.diag([1.0, rng.uniform(low, 1.0)])
    return u @ s @ v


def random_kraus(rng: np.random.Generator, n_ops: int = 2) -> list[np.ndarray]:
    """Kraus operators of a random trace-preserving qubit channel, from a random isometry."""
    g = rng.normal(size=(2 * n_ops, 2)) + 1j * rng.normal(size=(2 * n_ops, 2))
    v, _ = np.linalg.qr(g)
    return [v[2 * k:2 * k + 2] for k in range(n_ops)]


def sample_state(rng: np.random.Generator, sampler: str) -> TwoQubitState:
    """Dispatch on the CLI sampler name: ``xstate``, ``general`` or ``rank2``."""
    if sampler == "xstate":
        return x_state(rng)
    if sampler == "general":
        return wishart_state(rng, rank=4)
    if sampler == "rank2":
        return wishart_state(rng, rank=2)
    raise ValueError(f"unknown sampler {sampler!r}")
