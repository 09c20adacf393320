"""Measurements on qubit A, induced ensembles on B, and discord.

A rank-one POVM element is a (1 + n.sigma)/2 with weight a > 0 and unit n.
Its Pauli coordinates x = (a/2)(1, n) map to the unnormalized Bloch
4-vector of the steered state of B through p y = R^T x.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import qmat
from .entanglement import complement_concurrence, eof_from_concurrence, eof_lower_bound, wootters_concurrence
from .errors import RankTooHigh, SingularOperator, ValidationError
from .qmat import entropy_of_bloch_length
from .states import (
    SeparableRank2Params,
    TwoQubitState,
    complement_state,
    purify,
    qubit_from_bloch,
    r_matrix,
)

log = logging.getLogger(__name__)

PROB_FLOOR = 1e-14
GRID_THETA = 181
GRID_PHI = 91
VN_DIRECTION_TOL = 1e-7
VN_MAX_STEPS = 500
POVM3_SEEDS = 32
POVM3_SEED = 20110708
POVM3_XATOL = 1e-6
POVM3_FATOL = 1e-11
POVM3_MAXFEV = 1000
POVM3_POLISH_ROUNDS = 5
_LN2 = math.log(2)


@dataclass(frozen=True)
class PovmElement:
    weight: float
    direction: np.ndarray

    def __post_init__(self):
        if not self.weight > 0:
            raise ValidationError(f"POVM weight must be positive, got {self.weight}")
        n = np.linalg.norm(self.direction)
        if abs(n - 1) > 1e-12:
            raise ValidationError(f"POVM direction must be a unit vector (norm {n})")

    def operator(self) -> np.ndarray:
        return self.weight * qubit_from_bloch(self.direction)

    def pauli_coords(self) -> np.ndarray:
        return 0.5 * self.weight * np.concatenate([[1.0], self.direction])


@dataclass(frozen=True)
class Povm:
    elements: tuple[PovmElement, ...]

    @classmethod
    def from_arrays(cls, weights, directions, renormalize: bool = False) -> "Povm":
        dirs = np.asarray(directions, dtype=float)
        if renormalize:
            dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        return cls(tuple(PovmElement(float(a), d) for a, d in zip(weights, dirs)))

    @classmethod
    def projective(cls, n) -> "Povm":
        n = np.asarray(n, dtype=float)
        n = n / np.linalg.norm(n)
        return cls((PovmElement(1.0, n), PovmElement(1.0, -n)))

    @property
    def weights(self) -> np.ndarray:
        return np.array([e.weight for e in self.elements])

    @property
    def directions(self) -> np.ndarray:
        return np.array([e.direction for e in self.elements])

    def completeness_residual(self) -> float:
        """max |sum_k M_k - 1| over matrix entries."""
        total = sum(e.operator() for e in self.elements)
        return float(np.max(np.abs(total - np.eye(2))))


@dataclass(frozen=True)
class Ensemble:
    probabilities: np.ndarray
    bloch: np.ndarray  # k x 3

    @property
    def states(self) -> list[np.ndarray]:
        return [qubit_from_bloch(y) for y in self.bloch]

    def barycenter(self) -> np.ndarray:
        return self.probabilities @ self.bloch

    def entropies(self) -> np.ndarray:
        return entropy_of_bloch_length(np.linalg.norm(self.bloch, axis=1))


@dataclass
class CorrelationReport:
    mutual_information: float
    classical_correlation: float
    discord: float
    mae: float
    method: str
    optimal_measurement: Povm | None = None
    bound_pair: tuple[float, float] | None = None
    discord_interval: tuple[float, float] | None = None
    metadata: dict = field(default_factory=dict)


# -- ensembles ----------------------------------------------------------------


def measure(state: TwoQubitState | np.ndarray, m: Povm) -> Ensemble:
    """Post-measurement ensemble of B for measurement ``m`` on A.

    Outcomes with probability below 1e-14 keep their probability but get a
    zero Bloch vector (they carry no weight in averages).
    """
    r = state if isinstance(state, np.ndarray) else r_matrix(state)
    py = np.array([r.T @ e.pauli_coords() for e in m.elements])
    p = py[:, 0]
    y = np.zeros((len(p), 3))
    keep = p >= PROB_FLOOR
    y[keep] = py[keep, 1:] / p[keep, None]
    return Ensemble(probabilities=p, bloch=y)


def average_entropy(e: Ensemble) -> float:
    keep = e.probabilities >= PROB_FLOOR
    return float(np.sum(e.probabilities[keep] * e.entropies()[keep]))


def _avg_entropy_from_rows(w: np.ndarray) -> np.ndarray:
    """sum_k p_k H((1+|y_k|)/2) with w[..., k, :] = p_k (1, y_k)."""
    p = w[..., 0]
    norm = np.linalg.norm(w[..., 1:], axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        rlen = np.where(p >= PROB_FLOOR, norm / np.where(p >= PROB_FLOOR, p, 1.0), 0.0)
    terms = np.where(p >= PROB_FLOOR, p * entropy_of_bloch_length(rlen), 0.0)
    return terms.sum(axis=-1)


def projective_entropy(r: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Average entropy for the measurements {(1 +- n.sigma)/2}, vectorized over rows of ``n``."""
    u = 0.5 * r[0]
    v = 0.5 * (np.asarray(n) @ r[1:])
    w = np.stack([u + v, u - v], axis=-2)
    return _avg_entropy_from_rows(w)


# -- von Neumann measurements ---------------------------------------------------


def _sphere(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _tangent_frame(n):
    a = np.array([1.0, 0, 0]) if abs(n[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = np.cross(n, a)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(n, e1)


def _refine_direction(f, n0, step0, tol=VN_DIRECTION_TOL, max_steps=VN_MAX_STEPS):
    """Coordinate descent on the sphere in a re-centred tangent frame with halving steps."""
    n = n0 / np.linalg.norm(n0)
    best = f(n)
    evals = 1
    step = step0
    steps = 0
    while step >= tol and steps < max_steps:
        steps += 1
        e1, e2 = _tangent_frame(n)
        moved = False
        for e in (e1, -e1, e2, -e2):
            cand = n + step * e
            cand /= np.linalg.norm(cand)
            val = f(cand)
            evals += 1
            # strict improvement beyond rounding noise, so flat directions do not drift
            if val < best - 1e-13:
                best, n, moved = val, cand, True
                break
        if not moved:
            step *= 0.5
    return n, best, evals, steps


def minimize_von_neumann(state: TwoQubitState, n_starts: int = 4):
    """Minimal average entropy over projective measurements on A.

    Coarse 181 x 91 grid over theta in [0, pi], phi in [0, pi), then
    tangent-plane coordinate descent from the best grid minima until the step
    falls below 1e-7 rad. Returns (value, Povm, metadata).
    """
    r = r_matrix(state)
    theta = np.linspace(0, math.pi, GRID_THETA)
    phi = np.linspace(0, math.pi, GRID_PHI, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    dirs = _sphere(tt, pp)
    vals = projective_entropy(r, dirs.reshape(-1, 3)).reshape(tt.shape)

    # local minima of the grid (phi wraps to the antipodal row), best first
    padded = np.pad(vals, ((1, 1), (0, 0)), mode="edge")
    is_min = np.ones_like(vals, dtype=bool)
    for di, dj in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        shifted = np.roll(padded, (di, dj), axis=(0, 1))[1:-1]
        is_min &= vals <= shifted
    cand = np.flatnonzero(is_min.ravel())
    # values rounded before a stable sort so exact ties keep grid order
    cand = cand[np.argsort(np.round(vals.ravel()[cand], 12), kind="stable")][:n_starts]
    if cand.size == 0:
        cand = np.array([int(np.argmin(vals))])

    f = lambda n: float(projective_entropy(r, n))  # noqa: E731
    step0 = math.pi / (GRID_THETA - 1)
    best = None
    evals = vals.size
    for idx in cand:
        n, v, ev, steps = _refine_direction(f, dirs.reshape(-1, 3)[idx], step0)
        evals += ev
        if best is None or v < best[1] - 1e-13:
            best = (n, v, steps)
    n, v, steps = best
    if n[np.argmax(np.abs(n))] < 0:
        n = -n
    meta = {"grid": [GRID_THETA, GRID_PHI], "starts": int(cand.size), "evaluations": int(evals),
            "refine_steps": int(steps)}
    return float(v), Povm.projective(n), meta


# -- three-element POVMs ---------------------------------------------------------


def _povm3_from_params(z):
    """Map 5 unconstrained reals to (weights, directions) of a complete 3-element POVM.

    Rank-one completeness forces coplanar directions with the origin inside
    their convex hull. z[0:2] orient the plane, z[2] rotates within it, and
    z[3:5] (with an implicit 0) feed a softmax giving the supplements
    h_k = pi - g_k of the three angular gaps g_k, so every gap lies in (0, pi).
    Weights follow from the 2-d cross-product identity.
    """
    th, ph, tau, z1, z2 = (float(v) for v in z)
    m = np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    e1 = np.array([math.cos(th) * math.cos(ph), math.cos(th) * math.sin(ph), -math.sin(th)])
    e2 = np.cross(m, e1)
    (g1, g2, _), (s1, s2, s3) = _gaps_and_sines(z1, z2)
    t = np.array([tau, tau + g1, tau + g1 + g2])
    dirs = np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2)
    a = np.array([s2, s3, s1])
    return 2 * a / a.sum(), dirs


def _gaps_and_sines(z1: float, z2: float):
    """Angular gaps g_k = pi - h_k and sin(h_k) from the softmax of (z1, z2, 0).

    Both are formed from the small side of each softmax share, so saturated
    shares (h_k close to pi) keep full relative precision.
    """
    top = max(z1, z2, 0.0)
    x = (math.exp(z1 - top), math.exp(z2 - top), math.exp(-top))
    s = x[0] + x[1] + x[2]
    share = [xk / s for xk in x]
    rest = [(x[1] + x[2]) / s, (x[0] + x[2]) / s, (x[0] + x[1]) / s]  # 1 - share, exactly formed
    gaps = tuple(math.pi * r for r in rest)
    sines = tuple(math.sin(math.pi * min(sk, rk)) for sk, rk in zip(share, rest))
    return gaps, sines


def povm_entropy(r: np.ndarray, weights, directions) -> float:
    w = 0.5 * np.asarray(weights)[:, None] * (r[0] + np.asarray(directions) @ r[1:])
    return float(_avg_entropy_from_rows(w))


def _h2_scalar(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -(x * math.log(x) + (1 - x) * math.log(1 - x)) / _LN2


def _povm3_objective(r: np.ndarray):
    """Scalar average entropy as a function of the 5 POVM parameters.

    Same map as :func:`_povm3_from_params` followed by :func:`povm_entropy`,
    written with plain floats because the local search calls it thousands
    of times per state and numpy overhead dominates at this size.
    """
    rows = [[float(v) for v in row] for row in r]
    u, r1, r2, r3 = rows

    def f(z) -> float:
        th, ph, tau, z1, z2 = (float(v) for v in z)
        st, ct, sp, cp = math.sin(th), math.cos(th), math.sin(ph), math.cos(ph)
        m0, m1, m2 = st * cp, st * sp, ct
        e10, e11, e12 = ct * cp, ct * sp, -st
        e20, e21, e22 = m1 * e12 - m2 * e11, m2 * e10 - m0 * e12, m0 * e11 - m1 * e10
        (g1, g2, _), (s1, s2, s3) = _gaps_and_sines(z1, z2)
        ws = (s2, s3, s1)
        wsum = s1 + s2 + s3
        total = 0.0
        for t, w in zip((tau, tau + g1, tau + g1 + g2), ws):
            c, sn = math.cos(t), math.sin(t)
            n0, n1, n2 = c * e10 + sn * e20, c * e11 + sn * e21, c * e12 + sn * e22
            half = w / wsum  # a_k / 2 with sum a_k = 2
            p = half * (u[0] + n0 * r1[0] + n1 * r2[0] + n2 * r3[0])
            if p < PROB_FLOOR:
                continue
            y1 = half * (u[1] + n0 * r1[1] + n1 * r2[1] + n2 * r3[1])
            y2 = half * (u[2] + n0 * r1[2] + n1 * r2[2] + n2 * r3[2])
            y3 = half * (u[3] + n0 * r1[3] + n1 * r2[3] + n2 * r3[3])
            length = min(math.sqrt(y1 * y1 + y2 * y2 + y3 * y3) / p, 1.0)
            total += p * _h2_scalar((1 + length) / 2)
        return total

    return f


def _completeness_defect(z) -> float:
    a, d = _povm3_from_params(z)
    return float(max(abs(a.sum() - 2), np.abs(a @ d).max()))


def _vn_seed(n: np.ndarray, spin: float) -> np.ndarray:
    """Params whose POVM is close to {(1 +- n.sigma)/2} plus a small third element."""
    e1, e2 = _tangent_frame(n)
    normal = math.cos(spin) * e1 + math.sin(spin) * e2  # plane normal, perpendicular to n
    th = math.acos(max(-1.0, min(1.0, normal[2])))
    ph = math.atan2(normal[1], normal[0])
    pe1 = np.array([math.cos(th) * math.cos(ph), math.cos(th) * math.sin(ph), -math.sin(th)])
    pe2 = np.cross(normal, pe1)
    tau = math.atan2(n @ pe2, n @ pe1)
    return np.array([th, ph, tau, -4.0, 0.0])


def minimize_povm3(state: TwoQubitState, n_seeds: int = POVM3_SEEDS, vn=None):
    """Minimal average entropy over three-element rank-one POVMs on A.

    Nelder-Mead from ``n_seeds`` deterministic starts: three built around the
    best projective measurement (rotating the POVM plane about it) and the
    rest from a fixed-seed generator. The projective optimum itself is kept
    as a degenerate candidate, so the result never exceeds it.
    Returns (value, Povm, metadata).
    """
    r = r_matrix(state)
    if vn is None:
        vn = minimize_von_neumann(state)
    vn_value, vn_povm, _ = vn
    n_vn = vn_povm.directions[0]

    rng = np.random.default_rng(POVM3_SEED)
    seeds = [_vn_seed(n_vn, s) for s in (0.0, math.pi / 3, 2 * math.pi / 3)]
    while len(seeds) < n_seeds:
        seeds.append(np.array([math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi),
                               rng.uniform(0, 2 * math.pi), rng.normal(), rng.normal()]))

    objective = _povm3_objective(r)

    best = (vn_value, -1, None)
    evals = 0
    for i, z0 in enumerate(seeds):
        res = minimize(objective, z0, method="Nelder-Mead",
                       options={"xatol": POVM3_XATOL, "fatol": POVM3_FATOL, "maxfev": POVM3_MAXFEV})
        evals += res.nfev
        # strict improvement only; ties keep the earlier candidate
        if res.fun < best[0] and _completeness_defect(res.x) < 1e-9:
            best = (float(res.fun), i, res.x)
    value, idx, z = best
    if z is not None:
        # polish the winner with tight tolerances; restarting also resets a collapsed simplex
        for _ in range(POVM3_POLISH_ROUNDS):
            res = minimize(objective, z, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-15, "maxfev": POVM3_MAXFEV})
            evals += res.nfev
            if not (res.fun < value and _completeness_defect(res.x) < 1e-9):
                break
            value, z = float(res.fun), res.x
    if z is None:
        povm = vn_povm
    else:
        a, d = _povm3_from_params(z)
        keep = a > 0
        povm = Povm.from_arrays(a[keep], d[keep], renormalize=True)
    meta = {"seeds": len(seeds), "best_seed": idx, "evaluations": int(evals)}
    return float(value), povm, meta


# -- correlation quantities --------------------------------------------------------


def mutual_information(state: TwoQubitState) -> float:
    return (qmat.von_neumann_entropy(state.rho_a) + qmat.von_neumann_entropy(state.rho_b)
            - qmat.von_neumann_entropy(state.matrix))


def _report(state, mae, method, **kw) -> CorrelationReport:
    sa = qmat.von_neumann_entropy(state.rho_a)
    sb = qmat.von_neumann_entropy(state.rho_b)
    sab = qmat.von_neumann_entropy(state.matrix)
    return CorrelationReport(
        mutual_information=sa + sb - sab,
        classical_correlation=sb - mae,
        discord=sa + mae - sab,
        mae=mae,
        method=method,
        **kw,
    )


def complement_eof_rank2(state: TwoQubitState) -> float:
    """E(rho^{BC}) for rank <= 2 via the spin-flip concurrence of the 2x2 complement."""
    if state.rank > 2:
        raise RankTooHigh(f"exact route needs rank <= 2, got {state.rank}")
    rho_bc = complement_state(purify(state, ancilla_dim=2))
    return eof_from_concurrence(wootters_concurrence(rho_bc).value)


def discord_exact_rank2(state: TwoQubitState, with_measurement: bool = True) -> CorrelationReport:
    """Discord of a rank <= 2 state from the EoF of its two-qubit complement.

    The minimal average entropy equals E(rho^{BC}); when ``with_measurement``
    is set the projective optimizer is also run to supply a realizing
    measurement (its value is kept in the metadata).
    """
    e = complement_eof_rank2(state)
    meta = {}
    povm = None
    if with_measurement:
        v, povm, m = minimize_von_neumann(state)
        meta = {"projective_mae": v, **m}
    return _report(state, e, "exact_rank2", optimal_measurement=povm, metadata=meta)


def separable_rank2_smin(p: SeparableRank2Params) -> float:
    y = math.sqrt(1 - 4 * p.q * (1 - p.q) * math.cos(p.alpha) ** 2 * math.sin(p.beta) ** 2)
    return qmat.binary_entropy((1 + y) / 2)


def complement_lower_bound(state: TwoQubitState) -> float:
    """Lower bound on E(rho^{BC}) from the exact concurrence of the complement."""
    try:
        con, _ = complement_concurrence(state)
    except SingularOperator:
        # rho^A pure: rho = |a><a| (x) rho^B, the complement is 2x2 and spin-flip applies
        rho_bc = complement_state(purify(state, ancilla_dim=max(2, state.rank)))
        if rho_bc.shape != (4, 4):
            raise
        con = wootters_concurrence(rho_bc)
    return eof_lower_bound(con)


def discord_bounds(state: TwoQubitState, n_seeds: int = POVM3_SEEDS) -> CorrelationReport:
    """Bracket the minimal average entropy of a rank 3 or 4 state.

    Lower end: EoF bound from the complement's concurrence. Upper end: the
    best of the projective and three-element POVM optima. The report's point
    values (C, D, mae) use the upper end, which is achieved by an explicit
    measurement; ``discord_interval`` carries D at both ends.
    """
    vn = minimize_von_neumann(state)
    s3, povm3, meta3 = minimize_povm3(state, n_seeds=n_seeds, vn=vn)
    s2 = vn[0]
    lower = complement_lower_bound(state)
    upper = min(s2, s3)
    povm = povm3 if s3 <= s2 else vn[1]
    rep = _report(state, upper, "bounds", optimal_measurement=povm, bound_pair=(lower, upper),
                  metadata={"s2_min": s2, "s3_min": s3, "vn": vn[2], "povm3": meta3})
    sa_minus_sab = rep.discord - upper
    rep.discord_interval = (sa_minus_sab + lower, sa_minus_sab + upper)
    return rep


def discord(state: TwoQubitState, n_seeds: int = POVM3_SEEDS) -> CorrelationReport:
    """Route rank <= 2 states to the exact formula and the rest to bounds."""
    if state.rank <= 2:
        log.info("rank %d: exact rank-two route", state.rank)
        return discord_exact_rank2(state)
    log.info("rank %d: bounds route", state.rank)
    return discord_bounds(state, n_seeds=n_seeds)
