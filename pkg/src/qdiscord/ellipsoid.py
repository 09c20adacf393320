"""Steering ellipsoids of qubit B and the rank-two geometric formulas.

A quadric is a symmetric 4x4 matrix Q in homogeneous Bloch coordinates
y = (1, y1, y2, y3); the surface is y^T Q y = 0. For the steering quadric
R^{-1} eta R^{-T} the interior (reachable states) has y^T Q y >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import apply_filter, filter_bloch, lorentz_defect
from .errors import DegenerateQuadric, NonRealParameters, NotAnEllipsoid
from .qmat import ETA
from .states import Rank2Params, SeparableRank2Params, TwoQubitState, r_matrix

INTERIOR_TOL = 1e-9


@dataclass(frozen=True)
class EllipsoidGeometry:
    center: np.ndarray
    semiaxes: np.ndarray  # descending
    axes: np.ndarray  # columns, proper rotation

    def surface_points(self, n: int) -> np.ndarray:
        """``n`` Fibonacci-sphere points mapped onto the ellipsoid surface."""
        return self.center + (fibonacci_sphere(n) * self.semiaxes) @ self.axes.T


@dataclass(frozen=True)
class ChordDecomposition:
    endpoints: np.ndarray  # 2 x 3
    weights: np.ndarray  # 2


def fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    rho = np.sqrt(1 - z * z)
    phi = math.pi * (3 - math.sqrt(5)) * k
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def steering_quadric(state: TwoQubitState, det_tol: float = 1e-12) -> np.ndarray:
    """Q = R^{-1} eta R^{-T}; raises DegenerateQuadric when R is singular."""
    r = r_matrix(state)
    det = np.linalg.det(r)
    if abs(det) <= det_tol:
        raise DegenerateQuadric(f"R-matrix is singular (det = {det:.3e})")
    rinv = np.linalg.inv(r)
    q = rinv @ ETA @ rinv.T
    return 0.5 * (q + q.T)


def quadric_value(q, y3) -> np.ndarray:
    """y^T Q y for Bloch points (last axis of length 3)."""
    y3 = np.asarray(y3, dtype=float)
    y = np.concatenate([np.ones(y3.shape[:-1] + (1,)), y3], axis=-1)
    return np.einsum("...i,ij,...j->...", y, q, y)


def normalize_quadric(q) -> np.ndarray:
    """Unit Frobenius norm, sign chosen so the spatial block has negative trace."""
    q = np.asarray(q, dtype=float)
    q = q / np.linalg.norm(q)
    return -q if np.trace(q[1:, 1:]) > 0 else q


def geometry(q) -> EllipsoidGeometry:
    q = normalize_quadric(q)
    a = -q[1:, 1:]
    b = -q[1:, 0]
    c = -q[0, 0]
    w, v = np.linalg.eigh(a)
    if w.min() <= 1e-14 * max(1.0, abs(w).max()):
        raise NotAnEllipsoid(f"spatial block is not definite (eigenvalues {w})")
    center = -np.linalg.solve(a, b)
    rhs = center @ a @ center - c
    if rhs <= 0:
        raise NotAnEllipsoid("quadric has empty or point-like real locus")
    semi = np.sqrt(rhs / w)
    order = np.argsort(-semi, kind="stable")
    semi = semi[order]
    v = v[:, order]
    if np.linalg.det(v) < 0:
        v[:, -1] *= -1
    return EllipsoidGeometry(center=center, semiaxes=semi, axes=v)


def verify_filter_invariance(state: TwoQubitState, f) -> float:
    """Max deviation between normalized steering quadrics of rho and the filtered state."""
    q0 = normalize_quadric(steering_quadric(state))
    q1 = normalize_quadric(steering_quadric(apply_filter(state, f)))
    return float(np.max(np.abs(q1 - q0)))


def filter_lorentz_defect(f) -> float:
    return lorentz_defect(filter_bloch(f), f)


# -- rank-two real-parameter formulas -------------------------------------------------


@dataclass(frozen=True)
class Rank2Coefficients:
    f: tuple[float, float, float, float, float, float]
    c: float
    d: float

    def quadric(self) -> np.ndarray:
        """Homogeneous matrix of the closed-form ellipsoid equation (spatial block positive)."""
        f1, f2, f3, f4, f5, f6 = self.f
        c, d = self.c, self.d
        q = np.zeros((4, 4))
        q[1, 1] = c * c * f3 * f3 + d * d * f1 * f1
        q[2, 2] = c * c * f4 * f4 + d * d * f2 * f2
        q[3, 3] = f6 * f6 + d * d * f1 * f1
        q[1, 3] = q[3, 1] = c * f3 * f6
        q[0, 1] = q[1, 0] = -c * f3 * f5
        q[0, 3] = q[3, 0] = -f5 * f6
        q[0, 0] = f5 * f5 - d * d * f1 * f1
        return q


def _real(p: Rank2Params):
    if not p.is_real():
        raise NonRealParameters("geometric formulas need real parameters")
    return p.real_parts()


def rank2_coeffs(p: Rank2Params) -> Rank2Coefficients:
    a0, b0, a1, b1, c, d = _real(p)
    l0, l1 = p.lam0, p.lam1
    s = math.sqrt(l0 * l1)
    f = (
        l0 * a0 * b0 + l1 * a1 * b1,
        l0 * a0 * b0 - l1 * a1 * b1,
        s * (a1 * b0 + a0 * b1),
        s * (a1 * b0 - a0 * b1),
        s * (a0 * a1 + b0 * b1),
        s * (a0 * a1 - b0 * b1),
    )
    return Rank2Coefficients(f=f, c=c, d=d)


def rotation_angle(p: Rank2Params) -> float:
    """Angle of the y2-axis rotation that removes the y1*y3 cross term, in (-pi, pi].

    When both c*f3 and f6 vanish there is no cross term and 0 is returned.
    """
    k = rank2_coeffs(p)
    f3, f6 = k.f[2], k.f[5]
    n = math.hypot(k.c * f3, f6)
    if n == 0:
        return 0.0
    return math.atan2(-k.c * f3 / n, f6 / n)


def rotation_matrix(eta: float) -> np.ndarray:
    """Maps a Bloch vector into the rotated frame: r' = M r."""
    c, s = math.cos(eta), math.sin(eta)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def rotate_quadric(q, eta: float) -> np.ndarray:
    """Quadric in the rotated frame (substitute y = M^T y')."""
    t = np.eye(4)
    t[1:, 1:] = rotation_matrix(eta).T
    return t.T @ np.asarray(q) @ t


def rb_closed_form(p: Rank2Params) -> np.ndarray:
    a0, b0, a1, b1, c, d = _real(p)
    f1 = rank2_coeffs(p).f[0]
    return np.array([2 * c * f1, 0.0, p.lam0 * (a0**2 - b0**2) + p.lam1 * (a1**2 - b1**2)])


def chord_lengths(p: Rank2Params) -> tuple[float, float]:
    """Squared lengths (r_M^2, r_P^2) of the equal-norm chord endpoints."""
    a0, b0, a1, b1, c, d = _real(p)
    ll = p.lam0 * p.lam1
    rm2 = 1 - 4 * ll * d * d * (a0 * b1 + a1 * b0) ** 2
    rp2 = 1 - 4 * ll * (a0 * b1 - a1 * b0) ** 2
    return rm2, rp2


def chord_decompositions(state: TwoQubitState, p: Rank2Params) -> dict[str, ChordDecomposition]:
    """Intersect the two chords through rho^B (rotated frame) with the steering quadric.

    Works from the numerically computed quadric, independent of the closed forms.
    Endpoints are returned in the rotated frame.
    """
    eta = rotation_angle(p)
    q = rotate_quadric(steering_quadric(state), eta)
    rb = rotation_matrix(eta) @ state.bloch_b()
    out = {}
    for name, axis in (("MN", 0), ("PQ", 1)):
        e = np.zeros(3)
        e[axis] = 1.0
        # (rb + t e)^T Q (rb + t e) = 0 in homogeneous form
        y0 = np.concatenate([[1.0], rb])
        ye = np.concatenate([[0.0], e])
        qa = ye @ q @ ye
        qb = 2 * ye @ q @ y0
        qc = y0 @ q @ y0
        disc = math.sqrt(max(qb * qb - 4 * qa * qc, 0.0))
        t1 = (-qb + disc) / (2 * qa)
        t2 = (-qb - disc) / (2 * qa)
        ends = np.array([rb + t1 * e, rb + t2 * e])
        w = np.array([-t2, t1]) / (t1 - t2)
        out[name] = ChordDecomposition(endpoints=ends, weights=w)
    return out


@dataclass(frozen=True)
class SeparableLine:
    """Line y3 cos(beta) + y1 sin(beta) = cos(beta) holding all steered Bloch vectors."""

    beta: float
    y_max: float

    @property
    def coefficients(self) -> tuple[float, float]:
        """(tan beta, 1) for y3 + y1 tan(beta) = 1."""
        return (math.tan(self.beta), 1.0)

    def residual(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(y[2] * math.cos(self.beta) + y[0] * math.sin(self.beta) - math.cos(self.beta))


def separable_line(p: SeparableRank2Params) -> SeparableLine:
    y_max = math.sqrt(1 - 4 * p.q * (1 - p.q) * math.cos(p.alpha) ** 2 * math.sin(p.beta) ** 2)
    return SeparableLine(beta=p.beta, y_max=y_max)


def is_interior(q, y3, tol: float = INTERIOR_TOL) -> bool:
    return bool(quadric_value(q, y3) >= -tol)

