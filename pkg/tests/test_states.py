import math

import numpy as np
import pytest

from qdiscord import qmat, sampling, states
from qdiscord.errors import NotHermitian, NotPSD, NotUnitTrace, ValidationError
from qdiscord.states import Rank2Params, SeparableRank2Params

from conftest import BELL, close, x_example

S = 1 / math.sqrt(2)


def test_validate_examples():
    assert states.validate(np.eye(4) / 4).rank == 4
    assert states.validate(np.outer(BELL, BELL)).rank == 1
    assert states.validate(x_example()).rank == 3


@pytest.mark.parametrize("m,err", [
    (np.diag([0.5, 0.5, 0, 0]) + np.diag([0.1, 0, 0], 1), NotHermitian),
    (np.eye(4) / 3, NotUnitTrace),
    (np.diag([0.6, 0.6, -0.2, 0.0]), NotPSD),
])
def test_validate_errors(m, err):
    with pytest.raises(err):
        states.validate(m)


def test_validate_shape():
    with pytest.raises(ValidationError):
        states.validate(np.eye(2) / 2)


def test_r_matrix_examples():
    assert close(states.r_matrix(np.outer(BELL, BELL)), np.diag([1, 1, -1, 1]), 1e-15)
    r = states.r_matrix(np.diag([1.0, 0, 0, 0]))
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[0, 3] = expected[3, 0] = expected[3, 3] = 1
    assert close(r, expected, 1e-15)
    assert close(states.r_matrix(np.eye(4) / 4), np.diag([1, 0, 0, 0]), 1e-15)


def test_from_r_matrix_examples():
    assert close(states.from_r_matrix(np.diag([1, 1, -1, 1])), np.outer(BELL, BELL), 1e-15)
    assert close(states.from_r_matrix(np.diag([1, 0, 0, 0])), np.eye(4) / 4, 1e-15)


def test_r_matrix_round_trip_sweep(rng):
    for _ in range(500):
        st = sampling.wishart_state(rng, rank=int(rng.integers(1, 5)))
        r = states.r_matrix(st)
        assert abs(r[0, 0] - 1) < 1e-12 and np.abs(r).max() <= 1 + 1e-12
        assert close(states.from_r_matrix(r), st.matrix, 1e-12)


def test_build_rank2_examples():
    st = states.build_rank2(Rank2Params(1.0, 0.0, 1, 0, 1, 0, 1, 0))
    assert close(st.matrix, np.diag([1, 0, 0, 0]), 1e-15)
    st = states.build_rank2(Rank2Params(0.5, 0.5, S, S, S, S, 1, 0))
    assert st.rank == 2
    assert close(st.eigen.eigenvalues, [0.5, 0.5, 0, 0], 1e-12)


def test_build_rank2_spectrum_and_orthogonality(rng):
    for k in range(200):
        p = sampling.rank2_params(rng, real=bool(k % 2))
        psi0, psi1 = p.eigenvectors()
        assert abs(np.vdot(psi0, psi1)) < 1e-12
        st = states.build_rank2(p)
        expected = sorted([p.lam0, p.lam1, 0, 0], reverse=True)
        assert close(st.eigen.eigenvalues, expected, 1e-10)


def test_rank2_params_validation():
    with pytest.raises(ValidationError):
        Rank2Params(0.5, 0.6, 1, 0, 1, 0, 1, 0)
    with pytest.raises(ValidationError):
        Rank2Params(0.5, 0.5, 1, 1, 1, 0, 1, 0)


def test_separable_examples():
    st = states.build_separable_rank2(SeparableRank2Params(0.5, math.pi / 2, math.pi / 2))
    assert close(st.matrix, np.diag([0.5, 0, 0, 0.5]), 1e-15)
    st = states.build_separable_rank2(SeparableRank2Params(0.5, math.pi / 2, math.pi / 4))
    phi = np.array([S, S])
    expected = 0.5 * np.diag([1, 0, 0, 0]) + 0.5 * np.kron(np.diag([0, 1]), np.outer(phi, phi))
    assert close(st.matrix, expected, 1e-15)


def test_separable_param_ranges():
    for args in [(0.0, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, 2.0)]:
        with pytest.raises(ValidationError):
            SeparableRank2Params(*args)


def test_purify_pure_state():
    psi = states.purify(states.validate(np.outer(BELL, BELL)))
    assert psi.r == 1
    assert close(psi.vector, BELL, 1e-12)


def test_purify_equal_mixture_schmidt():
    v01 = np.array([0, 1, 0, 0])
    rho = 0.5 * np.outer(BELL, BELL) + 0.5 * np.outer(v01, v01)
    psi = states.purify(states.validate(rho))
    assert psi.r == 2
    sv = np.linalg.svd(psi.vector.reshape(4, 2), compute_uv=False)
    assert close(sv, [S, S], 1e-12)


def test_purify_x_state(x_state):
    psi = states.purify(x_state)
    assert psi.r == 3
    assert abs(np.linalg.norm(psi.vector) - 1) < 1e-10
    assert close(psi.rho_ab(), x_state.matrix, 1e-9)


def test_complement_examples(bell):
    psi = states.purify(bell, ancilla_dim=2)
    rho_bc = states.complement_state(psi)
    assert close(rho_bc, np.kron(bell.rho_b, np.diag([1, 0])), 1e-12)
    st = states.build_rank2(Rank2Params(0.3, 0.7, 0.6, 0.8, S, S, 0.8, 0.6))
    rho_bc = states.complement_state(states.purify(st))
    assert rho_bc.shape == (4, 4)
    assert np.sum(np.linalg.eigvalsh(rho_bc) > 1e-10) == 2


def test_purification_consistency(rng):
    for _ in range(100):
        st = sampling.wishart_state(rng, rank=int(rng.integers(1, 5)))
        psi = states.purify(st)
        assert close(psi.rho_ab(), st.matrix, 1e-9)
        rho_bc = states.complement_state(psi)
        assert abs(np.trace(rho_bc) - 1) < 1e-12
        s_bc = qmat.von_neumann_entropy(rho_bc)
        assert abs(s_bc - qmat.von_neumann_entropy(st.rho_a)) < 1e-9
        rho_c = qmat.partial_trace(rho_bc, (2, psi.r), 1)
        assert close(rho_c, psi.rho_c(), 1e-12)
        assert abs(qmat.von_neumann_entropy(rho_c) - qmat.von_neumann_entropy(st.matrix)) < 1e-9


def test_local_unitary_invariance(rng):
    for _ in range(50):
        st = sampling.wishart_state(rng)
        ua, ub = sampling.haar_unitary(rng), sampling.haar_unitary(rng)
        st2 = states.local_unitary(st, ua, ub)
        assert close(st.eigen.eigenvalues, st2.eigen.eigenvalues, 1e-10)
        for f in ("rho_a", "rho_b"):
            e1 = qmat.von_neumann_entropy(getattr(st, f))
            e2 = qmat.von_neumann_entropy(getattr(st2, f))
            assert abs(e1 - e2) < 1e-10
