import math

import numpy as np
import pytest

from qdiscord import channels, sampling, states
from qdiscord.channels import R_PLUS, Superoperator
from qdiscord.errors import NotPauliReal, SingularOperator, ValidationError
from qdiscord.qmat import ETA, SIGMA

from conftest import BELL, close

P_PLUS = np.outer(BELL, BELL.conj())


def vec(x):
    return np.asarray(x).reshape(-1)


def test_upsilon_examples():
    u = channels.upsilon()
    assert close(u @ u.conj().T, np.eye(4), 1e-15)
    assert close(math.sqrt(2) * u @ vec(np.eye(2) / 2), [1, 0, 0, 0], 1e-15)
    assert close(u.conj() @ u.conj().T, R_PLUS, 1e-15)


def test_upsilon_gives_pauli_coordinates(rng):
    u = channels.upsilon()
    for _ in range(20):
        h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        h = h + h.conj().T
        coords = [np.trace(h @ s).real for s in SIGMA]
        assert close(math.sqrt(2) * u @ vec(h), coords, 1e-12)


def test_reshuffle_examples(rng):
    assert close(channels.reshuffle(P_PLUS), np.eye(4) / 2, 1e-15)
    assert close(channels.reshuffle(np.eye(4)), 2 * P_PLUS, 1e-15)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.array_equal(channels.reshuffle(channels.reshuffle(x)), x)


def test_reshuffle_matches_upsilon_relation(rng):
    # R = 2 U rho^R U^T for every two-qubit state
    u = channels.upsilon()
    for _ in range(20):
        st = sampling.wishart_state(rng)
        r = 2 * u @ channels.reshuffle(st.matrix) @ u.T
        assert close(r, states.r_matrix(st), 1e-12)


def test_bloch_rep_examples():
    assert close(channels.bloch_rep(Superoperator.from_kraus([np.eye(2)])), np.eye(4), 1e-15)
    assert close(channels.bloch_rep(Superoperator.from_kraus([SIGMA[3]])), np.diag([1, -1, -1, 1]), 1e-15)


def test_bloch_rep_rejects_non_pauli_real():
    with pytest.raises(NotPauliReal):
        channels.bloch_rep(np.diag([1, 1j, 1, 1]))


def test_bloch_rep_of_trace_preserving_channels(rng):
    for _ in range(500):
        ks = sampling.random_kraus(rng, n_ops=int(rng.integers(1, 4)))
        assert channels.kraus_trace_preserving(ks)
        phi = Superoperator.from_kraus(ks)
        assert phi.trace_preserving
        lmat = channels.bloch_rep(phi)
        assert close(lmat[0], [1, 0, 0, 0], 1e-9)


def test_bloch_rep_acts_on_bloch_vectors(rng):
    ks = sampling.random_kraus(rng)
    phi = Superoperator.from_kraus(ks)
    lmat = channels.bloch_rep(phi)
    r = np.array([0.3, -0.2, 0.5])
    out = sum(k @ states.qubit_from_bloch(r) @ k.conj().T for k in ks)
    assert close(lmat @ np.r_[1, r], np.r_[1, states.bloch_vector(out)], 1e-12)


def test_channel_from_state_bell(bell):
    assert close(channels.channel_from_state(bell), np.eye(4), 1e-12)


def test_channel_from_state_product():
    ra = np.diag([0.8, 0.2])
    b = np.array([0.1, 0.2, -0.4])
    st = states.validate(np.kron(ra, states.qubit_from_bloch(b)))
    lmat = channels.channel_from_state(st)
    expected = np.zeros((4, 4))
    expected[:, 0] = np.r_[1, b]
    assert close(lmat, expected, 1e-12)


def test_channel_from_state_x_state_isomorphism(x_state):
    lmat = channels.channel_from_state(x_state)
    assert close(lmat[0], [1, 0, 0, 0], 1e-9)
    assert np.all(np.isfinite(lmat))
    phi = Superoperator.from_bloch(lmat)
    assert close(channels.apply_to_second(phi, P_PLUS), channels.filtered_state(x_state), 1e-9)


def test_isomorphism_round_trip_sweep(rng):
    for _ in range(200):
        st = sampling.wishart_state(rng, rank=int(rng.integers(2, 5)))
        phi = Superoperator.from_bloch(channels.channel_from_state(st))
        assert close(channels.apply_to_second(phi, P_PLUS), channels.filtered_state(st), 1e-9)


def test_channel_from_state_singular():
    st = states.validate(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2))
    with pytest.raises(SingularOperator):
        channels.channel_from_state(st)


def test_apply_local_channels_examples(bell):
    r = states.r_matrix(bell)
    assert close(channels.apply_local_channels(r, np.eye(4), np.eye(4)), r, 1e-15)
    lz = np.diag([1.0, -1, -1, 1])
    assert close(channels.apply_local_channels(R_PLUS, np.eye(4), lz), np.diag([1, -1, 1, 1]), 1e-15)


def test_apply_local_channels_matches_kraus(rng):
    for _ in range(50):
        st = sampling.wishart_state(rng)
        ka, kb = sampling.random_kraus(rng), sampling.random_kraus(rng)
        la = channels.bloch_rep(Superoperator.from_kraus(ka))
        lb = channels.bloch_rep(Superoperator.from_kraus(kb))
        r2 = channels.apply_local_channels(states.r_matrix(st), la, lb)
        out = sum(np.kron(a, b) @ st.matrix @ np.kron(a, b).conj().T for a in ka for b in kb)
        assert close(states.from_r_matrix(r2), out, 1e-12)
        assert abs(r2[0, 0] - 1) < 1e-12


def test_filter_bloch_examples():
    f = np.eye(2) / math.sqrt(2)
    assert close(channels.filter_bloch(f), np.eye(4) / 2, 1e-15)
    assert abs(abs(np.linalg.det(f)) ** 2 - 0.25) < 1e-15
    f = np.diag([1, 0.5])
    lf = channels.filter_bloch(f)
    assert close(lf.T @ ETA @ lf, 0.25 * ETA, 1e-15)
    u = sampling.haar_unitary(np.random.default_rng(3))
    block = channels.filter_bloch(u)[1:, 1:]
    assert close(block.T @ block, np.eye(3), 1e-12)


def test_filter_bloch_errors():
    with pytest.raises(ValidationError):
        channels.filter_bloch(np.diag([1.0, 0.0]))
    with pytest.raises(ValidationError):
        channels.filter_bloch(np.diag([2.0, 1.0]))


def test_eta_congruence_sweep(rng):
    worst = 0.0
    for _ in range(500):
        f = sampling.random_filter(rng)
        worst = max(worst, channels.lorentz_defect(channels.filter_bloch(f), f))
    assert worst < 1e-9


def test_canonical_invariants_under_rotations(rng):
    for _ in range(50):
        lmat = channels.channel_from_state(sampling.wishart_state(rng))
        sv, t = channels.canonical_invariants(lmat)
        r1 = channels.filter_bloch(sampling.haar_unitary(rng))
        r2 = channels.filter_bloch(sampling.haar_unitary(rng))
        sv2, t2 = channels.canonical_invariants(r1 @ lmat @ r2)
        assert close(sv, sv2, 1e-12)
        # unital r2 leaves the translation column alone and r1 only rotates it
        assert abs(t - t2) < 1e-12
