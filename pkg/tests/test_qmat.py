import math

import numpy as np
import pytest

from qdiscord import qmat
from qdiscord.errors import NotHermitian, NotPSD, SingularOperator, ValidationError
from qdiscord.qmat import SIGMA

from conftest import BELL, close, random_hermitian, x_example


def test_eig_diagonal_descending():
    e = qmat.hermitian_eig(np.diag([0.3, 0.7]))
    assert close(e.eigenvalues, [0.7, 0.3], 1e-15)


def test_eig_sigma_x_vectors_and_phase():
    e = qmat.hermitian_eig(SIGMA[1])
    assert close(e.eigenvalues, [1, -1], 1e-15)
    s = 1 / math.sqrt(2)
    assert close(e.eigenvectors[:, 0], [s, s], 1e-12)
    assert close(e.eigenvectors[:, 1], [s, -s], 1e-12)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_eig_reconstruction_sweep(n):
    rng = np.random.default_rng(n)
    worst = 0.0
    for _ in range(1000):
        m = random_hermitian(rng, n)
        e = qmat.hermitian_eig(m)
        v = e.eigenvectors
        worst = max(worst, np.abs(m - e.reconstruct()).max(), np.abs(v.conj().T @ v - np.eye(n)).max())
        assert np.all(np.diff(e.eigenvalues) <= 0)
    assert worst < 1e-10


def test_eig_phase_convention_first_component_real_positive(rng):
    e = qmat.hermitian_eig(random_hermitian(rng, 4))
    for k in range(4):
        col = e.eigenvectors[:, k]
        first = col[np.argmax(np.abs(col) > 1e-8)]
        assert abs(first.imag) < 1e-14 and first.real > 0


def test_eig_degenerate_is_deterministic():
    a = qmat.hermitian_eig(np.eye(4))
    b = qmat.hermitian_eig(np.eye(4))
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        qmat.hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_inv_sqrt_examples():
    assert close(qmat.inv_sqrt(np.eye(2)), np.eye(2), 1e-15)
    assert close(qmat.inv_sqrt(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]), 1e-15)
    m = 2 * np.diag([0.7, 0.3])
    assert close(qmat.inv_sqrt(m), np.diag([1 / math.sqrt(1.4), 1 / math.sqrt(0.6)]), 1e-14)


def test_inv_sqrt_property(rng):
    for _ in range(100):
        g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m = g @ g.conj().T + 0.1 * np.eye(3)
        r = qmat.inv_sqrt(m)
        assert close(r @ m @ r, np.eye(3), 1e-9)


def test_inv_sqrt_singular():
    with pytest.raises(SingularOperator):
        qmat.inv_sqrt(np.diag([1.0, 0.0]))


def test_kron_examples():
    assert np.array_equal(qmat.kron(SIGMA[3], SIGMA[0]), np.diag([1, 1, -1, -1]))
    assert np.array_equal(qmat.kron(SIGMA[0], SIGMA[0]), np.eye(4))
    assert np.array_equal(qmat.kron(SIGMA[1], SIGMA[1]), np.fliplr(np.eye(4)))


def test_partial_trace_examples():
    p = np.outer(BELL, BELL.conj())
    assert close(qmat.partial_trace(p, (2, 2), "A"), np.eye(2) / 2, 1e-15)
    ra, rb = np.diag([0.2, 0.8]), np.array([[0.6, 0.1j], [-0.1j, 0.4]])
    assert close(qmat.partial_trace(np.kron(ra, rb), (2, 2), 1), rb, 1e-15)
    assert close(qmat.partial_trace(x_example(), (2, 2), 0), np.diag([0.7, 0.3]), 1e-15)


def test_partial_trace_linear_and_trace_preserving(rng):
    for dims in [(2, 2), (2, 3), (3, 2)]:
        n = dims[0] * dims[1]
        a, b = random_hermitian(rng, n), random_hermitian(rng, n)
        for keep in (0, 1):
            pa = qmat.partial_trace(a, dims, keep)
            assert abs(np.trace(pa) - np.trace(a)) < 1e-12
            lin = qmat.partial_trace(2 * a - 3j * b, dims, keep)
            assert close(lin, 2 * pa - 3j * qmat.partial_trace(b, dims, keep), 1e-12)


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValidationError):
        qmat.partial_trace(np.eye(4), (2, 3), 0)


def test_von_neumann_examples():
    assert abs(qmat.von_neumann_entropy(np.eye(2) / 2) - 1) < 1e-15
    assert abs(qmat.von_neumann_entropy(np.diag([1.0, 0.0]))) < 1e-15
    expected = -0.7 * math.log2(0.7) - 0.3 * math.log2(0.3)
    assert abs(qmat.von_neumann_entropy(np.diag([0.7, 0.3])) - expected) < 1e-14
    assert abs(expected - 0.881291) < 1e-6


def test_von_neumann_rejects_negative():
    with pytest.raises(NotPSD):
        qmat.von_neumann_entropy(np.diag([1.1, -0.1]))


def test_von_neumann_clips_tiny_negative():
    assert qmat.von_neumann_entropy(np.diag([1 + 5e-10, -5e-10])) < 1e-8


def test_von_neumann_additivity(rng):
    for _ in range(50):
        ga = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        gb = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        ra = ga @ ga.conj().T
        rb = gb @ gb.conj().T
        ra /= np.trace(ra).real
        rb /= np.trace(rb).real
        s = qmat.von_neumann_entropy(np.kron(ra, rb))
        assert abs(s - qmat.von_neumann_entropy(ra) - qmat.von_neumann_entropy(rb)) < 1e-10


def test_binary_entropy_examples():
    assert qmat.binary_entropy(0.5) == 1.0
    assert qmat.binary_entropy(0.0) == 0.0
    assert qmat.binary_entropy(1.0) == 0.0
    assert abs(qmat.binary_entropy(0.25) - 0.811278) < 1e-6


def test_binary_entropy_symmetry_grid():
    x = np.linspace(0, 1, 10_000)
    assert np.abs(qmat._h2(x) - qmat._h2(1 - x)).max() < 1e-15


@pytest.mark.parametrize("x", [-0.1, 1.1, float("nan")])
def test_binary_entropy_range(x):
    with pytest.raises(ValidationError):
        qmat.binary_entropy(x)
