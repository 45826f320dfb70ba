import numpy as np
import pytest

from qcbounds.errors import ValidationError
from qcbounds.qubit_core import (
    PAULI,
    bloch_vector,
    correlation_matrix,
    density_from_bloch,
    euclidean_norm,
    fidelity,
    ket,
    ket_orthogonal,
    kyfan_norm,
    partial_trace,
    projector,
    rotation_trace_max,
    singular_values,
    spectral_norm,
    svd3,
    validate_effect,
    validate_state,
)


def _random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def test_svd3_random():
    rng = np.random.default_rng(0)
    for i in range(500):
        scale = 10.0 ** rng.uniform(-6, 3)
        m = scale * rng.normal(size=(3, 3))
        u, s, vt = svd3(m)
        assert np.abs(u @ np.diag(s) @ vt - m).max() < 1e-12 * max(scale, 1.0)
        assert np.abs(u @ u.T - np.eye(3)).max() < 1e-13
        assert np.abs(vt @ vt.T - np.eye(3)).max() < 1e-13
        assert s[0] >= s[1] >= s[2] >= 0
        ref = np.linalg.svd(m, compute_uv=False)
        assert np.abs(s - ref).max() < 1e-11 * max(scale, 1.0)


def test_svd3_structured():
    cases = [
        np.zeros((3, 3)),
        np.eye(3),
        np.diag([3.0, 2.0, 1.0]),
        np.diag([1.0, 1.0, 1.0]),
        np.diag([5.0, 5.0, 0.0]),
        np.diag([-2.0, 1.0, 0.5]),
        np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=float),
        np.outer([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]),
        np.array([[1, 1, 0], [0, 1e-12, 0], [0, 0, 0]], dtype=float),
    ]
    for m in cases:
        u, s, vt = svd3(m)
        assert np.abs(u @ np.diag(s) @ vt - m).max() < 1e-12
        ref = np.linalg.svd(m, compute_uv=False)
        assert np.abs(s - ref).max() < 1e-12


def test_norms():
    rng = np.random.default_rng(1)
    for _ in range(100):
        m = rng.normal(size=(3, 3))
        s = np.linalg.svd(m, compute_uv=False)
        assert abs(kyfan_norm(m) - s.sum()) < 1e-11
        assert abs(spectral_norm(m) - s[0]) < 1e-11
        assert np.abs(singular_values(m) - s).max() < 1e-11


def test_rotation_trace_max_brute():
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = rng.normal(size=(3, 3))
        best = rotation_trace_max(m)
        sampled = max(np.trace(_random_rotation(rng) @ m) for _ in range(2000))
        assert sampled <= best + 1e-12
        # the aligned rotation attains the value
        u, s, vt = svd3(m)
        d = np.eye(3)
        d[2, 2] = np.linalg.det(u) * np.linalg.det(vt)
        r = (u @ d @ vt).T
        assert np.abs(r @ r.T - np.eye(3)).max() < 1e-12
        assert np.linalg.det(r) > 0
        assert abs(np.trace(r @ m) - best) < 1e-12


def test_rotation_trace_max_sign():
    assert abs(rotation_trace_max(np.eye(3)) - 3.0) < 1e-15
    assert abs(rotation_trace_max(-np.eye(3)) - 1.0) < 1e-15
    # det < 0: the smallest singular value enters with a minus sign
    assert abs(rotation_trace_max(np.diag([1.0, 1.0, -1.0])) - 1.0) < 1e-15
    assert abs(rotation_trace_max(np.diag([3.0, 2.0, 1.0])) - 6.0) < 1e-15
    assert abs(rotation_trace_max(np.diag([3.0, 2.0, -1.0])) - 4.0) < 1e-15


def test_kets():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        k = ket(v)
        assert abs(np.linalg.norm(k) - 1) < 1e-13
        kp = ket_orthogonal(k)
        assert abs(np.vdot(k, kp)) < 1e-13
        p = projector(v)
        assert np.abs(p @ p - p).max() < 1e-13
    with pytest.raises(ValidationError):
        ket([0, 0])
    with pytest.raises(ValidationError):
        ket([1, 0, 0])


def test_bloch_roundtrip():
    rng = np.random.default_rng(4)
    for _ in range(50):
        b = rng.normal(size=3)
        b = b / np.linalg.norm(b) * rng.uniform(0, 1)
        rho = density_from_bloch(b)
        assert np.abs(bloch_vector(rho) - b).max() < 1e-13
        assert abs(np.trace(rho) - 1) < 1e-13
    with pytest.raises(ValidationError):
        density_from_bloch([1.0, 1.0, 1.0])


def test_partial_trace():
    rng = np.random.default_rng(5)
    for _ in range(30):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m = np.kron(a, b)
        assert np.abs(partial_trace(m, keep=0) - a * np.trace(b)).max() < 1e-12
        assert np.abs(partial_trace(m, keep=1) - b * np.trace(a)).max() < 1e-12
    with pytest.raises(ValidationError):
        partial_trace(np.eye(4), keep=2)


def test_correlation_matrix_bell():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    p = np.outer(phi, phi)
    n = correlation_matrix(p)
    assert np.abs(n - np.diag([1.0, -1.0, 1.0])).max() < 1e-13
    b = bloch_vector(partial_trace(p, keep=1))
    assert euclidean_norm(b) < 1e-13


def test_validate_state_effect():
    with pytest.raises(ValidationError):
        validate_state(np.diag([0.7, 0.7]))
    with pytest.raises(ValidationError):
        validate_state(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        validate_effect(np.diag([1.5, 0.0]))
    s = validate_state(np.diag([1.0 + 5e-10, -5e-10]))
    assert np.linalg.eigvalsh(s).min() >= 0
    assert abs(np.trace(s) - 1) < 1e-14


def test_fidelity():
    rng = np.random.default_rng(6)
    for _ in range(30):
        a = ket(rng.normal(size=2) + 1j * rng.normal(size=2))
        b = ket(rng.normal(size=2) + 1j * rng.normal(size=2))
        f = fidelity(projector(a), projector(b))
        # sqrt of a near-zero eigenvalue costs half the float precision
        assert abs(f - abs(np.vdot(a, b))) < 1e-7
    assert abs(fidelity(np.eye(2) / 2, np.eye(2) / 2) - 1) < 1e-12
    z0 = projector([1, 0])
    z1 = projector([0, 1])
    assert fidelity(z0, z1) < 1e-9
    assert abs(fidelity(z0, np.eye(2) / 2) - np.sqrt(0.5)) < 1e-12


def test_pauli_algebra():
    for i in range(1, 4):
        assert np.abs(PAULI[i] @ PAULI[i] - np.eye(2)).max() < 1e-15
        assert abs(np.trace(PAULI[i])) < 1e-15
