import numpy as np
import pytest

from qcbounds.bounds import (
    all_bounds,
    bound_all_channels,
    bound_depolarizing,
    bound_for_class,
    bound_general_eb,
    bound_unital,
    bound_unital_eb,
    channel_overlap,
    dominance_check,
    fef,
)
from qcbounds.channels import identity_channel
from qcbounds.errors import ValidationError
from qcbounds.qubit_core import projector
from qcbounds.sampling import random_tau, random_unitary

BELL = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2.0


def _three_bell_mixture():
    phip = np.array([1, 0, 0, 1]) / np.sqrt(2)
    phim = np.array([1, 0, 0, -1]) / np.sqrt(2)
    psip = np.array([0, 1, 1, 0]) / np.sqrt(2)
    return (np.outer(phip, phip) + np.outer(phim, phim) + np.outer(psip, psip)) / 3.0


def test_maximally_entangled_golden():
    v = {t: r.value for t, r in all_bounds(BELL).items()}
    assert abs(v["D"] - 0.5) < 1e-14
    assert abs(v["R"] - 2.0) < 1e-14
    assert abs(v["UE"] - 1.0) < 1e-14
    assert abs(v["GE"] - 1.0) < 1e-14
    assert abs(v["C"] - 2.0) < 1e-14
    r = bound_all_channels(BELL)
    assert r.exact
    assert abs(channel_overlap(BELL, identity_channel()) - 2.0) < 1e-14


def test_product_state_golden():
    tau = np.kron(projector([1, 0]), projector([1, 0]))
    v = {t: r.value for t, r in all_bounds(tau).items()}
    assert abs(v["D"] - 1.0) < 1e-14
    assert abs(v["R"] - 1.0) < 1e-14
    assert abs(v["UE"] - 1.0) < 1e-14
    assert abs(v["GE"] - 0.5 * (1 + np.sqrt(2))) < 1e-12
    assert abs(v["C"] - 0.5 * (1 + np.sqrt(2))) < 1e-12


def test_maximally_mixed_golden():
    tau = np.eye(4) / 4.0
    for t, r in all_bounds(tau).items():
        assert abs(r.value - 0.5) < 1e-14
    assert abs(fef(tau) - 0.25) < 1e-14
    assert abs(fef(BELL) - 1.0) < 1e-14


def test_three_bell_mixture_positive_det():
    # correlation matrix diag(1/3, 1/3, 1/3): the identity channel gives 2/3
    # and no unitary mixture exceeds it, although the singular values sum to 1
    tau = _three_bell_mixture()
    r = bound_unital(tau)
    assert abs(r.value - 2.0 / 3.0) < 1e-12
    assert abs(channel_overlap(tau, identity_channel()) - 2.0 / 3.0) < 1e-12
    c = bound_all_channels(tau)
    assert c.exact
    assert abs(c.value - 2.0 / 3.0) < 1e-12
    # independent sweep: J_U = (I (x) U) P' (I (x) U)* built without the library
    rng = np.random.default_rng(0)
    n = 50000
    z = rng.normal(size=(n, 2, 2)) + 1j * rng.normal(size=(n, 2, 2))
    q, rr = np.linalg.qr(z)
    u = q * (np.diagonal(rr, axis1=1, axis2=2) / np.abs(np.diagonal(rr, axis1=1, axis2=2)))[:, None, :]
    iu = np.zeros((n, 4, 4), dtype=complex)
    iu[:, :2, :2] = u
    iu[:, 2:, 2:] = u
    pp = 2.0 * BELL
    overlaps = np.einsum("ab,nbc,cd,nad->n", tau, iu, pp, iu.conj()).real
    assert overlaps.max() <= r.value + 1e-12
    assert overlaps.max() > r.value - 1e-3


def test_witness_attainment():
    rng = np.random.default_rng(1)
    for _ in range(100):
        tau = random_tau(rng)
        rd = bound_depolarizing(tau)
        assert abs(channel_overlap(tau, rd.witness) - rd.value) < 1e-9
        ru = bound_unital(tau)
        assert abs(channel_overlap(tau, ru.witness) - ru.value) < 1e-9
        rc = bound_all_channels(tau)
        if rc.exact:
            assert abs(channel_overlap(tau, rc.witness) - rc.value) < 1e-9


def test_fef_relation_and_invariance():
    rng = np.random.default_rng(2)
    for _ in range(50):
        tau = random_tau(rng)
        assert abs(2.0 * fef(tau) - bound_unital(tau).value) < 1e-12
        a = random_unitary(rng)
        b = random_unitary(rng)
        u = np.kron(a, b)
        assert abs(fef(u @ tau @ u.conj().T) - fef(tau)) < 1e-9


def test_dominance_chains():
    rng = np.random.default_rng(3)
    for _ in range(200):
        v = dominance_check(random_tau(rng))
        assert set(v) == {"D", "R", "UE", "GE", "C"}


def test_exactness_flags():
    rng = np.random.default_rng(4)
    for _ in range(20):
        tau = random_tau(rng)
        assert bound_depolarizing(tau).exact
        assert bound_unital(tau).exact
        assert not bound_unital_eb(tau).exact
        assert not bound_general_eb(tau).exact


def test_bound_for_class_rejects_unknown():
    with pytest.raises(ValidationError):
        bound_for_class(BELL, "X")
