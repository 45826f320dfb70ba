import numpy as np
import pytest

from qcbounds.bounds import bound_for_class, channel_overlap
from qcbounds.errors import ValidationError
from qcbounds.oracle import OracleConfig, dominance_sweep, maximize
from qcbounds.sampling import random_mes_mixture, random_tau

CFG = OracleConfig(n_starts=24, refine_iters=400, seed=0)


def test_oracle_recovers_exact_bounds():
    rng = np.random.default_rng(0)
    for _ in range(10):
        tau = random_tau(rng)
        for tag in ("D", "R"):
            res = maximize(tau, tag, CFG)
            bound = bound_for_class(tau, tag).value
            assert res.best_value <= bound + 1e-9
            assert bound - res.best_value < 1e-6


def test_oracle_exact_on_unital_marginal():
    rng = np.random.default_rng(1)
    for _ in range(6):
        tau = random_mes_mixture(rng)
        res = maximize(tau, "C", CFG)
        rep = bound_for_class(tau, "C")
        assert rep.exact
        assert res.best_value <= rep.value + 1e-9
        assert rep.value - res.best_value < 1e-6


def test_oracle_never_exceeds_estimates():
    rng = np.random.default_rng(2)
    for _ in range(5):
        tau = random_tau(rng)
        for tag in ("UE", "GE", "C"):
            res = maximize(tau, tag, CFG)
            assert res.best_value <= bound_for_class(tau, tag).value + 1e-9


def test_oracle_witness_matches_value():
    rng = np.random.default_rng(3)
    for _ in range(5):
        tau = random_tau(rng)
        for tag in ("D", "R", "UE", "GE", "C"):
            res = maximize(tau, tag, CFG)
            assert res.witness.class_tag == tag
            assert abs(channel_overlap(tau, res.witness) - res.best_value) < 1e-9


def test_oracle_deterministic():
    rng = np.random.default_rng(4)
    tau = random_tau(rng)
    for tag in ("D", "R", "UE", "GE", "C"):
        r1 = maximize(tau, tag, CFG)
        r2 = maximize(tau, tag, CFG)
        assert r1.best_value == r2.best_value
        assert np.array_equal(r1.params, r2.params)
        assert r1.evaluations == r2.evaluations
        assert r1.start_index == r2.start_index


def test_oracle_config_validation():
    with pytest.raises(ValidationError):
        OracleConfig(n_starts=0)
    with pytest.raises(ValidationError):
        maximize(np.eye(4) / 4, "X", CFG)


def test_dominance_sweep_small():
    for tag in ("D", "R", "UE", "GE", "C"):
        rep = dominance_sweep(tag, n_tau=5, n_channels=200, seed=1)
        assert rep.n_pairs == 1000
        assert rep.n_violations == 0
        assert rep.max_excess <= rep.tol
