"""Detecting that a noisy identity channel is not entanglement breaking.

The channel family is ``Psi_w = w id + (1-w) (complete depolarization)``
with transfer matrix diag(1, w, w, w); it is entanglement breaking exactly
when 3|w| <= 1.  Two experiments certify "not entanglement breaking" by
beating the best outcome probability any unital entanglement breaking
channel could produce:

* entangled scheme: send half of a maximally entangled pair through the
  channel and project onto the maximally entangled state.  Outcome
  probability (1 + 3w) / 4, to beat threshold 1/2.
* ancilla-free scheme: prepare |0>, |+> or |+i> uniformly at random, feed
  it to the channel and measure the projector onto the prepared state.
  Success probability (1 + w) / 2, to beat threshold 2/3.

Both reduce to the verdict "not entanglement breaking" iff w > 1/3 (up to
the 1e-12 comparison band).
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .bounds import bound_unital_eb
from .channels import QubitChannel
from .errors import ValidationError
from .measurement import (
    PPOVM,
    ancilla_free_ppovm,
    entangled_ppovm,
    make_povm,
    normalize_effect,
)
from .qubit_core import projector

NOT_EB = "not-EB"
INCONCLUSIVE = "inconclusive"

_W_TOL = 1e-12

_KET_0 = np.array([1.0, 0.0], dtype=complex)
_KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
_KET_PLUS_Y = np.array([1.0, 1.0j], dtype=complex) / math.sqrt(2.0)
ANCILLA_FREE_INPUTS = (_KET_0, _KET_PLUS, _KET_PLUS_Y)


def werner_channel(w: float) -> QubitChannel:
    """Convex mixture of the identity with complete depolarization, weight w on id."""
    w = _check_weight(w)
    t = np.diag([1.0, w, w, w])
    return QubitChannel.from_ptm(t, class_tag="R")


def _check_weight(w: float) -> float:
    if not -1e-12 <= w <= 1.0 + 1e-12:
        raise ValidationError(f"weight w must lie in [0, 1], got {w!r}")
    return float(w)


def prob_entangled_input(w: float) -> float:
    """Closed form (1 + 3w) / 4 of the entangled-scheme outcome probability."""
    return 0.25 * (1.0 + 3.0 * _check_weight(w))


def prob_ancilla_free(w: float) -> float:
    """Closed form (1 + w) / 2 of the ancilla-free success probability."""
    return 0.5 * (1.0 + _check_weight(w))


def entangled_scheme() -> PPOVM:
    """Maximally entangled input, projective same/other measurement."""
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1.0 / math.sqrt(2.0)
    p_ent = np.outer(phi, phi.conj())
    povm = make_povm([p_ent, np.eye(4) - p_ent], labels=("entangled", "other"))
    return entangled_ppovm(povm)


def ancilla_free_scheme() -> tuple[PPOVM, ...]:
    """One tester per prepared state, measuring the prepared-state projector."""
    testers = []
    for vec in ANCILLA_FREE_INPUTS:
        proj = projector(vec)
        povm = make_povm([proj, np.eye(2) - proj], labels=("same", "other"))
        testers.append(ancilla_free_ppovm(proj, povm))
    return tuple(testers)


def measured_probability(channel: QubitChannel, scheme: str) -> float:
    """Outcome probability of a scheme evaluated through the tester machinery."""
    if scheme == "entangled":
        return entangled_scheme().probabilities(channel)["entangled"]
    if scheme == "ancilla-free":
        testers = ancilla_free_scheme()
        return sum(t.probabilities(channel)["same"] for t in testers) / len(testers)
    raise ValidationError(f"unknown scheme {scheme!r}, expected 'entangled' or 'ancilla-free'")


def scheme_threshold(scheme: str) -> float:
    """Largest probability any unital entanglement breaking channel can give.

    Computed from the unital-EB bound of the scheme's (averaged) effect, not
    hard-coded: weight * (1/2)(1 + s_1).
    """
    if scheme == "entangled":
        effect = entangled_scheme().effects[0]
    elif scheme == "ancilla-free":
        testers = ancilla_free_scheme()
        effect = sum(t.effects[0] for t in testers) / len(testers)
    else:
        raise ValidationError(f"unknown scheme {scheme!r}, expected 'entangled' or 'ancilla-free'")
    tau, weight = normalize_effect(effect)
    return weight * bound_unital_eb(tau).value


# slope and intercept of w -> probability, used to invert measured values
_SCHEME_AFFINE = {"entangled": (0.75, 0.25), "ancilla-free": (0.5, 0.5)}


@dataclass(frozen=True)
class DetectionResult:
    scheme: str
    w: float
    probability: float
    threshold: float
    verdict: str
    shots: int | None = None
    p_hat: float | None = None
    interval: tuple[float, float] | None = None


def detect_not_eb(w: float, scheme: str = "entangled") -> DetectionResult:
    """Compare the scheme probability against its unital-EB threshold.

    The verdict is "not-EB" iff the probability exceeds the threshold by
    more than the 1e-12 band (equivalently w > 1/3 + 1e-12 for either
    scheme); otherwise the experiment is inconclusive.
    """
    if scheme == "entangled":
        p = prob_entangled_input(w)
    elif scheme == "ancilla-free":
        p = prob_ancilla_free(w)
    else:
        raise ValidationError(f"unknown scheme {scheme!r}")
    thr = scheme_threshold(scheme)
    slope, _ = _SCHEME_AFFINE[scheme]
    verdict = NOT_EB if p - thr > slope * _W_TOL else INCONCLUSIVE
    return DetectionResult(scheme=scheme, w=w, probability=p, threshold=thr, verdict=verdict)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValidationError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def detect_not_eb_sampled(
    w: float, scheme: str, shots: int, seed: int = 0, z: float = 1.96
) -> DetectionResult:
    """Finite-sample variant: Bernoulli draws of the scheme probability.

    The verdict is "not-EB" only when the Wilson lower confidence bound
    clears the threshold.
    """
    if shots <= 0:
        raise ValidationError("shots must be positive")
    exact = detect_not_eb(w, scheme)
    rng = np.random.Generator(np.random.PCG64(seed))
    successes = int(rng.binomial(shots, exact.probability))
    p_hat = successes / shots
    lo, hi = wilson_interval(successes, shots, z=z)
    verdict = NOT_EB if lo > exact.threshold else INCONCLUSIVE
    return DetectionResult(
        scheme=scheme,
        w=w,
        probability=exact.probability,
        threshold=exact.threshold,
        verdict=verdict,
        shots=shots,
        p_hat=p_hat,
        interval=(lo, hi),
    )


@dataclass(frozen=True)
class SweepRow:
    w: float
    p_entangled: float
    p_ancilla_free: float
    threshold_entangled: float
    threshold_ancilla_free: float
    verdict_entangled: str
    verdict_ancilla_free: str


def threshold_sweep(n_points: int = 101) -> list[SweepRow]:
    """Both schemes on a uniform w grid over the full family [0, 1]."""
    if n_points < 2:
        raise ValidationError("n_points must be at least 2")
    thr_ent = scheme_threshold("entangled")
    thr_af = scheme_threshold("ancilla-free")
    rows = []
    for w in np.linspace(0.0, 1.0, n_points):
        w = float(w)
        p_ent = prob_entangled_input(w)
        p_af = prob_ancilla_free(w)
        rows.append(
            SweepRow(
                w=w,
                p_entangled=p_ent,
                p_ancilla_free=p_af,
                threshold_entangled=thr_ent,
                threshold_ancilla_free=thr_af,
                verdict_entangled=NOT_EB if p_ent - thr_ent > 0.75 * _W_TOL else INCONCLUSIVE,
                verdict_ancilla_free=NOT_EB if p_af - thr_af > 0.5 * _W_TOL else INCONCLUSIVE,
            )
        )
    return rows
