"""Upper bounds on tr[tau J_Psi] over five channel families.

For a two-qubit state tau and a channel Psi the pairing tr[tau J_Psi]
depends only on the output-side Bloch vector ``b = bloch(tr_ref tau)``, the
correlation matrix ``N`` of tau, and the transfer matrix of Psi:

    tr[tau J_Psi] = (1/2) (1 + t . b + tr[M Ntil]),

where M is the transfer block of Psi, t its translation, and ``Ntil`` is N
with its second row negated (the sign pattern of the maximally entangled
projector).  Maximizing the right-hand side over each channel family gives
the bounds implemented here:

    D  (constant channels)           (1/2) (1 + ||b||)                 exact
    R  (random unitary mixtures)     (1/2) (1 + max_R tr[R Ntil])      exact
    UE (unital entanglement break.)  (1/2) (1 + s_1)                   upper
    GE (entanglement breaking)       (1/2) (1 + sqrt(||b||^2 + s_1^2)) upper
    C  (all channels)                (1/2) (1 + sqrt(||b||^2 + k^2))   upper

with s_1 the largest singular value and k the Ky Fan (trace) norm of N.
The rotation maximum equals s_1 + s_2 + sign(det Ntil) s_3, which is the
exact value over unitary mixtures; when ||b|| = 0 the same value is already
exact for arbitrary channels, so the C bound switches to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .channels import (
    QubitChannel,
    make_depolarizing,
    make_unitary,
    unitary_from_rotation,
)
from .errors import ValidationError
from .qubit_core import (
    Array,
    bloch_vector,
    correlation_matrix,
    density_from_bloch,
    euclidean_norm,
    kyfan_norm,
    partial_trace,
    rotation_trace_max,
    singular_values,
    svd3,
    validate_state,
)

# correlation signs of the unnormalized maximally entangled projector
_MEL_SIGNS = np.diag([1.0, -1.0, 1.0])

_UNITAL_B_TOL = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """Value of one class bound at a fixed tau.

    ``exact`` records whether the value is the true maximum over the class
    (as opposed to an upper estimate); when an explicit maximizer is cheap
    to construct it is attached as ``witness``.
    """

    class_tag: str
    tau: Array
    value: float
    exact: bool
    witness: QubitChannel | None = None


def channel_overlap(tau, channel: QubitChannel) -> float:
    """The bounded quantity tr[tau J_Psi]."""
    t = validate_state(tau, dim=4, name="tau")
    return float(np.trace(t @ channel.choi).real)


def _moments(tau) -> tuple[Array, Array, Array]:
    t = validate_state(tau, dim=4, name="tau")
    b = bloch_vector(partial_trace(t, keep=1))
    n = correlation_matrix(t)
    return t, b, n


def bound_depolarizing(tau) -> BoundReport:
    """Exact maximum over constant channels: (1/2)(1 + ||b||).

    The maximizing channel prepares the pure state along b (any state when
    b = 0).
    """
    t, b, _ = _moments(tau)
    nb = euclidean_norm(b)
    direction = b / nb if nb > 0.0 else np.array([0.0, 0.0, 0.0])
    witness = make_depolarizing(density_from_bloch(direction))
    return BoundReport("D", t, 0.5 * (1.0 + nb), exact=True, witness=witness)


def _rotation_witness(ntil: Array) -> Array:
    """Rotation R* in SO(3) attaining max tr[R Ntil]."""
    u, _, vt = svd3(ntil)
    d = np.eye(3)
    d[2, 2] = np.linalg.det(u) * np.linalg.det(vt)
    # tr[R ntil] with R = (u d vt)^T picks up singular values s1 + s2 +- s3
    return (u @ d @ vt).T


def bound_unital(tau) -> BoundReport:
    """Exact maximum over random unitary mixtures.

    Equals (1/2)(1 + max_{R in SO(3)} tr[R Ntil]); the maximum is attained
    by a single unitary conjugation, attached as witness.
    """
    t, _, n = _moments(tau)
    ntil = _MEL_SIGNS @ n
    value = 0.5 * (1.0 + rotation_trace_max(ntil))
    witness = make_unitary(unitary_from_rotation(_rotation_witness(ntil)))
    return BoundReport("R", t, value, exact=True, witness=witness)


def fef(tau) -> float:
    """Largest overlap with the maximally entangled state reachable by
    output-side unitaries: (1/4)(1 + max_R tr[R Ntil])."""
    _, _, n = _moments(tau)
    return 0.25 * (1.0 + rotation_trace_max(_MEL_SIGNS @ n))


def bound_unital_eb(tau) -> BoundReport:
    """Upper estimate over unital entanglement breaking channels: (1/2)(1 + s_1)."""
    t, _, n = _moments(tau)
    value = 0.5 * (1.0 + float(singular_values(n)[0]))
    return BoundReport("UE", t, value, exact=False)


def bound_general_eb(tau) -> BoundReport:
    """Upper estimate over entanglement breaking channels:
    (1/2)(1 + sqrt(||b||^2 + s_1^2))."""
    t, b, n = _moments(tau)
    s1 = float(singular_values(n)[0])
    value = 0.5 * (1.0 + math.hypot(euclidean_norm(b), s1))
    return BoundReport("GE", t, value, exact=False)


def bound_all_channels(tau) -> BoundReport:
    """Bound over arbitrary channels.

    For ||b|| <= 1e-9 the output marginal of tau is maximally mixed and the
    unital-mixture value is already the exact maximum over all channels;
    otherwise the upper estimate (1/2)(1 + sqrt(||b||^2 + kyfan(N)^2)) is
    reported with exact=False.
    """
    t, b, n = _moments(tau)
    nb = euclidean_norm(b)
    if nb <= _UNITAL_B_TOL:
        inner = bound_unital(t)
        return BoundReport("C", t, inner.value, exact=True, witness=inner.witness)
    value = 0.5 * (1.0 + math.hypot(nb, kyfan_norm(n)))
    return BoundReport("C", t, value, exact=False)


_BOUND_FUNCTIONS = {
    "D": bound_depolarizing,
    "R": bound_unital,
    "UE": bound_unital_eb,
    "GE": bound_general_eb,
    "C": bound_all_channels,
}


def bound_for_class(tau, class_tag: str) -> BoundReport:
    try:
        fn = _BOUND_FUNCTIONS[class_tag]
    except KeyError:
        raise ValidationError(f"unknown channel class {class_tag!r}") from None
    return fn(tau)


def all_bounds(tau) -> dict[str, BoundReport]:
    t = validate_state(tau, dim=4, name="tau")
    return {tag: _BOUND_FUNCTIONS[tag](t) for tag in ("D", "R", "UE", "GE", "C")}


def dominance_check(tau, tol: float = 1e-12) -> dict[str, float]:
    """Evaluate all five bounds and verify the ordering relations.

    Checks D <= GE <= C, UE <= R <= C and UE <= GE, which hold for every
    tau.  Raises AssertionError on violation beyond ``tol``; returns the
    bound values keyed by class tag.
    """
    reports = all_bounds(tau)
    v = {tag: r.value for tag, r in reports.items()}
    chains = (("D", "GE"), ("GE", "C"), ("UE", "R"), ("R", "C"), ("UE", "GE"))
    for lo, hi in chains:
        if v[lo] > v[hi] + tol:
            raise AssertionError(
                f"bound ordering violated: {lo}={v[lo]!r} > {hi}={v[hi]!r}"
            )
    return v
