"""POVMs and process POVMs (testers) for qubit channels.

A process POVM describes a measurement performed on a channel: prepare a
bipartite input, feed the second factor through the channel, measure both
output factors jointly.  Outcome m occurs with probability

    p_m(Psi) = tr[S_m J_Psi]

where J_Psi is the trace-2 Choi operator and the effects S_m are PSD
operators on reference (x) output satisfying

    sum_m S_m = anc_marginal^T (x) I

for a single-qubit density operator ``anc_marginal`` (the channel-input
marginal of the tester's prepared state).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import QubitChannel
from .errors import ValidationError
from .qubit_core import (
    Array,
    validate_effect,
    validate_psd,
    validate_state,
)

_DOM_TOL = 1e-9


@dataclass(frozen=True)
class POVM:
    """Ordinary POVM: PSD effects summing to the identity."""

    effects: tuple[Array, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.effects) != len(self.labels):
            raise ValidationError("number of labels must match number of effects")


def make_povm(effects, labels=None) -> POVM:
    mats = [np.asarray(e, dtype=complex) for e in effects]
    if not mats:
        raise ValidationError("a POVM needs at least one effect")
    dim = mats[0].shape[0]
    cleaned = tuple(validate_effect(e, dim=dim, name=f"effect {i}") for i, e in enumerate(mats))
    total = sum(cleaned)
    dev = np.abs(total - np.eye(dim)).max()
    if dev > 1e-9:
        raise ValidationError(f"effects do not sum to the identity (deviation {dev:.3e})")
    if labels is None:
        labels = tuple(f"m{i}" for i in range(len(cleaned)))
    else:
        labels = tuple(str(l) for l in labels)
    return POVM(effects=cleaned, labels=labels)


@dataclass(frozen=True)
class ProcessEffect:
    """One outcome of a process POVM, together with its normalizing marginal.

    ``matrix`` is PSD on reference (x) output and must be dominated by
    ``anc_marginal^T (x) I``; the marginal is needed to certify that the
    effect can belong to a physical tester.
    """

    matrix: Array
    anc_marginal: Array

    def __post_init__(self):
        object.__setattr__(self, "matrix", validate_psd(self.matrix, dim=4, name="effect"))
        object.__setattr__(
            self, "anc_marginal", validate_state(self.anc_marginal, dim=2, name="anc_marginal")
        )
        _check_dominated(self.matrix, self.anc_marginal)


def _check_dominated(s: Array, anc_marginal: Array) -> None:
    """Verify S <= anc_marginal^T (x) I via the reference-side conditional.

    The conditional is X^{-1/2} S X^{-1/2} with X = anc_marginal^T (x) I
    (pseudo-inverse on the kernel); domination holds iff S is supported on
    the range of X and the conditional's largest eigenvalue is <= 1 + 1e-9.
    """
    x = np.kron(anc_marginal.T, np.eye(2))
    w, v = np.linalg.eigh(x)
    big = w > 1e-12
    if not np.all(big):
        kernel = v[:, ~big]
        leak = float(np.trace(kernel.conj().T @ s @ kernel).real)
        if leak > _DOM_TOL:
            raise ValidationError(
                f"effect is not dominated by anc_marginal^T (x) I (kernel leakage {leak:.3e})"
            )
    inv_sqrt = np.where(big, 1.0 / np.sqrt(np.where(big, w, 1.0)), 0.0)
    xi = (v * inv_sqrt) @ v.conj().T
    lam = float(np.linalg.eigvalsh(xi @ s @ xi).max())
    if lam > 1.0 + _DOM_TOL:
        raise ValidationError(
            f"effect exceeds its PPOVM normalization (conditional eigenvalue {lam:.6f})"
        )


@dataclass(frozen=True)
class PPOVM:
    """Process POVM: effects on reference (x) output summing to anc_marginal^T (x) I."""

    effects: tuple[Array, ...]
    anc_marginal: Array
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.effects:
            raise ValidationError("a process POVM needs at least one effect")
        marg = validate_state(self.anc_marginal, dim=2, name="anc_marginal")
        cleaned = tuple(
            validate_psd(e, dim=4, name=f"effect {i}") for i, e in enumerate(self.effects)
        )
        labels = self.labels or tuple(f"m{i}" for i in range(len(cleaned)))
        if len(labels) != len(cleaned):
            raise ValidationError("number of labels must match number of effects")
        total = sum(cleaned)
        target = np.kron(marg.T, np.eye(2))
        dev = np.abs(total - target).max()
        if dev > 1e-9:
            raise ValidationError(
                f"effects do not sum to anc_marginal^T (x) I (deviation {dev:.3e})"
            )
        object.__setattr__(self, "effects", cleaned)
        object.__setattr__(self, "anc_marginal", marg)
        object.__setattr__(self, "labels", tuple(str(l) for l in labels))

    def effect(self, key) -> ProcessEffect:
        idx = self.labels.index(key) if isinstance(key, str) else int(key)
        return ProcessEffect(matrix=self.effects[idx], anc_marginal=self.anc_marginal)

    def probabilities(self, channel: QubitChannel) -> dict[str, float]:
        out = {}
        for label, s in zip(self.labels, self.effects):
            out[label] = float(np.trace(s @ channel.choi).real)
        return out


def ancilla_free_ppovm(rho, povm: POVM) -> PPOVM:
    """Tester that feeds the fixed state rho to the channel and measures povm.

    Effects are rho^T (x) E_m, reproducing p_m = tr[E_m Psi(rho)].
    """
    r = validate_state(rho, dim=2, name="input state")
    for e in povm.effects:
        if e.shape != (2, 2):
            raise ValidationError("ancilla-free testers need single-qubit POVM effects")
    effects = tuple(np.kron(r.T, e) for e in povm.effects)
    return PPOVM(effects=effects, anc_marginal=r, labels=povm.labels)


def entangled_ppovm(povm: POVM) -> PPOVM:
    """Tester that sends half of a maximally entangled pair through the channel.

    A joint POVM {E_m} on reference (x) output turns into effects E_m / 2
    with maximally mixed channel-input marginal.
    """
    for e in povm.effects:
        if e.shape != (4, 4):
            raise ValidationError("entangled testers need two-qubit POVM effects")
    effects = tuple(0.5 * e for e in povm.effects)
    return PPOVM(effects=effects, anc_marginal=0.5 * np.eye(2), labels=povm.labels)


def state_probability(effect, rho) -> float:
    """Born probability tr[E rho] for an effect and state of matching dimension."""
    e = np.asarray(effect, dtype=complex)
    dim = e.shape[0]
    r = validate_state(rho, dim=dim, name="state")
    ec = validate_effect(e, dim=dim, name="effect")
    return float(np.trace(ec @ r).real)


def channel_probability(effect, channel: QubitChannel, anc_marginal=None) -> float:
    """Outcome probability tr[S J_Psi] of a process effect on a channel.

    ``effect`` is a :class:`ProcessEffect`, or a raw 4x4 PSD matrix together
    with the ``anc_marginal`` that normalizes its tester.
    """
    if isinstance(effect, ProcessEffect):
        pe = effect
    else:
        if anc_marginal is None:
            raise ValidationError(
                "a raw effect matrix needs an explicit anc_marginal to certify feasibility"
            )
        pe = ProcessEffect(matrix=effect, anc_marginal=anc_marginal)
    p = float(np.trace(pe.matrix @ channel.choi).real)
    # domination guarantees p in [0, 1]; clamp rounding drift only
    return min(max(p, 0.0), 1.0)


def normalize_effect(effect) -> tuple[Array, float]:
    """Split a nonzero PSD effect into (tau, weight) with tau a two-qubit state.

    tau = S / tr(S) and weight = tr(S), so tr[S J] = weight * tr[tau J].
    """
    s = validate_psd(effect, dim=4, name="effect")
    weight = float(np.trace(s).real)
    if weight < 1e-12:
        raise ValidationError("cannot normalize a (near-)zero effect")
    tau = s / weight
    return tau, weight
