"""Qubit channels in Kraus, Pauli transfer and Choi representations.

Conventions
-----------
* The Choi operator of a channel Psi is ``J = (id (x) Psi) P+'`` where
  ``P+' = sum_ij |i><j| (x) |i><j|`` is the unnormalized maximally entangled
  projector; hence ``tr J = 2`` and trace preservation reads
  ``partial_trace(J, keep=0) = I`` (reference factor first, output second).
* The Pauli transfer matrix is ``T_mn = (1/2) tr[sigma_m Psi(sigma_n)]``;
  composition of channels multiplies transfer matrices.
* Choi and transfer representations are linked through the weights
  ``eta = (1, 1, -1, 1)``:  ``J = (1/2) sum_mn eta_n T_mn sigma_n (x) sigma_m``.
* A unitary V acts on Bloch vectors as the rotation
  ``O(V)_li = (1/2) tr[sigma_l V sigma_i V*]`` with O(V) in SO(3).

Channel class tags: "D" (constant/depolarizing-to-a-point), "R" (random
unitary mixtures), "UE" (unital entanglement breaking), "GE" (general
entanglement breaking), "C" (no constraint).
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .errors import ValidationError
from .qubit_core import (
    PAULI,
    PSD_TOL,
    Array,
    bloch_vector,
    dagger,
    ket,
    partial_trace,
    svd3,
    validate_hermitian,
    validate_state,
)

ETA = np.array([1.0, 1.0, -1.0, 1.0])

CLASS_TAGS = ("D", "R", "UE", "GE", "C")

_KRAUS_EIG_CUTOFF = 1e-10


def _validate_unitary(u, name: str = "unitary") -> Array:
    a = np.asarray(u, dtype=complex)
    if a.shape != (2, 2):
        raise ValidationError(f"{name} must be 2x2, got shape {a.shape}")
    dev = np.abs(a.conj().T @ a - np.eye(2)).max()
    if dev > 1e-9:
        raise ValidationError(f"{name} is not unitary (max deviation {dev:.3e})")
    return a


def kraus_to_choi(kraus) -> Array:
    j = np.zeros((4, 4), dtype=complex)
    for k in kraus:
        vec = np.empty(4, dtype=complex)
        for i in range(2):
            for b in range(2):
                vec[2 * i + b] = k[b, i]
        j += np.outer(vec, vec.conj())
    return j


def choi_to_kraus(choi) -> tuple[Array, ...]:
    """Kraus operators from a Choi operator; eigenvalues below 1e-10 are dropped."""
    w, v = np.linalg.eigh(np.asarray(choi, dtype=complex))
    ops = []
    for idx in range(4):
        if w[idx] <= _KRAUS_EIG_CUTOFF:
            continue
        vec = v[:, idx] * math.sqrt(float(w[idx]))
        k = np.empty((2, 2), dtype=complex)
        for i in range(2):
            for b in range(2):
                k[b, i] = vec[2 * i + b]
        ops.append(k)
    if not ops:
        raise ValidationError("Choi operator has no eigenvalue above the Kraus cutoff")
    return tuple(ops)


def kraus_to_ptm(kraus) -> Array:
    t = np.zeros((4, 4))
    for m in range(4):
        for n in range(4):
            acc = 0.0
            for k in kraus:
                acc += 0.5 * np.trace(PAULI[m] @ k @ PAULI[n] @ dagger(k)).real
            t[m, n] = acc
    return t


def ptm_to_choi(t) -> Array:
    j = np.zeros((4, 4), dtype=complex)
    for m in range(4):
        for n in range(4):
            if t[m, n] != 0.0:
                j += 0.5 * ETA[n] * t[m, n] * np.kron(PAULI[n], PAULI[m])
    return j


def choi_to_ptm(choi) -> Array:
    t = np.empty((4, 4))
    for m in range(4):
        for n in range(4):
            t[m, n] = 0.5 * ETA[n] * np.trace(choi @ np.kron(PAULI[n], PAULI[m])).real
    return t


def rotation_from_unitary(u) -> Array:
    """Bloch rotation O(u) in SO(3), O_li = (1/2) tr[sigma_l u sigma_i u*]."""
    a = _validate_unitary(u)
    o = np.empty((3, 3))
    for l in range(3):
        for i in range(3):
            o[l, i] = 0.5 * np.trace(PAULI[l + 1] @ a @ PAULI[i + 1] @ dagger(a)).real
    return o


def unitary_from_rotation(r) -> Array:
    """SU(2) element with Bloch rotation equal to r, via the axis-angle form.

    Of the two preimages the one whose first entry with magnitude above
    1e-9 (scanning Re/Im of the row-major entries) is positive is returned,
    so the lift is deterministic.
    """
    a = np.asarray(r, dtype=float)
    if a.shape != (3, 3):
        raise ValidationError(f"expected a 3x3 rotation matrix, got shape {a.shape}")
    if np.abs(a.T @ a - np.eye(3)).max() > 1e-7:
        raise ValidationError("matrix is not orthogonal")
    det = np.linalg.det(a)
    if abs(det - 1.0) > 1e-7:
        raise ValidationError(f"matrix is not a rotation (det {det:.6f})")
    cos_th = max(-1.0, min(1.0, 0.5 * (np.trace(a) - 1.0)))
    theta = math.acos(cos_th)
    if theta < 1e-8:
        u = np.eye(2, dtype=complex)
    elif math.pi - theta < 1e-6:
        # R = 2 n n^T - I at angle pi; take the axis from the largest diagonal
        d = np.clip((np.diag(a) + 1.0) / 2.0, 0.0, None)
        i = int(np.argmax(d))
        n = np.zeros(3)
        n[i] = math.sqrt(d[i])
        for j in range(3):
            if j != i:
                n[j] = (a[i, j] + a[j, i]) / (4.0 * n[i])
        n /= np.linalg.norm(n)
        u = -1.0j * (n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3])
    else:
        s2 = 2.0 * math.sin(theta)
        n = np.array(
            [a[2, 1] - a[1, 2], a[0, 2] - a[2, 0], a[1, 0] - a[0, 1]]
        ) / s2
        n /= np.linalg.norm(n)
        nsig = n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3]
        u = math.cos(theta / 2.0) * np.eye(2) - 1.0j * math.sin(theta / 2.0) * nsig
    for part in (u[0, 0].real, u[0, 0].imag, u[0, 1].real, u[0, 1].imag,
                 u[1, 0].real, u[1, 0].imag, u[1, 1].real, u[1, 1].imag):
        if abs(part) > 1e-9:
            if part < 0.0:
                u = -u
            break
    return u


class QubitChannel:
    """A completely positive trace preserving map on qubit operators.

    All three representations are materialized at construction and kept in
    sync; arrays are read-only.  ``class_tag`` is an optional label from
    ``CLASS_TAGS`` recording which channel family the instance belongs to.
    """

    __slots__ = ("kraus", "ptm", "choi", "class_tag")

    def __init__(self, kraus, ptm, choi, class_tag: str | None = None):
        if class_tag is not None and class_tag not in CLASS_TAGS:
            raise ValidationError(f"unknown class tag {class_tag!r}")
        self.kraus = tuple(np.asarray(k, dtype=complex) for k in kraus)
        self.ptm = np.asarray(ptm, dtype=float)
        self.choi = np.asarray(choi, dtype=complex)
        self.class_tag = class_tag
        for k in self.kraus:
            k.setflags(write=False)
        self.ptm.setflags(write=False)
        self.choi.setflags(write=False)

    @classmethod
    def from_kraus(cls, kraus, class_tag: str | None = None) -> "QubitChannel":
        ops = [np.asarray(k, dtype=complex) for k in kraus]
        if not ops:
            raise ValidationError("at least one Kraus operator is required")
        for k in ops:
            if k.shape != (2, 2):
                raise ValidationError(f"Kraus operators must be 2x2, got shape {k.shape}")
        tp = sum(dagger(k) @ k for k in ops)
        dev = np.abs(tp - np.eye(2)).max()
        if dev > 1e-9:
            raise ValidationError(f"Kraus set is not trace preserving (deviation {dev:.3e})")
        choi = kraus_to_choi(ops)
        return cls(ops, choi_to_ptm(choi), choi, class_tag)

    @classmethod
    def from_choi(cls, choi, class_tag: str | None = None) -> "QubitChannel":
        j = validate_hermitian(choi, dim=4, name="Choi operator")
        w, v = np.linalg.eigh(j)
        if w.min() < -PSD_TOL:
            raise ValidationError(
                f"Choi operator is not positive semidefinite (min eigenvalue {w.min():.3e})"
            )
        j = (v * np.clip(w, 0.0, None)) @ v.conj().T
        tr = float(np.trace(j).real)
        if abs(tr - 2.0) > 1e-8:
            raise ValidationError(f"Choi operator must have trace 2, got {tr!r}")
        marginal = partial_trace(j, keep=0)
        dev = np.abs(marginal - np.eye(2)).max()
        if dev > 1e-8:
            raise ValidationError(
                f"channel is not trace preserving (reference marginal deviates by {dev:.3e})"
            )
        return cls(choi_to_kraus(j), choi_to_ptm(j), j, class_tag)

    @classmethod
    def from_ptm(cls, t, class_tag: str | None = None) -> "QubitChannel":
        a = np.asarray(t)
        if a.shape != (4, 4):
            raise ValidationError(f"transfer matrix must be 4x4, got shape {a.shape}")
        if np.iscomplexobj(a):
            if np.abs(a.imag).max() > 1e-9:
                raise ValidationError("transfer matrix must be real")
            a = a.real
        a = np.array(a, dtype=float)
        top = np.abs(a[0] - np.array([1.0, 0.0, 0.0, 0.0])).max()
        if top > 1e-9:
            raise ValidationError(
                f"transfer matrix first row must be (1,0,0,0) (deviation {top:.3e})"
            )
        a[0] = (1.0, 0.0, 0.0, 0.0)
        choi = ptm_to_choi(a)
        w, v = np.linalg.eigh(choi)
        if w.min() < -PSD_TOL:
            raise ValidationError(
                f"transfer matrix is not completely positive (min Choi eigenvalue {w.min():.3e})"
            )
        choi = (v * np.clip(w, 0.0, None)) @ v.conj().T
        return cls(choi_to_kraus(choi), a, choi, class_tag)

    def apply(self, operator) -> Array:
        a = np.asarray(operator, dtype=complex)
        if a.shape != (2, 2):
            raise ValidationError(f"expected a 2x2 operator, got shape {a.shape}")
        out = np.zeros((2, 2), dtype=complex)
        for k in self.kraus:
            out += k @ a @ dagger(k)
        return out

    def compose(self, inner: "QubitChannel") -> "QubitChannel":
        """The channel ``self o inner`` (inner acts first)."""
        return QubitChannel.from_ptm(self.ptm @ inner.ptm)

    @property
    def ptm_block(self) -> Array:
        """Central 3x3 block of the transfer matrix."""
        return self.ptm[1:, 1:]

    @property
    def translation(self) -> Array:
        """Bloch translation (first column of the transfer matrix block)."""
        return self.ptm[1:, 0]

    def is_unital(self, tol: float = 1e-9) -> bool:
        return bool(np.abs(self.translation).max() <= tol)

    def __repr__(self) -> str:  # pragma: no cover
        tag = f", class={self.class_tag}" if self.class_tag else ""
        return f"QubitChannel(kraus_rank={len(self.kraus)}{tag})"


def identity_channel() -> QubitChannel:
    return QubitChannel.from_kraus([np.eye(2)], class_tag="R")


def make_depolarizing(rho) -> QubitChannel:
    """The constant channel A -> tr(A) rho."""
    r = validate_state(rho, dim=2, name="target state")
    b = bloch_vector(r)
    t = np.zeros((4, 4))
    t[0, 0] = 1.0
    t[1:, 0] = b
    return QubitChannel.from_ptm(t, class_tag="D")


def make_unitary(u) -> QubitChannel:
    return QubitChannel.from_kraus([_validate_unitary(u)], class_tag="R")


def make_random_unitary(weights, unitaries) -> QubitChannel:
    """Mixture sum_i p_i U_i A U_i* of unitary conjugations."""
    p = np.asarray(weights, dtype=float).reshape(-1)
    us = [_validate_unitary(u, name=f"unitary {i}") for i, u in enumerate(unitaries)]
    if p.shape[0] != len(us) or p.shape[0] == 0:
        raise ValidationError("weights and unitaries must be nonempty and match in length")
    if p.min() < -1e-12:
        raise ValidationError(f"weights must be nonnegative, got min {p.min():.3e}")
    s = float(p.sum())
    if abs(s - 1.0) > 1e-9:
        raise ValidationError(f"weights must sum to one, got {s!r}")
    p = np.clip(p, 0.0, None) / s
    kraus = [math.sqrt(float(pi)) * u for pi, u in zip(p, us) if pi > 0.0]
    return QubitChannel.from_kraus(kraus, class_tag="R")


def make_extreme_cq(out0, out1, basis) -> QubitChannel:
    """Measure in an orthonormal basis, prepare out0 or out1 accordingly.

    ``A -> <b0|A|b0> |out0><out0| + <b1|A|b1> |out1><out1|``.
    """
    b0, b1 = (ket(b) for b in basis)
    if abs(np.vdot(b0, b1)) > 1e-9:
        raise ValidationError("measurement basis must be orthonormal")
    k0 = np.outer(ket(out0), b0.conj())
    k1 = np.outer(ket(out1), b1.conj())
    return QubitChannel.from_kraus([k0, k1], class_tag="GE")


@dataclass(frozen=True)
class GeneralizedExtremePoint:
    """Parameters (v, w, u1, u2) of a generalized extreme channel.

    The channel is ``Psi_v o Lambda(u1, u2) o Psi_w`` where Psi_v, Psi_w are
    unitary conjugations and Lambda has the transfer matrix

        [[1, 0, 0, 0],
         [0, cos u1, 0, 0],
         [0, 0, cos u2, 0],
         [sin u1 sin u2, 0, 0, cos u1 cos u2]].
    """

    v: Array
    w: Array
    u1: float
    u2: float


def core_extreme_ptm(u1: float, u2: float) -> Array:
    c1, s1 = math.cos(u1), math.sin(u1)
    c2, s2 = math.cos(u2), math.sin(u2)
    t = np.zeros((4, 4))
    t[0, 0] = 1.0
    t[1, 1] = c1
    t[2, 2] = c2
    t[3, 0] = s1 * s2
    t[3, 3] = c1 * c2
    return t


def make_generalized_extreme(point: GeneralizedExtremePoint) -> QubitChannel:
    v = _validate_unitary(point.v, name="v")
    w = _validate_unitary(point.w, name="w")
    tv = np.eye(4)
    tv[1:, 1:] = rotation_from_unitary(v)
    tw = np.eye(4)
    tw[1:, 1:] = rotation_from_unitary(w)
    t = tv @ core_extreme_ptm(point.u1, point.u2) @ tw
    return QubitChannel.from_ptm(t, class_tag="C")


@dataclass(frozen=True)
class UnitalCanonicalForm:
    """Decomposition Psi = Psi_v o Lambda o Psi_w of a unital channel.

    ``lambdas`` are the signed axis scalings of the diagonal map Lambda,
    ordered by descending magnitude; v and w are the SU(2) factors.
    """

    v: Array
    w: Array
    lambdas: Array


def unital_canonical_decomposition(channel: QubitChannel) -> UnitalCanonicalForm:
    """Split a unital channel into rotations around a diagonal signed-scaling map.

    The transfer block M factors as O(v) diag(lambdas) O(w); both orthogonal
    factors are forced into SO(3) by flipping the sign of the third singular
    value together with the highest-index column of the offending factor.
    """
    if not channel.is_unital():
        raise ValidationError("canonical decomposition requires a unital channel")
    m = channel.ptm_block
    u, s, vt = svd3(m)
    lam = s.copy()
    u = u.copy()
    vt = vt.copy()
    if np.linalg.det(u) < 0.0:
        u[:, 2] = -u[:, 2]
        lam[2] = -lam[2]
    if np.linalg.det(vt) < 0.0:
        vt[2, :] = -vt[2, :]
        lam[2] = -lam[2]
    return UnitalCanonicalForm(
        v=unitary_from_rotation(u),
        w=unitary_from_rotation(vt),
        lambdas=lam,
    )


def is_entanglement_breaking_unital(channel: QubitChannel, tol: float = 1e-9) -> bool:
    """Whether a unital channel destroys all entanglement: sum |lambda_i| <= 1."""
    form = unital_canonical_decomposition(channel)
    return bool(np.abs(form.lambdas).sum() <= 1.0 + tol)
