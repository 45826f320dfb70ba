"""Brute-force maximization of tr[tau J_Psi] over each channel family.

This is the certification side of the package: instead of trusting the
closed-form bounds, each family is parameterized explicitly and the pairing
is maximized by multistart coordinate-wise golden-section search.

Parameterizations (all angles in radians):

    D   Bloch ball of the prepared state: (r, theta, phi)
    R   one unitary conjugation via ZYZ Euler angles (a, b, g); a mixture
        never beats its best member, so unitaries suffice
    UE  rotations O(v), O(w) (ZYZ each) around a diagonal scaling with
        magnitudes on the simplex boundary |l1|+|l2|+|l3| = 1 via (t1, t2);
        the pairing is linear in the signed scalings, so the optimal sign
        pattern is resolved in closed form per evaluation
    GE  measure-and-prepare extreme channels: Bloch angles of the two
        prepared states and of the measurement basis axis
    C   generalized extreme channels: core angles (u1, u2) plus two ZYZ
        rotation triples

Runs are deterministic: start k draws its parameters from a child of
``SeedSequence(seed)``, refinement is derivative-free and sequential, and
ties in the final reduction resolve to the lowest start index.

Coordinate descent over Euler angles stalls near gimbal lock (middle angle
close to 0 or pi), so the best start gets a final polish that re-optimizes
every rotation block through small axis-angle increments absorbed into the
current rotation; that chart is centered at the iterate and has no
degenerate directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .bounds import bound_for_class
from .channels import QubitChannel, make_depolarizing, make_unitary, unitary_from_rotation
from .errors import ValidationError
from .qubit_core import (
    Array,
    bloch_vector,
    correlation_matrix,
    density_from_bloch,
    partial_trace,
    validate_state,
)
from .sampling import random_channel, random_tau

_TWO_PI = 2.0 * math.pi
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_LINE_ITERS = 24
_WIDTH_SHRINK = 0.4

CLASS_DIMS = {"D": 3, "R": 3, "UE": 8, "GE": 6, "C": 8}


@dataclass(frozen=True)
class OracleConfig:
    """Search budget: number of random starts, golden-section iterations
    per start (spread over coordinate sweeps), and the base seed."""

    n_starts: int = 256
    refine_iters: int = 400
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1 or self.refine_iters < 1:
            raise ValidationError("n_starts and refine_iters must be positive")


@dataclass(frozen=True)
class OracleResult:
    class_tag: str
    best_value: float
    params: Array
    witness: QubitChannel
    evaluations: int
    start_index: int


def _rot(a: float, b: float, g: float) -> tuple:
    """Row-major ZYZ rotation Rz(a) Ry(b) Rz(g)."""
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    cg, sg = math.cos(g), math.sin(g)
    return (
        ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb,
        sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb,
        -sb * cg, sb * sg, cb,
    )


def _trace_prod(a: tuple, b: tuple) -> float:
    """tr(A B) for row-major flat 3x3 tuples."""
    return (
        a[0] * b[0] + a[1] * b[3] + a[2] * b[6]
        + a[3] * b[1] + a[4] * b[4] + a[5] * b[7]
        + a[6] * b[2] + a[7] * b[5] + a[8] * b[8]
    )


def _mat_mul(a: tuple, b: tuple) -> tuple:
    return (
        a[0] * b[0] + a[1] * b[3] + a[2] * b[6],
        a[0] * b[1] + a[1] * b[4] + a[2] * b[7],
        a[0] * b[2] + a[1] * b[5] + a[2] * b[8],
        a[3] * b[0] + a[4] * b[3] + a[5] * b[6],
        a[3] * b[1] + a[4] * b[4] + a[5] * b[7],
        a[3] * b[2] + a[4] * b[5] + a[5] * b[8],
        a[6] * b[0] + a[7] * b[3] + a[8] * b[6],
        a[6] * b[1] + a[7] * b[4] + a[8] * b[7],
        a[6] * b[2] + a[7] * b[5] + a[8] * b[8],
    )


_IDENTITY3 = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


def _axis_rot(w0: float, w1: float, w2: float) -> tuple:
    """Rodrigues rotation for the rotation vector (w0, w1, w2), row-major."""
    th = math.sqrt(w0 * w0 + w1 * w1 + w2 * w2)
    if th < 1e-15:
        return _IDENTITY3
    k0, k1, k2 = w0 / th, w1 / th, w2 / th
    c, s = math.cos(th), math.sin(th)
    d = 1.0 - c
    return (
        c + d * k0 * k0, d * k0 * k1 - s * k2, d * k0 * k2 + s * k1,
        d * k1 * k0 + s * k2, c + d * k1 * k1, d * k1 * k2 - s * k0,
        d * k2 * k0 - s * k1, d * k2 * k1 + s * k0, c + d * k2 * k2,
    )


def _matrix_to_euler(m: tuple) -> tuple[float, float, float]:
    """ZYZ Euler angles of a row-major rotation tuple, inverse of :func:`_rot`."""
    sb = math.hypot(m[2], m[5])
    b = math.atan2(sb, m[8])
    if sb > 1e-12:
        a = math.atan2(m[5], m[2])
        g = math.atan2(m[7], -m[6])
    elif m[8] > 0.0:
        a = math.atan2(m[3], m[0])
        g = 0.0
    else:
        a = math.atan2(-m[3], -m[0])
        g = 0.0
    return a % _TWO_PI, b, g % _TWO_PI


class _Objective:
    """Pairing tr[tau J] reduced to the moments of tau, as float arithmetic."""

    def __init__(self, tau, class_tag: str):
        t = validate_state(tau, dim=4, name="tau")
        b = bloch_vector(partial_trace(t, keep=1))
        n = correlation_matrix(t)
        ntil = np.diag([1.0, -1.0, 1.0]) @ n
        self.class_tag = class_tag
        self.b = (float(b[0]), float(b[1]), float(b[2]))
        self.ntil = tuple(float(v) for v in ntil.reshape(-1))
        # rot_slices: start offsets of ZYZ triples inside the parameter vector
        if class_tag == "D":
            self.evaluate = self._eval_d
            self.lower = np.array([0.0, 0.0, 0.0])
            self.upper = np.array([1.0, math.pi, _TWO_PI])
            self.rot_slices = ()
            self.scalar_indices = ()
        elif class_tag == "R":
            self.evaluate = self._eval_r
            self.lower = np.zeros(3)
            self.upper = np.array([_TWO_PI, math.pi, _TWO_PI])
            self.rot_slices = (0,)
            self.scalar_indices = ()
        elif class_tag == "UE":
            self.evaluate = self._eval_ue
            self.lower = np.zeros(8)
            self.upper = np.array(
                [_TWO_PI, math.pi, _TWO_PI, _TWO_PI, math.pi, _TWO_PI, 1.0, 1.0]
            )
            self.rot_slices = (0, 3)
            self.scalar_indices = (6, 7)
        elif class_tag == "GE":
            self.evaluate = self._eval_ge
            self.lower = np.zeros(6)
            self.upper = np.array([math.pi, _TWO_PI] * 3)
            self.rot_slices = ()
            self.scalar_indices = ()
        elif class_tag == "C":
            self.evaluate = self._eval_c
            self.lower = np.zeros(8)
            self.upper = np.array(
                [math.pi, _TWO_PI, _TWO_PI, math.pi, _TWO_PI, _TWO_PI, math.pi, _TWO_PI]
            )
            self.rot_slices = (2, 5)
            self.scalar_indices = (0, 1)
        else:
            raise ValidationError(f"unknown channel class {class_tag!r}")

    def value_parts(self, rots, scalars) -> float:
        """Pairing from explicit rotation tuples plus the scalar block."""
        tag = self.class_tag
        if tag == "R":
            return 0.5 * (1.0 + _trace_prod(rots[0], self.ntil))
        if tag == "UE":
            t1, t2 = scalars
            m1 = t1
            m2 = (1.0 - t1) * t2
            m3 = (1.0 - t1) * (1.0 - t2)
            g = _mat_mul(rots[1], _mat_mul(self.ntil, rots[0]))
            # linear in the signed scalings: optimal signs give |diagonal|
            return 0.5 * (1.0 + m1 * abs(g[0]) + m2 * abs(g[4]) + m3 * abs(g[8]))
        rv, rw = rots
        c1, s1 = math.cos(scalars[0]), math.sin(scalars[0])
        c2, s2 = math.cos(scalars[1]), math.sin(scalars[1])
        g = _mat_mul(rw, _mat_mul(self.ntil, rv))
        b = self.b
        trans = s1 * s2 * (rv[2] * b[0] + rv[5] * b[1] + rv[8] * b[2])
        return 0.5 * (1.0 + trans + c1 * g[0] + c2 * g[4] + c1 * c2 * g[8])

    def _eval_d(self, p) -> float:
        r, th, ph = p[0], p[1], p[2]
        st = math.sin(th)
        bx = r * st * math.cos(ph)
        by = r * st * math.sin(ph)
        bz = r * math.cos(th)
        b = self.b
        return 0.5 * (1.0 + bx * b[0] + by * b[1] + bz * b[2])

    def _eval_r(self, p) -> float:
        o = _rot(p[0], p[1], p[2])
        return 0.5 * (1.0 + _trace_prod(o, self.ntil))

    def _eval_ue(self, p) -> float:
        rv = _rot(p[0], p[1], p[2])
        rw = _rot(p[3], p[4], p[5])
        return self.value_parts((rv, rw), (p[6], p[7]))

    def _eval_ge(self, p) -> float:
        bp = _bloch_angles(p[0], p[1])
        bq = _bloch_angles(p[2], p[3])
        bm = _bloch_angles(p[4], p[5])
        b = self.b
        n = self.ntil
        # (Ntil^T bm)_j = sum_i Ntil_ij bm_i
        nv0 = n[0] * bm[0] + n[3] * bm[1] + n[6] * bm[2]
        nv1 = n[1] * bm[0] + n[4] * bm[1] + n[7] * bm[2]
        nv2 = n[2] * bm[0] + n[5] * bm[1] + n[8] * bm[2]
        sum_dot = (bp[0] + bq[0]) * b[0] + (bp[1] + bq[1]) * b[1] + (bp[2] + bq[2]) * b[2]
        diff_dot = (bp[0] - bq[0]) * nv0 + (bp[1] - bq[1]) * nv1 + (bp[2] - bq[2]) * nv2
        return 0.5 * (1.0 + 0.5 * sum_dot + 0.5 * diff_dot)

    def _eval_c(self, p) -> float:
        rv = _rot(p[2], p[3], p[4])
        rw = _rot(p[5], p[6], p[7])
        return self.value_parts((rv, rw), (p[0], p[1]))

    def witness(self, p) -> QubitChannel:
        tag = self.class_tag
        if tag == "D":
            r, th, ph = p
            st = math.sin(th)
            vec = np.array([r * st * math.cos(ph), r * st * math.sin(ph), r * math.cos(th)])
            return make_depolarizing(density_from_bloch(vec))
        if tag == "R":
            o = np.array(_rot(p[0], p[1], p[2])).reshape(3, 3)
            return make_unitary(unitary_from_rotation(o))
        if tag == "UE":
            rv = np.array(_rot(p[0], p[1], p[2])).reshape(3, 3)
            rw = np.array(_rot(p[3], p[4], p[5])).reshape(3, 3)
            t1, t2 = p[6], p[7]
            mags = (t1, (1.0 - t1) * t2, (1.0 - t1) * (1.0 - t2))
            g = rw @ np.array(self.ntil).reshape(3, 3) @ rv
            lam = np.array(
                [m if g[i, i] >= 0.0 else -m for i, m in enumerate(mags)]
            )
            t = np.eye(4)
            t[1:, 1:] = rv @ np.diag(lam) @ rw
            return QubitChannel.from_ptm(t, class_tag="UE")
        if tag == "GE":
            from .channels import make_extreme_cq

            psi = _ket_angles(p[0], p[1])
            phi = _ket_angles(p[2], p[3])
            b0 = _ket_angles(p[4], p[5])
            b1 = np.array([-np.conj(b0[1]), np.conj(b0[0])])
            return make_extreme_cq(psi, phi, basis=(b0, b1))
        from .channels import GeneralizedExtremePoint, make_generalized_extreme

        rv = np.array(_rot(p[2], p[3], p[4])).reshape(3, 3)
        rw = np.array(_rot(p[5], p[6], p[7])).reshape(3, 3)
        return make_generalized_extreme(
            GeneralizedExtremePoint(
                v=unitary_from_rotation(rv),
                w=unitary_from_rotation(rw),
                u1=float(p[0]),
                u2=float(p[1]),
            )
        )


def _bloch_angles(th: float, ph: float) -> tuple:
    st = math.sin(th)
    return (st * math.cos(ph), st * math.sin(ph), math.cos(th))


def _ket_angles(th: float, ph: float) -> np.ndarray:
    return np.array(
        [math.cos(th / 2.0), math.sin(th / 2.0) * complex(math.cos(ph), math.sin(ph))],
        dtype=complex,
    )


def _golden_line(f, p, i, lo, hi, iters):
    """Golden-section maximization of f along coordinate i over [lo, hi]."""
    a, b = lo, hi
    h = b - a
    x1 = b - _INV_PHI * h
    x2 = a + _INV_PHI * h
    p[i] = x1
    f1 = f(p)
    p[i] = x2
    f2 = f(p)
    evals = 2
    for _ in range(iters):
        if f1 > f2:
            b, x2, f2 = x2, x1, f1
            h = b - a
            x1 = b - _INV_PHI * h
            p[i] = x1
            f1 = f(p)
        else:
            a, x1, f1 = x1, x2, f2
            h = b - a
            x2 = a + _INV_PHI * h
            p[i] = x2
            f2 = f(p)
        evals += 1
    if f1 >= f2:
        return x1, f1, evals
    return x2, f2, evals


def _golden_scalar(g, lo: float, hi: float, iters: int):
    """Golden-section maximization of a scalar function over [lo, hi]."""
    a, b = lo, hi
    h = b - a
    x1 = b - _INV_PHI * h
    x2 = a + _INV_PHI * h
    f1 = g(x1)
    f2 = g(x2)
    evals = 2
    for _ in range(iters):
        if f1 > f2:
            b, x2, f2 = x2, x1, f1
            h = b - a
            x1 = b - _INV_PHI * h
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            h = b - a
            x2 = a + _INV_PHI * h
            f2 = g(x2)
        evals += 1
    if f1 >= f2:
        return x1, f1, evals
    return x2, f2, evals


_POLISH_ROUNDS = 30
_POLISH_LINE_ITERS = 16


def _polish(obj: _Objective, p: Array, value: float):
    """Axis-angle polish of the rotation blocks around the current iterate.

    Coordinate descent over Euler angles stalls when a middle angle sits
    near 0 or pi; optimizing increments exp(t K_axis) R and absorbing each
    accepted step into R keeps the chart centered and non-degenerate.
    Scalar coordinates keep their box windows.  Returns updated Euler
    parameters so witnesses stay in the documented parameterization.
    """
    if not obj.rot_slices:
        return p, value, 0
    rots = [_rot(p[a], p[a + 1], p[a + 2]) for a in obj.rot_slices]
    scalars = [float(p[i]) for i in obj.scalar_indices]
    axes = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    evals = 0
    width = 0.3
    swidths = [0.2 * float(obj.upper[i] - obj.lower[i]) for i in obj.scalar_indices]
    for _ in range(_POLISH_ROUNDS):
        for j in range(len(rots)):
            base = rots[j]
            for ax in axes:

                def g(t, base=base, ax=ax, j=j):
                    inc = _axis_rot(t * ax[0], t * ax[1], t * ax[2])
                    trial = list(rots)
                    trial[j] = _mat_mul(inc, base)
                    return obj.value_parts(trial, scalars)

                t, v, used = _golden_scalar(g, -width, width, _POLISH_LINE_ITERS)
                evals += used
                if v > value:
                    value = v
                    rots[j] = _mat_mul(_axis_rot(t * ax[0], t * ax[1], t * ax[2]), base)
                base = rots[j]
        for k, i in enumerate(obj.scalar_indices):
            lo = max(float(obj.lower[i]), scalars[k] - swidths[k])
            hi = min(float(obj.upper[i]), scalars[k] + swidths[k])

            def g(t, k=k):
                trial = list(scalars)
                trial[k] = t
                return obj.value_parts(rots, trial)

            t, v, used = _golden_scalar(g, lo, hi, _POLISH_LINE_ITERS)
            evals += used
            if v > value:
                value = v
                scalars[k] = t
        width *= 0.5
        swidths = [w * 0.5 for w in swidths]
    out = np.array(p, dtype=float)
    for j, a in enumerate(obj.rot_slices):
        out[a], out[a + 1], out[a + 2] = _matrix_to_euler(rots[j])
    for k, i in enumerate(obj.scalar_indices):
        out[i] = scalars[k]
    return out, value, evals


def _refine(obj: _Objective, p0: Array, refine_iters: int):
    f = obj.evaluate
    lower, upper = obj.lower, obj.upper
    dim = lower.shape[0]
    p = np.array(p0, dtype=float)
    value = f(p)
    evals = 1
    width = (upper - lower).astype(float)
    rounds = max(2, refine_iters // (dim * _LINE_ITERS))
    for _ in range(rounds):
        improved = False
        for i in range(dim):
            save = p[i]
            a = max(lower[i], save - 0.5 * width[i])
            b = min(upper[i], save + 0.5 * width[i])
            x, v, used = _golden_line(f, p, i, a, b, _LINE_ITERS)
            evals += used
            if v > value:
                value = v
                p[i] = x
                improved = True
            else:
                p[i] = save
        width *= _WIDTH_SHRINK
        if not improved and width.max() < 1e-10:
            break
    return p, value, evals


def maximize(tau, class_tag: str, config: OracleConfig | None = None) -> OracleResult:
    """Multistart maximization of tr[tau J_Psi] over one channel family."""
    cfg = config or OracleConfig()
    obj = _Objective(tau, class_tag)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.n_starts)
    best_value = -math.inf
    best_params: Array | None = None
    best_start = -1
    total_evals = 0
    for k in range(cfg.n_starts):
        rng = np.random.Generator(np.random.PCG64(children[k]))
        p0 = rng.uniform(obj.lower, obj.upper)
        p, v, evals = _refine(obj, p0, cfg.refine_iters)
        total_evals += evals
        if v > best_value:
            best_value = v
            best_params = p
            best_start = k
    best_params, best_value, evals = _polish(obj, best_params, best_value)
    total_evals += evals
    return OracleResult(
        class_tag=class_tag,
        best_value=float(best_value),
        params=best_params,
        witness=obj.witness(best_params),
        evaluations=total_evals,
        start_index=best_start,
    )


@dataclass(frozen=True)
class SweepReport:
    class_tag: str
    n_tau: int
    n_channels: int
    n_pairs: int
    max_excess: float
    n_violations: int
    tol: float = 1e-9


def dominance_sweep(
    class_tag: str,
    n_tau: int = 100,
    n_channels: int = 1000,
    seed: int = 0,
    tol: float = 1e-9,
) -> SweepReport:
    """Check tr[tau J] <= bound for random in-class channels and random tau.

    ``max_excess`` is the largest observed overlap minus the bound (negative
    when every check passed with margin); any excess above ``tol`` counts as
    a violation.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    chois = np.stack(
        [random_channel(rng, class_tag).choi for _ in range(n_channels)]
    )
    max_excess = -math.inf
    n_viol = 0
    for _ in range(n_tau):
        tau = random_tau(rng)
        bound = bound_for_class(tau, class_tag).value
        overlaps = np.einsum("ab,nba->n", tau, chois).real
        excess = float(overlaps.max() - bound)
        if excess > max_excess:
            max_excess = excess
        n_viol += int(np.count_nonzero(overlaps - bound > tol))
    return SweepReport(
        class_tag=class_tag,
        n_tau=n_tau,
        n_channels=n_channels,
        n_pairs=n_tau * n_channels,
        max_excess=max_excess,
        n_violations=n_viol,
        tol=tol,
    )
