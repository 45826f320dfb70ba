"""Joint convertibility of a pair of pure states under one channel.

A conversion instance asks for a channel mapping |psi> -> |e> and
|phi> -> |f> simultaneously.  Encoding the question as the two-qubit state

    tau = (1/2) (|psi><psi|^T (x) |e><e|  +  |phi><phi|^T (x) |f><f|)

turns the best average success probability over a channel family into the
corresponding bound of :mod:`qcbounds.bounds`.  Everything here depends on
the pair only through the overlaps x = |<psi|phi>| and y = |<e|f>|; the
correlation matrix of tau has singular values
{ xy, sqrt((1-x^2)(1-y^2)), 0 } and output marginal length y.

Class values (average success probability maxima / estimates):

    D   (1/2) (1 + y)                                             exact
    R   (1/2) (1 + xy + sqrt((1-x^2)(1-y^2)))                     exact
    UE  (1/2) (1 + max{xy, sqrt((1-x^2)(1-y^2))})                 exact
    GE  (1/2) (1 + sqrt(y^2 + max{xy, sqrt((1-x^2)(1-y^2))}^2))   estimate
    C   (1/2) (1 + sqrt(y^2 + (xy + sqrt((1-x^2)(1-y^2)))^2))     estimate

Perfect conversion by an arbitrary channel is possible iff x <= y, i.e.
the overlap cannot decrease.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .channels import (
    GeneralizedExtremePoint,
    QubitChannel,
    make_depolarizing,
    make_extreme_cq,
    make_generalized_extreme,
    make_unitary,
)
from .errors import InfeasibleError, ValidationError
from .qubit_core import Array, ket, ket_orthogonal, projector

CONVERTIBLE = "convertible"
NOT_CONVERTIBLE = "not-convertible"
INCONCLUSIVE = "inconclusive"

_EDGE_TOL = 1e-12
_EXACT_TOL = 1e-9


@dataclass(frozen=True)
class ConversionInstance:
    """Source pair (psi, phi) and target pair (e, f), all normalized kets."""

    psi: Array
    phi: Array
    e: Array
    f: Array

    def __post_init__(self):
        for name in ("psi", "phi", "e", "f"):
            object.__setattr__(self, name, ket(getattr(self, name)))

    @property
    def x(self) -> float:
        return min(1.0, abs(complex(np.vdot(self.psi, self.phi))))

    @property
    def y(self) -> float:
        return min(1.0, abs(complex(np.vdot(self.e, self.f))))


def from_overlaps(x: float, y: float) -> ConversionInstance:
    """Canonical instance with the requested overlaps, built in the
    sigma_3 / sigma_1 plane: psi = e = |0>, phi and f tilted by the overlap."""
    for name, v in (("x", x), ("y", y)):
        if not -1e-12 <= v <= 1.0 + 1e-12:
            raise ValidationError(f"overlap {name} must lie in [0, 1], got {v!r}")
    x = min(max(float(x), 0.0), 1.0)
    y = min(max(float(y), 0.0), 1.0)
    zero = np.array([1.0, 0.0], dtype=complex)
    return ConversionInstance(
        psi=zero,
        phi=np.array([x, math.sqrt(max(0.0, 1.0 - x * x))], dtype=complex),
        e=zero,
        f=np.array([y, math.sqrt(max(0.0, 1.0 - y * y))], dtype=complex),
    )


def build_tau(instance: ConversionInstance) -> Array:
    """Two-qubit state encoding the instance (source side transposed)."""
    t = 0.5 * (
        np.kron(projector(instance.psi).T, projector(instance.e))
        + np.kron(projector(instance.phi).T, projector(instance.f))
    )
    return t


def tau_singular_values(instance: ConversionInstance) -> Array:
    """Closed-form singular values of the correlation matrix of tau."""
    x, y = instance.x, instance.y
    vals = np.array([x * y, math.sqrt(max(0.0, (1 - x * x) * (1 - y * y))), 0.0])
    return np.sort(vals)[::-1]


def class_value(x: float, y: float, class_tag: str) -> float:
    """Best average success probability (or its upper estimate) from overlaps."""
    cross = math.sqrt(max(0.0, (1 - x * x) * (1 - y * y)))
    if class_tag == "D":
        return 0.5 * (1.0 + y)
    if class_tag == "R":
        return 0.5 * (1.0 + x * y + cross)
    if class_tag == "UE":
        return 0.5 * (1.0 + max(x * y, cross))
    if class_tag == "GE":
        return 0.5 * (1.0 + math.hypot(y, max(x * y, cross)))
    if class_tag == "C":
        return 0.5 * (1.0 + math.hypot(y, x * y + cross))
    raise ValidationError(f"unknown channel class {class_tag!r}")


def convertibility_value(instance: ConversionInstance, class_tag: str) -> float:
    return class_value(instance.x, instance.y, class_tag)


def is_convertible_all_channels(instance: ConversionInstance) -> bool:
    """Perfect conversion by some channel exists iff the overlap does not drop."""
    return instance.x <= instance.y + _EDGE_TOL


def special_case_orthogonal_targets(x: float) -> float:
    """Common R/UE/GE/C value (1/2)(1 + sqrt(1-x^2)) when the targets are
    orthogonal (y = 0); the four expressions coincide there."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"overlap x must lie in [0, 1], got {x!r}")
    return 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - x * x)))


def superposition_pair(a, b) -> tuple[Array, Array]:
    """Orthonormal pair (a +- u b) / sqrt(2 (1 +- |<b|a>|)) with u = <b|a>/|<b|a>|.

    Degenerate overlaps fall back to ((a+b)/sqrt2, (a-b)/sqrt2) for
    orthogonal inputs and (a, a_perp) for parallel ones.
    """
    a = ket(a)
    b = ket(b)
    c = complex(np.vdot(b, a))
    x = abs(c)
    if x >= 1.0 - _EDGE_TOL:
        return a, ket_orthogonal(a)
    if x <= _EDGE_TOL:
        return (a + b) / math.sqrt(2.0), (a - b) / math.sqrt(2.0)
    u = c / x
    plus = (a + u * b) / math.sqrt(2.0 * (1.0 + x))
    minus = (a - u * b) / math.sqrt(2.0 * (1.0 - x))
    return plus, minus


def build_achiever(instance: ConversionInstance, class_tag: str) -> QubitChannel:
    """Channel attaining the class value of the instance.

    For D, R and UE the returned channel attains the exact class value; for
    C it maps psi -> e and phi -> f perfectly and exists iff x <= y
    (:class:`InfeasibleError` otherwise).
    """
    x, y = instance.x, instance.y
    psi_p, psi_m = superposition_pair(instance.psi, instance.phi)
    e_p, e_m = superposition_pair(instance.e, instance.f)
    if class_tag == "D":
        return make_depolarizing(projector(e_p))
    if class_tag == "R":
        u = np.outer(e_p, psi_p.conj()) + np.outer(e_m, psi_m.conj())
        return make_unitary(u)
    if class_tag == "UE":
        cross = math.sqrt(max(0.0, (1 - x * x) * (1 - y * y)))
        if x * y >= cross:
            cq = make_extreme_cq(e_p, e_m, basis=(psi_p, psi_m))
        else:
            psi_a = (psi_p + psi_m) / math.sqrt(2.0)
            psi_b = (psi_p - psi_m) / math.sqrt(2.0)
            e_a = (e_p + e_m) / math.sqrt(2.0)
            e_b = (e_p - e_m) / math.sqrt(2.0)
            cq = make_extreme_cq(e_a, e_b, basis=(psi_a, psi_b))
        # orthonormal outputs make these measure-and-prepare channels unital
        return QubitChannel(cq.kraus, cq.ptm, cq.choi, class_tag="UE")
    if class_tag == "C":
        if x > y + _EDGE_TOL:
            raise InfeasibleError(
                f"no channel maps psi->e and phi->f when x={x!r} exceeds y={y!r}"
            )
        if y >= 1.0 - _EDGE_TOL:
            return make_depolarizing(projector(instance.e))
        if x <= _EDGE_TOL:
            return make_extreme_cq(instance.e, instance.f, basis=(instance.psi, instance.phi))
        ratio = math.sqrt((1.0 - y * y) / (1.0 - x * x))
        c1 = min(1.0, ratio)
        c2 = min(1.0, (x / y) * ratio)
        v = np.column_stack((e_p, e_m))
        w = np.vstack((psi_p.conj(), psi_m.conj()))
        point = GeneralizedExtremePoint(v=v, w=w, u1=math.acos(c1), u2=math.acos(c2))
        return make_generalized_extreme(point)
    if class_tag == "GE":
        raise InfeasibleError("no attaining construction is provided for the GE estimate")
    raise ValidationError(f"unknown channel class {class_tag!r}")


@dataclass(frozen=True)
class ClassAssessment:
    class_tag: str
    value: float
    verdict: str
    achiever: QubitChannel | None


@dataclass(frozen=True)
class ConversionAssessment:
    instance: ConversionInstance
    x: float
    y: float
    classes: dict[str, ClassAssessment]


def assess_instance(instance: ConversionInstance) -> ConversionAssessment:
    """Per-class values and convertibility verdicts for one instance.

    D, R and UE values are exact maxima, so their verdicts are two-valued;
    the GE estimate can only refute convertibility; C is settled by the
    exact overlap criterion x <= y.
    """
    x, y = instance.x, instance.y
    entries: dict[str, ClassAssessment] = {}
    for tag in ("D", "R", "UE"):
        value = class_value(x, y, tag)
        verdict = CONVERTIBLE if value >= 1.0 - _EXACT_TOL else NOT_CONVERTIBLE
        entries[tag] = ClassAssessment(tag, value, verdict, build_achiever(instance, tag))
    ge_value = class_value(x, y, "GE")
    ge_verdict = NOT_CONVERTIBLE if ge_value < 1.0 - _EXACT_TOL else INCONCLUSIVE
    entries["GE"] = ClassAssessment("GE", ge_value, ge_verdict, None)
    c_value = class_value(x, y, "C")
    convertible = is_convertible_all_channels(instance)
    entries["C"] = ClassAssessment(
        "C",
        c_value,
        CONVERTIBLE if convertible else NOT_CONVERTIBLE,
        build_achiever(instance, "C") if convertible else None,
    )
    return ConversionAssessment(instance=instance, x=x, y=y, classes=entries)


@dataclass(frozen=True)
class ComparisonReport:
    """Difference curve value(class_a) - value(class_b) along an overlap family."""

    pair: tuple[str, str]
    fixed_name: str
    fixed_value: float
    sweep_name: str
    params: Array
    diffs: Array
    signs: Array
    crossings: tuple[float, ...]
    endpoint_zeros: tuple[float, ...]


def _diff_fn(pair: tuple[str, str], fixed_name: str, fixed_value: float):
    a, b = pair

    def diff(t: float) -> float:
        if fixed_name == "x":
            x, y = fixed_value, t
        else:
            x, y = t, fixed_value
        return class_value(x, y, a) - class_value(x, y, b)

    return diff


def compare_classes(
    pair: tuple[str, str],
    family: tuple[str, float],
    n_grid: int = 1000,
    zero_band: float = 1e-12,
) -> ComparisonReport:
    """Sample the difference of two class values along a one-parameter family.

    ``family = (name, value)`` fixes one overlap ("x" or "y"); the other
    sweeps [0, 1] on a uniform grid of ``n_grid + 1`` points.  Sign changes
    are refined by bisection to 1e-12; grid endpoints where the difference
    vanishes are reported separately.
    """
    fixed_name, fixed_value = family
    if fixed_name not in ("x", "y"):
        raise ValidationError("family name must be 'x' or 'y'")
    if not 0.0 <= fixed_value <= 1.0:
        raise ValidationError(f"family value must lie in [0, 1], got {fixed_value!r}")
    for tag in pair:
        class_value(0.5, 0.5, tag)  # validates the tags
    if n_grid < 2:
        raise ValidationError("n_grid must be at least 2")
    diff = _diff_fn(pair, fixed_name, fixed_value)
    params = np.linspace(0.0, 1.0, n_grid + 1)
    diffs = np.array([diff(t) for t in params])
    signs = np.where(np.abs(diffs) <= zero_band, 0, np.sign(diffs)).astype(int)
    crossings: list[float] = []
    for i in range(n_grid):
        si, sj = signs[i], signs[i + 1]
        if si * sj == -1:
            lo, hi = params[i], params[i + 1]
            flo = diffs[i]
            while hi - lo > 1e-12:
                mid = 0.5 * (lo + hi)
                fm = diff(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (flo > 0) != (fm > 0):
                    hi = mid
                else:
                    lo, flo = mid, fm
            crossings.append(0.5 * (lo + hi))
        elif sj == 0 and 0 < i + 1 < n_grid and si * signs[i + 2] == -1:
            crossings.append(float(params[i + 1]))
    endpoint_zeros = tuple(float(params[i]) for i in (0, n_grid) if signs[i] == 0)
    return ComparisonReport(
        pair=tuple(pair),
        fixed_name=fixed_name,
        fixed_value=float(fixed_value),
        sweep_name="y" if fixed_name == "x" else "x",
        params=params,
        diffs=diffs,
        signs=signs,
        crossings=tuple(crossings),
        endpoint_zeros=endpoint_zeros,
    )
