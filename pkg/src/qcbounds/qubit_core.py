"""Low-level qubit linear algebra: Pauli moments, partial traces, norms.

Conventions
-----------
* Pauli operators are indexed 0..3 with ``sigma_0 = I``.
* A single-qubit density operator is a 2x2 complex PSD matrix of unit trace;
  its Bloch vector is ``b_i = tr(rho sigma_i)`` for i = 1..3.
* Two-qubit operators act on C^2 (x) C^2 with the *reference* system first
  and the channel output second; the basis ordering is |00>, |01>, |10>, |11>.
* The correlation matrix of a two-qubit operator ``tau`` is the real 3x3
  matrix ``N_ij = tr[tau (sigma_i (x) sigma_j)]``, i, j = 1..3.
* Hermiticity and positivity are validated with an absolute tolerance of
  1e-9 on matrix entries / eigenvalues; violations inside the tolerance are
  clamped, anything worse raises :class:`ValidationError`.

The 3x3 singular value decomposition used by the norm helpers is a
self-contained two-sided Jacobi iteration so that singular values, Ky Fan
norms and rotation maximizations share one deterministic kernel.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError

Array = np.ndarray

HERM_TOL = 1e-9
PSD_TOL = 1e-9
_SVD_OFF_TOL = 1e-14
_SVD_MAX_SWEEPS = 50

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA0, SIGMA1, SIGMA2, SIGMA3)


def ket(vec) -> Array:
    """Return a normalized complex 2-vector, rejecting near-zero input."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    if v.shape != (2,):
        raise ValidationError(f"expected a 2-component state vector, got shape {v.shape}")
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise ValidationError("state vector has (near-)zero norm")
    return v / n


def projector(vec) -> Array:
    """Rank-one projector |v><v| for a (not necessarily normalized) 2-vector."""
    v = ket(vec)
    return np.outer(v, v.conj())


def ket_orthogonal(vec) -> Array:
    """The orthogonal complement of a qubit state vector, fixed as (-conj(a1), conj(a0))."""
    v = ket(vec)
    return np.array([-np.conj(v[1]), np.conj(v[0])], dtype=complex)


def dagger(m: Array) -> Array:
    return np.asarray(m).conj().T


def validate_hermitian(m, dim: int | None = None, name: str = "operator") -> Array:
    """Check Hermiticity within tolerance and return the symmetrized matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise ValidationError(f"{name} must be {dim}x{dim}, got shape {a.shape}")
    dev = np.abs(a - a.conj().T).max()
    if dev > HERM_TOL:
        raise ValidationError(f"{name} is not Hermitian (max deviation {dev:.3e})")
    return 0.5 * (a + a.conj().T)


def validate_state(m, dim: int | None = None, name: str = "state") -> Array:
    """Validate a density operator; clamp tolerable negativity, renormalize trace.

    PSD means every eigenvalue >= -1e-9; tiny negative eigenvalues are
    clipped to zero and the trace is renormalized to one.
    """
    h = validate_hermitian(m, dim=dim, name=name)
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > HERM_TOL:
        raise ValidationError(f"{name} must have unit trace, got {tr!r}")
    w, v = np.linalg.eigh(h)
    if w.min() < -PSD_TOL:
        raise ValidationError(
            f"{name} is not positive semidefinite (min eigenvalue {w.min():.3e})"
        )
    w = np.clip(w, 0.0, None)
    h = (v * w) @ v.conj().T
    return h / np.trace(h).real


def validate_effect(m, dim: int | None = None, name: str = "effect") -> Array:
    """Validate a POVM effect: Hermitian with spectrum inside [0, 1] (tolerance 1e-9)."""
    h = validate_hermitian(m, dim=dim, name=name)
    w, v = np.linalg.eigh(h)
    if w.min() < -PSD_TOL or w.max() > 1.0 + PSD_TOL:
        raise ValidationError(
            f"{name} spectrum must lie in [0, 1], got [{w.min():.3e}, {w.max():.3e}]"
        )
    w = np.clip(w, 0.0, 1.0)
    return (v * w) @ v.conj().T


def validate_psd(m, dim: int | None = None, name: str = "operator") -> Array:
    """Validate Hermitian positive semidefiniteness, clamping tolerable negativity."""
    h = validate_hermitian(m, dim=dim, name=name)
    w, v = np.linalg.eigh(h)
    if w.min() < -PSD_TOL:
        raise ValidationError(
            f"{name} is not positive semidefinite (min eigenvalue {w.min():.3e})"
        )
    w = np.clip(w, 0.0, None)
    return (v * w) @ v.conj().T


def bloch_vector(rho) -> Array:
    """Bloch vector (tr[rho sigma_1], tr[rho sigma_2], tr[rho sigma_3]) of a 2x2 operator."""
    a = np.asarray(rho, dtype=complex)
    if a.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 operator, got shape {a.shape}")
    return np.array([np.trace(a @ s).real for s in PAULI[1:]])


def density_from_bloch(b) -> Array:
    """Density operator (I + b . sigma) / 2; requires ||b|| <= 1 within tolerance."""
    v = np.asarray(b, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValidationError(f"expected a 3-component Bloch vector, got shape {v.shape}")
    n = euclidean_norm(v)
    if n > 1.0 + 1e-9:
        raise ValidationError(f"Bloch vector has length {n} > 1")
    if n > 1.0:
        v = v / n
    rho = 0.5 * (SIGMA0 + v[0] * SIGMA1 + v[1] * SIGMA2 + v[2] * SIGMA3)
    return rho


def partial_trace(m, keep: int) -> Array:
    """Trace out one factor of a two-qubit operator, keeping factor 0 or 1."""
    a = np.asarray(m, dtype=complex)
    if a.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 operator, got shape {a.shape}")
    t = a.reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("abcb->ac", t)
    if keep == 1:
        return np.einsum("abad->bd", t)
    raise ValidationError("keep must be 0 (reference factor) or 1 (output factor)")


def correlation_matrix(tau) -> Array:
    """Real 3x3 matrix N_ij = tr[tau (sigma_i (x) sigma_j)] of a two-qubit operator."""
    a = np.asarray(tau, dtype=complex)
    if a.shape != (4, 4):
        raise ValidationError(f"expected a 4x4 operator, got shape {a.shape}")
    n = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            n[i, j] = np.trace(a @ np.kron(PAULI[i + 1], PAULI[j + 1])).real
    return n


def euclidean_norm(v) -> float:
    a = np.asarray(v, dtype=float).reshape(-1)
    return float(math.sqrt(float(np.dot(a, a))))


def _det3(m: Array) -> float:
    return float(
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def svd3(m) -> tuple[Array, Array, Array]:
    """Singular value decomposition of a real 3x3 matrix, m = u @ diag(s) @ vt.

    Two-sided Jacobi iteration: each (p, q) step first applies a left
    rotation that symmetrizes the 2x2 pivot block, then the symmetric Jacobi
    rotation that annihilates it.  Sweeps run in the fixed order
    (0,1), (0,2), (1,2) until the off-diagonal Frobenius mass drops below
    1e-14 (at most 50 sweeps), so results are deterministic.  Singular
    values are returned in descending order.
    """
    a = np.array(m, dtype=float)
    if a.shape != (3, 3):
        raise ValidationError(f"expected a 3x3 real matrix, got shape {a.shape}")
    u = np.eye(3)
    v = np.eye(3)
    for _ in range(_SVD_MAX_SWEEPS):
        off = math.sqrt(
            a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
            + a[1, 0] ** 2 + a[2, 0] ** 2 + a[2, 1] ** 2
        )
        if off <= _SVD_OFF_TOL:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            # left rotation making the pivot block symmetric
            t = math.atan2(a[q, p] - a[p, q], a[p, p] + a[q, q])
            c, s = math.cos(t), math.sin(t)
            rp = c * a[p, :] + s * a[q, :]
            rq = -s * a[p, :] + c * a[q, :]
            a[p, :], a[q, :] = rp, rq
            up = c * u[:, p] + s * u[:, q]
            uq = -s * u[:, p] + c * u[:, q]
            u[:, p], u[:, q] = up, uq
            # two-sided Jacobi rotation on the symmetrized block
            b = 0.5 * (a[p, q] + a[q, p])
            th = 0.5 * math.atan2(2.0 * b, a[p, p] - a[q, q])
            c, s = math.cos(th), math.sin(th)
            rp = c * a[p, :] + s * a[q, :]
            rq = -s * a[p, :] + c * a[q, :]
            a[p, :], a[q, :] = rp, rq
            cp = c * a[:, p] + s * a[:, q]
            cq = -s * a[:, p] + c * a[:, q]
            a[:, p], a[:, q] = cp, cq
            up = c * u[:, p] + s * u[:, q]
            uq = -s * u[:, p] + c * u[:, q]
            u[:, p], u[:, q] = up, uq
            vp = c * v[:, p] + s * v[:, q]
            vq = -s * v[:, p] + c * v[:, q]
            v[:, p], v[:, q] = vp, vq
    s = np.array([a[0, 0], a[1, 1], a[2, 2]])
    for i in range(3):
        if s[i] < 0.0:
            s[i] = -s[i]
            u[:, i] = -u[:, i]
    order = np.argsort(-s, kind="stable")
    return u[:, order], s[order], v[:, order].T


def singular_values(m) -> Array:
    """Singular values of a real 3x3 matrix in descending order."""
    return svd3(m)[1]


def kyfan_norm(m) -> float:
    """Sum of all singular values (trace norm) of a real 3x3 matrix."""
    return float(singular_values(m).sum())


def spectral_norm(m) -> float:
    """Largest singular value of a real 3x3 matrix."""
    return float(singular_values(m)[0])


def rotation_trace_max(m) -> float:
    """Maximum of tr(R m) over rotation matrices R in SO(3).

    Equals s1 + s2 + sign(det m) * s3 for singular values s1 >= s2 >= s3:
    an orthogonal alignment achieves s1 + s2 + s3 but restricting to
    determinant +1 flips the smallest term whenever det m < 0.
    """
    a = np.array(m, dtype=float)
    s = singular_values(a)
    third = s[2] if _det3(a) >= 0.0 else -s[2]
    return float(s[0] + s[1] + third)


def _psd_sqrt(h: Array) -> Array:
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) of two density operators."""
    r = validate_state(rho, name="rho")
    s = validate_state(sigma, name="sigma")
    rs = _psd_sqrt(r)
    w = np.linalg.eigvalsh(rs @ s @ rs)
    return float(np.sqrt(np.clip(w, 0.0, None)).sum())
