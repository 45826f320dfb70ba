"""Seeded random generators for states, channels and testers.

All samplers take a ``numpy.random.Generator`` so that sweeps and tests are
reproducible; none of them touch global random state.
"""

from __future__ import annotations

import math

import numpy as np

from .channels import (
    GeneralizedExtremePoint,
    QubitChannel,
    make_depolarizing,
    make_extreme_cq,
    make_generalized_extreme,
    make_random_unitary,
    rotation_from_unitary,
)
from .measurement import POVM, PPOVM, ancilla_free_ppovm, entangled_ppovm, make_povm
from .qubit_core import Array, partial_trace
from .convertibility import ConversionInstance


def random_pure_state(rng: np.random.Generator, dim: int = 2) -> Array:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int = 2) -> Array:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(rng: np.random.Generator, dim: int = 2, rank: int | None = None) -> Array:
    if rank is None:
        rank = int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_tau(rng: np.random.Generator, max_components: int = 4) -> Array:
    """Mixture of random pure two-qubit states with Dirichlet weights."""
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    tau = np.zeros((4, 4), dtype=complex)
    for w in weights:
        v = random_pure_state(rng, dim=4)
        tau += w * np.outer(v, v.conj())
    return tau


def random_mes_mixture(rng: np.random.Generator, max_components: int = 4) -> Array:
    """Mixture of maximally entangled states; its output marginal is I/2."""
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1.0 / math.sqrt(2.0)
    base = np.outer(phi, phi.conj())
    k = int(rng.integers(1, max_components + 1))
    weights = rng.dirichlet(np.ones(k))
    tau = np.zeros((4, 4), dtype=complex)
    for w in weights:
        u = np.kron(np.eye(2), random_unitary(rng))
        tau += w * (u @ base @ u.conj().T)
    return tau


def random_cptp(rng: np.random.Generator) -> QubitChannel:
    """Unconstrained random channel from a normalized Ginibre Choi operator."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    y = partial_trace(rho, keep=0)
    w, v = np.linalg.eigh(y)
    yi = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    corr = np.kron(yi, np.eye(2))
    return QubitChannel.from_choi(corr @ rho @ corr.conj().T, class_tag="C")


def random_unital_lambdas(rng: np.random.Generator) -> Array:
    """Signed axis scalings admissible for a unital channel (rejection sampled)."""
    while True:
        lam = rng.uniform(-1.0, 1.0, size=3)
        if abs(lam[0] + lam[1]) <= 1.0 + lam[2] and abs(lam[0] - lam[1]) <= 1.0 - lam[2]:
            return lam


def random_unital_channel(rng: np.random.Generator) -> QubitChannel:
    lam = random_unital_lambdas(rng)
    t = np.eye(4)
    t[1:, 1:] = (
        rotation_from_unitary(random_unitary(rng))
        @ np.diag(lam)
        @ rotation_from_unitary(random_unitary(rng))
    )
    return QubitChannel.from_ptm(t)


def random_channel(rng: np.random.Generator, class_tag: str) -> QubitChannel:
    """Random member of one of the five channel families."""
    if class_tag == "D":
        return make_depolarizing(random_density(rng))
    if class_tag == "R":
        k = int(rng.integers(1, 5))
        weights = rng.dirichlet(np.ones(k))
        return make_random_unitary(weights, [random_unitary(rng) for _ in range(k)])
    if class_tag == "UE":
        signs = rng.choice([-1.0, 1.0], size=3)
        lam = signs * rng.dirichlet(np.ones(3)) * rng.uniform(0.0, 1.0)
        t = np.eye(4)
        t[1:, 1:] = (
            rotation_from_unitary(random_unitary(rng))
            @ np.diag(lam)
            @ rotation_from_unitary(random_unitary(rng))
        )
        return QubitChannel.from_ptm(t, class_tag="UE")
    if class_tag == "GE":
        k = int(rng.integers(1, 3))
        weights = rng.dirichlet(np.ones(k))
        choi = np.zeros((4, 4), dtype=complex)
        for w in weights:
            cq = make_extreme_cq(
                random_pure_state(rng),
                random_pure_state(rng),
                basis=_random_basis(rng),
            )
            choi += w * cq.choi
        return QubitChannel.from_choi(choi, class_tag="GE")
    if class_tag == "C":
        k = int(rng.integers(1, 3))
        weights = rng.dirichlet(np.ones(k))
        choi = np.zeros((4, 4), dtype=complex)
        for w in weights:
            gep = make_generalized_extreme(
                GeneralizedExtremePoint(
                    v=random_unitary(rng),
                    w=random_unitary(rng),
                    u1=float(rng.uniform(0.0, 2.0 * math.pi)),
                    u2=float(rng.uniform(0.0, math.pi)),
                )
            )
            choi += w * gep.choi
        return QubitChannel.from_choi(choi, class_tag="C")
    raise ValueError(f"unknown channel class {class_tag!r}")


def _random_basis(rng: np.random.Generator) -> tuple[Array, Array]:
    u = random_unitary(rng)
    return u[:, 0], u[:, 1]


def random_povm(rng: np.random.Generator, dim: int, n_outcomes: int) -> POVM:
    """POVM from Ginibre-generated PSD pieces, symmetrized to sum to I."""
    parts = []
    for _ in range(n_outcomes):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        parts.append(g @ g.conj().T)
    total = sum(parts)
    w, v = np.linalg.eigh(total)
    ti = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return make_povm([ti @ p @ ti for p in parts])


def random_ppovm(rng: np.random.Generator) -> PPOVM:
    """Random tester: ancilla-free or entangled with equal probability."""
    if rng.uniform() < 0.5:
        rho = random_density(rng)
        return ancilla_free_ppovm(rho, random_povm(rng, 2, int(rng.integers(2, 4))))
    return entangled_ppovm(random_povm(rng, 4, int(rng.integers(2, 5))))


def random_instance(rng: np.random.Generator) -> ConversionInstance:
    return ConversionInstance(
        psi=random_pure_state(rng),
        phi=random_pure_state(rng),
        e=random_pure_state(rng),
        f=random_pure_state(rng),
    )
