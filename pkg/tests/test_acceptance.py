"""Acceptance suite: one end-to-end check per release criterion.

Every test prints a single PASS/FAIL line (run with ``pytest -s`` to see
them on success).  Tolerances are pinned and all randomness is seeded, so
the verdicts are reproducible bit for bit.
"""

import math
import time

import numpy as np

from qcbounds import (
    OracleConfig,
    bound_all_channels,
    bound_for_class,
    build_achiever,
    build_tau,
    channel_overlap,
    channel_probability,
    class_value,
    compare_classes,
    convertibility_value,
    dominance_sweep,
    fef,
    from_overlaps,
    maximize,
    sampling,
    tau_singular_values,
    werner_channel,
)
from qcbounds.convertibility import special_case_orthogonal_targets
from qcbounds.detection import (
    INCONCLUSIVE,
    NOT_EB,
    detect_not_eb,
    measured_probability,
    prob_ancilla_free,
    prob_entangled_input,
    scheme_threshold,
    threshold_sweep,
)
from qcbounds.qubit_core import correlation_matrix, partial_trace, projector

CLASSES = ("D", "R", "UE", "GE", "C")
BELL = np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2.0


def _line(name: str, ok: bool, detail: str) -> None:
    print(f"{name}: {'PASS' if ok else 'FAIL'} ({detail})")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def test_ac01_bound_soundness_sweep():
    # 1000 random in-class channels x 100 random tau per class, tol 1e-9
    t0 = time.time()
    reports = [dominance_sweep(tag, n_tau=100, n_channels=1000, seed=11, tol=1e-9)
               for tag in CLASSES]
    dt = time.time() - t0
    n_viol = sum(r.n_violations for r in reports)
    worst = max(r.max_excess for r in reports)
    ok = n_viol == 0 and dt < 60.0
    _line("AC1 bound soundness sweep", ok,
          f"5 x 100 x 1000 pairs, violations {n_viol}, worst excess {worst:.2e}, {dt:.1f}s")
    assert ok, f"{n_viol} violations, worst excess {worst:.3e}, {dt:.1f}s"


def _mixed_output_tau(rng):
    """Random two-qubit state filtered so the output-side marginal is I/2."""
    tau = sampling.random_tau(rng)
    tau = 0.98 * tau + 0.02 * np.eye(4) / 4.0
    m = partial_trace(tau, keep=1)
    w, v = np.linalg.eigh(m)
    corr = (v * (1.0 / np.sqrt(2.0 * w))) @ v.conj().T
    f = np.kron(np.eye(2), corr)
    out = f @ tau @ f.conj().T
    return 0.5 * (out + out.conj().T)


def test_ac02_oracle_exactness():
    # brute-force maximum meets the bound within 1e-6 where it is exact:
    # D and R everywhere, C when the output marginal is maximally mixed
    cfg = OracleConfig(n_starts=48, refine_iters=800, seed=5)
    t0 = time.time()
    worst = {tag: 0.0 for tag in ("D", "R", "C")}
    rng = _rng(21)
    for tag in ("D", "R"):
        for _ in range(100):
            tau = sampling.random_tau(rng)
            gap = abs(maximize(tau, tag, cfg).best_value - bound_for_class(tau, tag).value)
            worst[tag] = max(worst[tag], gap)
    cases = [_mixed_output_tau(rng) for _ in range(100)]
    # stress the positive-determinant branch: equal mixture of three Bell states
    sx = np.kron(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))
    sz = np.kron(np.eye(2), np.diag([1.0, -1.0]))
    cases.append((BELL + sx @ BELL @ sx + sz @ BELL @ sz) / 3.0)
    cases.extend(sampling.random_mes_mixture(rng) for _ in range(2))
    for tau in cases:
        report = bound_all_channels(tau)
        assert report.exact
        gap = abs(maximize(tau, "C", cfg).best_value - report.value)
        worst["C"] = max(worst["C"], gap)
    dt = time.time() - t0
    ok = max(worst.values()) < 1e-6 and dt < 300.0
    detail = ", ".join(f"{t} {g:.1e}" for t, g in worst.items())
    _line("AC2 oracle exactness", ok, f"worst gaps {detail}, {dt:.0f}s")
    assert ok, f"worst gaps {worst}, {dt:.0f}s"


# columns form the magic basis: a two-qubit state is maximally entangled
# exactly when its coefficients here are real up to a global phase, so the
# best overlap with any maximally entangled state is an eigenvalue problem.
_S2 = 1.0 / math.sqrt(2.0)
_MAGIC = np.column_stack([
    np.array([_S2, 0.0, 0.0, _S2]),
    1j * np.array([_S2, 0.0, 0.0, -_S2]),
    1j * np.array([0.0, _S2, _S2, 0.0]),
    np.array([0.0, _S2, -_S2, 0.0]),
]).astype(complex)


def _fef_direct(tau) -> float:
    return float(np.linalg.eigvalsh((_MAGIC.conj().T @ tau @ _MAGIC).real)[-1])


def test_ac03_fef_golden_values():
    g1 = abs(fef(BELL) - 1.0)
    g2 = abs(fef(np.eye(4) / 4.0) - 0.25)
    rng = _rng(31)
    worst = max(abs(fef(tau) - _fef_direct(tau))
                for tau in (sampling.random_tau(rng) for _ in range(50)))
    ok = g1 < 1e-12 and g2 < 1e-12 and worst < 1e-6
    _line("AC3 fef golden values", ok,
          f"fef(P+) err {g1:.1e}, fef(I/4) err {g2:.1e}, direct-max worst {worst:.1e}")
    assert ok, (g1, g2, worst)


def test_ac04_local_unitary_invariance():
    # singular values of the correlation matrix are a local-unitary invariant
    rng = _rng(41)
    worst = 0.0
    for _ in range(1000):
        rho = sampling.random_density(rng, dim=4)
        u = np.kron(sampling.random_unitary(rng), sampling.random_unitary(rng))
        s0 = np.linalg.svd(correlation_matrix(rho), compute_uv=False)
        s1 = np.linalg.svd(correlation_matrix(u @ rho @ u.conj().T), compute_uv=False)
        worst = max(worst, float(np.abs(np.sort(s0) - np.sort(s1)).max()))
    ok = worst < 1e-9
    _line("AC4 local unitary invariance", ok, f"1000 cases, worst deviation {worst:.1e}")
    assert ok, worst


def test_ac05_convertibility_closed_forms():
    # closed-form singular values vs numeric SVD on a grid that includes all
    # four edges of the (x, y) square
    grid = np.linspace(0.0, 1.0, 50)
    worst = 0.0
    for x in grid:
        for y in grid:
            inst = from_overlaps(float(x), float(y))
            closed = np.sort(tau_singular_values(inst))
            numeric = np.sort(np.linalg.svd(correlation_matrix(build_tau(inst)),
                                            compute_uv=False))
            worst = max(worst, float(np.abs(closed - numeric).max()))
    ok = worst < 1e-9
    _line("AC5 convertibility closed forms", ok, f"50x50 grid, worst deviation {worst:.1e}")
    assert ok, worst


def test_ac06_achiever_certificates():
    rng = _rng(61)
    worst_att = 0.0
    worst_conv = 0.0
    for _ in range(500):
        x, y = float(rng.uniform()), float(rng.uniform())
        inst = from_overlaps(x, y)
        tau = build_tau(inst)
        for tag in ("D", "R", "UE"):
            got = channel_overlap(tau, build_achiever(inst, tag))
            worst_att = max(worst_att, abs(got - convertibility_value(inst, tag)))
        ci = from_overlaps(min(x, y), max(x, y))
        ch = build_achiever(ci, "C")
        d1 = np.abs(ch.apply(projector(ci.psi)) - projector(ci.e)).max()
        d2 = np.abs(ch.apply(projector(ci.phi)) - projector(ci.f)).max()
        worst_conv = max(worst_conv, float(d1), float(d2))
    ok = worst_att < 1e-8 and worst_conv < 1e-8
    _line("AC6 achiever certificates", ok,
          f"500 instances, attainment {worst_att:.1e}, conversion {worst_conv:.1e}")
    assert ok, (worst_att, worst_conv)


def test_ac07_threshold_crossings():
    s2 = 1.0 / math.sqrt(2.0)
    targets = [
        (("UE", "D"), ("x", s2), [1.0 / math.sqrt(3.0)]),
        (("R", "D"), ("x", s2), [1.0 / math.sqrt(4.0 - 2.0 * math.sqrt(2.0))]),
        (("R", "GE"), ("x", s2), [1.0 / math.sqrt(5.0 - 2.0 * math.sqrt(3.0))]),
        (("R", "GE"), ("y", s2), [1.0 / math.sqrt(5.0), 2.0 / math.sqrt(5.0)]),
    ]
    worst = 0.0
    for pair, family, expected in targets:
        report = compare_classes(pair, family, n_grid=2000)
        assert len(report.crossings) == len(expected), (pair, report.crossings)
        for got, want in zip(sorted(report.crossings), sorted(expected)):
            worst = max(worst, abs(got - want))
    ok = worst < 1e-8
    _line("AC7 threshold crossings", ok, f"5 crossings located, worst error {worst:.1e}")
    assert ok, worst


def test_ac08_werner_detection():
    worst_p = 0.0
    for w in np.linspace(0.0, 1.0, 267):
        w = float(w)
        ch = werner_channel(w)
        for scheme, formula in (("entangled", (1.0 + 3.0 * w) / 4.0),
                                ("ancilla-free", (1.0 + w) / 2.0)):
            p_direct = {"entangled": prob_entangled_input,
                        "ancilla-free": prob_ancilla_free}[scheme](w)
            p_meas = measured_probability(ch, scheme)
            worst_p = max(worst_p, abs(p_direct - formula), abs(p_meas - formula))
    thr_err = max(abs(scheme_threshold("entangled") - 0.5),
                  abs(scheme_threshold("ancilla-free") - 2.0 / 3.0))
    # verdicts on a 1e-4 grid vs the trace-norm predicate sum |lambda_i| > 1
    n = 10001
    mismatches = 0
    for row in threshold_sweep(n_points=n):
        pred = 3.0 * row.w > 1.0
        for verdict in (row.verdict_entangled, row.verdict_ancilla_free):
            if (verdict == NOT_EB) != pred:
                mismatches += 1
    spot = (detect_not_eb(0.5, "entangled").verdict == NOT_EB
            and detect_not_eb(0.5, "ancilla-free").verdict == NOT_EB
            and detect_not_eb(0.2, "entangled").verdict == INCONCLUSIVE
            and detect_not_eb(1.0 / 3.0, "ancilla-free").verdict == INCONCLUSIVE)
    ok = worst_p < 1e-12 and thr_err < 1e-12 and mismatches == 0 and spot
    _line("AC8 werner detection", ok,
          f"probability err {worst_p:.1e}, threshold err {thr_err:.1e}, "
          f"{n} grid points, {mismatches} verdict mismatches")
    assert ok, (worst_p, thr_err, mismatches, spot)


def test_ac09_orthogonal_target_coincidence():
    # at y = 0 the R, UE, GE and C values collapse to one curve
    worst = 0.0
    for x in np.linspace(0.0, 1.0, 1000):
        x = float(x)
        want = 0.5 * (1.0 + math.sqrt(1.0 - min(1.0, x * x)))
        assert abs(special_case_orthogonal_targets(x) - want) < 1e-12
        for tag in ("R", "UE", "GE", "C"):
            worst = max(worst, abs(class_value(x, 0.0, tag) - want))
    ok = worst < 1e-12
    _line("AC9 orthogonal target coincidence", ok, f"1000 points, worst gap {worst:.1e}")
    assert ok, worst


def test_ac10_ppovm_completeness():
    rng = _rng(101)
    worst = 0.0
    for _ in range(200):
        pp = sampling.random_ppovm(rng)
        ch = sampling.random_cptp(rng)
        total = sum(channel_probability(pp.effect(i), ch) for i in range(len(pp.effects)))
        worst = max(worst, abs(total - 1.0))
    ok = worst < 1e-9
    _line("AC10 ppovm completeness", ok, f"200 pairs, worst |sum - 1| {worst:.1e}")
    assert ok, worst
