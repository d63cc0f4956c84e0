"""Acceptance suite: one test per criterion, each logging a single pass/fail line.

Run alone with ``pytest tests/test_acceptance.py -v``; the per-criterion lines are
printed in the terminal summary (and directly when run as a script).
"""
import cmath
import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from oscatlas.amplitude import (constant_one, gaussian, gaussian_bump, poly_times_gaussian,
                                rational_decay)
from oscatlas.campaign import Campaign, CaseSpec, LambdaGrid, run_case
from oscatlas.expansion import (PhaseSeries, composite_jet, expand_full_line,
                                expand_parity_forms)
from oscatlas.expansion_nd import omega_set
from oscatlas.fresnel import beta_extended, fresnel_general
from oscatlas.jets import Jet, jet_compose, jet_revert
from oscatlas.numerics import gamma, lambert_w0, lambert_w0_prime
from oscatlas.oracle import (OracleConfig, oracle_split, oscillatory_full_line,
                             oscillatory_half_line)
from oscatlas.regularizer import SplitConfig, c_table, l_min


def record(log, number, ok, detail):
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    log.append(line)
    print(line)
    assert ok, line


def slope_reports(case, start, count):
    camp = Campaign("acceptance", (case,), LambdaGrid(start, 2.0, count))
    return run_case(case, camp)


def slopes_ok(reports, guaranteed, tol=0.2):
    """Every report has a fitted slope within ``tol`` of its guaranteed exponent."""
    out = []
    for r, g in zip(reports, guaranteed):
        ok = r.fitted_slope is not None and r.fitted_slope <= -g + tol
        out.append((ok, f"{r.case_id} N={r.N} slope={r.fitted_slope} need<={-g + tol:.2f} "
                        f"points={r.used_points}"))
    return out


# ---------------------------------------------------------------------------

def test_criterion_01_closed_form_vs_oracle(acceptance_log):
    worst, slowest, bad = 0.0, 0.0, []
    for p, q in itertools.product([0.5, 1, 1.5, 2, math.e, 3, math.pi], [0.5, 1, 2, 2.7]):
        t0 = time.perf_counter()
        r = oscillatory_half_line(p, q, "+", 1.0, constant_one())
        dt = time.perf_counter() - t0
        ref = fresnel_general(p, q, "+")
        rel = abs(r.value - ref) / abs(ref)
        allowed = max(1e-6, 10 * r.err_estimate / abs(ref))
        worst, slowest = max(worst, rel / allowed), max(slowest, dt)
        if rel > allowed or dt >= 30:
            bad.append((p, q, rel, dt))
    record(acceptance_log, 1, not bad,
           f"28 cases, worst error/allowed={worst:.2e}, slowest={slowest:.2f}s {bad or ''}")


def test_criterion_02_identities(acceptance_log):
    errs = [abs(fresnel_general(2, 1, "+") - math.sqrt(math.pi) / 2 * cmath.exp(1j * math.pi / 4))]
    errs += [abs(fresnel_general(p, p, "+") - 1j / p) for p in (0.5, 1, 2, 3)]
    for q1, q2 in [(0.5, 0.5), (1, 2), (0.3, 1.7), (2.5, 1), (3, 4)]:
        ref = gamma(q1) * gamma(q2) / gamma(q1 + q2)
        errs.append(abs(beta_extended(1, 1, 1, q1, q2, q1 + q2) - ref) / abs(ref))
    worst = max(errs)
    record(acceptance_log, 2, worst <= 1e-13, f"10 identities, worst={worst:.1e}")


def test_criterion_03_gaussian_oracle(acceptance_log):
    errs = []
    for lam in (1, 10, 100, 1000):
        ref = cmath.sqrt(math.pi / (1 - 1j * lam))
        errs.append(abs(oscillatory_full_line(2, "+", lam, gaussian()).value - ref) / abs(ref))
    record(acceptance_log, 3, max(errs) <= 1e-8,
           "relative errors " + " ".join(f"{e:.1e}" for e in errs))


def test_criterion_04_c_table(acceptance_log):
    vals = [0.5, 1, 1.5, 2, 3, 7]
    residual, worst = Fraction(0), 0.0
    for p, q in itertools.product(vals, vals):
        t = c_table(p, q, 12)
        residual = max(residual, abs(t.recurrence_residual()))
        for l in range(13):
            prod = math.prod(q - p * s for s in range(1, l + 1))
            if prod != 0:
                worst = max(worst, abs(t[l, 0] - prod) / abs(prod))
            else:
                assert t.rows[l][0] == 0
            worst = max(worst, abs(t[l, l] - 1.0))
    record(acceptance_log, 4, residual == 0 and worst <= 1e-12,
           f"36 tables L=12, residual={residual}, worst closed-form error={worst:.1e}")


BATTERY = [(0.5, 0.5, "+", 1, constant_one()), (0.5, 1, "-", 1, constant_one()),
           (1, 0.5, "+", 1, constant_one()), (1, 1, "+", 1, constant_one()),
           (1.5, 0.5, "+", 1, constant_one()), (1.5, 1, "-", 1, constant_one()),
           (2, 1, "+", 1, constant_one()), (2, 0.5, "+", 3, constant_one()),
           (math.e, 1, "+", 1, constant_one()), (2, 1, "+", 10, gaussian()),
           (1, 1, "+", 2, rational_decay(2)), (1.5, 0.7, "+", 1, poly_times_gaussian([1, 1]))]


def test_criterion_05_invariance(acceptance_log):
    eps = OracleConfig(method="eps_extrapolation")
    sech = OracleConfig(method="eps_extrapolation", chi="sech")
    worst, bad = 0.0, []
    for p, q, s, lam, a in BATTERY:
        ref = oscillatory_half_line(p, q, s, lam, a)
        lm = l_min(p, q, a.tau, a.delta)
        sp = oracle_split(a, p, q, lam, lm + 1)
        variants = [oscillatory_half_line(p, q, s, lam, a, eps),
                    oscillatory_half_line(p, q, s, lam, a, OracleConfig(split=SplitConfig(sp.r0, sp.r1, lm + 2))),
                    oscillatory_half_line(p, q, s, lam, a, OracleConfig(
                        split=SplitConfig(sp.r0 + 0.5, sp.r1 + 1, lm + 1)))]
        pairs = [(ref, v) for v in variants]
        pairs.append((variants[0], oscillatory_half_line(p, q, s, lam, a, sech)))
        for x, y in pairs:
            ratio = abs(x.value - y.value) / (10 * (x.err_estimate + y.err_estimate))
            worst = max(worst, ratio)
            if ratio > 1:
                bad.append((p, q, s, lam, a.name))
    record(acceptance_log, 5, not bad,
           f"12 cases x 4 comparisons, worst gap/(10 x combined error)={worst:.2e} {bad or ''}")


def test_criterion_06_remainder_slopes(acceptance_log):
    t0 = time.perf_counter()
    g = slope_reports(CaseSpec("gauss_m2", {"kind": "full_line", "m": 2}, "gaussian", "+", (1, 3)),
                      16, 9)
    b = slope_reports(CaseSpec("bump_p05", {"kind": "half_line", "p": 0.5}, "bump", "+", (1, 2)),
                      16, 9)
    checks = slopes_ok(g, [1.0, 2.0]) + slopes_ok(b, [3.0, 5.0])
    dt = time.perf_counter() - t0
    record(acceptance_log, 6, all(ok for ok, _ in checks) and dt <= 600,
           "; ".join(d for _, d in checks) + f"; {dt:.1f}s")


def test_criterion_07_parity_forms(acceptance_log):
    a = poly_times_gaussian([1, 2, 3, -1, 0.5, 0.25])
    worst, zeros_ok = 0.0, True
    for m, N, sign in itertools.product(range(1, 8), range(1, 7), ["+", "-"]):
        l = (m + 1) // 2
        if m % 2:
            e, f = expand_parity_forms(l, sign, a, N, "odd"), expand_full_line(m, sign, a, 2 * N)
        else:
            e, f = expand_parity_forms(l, sign, a, N, "even"), expand_full_line(m, sign, a, 2 * N - 1)
            zeros_ok &= bool(np.all(e.coeffs[1::2] == 0))
        scale = max(1.0, float(np.max(np.abs(f.coeffs))))
        worst = max(worst, float(np.max(np.abs(e.coeffs - f.coeffs))) / scale,
                    float(np.max(np.abs(e.exponents - f.exponents))))
    record(acceptance_log, 7, worst <= 1e-12 and zeros_ok,
           f"m<=7, N<=6, both signs: worst termwise gap={worst:.1e}, even-m odd-k zeros exact={zeros_ok}")


def test_criterion_08_jets(acceptance_log):
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        c = np.concatenate([[0.0], [rng.choice([-1, 1]) * rng.uniform(0.5, 2.0)],
                            rng.uniform(-1, 1, 11)])
        f = Jet(c)
        phi = jet_revert(f)
        scale = max(1.0, float(np.max(np.abs(phi.coeffs))))
        worst = max(worst, float(np.max(np.abs(jet_compose(f, phi).coeffs
                                                - Jet.identity(12).coeffs))) / scale)
    rev = jet_revert(Jet(np.array([0.0, 1.0, 1.0, 0.0, 0.0]))).coeffs
    rev_err = float(np.max(np.abs(rev - [0, 1, -1, 2, -5])))
    record(acceptance_log, 8, worst <= 1e-10 and rev_err <= 1e-12,
           f"200 order-12 round trips, worst={worst:.1e}; revert(x+x^2) error={rev_err:.1e}")


def test_criterion_09_lambert(acceptance_log):
    ys = np.logspace(-12, 12, 97)
    resid = max(abs(w * math.exp(w) - y) / y for y in ys for w in [lambert_w0(y)])
    ys_neg = np.linspace(-1 / math.e + 1e-6, 0, 50)
    resid = max(resid, max(abs(lambert_w0(y) * math.exp(lambert_w0(y)) - y) for y in ys_neg))
    a = gaussian_bump(0.2, 0.45)
    fd_err = 0.0
    for p in (1, 2):
        cj = composite_jet(PhaseSeries.exponential(p), a, 4).coeffs
        h, M = 1e-2, 6
        hs = np.arange(-M, M + 1) * h
        vals = np.array([a.eval(p * lambert_w0(y / p)) * lambert_w0_prime(y / p) for y in hs])
        fd = np.polynomial.polynomial.polyfit(hs / h, vals, 2 * M)[:5] / h ** np.arange(5)
        fd_err = max(fd_err, float(np.max(np.abs(cj - fd))))
    rep = slope_reports(CaseSpec("x2_exp", {"kind": "analytic", "p": 2, "series": "exp"},
                                 "gaussian_bump:0.2,0.45", "+", (2,)), 16, 8)
    (ok_slope, detail), = slopes_ok(rep, [1.5])
    record(acceptance_log, 9, resid <= 1e-13 and fd_err <= 1e-5 and ok_slope,
           f"W0 residual={resid:.1e}; jet vs finite differences={fd_err:.1e}; {detail}")


def _omega_brute(p, N):
    thr = (N + 1 - max(x - math.floor(x) for x in p)) / max(p)
    box = math.ceil(max(p) * thr)
    return {a for a in itertools.product(range(box + 1), repeat=len(p))
            if sum((ai + 1) / pi for ai, pi in zip(a, p)) < thr - 1e-12}


def test_criterion_10_omega_and_nd_slope(acceptance_log):
    t0 = time.perf_counter()
    rng = random.Random(11)
    cases = [((2, 2), 3), ((0.5, 4), 1)]
    while len(cases) < 20:
        n = rng.randint(1, 3)
        cases.append((tuple(rng.choice([0.5, 0.75, 1, 1.5, 2, 2.5, 3, 4, 5]) for _ in range(n)),
                      rng.randint(1, 6)))
    omega_ok = all(set(omega_set(p, N).members) == _omega_brute(p, N) for p, N in cases)
    omega_ok &= set(omega_set((2, 2), 3).members) == {(0, 0), (1, 0), (0, 1)}
    omega_ok &= omega_set((0.5, 4), 1).members == ()
    rep = slope_reports(CaseSpec("A1_plane", {"kind": "nd", "preset": "A(1)", "n": 2,
                                              "signs": ["+", "+"]},
                                 {"factors": "gaussian", "support_radius": 7.0}, "+", (2,)),
                        50, 7)
    (ok_slope, detail), = slopes_ok(rep, [1.5])
    dt = time.perf_counter() - t0
    record(acceptance_log, 10, omega_ok and ok_slope and dt <= 900,
           f"omega 20 cases match brute force={omega_ok}; {detail}; {dt:.1f}s")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
