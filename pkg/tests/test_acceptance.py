"""Acceptance criteria: one test and one PASS/FAIL line per criterion.

Lines bypass pytest's output capture so they appear in the run log.
Run ``python tests/test_acceptance.py`` for the bare summary.
"""

import math
import sys
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from bohrlab import cli, modular
from bohrlab.lab import theorems as T
from bohrlab.lab.corpus import build_corpus
from bohrlab.series import extract_coefficients

E_PI = math.exp(-math.pi)


_capture = None


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    global _capture
    _capture = capsys
    yield
    _capture = None


def report(n: int, ok: bool, detail: str) -> None:
    line = f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}"
    if _capture is None:
        print(line)
    else:
        with _capture.disabled():
            print(line)
    assert ok, detail


def test_criterion_01_modular_constants():
    t = time.perf_counter()
    e1 = abs(complex(modular.eval_J(E_PI)) - 0.5)
    e2 = abs(abs(complex(modular.eval_J(-E_PI))) - 1)
    dt = time.perf_counter() - t
    report(1, e1 < 1e-10 and e2 < 1e-10 and dt < 1.0,
           f"|J(e^-pi)-1/2|={e1:.2e} ||J(-e^-pi)|-1|={e2:.2e} time={dt:.3f}s")


def test_criterion_02_coefficients():
    exp = modular.coefficients_of_minus_J_minus(64)
    positive = all(m > 0 for m in exp.exact[:65])
    ref = extract_coefficients(modular.minus_J_minus, 0.3, 16)
    rel = max(abs(ref.coeffs[n + 1].real - exp.m_coeffs[n]) / exp.m_coeffs[n] for n in (1, 2, 3))
    report(2, positive and exp.exact[0] == 16 and rel < 1e-9,
           f"all M_n>0 (n<=64)={positive} M_0={exp.exact[0]} M_1..3={exp.exact[1:4]} max rel err={rel:.2e}")


def test_criterion_03_max_modulus():
    radii = np.linspace(E_PI / 20, E_PI, 20)
    located = all(modular.max_modulus_on_circle(float(r), 720).at_minus_r for r in radii)
    top = modular.max_modulus_on_circle(E_PI, 720).max_value
    report(3, located and abs(top - 1) < 1e-9,
           f"argmax at -r on 20 radii={located} max|J| at e^-pi={top:.12f}")


def test_criterion_04_main_bound():
    t = time.perf_counter()
    entries = build_corpus(64)
    recs = [T.verify_theorem21(e.series, e.d, e.name) for e in entries]
    dt = time.perf_counter() - t
    koebe = next(r for r, e in zip(recs, entries) if e.name == "koebe")
    err = abs(koebe.lhs - E_PI / (1 - E_PI) ** 2)
    ok = all(r.passed for r in recs) and err < 1e-9 and dt < 5.0
    worst = max(r.metadata["ratio"] for r in recs)
    report(4, ok, f"{sum(r.passed for r in recs)}/{len(recs)} entries pass; koebe lhs={koebe.lhs:.9f} "
                  f"(err {err:.1e}); max lhs/d={worst:.4f}; time={dt:.2f}s")


def test_criterion_05_proof_trace():
    recs = T.suite_proof_trace(64)
    trace = [r for r in recs if r.name != "proof:self-test-detects-violation"]
    self_test = next(r for r in recs if r.name == "proof:self-test-detects-violation")
    failed = sorted({r.name for r in trace if not r.passed})
    ok = not failed and self_test.passed
    report(5, ok, f"{len(trace) - len(failed)}/{len(trace)} trace records pass; self-test detects "
                  f"violation={self_test.passed}; failing: {', '.join(failed) or 'none'}")


def test_criterion_06_classical():
    recs = T.suite_classical(64)
    half = next(r for r in recs if r.name == "classical:bohr-third[automorphism(0.5+0j)]")
    ok = all(r.passed for r in recs) and abs(half.lhs - 0.8) < 1e-12
    report(6, ok, f"{len(recs)} functions pass M(f)(1/3)<=1; a=1/2 case={half.lhs:.15f}")


def test_criterion_07_von_neumann():
    recs = T.suite_von_neumann(64)
    entries = {r.name.split("[")[1].split("|")[0] for r in recs}
    radius_ok = abs(T.VN_RADIUS - 1.4405e-2) < 5e-7
    ok = bool(recs) and all(r.passed for r in recs) and radius_ok and len(T._vn_grid()) == 100
    report(7, ok, f"{len(recs)} checks over {len(entries)} entries with d<1 x {len(T.TEST_POLYNOMIALS)} "
                  f"polynomials; radius={T.VN_RADIUS:.6e}")


def test_criterion_08_harmonic():
    recs = T.suite_harmonic(64)
    ok = len(T.harmonic_pairs(64)) == 3 and all(r.passed for r in recs)
    report(8, ok, f"{sum(r.passed for r in recs)}/{len(recs)} harmonic records pass (mu in 0, z, z^2)")


def test_criterion_09_hyperbolic():
    recs = T.suite_hyperbolic(42)
    dens = [r for r in recs if r.name.startswith("distance-density")]
    in_range = all(0 < r.lhs <= 1 + 1e-9 for r in dens)
    lower = all(r.metadata["lower_bound_ok"] for r in dens)
    tight = next(r for r in recs if r.name == "koebe-tightness-at-0")
    ok = all(r.passed for r in recs) and in_range and lower and len(dens) == 50 * len(T.hyperbolic_covers())
    report(9, ok, f"{len(dens)} density products in (0,1], simply connected >= 1/4: {lower}; "
                  f"koebe d={tight.metadata['d']:.12f} scale={tight.metadata['scale']:.12f}")


def test_criterion_10_univalence_radius():
    rho = modular.lemma17_radius(math.pi)
    surd = 1 + math.pi - math.sqrt((1 + math.pi) ** 2 - 1)
    grid = [modular.lemma17_radius(a) for a in np.linspace(0.05, 5, 100)]
    mono = bool(np.all(np.diff(grid) < 0))
    thr = modular.radius_threshold(0.26)
    oracle = brentq(lambda a: 1 + a - math.sqrt((1 + a) ** 2 - 1) - 0.26, 0.1, 5, xtol=1e-14)
    ok = abs(rho - surd) < 1e-9 and abs(rho - 0.122540) < 1e-6 and rho > E_PI and mono and abs(thr - oracle) < 1e-9
    report(10, ok, f"rho(pi)={rho:.9f} > e^-pi={E_PI:.6f}; decreasing={mono}; "
                   f"alpha at rho=0.26: {thr:.7f} (bisection {oracle:.7f})")


def test_criterion_11_determinism():
    a = cli.run(cli.RunConfig(suites=["all"], seed=42)).dumps().encode()
    b = cli.run(cli.RunConfig(suites=["all"], seed=42)).dumps().encode()
    report(11, a == b, f"two seed-42 reports byte-identical={a == b} ({len(a)} bytes)")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
