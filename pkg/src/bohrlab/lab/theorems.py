"""Verification routines and the suites that run them over the corpus."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .. import hyperbolic as hyp
from .. import modular
from ..records import VerificationRecord, check
from ..series import (DEFAULT_ORDER, TruncatedSeries, bohr_majorant, differentiate,
                      integrate, mul, series)
from .corpus import AUTOMORPHISM_PARAMS, CorpusEntry, automorphism_entry, build_corpus, modular_entry
from .factorization import h_factorize, perturbed, trace_theorem21_proof

E_PI = math.exp(-math.pi)
VN_RADIUS = E_PI / 3
CLASSICAL_RADIUS = 1.0 / 3.0
VN_TOL = 1e-9
NORM_SAMPLES = 4096

# ascending coefficients
TEST_POLYNOMIALS = {
    "w": (0, 1),
    "1": (1,),
    "w^2-w": (0, -1, 1),
    "(w^3+1)/2": (0.5, 0, 0, 0.5),
    "w^16": (0,) * 16 + (1,),
}


@lru_cache(maxsize=4)
def corpus(order: int = DEFAULT_ORDER) -> tuple[CorpusEntry, ...]:
    return tuple(build_corpus(order))


def _numbered(records, start: int = 0) -> list[VerificationRecord]:
    return [replace(r, name=f"{r.name}#{i:03d}") for i, r in enumerate(records, start)]


def verify_theorem21(f: TruncatedSeries, d: float, label: str = "") -> VerificationRecord:
    """``sum_{n>=1} |a_n| r^n <= 2 d`` at ``r = e^-pi`` with a certified left side."""
    m = bohr_majorant(f, E_PI, 1)
    ratio = m.upper / d
    return check(f"theorem:bohr-2d[{label}]", m.upper, 2 * d, ratio=ratio, ratio_le_1=bool(ratio <= 1),
                 truncated=m.value, d=d)


def verify_classical_bohr(f: TruncatedSeries, label: str = "") -> VerificationRecord:
    """``M(f)(1/3) <= 1`` for ``sup |f| < 1``."""
    m = bohr_majorant(f, CLASSICAL_RADIUS, 0)
    return check(f"classical:bohr-third[{label}]", m.upper, 1.0, truncated=m.value)


def sup_norm(p) -> float:
    """``max |p|`` over the closed unit disk, from boundary samples."""
    theta = 2 * np.pi * np.arange(NORM_SAMPLES) / NORM_SAMPLES
    return float(np.max(np.abs(np.polynomial.polynomial.polyval(np.exp(1j * theta), np.asarray(p, dtype=complex)))))


def _vn_grid() -> np.ndarray:
    """100 points of ``|z| <= e^-pi / 3``: 10 rings of 10 angles, outer ring on the circle."""
    rho = VN_RADIUS * np.arange(1, 11) / 10
    th = 2 * np.pi * np.arange(10) / 10
    return (rho[:, None] * np.exp(1j * th[None, :])).ravel()


def verify_von_neumann(f: TruncatedSeries, d: float, p, label: str = "", p_label: str = "") -> VerificationRecord:
    """``|p(f(z))| <= ||p||`` on a grid of ``|z| <= e^-pi / 3``.

    The truncation error of ``f`` is carried through ``p`` with a Lipschitz bound.
    """
    p = np.asarray(p, dtype=complex)
    z = _vn_grid()
    fz = f(z)
    eps = f.tail_at(VN_RADIUS)
    dp = np.abs(np.polynomial.polynomial.polyder(p)) if p.size > 1 else np.zeros(1)
    lip = np.polynomial.polynomial.polyval(np.abs(fz) + eps, dp).real
    vals = np.abs(np.polynomial.polynomial.polyval(fz, p)) + lip * eps
    k = int(np.argmax(vals))
    norm = sup_norm(p)
    return check(f"von-neumann[{label}|{p_label}]", float(vals[k]), norm, tol=VN_TOL,
                 argmax=complex(z[k]), d=d, hypothesis_d_below_one=bool(d < 1))


@dataclass(frozen=True, eq=False)
class HarmonicPair:
    h_series: TruncatedSeries
    mu: TruncatedSeries
    g_series: TruncatedSeries

    @classmethod
    def build(cls, h: TruncatedSeries, mu: TruncatedSeries) -> "HarmonicPair":
        """``g`` with ``g(0) = 0`` and ``g' = mu h'``."""
        if abs(mu.coeffs[0]) > 1e-12:
            raise ValueError("dilatation must vanish at the origin")
        if mu.order < h.order:
            c = np.zeros(h.order + 1, dtype=complex)
            c[: mu.order + 1] = mu.coeffs
            mu = TruncatedSeries(c, mu.sample_radius, mu.tail_bound, mu.coeff_error)
        g = integrate(mul(mu, differentiate(h)))
        return cls(h, mu, g)


def verify_harmonic(pair: HarmonicPair, d: float, label: str = "") -> list[VerificationRecord]:
    """``M(h - a0) + M(g) <= 4d`` at ``e^-pi / 3`` and the intermediate bounds on ``M(g)``."""
    r = VN_RADIUS
    mh = bohr_majorant(pair.h_series, r, 1)
    mg = bohr_majorant(pair.g_series, r, 0)
    recs = [check(f"harmonic:bohr-4d[{label}]", mh.upper + mg.upper, 4 * d, m_h=mh.upper, m_g=mg.upper, d=d),
            check(f"harmonic:g-below-2d[{label}]", mg.upper, 2 * d, strict=True)]
    worst = None
    for rr in np.linspace(CLASSICAL_RADIUS / 20, CLASSICAL_RADIUS, 20):
        # certified upper for g against the truncated (lower) value for h
        gap = bohr_majorant(pair.h_series, rr, 1).value - bohr_majorant(pair.g_series, rr, 0).upper
        if worst is None or gap < worst[1]:
            worst = (float(rr), gap)
    recs.append(check(f"harmonic:g-below-h[{label}]", -worst[1], 0.0, worst_radius=worst[0]))
    return recs


def bohr_radius_scan(family, ds, points: int = 1000) -> float:
    """Largest grid radius where every member keeps ``sum_{n>=1} |a_n| r^n <= 2d``.

    The grid stops below the smallest radius at which a member's tail is certified.
    """
    r_max = 0.999
    for f in family:
        if not f.exact:
            r_max = min(r_max, 0.999 * f.sample_radius)
    best = 0.0
    for r in np.linspace(0.0, r_max, points + 1)[1:]:
        if all(bohr_majorant(f, float(r), 1).upper <= 2 * d for f, d in zip(family, ds)):
            best = float(r)
        else:
            break
    return best


# suites ---------------------------------------------------------------------

def suite_theorem21(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    recs = [verify_theorem21(e.series, e.d, e.name) for e in corpus(order)]
    worst = max(recs, key=lambda r: r.metadata["ratio"])
    recs.append(check("theorem:max-ratio", worst.metadata["ratio"], 2.0, entry=worst.name,
                      ratio_le_1=bool(worst.metadata["ratio"] <= 1)))
    return recs


def suite_proof_trace(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    expansion = modular.coefficients_of_minus_J_minus(order + 1)
    recs = []
    first = None
    for e in corpus(order):
        fact = h_factorize(e.series, e.a, e.b, e.evaluator)
        first = first or (fact, e)
        recs += trace_theorem21_proof(fact, e.series, e.name, expansion)
    # the harness must notice coefficients blown up by 10^3
    fact, e = first
    bad = trace_theorem21_proof(perturbed(fact), e.series, "self-test", expansion)
    failures = sum(not r.passed for r in bad)
    recs.append(VerificationRecord("proof:self-test-detects-violation", 1.0, float(failures),
                                   failures >= 1, failures - 1.0, {"failed_records": failures}))
    return recs


def classical_family(order: int = DEFAULT_ORDER) -> list[tuple[str, TruncatedSeries]]:
    autos = [automorphism_entry(p, order) for p in AUTOMORPHISM_PARAMS]
    fam = [(e.name, e.series) for e in autos]
    fam += [(f"{e.name}^2", mul(e.series, e.series)) for e in autos]
    fam += [("identity", series([0, 1])), ("constant(0.99)", series([0.99]))]
    return fam


def suite_classical(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    return [verify_classical_bohr(f, name) for name, f in classical_family(order)]


def suite_von_neumann(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    recs = []
    for e in corpus(order):
        # hypothesis d < 1 judged on the upper distance estimate
        if not e.d_high < 1:
            continue
        for pl, p in TEST_POLYNOMIALS.items():
            recs.append(verify_von_neumann(e.series, e.d, p, e.name, pl))
    return recs


def harmonic_pairs(order: int = DEFAULT_ORDER) -> list[tuple[str, HarmonicPair, float]]:
    by_name = {e.name: e for e in corpus(order)}
    out = []
    for name, mu, mu_label in (("identity", [0], "0"), ("koebe", [0, 1], "z"), ("strip", [0, 0, 1], "z^2")):
        e = by_name[name]
        out.append((f"{name},mu={mu_label}", HarmonicPair.build(e.series, series(mu)), e.d))
    return out


def suite_harmonic(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    recs = []
    for label, pair, d in harmonic_pairs(order):
        recs += verify_harmonic(pair, d, label)
    return recs


def radius_families(order: int = DEFAULT_ORDER) -> dict[str, tuple[list, list]]:
    ident = corpus(order)[0]
    jslice = [modular_entry(rho, order=order) for rho in (0.3, 0.5, 0.7)]
    autos = [automorphism_entry(p, order) for p in AUTOMORPHISM_PARAMS]
    return {
        "identity": ([ident.series], [ident.d]),
        "modular-slice": ([e.series for e in jslice], [e.d for e in jslice]),
        "automorphisms": ([e.series for e in autos], [e.d for e in autos]),
    }


def suite_radius_scan(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    recs = []
    for name, (fam, ds) in radius_families(order).items():
        r_star = bohr_radius_scan(fam, ds)
        # passes when r* >= e^-pi
        recs.append(check(f"radius-scan[{name}]", E_PI, r_star, r_star=r_star))
    return recs


def suite_modular(order: int = DEFAULT_ORDER) -> list[VerificationRecord]:
    recs = [
        check("modular:J(e^-pi)=1/2", abs(complex(modular.eval_J(E_PI)) - 0.5), 0.0, tol=1e-10),
        check("modular:|J(-e^-pi)|=1", abs(abs(complex(modular.eval_J(-E_PI))) - 1), 0.0, tol=1e-10),
    ]
    exp = modular.coefficients_of_minus_J_minus(order)
    recs.append(check("modular:M0=16", abs(exp.exact[0] - 16), 0.0))
    recs.append(VerificationRecord("modular:coefficients-positive", 0.0, float(min(exp.exact)),
                                   exp.all_positive(), float(min(exp.exact)), {"order": order}))
    for i, r in enumerate(np.linspace(E_PI / 20, E_PI, 20)):
        mm = modular.max_modulus_on_circle(float(r))
        recs.append(check(f"modular:max-at-minus-r#{i:02d}", abs(mm.argmax + r), mm.grid_step * r * (1 + 1e-12),
                          radius=float(r), max_value=mm.max_value, expected=mm.expected))
    mm = modular.max_modulus_on_circle(E_PI)
    recs.append(check("modular:max-at-e^-pi-is-1", abs(mm.max_value - 1), 0.0, tol=1e-9))
    for rad in (E_PI, 0.9 * modular.UNIVALENCE_RADIUS):
        res = modular.univalence_scan(rad)
        recs.append(VerificationRecord(f"modular:univalent[{rad:.6f}]", 0.0, 0.0, res.injective, 0.0,
                                       {"witness": res.witness_pair}))
    rho_pi = modular.lemma17_radius(math.pi)
    recs.append(check("modular:univalence-radius(pi)>e^-pi", E_PI, rho_pi, strict=True, rho=rho_pi))
    alphas = np.linspace(0.1, 5.0, 100)
    rhos = np.array([modular.lemma17_radius(float(a)) for a in alphas])
    recs.append(check("modular:univalence-radius-decreasing", float(np.max(np.diff(rhos))), 0.0, strict=True))
    thr = modular.radius_threshold(0.26)
    recs.append(check("modular:radius-0.26-threshold", abs(modular.lemma17_radius(thr) - 0.26), 0.0, tol=1e-12,
                      alpha=thr))
    h = modular.coefficients_of_minus_J_minus(order).as_series(-1).dilate(0.5).scaled(0.3)
    recs.append(modular.subordination_coefficient_check(h, 0.3, exp))
    return recs


HYPERBOLIC_POINTS = 50


def hyperbolic_covers() -> list[hyp.CoveringMap]:
    return [
        hyp.identity_cover(),
        hyp.disk_automorphism(0.5),
        hyp.cayley_cover(),
        hyp.koebe_cover(),
        hyp.strip_cover(),
        hyp.punctured_disk_cover(),
        hyp.modular_cover(),
    ]


def suite_hyperbolic(seed: int = 42) -> list[VerificationRecord]:
    rng = np.random.default_rng(seed)
    recs = []
    for F in hyperbolic_covers():
        r = 0.9 * np.sqrt(rng.random(HYPERBOLIC_POINTS))
        th = 2 * np.pi * rng.random(HYPERBOLIC_POINTS)
        zs = r * np.exp(1j * th)
        dens, kb = [], []
        for z in zs:
            w = complex(F.evaluator(np.array([z]))[0])
            dens.append(hyp.check_distance_density(F.target, w, hyp.pushforward_density(F, z)))
            kb.append(hyp.check_koebe_bounds(F, z))
        recs += _numbered(dens) + _numbered(kb)
    k = hyp.check_koebe_bounds(hyp.koebe_cover(), 0j)
    recs.append(check("koebe-tightness-at-0", abs(k.metadata["distance_low"] - 0.25) + abs(k.rhs - 1.0), 0.0,
                      tol=1e-12, d=k.metadata["distance_low"], scale=k.rhs))
    return recs


SUITES = {
    "theorem21": lambda cfg: suite_theorem21(cfg.order),
    "proof-trace": lambda cfg: suite_proof_trace(cfg.order),
    "classical": lambda cfg: suite_classical(cfg.order),
    "von-neumann": lambda cfg: suite_von_neumann(cfg.order),
    "harmonic": lambda cfg: suite_harmonic(cfg.order),
    "radius-scan": lambda cfg: suite_radius_scan(cfg.order),
    "modular": lambda cfg: suite_modular(cfg.order),
    "hyperbolic": lambda cfg: suite_hyperbolic(cfg.seed),
}
