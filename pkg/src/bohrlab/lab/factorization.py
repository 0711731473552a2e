"""The factorisation ``h(z) = z (f(z) - a)/(b - a)`` and the trace of the main bound's proof."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .. import modular
from ..errors import DegenerateOmittedPoints, ZeroDetected
from ..hyperbolic import rouche_distance_bound
from ..records import VerificationRecord, check
from ..series import TruncatedSeries, bohr_majorant

E_PI = math.exp(-math.pi)
ZERO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class HFactorization:
    h: TruncatedSeries
    a: complex
    b: complex
    delta: float
    h1: TruncatedSeries
    delta1: float
    h1_prime_at_0: complex
    delta1_high: float = math.nan

    @property
    def c(self) -> np.ndarray:
        return self.h.coeffs


def _h_series(f: TruncatedSeries, a: complex, b: complex) -> TruncatedSeries:
    N = f.order
    c = np.zeros(N + 2, dtype=complex)
    c[1:] = f.coeffs
    c[1] -= a
    c /= (b - a)
    if f.exact:
        return TruncatedSeries(c)
    R = f.sample_radius
    s = R / abs(b - a)
    return TruncatedSeries(c, R, f.tail_bound * s, f.coeff_error * s)


ZERO_GRID_RINGS = 50
ZERO_GRID_RADIUS = 0.95


def _zero_grid(n: int = 10_000) -> np.ndarray:
    """``n`` points on ``ZERO_GRID_RINGS`` circles in ``0 < |z| <= 0.95``, shaped (rings, per)."""
    per = n // ZERO_GRID_RINGS
    rho = np.linspace(ZERO_GRID_RADIUS / ZERO_GRID_RINGS, ZERO_GRID_RADIUS, ZERO_GRID_RINGS)
    th = 2 * np.pi * np.arange(per) / per
    return rho[:, None] * np.exp(1j * th[None, :])


def find_attained_point(fe: Callable, a: complex, n: int = 10_000, refine: int = 20):
    """Return a point ``z != 0`` with ``f(z) = a`` (to ``1e-10`` relative), or ``None``.

    Interior local minima of ``|f - a|`` over the grid are refined with
    Nelder-Mead.  Minima on the outermost ring are boundary approaches of an
    omitted value, not zeros, and are skipped.
    """
    grid = _zero_grid(n)
    with np.errstate(all="ignore"):
        V = np.abs(np.asarray(fe(grid.ravel()), dtype=complex) - a).reshape(grid.shape)
    V = np.where(np.isfinite(V), V, np.inf)
    up = np.vstack([V[1:], np.full((1, V.shape[1]), np.inf)])
    down = np.vstack([np.full((1, V.shape[1]), np.inf), V[:-1]])
    local = (V <= up) & (V <= down) & (V <= np.roll(V, 1, axis=1)) & (V <= np.roll(V, -1, axis=1))
    local[-1] = False
    idx = np.argwhere(local & np.isfinite(V))
    if idx.size == 0:
        return None
    order = np.argsort(V[idx[:, 0], idx[:, 1]], kind="stable")[:refine]
    tol = ZERO_TOL * (1 + abs(a))
    inner = ZERO_GRID_RADIUS * (1 - 2.0 / ZERO_GRID_RINGS)

    def obj(p):
        z = complex(p[0], p[1])
        if abs(z) >= ZERO_GRID_RADIUS:
            return np.inf
        v = complex(np.asarray(fe(np.array([z])))[0])
        return abs(v - a) if np.isfinite(v) else np.inf

    for i, j in idx[order]:
        z0 = grid[i, j]
        res = minimize(obj, [z0.real, z0.imag], method="Nelder-Mead",
                       options={"xatol": 1e-14, "fatol": 1e-16, "maxiter": 400})
        z = complex(res.x[0], res.x[1])
        # minimisers that drift to the outer rings are boundary approaches
        if res.fun < tol and 1e-8 < abs(z) < inner:
            return z
    return None


def h_factorize(f: TruncatedSeries, a: complex, b: complex,
                evaluator: Callable | None = None, check_zeros: bool = True) -> HFactorization:
    """Build ``h``, ``h1(z) = h(e^-pi z)`` and the distances ``delta``, ``delta1``.

    ``delta`` and ``delta1`` are lower bounds from circle images of ``h`` (see
    :func:`bohrlab.hyperbolic.rouche_distance_bound`).  Without an evaluator
    the truncated series is used, which only makes sense for polynomials.
    """
    a, b = complex(a), complex(b)
    if abs(b - a) < 1e-12:
        raise DegenerateOmittedPoints(f"omitted points {a} and {b} coincide")
    fe = evaluator if evaluator is not None else f

    def h_eval(z):
        z = np.asarray(z, dtype=complex)
        return z * (np.asarray(fe(z), dtype=complex) - a) / (b - a)

    if check_zeros:
        # off the origin h vanishes exactly where f attains a
        z = find_attained_point(fe, a)
        if z is not None:
            raise ZeroDetected(f"h vanishes at z = {z:.6g}; f attains the omitted point {a}")

    h = _h_series(f, a, b)
    delta = rouche_distance_bound(h_eval)
    h1_eval = lambda z: h_eval(E_PI * np.asarray(z, dtype=complex))
    delta1 = rouche_distance_bound(h1_eval, radii=np.linspace(0.05, 1.0, 96))
    theta = 2 * np.pi * np.arange(4096) / 4096
    delta1_high = float(np.min(np.abs(h1_eval(np.exp(1j * theta)))))
    h1 = h.dilate(E_PI)
    return HFactorization(h, a, b, delta, h1, delta1, complex(h.coeffs[1]) * E_PI, delta1_high)


def trace_theorem21_proof(fact: HFactorization, f: TruncatedSeries, label: str = "",
                          expansion: modular.ModularExpansion | None = None) -> list[VerificationRecord]:
    """One record per inequality of the proof chain, evaluated at ``r = e^-pi``."""
    r = E_PI
    a, b = fact.a, fact.b
    a0 = complex(f.coeffs[0])
    ba = abs(b - a)
    tag = f"[{label}]" if label else ""
    if expansion is None or expansion.order < fact.h.order:
        expansion = modular.coefficients_of_minus_J_minus(max(fact.h.order, 1))
    recs = []

    m_f1 = bohr_majorant(f, r, 1)
    # M(h/z) at r, with h/z = (f - a)/(b - a)
    m_hz = (abs(a0 - a) + m_f1.value) / ba
    recs.append(check(f"proof:f1-via-h{tag}", m_f1.upper, ba * m_hz + abs(a - a0)))

    c = fact.h.coeffs
    n = np.arange(1, fact.h.order + 1)
    ratios = np.abs(c[n]) / (fact.delta * expansion.m_coeffs[n])
    k = int(np.argmax(ratios))
    recs.append(check(f"proof:coef-vs-modular{tag}", float(ratios[k]), 1.0, strict=True,
                      worst_n=int(n[k]), delta=fact.delta))

    # majorant of h1 on |z| = 1 equals that of h at e^-pi
    m_h1 = bohr_majorant(fact.h, r, 1)
    jr = float(-modular.eval_J(-r).real)
    recs.append(check(f"proof:h1-majorant{tag}", m_h1.upper, fact.delta1 * jr,
                      delta1=fact.delta1, delta1_high=fact.delta1_high, minus_J_minus_at_r=jr,
                      rhs_with_delta=fact.delta * jr,
                      passes_with_delta=bool(m_h1.upper <= fact.delta * jr)))

    m_zf = abs(a0) * r + r * bohr_majorant(f, r, 1).upper
    recs.append(check(f"proof:zf-majorant{tag}", m_zf, fact.delta1 * ba + abs(a) * r))

    ratio = fact.delta1 / abs(fact.h1_prime_at_0)
    recs.append(check(f"proof:f1-via-ratio{tag}", m_f1.upper, abs(a - a0) * (ratio + 1.0), ratio=ratio))

    ratio_high = fact.delta1_high / abs(fact.h1_prime_at_0)
    recs.append(check(f"proof:ratio-at-most-one{tag}", ratio_high, 1.0, tol=1e-12))
    return recs


def perturbed(fact: HFactorization, factor: float = 1e3) -> HFactorization:
    """Copy with every ``c_n`` multiplied by ``factor`` (harness self-test)."""
    return replace(fact, h=fact.h.scaled(factor), h1=fact.h1.scaled(factor))
