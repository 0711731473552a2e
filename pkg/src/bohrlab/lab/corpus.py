"""Test functions whose images miss at least two finite points.

Each entry carries its Taylor series (with a certified tail), a vectorised
evaluator valid on the whole unit disk, the image domain, and an interval for
``d(f(0), boundary f(U))``.  The omitted pair ``(a, b)`` follows the rule: ``a``
is the complement point nearest ``f(0)`` (ties go to the smaller argument in
``[0, 2 pi)``, then to listing order) and ``b`` is the other listed point.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .. import hyperbolic as hyp
from .. import modular
from ..series import DEFAULT_ORDER, TruncatedSeries, extract_coefficients


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    name: str
    series: TruncatedSeries
    evaluator: Callable
    domain: hyp.DomainSpec
    d_low: float
    d_high: float
    a: complex
    b: complex
    bounded_by_one: bool = False  # sup |f| < 1 on the disk

    @property
    def d(self) -> float:
        """Certified (lower) value of ``d(f(0), boundary f(U))``."""
        return self.d_low

    @property
    def f0(self) -> complex:
        return complex(self.series.coeffs[0])


def _arg(w: complex) -> float:
    return cmath.phase(w) % (2 * math.pi) if w != 0 else 0.0


def choose_omitted(f0: complex, candidates) -> tuple[complex, complex]:
    """Order two omitted points so the nearest to ``f0`` comes first."""
    c = [complex(p) for p in candidates]
    dist = [round(abs(p - f0), 12) for p in c]
    key = sorted(range(len(c)), key=lambda i: (dist[i], round(_arg(c[i]), 12), i))
    return c[key[0]], c[key[1]]


def _with_tail(coeffs, R: float, tail: float) -> TruncatedSeries:
    return TruncatedSeries(coeffs, R, tail, 0.0)


def identity_entry(order: int = DEFAULT_ORDER) -> CorpusEntry:
    c = np.zeros(order + 1)
    c[1] = 1.0
    a, b = choose_omitted(0j, hyp.unit_disk().omitted_points)
    return CorpusEntry("identity", TruncatedSeries(c), lambda z: np.asarray(z, dtype=complex),
                       hyp.unit_disk(), 1.0, 1.0, a, b, bounded_by_one=False)


def automorphism_entry(p: complex, order: int = DEFAULT_ORDER) -> CorpusEntry:
    """``(p - z)/(1 - conj(p) z)``: onto the unit disk, ``f(0) = p``."""
    p = complex(p)
    m = abs(p)
    n = np.arange(1, order + 1)
    c = np.empty(order + 1, dtype=complex)
    c[0] = p
    c[1:] = -(1 - m * m) * p.conjugate() ** (n - 1)
    # exact geometric tail at R = 1
    tail = (1 - m * m) * m ** order / (1 - m) if m > 0 else 0.0
    s = _with_tail(c, 1.0, tail) if tail > 0 else TruncatedSeries(c)
    near = p / m if m > 0 else 1 + 0j
    a, b = near, -near
    return CorpusEntry(f"automorphism({p.real:g}{p.imag:+g}j)", s,
                       lambda z: (p - z) / (1 - p.conjugate() * z),
                       hyp.unit_disk(), 1 - m, 1 - m, a, b, bounded_by_one=True)


def koebe_entry(order: int = DEFAULT_ORDER) -> CorpusEntry:
    R = 0.5
    c = np.arange(order + 1, dtype=float)
    N = order
    tail = R ** (N + 1) * ((N + 1) - N * R) / (1 - R) ** 2
    dom = hyp.slit_plane()
    a, b = choose_omitted(0j, dom.omitted_points)
    return CorpusEntry("koebe", _with_tail(c, R, tail), lambda z: z / (1 - z) ** 2, dom, 0.25, 0.25, a, b)


def strip_entry(order: int = DEFAULT_ORDER) -> CorpusEntry:
    R = 0.5
    n = np.arange(order + 1)
    c = np.where(n % 2 == 1, 2.0 / np.maximum(n, 1), 0.0)
    tail = 2 * R ** (order + 1) / ((order + 1) * (1 - R))
    dom = hyp.strip()
    a, b = choose_omitted(0j, dom.omitted_points)
    d = math.pi / 2
    return CorpusEntry("strip", _with_tail(c, R, tail), lambda z: np.log((1 + z) / (1 - z)), dom, d, d, a, b)


@lru_cache(maxsize=4)
def _j_series(order: int) -> TruncatedSeries:
    return modular.coefficients_of_minus_J_minus(max(order - 1, 1)).as_series(sign=-1)


def modular_entry(rho: float, scale: complex = 1.0, shift: complex = 0.0,
                  order: int = DEFAULT_ORDER) -> CorpusEntry:
    """``scale * J(rho z) + shift``; ``J`` omits 1 and the image is bounded."""
    A, B = complex(scale), complex(shift)
    s = _j_series(order).dilate(rho).scaled(A).shifted(B)

    def f(z):
        return A * modular.eval_J_reduced(rho * np.asarray(z, dtype=complex)) + B

    d_low = hyp.rouche_distance_bound(f)
    big = 2 * abs(modular.eval_J(-rho))
    x = np.linspace(0.0, 0.999, 2000) * rho
    if float(np.min(np.abs(modular.eval_J(x) - 1))) > NUMERIC_SEPARATION:
        # J omits 1; the image is bounded by |J(-rho)|
        a, b = A + B, B - A * big
    else:
        # 1 is approached closer than double precision resolves: use points past the bound
        a, b = B - A * big, B + 1j * A * big
    # A + B stays omitted even when it is not used as the factorisation point
    d_high = min(abs(A), abs(a - B), abs(b - B))

    def distance(w):
        return max(d_low - abs(w - B), 0.0), min(abs(w - a), abs(w - b), abs(w - A - B))

    dom = hyp.DomainSpec("sampled_image", distance, omitted_points=(a, b),
                         simply_connected=False, label=f"J-image({rho:g})")
    return CorpusEntry(f"modular-J({A.real:g}*J({rho:g}z)+{B.real:g})", s, f, dom, d_low, d_high, a, b,
                       bounded_by_one=False)


def modular_cover_entry(order: int = DEFAULT_ORDER) -> CorpusEntry:
    """Universal cover of ``C minus {0, 1}`` with ``f(0) = 1/2``."""
    F = hyp.modular_cover()
    s = extract_coefficients(F.evaluator, 0.5, order)
    a, b = choose_omitted(0.5, F.target.omitted_points)
    return CorpusEntry("modular-cover", s, F.evaluator, F.target, 0.5, 0.5, a, b)


def punctured_disk_entry(order: int = DEFAULT_ORDER) -> CorpusEntry:
    F = hyp.punctured_disk_cover()
    s = extract_coefficients(F.evaluator, 0.5, order)
    d = math.exp(-1)
    a, b = choose_omitted(d, F.target.omitted_points)
    return CorpusEntry("punctured-disk-exp", s, F.evaluator, F.target, d, d, a, b, bounded_by_one=True)


NUMERIC_SEPARATION = 1e-8
AUTOMORPHISM_PARAMS = (0.5, complex(-0.3, 0.4), 0.7j)


def build_corpus(order: int = DEFAULT_ORDER) -> list[CorpusEntry]:
    entries = [identity_entry(order)]
    entries += [automorphism_entry(p, order) for p in AUTOMORPHISM_PARAMS]
    entries += [
        koebe_entry(order),
        strip_entry(order),
        modular_entry(0.5, order=order),
        modular_entry(0.9, scale=0.25, shift=0.1, order=order),
        modular_cover_entry(order),
        punctured_disk_entry(order),
    ]
    return entries
