"""The elliptic modular function ``J(z) = 16 z prod_n ((1+z^2n)/(1+z^(2n-1)))^8``.

``J`` is the lambda function in the nome ``q = exp(i pi tau)``.  It vanishes
only at the origin and omits 0 and 1 on the punctured disk; ``-J(-z)`` has a
Taylor expansion ``z * sum M_n z^n`` with every ``M_n > 0``, which is what
makes ``max_{|z|=r} |J(z)| = |J(-r)|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, InvalidRadius, PoleProximity
from .records import VerificationRecord, check
from .series import DEFAULT_ORDER, TruncatedSeries

PRODUCT_CUTOFF = 1e-18
POLE_TOL = 1e-12
E_PI = math.exp(-math.pi)
UNIVALENCE_RADIUS = math.exp(-math.pi / 2)


def _n_factors(rmax: float) -> int:
    if rmax == 0.0:
        return 0
    # first n with rmax**(2n-1) < cutoff
    return int(math.ceil((math.log(PRODUCT_CUTOFF) / math.log(rmax) + 1) / 2)) + 1


def _check_domain(z: np.ndarray) -> float:
    rmax = float(np.max(np.abs(z))) if z.size else 0.0
    if rmax >= 1.0:
        raise DomainError(f"J is defined on the open unit disk; got |z| = {rmax}")
    return rmax


def eval_J(z):
    """Evaluate ``J`` by the truncated product; accepts scalars or arrays."""
    zz = np.asarray(z, dtype=complex)
    rmax = _check_domain(zz)
    prod = np.ones_like(zz)
    for n in range(1, _n_factors(rmax) + 1):
        den = 1 + zz ** (2 * n - 1)
        if np.any(np.abs(den) < POLE_TOL):
            raise PoleProximity(f"factor 1 + z^{2 * n - 1} nearly vanishes")
        prod = prod * ((1 + zz ** (2 * n)) / den) ** 8
    out = 16 * zz * prod
    return complex(out) if out.ndim == 0 else out


def eval_J_prime(z):
    """Derivative of ``J`` from the logarithmic derivative of the product."""
    zz = np.asarray(z, dtype=complex)
    rmax = _check_domain(zz)
    prod = np.ones_like(zz)
    logd = np.zeros_like(zz)
    for n in range(1, _n_factors(rmax) + 1):
        num = 1 + zz ** (2 * n)
        den = 1 + zz ** (2 * n - 1)
        if np.any(np.abs(den) < POLE_TOL):
            raise PoleProximity(f"factor 1 + z^{2 * n - 1} nearly vanishes")
        prod = prod * (num / den) ** 8
        logd = logd + 8 * (2 * n * zz ** (2 * n - 1) / num - (2 * n - 1) * zz ** (2 * n - 2) / den)
    out = 16 * prod * (1 + zz * logd)
    return complex(out) if out.ndim == 0 else out


# anharmonic Mobius actions on lambda: tau -> tau + 1 and tau -> -1/tau
_SHIFT = np.array([[1.0, 0.0], [1.0, -1.0]])
_INVERT = np.array([[-1.0, 1.0], [0.0, 1.0]])


def eval_J_reduced(q):
    """``J(q)`` through the modular group, for nomes close to the unit circle.

    With ``q = exp(i pi tau)``, ``J`` is the lambda function, which satisfies
    ``lambda(tau + 1) = lambda/(lambda - 1)`` and ``lambda(-1/tau) = 1 - lambda``.
    ``tau`` is moved into ``|Re tau| <= 1/2, |tau| >= 1`` (so ``|q| <= 0.066``)
    before the product is used.  Agrees with :func:`eval_J` inside the disk.
    """
    qq = np.asarray(q, dtype=complex)
    scalar = qq.ndim == 0
    qq = np.atleast_1d(qq)
    _check_domain(qq)
    out = np.zeros_like(qq)
    nz = qq != 0
    tau = np.log(qq[nz]) / (1j * np.pi)
    M = np.broadcast_to(np.eye(2), (tau.size, 2, 2)).copy()
    for _ in range(200):
        n = np.round(tau.real)
        tau = tau - n
        odd = (n.astype(np.int64) % 2) == 1
        M[odd] = M[odd] @ _SHIFT
        inv = np.abs(tau) < 1 - 1e-14
        if not inv.any():
            break
        tau[inv] = -1 / tau[inv]
        M[inv] = M[inv] @ _INVERT
    lam = eval_J(np.exp(1j * np.pi * tau))
    # near a cusp the value may overflow to inf, which is the true limit
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out[nz] = (M[:, 0, 0] * lam + M[:, 0, 1]) / (M[:, 1, 0] * lam + M[:, 1, 1])
    return complex(out[0]) if scalar else out


def minus_J_minus(z):
    """``F(z) = -J(-z)``, the positive-coefficient form."""
    return -eval_J(-np.asarray(z, dtype=complex)) if np.ndim(z) else -eval_J(-complex(z))


@dataclass(frozen=True, eq=False)
class ModularExpansion:
    """Coefficients ``M_0..M_N`` of ``-J(-z) = z * sum M_n z^n``."""

    m_coeffs: np.ndarray
    exact: tuple  # python ints, kept for positivity certificates

    @property
    def order(self) -> int:
        return self.m_coeffs.size - 1

    def all_positive(self) -> bool:
        return all(m > 0 for m in self.exact)

    def convexity_gaps(self) -> np.ndarray:
        """Second differences ``M_{n+1} - 2 M_n + M_{n-1}`` (exact ints as floats)."""
        e = self.exact
        return np.array([float(e[n + 1] - 2 * e[n] + e[n - 1]) for n in range(1, len(e) - 1)])

    def as_series(self, sign: int = -1) -> TruncatedSeries:
        """Taylor series of ``J`` (``sign=-1``) or of ``-J(-z)`` (``sign=+1``).

        The series has order ``N + 1``; the tail budget at ``R = 1/2`` comes from
        ``M_n r0**(n+1) <= -J(-r0)`` at ``r0 = 3/4`` (positive coefficients).
        """
        N = self.order
        c = np.zeros(N + 2, dtype=complex)
        for n, m in enumerate(self.m_coeffs):
            c[n + 1] = m if sign > 0 else (-1) ** n * m
        R, r0 = 0.5, 0.75
        big = -eval_J(-r0).real
        q = R / r0
        tail = big * q ** (N + 2) / (1 - q)
        # float conversion of the exact integers
        err = float(np.sum(self.m_coeffs * R ** np.arange(1, N + 2))) * 2 * np.finfo(float).eps
        return TruncatedSeries(c, R, tail + err, err)


def coefficients_of_minus_J_minus(order: int = DEFAULT_ORDER) -> ModularExpansion:
    """Expand ``-J(-z) = 16 z prod ((1+z^2n)/(1-z^(2n-1)))^8`` in exact integers."""
    if order < 1:
        raise ValueError("order must be at least 1")
    N = order
    acc = [0] * (N + 1)
    acc[0] = 16
    for n in range(1, N + 2):
        m = 2 * n - 1
        if m > N and 2 * n > N:
            break
        num = [0] * (N + 1)
        for k in range(9):
            if 2 * n * k <= N:
                num[2 * n * k] = comb(8, k)
        # (1 - z^m)^(-8) = sum_k C(k+7, 7) z^(mk)
        neg = [0] * (N + 1)
        for k in range(N // m + 1):
            neg[m * k] = comb(k + 7, 7)
        acc = _int_convolve(_int_convolve(acc, num, N), neg, N)
    return ModularExpansion(np.array([float(v) for v in acc]), tuple(acc))


def _int_convolve(a, b, N):
    out = [0] * (N + 1)
    nz = [(j, bj) for j, bj in enumerate(b) if bj]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in nz:
                if i + j > N:
                    break
                out[i + j] += ai * bj
    return out


class MaxModulus(NamedTuple):
    argmax: complex
    max_value: float
    expected: float
    grid_step: float

    @property
    def at_minus_r(self) -> bool:
        r = abs(self.argmax)
        return abs(self.argmax - (-r)) <= self.grid_step * r * (1 + 1e-12)


def max_modulus_on_circle(r: float, samples: int = 720) -> MaxModulus:
    """Maximum of ``|J|`` over ``samples`` equispaced points of ``|z| = r``."""
    if not 0.0 < r < 1.0:
        raise InvalidRadius(f"radius must lie in (0, 1), got {r}")
    if samples < 360:
        raise ValueError("at least 360 samples are required")
    theta = 2 * np.pi * np.arange(samples) / samples
    z = r * np.exp(1j * theta)
    vals = np.abs(eval_J(z))
    i = int(np.argmax(vals))
    return MaxModulus(complex(z[i]), float(vals[i]), abs(eval_J(-r)), 2 * np.pi / samples)


@dataclass(frozen=True)
class UnivalenceScanResult:
    radius_tested: float
    injective: bool
    witness_pair: tuple[complex, complex] | None = None

    def __post_init__(self):
        if (self.witness_pair is None) != self.injective:
            raise ValueError("a witness pair is present exactly when injectivity is refuted")


def _polar_grid(radius: float, density: int) -> tuple[np.ndarray, float]:
    h = 1.0 / density
    rings = max(int(math.ceil(radius / h)), 1)
    pts = [0j]
    for k in range(1, rings + 1):
        rho = radius * k / rings
        m = max(int(math.ceil(2 * math.pi * rho / h)), 8)
        pts.extend(rho * np.exp(2j * np.pi * (np.arange(m) + 0.5 * (k % 2)) / m))
    return np.array(pts), h


def _newton_match(targets: np.ndarray, z0: np.ndarray, escape: float, steps: int = 50) -> np.ndarray:
    """Solve ``J(z) = target`` from each starting point; NaN where Newton escapes."""
    z = z0.astype(complex)
    alive = np.ones(z.shape, dtype=bool)
    for _ in range(steps):
        zi = z[alive]
        if zi.size == 0:
            break
        step = (eval_J(zi) - targets[alive]) / eval_J_prime(zi)
        zi = zi - step
        z[alive] = zi
        escaped = ~np.isfinite(zi) | (np.abs(zi) >= escape)
        idx = np.flatnonzero(alive)
        z[idx[escaped]] = np.nan
        alive[idx[escaped]] = False
    return z


def univalence_scan(radius: float, grid_density: int = 50, max_candidates: int = 4000) -> UnivalenceScanResult:
    """Search for two distinct points in ``|z| <= radius`` with equal ``J`` values.

    Candidate pairs come from a k-d tree over grid images; each candidate is
    refined by Newton's method and accepted only when the refined point stays
    in the disk, is separated from its partner by more than ``1e-6`` and
    matches to ``1e-9 * (1 + |J'|)``.  ``injective=True`` means no collision
    was found, which is not a proof of univalence.
    """
    if not 0.0 < radius < 1.0:
        raise InvalidRadius(f"radius must lie in (0, 1), got {radius}")
    if grid_density < 50:
        raise ValueError("grid_density must be at least 50")
    z, h = _polar_grid(radius, grid_density)
    w = eval_J(z)
    dw = np.abs(eval_J_prime(z))
    pts = np.column_stack([w.real, w.imag])
    tree = cKDTree(pts)
    # per-point search radius from the local derivative
    hits = tree.query_ball_point(pts, r=2.0 * h * dw)
    pairs = np.array([(i, j) for i, js in enumerate(hits) for j in js if j != i], dtype=int).reshape(-1, 2)
    if len(pairs):
        sep = np.abs(z[pairs[:, 0]] - z[pairs[:, 1]])
        pairs = pairs[sep > 3 * h]
    if len(pairs):
        gap = np.abs(w[pairs[:, 0]] - w[pairs[:, 1]]) / (dw[pairs[:, 0]] + dw[pairs[:, 1]])
        pairs = pairs[np.argsort(gap, kind="stable")][:max_candidates]
    if len(pairs) == 0:
        return UnivalenceScanResult(radius, True, None)
    escape = 0.5 * (1.0 + radius)
    for start in range(0, len(pairs), 256):
        batch = pairs[start:start + 256]
        z1 = z[batch[:, 0]]
        z2 = _newton_match(w[batch[:, 0]], z[batch[:, 1]], escape)
        ok = np.isfinite(z2)
        ok[ok] &= (np.abs(z2[ok]) <= radius) & (np.abs(z2[ok] - z1[ok]) > 1e-6)
        for k in np.flatnonzero(ok):
            a, b = complex(z1[k]), complex(z2[k])
            tol = 1e-9 * (1 + abs(eval_J_prime(b)))
            if abs(eval_J(b) - eval_J(a)) <= tol:
                return UnivalenceScanResult(radius, False, (a, b))
    return UnivalenceScanResult(radius, True, None)


def lemma17_radius(alpha: float) -> float:
    """Univalence radius ``1 + alpha - sqrt((1+alpha)^2 - 1)`` for ``h`` with ``(h/z)(0) = e^-alpha``."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    x = 1.0 + alpha
    # rationalised form avoids cancellation for large alpha
    return 1.0 / (x + math.sqrt(x * x - 1.0))


def radius_threshold(level: float = 0.26) -> float:
    """The ``alpha`` at which the univalence radius equals ``level``."""
    t = 1.0 / level
    return 0.5 * (t + 1.0 / t) - 1.0


def subordination_coefficient_check(h: TruncatedSeries, a: complex,
                                    expansion: ModularExpansion | None = None) -> VerificationRecord:
    """Check ``|h_k| <= 16 |a| M_{k-1}`` for every computed ``k >= 1``.

    ``M_{k-1}`` is the coefficient of ``z^k`` in ``-J(-z)``.  The record's
    ``lhs`` is the worst ratio ``|h_k| / (16 |a| M_{k-1})`` and ``rhs`` is 1.
    """
    if expansion is None or expansion.order + 1 < h.order:
        expansion = coefficients_of_minus_J_minus(max(h.order - 1, 1))
    scale = 16 * abs(a)
    ratios = [abs(h.coeffs[k]) / (scale * expansion.m_coeffs[k - 1]) for k in range(1, h.order + 1)]
    worst = int(np.argmax(ratios)) + 1
    return check("subordination-coefficients", max(ratios), 1.0, tol=1e-12,
                 worst_index=worst, h0=abs(h.coeffs[0]), a=complex(a))
