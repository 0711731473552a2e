"""Truncated power series with certified tails, and the Bohr majorant.

A :class:`TruncatedSeries` holds the Taylor coefficients ``a_0..a_N`` of a
function analytic near the origin together with two error terms measured at a
reference radius ``R`` (``sample_radius``):

* the truncation tail ``sum_{n>N} |a_n| R**n``, which shrinks like
  ``(r/R)**(N+1)`` when evaluated at a smaller radius ``r``;
* the coefficient error ``sum_{n<=N} |a_n - a~_n| R**n`` coming from
  numerical extraction (aliasing, roundoff), which is carried unscaled.

``tail_bound`` reports the sum of both at ``R``.  Everything here is an
immutable value; operations return new series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EvaluationFailure, InvalidRadius, NonSchwarzInner

DEFAULT_ORDER = 64
SCHWARZ_TOL = 1e-12
_EPS = np.finfo(float).eps


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: np.ndarray
    sample_radius: float = 1.0
    tail_bound: float = 0.0
    coeff_error: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))
        if self.coeffs.size == 0:
            raise ValueError("a series needs at least the constant coefficient")
        if not 0.0 < self.sample_radius <= 1.0:
            raise InvalidRadius(f"sample_radius must lie in (0, 1], got {self.sample_radius}")
        for name in ("tail_bound", "coeff_error"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v}")
        if self.coeff_error > self.tail_bound:
            raise ValueError("coeff_error is part of tail_bound and cannot exceed it")

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def exact(self) -> bool:
        return self.tail_bound == 0.0

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        return (f"TruncatedSeries(order={self.order}, R={self.sample_radius:g}, "
                f"tail={self.tail_bound:.3g}, head={self.coeffs[:4]})")

    def tail_at(self, r: float) -> float:
        """Certified bound on the majorant error when evaluating at radius ``r``."""
        if self.tail_bound == 0.0:
            return 0.0
        if r > self.sample_radius:
            return math.inf
        trunc = self.tail_bound - self.coeff_error
        if trunc > 0.0:
            trunc *= (r / self.sample_radius) ** (self.order + 1)
        return trunc + self.coeff_error

    def __call__(self, z):
        """Evaluate the truncated polynomial (Horner)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        R = self.sample_radius
        dropped = float(np.sum(np.abs(self.coeffs[order + 1:]) * R ** np.arange(order + 1, self.order + 1)))
        # dropped terms plus the old tail move into the error budget unscaled
        err = self.coeff_error + dropped + (self.tail_bound - self.coeff_error)
        return TruncatedSeries(self.coeffs[: order + 1], R, err, err)

    def scaled(self, factor: complex) -> "TruncatedSeries":
        f = abs(factor)
        return TruncatedSeries(self.coeffs * factor, self.sample_radius,
                               self.tail_bound * f, self.coeff_error * f)

    def shifted(self, constant: complex) -> "TruncatedSeries":
        c = self.coeffs.copy()
        c[0] += constant
        return TruncatedSeries(c, self.sample_radius, self.tail_bound, self.coeff_error)

    def dilate(self, rho: float) -> "TruncatedSeries":
        """Series of ``z -> f(rho*z)`` for ``0 < rho <= 1``."""
        if not 0.0 < rho <= 1.0:
            raise InvalidRadius(f"dilation factor must lie in (0, 1], got {rho}")
        coeffs = self.coeffs * rho ** np.arange(self.order + 1)
        if self.exact:
            return TruncatedSeries(coeffs)
        # budget of f(rho z) at R equals the budget of f at rho*R
        R = min(1.0, self.sample_radius / rho)
        trunc, err = _budget_at(self, rho * R, self.order)
        return TruncatedSeries(coeffs, R, trunc + err, err)

    def to_json(self) -> dict:
        return {
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
            "order": self.order,
            "tail_bound": float(self.tail_bound),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        coeffs = [complex(re, im) for re, im in data["coeffs"]]
        if len(coeffs) != data["order"] + 1:
            raise ValueError("order does not match the number of coefficients")
        t = float(data.get("tail_bound", 0.0))
        return cls(coeffs, tail_bound=t, coeff_error=t)


@dataclass(frozen=True)
class BohrValue:
    value: float
    radius: float
    upper: float

    def __post_init__(self):
        if self.upper < self.value:
            raise ValueError("upper bound below the truncated value")


def series(coeffs) -> TruncatedSeries:
    """Exact polynomial (no tail)."""
    return TruncatedSeries(coeffs)


def zero(order: int = 0) -> TruncatedSeries:
    return TruncatedSeries(np.zeros(order + 1))


def unit(order: int = 0) -> TruncatedSeries:
    c = np.zeros(order + 1)
    c[0] = 1.0
    return TruncatedSeries(c)


def identity(order: int = 1) -> TruncatedSeries:
    c = np.zeros(max(order, 1) + 1)
    c[1] = 1.0
    return TruncatedSeries(c)


def _budget_at(s: TruncatedSeries, R: float, order: int) -> tuple[float, float]:
    """Split of ``s``'s error at radius ``R`` for a result of the given order."""
    if s.exact:
        return 0.0, 0.0
    if order == s.order:
        trunc = (s.tail_bound - s.coeff_error) * (R / s.sample_radius) ** (s.order + 1)
        return trunc, s.coeff_error
    return 0.0, s.tail_at(R)


def _majorant(coeffs: np.ndarray, r: float, start: int = 0) -> float:
    n = np.arange(start, coeffs.size)
    if n.size == 0:
        return 0.0
    with np.errstate(under="ignore"):
        return float(np.sum(np.abs(coeffs[start:]) * r ** n))


def add(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    N = max(s.order, t.order)
    c = np.zeros(N + 1, dtype=complex)
    c[: s.order + 1] += s.coeffs
    c[: t.order + 1] += t.coeffs
    R = min(s.sample_radius, t.sample_radius)
    ts, es = _budget_at(s, R, N)
    tt, et = _budget_at(t, R, N)
    err = es + et
    return TruncatedSeries(c, R, ts + tt + err, err)


def sub(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    return add(s, t.scaled(-1.0))


def mul(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    N = min(s.order, t.order)
    c = np.convolve(s.coeffs[: N + 1], t.coeffs[: N + 1])[: N + 1]
    if s.exact and t.exact and N == s.order == t.order:
        full = np.convolve(s.coeffs, t.coeffs)
        if np.all(full[N + 1:] == 0):
            return TruncatedSeries(c)
    R = min(s.sample_radius, t.sample_radius)
    Us = _majorant(s.coeffs, R) + s.tail_at(R)
    Ut = _majorant(t.coeffs, R) + t.tail_at(R)
    err = s.coeff_error * Ut + t.coeff_error * Us
    trunc = max(0.0, Us * Ut - _majorant(c, R) + err)
    # rounding slack on the majorant difference
    trunc += 4 * _EPS * Us * Ut * (N + 1)
    return TruncatedSeries(c, R, trunc + err, err)


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Taylor coefficients of ``outer(inner(z))``; ``inner(0)`` must vanish."""
    if abs(inner.coeffs[0]) > SCHWARZ_TOL:
        raise NonSchwarzInner(f"inner series has constant term {inner.coeffs[0]!r}")
    N = min(outer.order, inner.order)
    w = np.array(inner.coeffs[: N + 1], dtype=complex)
    w[0] = 0.0
    acc = np.zeros(N + 1, dtype=complex)
    for a in outer.coeffs[::-1]:
        acc = np.convolve(acc, w)[: N + 1]
        acc[0] += a
    if outer.exact and inner.exact and _degree(outer) * _degree(inner) <= N:
        return TruncatedSeries(acc)

    # error budget at a radius where the inner majorant stays inside the outer's reference disk
    Ro = outer.sample_radius
    rho = inner.sample_radius

    def inner_upper(x):
        return _majorant(inner.coeffs, x) + inner.tail_at(x)

    if inner_upper(rho) > Ro:
        lo, hi = 0.0, rho
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if inner_upper(mid) <= Ro:
                lo = mid
            else:
                hi = mid
        rho = lo
    if rho <= 0.0:
        raise InvalidRadius("inner series leaves the outer series' disk of certification")
    Vi = _majorant(inner.coeffs, rho)
    Ui = inner_upper(rho)
    k = np.arange(outer.order + 1)
    abs_o = np.abs(outer.coeffs)
    err = outer.tail_at(Ui) + float(np.sum(abs_o * (Ui ** k - Vi ** k)))
    err += max(0.0, float(np.sum(abs_o * Vi ** k)) - _majorant(acc, rho))
    err += 4 * _EPS * float(np.sum(abs_o * Ui ** k)) * (N + 1)
    return TruncatedSeries(acc, rho, err, err)


def _degree(s: TruncatedSeries) -> int:
    return int(np.max(np.nonzero(s.coeffs)[0], initial=0))


def differentiate(s: TruncatedSeries) -> TruncatedSeries:
    N = s.order
    if N == 0:
        return TruncatedSeries([0.0])
    n = np.arange(1, N + 1)
    c = s.coeffs[1:] * n
    if s.exact:
        return TruncatedSeries(c)
    theta = 0.9
    R = s.sample_radius
    Rp = theta * R
    trunc_R = s.tail_bound - s.coeff_error
    # |a_n| R^n <= trunc_R for n > N, so sum n |a_n| Rp^(n-1) <= trunc_R/Rp * sum_{n>N} n theta^n
    geo = theta ** (N + 1) * ((N + 1) - N * theta) / (1 - theta) ** 2
    trunc = trunc_R / Rp * geo
    err = N / Rp * s.coeff_error
    return TruncatedSeries(c, Rp, trunc + err, err)


def integrate(s: TruncatedSeries) -> TruncatedSeries:
    N = s.order
    c = np.zeros(N + 2, dtype=complex)
    c[1:] = s.coeffs / np.arange(1, N + 2)
    if s.exact:
        return TruncatedSeries(c)
    R = s.sample_radius
    trunc = R * (s.tail_bound - s.coeff_error) / (N + 2)
    err = R * s.coeff_error
    return TruncatedSeries(c, R, trunc + err, err)


def bohr_majorant(s: TruncatedSeries, r: float, from_index: int = 0) -> BohrValue:
    """Bohr majorant ``sum_{n >= from_index} |a_n| r**n`` with a certified upper bound."""
    if not (0.0 <= r < 1.0):
        raise InvalidRadius(f"radius must lie in [0, 1), got {r}")
    if not 0 <= from_index <= s.order:
        raise ValueError(f"from_index {from_index} outside 0..{s.order}")
    if r == 0.0:
        v = float(abs(s.coeffs[0])) if from_index == 0 else 0.0
        return BohrValue(v, r, v + s.coeff_error)
    value = _majorant(s.coeffs, r, from_index)
    upper = value + s.tail_at(r)
    # summation roundoff
    upper += (s.order + 1) * _EPS * value
    return BohrValue(value, r, upper)


def extract_coefficients(evaluator: Callable, radius: float, order: int = DEFAULT_ORDER,
                         outer_radius: float | None = None) -> TruncatedSeries:
    """Taylor coefficients from samples of ``evaluator`` on ``|z| = radius``.

    Uses ``K = 4*order`` equispaced nodes (a discretised Cauchy integral).  The
    tail and aliasing budget comes from a Cauchy estimate ``|a_n| <= M / Ro**n``
    with ``M`` the sampled maximum of ``|f|`` on the larger circle ``|z| = Ro``
    (default halfway between ``radius`` and 1), so the evaluator must be
    analytic there.
    """
    if not 0.0 < radius < 1.0:
        raise InvalidRadius(f"radius must lie in (0, 1), got {radius}")
    if order < 1:
        raise ValueError("order must be at least 1")
    if outer_radius is None:
        outer_radius = 0.5 * (1.0 + radius)
    if not radius < outer_radius <= 1.0:
        raise InvalidRadius("outer_radius must lie in (radius, 1]")
    K = 4 * order
    nodes = np.exp(2j * np.pi * np.arange(K) / K)
    vals = _evaluate(evaluator, radius * nodes)
    raw = np.fft.fft(vals) / K
    n = np.arange(order + 1)
    coeffs = raw[: order + 1] / radius ** n

    Kc = 4 * K
    big = _evaluate(evaluator, outer_radius * np.exp(2j * np.pi * np.arange(Kc) / Kc))
    # sampled maxima get a 1% safety factor
    M = 1.01 * float(np.max(np.abs(big)))
    q = radius / outer_radius
    alias = M * q ** K / ((1 - q ** K) * (1 - q))
    roundoff = (order + 1) * 4 * _EPS * math.log2(K) * float(np.max(np.abs(vals)))
    trunc = M * q ** (order + 1) / (1 - q)
    err = alias + roundoff
    return TruncatedSeries(coeffs, radius, trunc + err, err)


def _evaluate(evaluator, z: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(evaluator(z), dtype=complex)
        if vals.shape != z.shape:
            raise ValueError
    except (TypeError, ValueError):
        vals = np.array([complex(evaluator(complex(x))) for x in z])
    if not np.all(np.isfinite(vals)):
        raise EvaluationFailure("evaluator returned non-finite values on the sample circle")
    return vals
