"""Hyperbolic densities of canonical domains and the distance-density inequalities.

Every domain carries a distance-to-boundary function returning an interval
``(lo, hi)`` containing ``d(w, boundary)``; exact domains return ``lo == hi``.
Inequality checks use the end of the interval that makes a pass certified.
Densities are normalised as ``1/(1-|z|^2)`` on the unit disk.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import modular
from .errors import DomainError, ZeroDerivative
from .records import VerificationRecord

INEQ_TOL = 1e-9
BOUNDARY_SAMPLES = 4096

KINDS = (
    "unit_disk", "half_plane", "strip", "slit_plane", "disk_with_center_radius",
    "punctured_disk", "twice_punctured_plane", "sampled_image",
)

Interval = tuple[float, float]


@dataclass(frozen=True, eq=False)
class DomainSpec:
    kind: str
    distance_fn: Callable[[complex], Interval]
    omitted_points: tuple[complex, complex] | None = None
    density_fn: Callable[[complex], float] | None = None
    simply_connected: bool = True
    label: str = ""
    contains_fn: Callable[[complex], bool] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.omitted_points is not None:
            a, b = self.omitted_points
            if a == b:
                raise ValueError("omitted points must be distinct")
            if self.contains_fn is not None and (self.contains_fn(a) or self.contains_fn(b)):
                raise ValueError("omitted points must lie outside the domain")

    @property
    def name(self) -> str:
        return self.label or self.kind

    def distance(self, w: complex) -> Interval:
        return self.distance_fn(complex(w))

    def contains(self, w: complex) -> bool:
        if self.contains_fn is None:
            return self.distance(w)[1] > 0
        return self.contains_fn(complex(w))


def _exact(fn):
    def interval(w):
        d = float(fn(w))
        return d, d
    return interval


def unit_disk() -> DomainSpec:
    return disk(0j, 1.0, label="unit_disk", kind="unit_disk")


def disk(center: complex, radius: float, label: str = "", kind: str = "disk_with_center_radius") -> DomainSpec:
    c, R = complex(center), float(radius)
    return DomainSpec(
        kind,
        _exact(lambda w: R - abs(w - c)),
        omitted_points=(c + R, c - R),
        density_fn=lambda w: R / (R * R - abs(w - c) ** 2),
        label=label or f"disk({c:.3g},{R:.3g})",
        contains_fn=lambda w: abs(w - c) < R,
    )


def half_plane() -> DomainSpec:
    """Right half-plane ``Re w > 0``."""
    return DomainSpec(
        "half_plane",
        _exact(lambda w: w.real),
        omitted_points=(0j, -1 + 0j),
        density_fn=lambda w: 1.0 / (2.0 * w.real),
        contains_fn=lambda w: w.real > 0,
    )


def strip() -> DomainSpec:
    """Horizontal strip ``|Im w| < pi/2``."""
    h = math.pi / 2
    return DomainSpec(
        "strip",
        _exact(lambda w: h - abs(w.imag)),
        omitted_points=(1j * h, -1j * h),
        density_fn=lambda w: 1.0 / (2.0 * math.cos(w.imag)),
        contains_fn=lambda w: abs(w.imag) < h,
    )


def _koebe_inverse(w: complex) -> tuple[complex, complex]:
    s = cmath.sqrt(1 + 4 * w)
    z = (s - 1) / (s + 1)
    dz = 4 / (s * (s + 1) ** 2)
    return z, dz


def _slit_distance(w: complex) -> float:
    if w.real >= -0.25:
        return abs(w + 0.25)
    return abs(w.imag)


def slit_plane() -> DomainSpec:
    """The Koebe image ``C minus (-inf, -1/4]``."""
    def density(w):
        z, dz = _koebe_inverse(w)
        return abs(dz) / (1 - abs(z) ** 2)

    return DomainSpec(
        "slit_plane",
        _exact(_slit_distance),
        omitted_points=(-0.25 + 0j, -1 + 0j),
        density_fn=density,
        contains_fn=lambda w: not (w.imag == 0 and w.real <= -0.25),
    )


def punctured_disk() -> DomainSpec:
    """``0 < |w| < 1``; not simply connected."""
    return DomainSpec(
        "punctured_disk",
        _exact(lambda w: min(abs(w), 1 - abs(w))),
        omitted_points=(0j, 2 + 0j),
        density_fn=lambda w: 1.0 / (2 * abs(w) * math.log(1 / abs(w))),
        simply_connected=False,
        contains_fn=lambda w: 0 < abs(w) < 1,
    )


def twice_punctured_plane(a: complex = 0j, b: complex = 1 + 0j) -> DomainSpec:
    """``C minus {a, b}``; its density is only available through a covering map."""
    a, b = complex(a), complex(b)
    return DomainSpec(
        "twice_punctured_plane",
        _exact(lambda w: min(abs(w - a), abs(w - b))),
        omitted_points=(a, b),
        simply_connected=False,
        label=f"C-{{{a:.3g},{b:.3g}}}",
        contains_fn=lambda w: w != a and w != b,
    )


def sampled_boundary_distance(boundary: Callable, samples: int = BOUNDARY_SAMPLES) -> Callable[[complex], Interval]:
    """Distance to a closed boundary curve ``theta -> boundary(theta)``.

    Returns ``(min sample - mesh bound, refined min)``; the mesh bound is half a
    step times 1.5x the largest sampled speed of the curve.
    """
    theta = 2 * np.pi * np.arange(samples) / samples
    pts = np.asarray(boundary(theta), dtype=complex)
    step = 2 * np.pi / samples
    speed = 1.5 * float(np.max(np.abs(np.diff(np.append(pts, pts[0]))))) / step
    mesh = 0.5 * step * speed

    def interval(w: complex) -> Interval:
        dist = np.abs(pts - w)
        k = int(np.argmin(dist))
        low = float(dist[k])
        res = minimize_scalar(lambda t: abs(complex(boundary(np.array([t]))[0]) - w),
                              bounds=(theta[k] - step, theta[k] + step), method="bounded",
                              options={"xatol": 1e-13})
        high = min(low, float(res.fun))
        return max(low - mesh, 0.0), high

    interval.boundary_points = pts
    return interval


def sampled_image(boundary: Callable, label: str, omitted=None, simply_connected: bool = True) -> DomainSpec:
    return DomainSpec("sampled_image", sampled_boundary_distance(boundary), omitted_points=omitted,
                      simply_connected=simply_connected, label=label)


def rouche_distance_bound(f: Callable, radii=None, samples: int = 2048) -> float:
    """Lower bound for ``d(f(0), C minus f(U))`` from circle images.

    For every ``rho``, ``f - f(0)`` has a zero in ``|z| < rho``, so by Rouche
    every ``w`` with ``|w - f(0)| < min_{|z|=rho} |f - f(0)|`` is attained.
    The bound is the best such minimum over ``radii`` minus a sampling mesh term.
    """
    if radii is None:
        radii = np.linspace(0.02, 0.999, 200)
    w0 = complex(np.asarray(f(np.array([0j])))[0])
    theta = 2 * np.pi * np.arange(samples) / samples
    step = 2 * np.pi / samples
    best = 0.0
    for rho in radii:
        with np.errstate(all="ignore"):
            vals = np.asarray(f(rho * np.exp(1j * theta)), dtype=complex) - w0
        if not np.all(np.isfinite(vals)):
            continue
        speed = 1.5 * float(np.max(np.abs(np.diff(np.append(vals, vals[0]))))) / step
        best = max(best, float(np.min(np.abs(vals))) - 0.5 * step * speed)
    return best


@dataclass(frozen=True, eq=False)
class CoveringMap:
    label: str
    evaluator: Callable
    derivative: Callable
    target: DomainSpec
    univalent: bool

    def __call__(self, z):
        return self.evaluator(z)


def identity_cover() -> CoveringMap:
    return CoveringMap("identity", lambda z: z, lambda z: np.ones_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 1 + 0j,
                       unit_disk(), True)


def disk_automorphism(p: complex, rotation: float = 0.0) -> CoveringMap:
    """``e^{i rotation} (z + p)/(1 + conj(p) z)`` with ``|p| < 1``."""
    p = complex(p)
    if abs(p) >= 1:
        raise DomainError("automorphism parameter must lie in the unit disk")
    u = cmath.exp(1j * rotation)
    return CoveringMap(
        f"automorphism({p:.3g})",
        lambda z: u * (z + p) / (1 + p.conjugate() * z),
        lambda z: u * (1 - abs(p) ** 2) / (1 + p.conjugate() * z) ** 2,
        unit_disk(), True,
    )


def cayley_cover() -> CoveringMap:
    return CoveringMap("cayley", lambda z: (1 + z) / (1 - z), lambda z: 2 / (1 - z) ** 2, half_plane(), True)


def koebe_cover() -> CoveringMap:
    return CoveringMap("koebe", lambda z: z / (1 - z) ** 2, lambda z: (1 + z) / (1 - z) ** 3, slit_plane(), True)


def strip_cover() -> CoveringMap:
    return CoveringMap("strip", lambda z: np.log((1 + z) / (1 - z)), lambda z: 2 / (1 - z * z), strip(), True)


def punctured_disk_cover() -> CoveringMap:
    """``exp((z+1)/(z-1))``, the universal cover of ``0 < |w| < 1``."""
    def f(z):
        return np.exp((z + 1) / (z - 1))

    return CoveringMap("punctured_disk", f, lambda z: f(z) * (-2) / (z - 1) ** 2, punctured_disk(), False)


def _nome(z):
    return np.exp(-np.pi * (1 + z) / (1 - z))


def modular_cover(scale: complex = 1.0, shift: complex = 0.0) -> CoveringMap:
    """``scale * J(exp(-pi (1+z)/(1-z))) + shift``, covering ``C minus {shift, scale + shift}``.

    At ``z = 0`` the nome is ``e^-pi`` so the unscaled cover takes the value 1/2.
    """
    A, B = complex(scale), complex(shift)

    def f(z):
        return A * modular.eval_J_reduced(_nome(z)) + B

    def df(z):
        q = _nome(z)
        return A * modular.eval_J_prime(q) * q * (-2 * np.pi) / (1 - z) ** 2

    return CoveringMap(f"modular({A:.3g},{B:.3g})", f, df, twice_punctured_plane(B, A + B), False)


def affine(F: CoveringMap, scale: complex, shift: complex, target: DomainSpec) -> CoveringMap:
    A, B = complex(scale), complex(shift)
    return CoveringMap(f"{A:.3g}*{F.label}+{B:.3g}", lambda z: A * F.evaluator(z) + B,
                       lambda z: A * F.derivative(z), target, F.univalent)


def precompose(F: CoveringMap, phi: CoveringMap) -> CoveringMap:
    """``F o phi`` for a disk automorphism ``phi``."""
    return CoveringMap(f"{F.label}o{phi.label}", lambda z: F.evaluator(phi.evaluator(z)),
                       lambda z: F.derivative(phi.evaluator(z)) * phi.derivative(z), F.target, F.univalent)


def density_unit_disk(z: complex) -> float:
    z = complex(z)
    if abs(z) >= 1:
        raise DomainError(f"|z| must be below 1, got {abs(z)}")
    return 1.0 / (1.0 - abs(z) ** 2)


def pushforward_density(F: CoveringMap, z: complex) -> float:
    """Density of ``F``'s target at ``F(z)``: ``1 / (|F'(z)| (1 - |z|^2))``."""
    lam = density_unit_disk(z)
    d = abs(complex(F.derivative(complex(z))))
    if d == 0.0 or not math.isfinite(d):
        raise ZeroDerivative(f"{F.label} has derivative {d} at {z}")
    return lam / d


def check_distance_density(domain: DomainSpec, w: complex, density: float | None = None) -> VerificationRecord:
    """``d(w, boundary) * density(w) <= 1``, and ``>= 1/4`` for simply connected domains."""
    w = complex(w)
    if density is None:
        if domain.density_fn is None:
            raise ValueError(f"{domain.name} has no density; pass one from a covering map")
        density = domain.density_fn(w)
    lo, hi = domain.distance(w)
    p_hi, p_lo = hi * density, lo * density
    upper_ok = 0 < p_hi <= 1 + INEQ_TOL
    lower_ok = (not domain.simply_connected) or p_lo >= 0.25 - INEQ_TOL
    return VerificationRecord(
        f"distance-density[{domain.name}]", p_hi, 1.0, bool(upper_ok and lower_ok), 1.0 - p_hi,
        {"w": w, "product_low": p_lo, "simply_connected": domain.simply_connected, "lower_bound_ok": lower_ok},
    )


def check_koebe_bounds(F: CoveringMap, z: complex) -> VerificationRecord:
    """``d(F(z)) <= |F'(z)|(1-|z|^2)`` always; ``>= 1/4`` of it when ``F`` is univalent."""
    z = complex(z)
    w = complex(F.evaluator(z))
    scale = abs(complex(F.derivative(z))) * (1 - abs(z) ** 2)
    lo, hi = F.target.distance(w)
    upper_ok = hi <= scale + INEQ_TOL
    lower_ok = (not F.univalent) or lo >= 0.25 * scale - INEQ_TOL
    return VerificationRecord(
        f"koebe-bounds[{F.label}]", hi, scale, bool(upper_ok and lower_ok), scale - hi,
        {"z": z, "w": w, "distance_low": lo, "lower_rhs": 0.25 * scale, "univalent": F.univalent},
    )
