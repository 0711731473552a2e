import cmath
import math

import numpy as np
import pytest

from bohrlab import hyperbolic as hyp
from bohrlab.errors import DomainError, ZeroDerivative


def test_density_unit_disk():
    assert hyp.density_unit_disk(0) == 1
    assert hyp.density_unit_disk(0.5) == pytest.approx(4 / 3)
    assert hyp.density_unit_disk(0.9) == pytest.approx(1 / 0.19)
    with pytest.raises(DomainError):
        hyp.density_unit_disk(1.0)


def test_pushforward_examples():
    assert hyp.pushforward_density(hyp.identity_cover(), 0.3) == pytest.approx(1 / 0.91)
    assert hyp.pushforward_density(hyp.cayley_cover(), 0) == pytest.approx(0.5)
    assert hyp.half_plane().density_fn(1 + 0j) == pytest.approx(0.5)
    assert hyp.pushforward_density(hyp.koebe_cover(), 0) == pytest.approx(1.0)
    assert hyp.slit_plane().density_fn(0j) == pytest.approx(1.0)


def test_zero_derivative():
    F = hyp.CoveringMap("flat", lambda z: z * z, lambda z: 2 * z, hyp.unit_disk(), False)
    with pytest.raises(ZeroDerivative):
        hyp.pushforward_density(F, 0)


@pytest.mark.parametrize("F", [hyp.cayley_cover(), hyp.koebe_cover(), hyp.strip_cover(),
                               hyp.punctured_disk_cover(), hyp.disk_automorphism(0.3 - 0.2j)],
                         ids=lambda F: F.label)
def test_closed_form_densities_match_covers(F):
    rng = np.random.default_rng(7)
    for _ in range(20):
        z = 0.8 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        w = complex(F.evaluator(np.array([z]))[0])
        assert F.target.density_fn(w) == pytest.approx(hyp.pushforward_density(F, z), rel=1e-8)


def test_distance_density_examples():
    assert hyp.check_distance_density(hyp.unit_disk(), 0).lhs == pytest.approx(1.0)
    r = hyp.check_distance_density(hyp.unit_disk(), 0.5)
    assert r.passed and r.lhs == pytest.approx(2 / 3)
    r = hyp.check_distance_density(hyp.half_plane(), 1)
    assert r.passed and r.lhs == pytest.approx(0.5)


def test_koebe_bound_examples():
    r = hyp.check_koebe_bounds(hyp.identity_cover(), 0)
    assert r.passed and r.lhs == pytest.approx(1) and r.rhs == pytest.approx(1)
    r = hyp.check_koebe_bounds(hyp.koebe_cover(), 0)
    assert r.passed
    assert r.lhs == pytest.approx(0.25) and r.rhs == pytest.approx(1.0)
    r = hyp.check_koebe_bounds(hyp.cayley_cover(), 0)
    assert r.passed and r.lhs == pytest.approx(1) and r.rhs == pytest.approx(2)


def test_punctured_cover_preimage_independence():
    F = hyp.punctured_disk_cover()
    w = 0.3 * cmath.exp(0.7j)
    dens = []
    for k in (0, 1, -2):
        s = cmath.log(w) + 2j * math.pi * k
        z = (s + 1) / (s - 1)
        assert abs(z) < 1
        assert abs(complex(F.evaluator(z)) - w) < 1e-12
        dens.append(hyp.pushforward_density(F, z))
    assert max(dens) - min(dens) < 1e-8 * dens[0]
    assert dens[0] == pytest.approx(hyp.punctured_disk().density_fn(w), rel=1e-8)


@pytest.mark.parametrize("F", [hyp.koebe_cover(), hyp.modular_cover(), hyp.punctured_disk_cover()],
                         ids=lambda F: F.label)
def test_conformal_invariance(F):
    phi = hyp.disk_automorphism(0.2 + 0.1j, rotation=0.4)
    G = hyp.precompose(F, phi)
    for z in (0j, 0.1 + 0.2j, -0.3j):
        zp = complex(phi.evaluator(z))
        assert hyp.pushforward_density(G, z) == pytest.approx(hyp.pushforward_density(F, zp), rel=1e-9)


def test_modular_cover_normalisation():
    F = hyp.modular_cover()
    assert complex(F.evaluator(np.array([0j]))[0]) == pytest.approx(0.5, abs=1e-12)
    r = hyp.check_koebe_bounds(F, 0)
    assert r.passed


@pytest.mark.parametrize("F", [hyp.identity_cover(), hyp.disk_automorphism(0.5), hyp.cayley_cover(),
                               hyp.koebe_cover(), hyp.strip_cover(), hyp.punctured_disk_cover(),
                               hyp.modular_cover(), hyp.modular_cover(2 - 1j, 0.5)],
                         ids=lambda F: F.label)
def test_random_points_distance_density(F):
    rng = np.random.default_rng(11)
    z = 0.9 * np.sqrt(rng.random(50)) * np.exp(2j * np.pi * rng.random(50))
    w = np.asarray(F.evaluator(z), dtype=complex)
    for zi, wi in zip(z, w):
        rec = hyp.check_distance_density(F.target, wi, hyp.pushforward_density(F, zi))
        assert rec.passed, rec
        assert rec.lhs > 0
        assert hyp.check_koebe_bounds(F, zi).passed


def test_sampled_boundary_distance_brackets_truth():
    dist = hyp.sampled_boundary_distance(lambda t: np.exp(1j * t))
    for w in (0j, 0.5, 0.3 - 0.6j):
        lo, hi = dist(w)
        assert lo <= 1 - abs(w) <= hi + 1e-12
        assert hi - lo < 1e-2


def test_rouche_bound_identity_and_koebe():
    assert hyp.rouche_distance_bound(lambda z: z) == pytest.approx(0.999, abs=5e-3)
    assert hyp.rouche_distance_bound(lambda z: z) <= 1
    k = hyp.rouche_distance_bound(lambda z: z / (1 - z) ** 2)
    assert 0.2 < k <= 0.25


def test_domain_invariants():
    with pytest.raises(ValueError):
        hyp.DomainSpec("nonsense", lambda w: (1, 1))
    with pytest.raises(ValueError):
        hyp.DomainSpec("unit_disk", lambda w: (1, 1), omitted_points=(0.0, 2.0), contains_fn=lambda w: abs(w) < 1)
    assert hyp.strip().contains(0j)
    assert not hyp.slit_plane().contains(-1 + 0j)
