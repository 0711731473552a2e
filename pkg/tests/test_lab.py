import math

import numpy as np
import pytest

from bohrlab.errors import DegenerateOmittedPoints, ZeroDetected
from bohrlab.lab import theorems as T
from bohrlab.lab.corpus import choose_omitted
from bohrlab.lab.factorization import h_factorize, perturbed, trace_theorem21_proof
from bohrlab.series import bohr_majorant, series

E_PI = math.exp(-math.pi)


@pytest.fixture(scope="module")
def corpus():
    return {e.name: e for e in T.corpus(64)}


def test_corpus_contents(corpus):
    assert len(corpus) >= 10
    assert corpus["koebe"].d == 0.25
    assert corpus["identity"].d == 1
    assert corpus["strip"].d == pytest.approx(math.pi / 2)
    assert sum(n.startswith("automorphism") for n in corpus) == 3
    assert sum(n.startswith("modular-J") for n in corpus) == 2
    for e in corpus.values():
        assert e.d_low <= e.d_high + 1e-12
        assert e.a != e.b


def test_corpus_series_match_evaluators(corpus):
    z = 0.2 * np.exp(2j * np.pi * np.arange(12) / 12)
    for e in corpus.values():
        np.testing.assert_allclose(e.series(z), e.evaluator(z), atol=1e-9, err_msg=e.name)


def test_choose_omitted_rule():
    assert choose_omitted(0j, (-1, 1)) == (1, -1)         # tie: smaller argument first
    assert choose_omitted(0.5, (0, 1)) == (0, 1)           # tie: arguments 0 and 0, listing order
    assert choose_omitted(0.1, (1, -0.2)) == (-0.2, 1)


def test_h_factorize_identity():
    f = series([0, 1])
    fact = h_factorize(f, 1, -1)
    np.testing.assert_allclose(fact.c[:3], [0, 0.5, -0.5], atol=1e-15)
    np.testing.assert_allclose(fact.h1.coeffs, fact.c * E_PI ** np.arange(fact.c.size), atol=1e-12)


def test_h_factorize_koebe(corpus):
    e = corpus["koebe"]
    fact = h_factorize(e.series, e.a, e.b, e.evaluator)
    assert fact.c[1] == pytest.approx(-1 / 3, abs=1e-12)
    a0, a = e.f0, e.a
    assert fact.c[1] == pytest.approx((a0 - a) / (e.b - a), abs=1e-12)
    np.testing.assert_allclose(fact.c[2:], e.series.coeffs[1:] / (e.b - a), atol=1e-12)
    # modulus agrees with the stated form; the sign follows h's definition
    assert abs(fact.h1_prime_at_0) == pytest.approx(abs((a0 - a) / (a - e.b)) * E_PI, abs=1e-12)


def test_h_factorize_errors():
    with pytest.raises(DegenerateOmittedPoints):
        h_factorize(series([0, 1]), 1, 1)
    with pytest.raises(ZeroDetected):
        h_factorize(series([0, 1]), 0.5, -1, evaluator=lambda z: z)


@pytest.mark.parametrize("name,lhs,ratio", [
    ("koebe", E_PI / (1 - E_PI) ** 2, 0.1888),
    ("identity", E_PI, None),
    ("strip", math.log((1 + E_PI) / (1 - E_PI)), 0.0550),
])
def test_theorem21_examples(corpus, name, lhs, ratio):
    e = corpus[name]
    rec = T.verify_theorem21(e.series, e.d, name)
    assert rec.passed
    assert rec.lhs == pytest.approx(lhs, abs=1e-9)
    assert rec.rhs == 2 * e.d
    if ratio is not None:
        assert rec.metadata["ratio"] == pytest.approx(ratio, abs=1e-3)


def test_theorem21_whole_corpus(corpus):
    for e in corpus.values():
        assert T.verify_theorem21(e.series, e.d, e.name).passed, e.name


def test_proof_trace_records(corpus):
    e = corpus["identity"]
    fact = h_factorize(e.series, e.a, e.b, e.evaluator)
    recs = {r.name.split("[")[0]: r for r in trace_theorem21_proof(fact, e.series, e.name)}
    assert set(recs) == {"proof:f1-via-h", "proof:coef-vs-modular", "proof:h1-majorant",
                         "proof:zf-majorant", "proof:f1-via-ratio", "proof:ratio-at-most-one"}
    for key in ("proof:f1-via-h", "proof:coef-vs-modular", "proof:f1-via-ratio", "proof:ratio-at-most-one"):
        assert recs[key].passed, key
    # the chain closes with delta in place of delta1
    assert recs["proof:h1-majorant"].metadata["passes_with_delta"]


def test_proof_trace_self_test(corpus):
    e = corpus["koebe"]
    fact = h_factorize(e.series, e.a, e.b, e.evaluator)
    bad = trace_theorem21_proof(perturbed(fact), e.series, "bad")
    assert any(not r.passed for r in bad)


def test_classical_examples(corpus):
    rec = T.verify_classical_bohr(corpus["automorphism(0.5+0j)"].series)
    assert rec.passed and rec.lhs == pytest.approx(0.8, abs=1e-12)
    assert T.verify_classical_bohr(series([0, 1])).lhs == pytest.approx(1 / 3)
    assert T.verify_classical_bohr(series([0.99])).lhs == pytest.approx(0.99)
    assert all(r.passed for r in T.suite_classical(64))


def test_von_neumann_examples(corpus):
    f = series([0, 0.9])
    rec = T.verify_von_neumann(f, 0.9, T.TEST_POLYNOMIALS["w"])
    assert rec.passed and rec.lhs == pytest.approx(0.9 * E_PI / 3, rel=1e-12)
    rec = T.verify_von_neumann(f, 0.9, T.TEST_POLYNOMIALS["1"])
    assert rec.lhs == pytest.approx(1) and rec.rhs == pytest.approx(1)
    e = corpus["automorphism(0.5+0j)"]
    rec = T.verify_von_neumann(e.series, e.d, T.TEST_POLYNOMIALS["w^2-w"])
    assert rec.passed and rec.margin > 0
    assert T.sup_norm(T.TEST_POLYNOMIALS["w^2-w"]) == pytest.approx(2, abs=1e-9)


def test_harmonic_pairs():
    pairs = T.harmonic_pairs(64)
    assert len(pairs) == 3
    for label, pair, d in pairs:
        assert pair.mu.coeffs[0] == 0
        for rec in T.verify_harmonic(pair, d, label):
            assert rec.passed, rec
    zero = pairs[0][1]
    assert not np.any(zero.g_series.coeffs)


def test_harmonic_koebe_termwise():
    _, pair, _ = T.harmonic_pairs(64)[1]
    # g' = z k'(z) = sum n^2 z^n, so g_{n+1} = n^2/(n+1)
    n = np.arange(1, 20)
    np.testing.assert_allclose(pair.g_series.coeffs[n + 1], n ** 2 / (n + 1), rtol=1e-12)


def test_radius_scan():
    for name, (fam, ds) in T.radius_families(64).items():
        assert T.bohr_radius_scan(fam, ds) >= E_PI, name
    assert T.bohr_radius_scan([series([0, 1])], [1.0]) > 0.9


def test_majorant_at_zero_radius():
    assert bohr_majorant(series([2, 1]), 0.0).value == 2
