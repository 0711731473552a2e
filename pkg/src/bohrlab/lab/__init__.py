"""Corpus, factorisation and the verification suites."""

from .corpus import CorpusEntry, build_corpus, choose_omitted
from .factorization import HFactorization, h_factorize, perturbed, trace_theorem21_proof
from .theorems import (SUITES, HarmonicPair, bohr_radius_scan, verify_classical_bohr, verify_harmonic,
                       verify_theorem21, verify_von_neumann)
