"""Certified numerics for Bohr-type inequalities on hyperbolic domains."""

from .errors import *  # noqa: F401,F403
from .records import VerificationRecord, VerificationReport, check
from .series import (BohrValue, TruncatedSeries, add, bohr_majorant, compose, differentiate,
                     extract_coefficients, integrate, mul, series, sub)

__version__ = "0.1.0"
