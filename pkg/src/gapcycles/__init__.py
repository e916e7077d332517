"""Exact populations of gaps in the cycles G(p#) of Eratosthenes sieve."""

from __future__ import annotations

from .cycle import (
    DrivingTermCensus,
    GapCycle,
    census_driving_terms,
    census_of_stage,
    enumerate_gap_cycle,
    fuse_cycle,
    fusion_chain,
    gap_cycle,
)
from .dynamics import (
    closed_form_w1,
    eigen_basis,
    lambda_bounds,
    lambda_exact,
    lambda_invert,
    poly_eval,
    poly_model,
    propagate_range,
    transfer_step,
)
from .errors import CapacityError, TruncationWarning
from .primesieve import first_n_primes, observed_class_ratios, pair_census
from .residue import class_mean_asymptotic, class_ratios, digit_pair_classes, w_infinity

__version__ = "0.1.0"
