"""Hecke eigenvalues of Delta twisted by e(alpha sqrt n) at prime powers."""

from .analysis import FitResult, estimate_Z, fit_exponent, read_series_csv, write_series_csv
from .coeffs import LambdaTable, TauTable, build_tau_table, hecke_product, normalize
from .sieve import SieveTables, build_sieve, divisor_power_sum
from .twisted import SumSeries, build_series, diagnostic_sums, twisted_sum
from .vaughan import VaughanParams, component_sums, lambda_pieces, vaughan_classic
from .verify import RunConfig, run_verify

__version__ = "0.1.0"
