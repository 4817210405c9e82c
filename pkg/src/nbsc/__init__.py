"""Threshold analysis of non-binary spatially-coupled LDPC ensembles.

BEC thresholds come from protograph density evolution on subspace-dimension
messages, AWGN thresholds from protograph EXIT analysis, each under the
flooding or the windowed schedule.
"""

from .protograph import BaseMatrix, ScEnsemble, catalog, couple, design_rate, spread_edges, window_at
from .subspace_kernels import build_kernels, gaussian_binomial
from .tanner import DecodeTarget, EvalResult
from .de_bec import evaluate_fs, evaluate_wd
from .exit_awgn import evaluate_fs_awgn, evaluate_wd_awgn
from .threshold_search import SearchConfig, ThresholdResult, awgn_threshold, bec_threshold, find_w_star, sweep

__all__ = [
    "BaseMatrix", "ScEnsemble", "catalog", "couple", "design_rate", "spread_edges", "window_at",
    "build_kernels", "gaussian_binomial", "DecodeTarget", "EvalResult",
    "evaluate_fs", "evaluate_wd", "evaluate_fs_awgn", "evaluate_wd_awgn",
    "SearchConfig", "ThresholdResult", "awgn_threshold", "bec_threshold", "find_w_star", "sweep",
]
__version__ = "0.1.0"
