"""Bandwidth-tuned quantum kernels on a statevector simulator.

Submodules: ``statevector`` (simulation), ``circuits`` (encodings),
``kernels`` (Gram assembly), ``linalg`` and ``metrics`` (spectral
diagnostics), ``analytic`` (closed-form separable-RX model), ``svm``
(SMO classifier), ``data`` (loading and preprocessing) and ``harness``
(sweeps and CLI).
"""

from .analytic import AnalyticParams, monte_carlo_check, var_uniform
from .circuits import CircuitSpec, Family, build_program, encode_states
from .data import Dataset, load_csv, preprocess
from .errors import CapacityError, ParseError, QKError, RegularizationError, SchemaError, ValidationError
from .kernels import GramMatrix, KernelKind, KernelSpec, cross_gram, gram
from .metrics import geometric_difference, metric_report
from .svm import roc_auc, svm_fit

__version__ = "0.1.0"

__all__ = [
    "AnalyticParams", "CapacityError", "CircuitSpec", "Dataset", "Family", "GramMatrix", "KernelKind",
    "KernelSpec", "ParseError", "QKError", "RegularizationError", "SchemaError", "ValidationError",
    "build_program", "cross_gram", "encode_states", "geometric_difference", "gram", "load_csv",
    "metric_report", "monte_carlo_check", "preprocess", "roc_auc", "svm_fit", "var_uniform",
]
