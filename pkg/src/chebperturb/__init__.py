"""Privacy-preserving data perturbation via noisy Chebyshev least squares.

A numeric dataset (or stream) is processed window by window: each attribute
is normalized, sorted, approximated by a four-term shifted-Chebyshev least
squares fit whose normal equations carry calibrated Laplace noise, and then
re-synthesized from the noisy model. Released blocks are shuffled whole-row.
"""

from .attacks import AttackReport, AttackStats, evaluate_attacks, known_io_attack, naive_inference, standardize
from .dataset import Dataset
from .errors import (
    CsvFormatError,
    DegenerateWindowError,
    PerturbationError,
    PrivacyFloorError,
    ValidationError,
)
from .io import CsvSchema, read_csv, write_csv
from .laplace import NoiseSpec, sample_laplace
from .noisy_fit import (
    AttributeSeries,
    ChebyshevModel,
    NormalSystem,
    PowerSums,
    build_normal_system,
    power_sums,
    rmse,
    solve,
    synthesize,
)
from .perturbation import (
    PerturbationConfig,
    WindowFrame,
    partition,
    perturb_attribute,
    perturb_dataset,
    perturb_window,
    shuffle_and_release,
    window_extents,
)
from .stream import StreamPerturber
from .utility import UtilityReport, epsilon_sweep, knn_accuracy, spearman_rho, window_sweep

__version__ = "0.1.0"

__all__ = [
    "AttackReport",
    "AttackStats",
    "AttributeSeries",
    "ChebyshevModel",
    "CsvFormatError",
    "CsvSchema",
    "Dataset",
    "DegenerateWindowError",
    "NoiseSpec",
    "NormalSystem",
    "PerturbationConfig",
    "PerturbationError",
    "PowerSums",
    "PrivacyFloorError",
    "StreamPerturber",
    "UtilityReport",
    "ValidationError",
    "WindowFrame",
    "build_normal_system",
    "epsilon_sweep",
    "evaluate_attacks",
    "knn_accuracy",
    "known_io_attack",
    "naive_inference",
    "partition",
    "perturb_attribute",
    "perturb_dataset",
    "perturb_window",
    "power_sums",
    "read_csv",
    "rmse",
    "sample_laplace",
    "shuffle_and_release",
    "solve",
    "spearman_rho",
    "standardize",
    "synthesize",
    "window_extents",
    "window_sweep",
    "write_csv",
]
