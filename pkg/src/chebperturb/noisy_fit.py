"""Assembly and solution of the noise-perturbed 4x4 normal system.

Fitting y ~ a1*phi_1 + a2*phi_2 + a3*phi_3 + a4*phi_4 by least squares
yields normal equations whose coefficients are polynomials in the power
sums S_k = sum(x_i^k). Injecting one Laplace deviate per data point into
the minimization shifts the constant vector B; the coefficient matrix C
stays noise-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chebyshev import design_matrix
from .errors import DegenerateWindowError, ValidationError

# Condition-number cutoff above which a window is treated as degenerate.
COND_LIMIT = 1e12
_RESIDUAL_RTOL = 1e-8


@dataclass(frozen=True)
class AttributeSeries:
    """Equispaced abscissae on [0, 1] paired with sorted, normalized values."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.ndim != 1 or y.ndim != 1 or x.size != y.size:
            raise ValidationError("abscissae and values must be 1-D and equally long")
        if x.size < 4:
            raise ValidationError(f"need at least 4 points to fit 4 coefficients, got {x.size}")
        if abs(x[0]) > 1e-12 or abs(x[-1] - 1.0) > 1e-12 or np.any(np.diff(x) <= 0):
            raise ValidationError("abscissae must increase strictly from 0 to 1")
        if np.any(np.diff(y) < 0):
            raise ValidationError("values must be sorted ascending")
        if y[0] < -1e-9 or y[-1] > 1.0 + 1e-9:
            raise ValidationError("values must be normalized to [0, 1]")

    @property
    def n(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class PowerSums:
    """S_k = sum(x_i^k) for k = 0..6; the building blocks of the system."""

    s0: float
    s1: float
    s2: float
    s3: float
    s4: float
    s5: float
    s6: float


@dataclass(frozen=True)
class NormalSystem:
    """Coefficient matrix C (symmetric 4x4) and constant vector B."""

    c: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class ChebyshevModel:
    """Solved coefficients a1..a4 of the synthesis function on [0, 1]."""

    a: np.ndarray
    epsilon: float | None = None


def power_sums(x) -> PowerSums:
    """Accumulate S_0..S_6 in one sweep over the abscissae."""
    arr = np.asarray(x, dtype=float)
    sums = np.empty(7)
    sums[0] = arr.size
    p = arr.copy()
    sums[1] = p.sum()
    for k in range(2, 7):
        p *= arr
        sums[k] = p.sum()
    return PowerSums(*sums)


def build_normal_system(series: AttributeSeries, noise) -> NormalSystem:
    """Fill C from the power-sum formulas and B from the noisy value sums.

    Each b_i pairs the phi_i-weighted sums of the data with the identically
    weighted sums of the noise, with opposite sign.
    """
    noise = np.asarray(noise, dtype=float)
    if noise.shape != series.y.shape:
        raise ValidationError(
            f"noise length {noise.size} does not match series length {series.n}"
        )
    x, y = series.x, series.y
    s = power_sums(x)
    n, s1, s2, s3, s4, s5, s6 = s.s0, s.s1, s.s2, s.s3, s.s4, s.s5, s.s6

    m11 = n
    m12 = 2 * s1 - n
    m13 = 8 * s2 - 8 * s1 + n
    m14 = 32 * s3 - 48 * s2 + 18 * s1 - n
    m22 = 4 * s2 - 4 * s1 + n
    m23 = 16 * s3 - 24 * s2 + 10 * s1 - n
    m24 = 64 * s4 - 128 * s3 + 84 * s2 - 20 * s1 + n
    m33 = 64 * s4 - 128 * s3 + 80 * s2 - 16 * s1 + n
    m34 = 256 * s5 - 640 * s4 + 560 * s3 - 200 * s2 + 26 * s1 - n
    m44 = 1024 * s6 - 3072 * s5 + 3456 * s4 - 1792 * s3 + 420 * s2 - 36 * s1 + n
    c = np.array(
        [
            [m11, m12, m13, m14],
            [m12, m22, m23, m24],
            [m13, m23, m33, m34],
            [m14, m24, m34, m44],
        ]
    )

    x2 = x * x
    x3 = x2 * x
    sy0, sy1, sy2, sy3 = y.sum(), x @ y, x2 @ y, x3 @ y
    sl0, sl1, sl2, sl3 = noise.sum(), x @ noise, x2 @ noise, x3 @ noise
    b = np.array(
        [
            sy0 - sl0,
            2 * sy1 - sy0 - (2 * sl1 - sl0),
            8 * sy2 - 8 * sy1 + sy0 - (8 * sl2 - 8 * sl1 + sl0),
            32 * sy3 - 48 * sy2 + 18 * sy1 - sy0 - (32 * sl3 - 48 * sl2 + 18 * sl1 - sl0),
        ]
    )
    return NormalSystem(c=c, b=b)


def solve(system: NormalSystem, epsilon: float | None = None) -> ChebyshevModel:
    """Solve C a = B by LU with partial pivoting, guarding conditioning.

    epsilon is carried on the model for bookkeeping; noiseless oracle fits
    pass None.
    """
    c, b = system.c, system.b
    cond = np.linalg.cond(c)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise DegenerateWindowError(
            f"normal system is ill-conditioned (cond={cond:.3e} > {COND_LIMIT:.0e})"
        )
    try:
        a = np.linalg.solve(c, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateWindowError(f"normal system solve failed: {exc}") from exc
    if not np.all(np.isfinite(a)):
        raise DegenerateWindowError("normal system solve produced non-finite coefficients")
    scale = np.max(np.abs(b))
    if scale > 0 and np.max(np.abs(c @ a - b)) > _RESIDUAL_RTOL * scale:
        raise DegenerateWindowError("normal system residual exceeds tolerance")
    return ChebyshevModel(a=a, epsilon=epsilon)


def synthesize(model: ChebyshevModel, x) -> np.ndarray:
    """Evaluate f(x_i) = sum_k a_k * phi_k(x_i) at the given abscissae."""
    return design_matrix(x) @ model.a


def rmse(model: ChebyshevModel, series: AttributeSeries) -> float:
    """Root mean square error of the model against the series values."""
    residual = synthesize(model, series.x) - series.y
    return float(np.sqrt(np.mean(residual * residual)))
