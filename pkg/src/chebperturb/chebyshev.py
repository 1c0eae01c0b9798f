"""Chebyshev polynomials of the first kind and the shifted basis on [0, 1].

The synthesis model uses the first four shifted polynomials
``phi_k(x) = T_{k-1}(2x - 1)``, which remap the natural Chebyshev domain
[-1, 1] onto the unit interval.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

BASIS_SIZE = 4


def chebyshev_t(n: int, x):
    """Evaluate T_n(x) via the recurrence T_{n+1} = 2x*T_n - T_{n-1}.

    Accepts scalars or arrays; T_0 = 1 and T_1 = x seed the recurrence.
    """
    if n < 0:
        raise ValidationError(f"polynomial degree must be non-negative, got {n}")
    arr = np.asarray(x, dtype=float)
    t_prev = np.ones_like(arr)
    if n == 0:
        return float(t_prev) if arr.ndim == 0 else t_prev
    t_cur = arr.copy()
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, 2.0 * arr * t_cur - t_prev
    return float(t_cur) if arr.ndim == 0 else t_cur


def phi(k: int, x):
    """Evaluate the shifted basis function phi_k on [0, 1] from its closed form.

    phi_1 = 1, phi_2 = 2x-1, phi_3 = 8x^2-8x+1, phi_4 = 32x^3-48x^2+18x-1.
    The closed forms are cheaper than the recurrence in the synthesis loop.
    """
    arr = np.asarray(x, dtype=float)
    if k == 1:
        out = np.ones_like(arr)
    elif k == 2:
        out = 2.0 * arr - 1.0
    elif k == 3:
        out = (8.0 * arr - 8.0) * arr + 1.0
    elif k == 4:
        out = ((32.0 * arr - 48.0) * arr + 18.0) * arr - 1.0
    else:
        raise ValidationError(f"basis index must be in 1..{BASIS_SIZE}, got {k}")
    return float(out) if arr.ndim == 0 else out


def design_matrix(x) -> np.ndarray:
    """Stack phi_1..phi_4 evaluated at the abscissae into an (n, 4) matrix."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return np.column_stack([phi(k, arr) for k in range(1, BASIS_SIZE + 1)])
