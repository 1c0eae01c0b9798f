"""Seeded Laplace noise with independent per-(window, attribute) substreams."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Domain tags keep the noise, shuffle, and any future substream families
# disjoint even when their indices collide.
_NOISE_DOMAIN = 0
_SHUFFLE_DOMAIN = 1


@dataclass(frozen=True)
class NoiseSpec:
    """Calibration of the Laplace mechanism for data normalized to [0, 1].

    Normalization pins the sensitivity to 1 and the noise is centred at 0,
    so the only free parameter is the privacy budget epsilon.
    """

    epsilon: float
    sensitivity: float = 1.0
    location: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.epsilon) or self.epsilon <= 0:
            raise ValidationError(f"privacy budget epsilon must be > 0, got {self.epsilon}")
        if self.sensitivity != 1.0:
            raise ValidationError("sensitivity is fixed to 1.0 by the [0, 1] normalization")
        if self.location != 0.0:
            raise ValidationError("noise location is fixed to 0.0")

    @property
    def scale(self) -> float:
        """Laplace scale b = sensitivity / epsilon."""
        return self.sensitivity / self.epsilon


def inverse_cdf(u, scale: float):
    """Map u in (-1/2, 1/2) to a Laplace(0, scale) deviate.

    L = -scale * sgn(u) * ln(1 - 2|u|); the median u = 0 maps to 0.
    """
    arr = np.asarray(u, dtype=float)
    inner = 1.0 - 2.0 * np.abs(arr)
    # u == -1/2 sits on the open boundary; nudge it off log(0).
    inner = np.where(inner <= 0.0, np.finfo(float).tiny, inner)
    out = -scale * np.sign(arr) * np.log(inner)
    return float(out) if arr.ndim == 0 else out


def sample_laplace(spec: NoiseSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n i.i.d. Laplace(location=0, scale=spec.scale) samples.

    Inverse-CDF sampling keeps the draw count deterministic per stream,
    which seeded golden tests rely on.
    """
    if n < 1:
        raise ValidationError(f"sample count must be >= 1, got {n}")
    u = rng.random(n) - 0.5
    return inverse_cdf(u, spec.scale)


def fresh_entropy() -> int:
    """An OS-entropy master seed for runs that did not request reproducibility."""
    return int(np.random.SeedSequence().entropy)


def noise_stream(entropy: int, window_index: int, attr_index: int) -> np.random.Generator:
    """The noise substream owned by one (window, attribute) fit."""
    seq = np.random.SeedSequence([entropy, _NOISE_DOMAIN, window_index, attr_index])
    return np.random.default_rng(seq)


def shuffle_stream(entropy: int, release_index: int) -> np.random.Generator:
    """The substream driving the tuple shuffle of one release."""
    seq = np.random.SeedSequence([entropy, _SHUFFLE_DOMAIN, release_index])
    return np.random.default_rng(seq)
