"""
Small-scale fading samplers (Rayleigh access links, Rician backhaul links)
"""

import logging
from dataclasses import dataclass
from typing import Literal, Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Size = Optional[Union[int, Tuple[int, ...]]]


@dataclass(frozen=True)
class FadingSample:
    """Complex fading coefficients with the distribution that produced them"""

    coefficients: np.ndarray
    distribution: Literal["rayleigh", "rician", "fixed"]
    scatter_std: float = 0.0     # per-component std (Rayleigh scale / Rician sigma_f)
    los_amplitude: float = 0.0   # Rician nu

    @property
    def k_factor(self) -> float:
        if self.scatter_std == 0.0:
            return float("inf") if self.los_amplitude > 0 else 0.0
        return self.los_amplitude ** 2 / (2.0 * self.scatter_std ** 2)

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    @classmethod
    def fixed(cls, coefficients) -> "FadingSample":
        """Deterministic coefficients, e.g. unit fading for link-budget checks"""
        return cls(coefficients=np.asarray(coefficients, dtype=complex), distribution="fixed")


def sample_rayleigh(scale: float, rng: np.random.Generator, size: Size = None) -> FadingSample:
    """
    Draw Rayleigh-magnitude complex coefficients

    Args:
        scale: Per-component standard deviation (E|h|^2 = 2*scale^2)
        rng: Random generator
        size: Output shape; None for a single coefficient

    Returns:
        FadingSample with independent N(0, scale^2) real and imaginary parts
    """
    if not scale > 0:
        raise ValueError(f"Rayleigh scale must be positive, got {scale}")
    real = rng.normal(0.0, scale, size)
    imag = rng.normal(0.0, scale, size)
    return FadingSample(coefficients=np.asarray(real + 1j * imag), distribution="rayleigh", scatter_std=scale)


def sample_rician(k_factor: float, mean_power: float, rng: np.random.Generator, size: Size = None) -> FadingSample:
    """
    Draw Rician-magnitude complex coefficients

    Args:
        k_factor: K_s = nu^2 / (2 sigma_f^2), LOS to scattered power ratio
        mean_power: E|g|^2 = nu^2 + 2 sigma_f^2
        rng: Random generator
        size: Output shape; None for a single coefficient

    Returns:
        FadingSample whose magnitude is Rician with the requested K-factor
    """
    if k_factor < 0:
        raise ValueError(f"Rician K-factor must be non-negative, got {k_factor}")
    if not mean_power > 0:
        raise ValueError(f"mean power must be positive, got {mean_power}")
    sigma = np.sqrt(mean_power / (2.0 * (k_factor + 1.0)))
    nu = np.sqrt(k_factor * mean_power / (k_factor + 1.0))
    real = rng.normal(0.0, sigma, size)
    imag = rng.normal(0.0, sigma, size)
    return FadingSample(
        coefficients=np.asarray(nu + real + 1j * imag),
        distribution="rician",
        scatter_std=float(sigma),
        los_amplitude=float(nu),
    )
