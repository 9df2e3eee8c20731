"""
Kaplan-Yorke map in exact residue arithmetic.

The doubling map ``x -> 2x mod 1`` collapses to 0 within ~53 steps in binary
floating point, so the orbit is carried as integers ``a_n`` modulo a prime
``p`` and ``x_n = a_n / p``. The second component is the damped kick
recurrence ``y_{n+1} = alpha * y_n + cos(4 pi x_n)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateOrbitError, InsufficientDataError, ValidationError
from .sieve import is_prime
from .spectral import OVERLAP, SEGMENT_LEN, PowerSpectrum, welch_spectrum

# 2 is a primitive root of 2**31 + 11, so doubling visits all p - 1 residues.
# The Mersenne prime 2**31 - 1 is unusable: 2**31 = 1 (mod p), a 31-cycle.
DEFAULT_MODULUS = 2_147_483_659


@dataclass(frozen=True)
class KYParams:
    """Map configuration. ``alpha = exp(-gamma * tau)`` is the per-kick damping."""

    alpha: float = 0.2
    modulus: int = DEFAULT_MODULUS
    seed: int = 1
    steps: int = 2**18
    burn_in: int = 1000
    y0: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValidationError(f"alpha must be in [0, 1), got {self.alpha}")
        if self.steps < 1 or self.burn_in < 0:
            raise ValidationError("steps must be positive and burn_in nonnegative")
        if not is_prime(self.modulus):
            raise ValidationError(f"modulus {self.modulus} is not prime")
        if self.seed % self.modulus == 0:
            raise DegenerateOrbitError(
                f"seed {self.seed} is 0 mod {self.modulus}, the fixed point of the doubling map"
            )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KYSeries:
    """
    Orbit after burn-in.

    ``residues[k]`` is ``a_n``, ``x[k] = a_n / p`` and ``y[k]`` is the state
    after the kick from ``x[k]``. Sample ``k`` corresponds to ``n = burn_in + k``.
    """

    residues: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    params: KYParams

    def __len__(self) -> int:
        return len(self.y)


def iterate_ky(params: KYParams) -> KYSeries:
    p, alpha = params.modulus, params.alpha
    total = params.burn_in + params.steps
    residues = np.empty(total, dtype=np.int64)
    ys = np.empty(total)
    a = params.seed % p
    y = float(params.y0)
    four_pi = 4.0 * math.pi
    for n in range(total):
        residues[n] = a
        y = alpha * y + math.cos(four_pi * (a / p))
        ys[n] = y
        a = (2 * a) % p
    b = params.burn_in
    residues, ys = residues[b:], ys[b:]
    x = residues / p
    for arr in (residues, x, ys):
        arr.flags.writeable = False
    return KYSeries(residues, x, ys, params)


def ky_spectrum(
    series: KYSeries, segment_len: int = SEGMENT_LEN, overlap: float = OVERLAP
) -> PowerSpectrum:
    """Welch spectrum of the ``y`` component."""
    if len(series) < 512:
        raise InsufficientDataError(f"KY spectrum needs at least 512 samples, got {len(series)}")
    return welch_spectrum(series.y, segment_len=segment_len, overlap=overlap)

