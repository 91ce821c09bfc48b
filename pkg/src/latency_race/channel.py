"""BPSK repetition signalling over an AWGN channel.

A firm's agent sends ``+a`` (BUY) or ``-a`` (SELL) for ``T`` symbol periods.
The receiver averages the ``T`` samples and decides BUY iff the mean is at
least ``h * a``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .errors import DomainError

Q_CUTOFF = 38.0
_SQRT2 = math.sqrt(2.0)


class Mode(str, enum.Enum):
    EXACT = "EXACT"
    APPROX = "APPROX"


class Message(str, enum.Enum):
    BUY = "BUY"
    SELL = "SELL"


@dataclass(frozen=True)
class ChannelSpec:
    """One firm's physical channel.

    ``snr`` is S = P/N0; the signal amplitude is derived as sqrt(S * N0).
    """

    snr: float
    snr_max: float
    noise_power: float = 1.0
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        for name in ("snr", "snr_max", "noise_power"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
        if self.snr > self.snr_max:
            raise DomainError(f"snr {self.snr} exceeds snr_max {self.snr_max}")
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def amplitude(self) -> float:
        return math.sqrt(self.snr * self.noise_power)

    def with_snr(self, snr: float) -> "ChannelSpec":
        return ChannelSpec(snr, self.snr_max, self.noise_power, self.mode)


class ErrorPair(NamedTuple):
    pe1: float  # P(decide SELL | BUY)
    pe2: float  # P(decide BUY | SELL)


def q_function(x: float) -> float:
    """Standard normal tail probability P(Z > x)."""
    if not math.isfinite(x):
        raise DomainError(f"q_function needs a finite argument, got {x!r}")
    if x > Q_CUTOFF:
        return 0.0
    if x < -Q_CUTOFF:
        return 1.0
    return 0.5 * math.erfc(x / _SQRT2)


def q_function_array(x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`q_function` (same cutoffs)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("q_function needs finite arguments")
    out = 0.5 * special.erfc(x / _SQRT2)
    out = np.where(x > Q_CUTOFF, 0.0, out)
    return np.where(x < -Q_CUTOFF, 1.0, out)


def gammas(h: float) -> tuple[float, float]:
    """Error exponents ((1-h)^2/2, (1+h)^2/2) for threshold h."""
    return (1.0 - h) ** 2 / 2.0, (1.0 + h) ** 2 / 2.0


def error_probs_raw(T: float, snr: float, h: float, mode: Mode) -> ErrorPair:
    """Error probabilities for real T >= 0; no validation. Used by the optimisers."""
    g1, g2 = gammas(h)
    x = T * snr
    if mode is Mode.EXACT:
        return ErrorPair(q_function(math.sqrt(2.0 * x * g1)), q_function(math.sqrt(2.0 * x * g2)))
    return ErrorPair(min(1.0, math.exp(-x * g1)), min(1.0, math.exp(-x * g2)))


def error_probabilities(T: int, spec: ChannelSpec, h: float) -> ErrorPair:
    """Type-1 and type-2 decoding error probabilities after ``T`` symbols.

    EXACT mode evaluates Q(sqrt(2 T S gamma_i)); APPROX mode uses
    exp(-T S gamma_i) truncated at 1.
    """
    if T < 0:
        raise DomainError(f"T must be >= 0, got {T}")
    return error_probs_raw(T, spec.snr, h, spec.mode)


def _sign(message: Message) -> float:
    return 1.0 if Message(message) is Message.BUY else -1.0


def sample_received_mean(message: Message, T: int, spec: ChannelSpec, rng: np.random.Generator) -> float:
    """Draw ``T`` received symbols y_i ~ N(+-a, N0) and return their mean."""
    if T < 1:
        raise DomainError(f"T must be >= 1 to form a sample mean, got {T}")
    y = _sign(message) * spec.amplitude + math.sqrt(spec.noise_power) * rng.standard_normal(T)
    return float(y.mean())


def sample_received_means(
    message: Message, T: int, spec: ChannelSpec, n: int, rng: np.random.Generator
) -> np.ndarray:
    """``n`` independent sample means, each from ``T`` explicitly drawn symbols."""
    if T < 1:
        raise DomainError(f"T must be >= 1 to form a sample mean, got {T}")
    noise = rng.standard_normal((n, T)).mean(axis=1)
    return _sign(message) * spec.amplitude + math.sqrt(spec.noise_power) * noise
