"""Adaptive threshold decoding and the value function F(T).

F(T) is the expected gross trading value of a firm that acts first after
``T`` symbols, decoding with the threshold that is optimal for that ``T``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._search import grid_then_golden
from .channel import Mode, error_probs_raw, gammas, q_function_array
from .errors import DomainError, RangeError

H_GRID = np.linspace(-0.999, 0.999, 1999)
H_EDGE = 1.0 - 1e-12
H_TOL = 1e-10
CLOSED_FORM_WINDOW = 1e-6


@dataclass(frozen=True)
class GameParams:
    """Economic constants of one arbitrage opportunity.

    p1/p2 are the BUY/SELL priors, v1/v2 the trade values, c the transaction
    cost, d the channel cost per unit SNR and t0 the efficient-market horizon.
    """

    p1: float
    v1: float
    v2: float
    c: float
    d: float
    t0: int
    p2: float | None = None

    def __post_init__(self):
        p2 = 1.0 - self.p1 if self.p2 is None else self.p2
        object.__setattr__(self, "p2", p2)
        if not (0.0 < self.p1 < 1.0 and 0.0 < p2 < 1.0):
            raise DomainError(f"priors must lie in (0, 1), got p1={self.p1}, p2={p2}")
        if abs(self.p1 + p2 - 1.0) > 1e-12:
            raise DomainError(f"priors must sum to 1, got {self.p1} + {p2}")
        if not (self.v1 > 0 and self.v2 > 0):
            raise DomainError("trade values v1, v2 must be > 0")
        if self.c < 0 or self.d < 0:
            raise DomainError("costs c, d must be >= 0")
        if int(self.t0) != self.t0 or self.t0 < 1:
            raise DomainError(f"t0 must be an integer >= 1, got {self.t0}")
        object.__setattr__(self, "t0", int(self.t0))

    @property
    def w1(self) -> float:
        return self.p1 * self.v1

    @property
    def w2(self) -> float:
        return self.p2 * self.v2

    @property
    def f_sup(self) -> float:
        """Least upper bound of F: every decode correct."""
        return self.w1 + self.w2


class ThresholdMethod(str, enum.Enum):
    CLOSED_FORM = "CLOSED_FORM"
    NUMERIC_FALLBACK = "NUMERIC_FALLBACK"


@dataclass(frozen=True)
class ThresholdResult:
    h_star: float
    gamma1_star: float
    gamma2_star: float
    method: ThresholdMethod
    objective: float


def threshold_objective(h: float, T: float, snr: float, params: GameParams, mode: Mode) -> float:
    """Expected gross value P1V1(1-2pe1) + P2V2(1-2pe2) of acting first with threshold h."""
    pe1, pe2 = error_probs_raw(T, snr, h, mode)
    return params.w1 * (1.0 - 2.0 * pe1) + params.w2 * (1.0 - 2.0 * pe2)


def _objective_vector(h: np.ndarray, T: float, snr: float, params: GameParams, mode: Mode) -> np.ndarray:
    x = T * snr
    if mode is Mode.EXACT:
        pe1 = q_function_array(np.sqrt(x) * np.abs(1.0 - h))
        pe2 = q_function_array(np.sqrt(x) * np.abs(1.0 + h))
    else:
        pe1 = np.minimum(1.0, np.exp(-x * (1.0 - h) ** 2 / 2.0))
        pe2 = np.minimum(1.0, np.exp(-x * (1.0 + h) ** 2 / 2.0))
    return params.w1 * (1.0 - 2.0 * pe1) + params.w2 * (1.0 - 2.0 * pe2)


def optimal_threshold_closed_form(T: int, snr: float, params: GameParams) -> float | None:
    """The approximate closed-form threshold, or None outside its valid region.

    Valid only when the denominator is positive and the result lies in (-1, 1).
    """
    if T < 1 or snr <= 0:
        raise DomainError("closed-form threshold needs T >= 1 and snr > 0")
    num = params.w1 - params.w2
    den = params.w1 + (1.0 - 2.0 * T * snr) * params.w2
    if den <= 0:
        return None
    h = num / den
    if not -1.0 < h < 1.0:
        return None
    return h


@lru_cache(maxsize=1 << 17)
def _threshold(T: float, snr: float, params: GameParams, mode: Mode) -> ThresholdResult:
    h_num, obj_num = grid_then_golden(
        lambda h: threshold_objective(h, T, snr, params, mode),
        lambda hs: _objective_vector(hs, T, snr, params, mode),
        H_GRID,
        -H_EDGE,
        H_EDGE,
        H_TOL,
    )
    method = ThresholdMethod.NUMERIC_FALLBACK
    h_star, obj = h_num, obj_num
    if T >= 1 and T == int(T):
        h_cf = optimal_threshold_closed_form(int(T), snr, params)
        if h_cf is not None:
            obj_cf = threshold_objective(h_cf, T, snr, params, mode)
            if obj_cf >= obj_num - CLOSED_FORM_WINDOW:
                method = ThresholdMethod.CLOSED_FORM
                h_star, obj = h_cf, obj_cf
    g1, g2 = gammas(h_star)
    return ThresholdResult(h_star, g1, g2, method, obj)


def optimal_threshold(T: int, snr: float, params: GameParams, mode: Mode = Mode.EXACT) -> ThresholdResult:
    """Threshold maximising the expected gross value after ``T`` symbols.

    A grid pass over (-1, 1) at spacing 1e-3 brackets the maximum, golden
    section refines it to 1e-10. The closed form is reported instead when it
    is in-domain and within 1e-6 of the numeric optimum.
    """
    if T < 1:
        raise DomainError(f"optimal_threshold needs T >= 1, got {T}")
    if not snr > 0:
        raise DomainError(f"snr must be > 0, got {snr}")
    return _threshold(float(T), float(snr), params, Mode(mode))


def f_value_real(T: float, snr: float, params: GameParams, mode: Mode = Mode.EXACT) -> float:
    """F extended to real T >= 0 (the threshold is re-optimised at every T)."""
    if T < 0:
        raise DomainError(f"T must be >= 0, got {T}")
    mode = Mode(mode)
    if T == 0:
        # threshold choice is degenerate with no observations; use h = 0
        return threshold_objective(0.0, 0.0, snr, params, mode)
    return _threshold(float(T), float(snr), params, mode).objective


def f_value(T: int, snr: float, params: GameParams, mode: Mode = Mode.EXACT) -> float:
    """Expected gross value of acting first after ``T`` symbols, optimally decoded."""
    if int(T) != T:
        raise DomainError(f"T must be an integer, got {T}")
    return f_value_real(int(T), snr, params, mode)


def f_inverse(y: float, snr: float, params: GameParams, mode: Mode = Mode.EXACT, tol: float = 1e-9) -> float:
    """Real T with F(T) = y, by bisection on the continuous extension of F."""
    lo_val = f_value_real(0, snr, params, mode)
    if not lo_val < y < params.f_sup:
        raise RangeError(f"y={y} outside (F(0)={lo_val}, sup F={params.f_sup})")
    lo, hi = 0.0, float(params.t0)
    while f_value_real(hi, snr, params, mode) <= y:
        lo, hi = hi, 2.0 * hi
        if hi > 2.0**50:
            raise RangeError(f"y={y} is not reached by F within floating-point resolution")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f_value_real(mid, snr, params, mode) <= y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def crossing_time(y: float, snr: float, params: GameParams, mode: Mode = Mode.EXACT, t_limit: int | None = None) -> int | None:
    """Smallest integer T >= 1 with F(T-1) <= y < F(T), scanning up to ``t_limit`` (default t0)."""
    t_limit = params.t0 if t_limit is None else t_limit
    prev = f_value(0, snr, params, mode)
    for T in range(1, t_limit + 1):
        cur = f_value(T, snr, params, mode)
        if prev <= y < cur:
            return T
        prev = cur
    return None


def clear_cache() -> None:
    _threshold.cache_clear()
