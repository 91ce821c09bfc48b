"""Monte Carlo validation of error rates and race payoffs.

Trials are processed in fixed-size chunks, each with its own child stream
spawned from the caller's generator, so results depend only on the seed and
``n`` and never on how chunks are scheduled. Chunk statistics merge with
Chan's pairwise update, which is associative up to rounding.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .channel import ChannelSpec, Message, Mode, sample_received_means
from .decoder import GameParams, optimal_threshold
from .equilibrium import StrategyPair
from .errors import DomainError
from .payoff import FirmConfig, Role, role_of
from .rng import spawn

CHUNK_TRIALS = 1 << 16
_MAX_CHUNK_SYMBOLS = 1 << 22
_ROLE_RANK = {Role.FIRST: 0, Role.TIE: 1, Role.SECOND: 2}


def _chunks(n: int, T: int) -> list[int]:
    size = max(1, min(CHUNK_TRIALS, _MAX_CHUNK_SYMBOLS // max(T, 1)))
    full, rest = divmod(n, size)
    return [size] * full + ([rest] if rest else [])


def _decide_buy(means: np.ndarray, h: float, spec: ChannelSpec) -> np.ndarray:
    return means >= h * spec.amplitude


def monte_carlo_error_rate(
    T: int, spec: ChannelSpec, h: float, message: Message, n: int, rng: np.random.Generator
) -> float:
    """Fraction of ``n`` trials in which the threshold rule misdecodes ``message``."""
    if n < 1 or T < 1:
        raise DomainError("need n >= 1 and T >= 1")
    message = Message(message)
    sizes = _chunks(n, T)
    errors = 0
    for size, child in zip(sizes, spawn(rng, len(sizes))):
        buy = _decide_buy(sample_received_means(message, T, spec, size, child), h, spec)
        errors += int(np.count_nonzero(buy if message is Message.SELL else ~buy))
    return errors / n


@dataclass
class _Moments:
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        mean = float(np.mean(x))
        return cls(len(x), mean, float(np.sum((x - mean) ** 2)))

    def merge(self, other: "_Moments") -> "_Moments":
        if self.n == 0:
            return other
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        return _Moments(n, mean, self.m2 + other.m2 + delta * delta * self.n * other.n / n)

    @property
    def standard_error(self) -> float | None:
        if self.n < 2:
            return None
        return math.sqrt(self.m2 / (self.n - 1) / self.n)


@dataclass
class SimReport:
    n_trials: int
    payoff_a: float
    payoff_a_se: float | None
    payoff_b: float
    payoff_b_se: float | None
    win_a: float
    win_b: float
    tie: float
    n_buy: int
    pe1_a: float | None
    pe2_a: float | None
    pe1_b: float | None
    pe2_b: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def _trial_payoffs(
    role: Role, correct: np.ndarray, value: np.ndarray, params: GameParams, firm: FirmConfig
) -> np.ndarray:
    channel_cost = params.d * firm.snr
    if role is Role.SECOND:
        return np.full(len(correct), -channel_cost)
    signed = np.where(correct, value, -value)
    if role is Role.TIE:
        signed = signed / 2.0
    return signed - params.c - channel_cost


def monte_carlo_game(
    strategies: StrategyPair,
    config_a: FirmConfig,
    config_b: FirmConfig,
    params: GameParams,
    n: int,
    rng: np.random.Generator,
    mode: Mode | None = None,
) -> SimReport:
    """Simulate ``n`` arbitrage events with both firms playing ``strategies``.

    Each trial draws the message from the priors, gives each firm an
    independent noisy copy, decodes at that firm's decision time with its
    optimal threshold (a fair coin at T = 0) and scores the race: the first
    actor earns +V or -V, a tie halves that, the later firm earns nothing.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    t_a, t_b = StrategyPair(*strategies)
    firms = ((config_a, t_a, t_b), (config_b, t_b, t_a))
    roles, thresholds = [], []
    for firm, own, other in firms:
        md = firm.channel.mode if mode is None else Mode(mode)
        roles.append(role_of(own, other, params.t0))
        thresholds.append(optimal_threshold(own, firm.snr, params, md).h_star if own >= 1 else None)

    sizes = _chunks(n, max(t_a, t_b, 1))
    moments = [_Moments(), _Moments()]
    n_buy = 0
    err1 = [0, 0]
    err2 = [0, 0]
    for size, child in zip(sizes, spawn(rng, len(sizes))):
        is_buy = child.random(size) < params.p1
        k_buy = int(np.count_nonzero(is_buy))
        n_buy += k_buy
        value = np.where(is_buy, params.v1, params.v2)
        for i, (firm, own, _) in enumerate(firms):
            if own == 0:
                decide_buy = child.random(size) < 0.5
            else:
                noise = child.standard_normal((size, own)).mean(axis=1)
                signs = np.where(is_buy, 1.0, -1.0)
                means = signs * firm.channel.amplitude + math.sqrt(firm.channel.noise_power) * noise
                decide_buy = _decide_buy(means, thresholds[i], firm.channel)
            correct = decide_buy == is_buy
            err1[i] += int(np.count_nonzero(is_buy & ~correct))
            err2[i] += int(np.count_nonzero(~is_buy & ~correct))
            moments[i] = moments[i].merge(_Moments.of(_trial_payoffs(roles[i], correct, value, params, firm)))

    n_sell = n - n_buy
    rank_a, rank_b = _ROLE_RANK[roles[0]], _ROLE_RANK[roles[1]]
    return SimReport(
        n_trials=n,
        payoff_a=moments[0].mean,
        payoff_a_se=moments[0].standard_error,
        payoff_b=moments[1].mean,
        payoff_b_se=moments[1].standard_error,
        win_a=float(rank_a < rank_b),
        win_b=float(rank_b < rank_a),
        tie=float(rank_a == rank_b),
        n_buy=n_buy,
        pe1_a=err1[0] / n_buy if n_buy else None,
        pe2_a=err2[0] / n_sell if n_sell else None,
        pe1_b=err1[1] / n_buy if n_buy else None,
        pe2_b=err2[1] / n_sell if n_sell else None,
    )
