"""Game payoffs and the ex-ante optimal channel SNR."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._search import grid_then_golden
from .channel import ChannelSpec, Mode
from .decoder import GameParams, f_value, f_value_real
from .errors import DomainError

POWER_GRID_POINTS = 1000


class FirmLabel(str, enum.Enum):
    A = "A"
    B = "B"


class Role(str, enum.Enum):
    FIRST = "FIRST"
    TIE = "TIE"
    SECOND = "SECOND"


@dataclass(frozen=True)
class FirmConfig:
    channel: ChannelSpec
    label: FirmLabel = FirmLabel.A

    @property
    def snr(self) -> float:
        return self.channel.snr


@dataclass(frozen=True)
class PayoffBreakdown:
    total: float
    role: Role
    gross: float
    transaction_cost: float
    channel_cost: float


def role_of(t_self: int, t_other: int, t0: int) -> Role:
    """Acting order against the other firm, with the market closing at t0."""
    m = min(t_other, t0)
    if t_self < m:
        return Role.FIRST
    if t_self == m:
        return Role.TIE
    return Role.SECOND


def expected_payoff(
    t_self: int, t_other: int, firm: FirmConfig, params: GameParams, mode: Mode | None = None
) -> PayoffBreakdown:
    """Expected payoff of ``firm`` deciding at ``t_self`` against ``t_other``.

    The channel cost d*S is charged in every role; the transaction cost only
    when the firm acts (first or tied).
    """
    if t_self < 0 or t_other < 0:
        raise DomainError("decision times must be >= 0")
    mode = firm.channel.mode if mode is None else Mode(mode)
    channel_cost = params.d * firm.snr
    role = role_of(t_self, t_other, params.t0)
    if role is Role.SECOND:
        return PayoffBreakdown(-channel_cost, role, 0.0, 0.0, channel_cost)
    gross = f_value(t_self, firm.snr, params, mode)
    share = gross if role is Role.FIRST else gross / 2.0
    return PayoffBreakdown(share - params.c - channel_cost, role, gross, params.c, channel_cost)


def power_objective(snr: float, params: GameParams, mode: Mode) -> float:
    """Tie payoff at the horizon t0 for an allocated SNR, threshold re-optimised."""
    return f_value_real(params.t0, snr, params, mode) / 2.0 - params.c - params.d * snr


def optimal_power(
    params: GameParams, spec_template: ChannelSpec, mode: Mode | None = None, grid_offset: float = 0.0
) -> float:
    """SNR in (0, S0] maximising the horizon tie payoff.

    ``grid_offset`` in [0, 1) shifts the 1000-point bracketing grid by that
    fraction of its spacing.
    """
    if not 0.0 <= grid_offset < 1.0:
        raise DomainError("grid_offset must lie in [0, 1)")
    mode = spec_template.mode if mode is None else Mode(mode)
    s0 = spec_template.snr_max
    grid = s0 * (np.arange(1, POWER_GRID_POINTS + 1) - grid_offset) / POWER_GRID_POINTS

    def f(s: float) -> float:
        return power_objective(s, params, mode)

    s_star, obj = grid_then_golden(
        f, lambda ss: np.array([f(float(s)) for s in ss]), grid, 1e-12 * s0, s0, 1e-8 * s0
    )
    if f(s0) >= obj:
        return s0
    return s_star
