"""Solver and simulator for the two-firm latency-arbitrage decoding game."""
from .channel import ChannelSpec, ErrorPair, Message, Mode, error_probabilities, gammas, q_function, sample_received_mean
from .decoder import GameParams, ThresholdMethod, ThresholdResult, f_inverse, f_value, optimal_threshold, optimal_threshold_closed_form
from .dynamics import DynamicsTrace, StateGraph, Status, Updates, build_state_graph, run_dynamics
from .equilibrium import (
    Deviation,
    EquilibriumReport,
    Regime,
    StrategyPair,
    asymmetric_equilibrium,
    best_response,
    classify_regime,
    find_deviation,
)
from .errors import BudgetError, DomainError, LatencyRaceError, RangeError
from .payoff import FirmConfig, FirmLabel, PayoffBreakdown, Role, expected_payoff, optimal_power
from .rng import make_stream, spawn
from .simulate import SimReport, monte_carlo_error_rate, monte_carlo_game

__version__ = "0.1.0"
