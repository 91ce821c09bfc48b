"""Best responses, regime classification and equilibrium verification.

Decision times run over [0, t0 + 1]: any time past min(t_other, t0) earns
the same sunk -d*S, so t0 + 1 stands in for every non-competing choice.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .channel import Mode
from .decoder import GameParams, f_inverse, f_value
from .errors import DomainError, RangeError
from .payoff import FirmConfig, FirmLabel, expected_payoff


class StrategyPair(NamedTuple):
    t_a: int
    t_b: int


class Regime(str, enum.Enum):
    TIE = "TIE"
    WIN = "WIN"
    ASYMMETRIC = "ASYMMETRIC"
    NONE = "NONE"


@dataclass(frozen=True)
class Deviation:
    """A profitable unilateral move away from a candidate equilibrium."""

    firm: FirmLabel
    from_t: int
    to_t: int
    gain: float


@dataclass
class EquilibriumReport:
    regime: Regime
    t_star: int | None
    equilibria: tuple[StrategyPair, ...]
    verified: bool
    reason: str | None = None
    deviation: Deviation | None = None
    evidence: dict[str, Any] = field(default_factory=dict)


def t_max(params: GameParams) -> int:
    return params.t0 + 1


def _mode(firm: FirmConfig, mode: Mode | None) -> Mode:
    return firm.channel.mode if mode is None else Mode(mode)


def best_response(t_other: int, firm: FirmConfig, params: GameParams, mode: Mode | None = None) -> int:
    """Best decision time against ``t_other``.

    With m = min(t_other, t0) the candidates are undercutting (m - 1), tying
    (m) and staying out (m + 1). Exact ties between the three conditions
    resolve in the order tie, undercut, stay out; undercutting is impossible
    at m = 0.
    """
    if t_other < 0:
        raise DomainError("t_other must be >= 0")
    mode = _mode(firm, mode)
    m = min(t_other, params.t0)
    f_m = f_value(m, firm.snr, params, mode)
    c = params.c
    if m == 0:
        return m if f_m / 2.0 >= c else m + 1
    f_prev = f_value(m - 1, firm.snr, params, mode)
    if f_m / 2.0 >= max(f_prev, c):
        return m
    if f_prev >= max(c, f_m / 2.0):
        return m - 1
    return m + 1


def best_response_table(firm: FirmConfig, params: GameParams, mode: Mode | None = None) -> list[int]:
    """best_response for every t_other in [0, t0 + 1]."""
    return [best_response(t, firm, params, mode) for t in range(t_max(params) + 1)]


def _payoff(t_self: int, t_other: int, firm: FirmConfig, params: GameParams, mode: Mode) -> float:
    return expected_payoff(t_self, t_other, firm, params, mode).total


def find_deviation(
    pair: StrategyPair, firm_a: FirmConfig, firm_b: FirmConfig, params: GameParams, mode: Mode | None = None
) -> Deviation | None:
    """Most profitable unilateral deviation from ``pair`` over [0, t0 + 1], or None if it is Nash."""
    tol = 1e-12 * max(1.0, params.f_sup)
    best: Deviation | None = None
    for label, firm, own, other in (
        (FirmLabel.A, firm_a, pair.t_a, pair.t_b),
        (FirmLabel.B, firm_b, pair.t_b, pair.t_a),
    ):
        md = _mode(firm, mode)
        base = _payoff(own, other, firm, params, md)
        for t in range(t_max(params) + 1):
            gain = _payoff(t, other, firm, params, md) - base
            if gain > tol and (best is None or gain > best.gain):
                best = Deviation(label, own, t, gain)
    return best


def tie_conditions(T: int, firm: FirmConfig, params: GameParams, mode: Mode | None = None) -> bool:
    """F(T)/2 >= max(F(T-1), c)."""
    if T < 1:
        return False
    md = _mode(firm, mode)
    f = lambda t: f_value(t, firm.snr, params, md)  # noqa: E731
    return f(T) / 2.0 >= max(f(T - 1), params.c)


def win_conditions(T: int, firm: FirmConfig, params: GameParams, mode: Mode | None = None) -> bool:
    """c <= F(T) <= 2c, F(T+1) <= 2F(T) and F(T-1) <= c."""
    if T < 1:
        return False
    md = _mode(firm, mode)
    f = lambda t: f_value(t, firm.snr, params, md)  # noqa: E731
    c = params.c
    return c <= f(T) <= 2.0 * c and f(T + 1) <= 2.0 * f(T) and f(T - 1) <= c


def _precondition_failure(firm: FirmConfig, params: GameParams, mode: Mode) -> str | None:
    f0 = f_value(0, firm.snr, params, mode)
    ft0 = f_value(params.t0, firm.snr, params, mode)
    if not f0 < params.c:
        return f"F(0) < c violated: F(0)={f0!r}, c={params.c!r}"
    if not params.c < ft0:
        return f"c < F(T0) violated: c={params.c!r}, F(T0)={ft0!r}"
    return None


def crossing(firm: FirmConfig, params: GameParams, mode: Mode) -> int | None:
    """The T in 1..t0 with F(T-1) <= c < F(T)."""
    prev = f_value(0, firm.snr, params, mode)
    for T in range(1, params.t0 + 1):
        cur = f_value(T, firm.snr, params, mode)
        if prev <= params.c < cur:
            return T
        prev = cur
    return None


def classify_regime(params: GameParams, firm: FirmConfig, mode: Mode | None = None) -> EquilibriumReport:
    """Equilibria of the symmetric game where both firms use ``firm``'s channel.

    Locates T* with F(T*-1) <= c < F(T*) and tests, in order: the TIE
    conditions at T*, the WIN conditions at T*, the TIE conditions at T*+1.
    Every claimed equilibrium is then checked against all unilateral
    deviations; a failed check yields a NONE report carrying the deviation.
    """
    md = _mode(firm, mode)
    failure = _precondition_failure(firm, params, md)
    if failure is not None:
        return EquilibriumReport(Regime.NONE, None, (), False, reason=failure)
    t_star = crossing(firm, params, md)
    assert t_star is not None  # guaranteed by the precondition and monotone F
    f = {t: f_value(t, firm.snr, params, md) for t in (t_star - 1, t_star, t_star + 1)}
    tie_now = tie_conditions(t_star, firm, params, md)
    win_now = win_conditions(t_star, firm, params, md)
    tie_next = tie_conditions(t_star + 1, firm, params, md)
    evidence: dict[str, Any] = {
        "f_values": f,
        "conditions": {"tie_at_t_star": tie_now, "win_at_t_star": win_now, "tie_at_t_star_plus_1": tie_next},
    }
    horizon = False
    if tie_now:
        regime, t_eq, pairs = Regime.TIE, t_star, (StrategyPair(t_star, t_star),)
    elif win_now and t_star < params.t0:
        regime, t_eq = Regime.WIN, t_star
        pairs = (StrategyPair(t_star + 1, t_star), StrategyPair(t_star, t_star + 1))
    elif win_now or tie_next:
        # at T* = t0 the earlier firm only ever gets the tie share, so a WIN
        # pair collapses into both firms staying out at t0 + 1
        horizon = win_now
        regime, t_eq, pairs = Regime.TIE, t_star + 1, (StrategyPair(t_star + 1, t_star + 1),)
    else:
        return EquilibriumReport(Regime.NONE, t_star, (), False, reason="no condition set holds", evidence=evidence)
    evidence["horizon_collapse"] = horizon
    evidence["crossing"] = t_star
    for pair in pairs:
        dev = find_deviation(pair, firm, firm, params, md)
        if dev is not None:
            return EquilibriumReport(
                Regime.NONE, t_eq, (), False, reason=f"{regime.value} candidate {tuple(pair)} is not Nash",
                deviation=dev, evidence=evidence,
            )
    return EquilibriumReport(regime, t_eq, pairs, True, evidence=evidence)


def _floor_inverse(inv: float, firm: FirmConfig, params: GameParams, mode: Mode) -> int:
    """floor(F^-1(c)) made exact on integer boundaries: the largest k with F(k) <= c."""
    k = max(0, math.floor(inv))
    while k > 0 and f_value(k, firm.snr, params, mode) > params.c:
        k -= 1
    while f_value(k + 1, firm.snr, params, mode) <= params.c:
        k += 1
    return k


def asymmetric_equilibrium(
    config_a: FirmConfig, config_b: FirmConfig, params: GameParams, mode: Mode | None = None
) -> EquilibriumReport:
    """Equilibrium when the firms' channels differ.

    The firm whose F reaches c earlier (smaller F^-1(c)) is the stronger one.
    With k = floor(F_weak^-1(c)) the candidate has the stronger firm at k and
    the weaker at k + 1. The literal label orientation (A at floor(F_A^-1(c))+1,
    B at floor(F_A^-1(c))) is also tried. The first candidate that survives
    the deviation check is reported.
    """
    inverses = {}
    for label, firm in ((FirmLabel.A, config_a), (FirmLabel.B, config_b)):
        md = _mode(firm, mode)
        failure = _precondition_failure(firm, params, md)
        if failure is not None:
            raise RangeError(f"firm {label.value}: {failure}")
        inverses[label] = f_inverse(params.c, firm.snr, params, md)
    inv_a, inv_b = inverses[FirmLabel.A], inverses[FirmLabel.B]
    if abs(inv_a - inv_b) <= 1e-9:
        raise RangeError("F_A^-1(c) == F_B^-1(c): channels are equivalent, use classify_regime")
    a_weak = inv_a > inv_b
    weak = config_a if a_weak else config_b
    k = _floor_inverse(max(inv_a, inv_b), weak, params, _mode(weak, mode))
    k_a = _floor_inverse(inv_a, config_a, params, _mode(config_a, mode))
    candidates = {"stronger_first": StrategyPair(k + 1, k) if a_weak else StrategyPair(k, k + 1)}
    if StrategyPair(k_a + 1, k_a) not in candidates.values():
        candidates["literal"] = StrategyPair(k_a + 1, k_a)
    checks = {}
    first_dev = None
    for name, pair in candidates.items():
        dev = find_deviation(pair, config_a, config_b, params, mode)
        checks[name] = {"pair": pair, "nash": dev is None, "deviation": dev}
        if dev is None:
            evidence = {"inverses": {"A": inv_a, "B": inv_b}, "stronger": "B" if a_weak else "A",
                        "candidates": checks, "orientation": name}
            t_star = min(pair)
            return EquilibriumReport(Regime.ASYMMETRIC, t_star, (pair,), True, evidence=evidence)
        first_dev = first_dev or dev
    evidence = {"inverses": {"A": inv_a, "B": inv_b}, "stronger": "B" if a_weak else "A", "candidates": checks}
    return EquilibriumReport(
        Regime.NONE, k, (), False, reason="no candidate orientation is Nash", deviation=first_dev, evidence=evidence
    )
