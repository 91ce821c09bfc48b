"""Random game draws and brute-force oracles shared by the tests."""
from __future__ import annotations

import numpy as np
from scipy.stats import norm

from latency_race import ChannelSpec, FirmConfig, FirmLabel, GameParams, Mode, expected_payoff
from latency_race.decoder import f_value


def draw_game(rng, mode=Mode.EXACT, t0_range=(2, 40), max_ts=40.0, snr_range=(0.02, 1.5)):
    """A symmetric game with F(0) < c < F(t0); returns (params, firm)."""
    while True:
        p1 = rng.uniform(0.1, 0.9)
        v1, v2 = rng.uniform(0.5, 2.0, 2)
        snr = rng.uniform(*snr_range)
        t0 = int(rng.integers(t0_range[0], t0_range[1] + 1))
        if t0 * snr > max_ts:
            continue
        d = rng.uniform(0.0, 0.05)
        probe = GameParams(p1, v1, v2, 0.0, d, t0)
        lo, hi = f_value(0, snr, probe, mode), f_value(t0, snr, probe, mode)
        if hi <= max(lo, 0.0):
            continue
        c = rng.uniform(max(lo, 0.0), hi)
        if not max(lo, 0.0) < c < hi:
            continue
        params = GameParams(p1, v1, v2, c, d, t0)
        return params, FirmConfig(ChannelSpec(snr, 2.0, mode=mode), FirmLabel.A)


def grid_objective(T, snr, params, mode, hs):
    """Threshold objective on a grid, via scipy's normal tail (independent of the package Q)."""
    k = np.sqrt(T * snr)
    if mode is Mode.EXACT:
        pe1, pe2 = norm.sf(k * (1 - hs)), norm.sf(k * (1 + hs))
    else:
        pe1, pe2 = np.exp(-T * snr * (1 - hs) ** 2 / 2), np.exp(-T * snr * (1 + hs) ** 2 / 2)
    return params.w1 * (1 - 2 * pe1) + params.w2 * (1 - 2 * pe2)


H_GRID_1E3 = np.arange(-999, 1000) * 1e-3

_PRIORITY = {"TIE": 0, "UNDERCUT": 1, "OUT": 2}


def argmax_response(t_other, firm, params, mode=None):
    """Exhaustive argmax of expected_payoff over [0, t0+1] with tie > undercut > stay-out."""
    m = min(t_other, params.t0)
    pays = {t: expected_payoff(t, t_other, firm, params, mode).total for t in range(params.t0 + 2)}
    best = max(pays.values())
    winners = [t for t, v in pays.items() if v == best]

    def category(t):
        return "UNDERCUT" if t < m else "TIE" if t == m else "OUT"

    cat = min((category(t) for t in winners), key=_PRIORITY.__getitem__)
    if cat == "TIE":
        return m
    if cat == "OUT":
        return m + 1
    return max(t for t in winners if t < m)


def payoff_table(firm, params, mode=None):
    """table[t_self, t_other] rebuilt from F with the race indicators."""
    mode = firm.channel.mode if mode is None else mode
    tm = params.t0 + 1
    F = np.array([f_value(t, firm.snr, params, mode) for t in range(tm + 1)])
    t_self = np.arange(tm + 1)[:, None]
    m = np.minimum(np.arange(tm + 1)[None, :], params.t0)
    ds = params.d * firm.snr
    first = np.broadcast_to(F[:, None] - params.c - ds, (tm + 1, tm + 1))
    tie = np.broadcast_to(F[:, None] / 2 - params.c - ds, (tm + 1, tm + 1))
    return np.where(t_self < m, first, np.where(t_self == m, tie, -ds))


def brute_force_nash(firm_a, firm_b, params, mode=None):
    """All pure Nash equilibria over [0, t0+1]^2 by payoff-table scan."""
    pa = payoff_table(firm_a, params, mode)  # [t_a, t_b]
    pb = payoff_table(firm_b, params, mode).T  # [t_a, t_b]
    tol = 1e-12 * max(1.0, params.f_sup)
    ok = (pa >= pa.max(axis=0, keepdims=True) - tol) & (pb >= pb.max(axis=1, keepdims=True) - tol)
    return {(int(a), int(b)) for a, b in zip(*np.nonzero(ok))}
