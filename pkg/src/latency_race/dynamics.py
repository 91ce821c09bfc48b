"""Best-response dynamics and the best-response state graph."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .channel import Mode
from .decoder import GameParams
from .equilibrium import StrategyPair, best_response_table, t_max
from .errors import BudgetError, DomainError
from .payoff import FirmConfig, FirmLabel, expected_payoff

GRAPH_T_MAX_LIMIT = 10_000


class Updates(str, enum.Enum):
    ALTERNATING = "ALTERNATING"
    SIMULTANEOUS = "SIMULTANEOUS"


class Status(str, enum.Enum):
    SINK = "SINK"
    CYCLE = "CYCLE"


@dataclass
class DynamicsTrace:
    """Pairs visited, in order. ``movers[i]`` is who produced ``path[i]`` (None for the start, "AB" for a joint move)."""

    path: list[StrategyPair]
    movers: list[str | None]
    status: Status
    updates: Updates
    steps: int


def run_dynamics(
    start: StrategyPair,
    config_a: FirmConfig,
    config_b: FirmConfig,
    params: GameParams,
    mode: Mode | None = None,
    updates: Updates = Updates.ALTERNATING,
    max_steps: int = 100_000,
) -> DynamicsTrace:
    """Iterate best responses from ``start`` until a fixed point or a repeated state.

    ALTERNATING moves one firm per step, A first; SIMULTANEOUS moves both
    against the previous pair.
    """
    if max_steps < 1:
        raise DomainError("max_steps must be >= 1")
    tm = t_max(params)
    start = StrategyPair(*start)
    if not (0 <= start.t_a <= tm and 0 <= start.t_b <= tm):
        raise DomainError(f"start {tuple(start)} outside [0, {tm}]^2")
    updates = Updates(updates)
    br_a = best_response_table(config_a, params, mode)
    br_b = best_response_table(config_b, params, mode)

    def fixed(p: StrategyPair) -> bool:
        return br_a[p.t_b] == p.t_a and br_b[p.t_a] == p.t_b

    cur = start
    path: list[StrategyPair] = [cur]
    movers: list[str | None] = [None]
    if updates is Updates.ALTERNATING:
        mover = "A"
        seen = {(cur, mover)}
        for step in range(1, max_steps + 1):
            if fixed(cur):
                return DynamicsTrace(path, movers, Status.SINK, updates, step - 1)
            if mover == "A":
                new = StrategyPair(br_a[cur.t_b], cur.t_b)
            else:
                new = StrategyPair(cur.t_a, br_b[cur.t_a])
            if new != cur:
                cur = new
                path.append(cur)
                movers.append(mover)
            mover = "B" if mover == "A" else "A"
            if (cur, mover) in seen:
                return DynamicsTrace(path, movers, Status.CYCLE, updates, step)
            seen.add((cur, mover))
    else:
        seen_pairs = {cur}
        for step in range(1, max_steps + 1):
            new = StrategyPair(br_a[cur.t_b], br_b[cur.t_a])
            if new == cur:
                return DynamicsTrace(path, movers, Status.SINK, updates, step - 1)
            cur = new
            path.append(cur)
            movers.append("AB")
            if cur in seen_pairs:
                return DynamicsTrace(path, movers, Status.CYCLE, updates, step)
            seen_pairs.add(cur)
    raise BudgetError(f"no sink or cycle within {max_steps} steps")


@dataclass(frozen=True)
class Edge:
    dst: StrategyPair
    mover: FirmLabel
    strict: bool  # the move strictly raises the mover's payoff


@dataclass
class StateGraph:
    t_max: int
    edges: dict[StrategyPair, list[Edge]]
    sinks: frozenset[StrategyPair]

    def successors(self, node: StrategyPair, strict_only: bool = False) -> list[StrategyPair]:
        return [e.dst for e in self.edges[node] if e.strict or not strict_only]

    def find_cycle(self, strict_only: bool = False) -> list[StrategyPair] | None:
        """A directed cycle as a node list (first node repeated at the end), or None."""
        WHITE, GREY, BLACK = 0, 1, 2
        color = dict.fromkeys(self.edges, WHITE)
        for root in self.edges:
            if color[root] != WHITE:
                continue
            stack = [(root, iter(self.successors(root, strict_only)))]
            color[root] = GREY
            trail = [root]
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[node] = BLACK
                    stack.pop()
                    trail.pop()
                elif color[nxt] == GREY:
                    return trail[trail.index(nxt):] + [nxt]
                elif color[nxt] == WHITE:
                    color[nxt] = GREY
                    trail.append(nxt)
                    stack.append((nxt, iter(self.successors(nxt, strict_only))))
        return None


def build_state_graph(
    config_a: FirmConfig, config_b: FirmConfig, params: GameParams, mode: Mode | None = None
) -> StateGraph:
    """Nodes are all pairs in [0, t0+1]^2; edges are single-firm best-response moves (no self-loops)."""
    tm = t_max(params)
    if tm > GRAPH_T_MAX_LIMIT:
        raise BudgetError(f"t_max={tm} exceeds the graph limit {GRAPH_T_MAX_LIMIT}")
    br_a = best_response_table(config_a, params, mode)
    br_b = best_response_table(config_b, params, mode)

    def pay(t_self, t_other, firm):
        return expected_payoff(t_self, t_other, firm, params, mode).total

    edges: dict[StrategyPair, list[Edge]] = {}
    sinks = set()
    for a in range(tm + 1):
        for b in range(tm + 1):
            node = StrategyPair(a, b)
            out = []
            if br_a[b] != a:
                out.append(Edge(StrategyPair(br_a[b], b), FirmLabel.A, pay(br_a[b], b, config_a) > pay(a, b, config_a)))
            if br_b[a] != b:
                out.append(Edge(StrategyPair(a, br_b[a]), FirmLabel.B, pay(br_b[a], a, config_b) > pay(b, a, config_b)))
            edges[node] = out
            if not out:
                sinks.add(node)
    return StateGraph(tm, edges, frozenset(sinks))
