"""Run configuration: JSON file plus ``--set dotted.key=value`` overrides."""
from __future__ import annotations

import json
import re
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .channel import ChannelSpec, Mode
from .decoder import GameParams
from .dynamics import Updates
from .errors import LatencyRaceError
from .payoff import FirmConfig, FirmLabel, optimal_power

SCHEMA_VERSION = 1
SWEEP_AXES = ("snr", "c", "d", "t0", "p1", "v1", "v2")


class ConfigError(LatencyRaceError):
    """Malformed or invalid configuration."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ParamsModel(_Strict):
    p1: float
    v1: float
    v2: float
    c: float
    d: float
    t0: int
    p2: float | None = None


class ChannelModel(_Strict):
    snr: float | str = "auto"
    snr_max: float
    noise_power: float = 1.0

    @field_validator("snr")
    @classmethod
    def _snr_form(cls, v):
        if isinstance(v, str) and v != "auto" and not re.fullmatch(r"fixed:\s*\S+", v):
            raise ValueError('snr must be a number, "auto" or "fixed:<value>"')
        if isinstance(v, str) and v.startswith("fixed:"):
            try:
                float(v[6:])
            except ValueError as exc:
                raise ValueError(f"bad fixed snr {v!r}") from exc
        return v


class SweepModel(_Strict):
    axis: Literal["snr", "c", "d", "t0", "p1", "v1", "v2"]
    start: float
    stop: float
    steps: int = Field(ge=2)


class DynamicsModel(_Strict):
    start: tuple[int, int] = (0, 0)
    updates: Updates = Updates.ALTERNATING
    max_steps: int = Field(default=100_000, ge=1)


class SimulateModel(_Strict):
    t_a: int = Field(ge=0)
    t_b: int = Field(ge=0)
    n: int = Field(ge=1)


class RunConfig(_Strict):
    params: ParamsModel
    firm_a: ChannelModel
    firm_b: ChannelModel | None = None
    mode: Mode = Mode.EXACT
    seed: int = Field(default=0, ge=0, lt=2**64)
    sweep: SweepModel | None = None
    dynamics: DynamicsModel | None = None
    simulate: SimulateModel | None = None
    description: str | None = None

    def game_params(self, **overrides) -> GameParams:
        return GameParams(**{**self.params.model_dump(), **overrides})

    def firm(self, label: FirmLabel, params: GameParams | None = None, snr: float | None = None) -> FirmConfig:
        """Resolve a firm's channel; ``snr: auto`` runs the optimal power allocation."""
        params = self.game_params() if params is None else params
        model = self.firm_a if label is FirmLabel.A or self.firm_b is None else self.firm_b
        value = model.snr if snr is None else snr
        if value == "auto":
            template = ChannelSpec(model.snr_max, model.snr_max, model.noise_power, self.mode)
            value = optimal_power(params, template, self.mode)
        elif isinstance(value, str):
            value = float(value[len("fixed:"):])
        return FirmConfig(ChannelSpec(float(value), model.snr_max, model.noise_power, self.mode), label)


def _parse_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw


def apply_overrides(doc: dict, overrides: list[str]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"<--set>: expected key=value, got {item!r}")
        key, raw = item.split("=", 1)
        parts = key.strip().split(".")
        node = doc
        for part in parts[:-1]:
            nxt = node.setdefault(part, {})
            if not isinstance(nxt, dict):
                raise ConfigError(f"<--set>: {key} does not address an object")
            node = nxt
        node[parts[-1]] = _parse_value(raw)
    return doc


def _line_of(text: str, loc: tuple) -> int:
    keys = [k for k in loc if isinstance(k, str)]
    start = 0
    line = 1
    for key in keys:
        m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, start)
        if m is None:
            break
        start = m.end()
        line = text.count("\n", 0, m.start()) + 1
    return line


def load_config(path: str, overrides: list[str] | None = None) -> RunConfig:
    """Parse and validate; every failure becomes a ConfigError with a line number."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}:1: top level must be a JSON object")
    doc = apply_overrides(doc, overrides or [])
    try:
        cfg = RunConfig.model_validate(doc)
    except ValidationError as exc:
        lines = []
        for err in exc.errors():
            loc = tuple(err["loc"])
            dotted = ".".join(str(p) for p in loc)
            lines.append(f"{path}:{_line_of(text, loc)}: {dotted}: {err['msg']}")
        raise ConfigError("\n".join(lines)) from exc
    try:
        params = cfg.game_params()
        for label in FirmLabel:
            model = cfg.firm_a if label is FirmLabel.A or cfg.firm_b is None else cfg.firm_b
            if model.snr != "auto":
                cfg.firm(label, params)
            else:
                ChannelSpec(model.snr_max, model.snr_max, model.noise_power, cfg.mode)
    except LatencyRaceError as exc:
        raise ConfigError(f"{path}:{_line_of(text, ('params',))}: {exc}") from exc
    return cfg
