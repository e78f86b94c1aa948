"""
Configuration for odqkd runs.

Defines Config, a frozen dataclass tree carrying the detector parameters, the network layout,
the sweep grids, the session controls and the output settings. Defaults are sourced from
odqkd.core.constants (the experimental parameter set) so that a run without a file
reproduces the published simulation.

Source of truth
- odqkd.core.constants.DEFAULT_ETA_D, DEFAULT_E_D, DEFAULT_P_D, DEFAULT_F, DEFAULT_ALPHA
  (through DetectorParams defaults).
- netsim.SessionConfig validates the session section.

File format
- TOML with the sections [detector], [topology], [sweep], [session] and [output]. Unknown
  sections or keys raise IoConfigError.
- Precedence: overrides (command-line flags) > file > defaults. No environment variables.

Notes
- Config.to_toml() writes the same schema, so parse → serialize → parse is the identity.
- Keys whose value is None (no output path) are omitted from the TOML text.
"""

from __future__ import annotations

import json
import logging
import os
import tomllib
from collections.abc import Mapping
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Literal

from pydantic import ValidationError

from odqkd.core.errors import ParameterError
from odqkd.detector.model import DetectorParams
from odqkd.netsim.session import SessionConfig
from odqkd.netsim.topology import Topology

from .errors import IoConfigError

__all__ = [
    "OutputFormat",
    "TopologySettings",
    "SweepSettings",
    "OutputSettings",
    "Config",
    "DEFAULT_CONFIG_NAME",
]

logger = logging.getLogger(__name__)

OutputFormat = Literal["csv", "json"]

# Looked up in the working directory when no explicit path is given.
DEFAULT_CONFIG_NAME = "odqkd.toml"

DEFAULT_ROUNDS = 100_000


@dataclass(frozen=True)
class TopologySettings:
    """
    Star network layout.

    Attributes:
        users (int): Number of users N (2..8).
        comm_users (tuple[int, ...]): Communication users (two, or three for a conference).
        distance_km (float): User-to-user distance through the source.
        source_p (float): Werner weight of the GHZ source.
        relay_at_midpoint (bool): Place each relay halfway along its arm.
    """

    users: int = 4
    comm_users: tuple[int, ...] = (0, 1)
    distance_km: float = 50.0
    source_p: float = 1.0
    relay_at_midpoint: bool = False

    def build(self, params: DetectorParams) -> Topology:
        """Materialize the netsim Topology (validation happens there)."""
        return Topology.star(
            self.users,
            self.comm_users,
            self.distance_km,
            params,
            self.source_p,
            relay_at_midpoint=self.relay_at_midpoint,
        )


@dataclass(frozen=True)
class SweepSettings:
    """
    Analytic sweep grid: Werner weights crossed with an inclusive distance range.

    Attributes:
        p_values (tuple[float, ...]): Werner weights, each in [0, 1].
        distance_min_km (float): First distance.
        distance_max_km (float): Last distance (inclusive).
        distance_step_km (float): Grid step (> 0).
    """

    p_values: tuple[float, ...] = (1.0, 0.98, 0.96)
    distance_min_km: float = 0.0
    distance_max_km: float = 700.0
    distance_step_km: float = 10.0

    def __post_init__(self) -> None:
        if not self.p_values or any(not 0.0 <= p <= 1.0 for p in self.p_values):
            raise ParameterError(f"p_values must be non-empty and in [0, 1], got {self.p_values}")
        if self.distance_step_km <= 0.0:
            raise ParameterError("distance_step_km must be > 0")
        if not 0.0 <= self.distance_min_km <= self.distance_max_km:
            raise ParameterError("need 0 <= distance_min_km <= distance_max_km")

    def distances(self) -> tuple[float, ...]:
        """
        Inclusive distance grid.

        Examples:
            >>> grid = SweepSettings(distance_min_km=0, distance_max_km=30, distance_step_km=10)
            >>> grid.distances()
            (0.0, 10.0, 20.0, 30.0)
        """
        span = self.distance_max_km - self.distance_min_km
        count = int(round(span / self.distance_step_km))
        return tuple(
            round(self.distance_min_km + i * self.distance_step_km, 9) for i in range(count + 1)
        )


@dataclass(frozen=True)
class OutputSettings:
    """
    Where and how artifacts are written.

    Attributes:
        path (str | None): Artifact path; None prints to stdout.
        format (OutputFormat): "csv" or "json".
        records_path (str | None): NDJSON record stream written by `montecarlo`.
    """

    path: str | None = None
    format: OutputFormat = "csv"
    records_path: str | None = None

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise ParameterError(f"output format must be 'csv' or 'json', got {self.format!r}")


def _default_session() -> SessionConfig:
    return SessionConfig(rounds=DEFAULT_ROUNDS)


_SECTIONS = ("detector", "topology", "sweep", "session", "output")


def _coerce(value: Any) -> Any:
    """TOML arrays become tuples so frozen sections stay hashable and compare equal."""
    if isinstance(value, list):
        return tuple(_coerce(v) for v in value)
    return value


def _toml_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, tuple | list):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise IoConfigError(f"cannot serialize {value!r} to TOML")


@dataclass(frozen=True)
class Config:
    """
    Runtime configuration for the command line and library entry points.

    Attributes:
        detector (DetectorParams): Hardware parameters.
        topology (TopologySettings): Network layout for `montecarlo`.
        sweep (SweepSettings): Grids for `sweep`.
        session (SessionConfig): Round count, seed, bias and worker settings.
        output (OutputSettings): Artifact destination and format.

    Examples:
        >>> cfg = Config()
        >>> (cfg.detector.eta_d, cfg.detector.p_d, cfg.session.rounds)
        (0.4, 8e-08, 100000)
        >>> Config.from_toml_text(cfg.to_toml()) == cfg
        True
    """

    detector: DetectorParams = field(default_factory=DetectorParams)
    topology: TopologySettings = field(default_factory=TopologySettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    session: SessionConfig = field(default_factory=_default_session)
    output: OutputSettings = field(default_factory=OutputSettings)

    @classmethod
    def _apply_mapping(cls, base: Config, cfg: Mapping[str, Any] | None) -> Config:
        """
        Apply a `{section: {key: value}}` mapping onto `base`, returning a new instance.

        Raises:
            IoConfigError: On unknown sections/keys or values the sections reject.
        """
        if not cfg:
            return base
        unknown = set(cfg) - set(_SECTIONS)
        if unknown:
            raise IoConfigError(f"unknown config section(s): {sorted(unknown)}")
        s = base
        for name in _SECTIONS:
            values = cfg.get(name)
            if values is None:
                continue
            if not isinstance(values, Mapping):
                raise IoConfigError(f"[{name}] must be a table")
            values = {k: _coerce(v) for k, v in values.items()}
            current = getattr(s, name)
            try:
                if isinstance(current, DetectorParams):
                    updated: Any = DetectorParams.model_validate(
                        {**current.model_dump(), **values}
                    )
                else:
                    allowed = {f.name for f in fields(current)}
                    extra = set(values) - allowed
                    if extra:
                        raise IoConfigError(f"unknown key(s) in [{name}]: {sorted(extra)}")
                    updated = replace(current, **values)
            except (ValidationError, ParameterError, TypeError) as exc:
                raise IoConfigError(f"invalid [{name}] settings: {exc}") from exc
            s = replace(s, **{name: updated})
        return s

    def to_mapping(self) -> dict[str, dict[str, Any]]:
        """Section tables with None values dropped."""
        out: dict[str, dict[str, Any]] = {"detector": self.detector.model_dump()}
        for name in _SECTIONS[1:]:
            section = getattr(self, name)
            out[name] = {
                f.name: getattr(section, f.name)
                for f in fields(section)
                if getattr(section, f.name) is not None
            }
        return out

    def to_toml(self) -> str:
        """Serialize to the TOML schema read by from_toml()."""
        blocks = []
        for name, values in self.to_mapping().items():
            lines = [f"[{name}]"] + [f"{k} = {_toml_value(v)}" for k, v in values.items()]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    @classmethod
    def from_toml_text(cls, text: str, base: Config | None = None) -> Config:
        """Parse TOML text onto `base` (defaults when None)."""
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise IoConfigError(f"malformed TOML: {exc}") from exc
        return cls._apply_mapping(base or cls(), data)

    @classmethod
    def from_toml(cls, path: str | os.PathLike[str] | None = None) -> Config:
        """
        Build Config from a TOML file.

        Search order when `path` is None: ./odqkd.toml, else defaults.

        Raises:
            IoConfigError: If an explicit path is missing or any file is malformed.
        """
        if path is None:
            candidate = Path.cwd() / DEFAULT_CONFIG_NAME
            if not candidate.exists():
                return cls()
        else:
            candidate = Path(path)
        try:
            text = candidate.read_text(encoding="utf-8")
        except OSError as exc:
            raise IoConfigError(f"cannot read config {candidate}: {exc}") from exc
        logger.info("config: loaded %s", candidate)
        return cls.from_toml_text(text)

    @classmethod
    def load(
        cls,
        path: str | os.PathLike[str] | None = None,
        overrides: Mapping[str, Any] | None = None,
    ) -> Config:
        """
        Load Config applying precedence: overrides > TOML > defaults.

        Args:
            path: Optional explicit TOML path. If None, ./odqkd.toml is used when present.
            overrides: `{section: {key: value}}` from command-line flags; None values are
                ignored so unset flags do not mask the file.

        Returns:
            Config
        """
        s = cls.from_toml(path)
        if overrides:
            cleaned = {
                name: {k: v for k, v in section.items() if v is not None}
                for name, section in overrides.items()
            }
            s = cls._apply_mapping(s, {k: v for k, v in cleaned.items() if v})
        return s
