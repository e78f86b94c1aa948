"""
odqkd.io — configuration loading and artifact IO.

## Responsibilities
- Load the run configuration (TOML file, command-line overrides, defaults).
- Write sweep reports, NDJSON record streams and session statistics atomically.
- Read record streams and sweep CSVs back, refusing foreign schema versions.

## Public API
- Config, TopologySettings, SweepSettings, OutputSettings — configuration tree.
- write_sweep, read_sweep_csv, write_records, read_records, write_stats, stats_frame.
- IoError, IoConfigError, IoWriteError, IoReadError.

## Import DAG discipline
- Depends on odqkd.core and the domain models it serializes (detector, keyrate, netsim,
  protocol). MUST NOT import odqkd.cli.

## Examples
```python
from odqkd.io import Config, write_sweep
from odqkd.keyrate import sweep

cfg = Config.load("odqkd.toml")  # doctest: +SKIP
report = sweep(cfg.sweep.p_values, cfg.sweep.distances(), cfg.detector)  # doctest: +SKIP
write_sweep(report, "out/sweep.csv", "csv")  # doctest: +SKIP
```

## Notes
- Write path: tmp file → fsync → os.replace(tmp, final) on the same filesystem.
"""

from __future__ import annotations

from .config import Config, OutputFormat, OutputSettings, SweepSettings, TopologySettings
from .errors import IoConfigError, IoError, IoReadError, IoWriteError
from .write import (
    read_records,
    read_sweep_csv,
    stats_document,
    stats_frame,
    write_records,
    write_stats,
    write_sweep,
)

__all__ = [
    "Config",
    "OutputFormat",
    "OutputSettings",
    "SweepSettings",
    "TopologySettings",
    "IoError",
    "IoConfigError",
    "IoReadError",
    "IoWriteError",
    "read_records",
    "read_sweep_csv",
    "stats_document",
    "stats_frame",
    "write_records",
    "write_stats",
    "write_sweep",
]
