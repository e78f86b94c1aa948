"""
Distance sweeps of the realistic key rate and the zero-rate cutoff.

Responsibilities
- Evaluate KeyRatePoint over a (p, distance) grid.
- Locate the distance where the unclamped rate crosses zero (bracketed root finding).
- Present the result as a polars frame, a schema-tagged CSV, or canonical JSON.

Notes
- Points are emitted in grid order: every distance for the first p, then the next p.
- The CSV begins with the schema tag line, then the header
  `p,distance_km,gain_zz,qber_zz,phase_error_xx,rate`.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import polars as pl
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import brentq

from odqkd.core.constants import CSV_SCHEMA_TAG, CUTOFF_XTOL_KM
from odqkd.core.errors import ParameterError
from odqkd.core.hashing import json_dumps_canonical
from odqkd.core.versioning import SCHEMA_V
from odqkd.detector.model import DetectorParams, EquivalentDetector, equivalent_detector

from .formulas import (
    KeyRatePoint,
    key_rate_realistic,
    link_budget,
    realistic_rate_unclamped,
    yield_vanishes,
)

__all__ = [
    "CSV_COLUMNS",
    "CutoffPoint",
    "SweepReport",
    "cutoff_distance",
    "sweep",
]

logger = logging.getLogger(__name__)

CSV_COLUMNS: tuple[str, ...] = (
    "p",
    "distance_km",
    "gain_zz",
    "qber_zz",
    "phase_error_xx",
    "rate",
)

_FIRST_BRACKET_KM = 100.0
_MAX_DISTANCE_KM = 5000.0


class CutoffPoint(BaseModel):
    """Zero-rate distance for one Werner weight; None when the rate stays positive."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    p: float = Field(ge=0.0, le=1.0)
    cutoff_km: float | None = Field(default=None, ge=0.0)


class SweepReport(BaseModel):
    """
    Result of a key-rate sweep.

    Attributes:
        params (DetectorParams): Parameters the sweep was evaluated with.
        relay_at_midpoint (bool): Link exponent convention used.
        points (tuple[KeyRatePoint, ...]): Grid points in (p, distance) order.
        cutoffs (tuple[CutoffPoint, ...]): One entry per p, in grid order.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    params: DetectorParams
    relay_at_midpoint: bool = False
    points: tuple[KeyRatePoint, ...]
    cutoffs: tuple[CutoffPoint, ...]

    def cutoff_for(self, p: float) -> float | None:
        """Cutoff distance recorded for `p`.

        Raises:
            KeyError: If `p` was not part of the sweep.
        """
        for c in self.cutoffs:
            if c.p == p:
                return c.cutoff_km
        raise KeyError(p)

    def to_frame(self) -> pl.DataFrame:
        """One row per point with the CSV columns plus `clamped`."""
        return pl.DataFrame(
            [pt.model_dump() for pt in self.points],
            schema={
                "distance_km": pl.Float64,
                "p": pl.Float64,
                "gain_zz": pl.Float64,
                "qber_zz": pl.Float64,
                "phase_error_xx": pl.Float64,
                "rate": pl.Float64,
                "clamped": pl.Boolean,
            },
        ).select([*CSV_COLUMNS, "clamped"])

    def to_csv(self) -> str:
        """Schema tag line followed by the CSV body."""
        body = self.to_frame().select(CSV_COLUMNS).write_csv()
        return f"{CSV_SCHEMA_TAG}\n{body}"

    def to_json(self) -> str:
        """Canonical JSON with the schema tag, parameters, points and cutoffs."""
        payload = {"schema": SCHEMA_V.tag, "kind": "sweep", **self.model_dump(mode="json")}
        return json_dumps_canonical(payload)


def _raw_rate(
    p: float,
    distance_km: float,
    params: DetectorParams,
    equiv: EquivalentDetector,
    relay_at_midpoint: bool,
) -> float:
    link = link_budget(distance_km, params.alpha, relay_at_midpoint=relay_at_midpoint)
    if yield_vanishes(link, equiv):
        # past the reach of the detectors; negative so the bracket closes here
        return -1.0
    return realistic_rate_unclamped(p, link, equiv, params)[0]


def cutoff_distance(
    p: float,
    params: DetectorParams,
    *,
    relay_at_midpoint: bool = False,
    max_distance_km: float = _MAX_DISTANCE_KM,
    xtol: float = CUTOFF_XTOL_KM,
) -> float | None:
    """
    Distance at which the realistic rate reaches zero.

    The bracket starts at [0, 100] km and doubles until the unclamped rate changes sign, then
    Brent's method refines it to `xtol`. Distances where a yield vanishes count as past the
    cutoff.

    Args:
        p (float): Werner weight.
        params (DetectorParams): Experimental parameters.
        relay_at_midpoint (bool): Link exponent convention.
        max_distance_km (float): Give up (return None) if the rate is still positive here.
        xtol (float): Absolute tolerance on the distance, km.

    Returns:
        float | None: 0.0 if the rate is not positive at zero distance; None if it stays
        positive up to max_distance_km.
    """
    equiv = equivalent_detector(params)

    def rate_at(d: float) -> float:
        return _raw_rate(p, d, params, equiv, relay_at_midpoint)

    if rate_at(0.0) <= 0.0:
        return 0.0
    lo, hi = 0.0, min(_FIRST_BRACKET_KM, max_distance_km)
    while rate_at(hi) > 0.0:
        if hi >= max_distance_km:
            logger.info("rate at p=%s still positive at %s km", p, max_distance_km)
            return None
        lo, hi = hi, min(2.0 * hi, max_distance_km)
    root = brentq(rate_at, lo, hi, xtol=xtol)
    logger.debug("cutoff p=%s in [%s, %s] km -> %.1f km", p, lo, hi, root)
    return float(root)


def sweep(
    p_values: Sequence[float],
    distances: Sequence[float],
    params: DetectorParams,
    *,
    relay_at_midpoint: bool = False,
) -> SweepReport:
    """
    Evaluate the realistic key rate on a grid and locate each cutoff.

    Raises:
        ParameterError: If either grid is empty.

    Examples:
        >>> rep = sweep([1.0], [0.0, 300.0], DetectorParams())
        >>> [pt.rate > 0 for pt in rep.points]
        [True, True]
    """
    if not p_values or not distances:
        raise ParameterError("sweep needs at least one p value and one distance")
    equiv = equivalent_detector(params)
    points: list[KeyRatePoint] = []
    cutoffs: list[CutoffPoint] = []
    for p in p_values:
        row = [
            key_rate_realistic(
                p,
                link_budget(d, params.alpha, relay_at_midpoint=relay_at_midpoint),
                equiv,
                params,
            )
            for d in distances
        ]
        cut = cutoff_distance(p, params, relay_at_midpoint=relay_at_midpoint)
        logger.info(
            "p=%s: %d/%d points clamped, cutoff %s km",
            p,
            sum(pt.clamped for pt in row),
            len(row),
            "none" if cut is None else f"{cut:.1f}",
        )
        points.extend(row)
        cutoffs.append(CutoffPoint(p=p, cutoff_km=cut))
    return SweepReport(
        params=params,
        relay_at_midpoint=relay_at_midpoint,
        points=tuple(points),
        cutoffs=tuple(cutoffs),
    )
