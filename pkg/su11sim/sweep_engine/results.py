"""Sweep tables, JSON summaries and figures, named by config hash."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from su11sim.observables.asymptotes import high_gain_floor
from su11sim.observables.sensitivity import ObservableSeries
from su11sim.plots.svg import render_lines, write_svg

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"

PHASE_COLUMNS = ["gamma", "phi", "N", "varN", "dNdphi", "dphi", "dphi_snl", "normalized", "derivative_zero", "K"]
FILTERED_COLUMNS = ["N_filt", "var_filt", "snl_filt", "norm_filt"]
GAIN_COLUMNS = ["gamma", "phi_star", "min_normalized", "band_width"]
GAIN_FILTERED_COLUMNS = ["phi_star_filt", "min_normalized_filt", "band_width_filt"]


class GammaSummary(BaseModel):
    gamma: float
    phi_star: Optional[float] = None
    min_normalized: Optional[float] = None
    bands: List[Tuple[float, float]] = []
    band_width: float = 0.0
    visibility: Optional[float] = None
    mean_photons_phi0: float
    photon_rate_phi0: Optional[float] = None
    truncation_budget: float = 0.0
    phi_star_filt: Optional[float] = None
    min_normalized_filt: Optional[float] = None
    bands_filt: List[Tuple[float, float]] = []
    band_width_filt: Optional[float] = None


class SweepSummary(BaseModel):
    kind: str
    config_hash: str
    variant: str
    regime: str
    seed: str
    detection: str
    filter_half_width: Optional[float] = None
    grid: Dict[str, float]
    phi: Dict[str, Any]
    workers: int
    wall_time_s: float
    convergence: Optional[Dict[str, Any]] = None
    gammas: List[GammaSummary]


@dataclass(eq=False)
class SweepResult:
    kind: str
    frame: pd.DataFrame
    summary: SweepSummary
    curves: Dict[float, Tuple[ObservableSeries, Optional[ObservableSeries]]] = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        return self.summary.config_hash

    @property
    def stem(self) -> str:
        return f"{self.config_hash}_{self.kind}"


def phase_frame(
    gamma: float,
    series: ObservableSeries,
    schmidt_numbers: np.ndarray,
    filtered: Optional[ObservableSeries] = None,
) -> pd.DataFrame:
    frame = pd.DataFrame(
        {
            "gamma": np.full(series.phis.size, gamma),
            "phi": series.phis,
            "N": series.N,
            "varN": series.varN,
            "dNdphi": series.dNdphi,
            "dphi": series.dphi,
            "dphi_snl": series.dphi_snl,
            "normalized": series.normalized,
            "derivative_zero": series.derivative_zero,
            "K": schmidt_numbers,
        }
    )
    if filtered is not None:
        frame["N_filt"] = filtered.N
        frame["var_filt"] = filtered.varN
        frame["snl_filt"] = filtered.dphi_snl
        frame["norm_filt"] = filtered.normalized
    return frame


def gain_frame(summaries: List[GammaSummary], filtered: bool) -> pd.DataFrame:
    rows = []
    for s in summaries:
        row = {
            "gamma": s.gamma,
            "phi_star": s.phi_star,
            "min_normalized": s.min_normalized,
            "band_width": s.band_width,
        }
        if filtered:
            row.update(
                {
                    "phi_star_filt": s.phi_star_filt,
                    "min_normalized_filt": s.min_normalized_filt,
                    "band_width_filt": s.band_width_filt,
                }
            )
        rows.append(row)
    columns = GAIN_COLUMNS + (GAIN_FILTERED_COLUMNS if filtered else [])
    return pd.DataFrame(rows, columns=columns).astype(float)


def _phase_figure(result: SweepResult) -> str:
    series = []
    for gamma, (curve, filtered) in sorted(result.curves.items()):
        series.append((f"gamma={gamma:g}", list(curve.phis), list(curve.normalized)))
        if filtered is not None:
            series.append((f"gamma={gamma:g} filtered", list(filtered.phis), list(filtered.normalized)))
    return render_lines(
        series,
        title=f"Normalized phase sensitivity ({result.summary.variant}, {result.summary.regime})",
        x_label="phi (rad)",
        y_label="dphi / dphi_SNL",
        reference_y=1.0,
        log_y=True,
        y_cap=1e3,
    )


def _gain_figure(result: SweepResult) -> str:
    frame = result.frame
    gammas = list(frame["gamma"])
    series = [("min normalized", gammas, list(frame["min_normalized"]))]
    if "min_normalized_filt" in frame:
        series.append(("min normalized, filtered", gammas, list(frame["min_normalized_filt"])))
    series.append(("sinh(gamma/2)/gamma", gammas, [high_gain_floor(g) for g in gammas]))
    return render_lines(
        series,
        title="Minimum normalized phase sensitivity versus gain",
        x_label="gamma",
        y_label="min dphi / dphi_SNL",
        reference_y=1.0,
        log_y=True,
        log_x=len(gammas) > 1 and min(gammas) > 0 and max(gammas) / min(gammas) > 20,
    )


def write_outputs(result: SweepResult, out_dir: str) -> Dict[str, str]:
    """Write ``<hash>_<kind>.csv``, ``.json`` and ``.svg`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{result.stem}.csv"
    result.frame.to_csv(csv_path, index=False, float_format=FLOAT_FORMAT)

    json_path = out / f"{result.stem}.json"
    json_path.write_text(result.summary.model_dump_json(indent=2))

    svg_path = out / f"{result.stem}.svg"
    figure = _phase_figure(result) if result.kind == "phase" else _gain_figure(result)
    write_svg(svg_path, figure)

    logger.info(f"Sweep outputs written: {csv_path}, {json_path}, {svg_path}")
    return {"csv": str(csv_path), "json": str(json_path), "svg": str(svg_path)}
