"""CSV and JSON export of Schmidt spectra and mode functions."""

import logging
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel

from su11sim.plots.svg import render_lines
from su11sim.schmidt.calibration import schmidt_number
from su11sim.schmidt.decomposition import SchmidtDecomposition

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


class SchmidtSummary(BaseModel):
    phi: float
    variant: str
    retained: int
    tail_mass: float
    reconstruction_error: float
    raw_norm: float
    schmidt_number: float
    gain: Optional[float] = None
    gamma: Optional[float] = None
    config_hash: Optional[str] = None


def export_schmidt(
    dec: SchmidtDecomposition,
    out_dir: str,
    stem: str,
    gamma: Optional[float] = None,
    n_modes: int = 8,
    config_hash: Optional[str] = None,
) -> Dict[str, str]:
    """Write ``<stem>_eigenvalues.csv``, ``<stem>_modes.csv``, ``<stem>.json`` and a spectrum SVG.

    The mode table holds the first ``n_modes`` signal and idler modes as
    real/imaginary column pairs over the grid.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    gain = dec.gain if dec.gain is not None else 0.0

    eig_path = out / f"{stem}_eigenvalues.csv"
    pd.DataFrame({"k": np.arange(1, dec.retained + 1), "lambda": dec.eigenvalues}).to_csv(
        eig_path, index=False, float_format=FLOAT_FORMAT
    )

    count = min(n_modes, dec.retained)
    signal = dec.signal_modes[:count]
    idler = dec.idler_modes[:count]
    # idler columns only when both axes share a length
    paired = dec.grid.n_s == dec.grid.n_i
    modes = pd.DataFrame({"omega_s": dec.grid.signal})
    if paired:
        modes["omega_i"] = dec.grid.idler
    for k in range(count):
        modes[f"u{k + 1}_re"] = signal[k].real
        modes[f"u{k + 1}_im"] = signal[k].imag
        if paired:
            modes[f"v{k + 1}_re"] = idler[k].real
            modes[f"v{k + 1}_im"] = idler[k].imag
    modes_path = out / f"{stem}_modes.csv"
    modes.to_csv(modes_path, index=False, float_format=FLOAT_FORMAT)

    summary = SchmidtSummary(
        phi=dec.phi,
        variant=dec.variant.value,
        retained=dec.retained,
        tail_mass=dec.tail_mass,
        reconstruction_error=dec.reconstruction_error,
        raw_norm=dec.raw_norm,
        schmidt_number=schmidt_number(dec.eigenvalues, gain),
        gain=dec.gain,
        gamma=gamma,
        config_hash=config_hash,
    )
    summary_path = out / f"{stem}.json"
    summary_path.write_text(summary.model_dump_json(indent=2))

    shown = dec.eigenvalues[: min(dec.retained, 64)]
    svg_path = out / f"{stem}_eigenvalues.svg"
    svg_path.write_text(
        render_lines(
            [("lambda_k", list(range(1, shown.size + 1)), list(shown))],
            title=f"Schmidt eigenvalues, phi = {dec.phi:.4f} rad",
            x_label="k",
            y_label="lambda_k",
            log_y=True,
        )
    )
    logger.info(f"Schmidt spectrum ({dec.retained} modes, K={summary.schmidt_number:.3f}) written to {out}")
    return {
        "eigenvalues": str(eig_path),
        "modes": str(modes_path),
        "summary": str(summary_path),
        "svg": str(svg_path),
    }
