"""Write JSA matrices, JSON sidecars and JSI heat maps."""

import logging
from pathlib import Path
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel

from su11sim.jsa.builder import JointSpectralAmplitude
from su11sim.plots.svg import render_heatmap

logger = logging.getLogger(__name__)


class JSASidecar(BaseModel):
    variant: str
    phi: float
    raw_norm: float
    representation: str
    grid: Dict[str, float]
    config_hash: Optional[str] = None
    metadata: Dict[str, object] = {}


def export_jsa(jsa: JointSpectralAmplitude, out_dir: str, stem: str, config_hash: Optional[str] = None) -> Dict[str, str]:
    """Write ``<stem>.npz`` (axes, Re F, Im F), ``<stem>.json`` and ``<stem>_jsi.svg``.

    Returns:
        Mapping of artifact kind to written path
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    amplitude = jsa.amplitude

    matrix_path = out / f"{stem}.npz"
    np.savez(
        matrix_path,
        omega_s=jsa.grid.signal,
        omega_i=jsa.grid.idler,
        re=amplitude.real,
        im=amplitude.imag,
    )

    sidecar = JSASidecar(
        variant=jsa.variant.value,
        phi=jsa.phi,
        raw_norm=jsa.raw_norm,
        representation=jsa.representation,
        grid=jsa.grid.describe(),
        config_hash=config_hash,
        metadata=jsa.metadata,
    )
    sidecar_path = out / f"{stem}.json"
    sidecar_path.write_text(sidecar.model_dump_json(indent=2))

    svg_path = out / f"{stem}_jsi.svg"
    detuning_s = (jsa.grid.signal - jsa.grid.center) * 1e-12
    detuning_i = (jsa.grid.idler - jsa.grid.center) * 1e-12
    svg_path.write_text(
        render_heatmap(
            np.abs(amplitude) ** 2,
            x_axis=detuning_i,
            y_axis=detuning_s,
            title=f"JSI {jsa.variant.value}, phi = {jsa.phi:.4f} rad",
            x_label="idler detuning (10^12 rad/s)",
            y_label="signal detuning (10^12 rad/s)",
        )
    )
    logger.info(f"JSA written to {matrix_path}, {sidecar_path}, {svg_path}")
    return {"matrix": str(matrix_path), "sidecar": str(sidecar_path), "svg": str(svg_path)}
