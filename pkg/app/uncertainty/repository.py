from pathlib import Path

import pandas as pd

from app.io import write_csv, write_json
from app.units import vol_to_annual

from .schemas import BandResult, ChiApprox


def band_frame(band: BandResult) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "percentile": band.spec.percentiles,
            "level": band.levels,
            "level_ann": [vol_to_annual(v) for v in band.levels],
        }
    )


def write_band_csv(band: BandResult, path: Path) -> Path:
    return write_csv(path, band_frame(band))


def write_band_json(band: BandResult, path: Path) -> Path:
    return write_json(
        path,
        {
            "spec": band.spec.model_dump(mode="json"),
            "n_retained": band.n_retained,
            "percentiles": band.spec.percentiles,
            "levels": band.levels,
            "levels_ann": [vol_to_annual(v) for v in band.levels],
        },
    )


def chi_payload(approx: ChiApprox) -> dict:
    return {
        "dof": approx.dof,
        "scale": approx.scale,
        "mean": approx.mean(),
        "std": approx.std(),
        "median": approx.median(),
        "mean_ann": vol_to_annual(approx.mean()),
        "std_ann": vol_to_annual(approx.std()),
        "median_ann": vol_to_annual(approx.median()),
    }


def write_chi_json(approx: ChiApprox, path: Path, **extra) -> Path:
    return write_json(path, {**extra, **chi_payload(approx)})

