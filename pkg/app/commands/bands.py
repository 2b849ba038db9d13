from functools import partial

import click

from app import config as C
from app.io import write_csv
from app.uncertainty import repository as unc_repo
from app.uncertainty import service as uncertainty
from app.uncertainty.schemas import McBandSpec
from app.units import vol_to_annual, vol_to_period

from .dependencies import manifest_for, out_option, parse_float_list, translate_errors
from .manifest import emit


@click.command("bands")
@click.option("--target-vol", type=float, default=C.DEFAULT_TARGET_VOL_ANN, show_default=True, help="Annualized true volatility.")
@click.option("--halflife", type=float, default=C.DEFAULT_HALFLIFE, show_default=True)
@click.option("--n-samples", type=int, default=10_000, show_default=True, help="Path length N.")
@click.option("--burn-in", type=int, default=C.DEFAULT_BURN_IN, show_default=True)
@click.option("--n-paths", type=int, default=1, show_default=True, help="Independent paths pooled together.")
@click.option("--percentiles", default="10,90", show_default=True)
@click.option("--hist-bins", type=int, default=50, show_default=True)
@click.option("--std-curve", default=None, help="Comma list of halflives for the std-vs-halflife curve.")
@click.option("--sma-window", type=int, default=None, help="Also write the exact SMA chi parameters for this window.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n-jobs", type=int, default=None, help="Parallel path partitions (default: VOLTARGET_N_JOBS).")
@out_option
@translate_errors
def cmd_bands(**params):
    """Monte Carlo percentile band and chi approximation for the EWMA estimate."""
    sigma = vol_to_period(params["target_vol"])
    spec = McBandSpec(
        sigma_true=sigma,
        n_samples=params["n_samples"],
        burn_in=params["burn_in"],
        halflife=params["halflife"],
        percentiles=parse_float_list(params["percentiles"], name="--percentiles"),
        seed=params["seed"],
        n_paths=params["n_paths"],
    )
    estimates = uncertainty.mc_estimates(spec, n_jobs=params["n_jobs"])
    band = uncertainty.band_from_estimates(spec, estimates)
    approx = uncertainty.ewma_distribution(sigma, spec.halflife)
    approx_levels = [float(approx.ppf(p / 100.0)) for p in spec.percentiles]

    writers = {
        "band.csv": partial(unc_repo.write_band_csv, band),
        "band.json": partial(unc_repo.write_band_json, band),
        "chi_approx.json": partial(
            unc_repo.write_chi_json, approx,
            sigma_true=sigma, halflife=spec.halflife,
            percentiles=spec.percentiles, levels=approx_levels,
        ),
        "histogram.csv": partial(write_csv, frame=uncertainty.histogram(estimates, approx, params["hist_bins"])),
    }
    halflives = parse_float_list(params["std_curve"], name="--std-curve")
    if halflives:
        writers["std_curve.csv"] = partial(write_csv, frame=uncertainty.std_curve(sigma, halflives))
    if params["sma_window"] is not None:
        sma = uncertainty.sma_distribution(sigma, params["sma_window"])
        writers["sma_approx.json"] = partial(unc_repo.write_chi_json, sma, sigma_true=sigma, window=params["sma_window"])

    emit(params["out"], writers, manifest_for("bands", params))
    click.echo(
        "band: " + ", ".join(f"p{p:g}={vol_to_annual(v):.4%}" for p, v in zip(spec.percentiles, band.levels))
    )
