from functools import partial
from pathlib import Path

import click
import pandas as pd

from app import config as C
from app.cohort import service as cohort
from app.cohort.schemas import COHORT_METRICS, CohortSpec
from app.io import write_csv
from app.series import service as series

from .dependencies import (
    Params,
    build_config,
    csv_column_options,
    load_riskfree,
    manifest_for,
    out_option,
    policy_options,
    riskfree_options,
    translate_errors,
)
from .manifest import emit
from .synth import parse_synth


def _add(assets: dict, label: str, s) -> None:
    if label in assets:
        raise click.UsageError(f"duplicate asset label {label!r}")
    assets[label] = s


def _load_assets(params: Params) -> dict:
    assets = {}
    for path in params["asset"]:
        s = series.load_csv(path, params["date_column"], params["risky_column"], params["risky_kind"])
        _add(assets, Path(path).stem, s)
    for i, text in enumerate(params["synth_asset"]):
        s = series.generate(parse_synth(text, default_seed=params["seed"] + i))
        _add(assets, s.label, s)
    if not assets:
        raise click.UsageError("give at least one --asset or --synth-asset")
    return assets


@click.command("cohort")
@click.option("--asset", multiple=True, type=click.Path(dir_okay=False), help="Asset CSV (repeatable); label is the file stem.")
@click.option("--synth-asset", multiple=True, help="Inline synthetic asset (repeatable).")
@riskfree_options
@csv_column_options
@click.option("--seed", type=int, default=0, show_default=True, help="Base seed for synthetic assets without one.")
@policy_options
@click.option("--start", default=None, help="First date of the evaluation window (YYYY-MM-DD).")
@click.option("--end", default=None, help="Last date of the evaluation window (YYYY-MM-DD).")
@click.option("--min-ann-return", type=float, default=C.DEFAULT_MIN_ANN_RETURN, show_default=True, help="Drop assets whose annualized return over the window does not exceed this.")
@click.option("--no-return-filter", is_flag=True, help="Keep every asset.")
@click.option("--hist-bins", type=int, default=20, show_default=True)
@click.option("--n-jobs", type=int, default=None)
@out_option
@translate_errors
def cmd_cohort(**params):
    """Run both methods over many assets with one parameter set."""
    assets = _load_assets(params)
    union = pd.DatetimeIndex(sorted(set().union(*(a.timestamps for a in assets.values()))))
    riskfree = load_riskfree(params, union)
    spec = CohortSpec(
        base=build_config(params, mode="control"),
        start=params["start"],
        end=params["end"],
        min_ann_return=None if params["no_return_filter"] else params["min_ann_return"],
    )
    result = cohort.run_cohort(assets, riskfree, spec, n_jobs=params["n_jobs"])

    writers = {"cohort_long.csv": partial(write_csv, frame=result.to_long_frame())}
    for metric in COHORT_METRICS:
        frame = cohort.cohort_histogram(result, metric, params["hist_bins"])
        writers[f"cohort_hist_{metric}.csv"] = partial(write_csv, frame=frame)
    emit(params["out"], writers, manifest_for("cohort", params))
    click.echo(f"cohort: {len(assets) - len(result.dropped)} assets evaluated, dropped {result.dropped or 'none'}")
