from functools import partial

import click

from app.backtest import repository as bt_repo
from app.backtest import service as backtest
from app.metrics import repository as metrics_repo
from app.metrics import service as metrics

from .dependencies import (
    MODES,
    build_config,
    data_options,
    manifest_for,
    out_option,
    policy_options,
    resolve_data,
    translate_errors,
)
from .manifest import emit


@click.command("backtest")
@click.option("--mode", type=click.Choice(MODES), required=True)
@data_options
@policy_options
@click.option("--te-window", type=click.IntRange(min=0), default=None, help="First row of the tracking-error window (default: first post-warmup row).")
@out_option
@translate_errors
def cmd_backtest(**params):
    """Run one index backtest and write trajectory, metrics and manifest."""
    risky, riskfree = resolve_data(params)
    cfg = build_config(params, mode=params["mode"])
    result = backtest.run(risky, riskfree, cfg)
    rep = metrics.report(result, riskfree, cfg.target.sigma_tar, window_start=params["te_window"])

    emit(
        params["out"],
        {
            "trajectory.csv": partial(bt_repo.write_trajectory_csv, result),
            "trajectory.json": partial(bt_repo.write_result_json, result),
            "metrics.json": partial(metrics_repo.write_report_json, rep),
            "metrics.csv": partial(metrics_repo.write_report_csv, rep),
        },
        manifest_for("backtest", params),
    )
    click.echo(
        f"{cfg.mode}: tracking error {rep.tracking_error_mae:.4%}, "
        f"ann vol {rep.ann_vol:.2%}, turnover {rep.turnover:.2f}"
    )
