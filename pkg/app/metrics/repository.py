from pathlib import Path

import pandas as pd

from app.io import write_csv, write_json

from .schemas import ComparisonTable, MetricsReport


def write_report_json(rep: MetricsReport, path: Path) -> Path:
    return write_json(path, rep.model_dump(mode="json"))


def write_report_csv(rep: MetricsReport, path: Path) -> Path:
    return write_csv(path, pd.DataFrame([rep.model_dump(mode="json")]))


def write_comparison_csv(table: ComparisonTable, path: Path) -> Path:
    return write_csv(path, table.to_frame())


def write_comparison_json(table: ComparisonTable, path: Path) -> Path:
    return write_json(path, {name: rep.model_dump(mode="json") for name, rep in table.columns.items()})
