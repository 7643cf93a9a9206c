# genericity/services/plots.py
from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

from genericity.core.config import LOG_LEVEL
from genericity.core.errors import CacheIOError, InvalidInputError
from genericity.schemas.reports import CountReport

logger = logging.getLogger("genericity.cli")
logger.setLevel(LOG_LEVEL)


def emit_plot_data(report: CountReport, directory: str | Path) -> list[Path]:
    """Write fraction_vs_L.csv and loglog_counts.csv for external plotting."""
    if not report.complete:
        raise InvalidInputError("plot data needs a complete report")
    directory = Path(directory)
    fraction_path = directory / "fraction_vs_L.csv"
    loglog_path = directory / "loglog_counts.csv"
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with open(fraction_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["L", "fraction"])
            for row in report.rows:
                if not 0.0 <= row.fraction <= 1.0:
                    raise InvalidInputError(f"fraction {row.fraction} at L={row.L} outside [0, 1]")
                writer.writerow([row.L, repr(row.fraction)])
        with open(loglog_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["log_L", "log_total", "log_nonpa"])
            for row in report.rows:
                writer.writerow([
                    repr(math.log(row.L)),
                    repr(math.log(row.total)) if row.total else "",
                    repr(math.log(row.nonpa)) if row.nonpa else "",
                ])
    except OSError as exc:
        raise CacheIOError(f"cannot write plot data to {directory}: {exc}")
    logger.info(f"Wrote plot data for {len(report.rows)} rows to {directory}")
    return [fraction_path, loglog_path]
