"""Rolling-window tail dependence pipeline over a return panel.

For each ticker pair: estimate the empirical tail dependence function per
window, project it onto the concave class, compute the measure set, and attach
the feasible sup-measure range implied by the window's coefficient.  Pair
results aggregate cross-sectionally per window date.  All outputs are
deterministic: rerunning the same configuration reproduces files byte for
byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import measures as meas
from .envelope import linf_range_given_tdc
from .errors import ConfigError, DataError
from .estimator import EstimatorConfig, rolling_estimate
from .measures import DOUBLED
from .panel import ReturnPanel, _quantile, _series_stats
from .tdf import TailDependenceFunction, least_concave_majorant

DEFAULT_MEASURES = ("tdc", "l1", "linf", "spearman_ev", "extremal_dep")
CROSS_STATS = ("mean", "median", "st_dev", "minimum", "maximum", "q05", "q95")
TABLE_STATS = ("Mean", "Median", "St. dev.", "Minimum", "Maximum", "5%-quantile", "95%-quantile")
_TABLE_KEY = dict(zip(TABLE_STATS, CROSS_STATS))


@dataclass(frozen=True)
class PipelineConfig:
    """Pair-level configuration: estimator knobs plus reporting conventions."""

    window: int = 500
    step: int = 1
    k: int | None = None
    grid_size: int = 200
    tail: str = "lower"
    project: bool = True
    normalization: str = DOUBLED

    def estimator(self) -> EstimatorConfig:
        return EstimatorConfig(k=self.k, grid_size=self.grid_size, tail=self.tail)


@dataclass(frozen=True)
class WindowRecord:
    """Measures for one estimation window."""

    start: int
    end_date: str
    values: dict[str, float]
    linf_bounds: tuple[float, float]
    tdf: TailDependenceFunction


@dataclass(frozen=True)
class PairReport:
    """All windows of one ticker pair."""

    base: str
    other: str
    measure_names: tuple[str, ...]
    records: tuple[WindowRecord, ...] = field(repr=False)
    skipped: tuple[int, ...]
    config: PipelineConfig

    @property
    def end_dates(self) -> tuple[str, ...]:
        return tuple(r.end_date for r in self.records)


def _measure_value(tdf: TailDependenceFunction, name: str, normalization: str) -> float:
    if name == "tdc":
        return meas.tdc(tdf).value
    if name == "l1":
        return meas.average_tail_dependence(tdf, normalization).value
    if name == "linf":
        return meas.max_tail_dependence(tdf, normalization).value
    if name == "spearman_ev":
        return meas.spearman_ev(tdf).value
    if name == "extremal_dep":
        return meas.extremal_dependence(tdf).value
    if name.startswith("lp:"):
        return meas.lp_norm(tdf, float(name.split(":", 1)[1]), normalization).value
    if name.startswith("point:"):
        return meas.point_eval(tdf, float(name.split(":", 1)[1])).value
    raise ConfigError(f"unknown measure {name!r}")


def run_pair(
    panel: ReturnPanel,
    base: str,
    other: str,
    config: PipelineConfig = PipelineConfig(),
    measure_names: tuple[str, ...] = DEFAULT_MEASURES,
) -> PairReport:
    """Rolling estimation and measurement for one pair of return series."""
    x = panel.column(base)
    y = panel.column(other)
    joint = np.isfinite(x) & np.isfinite(y)
    if int(joint.sum()) < config.window:
        raise DataError(
            f"pair ({base}, {other}) has {int(joint.sum())} joint observations; "
            f"window {config.window} needs at least that many"
        )
    rolling = rolling_estimate(x, y, config.window, config.step, config.estimator())
    records = []
    for start, raw_tdf in rolling:
        tdf = least_concave_majorant(raw_tdf) if config.project else raw_tdf
        values = {name: _measure_value(tdf, name, config.normalization) for name in measure_names}
        lam = meas.tdc(tdf).value
        bounds = linf_range_given_tdc(lam, config.normalization)
        records.append(
            WindowRecord(start, panel.dates[start + config.window - 1], values, bounds, tdf)
        )
    return PairReport(base, other, tuple(measure_names), tuple(records), rolling.skipped, config)


def cross_section(reports: list[PairReport]) -> dict:
    """Aggregate pair reports across pairs.

    Per window date and measure: cross-pair statistics (the per-date rows).
    Per measure: each pair's time-series statistic, aggregated across pairs
    (the summary table).  All reports must share identical window dates.
    """
    if not reports:
        raise DataError("no pair reports to aggregate")
    dates = reports[0].end_dates
    for rep in reports[1:]:
        if rep.end_dates != dates:
            raise DataError(
                f"pair ({rep.base}, {rep.other}) has mismatched window dates; "
                "cannot align the cross-section"
            )
    names = reports[0].measure_names
    per_date = {}
    table = {}
    for name in names:
        matrix = np.array([[r.values[name] for r in rep.records] for rep in reports])
        # matrix is pairs x windows.
        per_date[name] = [
            dict(zip(CROSS_STATS, _stat_row(matrix[:, t]))) for t in range(matrix.shape[1])
        ]
        table[name] = {}
        for label, key in _TABLE_KEY.items():
            series_stat = np.array([_series_stats(matrix[p])[key] for p in range(len(reports))])
            table[name][label] = {
                "5%": _quantile(series_stat, 0.05),
                "10%": _quantile(series_stat, 0.10),
                "Mean": float(np.mean(series_stat)),
                "Median": float(np.median(series_stat)),
                "90%": _quantile(series_stat, 0.90),
                "95%": _quantile(series_stat, 0.95),
            }
    return {"dates": list(dates), "per_date": per_date, "table": table}


def _stat_row(column: np.ndarray) -> tuple[float, ...]:
    stats = _series_stats(column)
    return tuple(stats[key] for key in CROSS_STATS)


# -- run directory -----------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def write_run(
    out_dir,
    reports: list[PairReport],
    cross: dict | None,
    manifest: dict,
    stats: dict | None = None,
) -> None:
    """Write a run directory: manifest.json, per-pair CSVs, cross-section files."""
    out = Path(out_dir)
    (out / "pairs").mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if stats is not None:
        with open(out / "stats.json", "w", encoding="utf-8") as fh:
            json.dump(stats, fh, indent=2, sort_keys=True)
            fh.write("\n")
    for rep in reports:
        path = out / "pairs" / f"{rep.base}_{rep.other}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            header = ["start", "end_date", *rep.measure_names, "linf_lo", "linf_hi"]
            fh.write(",".join(header) + "\n")
            for rec in rep.records:
                cells = [str(rec.start), rec.end_date]
                cells += [_fmt(rec.values[name]) for name in rep.measure_names]
                cells += [_fmt(rec.linf_bounds[0]), _fmt(rec.linf_bounds[1])]
                fh.write(",".join(cells) + "\n")
    if cross is not None:
        cs_dir = out / "cross_section"
        cs_dir.mkdir(parents=True, exist_ok=True)
        for name, rows in cross["per_date"].items():
            with open(cs_dir / f"{name}.csv", "w", encoding="utf-8", newline="") as fh:
                fh.write("end_date," + ",".join(CROSS_STATS) + "\n")
                for d, row in zip(cross["dates"], rows):
                    fh.write(d + "," + ",".join(_fmt(row[k]) for k in CROSS_STATS) + "\n")
        with open(cs_dir / "summary.json", "w", encoding="utf-8") as fh:
            json.dump(cross["table"], fh, indent=2, sort_keys=True)
            fh.write("\n")
