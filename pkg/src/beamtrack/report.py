"""CSV and JSON export of episode traces and aggregate metrics (angles in degrees)."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from beamtrack.sim import AggregateMetrics, EpisodeTrace

TRACE_HEADER = ["k", "phi_true_deg", "phi_hat_deg", "e_k_deg", "m_k", "snr_db", "abs_err_deg"]
AGGREGATE_HEADER = ["k", "rmse_deg_adaptive", "rmse_deg_fixed", "mean_m", "mean_snr_db"]


def _f(x: float) -> str:
    return f"{x:.6f}"


def _db(x):
    with np.errstate(divide="ignore"):
        return 10 * np.log10(x)


def trace_rows(trace: EpisodeTrace):
    cols = zip(
        trace.k,
        np.degrees(trace.phi_true),
        np.degrees(trace.phi_hat),
        np.degrees(trace.e_k),
        trace.m_k,
        _db(trace.snr),
        np.degrees(trace.abs_err),
    )
    for k, phi, phi_hat, e, m, snr_db, err in cols:
        yield [str(k), _f(phi), _f(phi_hat), _f(e), str(m), _f(snr_db), _f(err)]


def write_trace_csv(path, trace: EpisodeTrace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        writer.writerows(trace_rows(trace))


def aggregate_rows(adaptive: AggregateMetrics, fixed: AggregateMetrics):
    """Rows pairing both modes' RMSE; mean active count and SNR are from the adaptive run."""
    rmse_a = np.degrees(adaptive.rmse_per_step)
    rmse_f = np.degrees(fixed.rmse_per_step)
    snr_db = _db(adaptive.mean_snr_per_step)
    for k in range(len(rmse_a)):
        yield [str(k + 1), _f(rmse_a[k]), _f(rmse_f[k]), _f(adaptive.mean_m_per_step[k]), _f(snr_db[k])]


def write_aggregate_csv(path, adaptive: AggregateMetrics, fixed: AggregateMetrics) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGGREGATE_HEADER)
        writer.writerows(aggregate_rows(adaptive, fixed))


def read_csv(path) -> dict[str, np.ndarray]:
    """Column-wise float arrays from an exported CSV."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader], dtype=float)
    return {name: data[:, i] for i, name in enumerate(header)}


def _jsonable(x: float):
    # JSON has no infinities
    return None if not math.isfinite(x) else round(float(x), 6)


def trace_dict(trace: EpisodeTrace) -> dict:
    return {
        name: [(_jsonable(float(v)) if name not in ("k", "m_k") else int(v)) for v in col]
        for name, col in zip(
            TRACE_HEADER,
            (
                trace.k,
                np.degrees(trace.phi_true),
                np.degrees(trace.phi_hat),
                np.degrees(trace.e_k),
                trace.m_k,
                _db(trace.snr),
                np.degrees(trace.abs_err),
            ),
        )
    }


def metrics_dict(agg: AggregateMetrics) -> dict:
    return {
        "rmse_deg_per_step": [_jsonable(v) for v in np.degrees(agg.rmse_per_step)],
        "mean_m_per_step": [_jsonable(v) for v in agg.mean_m_per_step],
        "mean_snr_db_per_step": [_jsonable(v) for v in _db(agg.mean_snr_per_step)],
        "time_avg_rmse_deg": _jsonable(math.degrees(agg.mean_rmse)),
        "pearson_e_vs_abs_err": _jsonable(agg.pearson_e_vs_abs_err),
    }


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
