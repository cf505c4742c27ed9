"""Synthetic benchmark: both denoisers, SCI aggregation, figure data."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import numpy as np

from .config import BenchConfig, dump_config
from .denoise import denoise_notch, denoise_wavelet
from .metrics import sci_freq, sci_time
from .signal import Signal, StructuralError, amplitude_spectrum, make_rng, write_signal_csv
from .synthesis import mix_at_sir, synth_egm, synth_pli

METHODS = ("wavelet", "notch")
DOMAINS = ("time", "frequency")
METHOD_LABELS = {"wavelet": "DWT-based", "notch": "Notch filtering"}
DOMAIN_LABELS = {"time": "Time", "frequency": "Frequency"}

# Reference SCI (%) mean and std per cell, printed next to each run for comparison.
REFERENCE_SCI = {
    ("wavelet", "time"): {25: (94.1, 1.6), 20: (93.6, 1.6), 15: (92.4, 1.6), 10: (89.6, 1.7), 5: (85.9, 2.5)},
    ("wavelet", "frequency"): {25: (99.5, 0.3), 20: (99.4, 0.3), 15: (99.3, 0.4), 10: (99.1, 0.4), 5: (98.5, 0.5)},
    ("notch", "time"): {25: (79.0, 4.1), 20: (78.9, 4.1), 15: (78.9, 4.1), 10: (78.8, 4.0), 5: (78.3, 4.1)},
    ("notch", "frequency"): {25: (96.4, 0.6), 20: (96.4, 0.6), 15: (96.4, 0.6), 10: (96.3, 0.6), 5: (96.3, 0.6)},
}

RECORD_STREAM, PLI_STREAM = 0, 1


class RecordNotFound(LookupError):
    pass


@dataclass(frozen=True)
class Cell:
    mean: float
    std: float
    n: int


@dataclass
class SciReport:
    """Per-(method, domain, SIR) statistics of ``match_percent`` plus raw rows.

    ``rows`` holds one dict per (record, SIR, method, domain).
    """

    cells: dict[tuple[str, str, float], Cell] = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)
    sir_levels: tuple[float, ...] = ()
    n_records: int = 0

    def cell(self, method: str, domain: str, sir: float) -> Cell:
        return self.cells[(method, domain, float(sir))]

    def means(self, method: str, domain: str) -> list[float]:
        return [self.cell(method, domain, s).mean for s in self.sir_levels]

    def row_keys(self) -> list[tuple[str, str]]:
        """(method, domain) pairs present, in canonical order."""
        present = {(m, d) for m, d, _ in self.cells}
        ordered = [(m, d) for m in METHODS for d in DOMAINS if (m, d) in present]
        return ordered + sorted(present - set(ordered))

    def check_complete(self) -> None:
        """Every present (method, domain) row must have every SIR level."""
        if not self.cells or not self.sir_levels:
            raise StructuralError("report is empty")
        for m, d in self.row_keys():
            for s in self.sir_levels:
                if (m, d, float(s)) not in self.cells:
                    raise StructuralError(f"report is missing cell {(m, d, s)}")


def record_streams(cfg: BenchConfig, record_id: int, sir_index: int = 0) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Seed-sequence spawn keys of the clean record and its interference."""
    base = (record_id, sir_index) if cfg.records_per_sir else (record_id,)
    return base + (RECORD_STREAM,), base + (PLI_STREAM,)


def record_signals(cfg: BenchConfig, record_id: int, sir_index: int = 0) -> tuple[Signal, Signal]:
    """Clean record and unscaled interference for ``record_id``."""
    if not 0 <= record_id < cfg.n_records:
        raise RecordNotFound(f"record {record_id} not in 0..{cfg.n_records - 1}")
    fs = cfg.sample_rate
    clean_key, pli_key = record_streams(cfg, record_id, sir_index)
    clean = synth_egm(cfg.egm, fs, make_rng(cfg.master_seed, *clean_key))
    pli = synth_pli(cfg.pli, cfg.egm.duration_s, fs, make_rng(cfg.master_seed, *pli_key))
    return clean, pli


def process_record(cfg: BenchConfig, record_id: int) -> list[dict]:
    """All SIR levels, both methods and both domains for one record."""
    rows = []
    shared = None if cfg.records_per_sir else record_signals(cfg, record_id)
    for k, sir in enumerate(cfg.sir_levels_db):
        clean, pli = shared or record_signals(cfg, record_id, k)
        noisy, _ = mix_at_sir(clean, pli, sir)
        outputs = {"wavelet": denoise_wavelet(noisy, cfg.denoise), "notch": denoise_notch(noisy, cfg.denoise)}
        for method in METHODS:
            for domain, fn in (("time", sci_time), ("frequency", sci_freq)):
                res = fn(clean, outputs[method], cfg.sci)
                rows.append(
                    {
                        "record_id": record_id,
                        "sir_db": float(sir),
                        "method": method,
                        "domain": domain,
                        "raw": res.raw,
                        "match_percent": res.match_percent,
                        "xi_used": res.xi_used,
                        "n_samples": res.n_samples,
                    }
                )
    return rows


def _process_safe(args):
    cfg, record_id = args
    try:
        return process_record(cfg, record_id)
    except Exception as exc:
        raise RuntimeError(f"record {record_id}: {exc}") from exc


def aggregate(rows: list[dict], sir_levels, n_records: int) -> SciReport:
    report = SciReport(rows=rows, sir_levels=tuple(float(s) for s in sir_levels), n_records=n_records)
    for method in METHODS:
        for domain in DOMAINS:
            for sir in report.sir_levels:
                vals = np.array(
                    [
                        r["match_percent"]
                        for r in rows
                        if r["method"] == method and r["domain"] == domain and r["sir_db"] == sir
                    ]
                )
                std = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
                report.cells[(method, domain, sir)] = Cell(float(np.mean(vals)), std, int(vals.size))
    return report


def run_benchmark(cfg: BenchConfig, persist: bool = True) -> SciReport:
    """Every record at every SIR through both methods; rows ordered by record."""
    jobs = [(cfg, r) for r in range(cfg.n_records)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            per_record = list(pool.map(_process_safe, jobs))
    else:
        per_record = [_process_safe(job) for job in jobs]
    rows = [row for chunk in per_record for row in chunk]
    report = aggregate(rows, cfg.sir_levels_db, cfg.n_records)
    if persist:
        write_report(report, cfg)
    return report


# -- output ------------------------------------------------------------------

def _round1(x: float) -> str:
    return str(Decimal(repr(float(x))).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def _sir_label(s: float) -> str:
    if math.isinf(s):
        return "inf"
    return str(int(s)) if float(s).is_integer() else repr(s)


def _ordered_sirs(report: SciReport) -> list[float]:
    return sorted(report.sir_levels, reverse=True)


def render_table(report: SciReport, fmt: str = "markdown") -> str:
    """Table of ``mean ± std`` per cell, SIR columns in descending order."""
    report.check_complete()
    sirs = _ordered_sirs(report)
    if fmt == "markdown":
        head = "| Method | SCI (%) | " + " | ".join(_sir_label(s) for s in sirs) + " |"
        sep = "|" + "---|" * (len(sirs) + 2)
        lines = [f"SIR (dB) columns; n = {report.n_records} records", "", head, sep]
        for m, d in report.row_keys():
            cells = [report.cell(m, d, s) for s in sirs]
            body = " | ".join(f"{_round1(c.mean)} ± {_round1(c.std)}" for c in cells)
            lines.append(f"| {METHOD_LABELS.get(m, m)} | {DOMAIN_LABELS.get(d, d)} | {body} |")
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["method", "domain", "sir_db", "mean", "std", "n"])
        for m, d in report.row_keys():
            for s in sirs:
                c = report.cell(m, d, s)
                w.writerow([m, d, _sir_label(s), _round1(c.mean), _round1(c.std), c.n])
        return buf.getvalue()
    raise ValueError(f"unknown table format {fmt!r}")


def parse_table_csv(text: str) -> dict[tuple[str, str, float], tuple[float, float, int]]:
    out = {}
    for row in csv.DictReader(io.StringIO(text)):
        key = (row["method"], row["domain"], float(row["sir_db"]))
        out[key] = (float(row["mean"]), float(row["std"]), int(row["n"]))
    return out


def render_comparison(report: SciReport) -> str:
    """Wavelet-minus-notch gaps next to the reference gaps."""
    lines = ["| Domain | SIR (dB) | gap (this run) | gap (reference) |", "|---|---|---|---|"]
    for d in DOMAINS:
        for s in _ordered_sirs(report):
            gap = report.cell("wavelet", d, s).mean - report.cell("notch", d, s).mean
            pub = REFERENCE_SCI[("wavelet", d)].get(s), REFERENCE_SCI[("notch", d)].get(s)
            pub_gap = _round1(pub[0][0] - pub[1][0]) if None not in pub else "-"
            lines.append(f"| {DOMAIN_LABELS[d]} | {_sir_label(s)} | {_round1(gap)} | {pub_gap} |")
    return "\n".join(lines) + "\n"


ROW_FIELDS = ("record_id", "sir_db", "method", "domain", "raw", "match_percent", "xi_used", "n_samples")


def render_rows(report: SciReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_FIELDS)
    for r in report.rows:
        w.writerow(
            [
                r["record_id"],
                _sir_label(r["sir_db"]),
                r["method"],
                r["domain"],
                repr(float(r["raw"])),
                repr(float(r["match_percent"])),
                repr(float(r["xi_used"])),
                r["n_samples"],
            ]
        )
    return buf.getvalue()


def report_json(report: SciReport) -> str:
    cells = [
        {"method": m, "domain": d, "sir_db": _sir_label(s), "mean": c.mean, "std": c.std, "n": c.n}
        for (m, d, s), c in sorted(report.cells.items(), key=lambda kv: (kv[0][0], kv[0][1], -kv[0][2]))
    ]
    return json.dumps({"n_records": report.n_records, "cells": cells}, indent=2, sort_keys=True) + "\n"


def write_report(report: SciReport, cfg: BenchConfig) -> dict[str, Path]:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "records": out / "records.csv",
        "table_md": out / "table.md",
        "table_csv": out / "table.csv",
        "summary": out / "summary.json",
        "config": out / "config.ini",
    }
    files["records"].write_text(render_rows(report))
    files["table_md"].write_text(render_table(report, "markdown") + "\n" + render_comparison(report))
    files["table_csv"].write_text(render_table(report, "csv"))
    files["summary"].write_text(report_json(report))
    files["config"].write_text(dump_config(cfg))
    return files


# -- figure data -------------------------------------------------------------

def _sir_index(cfg: BenchConfig, sir_db: float) -> int:
    if not cfg.records_per_sir:
        return 0
    try:
        return list(cfg.sir_levels_db).index(float(sir_db))
    except ValueError:
        raise RecordNotFound(f"SIR {sir_db} is not a configured level") from None


def figure_signals(record_id: int, sir_db: float, cfg: BenchConfig) -> dict[str, Signal]:
    clean, pli = record_signals(cfg, record_id, _sir_index(cfg, sir_db))
    noisy, _ = mix_at_sir(clean, pli, sir_db)
    return {
        "clean": clean,
        "noisy": noisy,
        "notch": denoise_notch(noisy, cfg.denoise),
        "wavelet": denoise_wavelet(noisy, cfg.denoise),
    }


def emit_figure_data(record_id: int, sir_db: float, cfg: BenchConfig, out_dir: str | Path, svg: bool = False) -> dict[str, Path]:
    """Time series and amplitude spectra of one record, as CSV (and SVG)."""
    sigs = figure_signals(record_id, sir_db, cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"record{record_id:03d}_sir{_sir_label(sir_db)}"
    names = list(sigs)
    t = sigs["clean"].time
    spectra = {k: amplitude_spectrum(v) for k, v in sigs.items()}
    freqs = spectra["clean"].frequencies

    files = {"time": out / f"{stem}_time.csv", "spectrum": out / f"{stem}_spectrum.csv"}
    with files["time"].open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time_s"] + names)
        for i in range(t.size):
            w.writerow([f"{t[i]:.17g}"] + [f"{sigs[k].samples[i]:.17g}" for k in names])
    with files["spectrum"].open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq_hz"] + names)
        for i in range(freqs.size):
            w.writerow([f"{freqs[i]:.17g}"] + [f"{spectra[k].magnitudes[i]:.17g}" for k in names])
    if svg:
        from .plotting import line_plot_svg

        window = slice(0, min(t.size, int(round(1.0 * sigs["clean"].sample_rate))))
        files["time_svg"] = out / f"{stem}_time.svg"
        files["time_svg"].write_text(
            line_plot_svg(t[window], {k: sigs[k].samples[window] for k in names}, "time (s)", "amplitude")
        )
        band = freqs <= 300
        files["spectrum_svg"] = out / f"{stem}_spectrum.svg"
        files["spectrum_svg"].write_text(
            line_plot_svg(freqs[band], {k: spectra[k].magnitudes[band] for k in names}, "frequency (Hz)", "amplitude")
        )
    return files


def read_figure_csv(path: str | Path) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    with Path(path).open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in row] for row in reader])
    return data[:, 0], {name: data[:, i + 1] for i, name in enumerate(header[1:])}
