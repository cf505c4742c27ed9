"""Command-line front end.

Exit codes: 0 success, 2 configuration or parameter error, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from pathlib import Path

from . import bench
from .config import BenchConfig, ConfigError, dump_config, load_config
from .denoise import METHODS
from .metrics import sci_freq, sci_time
from .notch import design_notch, format_filter
from .signal import DataError, ParameterError, StructuralError, amplitude_spectrum, read_signal_csv, write_signal_csv
from .synthesis import mix_at_sir
from .wavelet import format_bank, get_bank

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


def _config(args) -> BenchConfig:
    cfg = load_config(getattr(args, "config", None), getattr(args, "seed", None))
    overrides = {}
    if getattr(args, "records", None) is not None:
        overrides["n_records"] = args.records
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    if getattr(args, "output_dir", None) is not None:
        overrides["output_dir"] = str(args.output_dir)
    try:
        return dataclasses.replace(cfg, **overrides)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc


def _write_spectrum(path: Path, named: dict) -> None:
    spectra = {k: amplitude_spectrum(v) for k, v in named.items()}
    freqs = next(iter(spectra.values())).frequencies
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["freq_hz"] + list(spectra))
        for i, f in enumerate(freqs):
            w.writerow([f"{f:.17g}"] + [f"{s.magnitudes[i]:.17g}" for s in spectra.values()])


def cmd_synth(args) -> int:
    cfg = _config(args)
    out = Path(args.output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for r in range(cfg.n_records):
        shared = None if cfg.records_per_sir else bench.record_signals(cfg, r)
        clean_path = pli_path = None
        for k, sir in enumerate(cfg.sir_levels_db):
            clean, pli = shared or bench.record_signals(cfg, r, k)
            tag = f"record{r:03d}" + (f"_sir{bench._sir_label(sir)}" if cfg.records_per_sir else "")
            if clean_path is None or cfg.records_per_sir:
                clean_path, pli_path = out / f"{tag}_clean.csv", out / f"{tag}_pli.csv"
                write_signal_csv(clean, clean_path)
                write_signal_csv(pli, pli_path)
            noisy, scaled = mix_at_sir(clean, pli, sir)
            noisy_path = out / f"record{r:03d}_sir{bench._sir_label(sir)}_noisy.csv"
            write_signal_csv(noisy, noisy_path)
            clean_key, pli_key = bench.record_streams(cfg, r, k)
            rows.append(
                [
                    r,
                    cfg.master_seed,
                    "/".join(map(str, clean_key)),
                    "/".join(map(str, pli_key)),
                    bench._sir_label(sir),
                    clean_path.name,
                    pli_path.name,
                    noisy_path.name,
                ]
            )
    with (out / "manifest.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["record_id", "seed", "clean_stream", "pli_stream", "sir_db", "clean", "pli", "noisy"])
        w.writerows(rows)
    (out / "config.ini").write_text(dump_config(cfg))
    print(f"wrote {len(rows)} mixtures to {out}")
    return EXIT_OK


def cmd_denoise(args) -> int:
    cfg = _config(args)
    noisy = read_signal_csv(args.input, args.sample_rate)
    out = METHODS[args.method](noisy, cfg.denoise)
    write_signal_csv(out, args.output)
    if args.emit_spectra:
        stem = Path(args.output).with_suffix("")
        _write_spectrum(Path(f"{stem}_spectra.csv"), {"input": noisy, "output": out})
    return EXIT_OK


def cmd_sci(args) -> int:
    cfg = _config(args)
    ref = read_signal_csv(args.reference, args.sample_rate)
    test = read_signal_csv(args.test, args.sample_rate)
    if len(ref) != len(test) or ref.sample_rate != test.sample_rate:
        raise DataError("reference and test differ in length or sample rate")
    domains = ("time", "frequency") if args.domain == "both" else (args.domain,)
    for d in domains:
        res = (sci_time if d == "time" else sci_freq)(ref, test, cfg.sci)
        print(json.dumps(res.as_dict(d), sort_keys=True))
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _config(args)
    t0 = time.perf_counter()
    report = bench.run_benchmark(cfg)
    print(bench.render_table(report, "markdown"))
    print(bench.render_comparison(report))
    print(f"{cfg.n_records} records x {len(cfg.sir_levels_db)} SIR levels in {time.perf_counter() - t0:.1f} s; output in {cfg.output_dir}")
    return EXIT_OK


def cmd_figure(args) -> int:
    cfg = _config(args)
    files = bench.emit_figure_data(args.record, args.sir, cfg, args.output_dir or cfg.output_dir, svg=args.svg)
    for path in files.values():
        print(path)
    return EXIT_OK


def cmd_inspect_filter(args) -> int:
    cfg = _config(args)
    fs = args.sample_rate or cfg.sample_rate
    center = args.center if args.center is not None else cfg.denoise.notch_center_hz
    bw = args.bandwidth if args.bandwidth is not None else cfg.denoise.notch_bw_hz
    print(format_filter(design_notch(center, bw, fs)))
    return EXIT_OK


def cmd_inspect_wavelet(args) -> int:
    print(format_bank(get_bank(args.family)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value config file with [sections]")
    common.add_argument("--seed", type=int, help="override master_seed")

    p = argparse.ArgumentParser(prog="egmpli", description="Powerline interference removal for electrograms.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset and manifest")
    s.add_argument("-o", "--output-dir", type=Path)
    s.add_argument("--records", type=int)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("denoise", parents=[common], help="denoise one signal CSV")
    s.add_argument("input", type=Path)
    s.add_argument("-o", "--output", type=Path, required=True)
    s.add_argument("--method", choices=sorted(METHODS), default="wavelet")
    s.add_argument("--sample-rate", type=float, help="used when the CSV has no sample_rate header")
    s.add_argument("--emit-spectra", action="store_true", help="also write input/output amplitude spectra")
    s.set_defaults(func=cmd_denoise)

    s = sub.add_parser("sci", parents=[common], help="SCI between a reference and a test signal")
    s.add_argument("reference", type=Path)
    s.add_argument("test", type=Path)
    s.add_argument("--domain", choices=("time", "frequency", "both"), default="both")
    s.add_argument("--sample-rate", type=float)
    s.set_defaults(func=cmd_sci)

    s = sub.add_parser("bench", parents=[common], help="full benchmark and SCI table")
    s.add_argument("-o", "--output-dir", type=Path)
    s.add_argument("--records", type=int)
    s.add_argument("--workers", type=int)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("figure", parents=[common], help="time series and spectra of one record")
    s.add_argument("--record", type=int, default=0)
    s.add_argument("--sir", type=float, default=10.0)
    s.add_argument("-o", "--output-dir", type=Path)
    s.add_argument("--svg", action="store_true")
    s.set_defaults(func=cmd_figure)

    s = sub.add_parser("inspect-filter", parents=[common], help="print notch coefficients")
    s.add_argument("--center", type=float)
    s.add_argument("--bandwidth", type=float)
    s.add_argument("--sample-rate", type=float)
    s.set_defaults(func=cmd_inspect_filter)

    s = sub.add_parser("inspect-wavelet", help="print filter bank taps and checks")
    s.add_argument("--family", default="coif2")
    s.set_defaults(func=cmd_inspect_wavelet)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParameterError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, bench.RecordNotFound, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
