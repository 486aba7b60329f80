"""Command line front end.

Subcommands cover the individual stages (simulate, transform, generate,
evaluate) and the full harness (experiment, table).  `experiment` and `table`
accept `--config <json>` with ExperimentConfig field names; explicit flags
override the file.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from . import processes as proc
from .processes import ProcessSpec, Dataset, TimeSeries, load_dataset, save_dataset, simulate_dataset
from .wavelet import (
    WaveletConfig,
    Scalogram,
    cwt,
    icwt,
    normalize,
    denormalize,
    load_scalogram,
    save_scalogram,
)
from .patch_synth import SynthConfig, synthesize
from .metrics import FeatureSet, precision_recall
from .pipeline import (
    MODES,
    MODE_RESHUFFLE,
    ExperimentConfig,
    REPORT_COLUMNS,
    _report_row,
    run_experiment,
    run_table,
)


def _add_process_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--process", default="wiener", help="wiener | bridge | dbm")
    p.add_argument("--drift", type=float, default=2.0)
    p.add_argument("--volatility", type=float, default=1.0)
    p.add_argument("--terminal", type=float, default=0.0)
    p.add_argument("--horizon", type=float, default=1.0)


def _spec_from_args(args) -> ProcessSpec:
    return ProcessSpec(
        kind=proc.resolve_kind(args.process),
        drift=args.drift,
        volatility=args.volatility,
        terminal=args.terminal,
        horizon=args.horizon,
    )


def _add_synth_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--patch-size", type=int, default=None)
    p.add_argument("--stride", type=int, default=None)
    p.add_argument("--pyramid-ratio", type=float, default=None)
    p.add_argument("--min-width", type=int, default=None)
    p.add_argument("--num-projections", type=int, default=None)
    p.add_argument("--steps-per-level", type=int, default=None)
    p.add_argument("--noise-sigma", type=float, default=None)
    p.add_argument("--retarget-factor", type=float, default=None)


def _synth_from_args(args, base: dict | None = None) -> SynthConfig:
    vals = dict(base or {})
    for f in fields(SynthConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            vals[f.name] = flag
    return SynthConfig(**vals)


def _add_wavelet_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--omega0", type=float, default=None)
    p.add_argument("--ridge", type=float, default=None)


def _wavelet_from_args(args, base: dict | None = None) -> WaveletConfig:
    vals = dict(base or {})
    if "scales" in vals:
        vals["scales"] = tuple(vals["scales"])
    for name in ("omega0", "ridge"):
        flag = getattr(args, name, None)
        if flag is not None:
            vals[name] = flag
    return WaveletConfig(**vals)


def _cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    ds = simulate_dataset(spec, args.count, args.length, args.seed)
    save_dataset(args.out, ds, kind=spec.kind)
    print(f"wrote {args.count} x {args.length} {spec.kind} dataset to {args.out}")
    return 0


def _cmd_transform(args) -> int:
    wcfg = _wavelet_from_args(args)
    if args.op == "cwt":
        ds = load_dataset(args.infile)
        sc = cwt(ds.series[args.index], wcfg)
        if args.normalize:
            sc = normalize(sc)
        save_scalogram(args.out, sc)
        print(f"wrote {sc.coeffs.shape[0]}x{sc.coeffs.shape[1]} scalogram to {args.out}")
        return 0
    sc = load_scalogram(args.infile)
    if sc.norm is not None:
        sc = denormalize(sc)
    series = icwt(sc, sc.coeffs.shape[1], wcfg)
    dt = args.dt if args.dt is not None else 1.0
    ds = Dataset(series=[TimeSeries(values=series.values, dt=dt)], label="icwt", seed=0)
    save_dataset(args.out, ds, kind="icwt")
    print(f"wrote inverted series of length {len(series)} to {args.out}")
    return 0


def _cmd_generate(args) -> int:
    sc = load_scalogram(args.target)
    if sc.norm is None:
        sc = normalize(sc)
    scfg = _synth_from_args(args)
    out = synthesize(sc, scfg, args.seed)
    save_scalogram(args.out, out, extra=f"cfg={scfg.canonical()} seed={args.seed}")
    print(f"wrote synthesized {out.coeffs.shape[0]}x{out.coeffs.shape[1]} scalogram to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    real = load_dataset(args.real)
    fake = load_dataset(args.fake)
    report = precision_recall(
        FeatureSet(real.matrix(), label="real"),
        FeatureSet(fake.matrix(), label="fake"),
        k=args.k,
    )
    row = ",".join(
        [
            real.label or "na",
            str(len(real)),
            "na",
            repr(report.precision),
            repr(report.recall),
            str(report.k),
            str(report.m_real),
            str(report.m_fake),
            str(real.seed),
        ]
    )
    print(REPORT_COLUMNS)
    print(row)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(REPORT_COLUMNS + "\n" + row + "\n")
    return 0


def _load_config_file(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _experiment_config(args) -> ExperimentConfig:
    doc = _load_config_file(args.config) if args.config else {}
    pdoc = dict(doc.get("process", {}))
    if args.process is not None:
        pdoc["kind"] = proc.resolve_kind(args.process)
    elif "kind" in pdoc:
        pdoc["kind"] = proc.resolve_kind(pdoc["kind"])
    else:
        pdoc["kind"] = proc.WIENER
    for name in ("drift", "volatility", "terminal", "horizon"):
        flag = getattr(args, name)
        if flag is not None:
            pdoc[name] = flag
    spec = ProcessSpec(**pdoc)

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return doc.get(key, default)

    scale = pick(args.scale, "scale", 1.0)
    total = int(round(pick(args.total, "total_synthetic", 5000) * scale))
    gt_count = int(round(pick(args.gt_count, "ground_truth_count", 5000) * scale))
    return ExperimentConfig(
        process=spec,
        n_train=int(pick(args.n_train, "n_train", 5)),
        mode=pick(args.mode, "mode", MODE_RESHUFFLE),
        total_synthetic=max(1, total),
        ground_truth_count=max(1, gt_count),
        train_length=int(pick(args.length, "train_length", 256)),
        wavelet=_wavelet_from_args(args, doc.get("wavelet")),
        synth=_synth_from_args(args, doc.get("synth")),
        k=int(pick(args.k, "k", 3)),
        base_seed=int(pick(args.seed, "base_seed", 0)),
        out_dir=str(pick(args.out, "out_dir", "run")),
        gt_horizon=pick(args.gt_horizon, "gt_horizon", "extend"),
    )


def _cmd_experiment(args) -> int:
    cfg = _experiment_config(args)
    report, manifest = run_experiment(cfg)
    print(REPORT_COLUMNS)
    print(_report_row(report, cfg))
    print(f"artifacts in {cfg.out_dir} (status: {manifest.status})")
    return 0


def _cmd_table(args) -> int:
    doc = _load_config_file(args.config) if args.config else {}
    scale = args.scale if args.scale is not None else doc.get("scale", 1.0)
    total = int(round((args.total if args.total is not None else doc.get("total_synthetic", 5000)) * scale))
    gt_count = int(round((args.gt_count if args.gt_count is not None else doc.get("ground_truth_count", 5000)) * scale))
    specs = []
    for name in args.processes.split(","):
        specs.append(ProcessSpec(kind=proc.resolve_kind(name)))
    n_values = [int(x) for x in args.n_values.split(",")]
    results = run_table(
        specs,
        n_values,
        mode=args.mode if args.mode is not None else doc.get("mode", MODE_RESHUFFLE),
        out_dir=args.out if args.out is not None else doc.get("out_dir", "table"),
        base_seed=int(args.seed if args.seed is not None else doc.get("base_seed", 0)),
        total_synthetic=max(1, total),
        ground_truth_count=max(1, gt_count),
        k=int(args.k if args.k is not None else doc.get("k", 3)),
        wavelet=_wavelet_from_args(args, doc.get("wavelet")),
        synth=_synth_from_args(args, doc.get("synth")),
        gt_horizon=args.gt_horizon if args.gt_horizon is not None else doc.get("gt_horizon", "extend"),
    )
    print(REPORT_COLUMNS)
    for (kind, n), report in results.items():
        print(f"{kind},{n},{repr(report.precision)},{repr(report.recall)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scalogen", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a dataset of process paths")
    _add_process_args(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--length", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("transform", help="forward or inverse wavelet transform on files")
    p.add_argument("op", choices=("cwt", "icwt"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--index", type=int, default=0, help="series row for cwt input")
    p.add_argument("--normalize", action="store_true", help="store normalized coefficients")
    p.add_argument("--dt", type=float, default=None, help="sample spacing for icwt output")
    _add_wavelet_args(p)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("generate", help="synthesize one scalogram from a target scalogram")
    p.add_argument("--target", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_synth_args(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("evaluate", help="precision/recall between two dataset files")
    p.add_argument("--real", required=True)
    p.add_argument("--fake", required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("experiment", help="full run: simulate, synthesize, invert, evaluate")
    p.add_argument("--config", default=None, help="JSON file with ExperimentConfig fields")
    p.add_argument("--process", default=None)
    p.add_argument("--drift", type=float, default=None)
    p.add_argument("--volatility", type=float, default=None)
    p.add_argument("--terminal", type=float, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--n-train", type=int, default=None)
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--total", type=int, default=None, help="total synthetic series")
    p.add_argument("--gt-count", type=int, default=None, help="ground truth series")
    p.add_argument("--length", type=int, default=None, help="training series length")
    p.add_argument("--scale", type=float, default=None, help="shrink both budgets, e.g. 0.1")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--gt-horizon", choices=("extend", "same"), default=None)
    _add_wavelet_args(p)
    _add_synth_args(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("table", help="grid of experiments over processes and n values")
    p.add_argument("--config", default=None)
    p.add_argument("--processes", default="bridge,dbm,wiener")
    p.add_argument("--n-values", default="5,50,500")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--total", type=int, default=None)
    p.add_argument("--gt-count", type=int, default=None)
    p.add_argument("--scale", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--gt-horizon", choices=("extend", "same"), default=None)
    _add_wavelet_args(p)
    _add_synth_args(p)
    p.set_defaults(func=_cmd_table)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
