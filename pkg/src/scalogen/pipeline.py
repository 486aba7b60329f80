"""End-to-end experiment harness: simulate, transform, synthesize, evaluate.

The seed tree hangs everything off one base seed: ground truth uses
mix_seed(base, 0), the training set mix_seed(base, 1), and the synthesis job
for training series i, replicate j uses mix_seed(base, 2, i, j).  Randomness
is therefore pre-assigned per job and results cannot depend on batching or
scheduling order.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace, asdict
from pathlib import Path

import numpy as np

from .seeding import mix_seed
from .processes import Dataset, ProcessSpec, TimeSeries, save_dataset, simulate_dataset
from .wavelet import WaveletConfig, cwt_batch, icwt_batch, normalize, Scalogram
from .patch_synth import SynthConfig, synthesize_batch
from .metrics import EvalReport, FeatureSet, precision_recall

MODE_RESHUFFLE = "reshuffle"
MODE_RETARGET = "retarget2x"
MODES = (MODE_RESHUFFLE, MODE_RETARGET)

REPORT_COLUMNS = "process,n_train,mode,precision,recall,k,m_real,m_fake,seed"


@dataclass
class ExperimentConfig:
    process: ProcessSpec
    n_train: int
    mode: str = MODE_RESHUFFLE
    total_synthetic: int = 5000
    ground_truth_count: int = 5000
    train_length: int = 256
    wavelet: WaveletConfig = field(default_factory=WaveletConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    k: int = 3
    base_seed: int = 0
    out_dir: str = "run"
    gt_horizon: str = "extend"  # "extend": keep dt, lengthen T; "same": keep T, refine dt

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.gt_horizon not in ("extend", "same"):
            raise ValueError("gt_horizon must be 'extend' or 'same'")
        if self.n_train < 1 or self.total_synthetic < 1 or self.ground_truth_count < 1:
            raise ValueError("counts must be positive")
        if self.train_length < 2:
            raise ValueError("train_length must be >= 2")
        factor = 2.0 if self.mode == MODE_RETARGET else 1.0
        if self.synth.retarget_factor != factor:
            self.synth = replace(self.synth, retarget_factor=factor)

    @property
    def out_length(self) -> int:
        return int(round(self.train_length * self.synth.retarget_factor))


@dataclass
class RunManifest:
    config: dict
    seeds: dict
    files: list
    timings: dict
    version: str
    warnings: list
    status: str = "ok"

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _config_dict(cfg: ExperimentConfig) -> dict:
    return asdict(cfg)


def _report_row(report: EvalReport, cfg: ExperimentConfig) -> str:
    return ",".join(
        [
            cfg.process.kind,
            str(cfg.n_train),
            cfg.mode,
            repr(report.precision),
            repr(report.recall),
            str(report.k),
            str(report.m_real),
            str(report.m_fake),
            str(cfg.base_seed),
        ]
    )


def _write_report(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write(REPORT_COLUMNS + "\n")
        for row in rows:
            fh.write(row + "\n")


def _write_plotdata(plotdir: Path, synth: Dataset, gt: Dataset, max_lines: int = 20, max_cloud: int = 50):
    """Figure-style data: a few synthetic lines plus a real point cloud."""
    plotdir.mkdir(parents=True, exist_ok=True)
    lines = synth.series[: min(max_lines, len(synth))]
    t = lines[0].t
    lines_path = plotdir / "synthetic_lines.csv"
    with open(lines_path, "w") as fh:
        fh.write("t," + ",".join(f"s{i}" for i in range(len(lines))) + "\n")
        for j in range(len(t)):
            fh.write(repr(float(t[j])) + "," + ",".join(repr(float(s.values[j])) for s in lines) + "\n")
    cloud_path = plotdir / "ground_truth_points.csv"
    with open(cloud_path, "w") as fh:
        fh.write("series,t,value\n")
        for i, s in enumerate(gt.series[: min(max_cloud, len(gt))]):
            ts = s.t
            for j in range(len(ts)):
                fh.write(f"{i},{ts[j]!r},{s.values[j]!r}\n")
    return [str(lines_path), str(cloud_path)]


def ground_truth_spec(cfg: ExperimentConfig) -> ProcessSpec:
    """Process parameters for the comparison set at the output length.

    Reshuffling compares at the training length, so the spec is unchanged.
    Retargeting doubles the series length; under "extend" the horizon grows to
    (L_out - 1) * dt at the training sample spacing, under "same" the horizon
    stays put and the grid becomes finer.
    """
    if cfg.out_length == cfg.train_length or cfg.gt_horizon == "same":
        return cfg.process
    dt = cfg.process.horizon / (cfg.train_length - 1)
    return replace(cfg.process, horizon=dt * (cfg.out_length - 1))


def run_experiment(cfg: ExperimentConfig) -> tuple[EvalReport, RunManifest]:
    """Run one experiment cell and persist datasets, report, plot data, manifest."""
    from scalogen import __version__

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    warnings: list = []
    timings: dict = {}
    files: list = []
    seeds = {
        "base": cfg.base_seed,
        "ground_truth": mix_seed(cfg.base_seed, 0),
        "training": mix_seed(cfg.base_seed, 1),
        "job_rule": "mix_seed(base, 2, series_index, replicate_index)",
    }
    manifest = RunManifest(
        config=_config_dict(cfg),
        seeds=seeds,
        files=files,
        timings=timings,
        version=__version__,
        warnings=warnings,
    )

    per_series = cfg.total_synthetic // cfg.n_train
    if cfg.total_synthetic % cfg.n_train:
        per_series = max(1, round(cfg.total_synthetic / cfg.n_train))
        warnings.append(
            f"total_synthetic={cfg.total_synthetic} not divisible by n_train={cfg.n_train}; "
            f"using {per_series} per series ({per_series * cfg.n_train} total)"
        )
    total = per_series * cfg.n_train

    stage = "simulate"
    try:
        t0 = time.perf_counter()
        train = simulate_dataset(cfg.process, cfg.n_train, cfg.train_length, seeds["training"])
        gt_spec = ground_truth_spec(cfg)
        gt = simulate_dataset(gt_spec, cfg.ground_truth_count, cfg.out_length, seeds["ground_truth"])
        timings["simulate"] = time.perf_counter() - t0

        stage = "transform"
        t0 = time.perf_counter()
        train_coeffs = cwt_batch(train.matrix(), cfg.wavelet)
        targets = [
            normalize(Scalogram(coeffs=c, scales=cfg.wavelet.scales)) for c in train_coeffs
        ]
        timings["transform"] = time.perf_counter() - t0

        stage = "synthesize"
        t0 = time.perf_counter()
        job_targets = [targets[i] for i in range(cfg.n_train) for _ in range(per_series)]
        job_seeds = [
            mix_seed(cfg.base_seed, 2, i, j)
            for i in range(cfg.n_train)
            for j in range(per_series)
        ]
        synth_scalos = synthesize_batch(job_targets, cfg.synth, job_seeds)
        timings["synthesize"] = time.perf_counter() - t0

        stage = "invert"
        t0 = time.perf_counter()
        signed = np.stack(
            [s.coeffs * (s.norm.hi - s.norm.lo) + s.norm.lo for s in synth_scalos]
        )
        values = icwt_batch(signed, cfg.wavelet, cfg.out_length)
        gt_dt = gt.series[0].dt
        synth_ds = Dataset(
            series=[TimeSeries(values=v, dt=gt_dt) for v in values],
            label=f"synthetic:{cfg.process.label()}",
            seed=cfg.base_seed,
        )
        timings["invert"] = time.perf_counter() - t0

        stage = "evaluate"
        t0 = time.perf_counter()
        if total > cfg.k and cfg.ground_truth_count > cfg.k:
            report = precision_recall(
                FeatureSet(gt.matrix(), label="real"),
                FeatureSet(synth_ds.matrix(), label="fake"),
                k=cfg.k,
            )
        else:
            warnings.append(
                f"evaluation skipped: need more than k={cfg.k} vectors per set "
                f"(have {cfg.ground_truth_count} real, {total} fake)"
            )
            report = EvalReport(
                precision=float("nan"),
                recall=float("nan"),
                k=cfg.k,
                m_real=cfg.ground_truth_count,
                m_fake=total,
            )
        report.config = f"base_seed={cfg.base_seed}"
        timings["evaluate"] = time.perf_counter() - t0

        stage = "persist"
        t0 = time.perf_counter()
        for name, ds, kind in [
            ("training.csv", train, cfg.process.kind),
            ("ground_truth.csv", gt, gt_spec.kind),
            ("synthetic.csv", synth_ds, cfg.process.kind),
        ]:
            save_dataset(out_dir / name, ds, kind=kind)
            files.append(str(out_dir / name))
        report_path = out_dir / "report.csv"
        _write_report(report_path, [_report_row(report, cfg)])
        files.append(str(report_path))
        files.extend(_write_plotdata(out_dir / "plotdata", synth_ds, gt))
        timings["persist"] = time.perf_counter() - t0
    except Exception as err:
        manifest.status = f"failed at stage {stage}: {err}"
        manifest.save(out_dir / "manifest.json")
        raise RuntimeError(f"experiment stage {stage!r} failed: {err}") from err

    timings["total"] = sum(timings.values())
    files.append(str(out_dir / "manifest.json"))
    manifest.save(out_dir / "manifest.json")
    return report, manifest


def run_table(
    processes,
    n_values,
    mode: str,
    out_dir,
    base_seed: int = 0,
    total_synthetic: int = 5000,
    ground_truth_count: int = 5000,
    k: int = 3,
    wavelet: WaveletConfig | None = None,
    synth: SynthConfig | None = None,
    gt_horizon: str = "extend",
) -> dict:
    """Run the full grid of (process, n) cells and emit table CSVs.

    Returns {(process_kind, n): EvalReport}.  Every cell reuses the same base
    seed, so the ground truth is shared across n and smaller training sets are
    prefixes of larger ones.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results: dict = {}
    rows = []
    for spec in processes:
        for n in n_values:
            cell = ExperimentConfig(
                process=spec,
                n_train=n,
                mode=mode,
                total_synthetic=total_synthetic,
                ground_truth_count=ground_truth_count,
                wavelet=wavelet or WaveletConfig(),
                synth=synth or SynthConfig(),
                k=k,
                base_seed=base_seed,
                out_dir=str(out_dir / f"{spec.kind}_n{n}"),
                gt_horizon=gt_horizon,
            )
            report, _ = run_experiment(cell)
            results[(spec.kind, n)] = report
            rows.append(_report_row(report, cell))
    _write_report(out_dir / "table.csv", rows)
    with open(out_dir / "table_layout.csv", "w") as fh:
        fh.write("process,metric," + ",".join(f"n={n}" for n in n_values) + "\n")
        for spec in processes:
            for metric in ("precision", "recall"):
                vals = ",".join(f"{getattr(results[(spec.kind, n)], metric):.2f}" for n in n_values)
                fh.write(f"{spec.kind},{metric},{vals}\n")
    return results
