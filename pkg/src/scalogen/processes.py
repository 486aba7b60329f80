"""Simulators for the three ground-truth processes and dataset assembly.

All paths live on the uniform grid t_i = i * T / (L - 1), i = 0..L-1, so the
horizon endpoint is an actual sample.  Declared parameter defaults (the
source experiments state none): horizon T = 1, volatility sigma = 1, bridge
terminal 0, drift mu = 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .seeding import mix_seed

WIENER = "WienerProcess"
BRIDGE = "BrownianBridge"
DRIFTED = "DriftedBrownianMotion"
KINDS = (WIENER, BRIDGE, DRIFTED)

# short CLI aliases -> canonical kind
ALIASES = {
    "wiener": WIENER,
    "bridge": BRIDGE,
    "dbm": DRIFTED,
    WIENER.lower(): WIENER,
    BRIDGE.lower(): BRIDGE,
    DRIFTED.lower(): DRIFTED,
}


def resolve_kind(name: str) -> str:
    key = name.strip().lower()
    if key not in ALIASES:
        raise ValueError(f"unknown process kind {name!r}; expected one of {sorted(set(ALIASES))}")
    return ALIASES[key]


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real-valued sequence."""

    values: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("TimeSeries needs a 1D value vector of length >= 2")
        if not np.all(np.isfinite(v)):
            raise ValueError("TimeSeries values must be finite")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)


@dataclass(frozen=True)
class ProcessSpec:
    """Parameters of one simulated process.

    drift is used by DriftedBrownianMotion only and terminal by BrownianBridge
    only; the unused fields are ignored by the other kinds.
    """

    kind: str
    drift: float = 2.0
    volatility: float = 1.0
    terminal: float = 0.0
    horizon: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown process kind {self.kind!r}")
        if not self.volatility > 0:
            raise ValueError("volatility must be positive")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")

    def label(self) -> str:
        if self.kind == BRIDGE:
            params = f"terminal={self.terminal:g} sigma={self.volatility:g} T={self.horizon:g}"
        elif self.kind == DRIFTED:
            params = f"mu={self.drift:g} sigma={self.volatility:g} T={self.horizon:g}"
        else:
            params = f"sigma={self.volatility:g} T={self.horizon:g}"
        return f"{self.kind}({params})"


@dataclass
class Dataset:
    """Bundle of equally shaped series from one simulation sweep."""

    series: list = field(default_factory=list)
    label: str = ""
    seed: int = 0

    def __post_init__(self):
        if self.series:
            L = len(self.series[0])
            dt = self.series[0].dt
            for s in self.series:
                if len(s) != L or s.dt != dt:
                    raise ValueError("all series in a Dataset must share length and dt")

    def __len__(self) -> int:
        return len(self.series)

    def matrix(self) -> np.ndarray:
        """Stack values into an (n, L) array."""
        return np.stack([s.values for s in self.series])


def simulate(spec: ProcessSpec, length: int, seed: int) -> TimeSeries:
    """Sample one path of the given process on L points covering [0, T].

    Wiener: W_0 = 0, independent Gaussian increments of variance sigma^2*dt.
    Drifted Brownian motion: X_t = mu*t + sigma*W_t on the same Gaussian
    stream as the plain Wiener path.  Bridge: B_t = W_t - (t/T)(W_T - b),
    which hits B_0 = 0 and B_T = b exactly.
    """
    if length < 2:
        raise ValueError("length must be >= 2")
    L = int(length)
    T = spec.horizon
    dt = T / (L - 1)
    rng = np.random.default_rng(seed)
    increments = spec.volatility * np.sqrt(dt) * rng.standard_normal(L - 1)
    w = np.concatenate([[0.0], np.cumsum(increments)])
    frac = np.arange(L) / (L - 1)  # = t/T, exactly 1 at the endpoint
    if spec.kind == WIENER:
        values = w
    elif spec.kind == BRIDGE:
        # grouped so the endpoint is b + (W_T - W_T) = b with no rounding
        values = (w - frac * w[-1]) + frac * spec.terminal
    else:
        values = spec.drift * (frac * T) + w
    return TimeSeries(values=values, dt=dt)


def simulate_dataset(spec: ProcessSpec, count: int, length: int, seed: int) -> Dataset:
    """Simulate `count` independent paths with per-path seeds mix_seed(seed, i)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    series = [simulate(spec, length, mix_seed(seed, i)) for i in range(count)]
    return Dataset(series=series, label=spec.label(), seed=int(seed))


def save_dataset(path, ds: Dataset, kind: str = "") -> None:
    """Write a dataset CSV: header comment, then one row of values per series.

    Values are written with shortest round-trip precision so reading the file
    back reproduces the floats bit-for-bit.
    """
    n = len(ds)
    L = len(ds.series[0])
    dt = ds.series[0].dt
    kind = kind or ds.label.split("(")[0]
    with open(path, "w") as fh:
        fh.write(f"# kind={kind} n={n} L={L} dt={dt!r} seed={ds.seed}\n")
        for s in ds.series:
            fh.write(",".join(repr(float(v)) for v in s.values) + "\n")


def load_dataset(path) -> Dataset:
    """Read a dataset CSV written by save_dataset."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing dataset header line")
        meta = dict(tok.split("=", 1) for tok in header[1:].split())
        dt = float(meta["dt"])
        seed = int(meta.get("seed", 0))
        series = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            vals = np.array(line.split(","), dtype=float)
            series.append(TimeSeries(values=vals, dt=dt))
    if len(series) != int(meta["n"]):
        raise ValueError(f"{path}: header says n={meta['n']} but found {len(series)} rows")
    return Dataset(series=series, label=meta.get("kind", ""), seed=seed)
