"""Forward and inverse continuous wavelet transform with a real Morlet.

The transform is materialized as a dense linear operator A (S*L rows, L
columns) stacking one symmetric Toeplitz block per scale, so the forward
transform is a matrix product and the inverse is a ridge-regularized least
squares solve through a cached SVD of A.  Dense materialization is cheap at
the lengths used here (L <= 1024) and keeps forward and inverse exactly
consistent with each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import toeplitz

from .processes import TimeSeries

DYADIC_SCALES = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0)


@dataclass(frozen=True)
class WaveletConfig:
    omega0: float = 5.0
    scales: tuple = DYADIC_SCALES
    kernel_truncation: float = 8.0
    ridge: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        if len(self.scales) == 0:
            raise ValueError("scales must be nonempty")
        if any(s <= 0 for s in self.scales):
            raise ValueError("scales must be positive")
        if any(b <= a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be strictly increasing")
        if not self.omega0 > 0:
            raise ValueError("omega0 must be positive")
        if not self.kernel_truncation > 0:
            raise ValueError("kernel_truncation must be positive")
        if self.ridge < 0:
            raise ValueError("ridge must be nonnegative")


@dataclass(frozen=True)
class NormParams:
    """Original min/max of the coefficients before the affine map to [0, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError("NormParams needs hi > lo")


@dataclass
class Scalogram:
    """Grid of signed wavelet coefficients, rows indexed by scale."""

    coeffs: np.ndarray
    scales: tuple
    norm: NormParams | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        self.scales = tuple(float(s) for s in self.scales)
        if c.ndim != 2 or c.shape[0] != len(self.scales):
            raise ValueError("coeffs must be an S x L matrix with S = len(scales)")
        if any(b <= a for a, b in zip(self.scales, self.scales[1:])):
            raise ValueError("scales must be strictly increasing")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeffs must be finite")
        if self.norm is not None and (c.min() < 0.0 or c.max() > 1.0):
            raise ValueError("normalized scalogram has coefficients outside [0, 1]")
        self.coeffs = c

    @property
    def shape(self):
        return self.coeffs.shape


def morlet_kernel(scale: float, cfg: WaveletConfig) -> np.ndarray:
    """Real Morlet psi_s(t) = exp(-(t/s)^2/2) cos(omega0 t/s) / sqrt(s).

    Sampled on the integer grid t in [-ceil(trunc*s), +ceil(trunc*s)].  The
    positive half is computed once and mirrored so the kernel is even about
    its center to the last bit.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    half = int(np.ceil(cfg.kernel_truncation * scale))
    t = np.arange(0, half + 1) / scale
    right = np.exp(-0.5 * t * t) * np.cos(cfg.omega0 * t) / np.sqrt(scale)
    return np.concatenate([right[:0:-1], right])


def operator_matrix(cfg: WaveletConfig, length: int) -> np.ndarray:
    """Dense forward operator: row block i maps x to its scale-s_i coefficients.

    Block i is the symmetric Toeplitz matrix T[j, k] = psi_{s_i}(k - j) with
    the kernel truncated to the in-signal lags (zero padding outside the
    signal contributes nothing).  Cached per (kernel parameters, length);
    ridge is not part of the key because it only affects the inverse filter.
    """
    return _operator(cfg.omega0, cfg.scales, cfg.kernel_truncation, length)


@lru_cache(maxsize=8)
def _operator(omega0: float, scales: tuple, trunc: float, length: int) -> np.ndarray:
    cfg = WaveletConfig(omega0=omega0, scales=scales, kernel_truncation=trunc)
    blocks = []
    for s in cfg.scales:
        kern = morlet_kernel(s, cfg)
        half = kern.size // 2
        col = np.zeros(length)
        m = min(half, length - 1)
        col[: m + 1] = kern[half : half + m + 1]
        blocks.append(toeplitz(col))
    out = np.vstack(blocks)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _operator_svd(omega0: float, scales: tuple, trunc: float, length: int):
    """Economy SVD of the forward operator, shared by every icwt call."""
    u, s, vt = np.linalg.svd(_operator(omega0, scales, trunc, length), full_matrices=False)
    u.setflags(write=False)
    s.setflags(write=False)
    vt.setflags(write=False)
    return u, s, vt


def cwt(series: TimeSeries, cfg: WaveletConfig | None = None) -> Scalogram:
    """Forward transform: coeffs[i, j] = sum_k x[k] psi_{s_i}(k - j)."""
    cfg = cfg or WaveletConfig()
    x = np.asarray(series.values, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("cwt input must be finite")
    A = operator_matrix(cfg, x.size)
    return Scalogram(coeffs=(A @ x).reshape(len(cfg.scales), x.size), scales=cfg.scales)


def cwt_batch(values: np.ndarray, cfg: WaveletConfig | None = None) -> np.ndarray:
    """Forward transform of an (n, L) stack of series, returned as (n, S, L)."""
    cfg = cfg or WaveletConfig()
    X = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ValueError("cwt input must be finite")
    n, L = X.shape
    A = operator_matrix(cfg, L)
    return np.ascontiguousarray((A @ X.T).T.reshape(n, len(cfg.scales), L))


def normalize(sc: Scalogram) -> Scalogram:
    """Affine-map the full grid to [0, 1] and record the original range."""
    if sc.norm is not None:
        raise ValueError("scalogram is already normalized")
    lo = float(sc.coeffs.min())
    hi = float(sc.coeffs.max())
    if not hi > lo:
        raise ValueError("cannot normalize a constant scalogram (hi == lo)")
    return Scalogram(coeffs=(sc.coeffs - lo) / (hi - lo), scales=sc.scales, norm=NormParams(lo, hi))


def denormalize(sc: Scalogram) -> Scalogram:
    """Invert normalize using the recorded range; clears the norm record."""
    if sc.norm is None:
        raise ValueError("scalogram has no normalization to invert")
    c = sc.coeffs * (sc.norm.hi - sc.norm.lo) + sc.norm.lo
    return Scalogram(coeffs=c, scales=sc.scales, norm=None)


def icwt(sc: Scalogram, target_length: int, cfg: WaveletConfig | None = None) -> TimeSeries:
    """Least-squares inverse: argmin_x ||A x - vec(sc)||^2 + ridge ||x||^2.

    Solved through the cached SVD of A; with ridge = 0 this is the plain
    pseudo-inverse.  The returned series has dt = 1 because a scalogram does
    not carry sample spacing; callers that know the spacing rewrap the values.
    """
    cfg = cfg or WaveletConfig()
    if sc.norm is not None:
        raise ValueError("icwt expects signed coefficients; denormalize first")
    x = icwt_batch(sc.coeffs[None], cfg, target_length)[0]
    if not np.all(np.isfinite(x)):
        raise ValueError("inverse transform produced non-finite values")
    return TimeSeries(values=x, dt=1.0)


def icwt_batch(coeff_stack: np.ndarray, cfg: WaveletConfig, target_length: int) -> np.ndarray:
    """Invert an (n, S, L) stack of signed-coefficient grids to (n, L) series."""
    C = np.asarray(coeff_stack, dtype=float)
    n, S, L = C.shape
    if S != len(cfg.scales) or L != target_length:
        raise ValueError(
            f"coefficient grid is {S}x{L}, expected {len(cfg.scales)}x{target_length}"
        )
    u, s, vt = _operator_svd(cfg.omega0, cfg.scales, cfg.kernel_truncation, L)
    filt = s / (s * s + cfg.ridge)
    Y = C.reshape(n, S * L)
    return (vt.T @ (filt[:, None] * (u.T @ Y.T))).T


def scalogram_header(sc: Scalogram, extra: str = "") -> str:
    scales = ",".join(f"{s:g}" for s in sc.scales)
    head = f"# scales={scales} L={sc.coeffs.shape[1]}"
    if sc.norm is not None:
        head += f" norm_lo={sc.norm.lo!r} norm_hi={sc.norm.hi!r}"
    if extra:
        head += " " + extra
    return head


def save_scalogram(path, sc: Scalogram, extra: str = "") -> None:
    """Write a scalogram CSV: one header comment, then S rows of L decimals.

    `extra` lets callers append further `key=value` tokens (synthesis records
    its config and seed this way).
    """
    with open(path, "w") as fh:
        fh.write(scalogram_header(sc, extra) + "\n")
        for row in sc.coeffs:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_scalogram(path) -> Scalogram:
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing scalogram header line")
        meta = dict(tok.split("=", 1) for tok in header[1:].split() if "=" in tok)
        scales = tuple(float(s) for s in meta["scales"].split(","))
        rows = [np.array(line.strip().split(","), dtype=float) for line in fh if line.strip()]
    coeffs = np.stack(rows)
    norm = None
    if "norm_lo" in meta:
        norm = NormParams(lo=float(meta["norm_lo"]), hi=float(meta["norm_hi"]))
    sc = Scalogram(coeffs=coeffs, scales=scales, norm=norm)
    if coeffs.shape[1] != int(meta["L"]):
        raise ValueError(f"{path}: header L={meta['L']} but rows have {coeffs.shape[1]} columns")
    return sc

