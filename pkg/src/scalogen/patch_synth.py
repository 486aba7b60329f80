"""Multi-scale patch-distribution matching on scalogram grids.

Synthesis follows the optimization-free patch-matching recipe: build a
time-axis pyramid of the target, start from the resized coarsest target plus
noise, and at every level repeatedly pull the multiset of synthesis patches
toward the target patches with sliced 1D optimal-transport displacements,
folding the moved patches back by overlap averaging.  When the output ladder
coincides with the native pyramid (reshuffling), level transitions reconcile
the upsampled canvas with the next target level by adding the new target
detail, so with zero steps and zero noise the ladder reproduces the target
bit for bit.  When retargeting changes the level widths, transitions are
plain upsampling and all fine structure comes from the patch matching, which
keeps the wider canvas free to rearrange content instead of tracking a
stretched copy of the target.

All heavy internals carry a leading batch axis so independent synthesis jobs
(the 5000/n replicates of one experiment) share vectorized numpy work; the
public single-job operations are thin wrappers over the same code path with
batch size 1, and per-job seeding makes results independent of how jobs are
grouped into batches.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .seeding import mix_seed
from .wavelet import Scalogram

_CHUNK = 64  # jobs vectorized together; bounds transient memory


@dataclass(frozen=True)
class SynthConfig:
    patch_size: int = 7
    stride: int = 1
    pyramid_ratio: float = 0.75
    min_width: int = 24
    num_projections: int = 64
    steps_per_level: int = 10
    noise_sigma: float = 0.05
    retarget_factor: float = 1.0

    def __post_init__(self):
        if self.patch_size < 2:
            raise ValueError("patch_size must be >= 2")
        if self.patch_size > self.min_width:
            raise ValueError("patch_size must not exceed min_width")
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if not 0.0 < self.pyramid_ratio < 1.0:
            raise ValueError("pyramid_ratio must be in (0, 1)")
        if self.num_projections < 1 or self.steps_per_level < 0:
            raise ValueError("num_projections >= 1 and steps_per_level >= 0 required")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be nonnegative")
        if not self.retarget_factor > 0:
            raise ValueError("retarget_factor must be positive")

    def canonical(self) -> str:
        """Stable key=value echo of every field, for output file headers."""
        return ",".join(f"{f.name}={getattr(self, f.name)!r}" for f in fields(self))


@dataclass
class Pyramid:
    """Target grid at progressively coarser time widths, coarsest first."""

    levels: list
    widths: list

    def __post_init__(self):
        if len(self.levels) != len(self.widths) or not self.levels:
            raise ValueError("levels and widths must be nonempty and aligned")
        if any(b <= a for a, b in zip(self.widths, self.widths[1:])):
            raise ValueError("widths must be strictly increasing")
        heights = {lv.shape[-2] for lv in self.levels}
        if len(heights) != 1:
            raise ValueError("all pyramid levels must share the same height")
        for lv, w in zip(self.levels, self.widths):
            if lv.shape[-1] != w:
                raise ValueError("level width does not match the widths vector")


@dataclass
class PatchSet:
    """Flattened overlapping patches plus the geometry to fold them back."""

    patches: np.ndarray
    grid_height: int
    grid_width: int
    p: int
    stride: int

    def __post_init__(self):
        self.patches = np.asarray(self.patches, dtype=float)
        ph = min(self.p, self.grid_height)
        nr, nc = _patch_grid(self.grid_height, self.grid_width, self.p, self.stride)
        want = (nr * nc, ph * self.p)
        if self.patches.shape != want:
            raise ValueError(f"patches shape {self.patches.shape} inconsistent with geometry {want}")


def _patch_grid(height: int, width: int, p: int, stride: int):
    """Number of patch offsets along each axis (height adapts when p > height)."""
    ph = min(p, height)
    if p > width:
        raise ValueError(f"patch width {p} exceeds grid width {width}")
    return (height - ph) // stride + 1, (width - p) // stride + 1


def resize_width(grid: np.ndarray, new_width: int) -> np.ndarray:
    """Resample the last axis to new_width.

    Upscaling is linear interpolation on the aligned-endpoint grid; downscaling
    is area averaging (antialiasing box filter).  Both are computed in an
    anchor-plus-residual form so constant inputs come back exactly.
    """
    grid = np.asarray(grid, dtype=float)
    w = grid.shape[-1]
    if new_width < 1:
        raise ValueError("new_width must be >= 1")
    if new_width == w:
        return grid.copy()
    if new_width > w:
        pos = np.linspace(0.0, w - 1.0, new_width)
        lo = np.floor(pos).astype(int)
        hi = np.minimum(lo + 1, w - 1)
        g = pos - lo
        base = grid[..., lo]
        return base + g * (grid[..., hi] - base)
    out = np.empty(grid.shape[:-1] + (new_width,))
    for j in range(new_width):
        e0 = j * w / new_width
        e1 = (j + 1) * w / new_width
        i0 = int(np.floor(e0))
        i1 = min(int(np.ceil(e1)), w)
        idx = np.arange(i0, i1)
        wts = np.minimum(idx + 1.0, e1) - np.maximum(idx, e0)
        seg = grid[..., i0:i1]
        anchor = grid[..., i0]
        out[..., j] = anchor + ((seg - anchor[..., None]) @ wts) / (e1 - e0)
    return out


def pyramid_widths(width: int, ratio: float, min_width: int) -> list:
    """Level widths round(W * ratio^j), largest j first, all >= min_width."""
    if width < min_width:
        raise ValueError(f"width {width} is below min_width {min_width}")
    ws = []
    j = 0
    while True:
        w = int(round(width * ratio**j))
        if w < min_width or (ws and w >= ws[-1]):
            break
        ws.append(w)
        j += 1
    return ws[::-1]


def build_pyramid(target: np.ndarray, cfg: SynthConfig) -> Pyramid:
    """Chain-downscale the target along time to the ladder of level widths."""
    target = np.asarray(target, dtype=float)
    widths = pyramid_widths(target.shape[-1], cfg.pyramid_ratio, cfg.min_width)
    levels = [target]
    for w in reversed(widths[:-1]):
        levels.append(resize_width(levels[-1], w))
    return Pyramid(levels=levels[::-1], widths=widths)


def _extract(grids: np.ndarray, p: int, stride: int) -> np.ndarray:
    """(B, S, W) -> (B, n_patches, patch_dim), row-major patch order."""
    B, S, W = grids.shape
    ph = min(p, S)
    nr, nc = _patch_grid(S, W, p, stride)
    win = sliding_window_view(grids, (ph, p), axis=(1, 2))[:, ::stride, ::stride]
    return win.reshape(B, nr * nc, ph * p)


def _fold(patches: np.ndarray, height: int, width: int, p: int, stride: int) -> np.ndarray:
    """Overlap-average patches back onto (B, height, width) grids.

    Each pixel is reconstructed as anchor + mean(deviation from anchor), where
    the anchor is one covering patch entry; when every covering patch agrees
    (as after _extract) the result is bit-identical to the source grid.
    """
    B = patches.shape[0]
    ph = min(p, height)
    nr, nc = _patch_grid(height, width, p, stride)
    if patches.shape[1] != nr * nc:
        raise ValueError("patch count inconsistent with fold geometry")
    P5 = patches.reshape(B, nr, nc, ph, p)
    rows = (np.arange(nr) * stride)[:, None]
    cols = (np.arange(nc) * stride)[None, :]
    anchor = np.zeros((B, height, width))
    count = np.zeros((height, width))
    for di in range(ph):
        for dj in range(p):
            anchor[:, rows + di, cols + dj] = P5[:, :, :, di, dj]
            count[rows + di, cols + dj] += 1.0
    if np.any(count == 0):
        raise ValueError("stride leaves uncovered pixels; cannot fold")
    acc = np.zeros((B, height, width))
    for di in range(ph):
        for dj in range(p):
            acc[:, rows + di, cols + dj] += P5[:, :, :, di, dj] - anchor[:, rows + di, cols + dj]
    return anchor + acc / count


def extract_patches(grid: np.ndarray, p: int, stride: int = 1) -> PatchSet:
    """All p-wide patches (height min(p, S)) at offsets that are multiples of stride."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 2:
        raise ValueError("extract_patches expects a 2D grid")
    patches = _extract(grid[None], p, stride)[0]
    return PatchSet(patches=patches, grid_height=grid.shape[0], grid_width=grid.shape[1], p=p, stride=stride)


def fold_patches(ps: PatchSet) -> np.ndarray:
    """Inverse of extract_patches by overlap averaging (exact round trip)."""
    return _fold(ps.patches[None], ps.grid_height, ps.grid_width, ps.p, ps.stride)[0]


def _directions(rng: np.random.Generator, dim: int, num: int) -> np.ndarray:
    """(dim, num) matrix of unit columns: normalized standard Gaussians."""
    u = rng.standard_normal((dim, num))
    n = np.sqrt(np.sum(u * u, axis=0))
    return u / np.maximum(n, 1e-300)


def _aligned_quantiles(sorted_vals: np.ndarray, k: int) -> np.ndarray:
    """Evaluate sorted empirical samples (last axis) at k equispaced quantiles.

    With k equal to the sample count this returns the input unchanged, so
    equal-size multisets compare and transport exactly.
    """
    n = sorted_vals.shape[-1]
    if k == n:
        return sorted_vals
    pos = np.linspace(0.0, n - 1.0, k)
    lo = np.floor(pos).astype(int)
    hi = np.minimum(lo + 1, n - 1)
    g = pos - lo
    base = sorted_vals[..., lo]
    return base + g * (sorted_vals[..., hi] - base)


def swd(a: PatchSet, b: PatchSet, num_projections: int, seed: int) -> float:
    """Sliced squared 2-Wasserstein distance between two patch multisets.

    Mean over seeded random unit directions of the mean squared difference
    between the two projected quantile functions, evaluated at
    max(len(a), len(b)) equispaced quantiles.
    """
    pa, pb = a.patches, b.patches
    if pa.shape[0] == 0 or pb.shape[0] == 0:
        raise ValueError("swd needs nonempty patch sets")
    if pa.shape[1] != pb.shape[1]:
        raise ValueError("patch dimensions differ")
    u = _directions(np.random.default_rng(seed), pa.shape[1], num_projections)
    qa = np.sort(pa @ u, axis=0).T
    qb = np.sort(pb @ u, axis=0).T
    k = max(pa.shape[0], pb.shape[0])
    diff = _aligned_quantiles(qa, k) - _aligned_quantiles(qb, k)
    return float(np.mean(diff * diff))


def _ot_update_core(ps: np.ndarray, pt: np.ndarray, u: np.ndarray) -> np.ndarray:
    """One sliced-OT displacement step for a batch of patch sets.

    ps: (B, N, d) synthesis patches; pt: (B, M, d) target patches;
    u: (B, d, P) unit directions.  For every direction, each synthesis patch
    ranked r among the projections moves by (target quantile at rank r of N)
    minus its own projection; displacements are averaged over directions.
    """
    B, N, d = ps.shape
    P = u.shape[-1]
    ut = u.transpose(0, 2, 1)
    proj_s = ut @ ps.transpose(0, 2, 1)
    proj_t = ut @ pt.transpose(0, 2, 1)
    order = np.argsort(proj_s, axis=-1)
    s_sorted = np.take_along_axis(proj_s, order, axis=-1)
    t_aligned = _aligned_quantiles(np.sort(proj_t, axis=-1), N)
    delta = np.empty_like(proj_s)
    np.put_along_axis(delta, order, t_aligned - s_sorted, axis=-1)
    return ps + (delta.transpose(0, 2, 1) @ ut) / P


def ot_patch_update(synth: PatchSet, target: PatchSet, num_projections: int, seed: int) -> PatchSet:
    """Move every synthesis patch by the average sliced-OT displacement."""
    if synth.patches.shape[0] == 0 or target.patches.shape[0] == 0:
        raise ValueError("ot_patch_update needs nonempty patch sets")
    if synth.patches.shape[1] != target.patches.shape[1]:
        raise ValueError("patch dimensions differ")
    u = _directions(np.random.default_rng(seed), synth.patches.shape[1], num_projections)
    moved = _ot_update_core(synth.patches[None], target.patches[None], u[None])[0]
    return PatchSet(
        patches=moved,
        grid_height=synth.grid_height,
        grid_width=synth.grid_width,
        p=synth.p,
        stride=synth.stride,
    )


def _synth_core(targets: np.ndarray, cfg: SynthConfig, seeds) -> np.ndarray:
    """Synthesize a batch of canvases from (B, S, W) normalized target grids.

    Per-job randomness: the coarse noise stream is seeded with
    mix_seed(seed, 0) and the direction stream of level k, step t with
    mix_seed(seed, 1 + k, t), so outputs do not depend on batch grouping.
    """
    B, S, W = targets.shape
    widths = pyramid_widths(W, cfg.pyramid_ratio, cfg.min_width)
    out_widths = [int(round(w * cfg.retarget_factor)) for w in widths]
    if out_widths[0] < cfg.patch_size:
        raise ValueError("retarget_factor shrinks the coarsest level below patch_size")
    inject_detail = out_widths == widths
    levels = [targets]
    for w in reversed(widths[:-1]):
        levels.append(resize_width(levels[-1], w))
    levels = levels[::-1]

    synth = resize_width(levels[0], out_widths[0])
    if cfg.noise_sigma > 0:
        for b, seed in enumerate(seeds):
            rng = np.random.default_rng(mix_seed(seed, 0))
            synth[b] += cfg.noise_sigma * rng.standard_normal(synth.shape[1:])

    p, stride = cfg.patch_size, cfg.stride
    for k in range(len(widths)):
        if k > 0:
            up = resize_width(synth, out_widths[k])
            if inject_detail:
                synth = (up - resize_width(levels[k - 1], widths[k])) + levels[k]
            else:
                synth = up
        if cfg.steps_per_level == 0:
            continue
        t_patches = _extract(levels[k], p, stride)
        for t in range(cfg.steps_per_level):
            u = np.stack(
                [
                    _directions(np.random.default_rng(mix_seed(seed, 1 + k, t)), min(p, S) * p, cfg.num_projections)
                    for seed in seeds
                ]
            )
            s_patches = _extract(synth, p, stride)
            moved = _ot_update_core(s_patches, t_patches, u)
            synth = _fold(moved, S, out_widths[k], p, stride)
            np.clip(synth, 0.0, 1.0, out=synth)
    np.clip(synth, 0.0, 1.0, out=synth)
    return synth


def synthesize(target: Scalogram, cfg: SynthConfig, seed: int) -> Scalogram:
    """Generate one scalogram patch-similar to the normalized target.

    Output width is round(W * retarget_factor); the target's normalization
    parameters are carried over so the result can be denormalized and
    inverted.  Deterministic in (target, cfg, seed).
    """
    return synthesize_batch([target], cfg, [seed])[0]


def synthesize_batch(targets, cfg: SynthConfig, seeds) -> list:
    """Synthesize many jobs at once; equivalent to mapping synthesize.

    All targets must be normalized and share the same shape.  Jobs are chunked
    so memory stays bounded; per-job seeding keeps results identical to the
    one-job-at-a-time path.
    """
    if len(targets) != len(seeds):
        raise ValueError("need one seed per target")
    if not targets:
        return []
    shapes = {t.coeffs.shape for t in targets}
    if len(shapes) != 1:
        raise ValueError("all targets in a batch must share the same shape")
    for t in targets:
        if t.norm is None:
            raise ValueError("synthesize expects normalized targets (norm present)")
    out = []
    for start in range(0, len(targets), _CHUNK):
        part = targets[start : start + _CHUNK]
        grids = np.stack([t.coeffs for t in part])
        res = _synth_core(grids, cfg, list(seeds[start : start + _CHUNK]))
        out.extend(
            Scalogram(coeffs=res[i], scales=part[i].scales, norm=part[i].norm)
            for i in range(len(part))
        )
    return out
